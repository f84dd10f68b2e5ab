//! Counting sequences: symbolic forms derived from set structure, checked
//! against enumeration, plus densities, totients and window counts.

mod density;
mod window;

use num_integer::Integer;
use num_traits::Signed;
use rayon::prelude::*;

use crate::funexpr::simplify::{as_poly, from_poly, simplify};
use crate::funexpr::{tables, FnForm, Table};
use crate::setexpr::{canonicalize, SetError, SetExpr, Q};

pub use density::{density_sequence, DensitySeq, DyadicWindow};
pub use window::window_counts;

/// One step of a derivation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Inversion,
    InclusionExclusion,
    Complement,
    Difference,
    Tabulated,
    FiniteSum,
    Shift,
    Scale,
    Composition,
    Identity,
}

#[derive(Clone, Debug)]
pub struct CountingForm {
    /// canonical form of the counted set
    pub set: SetExpr,
    /// enumeration the count is taken over; `None` means N
    pub within: Option<SetExpr>,
    pub symbolic: Option<FnForm>,
    pub provenance: Vec<Provenance>,
}

/// First index where the symbolic form and the oracle disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub n: i64,
    pub expected: u64,
    pub got: Option<i64>,
}

impl CountingForm {
    pub fn is_symbolic(&self) -> bool {
        self.symbolic.is_some()
    }

    /// Ground-truth prefix counts; entry 0 is 0.
    pub fn oracle(&self, upto: i64) -> Result<Vec<u64>, SetError> {
        match &self.within {
            None => self.set.prefix_counts(upto),
            Some(a) => {
                let elems = first_elements(a, upto as usize)?;
                let mut out = vec![0u64];
                let mut c = 0;
                for x in elems {
                    c += self.set.contains_int(x) as u64;
                    out.push(c);
                }
                Ok(out)
            }
        }
    }

    pub fn eval(&self, n: i64) -> Option<i64> {
        self.symbolic.as_ref()?.eval_int(n).ok()
    }

    /// Compares the symbolic form with the oracle for n <= depth.
    pub fn check(&self, depth: i64) -> Result<(), Mismatch> {
        let Some(f) = &self.symbolic else { return Ok(()) };
        let truth = self.oracle(depth).map_err(|_| Mismatch { n: 0, expected: 0, got: None })?;
        let bad = (1..depth + 1)
            .into_par_iter()
            .find_first(|&n| f.eval_int(n).ok() != Some(truth[n as usize] as i64));
        match bad {
            None => Ok(()),
            Some(n) => Err(Mismatch { n, expected: truth[n as usize], got: f.eval_int(n).ok() }),
        }
    }
}

/// The first `count` elements of a subset of N in increasing order.
pub fn first_elements(a: &SetExpr, count: usize) -> Result<Vec<i64>, SetError> {
    if !a.is_nat_subset() {
        return Err(SetError::UnsupportedEnumeration(format!("{a} is not a set of naturals")));
    }
    if let Some(f) = a.defining_fn() {
        let v: Option<Vec<i64>> = (1..=count as i64).map(|j| f.eval_int(j).ok()).collect();
        if let Some(v) = v {
            return Ok(v);
        }
    }
    let mut out = Vec::with_capacity(count);
    let mut x = 0i64;
    let cap = 1i64 << 40;
    while out.len() < count {
        x += 1;
        if x > cap {
            return Err(SetError::UnsupportedEnumeration(format!("{a} too sparse to enumerate")));
        }
        if a.contains_int(x) {
            out.push(x);
        }
    }
    Ok(out)
}

pub fn derive_counting(e: &SetExpr) -> CountingForm {
    let set = canonicalize(e);
    let mut trace = Vec::new();
    let symbolic = kappa(&set, &mut trace).map(|f| tidy(&f));
    if symbolic.is_none() {
        trace.clear();
    }
    CountingForm { set, within: None, symbolic, provenance: trace }
}

/// Counting sequence of `b` along the enumeration of `a`: the number of
/// the first n elements of `a` lying in `b`.
pub fn relative_counting(b: &SetExpr, a: &SetExpr) -> CountingForm {
    let ca = canonicalize(a);
    let set = canonicalize(&b.clone().inter(a.clone()));
    if set == ca {
        return CountingForm { set, within: Some(ca), symbolic: Some(FnForm::Var), provenance: vec![Provenance::Identity] };
    }
    let inner = derive_counting(&set);
    let mut trace = inner.provenance.clone();
    let symbolic = match (&inner.symbolic, ca.defining_fn()) {
        (Some(k), Some(def)) => {
            trace.push(Provenance::Composition);
            Some(tidy(&k.compose(&def)))
        }
        _ => None,
    };
    if symbolic.is_none() {
        trace.clear();
    }
    CountingForm { set, within: Some(ca), symbolic, provenance: trace }
}

/// floor(p + c) = p + floor(c) when p has integer coefficients and
/// non-negative integer exponents.
fn floor_of_int_poly(f: &FnForm) -> Option<FnForm> {
    let mut p = as_poly(f)?;
    let zero = crate::surnat::Exp::from(0);
    let c = p.remove(&zero).map(|c| c.as_rational()).unwrap_or(Some(crate::scalar::int(0)))?;
    let ok = p.iter().all(|(e, c)| {
        e.is_integer() && !e.is_negative() && c.as_rational().is_some_and(|q| crate::scalar::is_int(&q))
    });
    ok.then(|| simplify(&from_poly(&p).add(FnForm::rat(c.floor()))))
}

/// c·n^(p/k) with c^k rational, rewritten as (c^k·n^p)^(1/k) so that the
/// radicand stays rational and exact floors can be certified.
fn radical_monomial(f: &FnForm) -> Option<FnForm> {
    let p = as_poly(f)?;
    if p.len() != 1 {
        return None;
    }
    let (e, c) = p.iter().next()?;
    let k = *e.denom();
    if k == 1 {
        return None;
    }
    let ck = c.pow(crate::surnat::Exp::from(k))?.as_rational()?;
    let inner = simplify(&FnForm::rat(ck).mul(FnForm::Var.pow(crate::surnat::Exp::from(*e.numer()))));
    Some(inner.pow(crate::surnat::Exp::new(1, k)))
}

/// Cosmetic normalisation valid on n >= 1.
pub fn tidy(f: &FnForm) -> FnForm {
    use FnForm::*;
    let t = |x: &FnForm| Box::new(tidy(x));
    let g = match f {
        Floor(a) => {
            let x = simplify(&tidy(a));
            if let Some(y) = floor_of_int_poly(&x) {
                return y;
            }
            if let Some(y) = radical_monomial(&x) {
                return Floor(Box::new(y));
            }
            Floor(Box::new(x))
        }
        From { at, arg, body } if *at <= 1 && **arg == Var => return tidy(body),
        Add(a, b) => Add(t(a), t(b)),
        Sub(a, b) => Sub(t(a), t(b)),
        Mul(a, b) => Mul(t(a), t(b)),
        Div(a, b) => Div(t(a), t(b)),
        Neg(a) => Neg(t(a)),
        From { at, arg, body } => From { at: *at, arg: t(arg), body: t(body) },
        Table(k, a) => Table(*k, t(a)),
        _ => f.clone(),
    };
    simplify(&g)
}

/// Wraps `body` in a threshold when it is not already zero for arguments
/// in `lo..1`.
fn guard(at: i64, arg: FnForm, body: FnForm, lo: i64) -> FnForm {
    let clean = (lo..at.min(lo + 4096)).all(|x| body.eval_int(x) == Ok(0)) && at - lo <= 4096;
    if clean {
        body
    } else {
        FnForm::from_at(at, arg, body)
    }
}

fn rat_fn(q: Q) -> FnForm {
    FnForm::rat(crate::scalar::rat(*q.numer(), *q.denom()))
}

fn kappa(e: &SetExpr, trace: &mut Vec<Provenance>) -> Option<FnForm> {
    use SetExpr::*;
    let f = match e {
        N => {
            trace.push(Provenance::Inversion);
            FnForm::Var
        }
        HalfN => {
            trace.push(Provenance::Scale);
            FnForm::int(2).mul(FnForm::Var)
        }
        Primes => {
            trace.push(Provenance::Tabulated);
            FnForm::table(Table::PrimePi, FnForm::Var)
        }
        Fib => {
            trace.push(Provenance::Inversion);
            FnForm::parse("floor(log(phi, sqrt(5)*(n + 1/2))) - 1").ok()?
        }
        Finite(v) => {
            trace.push(Provenance::FiniteSum);
            v.iter()
                .filter(|q| q.is_positive())
                .map(|q| FnForm::from_at(q.ceil().to_integer(), FnForm::Var, FnForm::int(1)))
                .reduce(FnForm::add)
                .unwrap_or_else(|| FnForm::int(0))
        }
        Arith { .. } | Power(_) | Poly(_) | Tri | Geom { .. } => {
            let def = e.defining_fn()?;
            let inv = def.invert().ok()?;
            let first = def.eval_int(1).ok()?;
            trace.push(Provenance::Inversion);
            guard(first, FnForm::Var, inv.floor(), 1)
        }
        Union(a, b) => {
            trace.push(Provenance::InclusionExclusion);
            let s = kappa(a, trace)?.add(kappa(b, trace)?);
            let both = canonicalize(&Inter(a.clone(), b.clone()));
            if both.is_empty_literal() {
                s
            } else {
                s.sub(kappa(&both, trace)?)
            }
        }
        Diff(a, b) if **a == N => {
            trace.push(Provenance::Complement);
            FnForm::Var.sub(kappa(b, trace)?)
        }
        Diff(a, b) => {
            trace.push(Provenance::Difference);
            let both = canonicalize(&Inter(a.clone(), b.clone()));
            let ka = kappa(a, trace)?;
            if both.is_empty_literal() {
                ka
            } else {
                ka.sub(kappa(&both, trace)?)
            }
        }
        Shift(a, r) if a.is_nat_subset() => {
            trace.push(Provenance::Shift);
            let ka = kappa(a, trace)?;
            let arg = FnForm::Var.sub(rat_fn(*r)).floor();
            let body = ka.compose(&simplify(&arg));
            let lo = (Q::from_integer(1) - r).floor().to_integer().min(1);
            let shifted = guard(1, simplify(&FnForm::Var.sub(rat_fn(*r))), body, lo);
            let below = (-r).floor().to_integer();
            if below >= 1 {
                let c = a.prefix_counts(below).ok()?[below as usize];
                shifted.sub(FnForm::int(c as i64))
            } else {
                shifted
            }
        }
        Scale(a, r) if a.is_nat_subset() && r.is_positive() => {
            trace.push(Provenance::Scale);
            let ka = kappa(a, trace)?;
            let arg = simplify(&FnForm::Var.div(rat_fn(*r)));
            let body = ka.compose(&arg.clone().floor());
            let lo = (Q::from_integer(1) / r).floor().to_integer().min(1);
            guard(1, arg, body, lo)
        }
        _ => return None,
    };
    Some(f)
}

/// Euler's phi by trial factorisation.
pub fn totient_phi(n: u64) -> u64 {
    let (mut m, mut out, mut p) = (n, n, 2u64);
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if m > 1 {
        out -= out / m;
    }
    out
}

/// Φ(n) = Σ_{k≤n} φ(k), the number of reduced fractions in (0, 1].
pub fn totient_sum(n: u64) -> u64 {
    tables::totient_sum(n).unwrap_or_else(|| (1..=n).map(totient_phi).sum())
}

/// gcd-based count of reduced fractions m/l with l <= n, m <= k*l; used as
/// an independent check of totient-based band counts.
pub fn reduced_pairs_upto(n: u64, k: u64) -> u64 {
    (1..=n).map(|l| (1..=k * l).filter(|m| m.gcd(&l) == 1).count() as u64).sum()
}

pub fn is_zero_form(f: &FnForm) -> bool {
    matches!(f, FnForm::Const(c) if c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kappa_of(s: &str) -> String {
        derive_counting(&SetExpr::parse(s).unwrap()).symbolic.map(|f| f.render()).unwrap_or_default()
    }

    #[test]
    fn table_forms() {
        assert_eq!(kappa_of("N"), "n");
        assert_eq!(kappa_of("2N"), "floor(n/2)");
        assert_eq!(kappa_of("2N-1"), "floor(n/2 + 1/2)");
        assert_eq!(kappa_of("2N+1"), "floor(n/2 - 1/2)");
        assert_eq!(kappa_of("N^(2)"), "floor(sqrt(n))");
        assert_eq!(kappa_of("3N u 4N"), "floor(n/3) + floor(n/4) - floor(n/12)");
        assert_eq!(kappa_of("N \\ {1}"), "n - 1");
        assert_eq!(kappa_of("primes"), "pi(n)");
        assert_eq!(kappa_of("od2"), "");
    }

    #[test]
    fn forms_agree_with_enumeration() {
        for s in [
            "2N", "7N+3", "2N+5", "N^(2)", "N^(3)", "tri", "geom(1,2)", "geom(3,3)", "fib", "3N u 4N",
            "N \\ 2N", "N \\ N^(2)", "{2,5}", "N + 1/2", "N - 1/2", "halfN", "N + 3", "N * 3", "N^(2) u N^(3)",
            "poly(1,-4,4)", "primes", "2N \\ 6N",
        ] {
            let c = derive_counting(&SetExpr::parse(s).unwrap());
            assert!(c.is_symbolic(), "{s}");
            if c.set.is_nat_subset() {
                assert_eq!(c.check(3000), Ok(()), "{s}: {}", c.symbolic.unwrap().render());
            }
        }
    }

    #[test]
    fn relative_forms() {
        let r = |b: &str, a: &str| relative_counting(&SetExpr::parse(b).unwrap(), &SetExpr::parse(a).unwrap());
        let c = r("N^(2)", "2N");
        assert_eq!(c.symbolic.as_ref().unwrap().render(), "floor(sqrt(n/2))");
        assert_eq!(c.check(2000), Ok(()));
        let c = r("2N", "N^(2)");
        assert_eq!(c.symbolic.as_ref().unwrap().render(), "floor(n/2)");
        assert_eq!(c.check(2000), Ok(()));
        assert_eq!(r("3N", "3N").symbolic, Some(FnForm::Var));
        assert_eq!(r("2N-1", "2N").symbolic.unwrap().render(), "0");
    }

    #[test]
    fn totients() {
        let phis: Vec<u64> = (1..=12).map(totient_phi).collect();
        assert_eq!(phis, vec![1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]);
        assert_eq!(totient_sum(12), 46);
        assert_eq!(totient_sum(1), 1);
        assert_eq!(reduced_pairs_upto(12, 1), 46);
    }
}
