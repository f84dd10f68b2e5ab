//! Generalised polynomials in the variable: sums of c * n^r with rational r.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::parse::{mk_add, mk_div, mk_mul, mk_neg, mk_sub};
use super::FnForm;
use crate::surnat::{ExactConst, Exp as Ex};

/// exponent -> coefficient, zero coefficients removed
pub type Poly = BTreeMap<Ex, ExactConst>;

fn poly_add(a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    for (e, c) in b {
        let v = out.get(e).map_or_else(|| c.clone(), |x| x.add(c));
        if v.is_zero() {
            out.remove(e);
        } else {
            out.insert(*e, v);
        }
    }
    out
}

fn poly_scale(a: &Poly, s: &ExactConst) -> Poly {
    a.iter().map(|(e, c)| (*e, c.mul(s))).filter(|(_, c)| !c.is_zero()).collect()
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (e1, c1) in a {
        for (e2, c2) in b {
            out = poly_add(&out, &Poly::from([(*e1 + *e2, c1.mul(c2))]));
        }
    }
    out
}

fn constant(p: &Poly) -> Option<ExactConst> {
    match p.len() {
        0 => Some(ExactConst::zero()),
        1 => p.get(&Ex::zero()).cloned(),
        _ => None,
    }
}

/// Polynomial form of `f`, if it has one.
pub fn as_poly(f: &FnForm) -> Option<Poly> {
    use FnForm::*;
    match f {
        Const(c) => Some(if c.is_zero() { Poly::new() } else { Poly::from([(Ex::zero(), c.clone())]) }),
        Var => Some(Poly::from([(Ex::one(), ExactConst::from_int(1))])),
        Add(a, b) => Some(poly_add(&as_poly(a)?, &as_poly(b)?)),
        Sub(a, b) => Some(poly_add(&as_poly(a)?, &poly_scale(&as_poly(b)?, &ExactConst::from_int(-1)))),
        Neg(a) => Some(poly_scale(&as_poly(a)?, &ExactConst::from_int(-1))),
        Mul(a, b) => Some(poly_mul(&as_poly(a)?, &as_poly(b)?)),
        Div(a, b) => {
            let d = as_poly(b)?;
            let pa = as_poly(a)?;
            if let Some(c) = constant(&d) {
                return Some(poly_scale(&pa, &c.recip()?));
            }
            let (e, c) = single(&d)?;
            let inv = Poly::from([(-e, c.recip()?)]);
            Some(poly_mul(&pa, &inv))
        }
        Pow(a, r) => {
            let p = as_poly(a)?;
            if r.is_integer() && *r.numer() >= 0 {
                let mut acc = Poly::from([(Ex::zero(), ExactConst::from_int(1))]);
                for _ in 0..*r.numer() {
                    acc = poly_mul(&acc, &p);
                }
                return Some(acc);
            }
            let (e, c) = single(&p)?;
            Some(Poly::from([(e * *r, c.pow(*r)?)]))
        }
        _ => None,
    }
}

fn single(p: &Poly) -> Option<(Ex, ExactConst)> {
    if p.len() == 1 {
        p.iter().next().map(|(e, c)| (*e, c.clone()))
    } else {
        None
    }
}

/// Canonical form of a polynomial, highest power first.
pub fn from_poly(p: &Poly) -> FnForm {
    let mut out: Option<FnForm> = None;
    for (e, c) in p.iter().rev() {
        let basis = if e.is_zero() {
            None
        } else if e.is_one() {
            Some(FnForm::Var)
        } else {
            Some(FnForm::Var.pow(*e))
        };
        let neg = c.single().is_some() && c.sign() == Some(std::cmp::Ordering::Less);
        let mag = if neg { c.neg() } else { c.clone() };
        let term = match basis {
            None => FnForm::Const(mag),
            Some(b) => term_with(&mag, b),
        };
        out = Some(match out {
            None if neg => mk_neg(term),
            None => term,
            Some(acc) if neg => mk_sub(acc, term),
            Some(acc) => mk_add(acc, term),
        });
    }
    out.unwrap_or_else(|| FnForm::int(0))
}

/// c * basis, written as basis/k for c = 1/k.
fn term_with(c: &ExactConst, basis: FnForm) -> FnForm {
    if let Some(q) = c.as_rational() {
        if q.is_one() {
            return basis;
        }
        if q.numer().is_one() {
            return mk_div(basis, FnForm::rat(q.denom().clone().into()));
        }
        if !q.denom().is_one() {
            return mk_div(mk_mul(FnForm::rat(q.numer().clone().into()), basis), FnForm::rat(q.denom().clone().into()));
        }
    }
    mk_mul(FnForm::Const(c.clone()), basis)
}

/// Normalise polynomial subterms; other nodes are kept with simplified
/// children.
pub fn simplify(f: &FnForm) -> FnForm {
    use FnForm::*;
    if let Some(p) = as_poly(f) {
        return from_poly(&p);
    }
    let s = |x: &FnForm| Box::new(simplify(x));
    match f {
        Add(a, b) => Add(s(a), s(b)),
        Sub(a, b) => Sub(s(a), s(b)),
        Mul(a, b) => Mul(s(a), s(b)),
        Div(a, b) => Div(s(a), s(b)),
        Neg(a) => Neg(s(a)),
        Pow(a, r) => Pow(s(a), *r),
        Exp(c, a) => Exp(c.clone(), s(a)),
        Log(c, a) => Log(c.clone(), s(a)),
        Floor(a) => Floor(s(a)),
        Round(a) => Round(s(a)),
        Max(a, b) => Max(s(a), s(b)),
        From { at, arg, body } => From { at: *at, arg: s(arg), body: s(body) },
        Table(t, a) => Table(*t, s(a)),
        Const(_) | Var => f.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simp(s: &str) -> String {
        simplify(&FnForm::parse(s).unwrap()).render()
    }

    #[test]
    fn normal_forms() {
        assert_eq!(simp("n - (n - 1)"), "1");
        assert_eq!(simp("(n+1)^2 - 1"), "n^2 + 2*n");
        assert_eq!(simp("n*(n+1)/2"), "n^2/2 + n/2");
        assert_eq!(simp("floor((2*n - 2)/4)"), "floor(n/2 - 1/2)");
        assert_eq!(simp("3 - n"), "-n + 3");
        assert_eq!(simp("sqrt(4*n^2)"), "2*n");
    }

    #[test]
    fn poly_detection() {
        assert!(as_poly(&FnForm::parse("n^(1/3)*n").unwrap()).is_some());
        assert!(as_poly(&FnForm::parse("floor(n)").unwrap()).is_none());
        assert!(as_poly(&FnForm::parse("n/(n+1)").unwrap()).is_none());
    }
}
