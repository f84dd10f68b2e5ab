//! Genetic form: the earliest-born surnatural strictly between the magnums
//! of older subsets and older supersets.

use std::sync::OnceLock;

use num_rational::BigRational;

use super::MagnumError;
use crate::setexpr::{canonicalize, Periodic, SetExpr};
use crate::surnat::{Birthday, Comparison, Day, Key, SurnatValue};

type S = SurnatValue<BigRational>;

/// One side of the cut.
enum Opt {
    /// every natural number
    Naturals,
    Value(S),
    /// c·ω + j for every dyadic c below ρ and every integer j
    DyadicBelow(BigRational),
    /// c·ω + j for every dyadic c above ρ and every integer j
    DyadicAbove(BigRational),
}

/// Coefficient of ω, or `None` if the value reaches past ω.
fn omega_coeff(x: &S) -> Option<BigRational> {
    let w = Key::omega_pow(1, 1);
    if x.leading().is_some_and(|t| t.key > w) {
        return None;
    }
    x.coeff_at(w).as_rational()
}

fn above(x: &S, o: &Opt) -> bool {
    match o {
        Opt::Naturals => x.leading().is_some_and(|t| t.key.is_infinite() && t.coeff.sign() == Some(std::cmp::Ordering::Greater)),
        Opt::Value(v) => x.compare(v) == Comparison::Greater,
        Opt::DyadicBelow(r) => omega_coeff(x).is_none_or(|c| c >= *r),
        Opt::DyadicAbove(_) => false,
    }
}

fn below(x: &S, o: &Opt) -> bool {
    match o {
        Opt::Value(v) => x.compare(v) == Comparison::Less,
        Opt::DyadicAbove(r) => omega_coeff(x).is_some_and(|c| c <= *r),
        Opt::Naturals | Opt::DyadicBelow(_) => false,
    }
}

/// Candidate values through day ω², sorted by birthday.
fn candidates() -> &'static [(Day, S)] {
    static C: OnceLock<Vec<(Day, S)>> = OnceLock::new();
    C.get_or_init(|| {
        let rat = crate::scalar::rat;
        let w = S::omega();
        let mut v: Vec<S> = (0..=64).map(S::from_int).collect();
        for den in [1i64, 2, 4, 8, 16] {
            for num in 1..=2 * den {
                if num % 2 == 0 && den > 1 {
                    continue;
                }
                for j in -24..=24 {
                    v.push(w.scale(&rat(num, den)).add(&S::from_int(j)));
                }
            }
        }
        for k in 3..=12i64 {
            for j in 1..k {
                if (k & (k - 1)) != 0 || j % 2 == 0 {
                    v.push(w.scale(&rat(j, k)));
                }
            }
        }
        v.push(w.pow_rat(crate::surnat::Exp::new(1, 2)).unwrap());
        let mut out: Vec<(Day, S)> = v
            .into_iter()
            .filter_map(|x| match x.birthday() {
                Birthday::Day(d) => Some((d, x)),
                Birthday::UnknownPattern => None,
            })
            .collect();
        out.sort_by_key(|(d, _)| *d);
        out
    })
}

/// Left and right options from the structure of a subset of N: the
/// density of its periodic pattern and its element offset against that
/// pattern.
fn cut(c: &SetExpr) -> Option<(Vec<Opt>, Vec<Opt>)> {
    let rat = crate::scalar::rat;
    if let Some(p) = Periodic::from_expr(c) {
        let t = p.offset();
        if p.is_finite() {
            let left = if t > 0 { vec![Opt::Value(S::from_int(t - 1))] } else { vec![] };
            return Some((left, vec![Opt::Value(S::from_int(t + 1))]));
        }
        let rho = rat(p.weight() as i64, p.modulus as i64);
        let base = S::omega().scale(&rho).add(&S::from_int(t));
        let left = vec![Opt::Naturals, Opt::DyadicBelow(rho.clone()), Opt::Value(base.sub(&S::from_int(1)))];
        let mut right = vec![];
        if t < 0 || rho < rat(1, 1) {
            right.push(Opt::Value(base.add(&S::from_int(1))));
        }
        if rho < rat(1, 1) {
            right.push(Opt::DyadicAbove(rho));
        }
        return Some((left, right));
    }
    match c {
        SetExpr::Power(2) => Some((vec![Opt::Naturals], vec![Opt::DyadicAbove(rat(0, 1))])),
        _ => None,
    }
}

/// Genetic form of a subset of N from the calendar families.
pub fn genetic_form(a: &SetExpr) -> Result<S, MagnumError> {
    let c = canonicalize(a);
    let unknown = || MagnumError::UnknownPattern(c.render(false));
    let (left, right) = cut(&c).ok_or_else(unknown)?;
    let fits = |x: &S| left.iter().all(|o| above(x, o)) && right.iter().all(|o| below(x, o));
    let mut hit: Option<(Day, &S)> = None;
    for (d, x) in candidates() {
        if hit.is_some_and(|(hd, _)| *d > hd) {
            break;
        }
        if fits(x) {
            match hit {
                None => hit = Some((*d, x)),
                Some((_, y)) if y != x => return Err(unknown()),
                _ => {}
            }
        }
    }
    hit.map(|(_, x)| x.clone()).ok_or_else(unknown)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> String {
        genetic_form(&SetExpr::parse(s).unwrap()).map(|v| v.to_string()).unwrap_or_else(|e| e.to_string())
    }

    #[test]
    fn calendar_families() {
        assert_eq!(g("{}"), "0");
        assert_eq!(g("{3,9}"), "2");
        assert_eq!(g("N"), "w");
        assert_eq!(g("N \\ {4}"), "w - 1");
        assert_eq!(g("2N"), "w/2");
        assert_eq!(g("2N-1"), "w/2");
        assert_eq!(g("2N u {3}"), "w/2 + 1");
        assert_eq!(g("2N \\ {4}"), "w/2 - 1");
        assert_eq!(g("N \\ 4N"), "3*w/4");
        assert_eq!(g("3N"), "w/3");
        assert_eq!(g("N^(2)"), "w^(1/2)");
        assert!(g("primes").starts_with("unknown pattern"));
    }
}
