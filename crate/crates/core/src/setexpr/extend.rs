//! Membership of surnaturals in the extension of a set.

use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::{SetError, SetExpr};
use crate::surnat::SurnatValue;

type S = SurnatValue<BigRational>;

fn unsupported<T>(e: &SetExpr, why: &str) -> Result<T, SetError> {
    Err(SetError::UnsupportedExtension(format!("{}: {why}", e.render(false))))
}

fn finite_int(x: &S) -> Option<Option<i64>> {
    if !x.is_finite() {
        return None;
    }
    let q = x.as_rational()?;
    Some(if crate::scalar::is_int(&q) { q.to_integer().to_i64() } else { None })
}

impl SetExpr {
    /// Decides x ∈ Â, where Â is the extension of the set to the
    /// surnaturals: atoms through their inverse defining functions,
    /// Boolean combinations pointwise.
    pub fn extended_contains(&self, x: &S) -> Result<bool, SetError> {
        use SetExpr::*;
        if let Some(fx) = finite_int(x) {
            if !self.is_nat_subset() && !matches!(self, Union(..) | Inter(..) | Diff(..)) {
                return unsupported(self, "finite membership outside N");
            }
            return match (self, fx) {
                (Union(a, b), _) => Ok(a.extended_contains(x)? || b.extended_contains(x)?),
                (Inter(a, b), _) => Ok(a.extended_contains(x)? && b.extended_contains(x)?),
                (Diff(a, b), _) => Ok(a.extended_contains(x)? && !b.extended_contains(x)?),
                (_, Some(n)) => Ok(self.contains_int(n)),
                (_, None) => Ok(false),
            };
        }
        if x.is_nonnegative() != Some(true) {
            return unsupported(self, "sign of the argument is not settled");
        }
        match self {
            N | Z | QPlus | HalfN => match x.omnific_status() {
                Some(b) => Ok(b),
                None => unsupported(self, "argument not known to be omnific"),
            },
            Finite(_) | Band(_) => Ok(false),
            Arith { k, m } => Ok(x.sub(&S::from_int(*m)).is_divisible(*k as u64)),
            Primes => {
                if x.is_divisible(2) {
                    Ok(false)
                } else {
                    unsupported(self, "primality of an odd infinite value")
                }
            }
            Power(_) | Tri | Poly(_) | Geom { .. } | Fib => {
                let f = self.defining_fn().ok_or_else(|| SetError::UnsupportedExtension(self.render(false)))?;
                let g = match f.invert() {
                    Ok(g) => g,
                    Err(_) => return unsupported(self, "defining function has no closed inverse"),
                };
                let nu = g.extend_series(x).map_err(|e| SetError::UnsupportedExtension(e.to_string()))?;
                match nu.omnific_status() {
                    Some(b) => Ok(b),
                    None => unsupported(self, "omnific status of the index is open"),
                }
            }
            Union(a, b) => Ok(a.extended_contains(x)? || b.extended_contains(x)?),
            Inter(a, b) => Ok(a.extended_contains(x)? && b.extended_contains(x)?),
            Diff(a, b) => Ok(a.extended_contains(x)? && !b.extended_contains(x)?),
            Shift(a, r) if r.is_integer() => {
                a.extended_contains(&x.sub(&S::from_int(r.to_integer())))
            }
            Scale(a, r) if r.is_integer() && *r > super::Q::from_integer(0) => {
                let k = r.to_integer() as u64;
                if !x.is_divisible(k) {
                    return Ok(false);
                }
                a.extended_contains(&x.scale(&crate::scalar::rat(1, k as i64)))
            }
            Od2 => unsupported(self, "no inverse defining function"),
            _ => unsupported(self, "no extension rule for this combinator"),
        }
    }

    /// Predicate form of the extension.
    pub fn extend_set(&self) -> impl Fn(&S) -> Result<bool, SetError> + '_ {
        move |x| self.extended_contains(x)
    }

    /// Whether the set belongs to the omega-set family: ω ∈ Â.
    pub fn is_omega_set(&self) -> Result<bool, SetError> {
        self.extended_contains(&S::omega())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn om(s: &str) -> Result<bool, SetError> {
        SetExpr::parse(s).unwrap().is_omega_set()
    }

    #[test]
    fn omega_membership() {
        assert_eq!(om("2N"), Ok(true));
        assert_eq!(om("2N-1"), Ok(false));
        assert_eq!(om("N"), Ok(true));
        assert_eq!(om("N^(2)"), Ok(true));
        assert_eq!(om("tri"), Ok(false));
        assert_eq!(om("poly(0,0,4)"), Ok(true));
        assert_eq!(om("poly(1,-4,4)"), Ok(false));
        assert_eq!(om("{1,2,3}"), Ok(false));
        assert_eq!(om("N \\ {1}"), Ok(true));
        assert_eq!(om("primes"), Ok(false));
        assert_eq!(om("3N u 4N"), Ok(true));
        assert_eq!(om("(2N u 3N) \\ 6N"), Ok(false));
        assert!(om("od2").is_err());
        assert!(om("geom(1,2)").is_err());
    }

    #[test]
    fn other_arguments() {
        let f = SetExpr::parse("2N").unwrap();
        let p = f.extend_set();
        assert_eq!(p(&S::from_int(4)), Ok(true));
        assert_eq!(p(&S::omega().add(&S::from_int(1))), Ok(false));
        let sq = SetExpr::Power(2);
        assert_eq!(sq.extended_contains(&S::omega().powi(2)), Ok(true));
    }
}
