//! Truncated expansions: powers, reciprocals and logarithms of values whose
//! leading term is known. Used when extending functions to omega.

use num_traits::{Signed, Zero};

use super::constant::{Constant, Exp};
use super::value::{Exactness, Key, SurnatValue, Term};
use super::SurnatError;
use crate::scalar::Scalar;

/// Sub-leading terms kept in binomial and log expansions.
pub const SERIES_DEPTH: u32 = 2;

fn unsupported(msg: &str) -> SurnatError {
    SurnatError::Unsupported(msg.to_string())
}

impl<T: Scalar> SurnatValue<T> {
    /// (leading term, x / leading - 1)
    fn split_leading(&self) -> Result<(Term<T>, SurnatValue<T>), SurnatError> {
        let lt = self.leading().cloned().ok_or_else(|| unsupported("expansion of a value with no known terms"))?;
        let inv = lt.coeff.recip().ok_or_else(|| unsupported("leading coefficient is not a single monomial"))?;
        let inv_term = SurnatValue::term(inv, Key::UNIT.sub(lt.key));
        let rest = self.sub(&SurnatValue::term(lt.coeff.clone(), lt.key));
        Ok((lt, rest.mul(&inv_term)))
    }

    /// Sum of c_k d^k for k = 0..=depth plus the truncation remainder.
    fn series_in(d: &SurnatValue<T>, coeffs: &[T], start: usize) -> SurnatValue<T> {
        let mut acc = SurnatValue::zero();
        let mut pw = SurnatValue::from_int(1);
        for _ in 0..start {
            pw = pw.mul(d);
        }
        for c in coeffs {
            acc = acc.add(&pw.scale(c));
            pw = pw.mul(d);
        }
        if let Some(k) = d.order() {
            if !d.is_zero() {
                let n = (start + coeffs.len()) as i64;
                if let Some(rk) = k.scale(Exp::from(n)) {
                    acc = acc.with_exactness(Exactness::BigO(rk));
                }
            }
        }
        acc
    }

    pub fn recip(&self) -> Result<Self, SurnatError> {
        let (lt, d) = self.split_leading()?;
        let inv = lt.coeff.recip().ok_or_else(|| unsupported("reciprocal of a compound constant"))?;
        let coeffs: Vec<T> =
            (0..=SERIES_DEPTH).map(|k| if k % 2 == 0 { T::one() } else { -T::one() }).collect();
        let s = Self::series_in(&d, &coeffs, 0);
        Ok(s.mul(&SurnatValue::term(inv, Key::UNIT.sub(lt.key))))
    }

    pub fn div(&self, o: &Self) -> Result<Self, SurnatError> {
        if let Some(q) = o.as_rational() {
            if q.is_zero() {
                return Err(unsupported("division by zero"));
            }
            return Ok(self.scale(&T::from_rational(&q.recip())));
        }
        Ok(self.mul(&o.recip()?))
    }

    /// x^r for rational r.
    pub fn pow_rat(&self, r: Exp) -> Result<Self, SurnatError> {
        if r.is_integer() && *r.numer() >= 0 {
            return Ok(self.powi(*r.numer() as u32));
        }
        if self.is_zero() {
            return if r.is_positive() { Ok(Self::zero()) } else { Err(unsupported("negative power of zero")) };
        }
        if r.is_integer() {
            return Ok(self.recip()?.powi((-*r.numer()) as u32));
        }
        let (lt, d) = self.split_leading()?;
        let c = lt.coeff.pow(r).ok_or_else(|| unsupported("fractional power of this coefficient"))?;
        let key = lt.key.scale(r).ok_or_else(|| unsupported("fractional power of log w"))?;
        let rr = T::from_rational(&super::value::exp_to_rational(r));
        let mut coeffs = Vec::new();
        let mut binom = T::one();
        for k in 0..=SERIES_DEPTH {
            coeffs.push(binom.clone());
            let kk = T::from_u32(k).unwrap();
            binom = binom * (rr.clone() - kk.clone()) / (kk + T::one());
        }
        let s = Self::series_in(&d, &coeffs, 0);
        Ok(s.mul(&SurnatValue::term(c, key)))
    }

    /// Natural logarithm. `log w` is the basis element of key (0, 1).
    pub fn ln(&self) -> Result<Self, SurnatError> {
        let (lt, d) = self.split_leading()?;
        if lt.key.log != 0 {
            return Err(unsupported("log of log w"));
        }
        let lc = lt.coeff.ln().ok_or_else(|| unsupported("log of this constant"))?;
        let mut acc = SurnatValue::constant(lc);
        if !lt.key.omega.is_zero() {
            let a = T::from_rational(&super::value::exp_to_rational(lt.key.omega));
            acc = acc.add(&SurnatValue::term(Constant::from_scalar(a), Key::new(Exp::zero(), 1)));
        }
        let coeffs: Vec<T> = (1..=SERIES_DEPTH)
            .map(|k| {
                let v = T::one() / T::from_u32(k).unwrap();
                if k % 2 == 1 {
                    v
                } else {
                    -v
                }
            })
            .collect();
        Ok(acc.add(&Self::series_in(&d, &coeffs, 1)))
    }

    pub fn log_base(&self, base: &Constant<T>) -> Result<Self, SurnatError> {
        let lb = base.ln().ok_or_else(|| unsupported("log base is not a registry constant"))?;
        let inv = lb.recip().ok_or_else(|| unsupported("log base must be a prime power or phi"))?;
        Ok(self.ln()?.scale_const(&inv))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use num_rational::BigRational;

    type S = SurnatValue<BigRational>;

    #[test]
    fn sqrt_of_square_is_exact() {
        let w = S::omega();
        let x = w.mul(&w).add(&w.scale(&int(2))).add(&S::from_int(1));
        let r = x.pow_rat(Exp::new(1, 2)).unwrap();
        assert_eq!(r.without_infinitesimals().infinite_part(), S::omega());
        assert_eq!(r.standard_part().as_rational(), Some(int(1)));
    }

    #[test]
    fn triangular_root_has_positive_tail() {
        // sqrt(2w + 1/4) - 1/2
        let x = S::omega().scale(&int(2)).add(&S::from_rational(&rat(1, 4)));
        let r = x.pow_rat(Exp::new(1, 2)).unwrap().sub(&S::from_rational(&rat(1, 2)));
        assert_eq!(r.standard_part().as_rational(), Some(rat(-1, 2)));
        assert_eq!(r.infinitesimal_sign(), super::super::value::InfSign::Positive);
    }

    #[test]
    fn log_of_scaled_omega() {
        let l = S::omega().scale(&int(8)).log_base(&Constant::from_int(2)).unwrap();
        // log2(8w) = log2(w) + 3
        assert_eq!(l.standard_part().as_rational(), Some(int(3)));
        assert!(l.is_exact());
    }

    #[test]
    fn reciprocal_series() {
        let x = S::omega().add(&S::from_int(1));
        let r = x.recip().unwrap();
        assert_eq!(r.leading().unwrap().key, Key::omega_pow(-1, 1));
        assert!(!r.is_exact());
    }
}
