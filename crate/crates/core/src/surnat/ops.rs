use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use super::value::{InfSign, Key, SurnatValue};
use super::SurnatError;
use crate::scalar::Scalar;

impl<T: Scalar> SurnatValue<T> {
    /// Surreal floor: the purely infinite part is kept, the standard part is
    /// floored, and an integer standard part drops by one below a negative
    /// infinitesimal tail.
    pub fn floor_surreal(&self, sign: InfSign) -> Result<Self, SurnatError> {
        if self.has_infinitesimals() {
            return Err(SurnatError::InfinitesimalTerms);
        }
        if let Some(k) = self.exactness().key() {
            if !k.is_infinitesimal() {
                // standard part is not resolved by the stored terms
                return Ok(self.filter(|t| t.is_infinite(), self.exactness()));
            }
        }
        let std = self.standard_part();
        let fl = match std.as_rational() {
            Some(q) if crate::scalar::is_int(&q) => match sign {
                InfSign::Negative => q - BigRational::one(),
                InfSign::Unknown => return Err(SurnatError::UndeterminedFloor),
                _ => q,
            },
            Some(q) => q.floor(),
            None => std.floor().ok_or(SurnatError::UndeterminedFloor)?,
        };
        Ok(self.infinite_part().add(&SurnatValue::from_rational(&fl)))
    }

    /// Floor of a series that may carry infinitesimal terms.
    pub fn floor_series(&self) -> Result<Self, SurnatError> {
        let sign = self.infinitesimal_sign();
        self.without_infinitesimals().floor_surreal(sign)
    }

    /// True iff the value is an omnific integer whose quotient by k is
    /// again omnific: infinite terms always divide, the constant must.
    pub fn is_divisible(&self, k: u64) -> bool {
        if self.has_infinitesimals() || self.exactness().key().is_some_and(|r| !r.is_infinitesimal()) {
            return false;
        }
        match self.standard_part().as_rational() {
            Some(q) if crate::scalar::is_int(&q) => q.numer().is_multiple_of(&k.into()),
            _ => false,
        }
    }

    /// Omnific-integer status: `None` when a remainder or a log-bearing term
    /// leaves it open.
    pub fn omnific_status(&self) -> Option<bool> {
        if self.has_infinitesimals() {
            return Some(false);
        }
        if self.exactness().key().is_some_and(|r| !r.is_infinitesimal()) {
            return None;
        }
        if self.terms().iter().any(|t| t.key.is_infinite() && t.key.log != 0) {
            return None;
        }
        match self.standard_part().as_rational() {
            Some(q) => Some(crate::scalar::is_int(&q)),
            None => Some(false),
        }
    }

    /// Omnific and non-negative.
    pub fn surnatural_status(&self) -> Option<bool> {
        let om = self.omnific_status()?;
        Some(om && self.is_nonnegative()?)
    }

    pub fn is_purely_infinite(&self) -> bool {
        self.terms().iter().all(|t| t.key.is_infinite())
    }

    pub fn leading_key(&self) -> Option<Key> {
        self.leading().map(|t| t.key)
    }

    pub fn abs_is_negative(&self) -> bool {
        self.leading().is_some_and(|t| t.coeff.as_scalar().is_some_and(|q| q.is_negative()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use crate::surnat::value::Exactness;

    type S = SurnatValue<BigRational>;

    fn w() -> S {
        S::omega()
    }

    #[test]
    fn floor_examples() {
        let x = w().scale(&rat(1, 2)).add(&S::from_rational(&rat(1, 2)));
        assert_eq!(x.floor_surreal(InfSign::Zero).unwrap(), w().scale(&rat(1, 2)));
        let y = w().sub(&S::from_int(3));
        assert_eq!(y.floor_surreal(InfSign::Negative).unwrap(), w().sub(&S::from_int(4)));
        assert_eq!(y.floor_surreal(InfSign::Unknown), Err(SurnatError::UndeterminedFloor));
        assert_eq!(y.floor_surreal(InfSign::Positive).unwrap(), y);
    }

    #[test]
    fn floor_is_idempotent() {
        let x = w().scale(&rat(2, 3)).add(&S::from_rational(&rat(-7, 3)));
        let f = x.floor_surreal(InfSign::Zero).unwrap();
        assert_eq!(f.floor_surreal(InfSign::Zero).unwrap(), f);
        assert_eq!(f.standard_part().as_rational(), Some(int(-3)));
    }

    #[test]
    fn floor_with_coarse_remainder_keeps_tag() {
        let x = S::term(crate::surnat::constant::Constant::from_int(1), Key::new(1.into(), -1))
            .with_exactness(Exactness::BigO(Key::new(1.into(), -2)));
        let f = x.floor_surreal(InfSign::Unknown).unwrap();
        assert_eq!(f, x);
    }

    #[test]
    fn divisibility() {
        assert!(w().is_divisible(6));
        assert!(!w().add(&S::from_int(1)).is_divisible(2));
        assert!(w().add(&S::from_int(4)).is_divisible(2));
        assert_eq!(w().scale(&rat(1, 2)).add(&S::from_rational(&rat(1, 2))).omnific_status(), Some(false));
        assert_eq!(w().pow_rat((1, 2).into()).unwrap().omnific_status(), Some(true));
    }
}
