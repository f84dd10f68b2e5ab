//! Scalar types usable as coefficients and interval endpoints.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// Numeric field element used for surnatural coefficients and interval bounds.
///
/// Exact scalars (`BigRational`, `Ratio<i64>`) keep point arithmetic exact;
/// floating scalars are only ever used through outward-rounded intervals.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Num
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    /// True when `+ - * /` on this type never round.
    const EXACT: bool;

    fn from_rational(q: &BigRational) -> Self;

    /// Exact rational value. Floats convert exactly; `None` for NaN/inf.
    fn to_rational(&self) -> Option<BigRational>;

    fn floor_s(&self) -> Self;

    fn is_integer_s(&self) -> bool {
        self.floor_s() == *self
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }

    fn floor_s(&self) -> Self {
        self.floor()
    }
}

impl Scalar for Ratio<i64> {
    const EXACT: bool = true;

    fn from_rational(q: &BigRational) -> Self {
        match (q.numer().to_i64(), q.denom().to_i64()) {
            (Some(n), Some(d)) => Ratio::new(n, d),
            _ => Ratio::approximate_float(q.to_f64().unwrap_or(0.0)).unwrap_or_else(Ratio::zero),
        }
    }

    fn to_rational(&self) -> Option<BigRational> {
        Some(BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom())))
    }

    fn floor_s(&self) -> Self {
        self.floor()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(q: &BigRational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }

    fn to_rational(&self) -> Option<BigRational> {
        BigRational::from_float(*self)
    }

    fn floor_s(&self) -> Self {
        self.floor()
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn from_rational(q: &BigRational) -> Self {
        q.to_f32().unwrap_or(f32::NAN)
    }

    fn to_rational(&self) -> Option<BigRational> {
        BigRational::from_float(*self)
    }

    fn floor_s(&self) -> Self {
        self.floor()
    }
}

/// Shorthand for building exact rationals in code and tests.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn is_int(q: &BigRational) -> bool {
    q.denom().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip<T: Scalar>(q: BigRational) -> Option<BigRational> {
        T::from_rational(&q).to_rational()
    }

    #[test]
    fn exact_types_roundtrip() {
        assert_eq!(roundtrip::<BigRational>(rat(22, 7)), Some(rat(22, 7)));
        assert_eq!(roundtrip::<Ratio<i64>>(rat(-5, 12)), Some(rat(-5, 12)));
    }

    #[test]
    fn floats_are_dyadic() {
        assert_eq!(roundtrip::<f64>(rat(3, 8)), Some(rat(3, 8)));
        assert_ne!(roundtrip::<f64>(rat(1, 3)), Some(rat(1, 3)));
        assert!(!<f64 as Scalar>::EXACT);
    }

    #[test]
    fn floor_and_integrality() {
        assert_eq!(rat(-1, 2).floor_s(), int(-1));
        assert!(2.0f64.is_integer_s());
        assert!(!Ratio::new(7i64, 2).is_integer_s());
    }
}
