use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::constant::Exp;
use super::value::{Key, SurnatValue};
use crate::scalar::Scalar;

/// Ordinal day `a*w^2 + b*w + c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Day {
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

impl Day {
    pub fn finite(c: u64) -> Self {
        Day { a: 0, b: 0, c }
    }

    pub fn omega_times(b: u64, c: u64) -> Self {
        Day { a: 0, b, c }
    }

    pub const OMEGA_SQ: Day = Day { a: 1, b: 0, c: 0 };

    pub fn render(&self, unicode: bool) -> String {
        let w = if unicode { "ω" } else { "w" };
        let mut parts = Vec::new();
        if self.a > 0 {
            parts.push(if self.a == 1 { format!("{w}^2") } else { format!("{}*{w}^2", self.a) });
        }
        if self.b > 0 {
            parts.push(if self.b == 1 { w.to_string() } else { format!("{}*{w}", self.b) });
        }
        if self.c > 0 || parts.is_empty() {
            parts.push(self.c.to_string());
        }
        parts.join(" + ")
    }
}

impl fmt::Display for Day {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Birthday {
    Day(Day),
    UnknownPattern,
}

/// Birthday of a non-negative dyadic rational, or `None` if not dyadic.
pub fn dyadic_birthday(c: &BigRational) -> Option<u64> {
    if c.is_negative() {
        return dyadic_birthday(&-c);
    }
    let d = c.denom();
    if (d & (d - BigInt::one())) != BigInt::zero() {
        return None;
    }
    let m = c.floor().to_integer().to_u64()?;
    if c.denom().is_one() {
        return Some(m);
    }
    let k = d.bits() - 1;
    Some(m + 1 + k)
}

impl<T: Scalar> SurnatValue<T> {
    /// Creation day following the calendar rules: n, dyadic c*w +- n, and
    /// the day-w^2 forms (j/k)w, sqrt(w), w^2.
    pub fn birthday(&self) -> Birthday {
        if !self.is_exact() || self.has_infinitesimals() {
            return Birthday::UnknownPattern;
        }
        let std = match self.standard_part().as_rational() {
            Some(q) if crate::scalar::is_int(&q) => q,
            _ => return Birthday::UnknownPattern,
        };
        let t = match std.abs().to_integer().to_u64() {
            Some(t) => t,
            None => return Birthday::UnknownPattern,
        };
        let inf: Vec<_> = self.terms().iter().filter(|x| x.key.is_infinite()).collect();
        match inf.as_slice() {
            [] => Birthday::Day(Day::finite(t)),
            [term] => {
                let c = match term.coeff.as_rational() {
                    Some(c) if c.is_positive() => c,
                    _ => return Birthday::UnknownPattern,
                };
                if term.key == Key::omega_pow(1, 1) {
                    match dyadic_birthday(&c) {
                        Some(b) => Birthday::Day(Day::omega_times(b, t)),
                        None if t == 0 => Birthday::Day(Day::OMEGA_SQ),
                        None => Birthday::UnknownPattern,
                    }
                } else if t == 0 && c.is_one() && (term.key == Key::new(Exp::new(1, 2), 0) || term.key == Key::omega_pow(2, 1)) {
                    Birthday::Day(Day::OMEGA_SQ)
                } else {
                    Birthday::UnknownPattern
                }
            }
            _ => Birthday::UnknownPattern,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    type S = SurnatValue<BigRational>;

    fn day(v: &S) -> Birthday {
        v.birthday()
    }

    #[test]
    fn dyadic_days() {
        assert_eq!(dyadic_birthday(&int(3)), Some(3));
        assert_eq!(dyadic_birthday(&rat(1, 2)), Some(2));
        assert_eq!(dyadic_birthday(&rat(3, 4)), Some(3));
        assert_eq!(dyadic_birthday(&rat(3, 2)), Some(3));
        assert_eq!(dyadic_birthday(&rat(7, 8)), Some(4));
        assert_eq!(dyadic_birthday(&rat(1, 3)), None);
    }

    #[test]
    fn calendar_rows() {
        let w = S::omega();
        assert_eq!(day(&S::from_int(5)), Birthday::Day(Day::finite(5)));
        assert_eq!(day(&w.sub(&S::from_int(3))), Birthday::Day(Day::omega_times(1, 3)));
        assert_eq!(day(&w.scale(&rat(1, 2)).sub(&S::from_int(1))), Birthday::Day(Day::omega_times(2, 1)));
        assert_eq!(day(&w.scale(&rat(3, 8))), Birthday::Day(Day::omega_times(4, 0)));
        assert_eq!(day(&w.scale(&rat(2, 3))), Birthday::Day(Day::OMEGA_SQ));
        assert_eq!(day(&w.pow_rat(Exp::new(1, 2)).unwrap()), Birthday::Day(Day::OMEGA_SQ));
        assert_eq!(day(&w.scale(&rat(1, 3)).add(&S::from_int(1))), Birthday::UnknownPattern);
    }

    #[test]
    fn day_rendering() {
        assert_eq!(Day::omega_times(2, 1).render(false), "2*w + 1");
        assert_eq!(Day::OMEGA_SQ.render(true), "ω^2");
        assert_eq!(Day::finite(0).render(false), "0");
    }
}
