//! Integer-valued polynomials with rational coefficients, used as defining
//! functions of polynomial atoms.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Q;
use crate::funexpr::simplify::{from_poly, Poly};
use crate::funexpr::FnForm;
use crate::surnat::{ExactConst, Exp};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QPoly {
    /// c0, c1, ...; no trailing zeros
    coeffs: Vec<Q>,
}

type Q128 = Ratio<i128>;

impl QPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Value at j, or `None` on overflow.
    pub fn eval(&self, j: i64) -> Option<Q128> {
        let x = Q128::from_integer(j as i128);
        let mut acc = Q128::zero();
        for c in self.coeffs.iter().rev() {
            let c = Q128::new(*c.numer() as i128, *c.denom() as i128);
            acc = acc.numer().checked_mul(*x.numer()).map(|n| Q128::new(n, *acc.denom()))? + c;
        }
        Some(acc)
    }

    pub fn eval_int(&self, j: i64) -> Option<i64> {
        let v = self.eval(j)?;
        if v.is_integer() {
            v.to_integer().to_i64()
        } else {
            None
        }
    }

    /// Integer-valued, p(1) >= 1 and strictly increasing on 1, 2, ...
    pub fn is_valid_atom(&self) -> bool {
        let d = self.degree();
        if self.coeffs.is_empty() || d == 0 || !self.coeffs[d].is_positive() {
            return false;
        }
        if (0..=d as i64).any(|j| self.eval(j).is_none_or(|v| !v.is_integer())) {
            return false;
        }
        if self.eval(1).is_none_or(|v| v < Q128::one()) {
            return false;
        }
        // differences stay positive past a Cauchy-type bound
        let lead = self.coeffs[d].abs();
        let bound: f64 = self.coeffs.iter().map(|c| (c.abs() / lead).to_f64().unwrap_or(f64::MAX)).sum::<f64>();
        let top = (2.0 * bound).ceil().min(1e6) as i64 + 2;
        (1..top).all(|j| match (self.eval(j), self.eval(j + 1)) {
            (Some(a), Some(b)) => b > a,
            _ => false,
        })
    }

    /// Index j >= 1 with p(j) = x.
    pub fn index_of(&self, x: i64) -> Option<i64> {
        let target = Q128::from_integer(x as i128);
        let (mut lo, mut hi) = (1i64, 1i64);
        loop {
            match self.eval(hi) {
                Some(v) if v < target => {
                    lo = hi;
                    hi = hi.checked_mul(2)?;
                }
                _ => break,
            }
        }
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            match self.eval(mid) {
                Some(v) if v < target => lo = mid + 1,
                _ => hi = mid,
            }
        }
        (self.eval(lo) == Some(target)).then_some(lo)
    }

    /// p(a*t + b) as a polynomial in t.
    pub fn substitute(&self, a: i64, b: i64) -> QPoly {
        let lin = [Q::from_integer(b), Q::from_integer(a)];
        let mut acc: Vec<Q> = Vec::new();
        for c in self.coeffs.iter().rev() {
            // acc = acc * lin + c
            let mut next = vec![Q::zero(); acc.len() + 1];
            for (i, x) in acc.iter().enumerate() {
                next[i] += *x * lin[0];
                next[i + 1] += *x * lin[1];
            }
            next[0] += *c;
            acc = next;
        }
        QPoly::new(acc)
    }

    /// Least common denominator of the coefficients.
    pub fn denominator(&self) -> i64 {
        self.coeffs.iter().fold(1i64, |l, c| l.lcm(c.denom()))
    }

    pub fn to_fn(&self) -> FnForm {
        let mut p = Poly::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let q = crate::scalar::rat(*c.numer(), *c.denom());
                p.insert(Exp::from(i as i64), ExactConst::from_rational(&q));
            }
        }
        from_poly(&p)
    }

    pub fn render_args(&self) -> String {
        self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qp(v: &[i64]) -> QPoly {
        QPoly::new(v.iter().map(|&x| Q::from_integer(x)).collect())
    }

    #[test]
    fn evaluation_and_search() {
        let p = qp(&[1, -4, 4]);
        assert_eq!(p.eval_int(3), Some(25));
        assert_eq!(p.index_of(49), Some(4));
        assert_eq!(p.index_of(50), None);
        assert!(p.is_valid_atom());
        assert!(!qp(&[0, 0, 1, -1]).is_valid_atom());
        assert!(!QPoly::new(vec![Q::zero(), Q::new(1, 2)]).is_valid_atom());
    }

    #[test]
    fn substitution() {
        let sq = qp(&[0, 0, 1]);
        assert_eq!(sq.substitute(2, -1), qp(&[1, -4, 4]));
        let tri = QPoly::new(vec![Q::zero(), Q::new(1, 2), Q::new(1, 2)]);
        assert_eq!(tri.substitute(4, 0), qp(&[0, 2, 8]));
        assert_eq!(tri.denominator(), 2);
    }
}
