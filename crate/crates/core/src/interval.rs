//! Closed intervals with outward rounding, generic over the endpoint type.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::enclose;
use crate::scalar::Scalar;

/// Endpoint type of an [`Interval`]: knows how to round outward and how to
/// enclose the few transcendental functions the evaluator needs.
pub trait Endpoint: Scalar {
    fn down(self, prec: u32) -> Self;
    fn up(self, prec: u32) -> Self;

    fn ln_enclose(x: &Self, prec: u32) -> (Self, Self);
    fn root_enclose(x: &Self, k: u32, prec: u32) -> (Self, Self);
    fn pi_enclose(prec: u32) -> (Self, Self);

    /// Exact k-th root of a point, if the type can represent it.
    fn exact_root(_x: &Self, _k: u32) -> Option<Self> {
        None
    }

    /// a + b when the sum is representable without rounding.
    fn add_exact(a: &Self, b: &Self) -> Option<Self> {
        Self::EXACT.then(|| a.clone() + b.clone())
    }

    fn mul_exact(a: &Self, b: &Self) -> Option<Self> {
        Self::EXACT.then(|| a.clone() * b.clone())
    }

    fn div_exact(a: &Self, b: &Self) -> Option<Self> {
        (Self::EXACT && !b.is_zero()).then(|| a.clone() / b.clone())
    }

    fn is_finite_e(&self) -> bool {
        true
    }
}

fn widen_f64(mut x: f64, ulps: u32, up: bool) -> f64 {
    for _ in 0..ulps {
        x = if up { x.next_up() } else { x.next_down() };
    }
    x
}

impl Endpoint for f64 {
    fn down(self, _prec: u32) -> Self {
        self.next_down()
    }

    fn up(self, _prec: u32) -> Self {
        self.next_up()
    }

    fn ln_enclose(x: &Self, _prec: u32) -> (Self, Self) {
        let v = x.ln();
        (widen_f64(v, 4, false), widen_f64(v, 4, true))
    }

    fn root_enclose(x: &Self, k: u32, _prec: u32) -> (Self, Self) {
        let v = match k {
            1 => *x,
            2 => x.sqrt(),
            3 => x.cbrt(),
            _ => x.powf(1.0 / k as f64),
        };
        (widen_f64(v, 4, false).max(0.0), widen_f64(v, 4, true))
    }

    fn pi_enclose(_prec: u32) -> (Self, Self) {
        let p = std::f64::consts::PI;
        (p.next_down(), p.next_up())
    }

    fn exact_root(x: &Self, k: u32) -> Option<Self> {
        let r = match k {
            2 => x.sqrt(),
            3 => x.cbrt(),
            _ => return None,
        };
        let mut acc = r;
        for _ in 1..k {
            acc = Self::mul_exact(&acc, &r)?;
        }
        (acc == *x).then_some(r)
    }

    fn add_exact(a: &Self, b: &Self) -> Option<Self> {
        let s = a + b;
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        (s.is_finite() && err == 0.0).then_some(s)
    }

    fn mul_exact(a: &Self, b: &Self) -> Option<Self> {
        let p = a * b;
        (p.is_finite() && a.mul_add(*b, -p) == 0.0).then_some(p)
    }

    fn div_exact(a: &Self, b: &Self) -> Option<Self> {
        if *b == 0.0 {
            return None;
        }
        let q = a / b;
        (q.is_finite() && q.mul_add(*b, -a) == 0.0).then_some(q)
    }

    fn is_finite_e(&self) -> bool {
        self.is_finite()
    }
}

impl Endpoint for f32 {
    fn down(self, _prec: u32) -> Self {
        self.next_down()
    }

    fn up(self, _prec: u32) -> Self {
        self.next_up()
    }

    fn ln_enclose(x: &Self, prec: u32) -> (Self, Self) {
        let (l, h) = f64::ln_enclose(&(*x as f64), prec);
        ((l as f32).next_down(), (h as f32).next_up())
    }

    fn root_enclose(x: &Self, k: u32, prec: u32) -> (Self, Self) {
        let (l, h) = f64::root_enclose(&(*x as f64), k, prec);
        ((l as f32).next_down().max(0.0), (h as f32).next_up())
    }

    fn pi_enclose(_prec: u32) -> (Self, Self) {
        let p = std::f32::consts::PI;
        (p.next_down(), p.next_up())
    }

    fn is_finite_e(&self) -> bool {
        self.is_finite()
    }
}

impl Endpoint for BigRational {
    fn down(self, prec: u32) -> Self {
        if self.denom().bits() > (prec as u64) + 32 {
            enclose::round_down(&self, prec)
        } else {
            self
        }
    }

    fn up(self, prec: u32) -> Self {
        if self.denom().bits() > (prec as u64) + 32 {
            enclose::round_up(&self, prec)
        } else {
            self
        }
    }

    fn ln_enclose(x: &Self, prec: u32) -> (Self, Self) {
        if x.denom().is_one() {
            if let Some(p) = x.numer().to_u64() {
                return enclose::ln_int_bounds(p, prec);
            }
        }
        enclose::ln_bounds(x, prec)
    }

    fn root_enclose(x: &Self, k: u32, prec: u32) -> (Self, Self) {
        enclose::root_bounds(x, k, prec)
    }

    fn pi_enclose(prec: u32) -> (Self, Self) {
        enclose::pi_bounds(prec)
    }

    fn exact_root(x: &Self, k: u32) -> Option<Self> {
        enclose::exact_root(x, k)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Interval<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Endpoint> Interval<T> {
    pub fn new(lo: T, hi: T) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        Interval { lo, hi }
    }

    pub fn point(x: T) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        let v = T::from_rational(q);
        if T::EXACT {
            return Self::point(v);
        }
        match v.to_rational() {
            Some(r) if r == *q => Self::point(v),
            _ => Interval { lo: v.clone().down(prec), hi: v.up(prec) },
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Value of a point interval. Points are only ever built from exact
    /// results, so this is exact for every endpoint type.
    pub fn exact(&self) -> Option<&T> {
        self.is_point().then_some(&self.lo)
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite_e() && self.hi.is_finite_e()
    }

    pub fn contains(&self, x: &T) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn width(&self) -> T {
        self.hi.clone() - self.lo.clone()
    }

    /// Sign of every member, or `None` when the interval straddles zero.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo > T::zero() {
            Some(Ordering::Greater)
        } else if self.hi < T::zero() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Order of every member of `self` against every member of `other`.
    pub fn cmp_certain(&self, other: &Self) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.is_point() && other.is_point() && self.lo == other.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Common floor of all members, if there is one.
    pub fn floor(&self) -> Option<T> {
        let a = self.lo.floor_s();
        let b = self.hi.floor_s();
        if a != b {
            return None;
        }
        if !T::EXACT && self.hi.is_integer_s() && !self.is_point() {
            return None;
        }
        Some(a)
    }

    pub fn neg(&self) -> Self {
        Interval { lo: -self.hi.clone(), hi: -self.lo.clone() }
    }

    pub fn add(&self, o: &Self, prec: u32) -> Self {
        if let (Some(a), Some(b)) = (self.exact(), o.exact()) {
            if let Some(s) = T::add_exact(a, b) {
                return Self::point(s);
            }
        }
        Interval {
            lo: (self.lo.clone() + o.lo.clone()).down(prec),
            hi: (self.hi.clone() + o.hi.clone()).up(prec),
        }
    }

    pub fn sub(&self, o: &Self, prec: u32) -> Self {
        self.add(&o.neg(), prec)
    }

    pub fn mul(&self, o: &Self, prec: u32) -> Self {
        if let (Some(a), Some(b)) = (self.exact(), o.exact()) {
            if let Some(p) = T::mul_exact(a, b) {
                return Self::point(p);
            }
        }
        let c = [
            self.lo.clone() * o.lo.clone(),
            self.lo.clone() * o.hi.clone(),
            self.hi.clone() * o.lo.clone(),
            self.hi.clone() * o.hi.clone(),
        ];
        let mut lo = c[0].clone();
        let mut hi = c[0].clone();
        for v in &c[1..] {
            if *v < lo {
                lo = v.clone();
            }
            if *v > hi {
                hi = v.clone();
            }
        }
        Interval { lo: lo.down(prec), hi: hi.up(prec) }
    }

    pub fn recip(&self, prec: u32) -> Option<Self> {
        if self.contains(&T::zero()) {
            return None;
        }
        Some(Interval {
            lo: (T::one() / self.hi.clone()).down(prec),
            hi: (T::one() / self.lo.clone()).up(prec),
        })
    }

    pub fn div(&self, o: &Self, prec: u32) -> Option<Self> {
        if let (Some(u), Some(v)) = (self.exact(), o.exact()) {
            if let Some(q) = T::div_exact(u, v) {
                return Some(Self::point(q));
            }
        }
        Some(self.mul(&o.recip(prec)?, prec))
    }

    pub fn powi(&self, e: i64, prec: u32) -> Option<Self> {
        if e < 0 {
            return self.powi(-e, prec)?.recip(prec);
        }
        let mut acc = Self::point(T::one());
        let mut base = self.clone();
        let mut n = e;
        // even powers of a straddling interval are bounded below by zero
        let even_straddle = e % 2 == 0 && self.sign().is_none();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base, prec);
            }
        }
        if even_straddle && acc.lo < T::zero() {
            acc.lo = T::zero();
        }
        Some(acc)
    }

    /// x^(p/q) for x >= 0 (or odd q).
    pub fn pow_rat(&self, p: i64, q: u32, prec: u32) -> Option<Self> {
        let r = self.root(q, prec)?;
        r.powi(p, prec)
    }

    pub fn root(&self, k: u32, prec: u32) -> Option<Self> {
        if k == 1 {
            return Some(self.clone());
        }
        if self.lo < T::zero() {
            if k % 2 == 1 && self.hi < T::zero() {
                return Some(self.neg().root(k, prec)?.neg());
            }
            return None;
        }
        if let Some(v) = self.exact() {
            if let Some(r) = T::exact_root(v, k) {
                return Some(Self::point(r));
            }
        }
        let (lo, _) = T::root_enclose(&self.lo, k, prec);
        let (_, hi) = T::root_enclose(&self.hi, k, prec);
        Some(Interval { lo, hi })
    }

    pub fn ln(&self, prec: u32) -> Option<Self> {
        if self.lo <= T::zero() {
            return None;
        }
        if let Some(v) = self.exact() {
            if v.is_one() {
                return Some(Self::point(T::zero()));
            }
        }
        let (lo, _) = T::ln_enclose(&self.lo, prec);
        let (_, hi) = T::ln_enclose(&self.hi, prec);
        Some(Interval { lo, hi })
    }

    pub fn pi(prec: u32) -> Self {
        let (lo, hi) = T::pi_enclose(prec);
        Interval { lo, hi }
    }

    pub fn max(&self, o: &Self) -> Self {
        let lo = if self.lo > o.lo { self.lo.clone() } else { o.lo.clone() };
        let hi = if self.hi > o.hi { self.hi.clone() } else { o.hi.clone() };
        Interval { lo, hi }
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.lo.to_f64().unwrap_or(f64::NAN);
        let b = self.hi.to_f64().unwrap_or(f64::NAN);
        (a + b) / 2.0
    }
}

impl Interval<BigRational> {
    pub fn from_int(n: i64) -> Self {
        Self::point(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn rational_points_stay_exact() {
        let a = Interval::point(rat(1, 3));
        let b = Interval::point(rat(1, 6));
        let s = a.add(&b, 64);
        assert_eq!(s.exact(), Some(&rat(1, 2)));
        assert_eq!(s.floor(), Some(int(0)));
    }

    #[test]
    fn float_intervals_widen() {
        let a = Interval::<f64>::from_rational(&rat(1, 3), 53);
        assert!(!a.is_point());
        let b = a.mul(&Interval::point(3.0), 53);
        assert!(b.contains(&1.0));
        assert_eq!(b.floor(), None);
    }

    #[test]
    fn sqrt2_floor_both_backends() {
        let r = Interval::point(int(2)).root(2, 64).unwrap();
        assert_eq!(r.floor(), Some(int(1)));
        let f = Interval::point(2.0f64).root(2, 53).unwrap();
        assert_eq!(f.floor(), Some(1.0));
        let e = Interval::point(rat(9, 4)).root(2, 64).unwrap();
        assert_eq!(e.exact(), Some(&rat(3, 2)));
    }

    #[test]
    fn ln_brackets() {
        let l = Interval::point(int(10)).ln(64).unwrap();
        assert!(l.contains(&BigRational::from_float(10f64.ln()).unwrap()) || l.width() < rat(1, 1 << 40));
        assert_eq!(Interval::point(int(1)).ln(64).unwrap().exact(), Some(&int(0)));
    }

    #[test]
    fn even_power_of_straddling_interval() {
        let a = Interval::new(int(-1), int(2));
        let sq = a.powi(2, 64).unwrap();
        assert_eq!(sq.lo, int(0));
        assert_eq!(sq.hi, int(4));
    }

    #[test]
    fn float_integer_points_stay_exact() {
        let a = Interval::point(12.0f64);
        let b = a.mul(&Interval::point(7.0), 53).add(&Interval::point(-3.0), 53);
        assert_eq!(b.exact(), Some(&81.0));
        assert_eq!(b.root(2, 53).unwrap().exact(), Some(&9.0));
        assert!(Interval::point(1.0f64).div(&Interval::point(3.0), 53).unwrap().width() > 0.0);
    }
}
