//! Real constants: finite linear combinations of monomials in a small set of
//! irrational base constants.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};

use crate::enclose;
use crate::interval::Interval;
use crate::scalar::Scalar;

pub type Exp = Ratio<i64>;

/// Irrational base constants. `Root(p)` is a prime p raised to a proper
/// fractional power, `Ln(p)` the natural log of a prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BaseConst {
    Root(u64),
    /// 3 / pi^2
    Chi,
    LnPhi,
    Ln(u64),
}

impl BaseConst {
    pub fn enclose(&self, prec: u32) -> Interval<BigRational> {
        match *self {
            BaseConst::Chi => {
                let pi = Interval::<BigRational>::pi(prec);
                let sq = pi.mul(&pi, prec);
                Interval::point(BigRational::from_integer(3.into())).div(&sq, prec).unwrap()
            }
            BaseConst::Ln(p) => {
                let (lo, hi) = enclose::ln_int_bounds(p, prec);
                Interval::new(lo, hi)
            }
            BaseConst::LnPhi => {
                let phi = phi_enclosure(prec + 8);
                phi.ln(prec).unwrap()
            }
            BaseConst::Root(p) => Interval::point(BigRational::from_integer(BigInt::from(p))),
        }
    }
}

fn phi_enclosure(prec: u32) -> Interval<BigRational> {
    let s5 = Interval::point(BigRational::from_integer(5.into())).root(2, prec).unwrap();
    let half = BigRational::new(1.into(), 2.into());
    s5.add(&Interval::point(BigRational::one()), prec).mul(&Interval::point(half), prec)
}

/// Product of base constants with rational exponents. The empty monomial is 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(pub BTreeMap<BaseConst, Exp>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn base(b: BaseConst, e: Exp) -> (BigRational, Self) {
        Monomial::unit().mul(&Monomial([(b, e)].into_iter().collect()))
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    /// Product, normalised: prime-root exponents are kept in (0,1) and the
    /// integer part is returned as a rational factor.
    pub fn mul(&self, o: &Monomial) -> (BigRational, Monomial) {
        let mut m = self.0.clone();
        for (b, e) in &o.0 {
            *m.entry(*b).or_insert_with(Exp::zero) += e;
        }
        Self::normalise(m)
    }

    pub fn pow(&self, r: Exp) -> (BigRational, Monomial) {
        Self::normalise(self.0.iter().map(|(b, e)| (*b, e * r)).collect())
    }

    fn normalise(m: BTreeMap<BaseConst, Exp>) -> (BigRational, Monomial) {
        let mut factor = BigRational::one();
        let mut out = BTreeMap::new();
        for (b, e) in m {
            if e.is_zero() {
                continue;
            }
            if let BaseConst::Root(p) = b {
                let fl = e.floor();
                let frac = e - fl;
                let k = fl.to_integer();
                let pb = BigRational::from_integer(BigInt::from(p));
                factor *= if k >= 0 { pb.pow(k as i32) } else { pb.recip().pow((-k) as i32) };
                if !frac.is_zero() {
                    out.insert(b, frac);
                }
            } else {
                out.insert(b, e);
            }
        }
        (factor, Monomial(out))
    }

    /// Enclosure of the monomial, memoized per thread since counting forms
    /// evaluate the same constants at every n.
    pub fn enclose(&self, prec: u32) -> Interval<BigRational> {
        thread_local! {
            static CACHE: std::cell::RefCell<std::collections::HashMap<(Monomial, u32), Interval<BigRational>>> =
                Default::default();
        }
        let key = (self.clone(), prec);
        if let Some(v) = CACHE.with(|c| c.borrow().get(&key).cloned()) {
            return v;
        }
        let v = self.enclose_uncached(prec);
        CACHE.with(|c| c.borrow_mut().insert(key, v.clone()));
        v
    }

    fn enclose_uncached(&self, prec: u32) -> Interval<BigRational> {
        let mut acc = Interval::point(BigRational::one());
        for (b, e) in &self.0 {
            let base = b.enclose(prec + 8);
            let p = *e.numer();
            let q = *e.denom() as u32;
            let v = match b {
                BaseConst::Root(pr) => {
                    let x = BigRational::from_integer(BigInt::from(*pr).pow(p.unsigned_abs() as u32));
                    let r = Interval::point(x).root(q, prec + 8).unwrap();
                    if p < 0 {
                        r.recip(prec + 8).unwrap()
                    } else {
                        r
                    }
                }
                _ => base.pow_rat(p, q, prec + 8).expect("positive base constant"),
            };
            acc = acc.mul(&v, prec + 8);
        }
        acc
    }

    fn render_parts(&self) -> (Vec<String>, Vec<String>) {
        let mut num = Vec::new();
        let mut den = Vec::new();
        for (b, e) in &self.0 {
            let name = match b {
                BaseConst::Chi => "chi".to_string(),
                BaseConst::LnPhi => "ln(phi)".to_string(),
                BaseConst::Ln(p) => format!("ln({p})"),
                BaseConst::Root(p) => format!("{p}"),
            };
            let (target, mag) = if e.is_negative() { (&mut den, -*e) } else { (&mut num, *e) };
            if mag.is_one() {
                target.push(name);
            } else if mag.is_integer() {
                target.push(format!("{name}^{}", mag.numer()));
            } else {
                target.push(format!("{name}^({}/{})", mag.numer(), mag.denom()));
            }
        }
        (num, den)
    }
}

/// A real constant: sum of coefficient times monomial.
#[derive(Clone, Debug, PartialEq)]
pub struct Constant<T> {
    pub parts: BTreeMap<Monomial, T>,
}

pub type ExactConst = Constant<BigRational>;

impl<T: Scalar> Constant<T> {
    pub fn zero() -> Self {
        Constant { parts: BTreeMap::new() }
    }

    pub fn from_scalar(q: T) -> Self {
        let mut parts = BTreeMap::new();
        if !q.is_zero() {
            parts.insert(Monomial::unit(), q);
        }
        Constant { parts }
    }

    pub fn from_rational(q: &BigRational) -> Self {
        Self::from_scalar(T::from_rational(q))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_scalar(T::from_i64(n).unwrap())
    }

    pub fn monomial(q: T, m: Monomial) -> Self {
        let mut parts = BTreeMap::new();
        if !q.is_zero() {
            parts.insert(m, q);
        }
        Constant { parts }
    }

    pub fn base(b: BaseConst) -> Self {
        let (f, m) = Monomial::base(b, Exp::one());
        Self::monomial(T::from_rational(&f), m)
    }

    /// (1 + sqrt 5) / 2
    pub fn phi() -> Self {
        let half = T::from_rational(&BigRational::new(1.into(), 2.into()));
        let mut c = Self::from_scalar(half.clone());
        c.parts.insert(Monomial([(BaseConst::Root(5), Exp::new(1, 2))].into_iter().collect()), half);
        c
    }

    pub fn chi() -> Self {
        Self::base(BaseConst::Chi)
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    /// The scalar value when no irrational monomial is present.
    pub fn as_scalar(&self) -> Option<T> {
        match self.parts.len() {
            0 => Some(T::zero()),
            1 => self.parts.get(&Monomial::unit()).cloned(),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.as_scalar().and_then(|q| q.to_rational())
    }

    pub fn single(&self) -> Option<(&Monomial, &T)> {
        if self.parts.len() == 1 {
            self.parts.iter().next()
        } else {
            None
        }
    }

    fn insert_add(parts: &mut BTreeMap<Monomial, T>, m: Monomial, q: T) {
        let zero = {
            let e = parts.entry(m.clone()).or_insert_with(T::zero);
            *e = e.clone() + q;
            e.is_zero()
        };
        if zero {
            parts.remove(&m);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut parts = self.parts.clone();
        for (m, q) in &o.parts {
            Self::insert_add(&mut parts, m.clone(), q.clone());
        }
        Constant { parts }
    }

    pub fn neg(&self) -> Self {
        Constant { parts: self.parts.iter().map(|(m, q)| (m.clone(), -q.clone())).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &T) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Constant { parts: self.parts.iter().map(|(m, q)| (m.clone(), q.clone() * s.clone())).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut parts = BTreeMap::new();
        for (m1, q1) in &self.parts {
            for (m2, q2) in &o.parts {
                let (f, m) = m1.mul(m2);
                let q = q1.clone() * q2.clone() * T::from_rational(&f);
                Self::insert_add(&mut parts, m, q);
            }
        }
        Constant { parts }
    }

    pub fn powi(&self, e: u32) -> Self {
        let mut acc = Self::from_int(1);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn recip(&self) -> Option<Self> {
        let (m, q) = self.single()?;
        let (f, mi) = m.pow(-Exp::one());
        Some(Self::monomial(T::one() / q.clone() * T::from_rational(&f), mi))
    }

    /// c^r for a positive single-monomial constant, or any constant when r
    /// is a non-negative integer.
    pub fn pow(&self, r: Exp) -> Option<Self> {
        if r.is_integer() && *r.numer() >= 0 {
            return Some(self.powi(*r.numer() as u32));
        }
        if r.is_integer() {
            return self.recip().map(|c| c.powi((-*r.numer()) as u32));
        }
        let (m, q) = self.single()?;
        let q = q.to_rational()?;
        if !q.is_positive() {
            return None;
        }
        let mut acc = Constant::<T>::from_int(1);
        if let Some(root) = enclose::exact_root(&pow_rat_int(&q, *r.numer()), *r.denom() as u32) {
            acc = acc.scale(&T::from_rational(&root));
        } else {
            for (p, e) in enclose::factor_rational(&q)? {
                let (f, mm) = Monomial::base(BaseConst::Root(p), Exp::from(e) * r);
                acc = acc.mul(&Self::monomial(T::from_rational(&f), mm));
            }
        }
        let (f, mm) = m.pow(r);
        Some(acc.mul(&Self::monomial(T::from_rational(&f), mm)))
    }

    /// Natural logarithm, when it is again a registry constant.
    pub fn ln(&self) -> Option<Self> {
        if *self == Self::phi() {
            return Some(Self::base(BaseConst::LnPhi));
        }
        let (m, q) = self.single()?;
        let q = q.to_rational()?;
        if !q.is_positive() {
            return None;
        }
        let mut acc = Self::zero();
        for (p, e) in enclose::factor_rational(&q)? {
            acc = acc.add(&Self::base(BaseConst::Ln(p)).scale(&T::from_i64(e).unwrap()));
        }
        for (b, e) in &m.0 {
            match b {
                BaseConst::Root(p) => {
                    let er = BigRational::new(BigInt::from(*e.numer()), BigInt::from(*e.denom()));
                    acc = acc.add(&Self::base(BaseConst::Ln(*p)).scale(&T::from_rational(&er)));
                }
                _ => return None,
            }
        }
        Some(acc)
    }

    pub fn to_exact(&self) -> Option<ExactConst> {
        let mut parts = BTreeMap::new();
        for (m, q) in &self.parts {
            parts.insert(m.clone(), q.to_rational()?);
        }
        Some(Constant { parts })
    }

    pub fn convert<U: Scalar>(&self) -> Option<Constant<U>> {
        let mut parts = BTreeMap::new();
        for (m, q) in &self.parts {
            let u = U::from_rational(&q.to_rational()?);
            if !u.is_zero() {
                parts.insert(m.clone(), u);
            }
        }
        Some(Constant { parts })
    }

    pub fn enclose(&self, prec: u32) -> Option<Interval<BigRational>> {
        let mut acc = Interval::point(BigRational::zero());
        for (m, q) in &self.parts {
            let qi = Interval::point(q.to_rational()?);
            acc = acc.add(&qi.mul(&m.enclose(prec), prec), prec);
        }
        Some(acc)
    }

    /// Sign by interval refinement from 64 up to 1024 bits.
    pub fn sign(&self) -> Option<Ordering> {
        if self.is_zero() {
            return Some(Ordering::Equal);
        }
        if let Some(q) = self.as_scalar() {
            return q.partial_cmp(&T::zero());
        }
        let mut prec = 64;
        while prec <= 1024 {
            if let Some(s) = self.enclose(prec)?.sign() {
                if s != Ordering::Equal {
                    return Some(s);
                }
            }
            prec *= 2;
        }
        None
    }

    pub fn floor(&self) -> Option<BigRational> {
        if let Some(q) = self.as_scalar() {
            return q.to_rational().map(|r| r.floor());
        }
        let mut prec = 64;
        while prec <= 1024 {
            if let Some(f) = self.enclose(prec)?.floor() {
                return Some(f);
            }
            prec *= 2;
        }
        None
    }

    pub fn to_f64(&self) -> f64 {
        self.enclose(64).map(|i| i.to_f64()).unwrap_or(f64::NAN)
    }

    /// Render as a product with extra numerator/denominator factors.
    /// Returns (text, negative) so the caller can place the sign.
    pub fn render_factor(&self, num_extra: &[String], den_extra: &[String]) -> (String, bool) {
        let (mut num, mut den, neg) = if let Some((m, q)) = self.single() {
            let neg = q.is_negative();
            let q = q.abs();
            let (mut num, mut den) = m.render_parts();
            let (qn, qd) = match q.to_rational() {
                Some(r) => (r.numer().to_string(), r.denom().to_string()),
                None => (q.to_string(), "1".to_string()),
            };
            if qn != "1" || (num.is_empty() && num_extra.is_empty()) {
                num.insert(0, qn);
            }
            if qd != "1" {
                den.insert(0, qd);
            }
            (num, den, neg)
        } else {
            let mut inner = String::new();
            for (i, (m, q)) in self.parts.iter().rev().enumerate() {
                let (t, neg) = Constant::monomial(q.clone(), m.clone()).render_factor(&[], &[]);
                if i == 0 {
                    if neg {
                        inner.push('-');
                    }
                } else {
                    inner.push_str(if neg { " - " } else { " + " });
                }
                inner.push_str(&t);
            }
            let v = if num_extra.is_empty() && den_extra.is_empty() { inner } else { format!("({inner})") };
            (vec![v], Vec::new(), false)
        };
        num.extend(num_extra.iter().cloned());
        den.extend(den_extra.iter().cloned());
        if num.is_empty() {
            num.push("1".into());
        }
        let mut s = num.join("*");
        match den.len() {
            0 => {}
            1 => {
                let _ = write!(s, "/{}", den[0]);
            }
            _ => {
                let _ = write!(s, "/({})", den.join("*"));
            }
        }
        (s, neg)
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let (s, neg) = self.render_factor(&[], &[]);
        if neg {
            format!("-{s}")
        } else {
            s
        }
    }
}

fn pow_rat_int(q: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        q.pow(e as i32)
    } else {
        q.recip().pow((-e) as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    type C = ExactConst;

    #[test]
    fn root_folding() {
        let r = C::from_int(2).pow(Exp::new(1, 2)).unwrap();
        assert_eq!(r.mul(&r), C::from_int(2));
        let c = C::from_int(2).pow(Exp::new(2, 3)).unwrap();
        assert_eq!(c.render(), "2^(2/3)");
        assert_eq!(C::from_int(4).pow(Exp::new(1, 2)).unwrap(), C::from_int(2));
    }

    #[test]
    fn chi_value() {
        let v = C::chi().to_f64();
        assert!((v - 3.0 / std::f64::consts::PI.powi(2)).abs() < 1e-12);
        assert_eq!(C::chi().sign(), Some(Ordering::Greater));
    }

    #[test]
    fn logs_decompose_over_primes() {
        let l = C::from_rational(&rat(12, 5)).ln().unwrap();
        let v = l.to_f64();
        assert!((v - 2.4f64.ln()).abs() < 1e-12);
        let lp = C::phi().ln().unwrap();
        assert!((lp.to_f64() - 1.618033988749895f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn phi_floor_and_sign_of_difference() {
        assert_eq!(C::phi().floor(), Some(int(1)));
        let d = C::phi().sub(&C::from_rational(&rat(1618, 1000)));
        assert_eq!(d.sign(), Some(Ordering::Greater));
    }

    #[test]
    fn generic_coefficients() {
        let c: Constant<f64> = Constant::from_scalar(0.5).mul(&Constant::chi());
        let e: Constant<Ratio<i64>> = c.convert().unwrap();
        assert_eq!(e.single().unwrap().1, &Ratio::new(1, 2));
    }
}
