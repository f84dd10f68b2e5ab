use std::cmp::Ordering;

use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::constant::{Constant, Exp};
use crate::scalar::Scalar;

/// Growth order w^omega * (log w)^log. Ordered lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Key {
    pub omega: Exp,
    pub log: i32,
}

impl Key {
    pub const UNIT: Key = Key { omega: Ratio::new_raw(0, 1), log: 0 };

    pub fn new(omega: Exp, log: i32) -> Self {
        Key { omega, log }
    }

    pub fn omega_pow(p: i64, q: i64) -> Self {
        Key { omega: Exp::new(p, q), log: 0 }
    }

    pub fn add(self, o: Key) -> Key {
        Key { omega: self.omega + o.omega, log: self.log + o.log }
    }

    pub fn sub(self, o: Key) -> Key {
        Key { omega: self.omega - o.omega, log: self.log - o.log }
    }

    pub fn scale(self, r: Exp) -> Option<Key> {
        let l = Exp::from(self.log as i64) * r;
        l.is_integer().then(|| Key { omega: self.omega * r, log: *l.numer() as i32 })
    }

    pub fn is_infinite(&self) -> bool {
        *self > Key::UNIT
    }

    pub fn is_infinitesimal(&self) -> bool {
        *self < Key::UNIT
    }
}

/// How much of the true value the stored terms capture.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exactness {
    Exact,
    LittleO(Key),
    BigO(Key),
}

impl Exactness {
    pub fn key(&self) -> Option<Key> {
        match self {
            Exactness::Exact => None,
            Exactness::LittleO(k) | Exactness::BigO(k) => Some(*k),
        }
    }

    fn big(&self) -> bool {
        matches!(self, Exactness::BigO(_))
    }

    fn with_key(big: bool, k: Key) -> Self {
        if big {
            Exactness::BigO(k)
        } else {
            Exactness::LittleO(k)
        }
    }

    /// The weaker of two tags at the coarser order.
    pub fn weaker(a: Exactness, b: Exactness) -> Exactness {
        match (a.key(), b.key()) {
            (None, _) => b,
            (_, None) => a,
            (Some(x), Some(y)) => match x.cmp(&y) {
                Ordering::Greater => a,
                Ordering::Less => b,
                Ordering::Equal => Self::with_key(a.big() || b.big(), x),
            },
        }
    }

    pub fn shift(self, k: Key) -> Exactness {
        match self {
            Exactness::Exact => Exactness::Exact,
            Exactness::LittleO(x) => Exactness::LittleO(x.add(k)),
            Exactness::BigO(x) => Exactness::BigO(x.add(k)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparison {
    Less,
    Equal,
    Greater,
    Undetermined,
}

impl From<Ordering> for Comparison {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => Comparison::Less,
            Ordering::Equal => Comparison::Equal,
            Ordering::Greater => Comparison::Greater,
        }
    }
}

/// Sign of the (unstored) infinitesimal tail of a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InfSign {
    Negative,
    Zero,
    Positive,
    Unknown,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term<T> {
    pub coeff: Constant<T>,
    pub key: Key,
}

/// A surnatural number (or, transiently, a truncated series) in normal form:
/// terms strictly decreasing by key, no zero coefficients, and every term
/// dominating the remainder order.
#[derive(Clone, Debug, PartialEq)]
pub struct SurnatValue<T> {
    terms: Vec<Term<T>>,
    exactness: Exactness,
}

impl<T: Scalar> SurnatValue<T> {
    pub fn zero() -> Self {
        SurnatValue { terms: Vec::new(), exactness: Exactness::Exact }
    }

    pub fn from_terms(terms: Vec<Term<T>>, exactness: Exactness) -> Self {
        let mut v = SurnatValue { terms: Vec::new(), exactness };
        for t in terms {
            v.push_term(t);
        }
        v.normalise();
        v
    }

    pub fn term(coeff: Constant<T>, key: Key) -> Self {
        Self::from_terms(vec![Term { coeff, key }], Exactness::Exact)
    }

    pub fn constant(c: Constant<T>) -> Self {
        Self::term(c, Key::UNIT)
    }

    pub fn from_scalar(q: T) -> Self {
        Self::constant(Constant::from_scalar(q))
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(Constant::from_int(n))
    }

    pub fn from_rational(q: &BigRational) -> Self {
        Self::constant(Constant::from_rational(q))
    }

    pub fn omega() -> Self {
        Self::term(Constant::from_int(1), Key::omega_pow(1, 1))
    }

    /// log w
    pub fn log_omega() -> Self {
        Self::term(Constant::from_int(1), Key::new(Exp::zero(), 1))
    }

    /// c * w^(p/q)
    pub fn omega_pow(c: T, p: i64, q: i64) -> Self {
        Self::term(Constant::from_scalar(c), Key::omega_pow(p, q))
    }

    pub fn with_exactness(mut self, e: Exactness) -> Self {
        self.exactness = Exactness::weaker(self.exactness, e);
        self.normalise();
        self
    }

    pub fn terms(&self) -> &[Term<T>] {
        &self.terms
    }

    pub fn exactness(&self) -> Exactness {
        self.exactness
    }

    pub fn is_exact(&self) -> bool {
        self.exactness == Exactness::Exact
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.is_exact()
    }

    fn push_term(&mut self, t: Term<T>) {
        if t.coeff.is_zero() {
            return;
        }
        if let Some(x) = self.terms.iter_mut().find(|x| x.key == t.key) {
            x.coeff = x.coeff.add(&t.coeff);
        } else {
            self.terms.push(t);
        }
    }

    fn normalise(&mut self) {
        self.terms.retain(|t| !t.coeff.is_zero());
        self.terms.sort_by(|a, b| b.key.cmp(&a.key));
        match self.exactness {
            Exactness::Exact => {}
            Exactness::LittleO(k) => self.terms.retain(|t| t.key >= k),
            Exactness::BigO(k) => self.terms.retain(|t| t.key > k),
        }
    }

    pub fn leading(&self) -> Option<&Term<T>> {
        self.terms.first()
    }

    pub fn coeff_at(&self, k: Key) -> Constant<T> {
        self.terms.iter().find(|t| t.key == k).map(|t| t.coeff.clone()).unwrap_or_else(Constant::zero)
    }

    /// The finite constant part.
    pub fn standard_part(&self) -> Constant<T> {
        self.coeff_at(Key::UNIT)
    }

    pub fn filter(&self, f: impl Fn(&Key) -> bool, exactness: Exactness) -> Self {
        Self::from_terms(self.terms.iter().filter(|t| f(&t.key)).cloned().collect(), exactness)
    }

    pub fn infinite_part(&self) -> Self {
        self.filter(|k| k.is_infinite(), Exactness::Exact)
    }

    pub fn infinitesimal_part(&self) -> Self {
        self.filter(|k| k.is_infinitesimal(), self.exactness)
    }

    /// Drop infinitesimal terms; the result keeps only remainders at or
    /// above the unit order.
    pub fn without_infinitesimals(&self) -> Self {
        let e = match self.exactness.key() {
            Some(k) if k.is_infinitesimal() => Exactness::Exact,
            _ => self.exactness,
        };
        self.filter(|k| !k.is_infinitesimal(), e)
    }

    pub fn has_infinitesimals(&self) -> bool {
        self.terms.iter().any(|t| t.key.is_infinitesimal())
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|t| !t.key.is_infinite())
            && self.exactness.key().map_or(true, |k| !k.is_infinite())
    }

    /// Finite exact rational value.
    pub fn as_rational(&self) -> Option<BigRational> {
        if !self.is_exact() || self.terms.iter().any(|t| t.key != Key::UNIT) {
            return None;
        }
        self.standard_part().as_rational()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        Self::from_terms(terms, Exactness::weaker(self.exactness, o.exactness))
    }

    pub fn neg(&self) -> Self {
        SurnatValue {
            terms: self.terms.iter().map(|t| Term { coeff: t.coeff.neg(), key: t.key }).collect(),
            exactness: self.exactness,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &T) -> Self {
        if s.is_zero() {
            return SurnatValue { terms: Vec::new(), exactness: self.exactness };
        }
        Self::from_terms(
            self.terms.iter().map(|t| Term { coeff: t.coeff.scale(s), key: t.key }).collect(),
            self.exactness,
        )
    }

    pub fn scale_const(&self, c: &Constant<T>) -> Self {
        Self::from_terms(
            self.terms.iter().map(|t| Term { coeff: t.coeff.mul(c), key: t.key }).collect(),
            self.exactness,
        )
    }

    /// Order of the largest term, or of the remainder if there are no terms.
    pub fn order(&self) -> Option<Key> {
        self.terms.first().map(|t| t.key).or(self.exactness.key())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut terms = Vec::new();
        for a in &self.terms {
            for b in &o.terms {
                terms.push(Term { coeff: a.coeff.mul(&b.coeff), key: a.key.add(b.key) });
            }
        }
        let mut ex = Exactness::Exact;
        if let (Some(_), Some(lead)) = (self.exactness.key(), o.order()) {
            ex = Exactness::weaker(ex, self.exactness.shift(lead));
        }
        if let (Some(_), Some(lead)) = (o.exactness.key(), self.order()) {
            ex = Exactness::weaker(ex, o.exactness.shift(lead));
        }
        Self::from_terms(terms, ex)
    }

    pub fn powi(&self, e: u32) -> Self {
        let mut acc = Self::from_int(1);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact comparison. Undetermined when a remainder hides the answer or
    /// the leading coefficient sign cannot be certified.
    pub fn compare(&self, o: &Self) -> Comparison {
        let d = self.sub(o);
        match d.terms.first() {
            None => {
                if d.is_exact() {
                    Comparison::Equal
                } else {
                    Comparison::Undetermined
                }
            }
            Some(t) => match t.coeff.sign() {
                Some(s) => s.into(),
                None => Comparison::Undetermined,
            },
        }
    }

    /// Sign of the infinitesimal tail.
    pub fn infinitesimal_sign(&self) -> InfSign {
        match self.terms.iter().find(|t| t.key.is_infinitesimal()) {
            Some(t) => match t.coeff.sign() {
                Some(Ordering::Greater) => InfSign::Positive,
                Some(Ordering::Less) => InfSign::Negative,
                _ => InfSign::Unknown,
            },
            None => {
                if self.is_exact() {
                    InfSign::Zero
                } else {
                    InfSign::Unknown
                }
            }
        }
    }

    pub fn convert<U: Scalar>(&self) -> Option<SurnatValue<U>> {
        let mut terms = Vec::new();
        for t in &self.terms {
            terms.push(Term { coeff: t.coeff.convert()?, key: t.key });
        }
        Some(SurnatValue::from_terms(terms, self.exactness))
    }

    pub fn leading_coeff_sign(&self) -> Option<Ordering> {
        self.terms.first().map_or(Some(Ordering::Equal), |t| t.coeff.sign())
    }

    pub fn is_nonnegative(&self) -> Option<bool> {
        match self.leading_coeff_sign()? {
            Ordering::Less => Some(false),
            _ => Some(true),
        }
    }
}

impl<T: Scalar> Default for SurnatValue<T> {
    fn default() -> Self {
        Self::zero()
    }
}

pub fn exp_to_rational(e: Exp) -> BigRational {
    BigRational::new((*e.numer()).into(), (*e.denom()).into())
}

pub fn half() -> Exp {
    Exp::new(1, 2)
}

pub fn is_one_key(k: Key) -> bool {
    k.omega.is_one() && k.log == 0
}
