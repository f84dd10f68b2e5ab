//! Set descriptions: atoms, combinators, a text grammar, canonical forms,
//! exact membership and enumeration.

mod canon;
mod extend;
mod parse;
mod periodic;
pub mod poly;
mod render;

use std::sync::OnceLock;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::funexpr::{tables, FnForm};
use crate::surnat::{ExactConst, Exp};

pub use canon::{canonicalize, poly_atom};
pub use periodic::Periodic;
pub use poly::QPoly;

pub type Q = Ratio<i64>;

/// An element of a described set: a rational, an ordered pair, or a tagged
/// element of a disjoint union.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Num(Q),
    Pair(Box<Elem>, Box<Elem>),
    Tag(u8, Box<Elem>),
}

impl Elem {
    pub fn int(n: i64) -> Self {
        Elem::Num(Q::from_integer(n))
    }

    pub fn pair(a: Elem, b: Elem) -> Self {
        Elem::Pair(Box::new(a), Box::new(b))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SetExpr {
    N,
    Z,
    QPlus,
    HalfN,
    Primes,
    /// distinct Fibonacci numbers 1, 2, 3, 5, ...
    Fib,
    Tri,
    /// numbers with an odd count of binary digits
    Od2,
    /// {k*j + m : j >= 1}
    Arith { k: i64, m: i64 },
    /// {j^k : j >= 1}
    Power(u32),
    /// {p(j) : j >= 1}, p integer-valued and increasing
    Poly(QPoly),
    /// {a * r^(j-1) : j >= 1}
    Geom { a: i64, r: i64 },
    Finite(Vec<Q>),
    /// rationals in (k-1, k]
    Band(i64),
    Union(Box<SetExpr>, Box<SetExpr>),
    Inter(Box<SetExpr>, Box<SetExpr>),
    Diff(Box<SetExpr>, Box<SetExpr>),
    DisjUnion(Box<SetExpr>, Box<SetExpr>),
    Cart(Box<SetExpr>, Box<SetExpr>),
    Neg(Box<SetExpr>),
    /// {a + r}
    Shift(Box<SetExpr>, Q),
    /// {a * r}
    Scale(Box<SetExpr>, Q),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SetError {
    #[error("syntax error at {pos}: expected {expected}")]
    Syntax { pos: usize, expected: String },
    #[error("constraint violated at {pos}: {msg}")]
    Constraint { pos: usize, msg: String },
    #[error("cannot enumerate: {0}")]
    UnsupportedEnumeration(String),
    #[error("no extension rule: {0}")]
    UnsupportedExtension(String),
}

fn bx(e: SetExpr) -> Box<SetExpr> {
    Box::new(e)
}

fn fib_list() -> &'static [i64] {
    static FIBS: OnceLock<Vec<i64>> = OnceLock::new();
    FIBS.get_or_init(|| {
        let mut v = vec![1i64, 2];
        loop {
            let k = v.len();
            match v[k - 1].checked_add(v[k - 2]) {
                Some(x) => v.push(x),
                None => break v,
            }
        }
    })
}

fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    if (n as u64) < 1 << 20 {
        let p = tables::prime_pi(n as u64).unwrap();
        return p != tables::prime_pi(n as u64 - 1).unwrap();
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Exact integer k-th root, if any.
pub fn exact_root(x: i64, k: u32) -> Option<i64> {
    if x < 0 {
        return None;
    }
    let guess = (x as f64).powf(1.0 / k as f64).round() as i64;
    (guess.saturating_sub(1)..=guess + 1).find(|&r| r >= 0 && r.checked_pow(k) == Some(x))
}

fn is_geom(x: i64, a: i64, r: i64) -> bool {
    if x < a || x % a != 0 {
        return false;
    }
    let mut y = x / a;
    while y % r == 0 {
        y /= r;
    }
    y == 1
}

impl SetExpr {
    pub fn arith(k: i64, m: i64) -> Self {
        SetExpr::Arith { k, m }
    }

    pub fn finite(xs: &[i64]) -> Self {
        SetExpr::Finite(xs.iter().map(|&x| Q::from_integer(x)).collect())
    }

    pub fn empty() -> Self {
        SetExpr::Finite(Vec::new())
    }

    pub fn union(self, o: SetExpr) -> Self {
        SetExpr::Union(bx(self), bx(o))
    }

    pub fn inter(self, o: SetExpr) -> Self {
        SetExpr::Inter(bx(self), bx(o))
    }

    pub fn diff(self, o: SetExpr) -> Self {
        SetExpr::Diff(bx(self), bx(o))
    }

    pub fn disj(self, o: SetExpr) -> Self {
        SetExpr::DisjUnion(bx(self), bx(o))
    }

    pub fn cart(self, o: SetExpr) -> Self {
        SetExpr::Cart(bx(self), bx(o))
    }

    pub fn negate(self) -> Self {
        SetExpr::Neg(bx(self))
    }

    pub fn shift(self, r: Q) -> Self {
        SetExpr::Shift(bx(self), r)
    }

    pub fn scale(self, r: Q) -> Self {
        SetExpr::Scale(bx(self), r)
    }

    pub fn complement(self) -> Self {
        SetExpr::N.diff(self)
    }

    pub fn is_empty_literal(&self) -> bool {
        matches!(self, SetExpr::Finite(v) if v.is_empty())
    }

    pub fn parse(s: &str) -> Result<Self, SetError> {
        parse::parse(s)
    }

    pub fn children(&self) -> Vec<&SetExpr> {
        use SetExpr::*;
        match self {
            Union(a, b) | Inter(a, b) | Diff(a, b) | DisjUnion(a, b) | Cart(a, b) => vec![a, b],
            Neg(a) | Shift(a, _) | Scale(a, _) => vec![a],
            _ => vec![],
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children().iter().map(|c| c.node_count()).sum::<usize>()
    }

    fn any_node(&self, f: &dyn Fn(&SetExpr) -> bool) -> bool {
        f(self) || self.children().iter().any(|c| c.any_node(f))
    }

    /// Structural test that every element is a positive integer.
    pub fn is_nat_subset(&self) -> bool {
        use SetExpr::*;
        match self {
            N | Primes | Fib | Tri | Od2 | Arith { .. } | Power(_) | Poly(_) | Geom { .. } => true,
            Finite(v) => v.iter().all(|q| q.is_integer() && *q >= Q::one()),
            Union(a, b) => a.is_nat_subset() && b.is_nat_subset(),
            Inter(a, b) => a.is_nat_subset() || b.is_nat_subset(),
            Diff(a, _) => a.is_nat_subset(),
            Scale(a, r) => r.is_integer() && r.is_positive() && a.is_nat_subset(),
            Shift(a, r) => r.is_integer() && !r.is_negative() && a.is_nat_subset(),
            _ => false,
        }
    }

    /// Membership of a rational.
    pub fn contains_q(&self, q: Q) -> bool {
        use SetExpr::*;
        let int = q.is_integer();
        let x = q.to_integer();
        match self {
            N => int && x >= 1,
            Z => int,
            QPlus => q.is_positive(),
            HalfN => q.is_positive() && (q * 2).is_integer(),
            Primes => int && is_prime(x),
            Fib => int && fib_list().binary_search(&x).is_ok(),
            Tri => int && x >= 1 && exact_root(8 * x + 1, 2).is_some(),
            Od2 => int && x >= 1 && (64 - x.leading_zeros()) % 2 == 1,
            Arith { k, m } => int && x >= k + m && (x - m).is_multiple_of(k),
            Power(k) => int && x >= 1 && exact_root(x, *k).is_some(),
            Poly(p) => int && p.index_of(x).is_some(),
            Geom { a, r } => int && is_geom(x, *a, *r),
            Finite(v) => v.binary_search(&q).is_ok(),
            Band(k) => q > Q::from_integer(k - 1) && q <= Q::from_integer(*k),
            Union(a, b) => a.contains_q(q) || b.contains_q(q),
            Inter(a, b) => a.contains_q(q) && b.contains_q(q),
            Diff(a, b) => a.contains_q(q) && !b.contains_q(q),
            DisjUnion(..) | Cart(..) => false,
            Neg(a) => a.contains_q(-q),
            Shift(a, r) => a.contains_q(q - r),
            Scale(a, r) => a.contains_q(q / r),
        }
    }

    pub fn contains_int(&self, x: i64) -> bool {
        self.contains_q(Q::from_integer(x))
    }

    pub fn contains(&self, e: &Elem) -> bool {
        use SetExpr::*;
        match (self, e) {
            (_, Elem::Num(q)) => self.contains_q(*q),
            (Union(a, b), _) => a.contains(e) || b.contains(e),
            (Inter(a, b), _) => a.contains(e) && b.contains(e),
            (Diff(a, b), _) => a.contains(e) && !b.contains(e),
            (DisjUnion(a, _), Elem::Tag(0, x)) => a.contains(x),
            (DisjUnion(_, b), Elem::Tag(1, x)) => b.contains(x),
            (Cart(a, b), Elem::Pair(x, y)) => a.contains(x) && b.contains(y),
            _ => false,
        }
    }

    /// Elements in `1..=upto` in increasing order; only positive integers
    /// are listed.
    pub fn enumerate(&self, upto: i64) -> Result<Vec<i64>, SetError> {
        self.check_enumerable()?;
        Ok((1..=upto).filter(|&x| self.contains_int(x)).collect())
    }

    /// Prefix counts: entry n is |A ∩ {1..n}|, entry 0 is 0.
    pub fn prefix_counts(&self, upto: i64) -> Result<Vec<u64>, SetError> {
        self.check_enumerable()?;
        let mut out = Vec::with_capacity(upto as usize + 1);
        let mut c = 0u64;
        out.push(0);
        for x in 1..=upto {
            if self.contains_int(x) {
                c += 1;
            }
            out.push(c);
        }
        Ok(out)
    }

    fn check_enumerable(&self) -> Result<(), SetError> {
        if self.any_node(&|e| matches!(e, SetExpr::Cart(..) | SetExpr::DisjUnion(..))) {
            return Err(SetError::UnsupportedEnumeration(format!(
                "{} needs a reference ordering",
                self.render(false)
            )));
        }
        Ok(())
    }

    /// Defining polynomial, for atoms that have one.
    pub fn as_qpoly(&self) -> Option<QPoly> {
        use SetExpr::*;
        match self {
            N => Some(QPoly::new(vec![Q::zero(), Q::one()])),
            Arith { k, m } => Some(QPoly::new(vec![Q::from_integer(*m), Q::from_integer(*k)])),
            Power(k) => {
                let mut c = vec![Q::zero(); *k as usize + 1];
                c[*k as usize] = Q::one();
                Some(QPoly::new(c))
            }
            Tri => Some(QPoly::new(vec![Q::zero(), Q::new(1, 2), Q::new(1, 2)])),
            Poly(p) => Some(p.clone()),
            _ => None,
        }
    }

    /// Defining function a(n), the n-th element, for atoms that have a
    /// closed form.
    pub fn defining_fn(&self) -> Option<FnForm> {
        use SetExpr::*;
        if let Some(p) = self.as_qpoly() {
            return Some(p.to_fn());
        }
        match self {
            Geom { a, r } => {
                // a = r^s folds into the exponent
                let (mut s, mut rest) = (0i64, *a);
                while rest % r == 0 {
                    rest /= r;
                    s += 1;
                }
                let e = FnForm::Var.add(FnForm::int(s - 1));
                let e = crate::funexpr::simplify::simplify(&e);
                let pw = FnForm::exp(ExactConst::from_int(*r), e);
                Some(if rest == 1 { pw } else { FnForm::int(rest).mul(pw) })
            }
            Fib => {
                let e = FnForm::Var.add(FnForm::int(1));
                let p = FnForm::exp(ExactConst::phi(), e);
                let s5 = ExactConst::from_int(5).pow(Exp::new(1, 2))?;
                Some(p.div(FnForm::Const(s5)).round())
            }
            // N with an initial segment removed
            Diff(a, b) if **a == N => match &**b {
                Finite(xs) => {
                    let k = xs.len() as i64;
                    let init = xs.iter().enumerate().all(|(i, x)| *x == Q::from_integer(i as i64 + 1));
                    init.then(|| crate::funexpr::simplify::simplify(&FnForm::Var.add(FnForm::int(k))))
                }
                _ => None,
            },
            _ => None,
        }
    }

    /// A few canonical names used in reports.
    pub fn label(&self) -> String {
        self.render(false)
    }
}

impl std::fmt::Display for SetExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render(false))
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> SetExpr {
        SetExpr::parse(s).unwrap()
    }

    #[test]
    fn enumerations() {
        assert_eq!(p("3N u 4N").enumerate(12).unwrap(), vec![3, 4, 6, 8, 9, 12]);
        assert_eq!(p("{5}").enumerate(10).unwrap(), vec![5]);
        assert_eq!(p("tri").enumerate(10).unwrap(), vec![1, 3, 6, 10]);
        assert_eq!(p("fib").enumerate(20).unwrap(), vec![1, 2, 3, 5, 8, 13]);
        assert_eq!(p("primes").enumerate(20).unwrap(), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(p("od2").enumerate(9).unwrap(), vec![1, 4, 5, 6, 7]);
        assert_eq!(p("geom(3,2)").enumerate(50).unwrap(), vec![3, 6, 12, 24, 48]);
        assert_eq!(p("2N+1").enumerate(9).unwrap(), vec![3, 5, 7, 9]);
        assert_eq!(p("N^(3)").enumerate(30).unwrap(), vec![1, 8, 27]);
        assert!(p("N x N").enumerate(5).is_err());
    }

    #[test]
    fn memberships() {
        let h = p("halfN");
        assert!(h.contains_q(Q::new(3, 2)));
        assert!(!h.contains_q(Q::new(1, 3)));
        assert!(p("N - 1/2").contains_q(Q::new(1, 2)));
        assert!(p("-N").contains_int(-3));
        assert!(p("band(2)").contains_q(Q::new(3, 2)));
        assert!(!p("band(2)").contains_q(Q::new(1, 1)));
        let e = Elem::pair(Elem::int(2), Elem::int(3));
        assert!(p("N x N").contains(&e));
        assert!(p("N |+| {1}").contains(&Elem::Tag(1, Box::new(Elem::int(1)))));
        assert!(!p("N |+| {1}").contains(&Elem::Tag(1, Box::new(Elem::int(2)))));
    }

    #[test]
    fn defining_functions() {
        let f = p("geom(3,3)").defining_fn().unwrap();
        assert_eq!(f.render(), "3^n");
        let g = p("fib").defining_fn().unwrap();
        let vals: Vec<i64> = (1..8).map(|n| g.eval_int(n).unwrap()).collect();
        assert_eq!(vals, vec![1, 2, 3, 5, 8, 13, 21]);
        assert_eq!(p("tri").defining_fn().unwrap().render(), "n^2/2 + n/2");
    }

    #[test]
    fn prefix_counts_match_enumeration() {
        let e = p("(2N u N^(2)) \\ {4}");
        let c = e.prefix_counts(100).unwrap();
        assert_eq!(c[100] as usize, e.enumerate(100).unwrap().len());
        assert!(e.is_nat_subset());
        assert!(!p("N - 1/2").is_nat_subset());
    }
}
