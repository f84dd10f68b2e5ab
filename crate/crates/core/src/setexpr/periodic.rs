//! Eventually periodic subsets of N: a residue pattern modulo M plus a finite
//! set of exceptions. Boolean combinations of N, arithmetic progressions and
//! finite sets stay in this form.

use std::collections::BTreeSet;

use num_integer::Integer;

use super::{SetExpr, Q};

/// Largest modulus kept before giving up.
const MAX_MODULUS: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Periodic {
    pub modulus: u64,
    /// indexed by n mod modulus
    pub residues: Vec<bool>,
    /// positive integers whose membership differs from the pattern
    pub exceptions: BTreeSet<i64>,
}

impl Periodic {
    pub fn pattern_has(&self, n: i64) -> bool {
        self.residues[n.rem_euclid(self.modulus as i64) as usize]
    }

    pub fn contains(&self, n: i64) -> bool {
        n >= 1 && (self.pattern_has(n) != self.exceptions.contains(&n))
    }

    /// Number of residues in the pattern.
    pub fn weight(&self) -> u64 {
        self.residues.iter().filter(|&&b| b).count() as u64
    }

    pub fn is_finite(&self) -> bool {
        self.weight() == 0
    }

    /// Exceptions split into (added, removed) relative to the pattern.
    pub fn split_exceptions(&self) -> (Vec<i64>, Vec<i64>) {
        self.exceptions.iter().partition(|&&n| !self.pattern_has(n))
    }

    /// Signed element offset against the pure pattern.
    pub fn offset(&self) -> i64 {
        let (a, r) = self.split_exceptions();
        a.len() as i64 - r.len() as i64
    }

    pub fn from_expr(e: &SetExpr) -> Option<Periodic> {
        use SetExpr::*;
        match e {
            N => Some(Periodic { modulus: 1, residues: vec![true], exceptions: BTreeSet::new() }),
            Arith { k, m } => {
                let k = *k as u64;
                let mut residues = vec![false; k as usize];
                residues[m.rem_euclid(k as i64) as usize] = true;
                let exceptions = (1..k as i64 + m).filter(|n| (n - m).rem_euclid(k as i64) == 0).collect();
                Some(Periodic { modulus: k, residues, exceptions }.reduced())
            }
            Finite(v) => {
                if !v.iter().all(|q| q.is_integer() && *q >= Q::from_integer(1)) {
                    return None;
                }
                Some(Periodic { modulus: 1, residues: vec![false], exceptions: v.iter().map(|q| q.to_integer()).collect() })
            }
            Union(a, b) => Self::combine(&Self::from_expr(a)?, &Self::from_expr(b)?, |x, y| x || y),
            Inter(a, b) => Self::combine(&Self::from_expr(a)?, &Self::from_expr(b)?, |x, y| x && y),
            Diff(a, b) => Self::combine(&Self::from_expr(a)?, &Self::from_expr(b)?, |x, y| x && !y),
            Scale(a, r) if r.is_integer() && *r >= Q::from_integer(1) => {
                let p = Self::from_expr(a)?;
                let j = r.to_integer() as u64;
                let modulus = p.modulus.checked_mul(j).filter(|&m| m <= MAX_MODULUS)?;
                let residues = (0..modulus).map(|t| t % j == 0 && p.pattern_has((t / j) as i64)).collect();
                let exceptions = p.exceptions.iter().map(|x| x * j as i64).collect();
                Some(Periodic { modulus, residues, exceptions }.reduced())
            }
            Shift(a, r) if r.is_integer() && *r >= Q::from_integer(0) => {
                let p = Self::from_expr(a)?;
                let s = r.to_integer();
                let residues = (0..p.modulus as i64).map(|t| p.pattern_has(t - s)).collect();
                let mut out = Periodic { modulus: p.modulus, residues, exceptions: BTreeSet::new() };
                let top = p.exceptions.iter().next_back().copied().unwrap_or(0) + s;
                out.exceptions = (1..=top).filter(|&n| (n - s >= 1 && p.contains(n - s)) != out.pattern_has(n)).collect();
                Some(out.reduced())
            }
            _ => None,
        }
    }

    pub fn combine(a: &Periodic, b: &Periodic, op: fn(bool, bool) -> bool) -> Option<Periodic> {
        let modulus = a.modulus.lcm(&b.modulus);
        if modulus > MAX_MODULUS {
            return None;
        }
        let residues: Vec<bool> =
            (0..modulus as i64).map(|t| op(a.pattern_has(t), b.pattern_has(t))).collect();
        let mut out = Periodic { modulus, residues, exceptions: BTreeSet::new() };
        let top = a.exceptions.iter().chain(b.exceptions.iter()).max().copied().unwrap_or(0);
        out.exceptions = (1..=top).filter(|&n| op(a.contains(n), b.contains(n)) != out.pattern_has(n)).collect();
        Some(out.reduced())
    }

    /// Same set with the smallest period.
    pub fn reduced(mut self) -> Periodic {
        let m = self.modulus;
        for d in 1..=m {
            if m % d == 0 && (0..m as usize).all(|i| self.residues[i] == self.residues[i % d as usize]) {
                self.residues.truncate(d as usize);
                self.modulus = d;
                break;
            }
        }
        self
    }

    /// Residue classes as representatives in 1..=modulus.
    pub fn classes(&self) -> Vec<i64> {
        let m = self.modulus as i64;
        (1..=m).filter(|&r| self.pattern_has(r)).collect()
    }

    /// Canonical expression: union of residue classes, then exceptions.
    pub fn to_expr(&self) -> SetExpr {
        let m = self.modulus as i64;
        let classes = self.classes();
        let base = if classes.len() as i64 == m {
            Some(SetExpr::N)
        } else {
            classes.iter().map(|&r| SetExpr::arith(m, r - m)).reduce(SetExpr::union)
        };
        let (added, removed) = self.split_exceptions();
        let mut e = base;
        if !removed.is_empty() {
            e = e.map(|b| b.diff(SetExpr::finite(&removed)));
        }
        if !added.is_empty() {
            let f = SetExpr::finite(&added);
            e = Some(match e {
                Some(b) => b.union(f),
                None => f,
            });
        }
        e.unwrap_or_else(SetExpr::empty)
    }

    pub fn is_subset_of(&self, o: &Periodic) -> bool {
        Self::combine(self, o, |x, y| x && !y).is_some_and(|d| d.is_finite() && d.exceptions.is_empty())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn per(s: &str) -> Periodic {
        Periodic::from_expr(&SetExpr::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn combinations() {
        let p = per("3N i 4N");
        assert_eq!(p.to_expr(), SetExpr::arith(12, 0));
        assert_eq!(per("2N u (2N-1)").to_expr(), SetExpr::N);
        assert_eq!(per("2N+1").to_expr(), SetExpr::parse("2N-1 \\ {1}").unwrap());
        assert_eq!(per("N \\ {1}").offset(), -1);
        assert_eq!(per("3N u 4N").weight(), 6);
        assert_eq!(per("3N u 4N").modulus, 12);
        assert!(per("{1,2}").is_finite());
        assert_eq!(per("(2N u 3N) * 2"), per("4N u 6N"));
        assert_eq!(per("2N + 3"), per("2N-1 \\ {1,3}"));
    }

    #[test]
    fn subsets() {
        assert!(per("4N").is_subset_of(&per("2N")));
        assert!(!per("2N").is_subset_of(&per("4N")));
        assert!(per("2N+1").is_subset_of(&per("2N-1")));
    }

    #[test]
    fn membership_matches_expression() {
        for s in ["3N u 4N \\ {12}", "N \\ 5N u {5}", "(7N+3) i (2N-1)", "2N i {1,2,3,4}"] {
            let e = SetExpr::parse(s).unwrap();
            let p = per(s);
            for n in 1..200 {
                assert_eq!(p.contains(n), e.contains_int(n), "{s} at {n}");
            }
        }
    }
}
