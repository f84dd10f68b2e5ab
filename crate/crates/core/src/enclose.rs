//! Certified rational enclosures of logarithms, roots and pi.
//!
//! Everything is computed in binary fixed point with an explicit ulp error
//! budget; callers get `(lo, hi)` with `lo <= true value <= hi`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn fixed_to_rat(v: BigInt, w: u32) -> BigRational {
    BigRational::new(v, BigInt::one() << w)
}

/// atanh(a/b) * 2^w for 0 <= a/b < 1/2, with error bound in ulps.
fn atanh_fixed(a: &BigInt, b: &BigInt, w: u32) -> (BigInt, BigInt) {
    let zf: BigInt = (a << w) / b;
    let z2: BigInt = (&zf * &zf) >> w;
    let mut term = zf;
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    loop {
        let t = &term / BigInt::from(2 * k + 1);
        if t.is_zero() {
            break;
        }
        sum += t;
        term = (&term * &z2) >> w;
        k += 1;
    }
    (sum, BigInt::from(4 * k + 8))
}

/// atan(1/k) * 2^w, error bound in ulps.
fn atan_inv_fixed(k: u64, w: u32) -> (BigInt, BigInt) {
    let k2 = BigInt::from(k * k);
    let mut term: BigInt = (BigInt::one() << w) / BigInt::from(k);
    let mut sum = BigInt::zero();
    let mut i: u64 = 0;
    while !term.is_zero() {
        let t = &term / BigInt::from(2 * i + 1);
        if i % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
        term /= &k2;
        i += 1;
    }
    (sum, BigInt::from(2 * i + 4))
}

fn cache() -> &'static Mutex<HashMap<(u8, u32), (BigRational, BigRational)>> {
    static C: OnceLock<Mutex<HashMap<(u8, u32), (BigRational, BigRational)>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached(tag: u8, prec: u32, f: impl FnOnce() -> (BigRational, BigRational)) -> (BigRational, BigRational) {
    if let Some(v) = cache().lock().unwrap().get(&(tag, prec)) {
        return v.clone();
    }
    let v = f();
    cache().lock().unwrap().insert((tag, prec), v.clone());
    v
}

pub fn pi_bounds(prec: u32) -> (BigRational, BigRational) {
    cached(0, prec, || {
        let w = prec + 16;
        let (a5, e5) = atan_inv_fixed(5, w);
        let (a239, e239) = atan_inv_fixed(239, w);
        let v = a5 * 16 - a239 * 4;
        let e = e5 * 16 + e239 * 4;
        (fixed_to_rat(&v - &e, w), fixed_to_rat(&v + &e, w))
    })
}

fn ln2_fixed(w: u32) -> (BigInt, BigInt) {
    let (a, e) = atanh_fixed(&BigInt::one(), &BigInt::from(3), w);
    (a * 2, e * 2)
}

/// Natural log of a positive rational.
pub fn ln_bounds(x: &BigRational, prec: u32) -> (BigRational, BigRational) {
    assert!(x.is_positive(), "ln of non-positive value");
    if x.is_one() {
        return (BigRational::zero(), BigRational::zero());
    }
    let (n, d) = (x.numer().clone(), x.denom().clone());
    let e = n.bits() as i64 - d.bits() as i64;
    let (yn, yd) = if e >= 0 { (n, d << e as u32) } else { (n << (-e) as u32, d) };
    let w = prec + 24 + 64 - (e.unsigned_abs().leading_zeros());
    let num = &yn - &yd;
    let den = &yn + &yd;
    let (mut a, ea) = atanh_fixed(&num.abs(), &den, w);
    if num.is_negative() {
        a = -a;
    }
    let mut v = a * 2;
    let mut err = ea * 2;
    if e != 0 {
        let (l2, el2) = ln2_fixed(w);
        v += l2 * e;
        err += el2 * e.abs();
    }
    (fixed_to_rat(&v - &err, w), fixed_to_rat(&v + &err, w))
}

/// Cached ln(p) for small integers; hot in counting-form evaluation.
pub fn ln_int_bounds(p: u64, prec: u32) -> (BigRational, BigRational) {
    let tag = 16u8.wrapping_add((p % 200) as u8);
    if p < 200 {
        cached(tag, prec, || ln_bounds(&BigRational::from_integer(BigInt::from(p)), prec))
    } else {
        ln_bounds(&BigRational::from_integer(BigInt::from(p)), prec)
    }
}

fn floor_root(v: &BigInt, k: u32) -> BigInt {
    if v.sign() != Sign::Plus {
        return BigInt::zero();
    }
    v.nth_root(k)
}

fn ceil_root(v: &BigInt, k: u32) -> BigInt {
    let r = floor_root(v, k);
    if r.pow(k) < *v {
        r + 1
    } else {
        r
    }
}

/// k-th root of a non-negative rational.
pub fn root_bounds(x: &BigRational, k: u32, prec: u32) -> (BigRational, BigRational) {
    assert!(!x.is_negative() && k >= 1);
    if let Some(r) = exact_root(x, k) {
        return (r.clone(), r);
    }
    let s = BigRational::from_integer(BigInt::one() << (k * prec)) * x;
    let lo = floor_root(&s.floor().to_integer(), k);
    let hi = ceil_root(&s.ceil().to_integer(), k);
    (fixed_to_rat(lo, prec), fixed_to_rat(hi, prec))
}

/// Exact rational k-th root when one exists.
pub fn exact_root(x: &BigRational, k: u32) -> Option<BigRational> {
    if k == 1 {
        return Some(x.clone());
    }
    let neg = x.is_negative();
    if neg && k % 2 == 0 {
        return None;
    }
    let n = x.numer().abs();
    let d = x.denom().clone();
    let rn = n.nth_root(k);
    let rd = d.nth_root(k);
    if rn.pow(k) == n && rd.pow(k) == d {
        let r = BigRational::new(rn, rd);
        Some(if neg { -r } else { r })
    } else {
        None
    }
}

/// Exact integer logarithm: `Some(e)` when x = b^e for integer e.
pub fn exact_log(x: &BigRational, b: &BigRational) -> Option<i64> {
    if !x.is_positive() || !b.is_positive() || b.is_one() {
        return None;
    }
    if x.is_one() {
        return Some(0);
    }
    let (base, flip) = if *b > BigRational::one() { (b.clone(), false) } else { (b.recip(), true) };
    let (target, neg) = if *x >= BigRational::one() { (x.clone(), false) } else { (x.recip(), true) };
    let mut acc = BigRational::one();
    let mut e = 0i64;
    while acc < target {
        acc *= &base;
        e += 1;
    }
    if acc != target {
        return None;
    }
    let e = if neg { -e } else { e };
    Some(if flip { -e } else { e })
}

/// Dyadic truncation keeping roughly `prec` fractional bits.
pub fn round_down(x: &BigRational, prec: u32) -> BigRational {
    let s = x * BigRational::from_integer(BigInt::one() << prec);
    fixed_to_rat(s.floor().to_integer(), prec)
}

pub fn round_up(x: &BigRational, prec: u32) -> BigRational {
    let s = x * BigRational::from_integer(BigInt::one() << prec);
    fixed_to_rat(s.ceil().to_integer(), prec)
}

/// Prime factorisation of a small positive integer.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Prime factorisation of a positive rational as signed exponents.
pub fn factor_rational(q: &BigRational) -> Option<Vec<(u64, i64)>> {
    let n = q.numer().to_u64()?;
    let d = q.denom().to_u64()?;
    let mut m: std::collections::BTreeMap<u64, i64> = Default::default();
    for (p, e) in factor(n) {
        *m.entry(p).or_default() += e as i64;
    }
    for (p, e) in factor(d) {
        *m.entry(p).or_default() -= e as i64;
    }
    Some(m.into_iter().filter(|(_, e)| *e != 0).collect())
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn f(q: &BigRational) -> f64 {
        q.to_f64().unwrap()
    }

    #[test]
    fn pi_encloses() {
        let (lo, hi) = pi_bounds(80);
        assert!(f(&lo) <= std::f64::consts::PI && std::f64::consts::PI <= f(&hi));
        assert!(f(&(hi - lo)) < 1e-20);
    }

    #[test]
    fn ln_matches_float() {
        for (n, d) in [(2i64, 1i64), (3, 1), (1, 3), (1000, 7), (5, 4), (1, 1024), (99991, 1)] {
            let x = rat(n, d);
            let (lo, hi) = ln_bounds(&x, 64);
            let v = (n as f64 / d as f64).ln();
            assert!(f(&lo) <= v + 1e-12 && v - 1e-12 <= f(&hi), "ln {n}/{d}");
            assert!(lo <= hi);
            assert!(f(&(hi - lo)) < 1e-15);
        }
    }

    #[test]
    fn roots() {
        assert_eq!(exact_root(&rat(9, 4), 2), Some(rat(3, 2)));
        assert_eq!(exact_root(&int(-27), 3), Some(int(-3)));
        assert_eq!(exact_root(&int(2), 2), None);
        let (lo, hi) = root_bounds(&int(2), 2, 60);
        assert!(&lo * &lo < int(2) && &hi * &hi > int(2));
    }

    #[test]
    fn exact_logs() {
        assert_eq!(exact_log(&int(8), &int(2)), Some(3));
        assert_eq!(exact_log(&rat(1, 9), &int(3)), Some(-2));
        assert_eq!(exact_log(&int(6), &int(2)), None);
        assert_eq!(exact_log(&int(4), &rat(1, 2)), Some(-2));
    }

    #[test]
    fn factorisation() {
        assert_eq!(factor(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factor_rational(&rat(12, 45)), Some(vec![(2, 2), (3, -1), (5, -1)]));
    }
}
