//! Rigorous evaluation by interval arithmetic. Points stay exact; floors,
//! thresholds and domain checks that an interval cannot settle ask for more
//! precision.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::{tables, FnError, FnForm, Table as Tb};
use crate::interval::{Endpoint, Interval};
use crate::scalar::Scalar;
use crate::surnat::ExactConst;

/// Working precisions (bits) tried by the exact evaluator.
pub const PREC_START: u32 = 64;
pub const PREC_MAX: u32 = 1024;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("outside the domain: {0}")]
    Domain(String),
    #[error("precision exhausted")]
    NeedPrecision,
    #[error("unsupported: {0}")]
    Unsupported(String),
}

type R<T> = Result<Interval<T>, EvalError>;

fn domain<T>(m: &str) -> Result<T, EvalError> {
    Err(EvalError::Domain(m.to_string()))
}

fn checked<T: Endpoint>(v: Interval<T>) -> R<T> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::NeedPrecision)
    }
}

fn const_interval<T: Endpoint>(c: &ExactConst, prec: u32) -> R<T> {
    if let Some(q) = c.as_rational() {
        return checked(Interval::from_rational(&q, prec));
    }
    thread_local! {
        static CACHE: std::cell::RefCell<std::collections::HashMap<(String, u32), Interval<BigRational>>> =
            Default::default();
    }
    let key = (format!("{c:?}"), prec.max(PREC_START));
    let e = match CACHE.with(|m| m.borrow().get(&key).cloned()) {
        Some(e) => e,
        None => {
            let e = c.enclose(key.1).ok_or(EvalError::NeedPrecision)?;
            CACHE.with(|m| m.borrow_mut().insert(key, e.clone()));
            e
        }
    };
    let lo = T::from_rational(&e.lo).down(prec);
    let hi = T::from_rational(&e.hi).up(prec);
    checked(Interval::new(lo, hi))
}

fn to_int<T: Endpoint>(x: &T) -> Option<BigInt> {
    x.to_rational().filter(crate::scalar::is_int).map(|q| q.to_integer())
}

fn from_u64<T: Endpoint>(v: u64) -> Interval<T> {
    Interval::point(T::from_u64(v).expect("table value fits the scalar type"))
}

impl FnForm {
    /// Enclosure of the form on the interval `x`.
    pub fn eval_in<T: Endpoint>(&self, x: &Interval<T>, prec: u32) -> R<T> {
        use FnForm::*;
        let v = match self {
            Const(c) => const_interval(c, prec)?,
            Var => x.clone(),
            Add(a, b) => a.eval_in(x, prec)?.add(&b.eval_in(x, prec)?, prec),
            Sub(a, b) => a.eval_in(x, prec)?.sub(&b.eval_in(x, prec)?, prec),
            Mul(a, b) => a.eval_in(x, prec)?.mul(&b.eval_in(x, prec)?, prec),
            Div(a, b) => {
                let d = b.eval_in(x, prec)?;
                match d.sign() {
                    Some(Ordering::Equal) => return domain("division by zero"),
                    None => return Err(EvalError::NeedPrecision),
                    _ => a.eval_in(x, prec)?.div(&d, prec).ok_or(EvalError::NeedPrecision)?,
                }
            }
            Neg(a) => a.eval_in(x, prec)?.neg(),
            Pow(a, r) => {
                let v = a.eval_in(x, prec)?;
                if r.is_integer() {
                    if *r.numer() < 0 && v.sign() == Some(Ordering::Equal) {
                        return domain("negative power of zero");
                    }
                    v.powi(*r.numer(), prec).ok_or(EvalError::NeedPrecision)?
                } else {
                    let q = *r.denom() as u32;
                    match v.pow_rat(*r.numer(), q, prec) {
                        Some(p) => p,
                        None if q % 2 == 0 && v.hi < T::zero() => return domain("even root of a negative"),
                        None if v.sign() == Some(Ordering::Equal) => return domain("negative power of zero"),
                        None => return Err(EvalError::NeedPrecision),
                    }
                }
            }
            Exp(c, e) => {
                let ev = e.eval_in(x, prec)?;
                let k = match ev.exact() {
                    Some(p) => match to_int(p).and_then(|k| k.to_i64()) {
                        Some(k) => k,
                        None if p.is_integer_s() => return domain("exponent too large"),
                        None => return Err(EvalError::Unsupported("non-integer exponent".into())),
                    },
                    None => return Err(EvalError::NeedPrecision),
                };
                let base = const_interval::<T>(c, prec)?;
                if k < 0 && base.sign() == Some(Ordering::Equal) {
                    return domain("negative power of zero");
                }
                base.powi(k, prec).ok_or(EvalError::NeedPrecision)?
            }
            Log(base, a) => log_in(base.as_ref(), &a.eval_in(x, prec)?, prec)?,
            Floor(a) => floor_in(&a.eval_in(x, prec)?)?,
            Round(a) => {
                let h = Interval::from_rational(&crate::scalar::rat(1, 2), prec);
                floor_in(&a.eval_in(x, prec)?.add(&h, prec))?
            }
            Max(a, b) => a.eval_in(x, prec)?.max(&b.eval_in(x, prec)?),
            From { at, arg, body } => {
                let t = arg.eval_in(x, prec)?;
                let at = Interval::from_rational(&crate::scalar::int(*at), prec);
                match t.cmp_certain(&at) {
                    Some(Ordering::Less) => Interval::point(T::zero()),
                    Some(_) => body.eval_in(x, prec)?,
                    None if t.lo >= at.hi => body.eval_in(x, prec)?,
                    None => return Err(EvalError::NeedPrecision),
                }
            }
            Table(t, a) => {
                let f = floor_in(&a.eval_in(x, prec)?)?;
                if f.lo < T::one() {
                    return Ok(Interval::point(T::zero()));
                }
                let n = to_int(&f.lo).and_then(|n| n.to_u64()).ok_or(EvalError::NeedPrecision)?;
                let v = match t {
                    Tb::PrimePi => tables::prime_pi(n),
                    Tb::TotientSum => tables::totient_sum(n),
                };
                from_u64(v.ok_or_else(|| EvalError::Domain("beyond the table limit".into()))?)
            }
        };
        checked(v)
    }

    /// Exact enclosure at a rational point: a point whenever the value is
    /// rational and certified, otherwise a thin interval.
    pub fn enclose_at(&self, q: &BigRational) -> Result<Interval<BigRational>, FnError> {
        if let Some(f) = q.to_f64() {
            let x = Interval::<f64>::from_rational(q, 53);
            if x.is_point() && f.is_finite() {
                if let Ok(v) = self.eval_in(&x, 53) {
                    if let Some(p) = v.exact() {
                        if let Some(r) = p.to_rational() {
                            return Ok(Interval::point(r));
                        }
                    }
                }
            }
        }
        let x = Interval::point(q.clone());
        let mut prec = PREC_START;
        loop {
            match self.eval_in(&x, prec) {
                Ok(v) => return Ok(v),
                Err(EvalError::NeedPrecision) if prec < PREC_MAX => prec *= 2,
                Err(e) => return Err(e.into()),
            }
        }
    }

    pub fn eval_q(&self, q: &BigRational) -> Result<BigRational, FnError> {
        let v = self.enclose_at(q)?;
        v.exact().cloned().ok_or(FnError::Irrational)
    }

    /// Exact value at the integer `n`.
    pub fn eval_at(&self, n: i64) -> Result<BigRational, FnError> {
        self.eval_q(&crate::scalar::int(n))
    }

    /// Exact integer value at `n`.
    pub fn eval_int(&self, n: i64) -> Result<i64, FnError> {
        let v = self.eval_at(n)?;
        if !crate::scalar::is_int(&v) {
            return Err(FnError::Irrational);
        }
        v.to_integer().to_i64().ok_or(FnError::Eval(EvalError::Domain("value exceeds i64".into())))
    }

    /// Approximate value over a floating scalar type.
    pub fn approx<T: Endpoint>(&self, x: T) -> Option<f64> {
        self.eval_in(&Interval::point(x), 53).ok().map(|v| v.to_f64())
    }
}

fn floor_in<T: Endpoint>(v: &Interval<T>) -> R<T> {
    v.floor().map(Interval::point).ok_or(EvalError::NeedPrecision)
}

fn log_in<T: Endpoint>(base: Option<&ExactConst>, v: &Interval<T>, prec: u32) -> R<T> {
    match v.sign() {
        Some(Ordering::Greater) => {}
        None if v.hi > T::zero() => return Err(EvalError::NeedPrecision),
        _ => return domain("log of a non-positive value"),
    }
    if let (Some(p), Some(b)) = (v.exact(), base.and_then(|b| b.as_rational())) {
        if let Some(k) = p.to_rational().and_then(|x| crate::enclose::exact_log(&x, &b)) {
            return Ok(Interval::point(T::from_i64(k).unwrap()));
        }
    }
    let l = v.ln(prec).ok_or(EvalError::NeedPrecision)?;
    match base {
        None => Ok(l),
        Some(b) => {
            let lb = match b.ln() {
                Some(c) => const_interval::<T>(&c, prec)?,
                None => const_interval::<T>(b, prec)?.ln(prec).ok_or_else(|| EvalError::Domain("log base".into()))?,
            };
            if lb.sign().is_none() || lb.sign() == Some(Ordering::Equal) {
                return domain("log base 1");
            }
            l.div(&lb, prec).ok_or(EvalError::NeedPrecision)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn at(s: &str, n: i64) -> BigRational {
        FnForm::parse(s).unwrap().eval_at(n).unwrap()
    }

    #[test]
    fn integer_forms() {
        assert_eq!(at("floor((n-1)/2)", 10), int(4));
        assert_eq!(at("floor(sqrt(n))", 16), int(4));
        assert_eq!(at("floor(sqrt(n))", 15), int(3));
        assert_eq!(at("floor(log2(n))", 8), int(3));
        assert_eq!(at("floor(log2(n))", 7), int(2));
        assert_eq!(at("floor(log(3, 3*n))", 3), int(2));
        assert_eq!(at("2^(n-1)", 11), int(1024));
        assert_eq!(at("(1 - (-1)^n)/2", 7), int(1));
        assert_eq!(at("n/3", 2), rat(2, 3));
    }

    #[test]
    fn fibonacci_counter() {
        // oracle: count distinct Fibonacci numbers up to n
        let f = FnForm::parse("floor(log(phi, sqrt(5)*(n + 1/2))) - 1").unwrap();
        let mut fibs = vec![1u64, 2];
        while *fibs.last().unwrap() < 10_000 {
            let k = fibs.len();
            fibs.push(fibs[k - 1] + fibs[k - 2]);
        }
        for n in 1..3000i64 {
            let c = fibs.iter().filter(|&&x| x <= n as u64).count() as i64;
            assert_eq!(f.eval_int(n).unwrap(), c, "n={n}");
        }
    }

    #[test]
    fn thresholds_and_tables() {
        let f = FnForm::parse("from(4, n, floor(sqrt(n - 4)) + 1)").unwrap();
        assert_eq!(f.eval_int(3).unwrap(), 0);
        assert_eq!(f.eval_int(4).unwrap(), 1);
        assert_eq!(f.eval_int(13).unwrap(), 4);
        assert_eq!(at("pi(n)", 100), int(25));
        assert_eq!(at("Phi(n)", 10), int(32));
    }

    #[test]
    fn errors() {
        assert!(matches!(FnForm::parse("sqrt(n)").unwrap().eval_at(2), Err(FnError::Irrational)));
        assert!(FnForm::parse("log(n)").unwrap().eval_at(0).is_err());
        assert!(FnForm::parse("1/(n-2)").unwrap().eval_at(2).is_err());
    }

    #[test]
    fn generic_backends_agree() {
        let f = FnForm::parse("n^2/3 + sqrt(n)").unwrap();
        let a = f.approx(7.0f64).unwrap();
        let b = f.approx(7.0f32).unwrap();
        let c = f.approx(int(7)).unwrap();
        assert!((a - c).abs() < 1e-12);
        assert!((b - c).abs() < 1e-4);
    }
}
