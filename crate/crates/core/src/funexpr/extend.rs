//! Symbolic evaluation at a surnatural argument, typically omega.

use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::{tables, FnError, FnForm, Table as Tb};
use crate::surnat::{Comparison, Constant, ExactConst, Exactness, Exp as Ex, InfSign, Key, SurnatError, SurnatValue};

type S = SurnatValue<BigRational>;

/// Value of an extended function together with the sign of the dropped
/// infinitesimal tail.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtendedValue {
    pub value: S,
    pub infinitesimal_sign: InfSign,
}

fn unsupported(m: &str) -> FnError {
    FnError::Extension(SurnatError::Unsupported(m.to_string()))
}

fn undetermined(m: &str) -> FnError {
    FnError::Extension(SurnatError::Unsupported(format!("comparison undetermined: {m}")))
}

fn finite_floor(v: &S) -> Result<Option<i64>, FnError> {
    if !v.is_finite() {
        return Ok(None);
    }
    let f = v.floor_series()?;
    let q = f.as_rational().ok_or_else(|| unsupported("table argument"))?;
    Ok(Some(q.to_integer().to_i64().ok_or_else(|| unsupported("table argument too large"))?))
}

/// Leading term of a positive infinite value.
fn leading_term(v: &S) -> Result<(ExactConst, Key), FnError> {
    let t = v.leading().ok_or_else(|| unsupported("empty value"))?;
    if !t.key.is_infinite() || t.coeff.sign() != Some(std::cmp::Ordering::Greater) {
        return Err(unsupported("table argument must be positive infinite"));
    }
    Ok((t.coeff.clone(), t.key))
}

impl FnForm {
    /// Truncated series of the form at `arg`, infinitesimal terms included.
    pub fn extend_series(&self, arg: &S) -> Result<S, FnError> {
        use FnForm::*;
        Ok(match self {
            Const(c) => S::constant(c.clone()),
            Var => arg.clone(),
            Add(a, b) => a.extend_series(arg)?.add(&b.extend_series(arg)?),
            Sub(a, b) => a.extend_series(arg)?.sub(&b.extend_series(arg)?),
            Mul(a, b) => a.extend_series(arg)?.mul(&b.extend_series(arg)?),
            Div(a, b) => a.extend_series(arg)?.div(&b.extend_series(arg)?)?,
            Neg(a) => a.extend_series(arg)?.neg(),
            Pow(a, r) => a.extend_series(arg)?.pow_rat(*r)?,
            Exp(c, e) => {
                let ev = e.extend_series(arg)?;
                if let Some(q) = ev.as_rational() {
                    let n: i64 = q.numer().try_into().map_err(|_| unsupported("exponent too large"))?;
                    let d: i64 = q.denom().try_into().map_err(|_| unsupported("exponent too large"))?;
                    let v = c.pow(Ex::new(n, d)).ok_or_else(|| unsupported("power of this constant"))?;
                    S::constant(v)
                } else if c.as_rational().is_some_and(|b| b == crate::scalar::int(-1)) {
                    if ev.is_divisible(2) {
                        S::from_int(1)
                    } else if ev.is_divisible(1) {
                        S::from_int(-1)
                    } else {
                        return Err(unsupported("parity of a non-omnific exponent"));
                    }
                } else {
                    return Err(unsupported("exponential of an infinite value"));
                }
            }
            Log(None, a) => a.extend_series(arg)?.ln()?,
            Log(Some(b), a) => a.extend_series(arg)?.log_base(b)?,
            Floor(a) => a.extend_series(arg)?.floor_series()?,
            Round(a) => a.extend_series(arg)?.add(&S::from_rational(&crate::scalar::rat(1, 2))).floor_series()?,
            Max(a, b) => {
                let x = a.extend_series(arg)?;
                let y = b.extend_series(arg)?;
                match x.compare(&y) {
                    Comparison::Less => y,
                    Comparison::Equal | Comparison::Greater => x,
                    Comparison::Undetermined => return Err(undetermined("max")),
                }
            }
            From { at, arg: t, body } => {
                let tv = t.extend_series(arg)?;
                match tv.compare(&S::from_int(*at)) {
                    Comparison::Less => S::zero(),
                    Comparison::Equal | Comparison::Greater => body.extend_series(arg)?,
                    Comparison::Undetermined => return Err(undetermined("threshold")),
                }
            }
            Table(t, a) => {
                let x = a.extend_series(arg)?;
                if let Some(n) = finite_floor(&x)? {
                    let n = n.max(0) as u64;
                    let v = match t {
                        Tb::PrimePi => tables::prime_pi(n),
                        Tb::TotientSum => tables::totient_sum(n),
                    };
                    return Ok(S::from_int(v.ok_or_else(|| unsupported("beyond the table limit"))? as i64));
                }
                let (c, k) = leading_term(&x)?;
                let lead = S::term(c, k);
                match t {
                    Tb::PrimePi => {
                        let rk = k.sub(Key::new(Ex::from(0), 2));
                        let v = lead.div(&lead.ln()?)?;
                        v.filter(|kk| *kk > rk, Exactness::BigO(rk))
                    }
                    Tb::TotientSum => {
                        let k2 = k.add(k);
                        lead.powi(2).scale_const(&Constant::chi()).with_exactness(Exactness::LittleO(k2))
                    }
                }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ext(s: &str) -> ExtendedValue {
        FnForm::parse(s).unwrap().extend_to_omega().unwrap()
    }

    #[test]
    fn floors_at_omega() {
        assert_eq!(ext("floor((n-1)/2)").value.to_string(), "w/2 - 1");
        assert_eq!(ext("floor(n/2)").value.to_string(), "w/2");
        assert_eq!(ext("floor(sqrt(n))").value.to_string(), "w^(1/2)");
        assert_eq!(ext("floor(sqrt(2*n + 1/4) - 1/2)").value.to_string(), "2^(1/2)*w^(1/2) - 1");
    }

    #[test]
    fn logs_and_parity() {
        assert_eq!(ext("floor(log2(n)) + 1").value.to_string(), "log2(w) + 1");
        assert_eq!(ext("(1 - (-1)^n)/2").value.to_string(), "0");
        assert_eq!(ext("(1 - (-1)^(n-1))/2").value.to_string(), "1");
    }

    #[test]
    fn tables_extend_asymptotically() {
        assert_eq!(ext("pi(n)").value.to_string(), "w/log(w) + O(w/log(w)^2)");
        let t = ext("Phi(n)").value.to_string();
        assert_eq!(t, "chi*w^2 + o(w^2)");
    }

    #[test]
    fn thresholds_pass_at_omega() {
        assert_eq!(ext("from(4, n, floor(sqrt(n - 4)) + 1)").value.to_string(), "w^(1/2)");
        assert_eq!(ext("max(0, n - 3)").value.to_string(), "w - 3");
    }
}
