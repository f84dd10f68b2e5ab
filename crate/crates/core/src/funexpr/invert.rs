//! Closed-form inverses of increasing defining functions.

use num_traits::{One, Zero};

use super::parse::{mk_add, mk_div, mk_log, mk_mul, mk_pow, mk_sub};
use super::simplify::{as_poly, simplify, Poly};
use super::{FnError, FnForm};
use crate::surnat::{ExactConst, Exp};

fn not_inv(f: &FnForm) -> FnError {
    FnError::NotInvertible(f.render())
}

fn c(x: ExactConst) -> FnForm {
    FnForm::Const(x)
}

fn coeff(p: &Poly, e: i64) -> ExactConst {
    p.get(&Exp::from(e)).cloned().unwrap_or_else(ExactConst::zero)
}

fn pow(f: FnForm, r: Exp) -> FnForm {
    mk_pow(f, FnForm::Const(ExactConst::from_rational(&crate::surnat::value::exp_to_rational(r))), 0).expect("constant exponent")
}

fn invert_poly(f: &FnForm, p: &Poly) -> Result<FnForm, FnError> {
    let top = *p.keys().next_back().ok_or_else(|| not_inv(f))?;
    let n = FnForm::Var;
    if p.len() == 1 && top > Exp::zero() {
        let a = p[&top].clone();
        let inner = if a == ExactConst::from_int(1) { n } else { mk_div(n, c(a)) };
        return Ok(pow(inner, top.recip()));
    }
    if p.keys().all(|e| e.is_integer() && *e >= Exp::zero()) {
        if top == Exp::one() {
            let c1 = coeff(p, 1);
            return Ok(mk_div(mk_sub(n, c(coeff(p, 0))), c(c1)));
        }
        if top == Exp::from(2) {
            let (a, b, c0) = (coeff(p, 2), coeff(p, 1), coeff(p, 0));
            let two_a = a.scale(&crate::scalar::int(2));
            let disc = b.mul(&b).sub(&a.mul(&c0).scale(&crate::scalar::int(4)));
            let four_a2 = a.mul(&a).scale(&crate::scalar::int(4));
            let shift = disc.mul(&four_a2.recip().ok_or_else(|| not_inv(f))?);
            let root = pow(mk_add(mk_div(n, c(a)), c(shift)), Exp::new(1, 2));
            let off = b.mul(&two_a.recip().ok_or_else(|| not_inv(f))?);
            return Ok(sub_const(root, off));
        }
        // a*(n + s)^k
        let k = top.to_integer();
        let a = coeff(p, k);
        let s = coeff(p, k - 1).mul(&a.scale(&crate::scalar::int(k)).recip().ok_or_else(|| not_inv(f))?);
        let mut binom = ExactConst::from_int(1);
        let mut sp = ExactConst::from_int(1);
        let mut ok = true;
        for j in (0..=k).rev() {
            if coeff(p, j) != a.mul(&binom).mul(&sp) {
                ok = false;
                break;
            }
            // C(k, j-1) = C(k, j) * j / (k - j + 1)
            binom = binom.scale(&crate::scalar::rat(j, k - j + 1));
            sp = sp.mul(&s);
        }
        if ok {
            let inner = if a == ExactConst::from_int(1) { n } else { mk_div(n, c(a)) };
            return Ok(sub_const(pow(inner, top.recip()), s));
        }
    }
    Err(not_inv(f))
}

/// f - k, written as f + |k| for negative k.
fn sub_const(f: FnForm, k: ExactConst) -> FnForm {
    if k.is_zero() {
        f
    } else if k.single().is_some() && k.sign() == Some(std::cmp::Ordering::Less) {
        mk_add(f, c(k.neg()))
    } else {
        mk_sub(f, c(k))
    }
}

/// Splits `a * r^(e)` into (a, r, e).
fn exp_parts(f: &FnForm) -> Option<(ExactConst, ExactConst, FnForm)> {
    match f {
        FnForm::Exp(r, e) => Some((ExactConst::from_int(1), r.clone(), (**e).clone())),
        FnForm::Mul(x, y) => match (&**x, &**y) {
            (FnForm::Const(a), FnForm::Exp(r, e)) | (FnForm::Exp(r, e), FnForm::Const(a)) => {
                Some((a.clone(), r.clone(), (**e).clone()))
            }
            _ => None,
        },
        FnForm::Div(x, y) => match (&**x, &**y) {
            (FnForm::Exp(r, e), FnForm::Const(a)) => Some((a.recip()?, r.clone(), (**e).clone())),
            _ => None,
        },
        _ => None,
    }
}

impl FnForm {
    /// Real inverse of an increasing polynomial (degree one, monomial or
    /// quadratic) or of a * r^(u*n + v).
    pub fn invert(&self) -> Result<FnForm, FnError> {
        if let Some(p) = as_poly(self) {
            return Ok(simplify(&invert_poly(self, &p)?));
        }
        if let Some((a, r, e)) = exp_parts(self) {
            let p = as_poly(&e).ok_or_else(|| not_inv(self))?;
            if p.keys().any(|k| *k != Exp::zero() && *k != Exp::one()) {
                return Err(not_inv(self));
            }
            let (u, v) = (coeff(&p, 1), coeff(&p, 0));
            if u.is_zero() {
                return Err(not_inv(self));
            }
            let arg = if a == ExactConst::from_int(1) { FnForm::Var } else { mk_div(FnForm::Var, c(a)) };
            let l = mk_log(Some(r), arg);
            let num = sub_const(l, v);
            return Ok(if u == ExactConst::from_int(1) { num } else { mk_mul(c(u.recip().ok_or_else(|| not_inv(self))?), num) });
        }
        Err(not_inv(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn inv(s: &str) -> FnForm {
        FnForm::parse(s).unwrap().invert().unwrap()
    }

    /// g(f(k)) == k on a range of integers
    fn check(s: &str) {
        let f = FnForm::parse(s).unwrap();
        let g = f.invert().unwrap();
        for k in 1..40 {
            let y = f.eval_at(k).unwrap();
            assert_eq!(g.eval_q(&y).unwrap(), int(k), "{s}: k={k}, inverse {g}");
        }
    }

    #[test]
    fn inverses_round_trip() {
        check("3*n + 2");
        check("n^2");
        check("n^3/8");
        check("n*(n+1)/2");
        check("2*n^2 - n");
        check("2^(n-1)");
        check("3*2^n");
        check("10^(2*n+1)");
        check("(2*n - 1)^3");
        check("(3*n + 1)^4");

    }

    #[test]
    fn shapes() {
        assert_eq!(inv("2*n - 1").render(), "n/2 + 1/2");
        assert_eq!(inv("n^2").render(), "sqrt(n)");
        assert_eq!(inv("n*(n+1)/2").render(), "sqrt(2*n + 1/4) - 1/2");
        assert_eq!(inv("2^(n-1)").render(), "log2(n) + 1");
        assert!(FnForm::parse("floor(n/2)").unwrap().invert().is_err());
    }
}
