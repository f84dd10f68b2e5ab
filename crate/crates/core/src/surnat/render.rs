use std::fmt;

use num_traits::{One, Signed};

use super::constant::{BaseConst, Constant, Exp, Monomial};
use super::value::{Exactness, Key, SurnatValue};
use crate::scalar::Scalar;

fn pow_text(base: &str, e: Exp) -> String {
    if e.is_one() {
        base.to_string()
    } else if e.is_integer() {
        format!("{base}^{}", e.numer())
    } else {
        format!("{base}^({}/{})", e.numer(), e.denom())
    }
}

/// Split a key into numerator and denominator factor strings, absorbing a
/// `1/ln(b)` coefficient factor into a `log_b` when possible.
fn basis<T: Scalar>(coeff: &Constant<T>, key: Key, w: &str) -> (Constant<T>, Vec<String>, Vec<String>) {
    let mut num = Vec::new();
    let mut den = Vec::new();
    let mut coeff = coeff.clone();
    let mut log = key.log;
    if log >= 1 {
        if let Some((m, q)) = coeff.single() {
            let found = m.0.iter().find(|(b, e)| matches!(b, BaseConst::Ln(_) | BaseConst::LnPhi) && **e == -Exp::one());
            if let Some((b, _)) = found {
                let name = match b {
                    BaseConst::Ln(2) => format!("log2({w})"),
                    BaseConst::Ln(p) => format!("log({p},{w})"),
                    _ => format!("log(phi,{w})"),
                };
                let mut mm = m.0.clone();
                mm.remove(b);
                coeff = Constant::monomial(q.clone(), Monomial(mm));
                log -= 1;
                num.push(name);
            }
        }
    }
    if key.omega.is_positive() {
        num.insert(0, pow_text(w, key.omega));
    } else if key.omega.is_negative() {
        den.push(pow_text(w, -key.omega));
    }
    let lw = format!("log({w})");
    if log > 0 {
        num.push(pow_text(&lw, Exp::from(log as i64)));
    } else if log < 0 {
        den.push(pow_text(&lw, Exp::from(-log as i64)));
    }
    (coeff, num, den)
}

pub fn render_key(key: Key, unicode: bool) -> String {
    let w = if unicode { "ω" } else { "w" };
    let (c, num, den) = basis(&Constant::<num_rational::BigRational>::from_int(1), key, w);
    c.render_factor(&num, &den).0
}

impl<T: Scalar> SurnatValue<T> {
    pub fn render(&self, unicode: bool) -> String {
        let w = if unicode { "ω" } else { "w" };
        let mut out = String::new();
        for (i, t) in self.terms().iter().enumerate() {
            let (c, num, den) = basis(&t.coeff, t.key, w);
            let (s, neg) = c.render_factor(&num, &den);
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&s);
        }
        let tag = match self.exactness() {
            Exactness::Exact => None,
            Exactness::LittleO(k) => Some(format!("o({})", render_key(k, unicode))),
            Exactness::BigO(k) => Some(format!("O({})", render_key(k, unicode))),
        };
        match (out.is_empty(), tag) {
            (true, None) => "0".to_string(),
            (true, Some(t)) => t,
            (false, None) => out,
            (false, Some(t)) => format!("{out} + {t}"),
        }
    }
}

impl<T: Scalar> fmt::Display for SurnatValue<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use num_rational::BigRational;

    type S = SurnatValue<BigRational>;

    #[test]
    fn renders() {
        let w = S::omega();
        assert_eq!(w.scale(&rat(1, 2)).sub(&S::from_int(1)).render(false), "w/2 - 1");
        assert_eq!(w.scale(&rat(3, 4)).render(true), "3*ω/4");
        assert_eq!(S::zero().render(false), "0");
        let l2 = w.log_base(&Constant::from_int(2)).unwrap().add(&S::from_int(1));
        assert_eq!(l2.render(false), "log2(w) + 1");
        let q = w
            .pow_rat(Exp::new(4, 3))
            .unwrap()
            .scale_const(&Constant::from_int(2).pow(Exp::new(2, 3)).unwrap().mul(&Constant::chi()))
            .with_exactness(Exactness::LittleO(Key::new(Exp::new(4, 3), 0)));
        assert_eq!(q.render(false), "2^(2/3)*chi*w^(4/3) + o(w^(4/3))");
        let p = S::term(Constant::from_int(1), Key::new(Exp::one(), -1));
        assert_eq!(p.render(false), "w/log(w)");
        assert_eq!(S::omega().powi(2).scale(&int(-2)).render(false), "-2*w^2");
    }
}
