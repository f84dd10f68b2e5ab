//! Closed-form functions of one natural variable: defining functions,
//! inverses and counting forms, with exact evaluation at integers and
//! symbolic extension to omega.

mod eval;
mod extend;
mod invert;
mod parse;
mod render;
pub mod simplify;
pub mod tables;

use num_rational::BigRational;

use crate::surnat::{ExactConst, Exp, InfSign, SurnatError, SurnatValue};

pub use eval::EvalError;
pub use extend::ExtendedValue;
pub use parse::parse_fn_in;

/// Number-theoretic step functions available by table lookup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Table {
    /// prime counting pi(n)
    PrimePi,
    /// sum of Euler phi(k) for k <= n
    TotientSum,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FnForm {
    Const(ExactConst),
    Var,
    Add(Box<FnForm>, Box<FnForm>),
    Sub(Box<FnForm>, Box<FnForm>),
    Mul(Box<FnForm>, Box<FnForm>),
    Div(Box<FnForm>, Box<FnForm>),
    Neg(Box<FnForm>),
    /// x^r, fixed rational exponent
    Pow(Box<FnForm>, Exp),
    /// b^x, constant base
    Exp(ExactConst, Box<FnForm>),
    /// log_b(x); natural log when the base is absent
    Log(Option<ExactConst>, Box<FnForm>),
    Floor(Box<FnForm>),
    Round(Box<FnForm>),
    Max(Box<FnForm>, Box<FnForm>),
    /// 0 while `arg < at`, else `body`
    From { at: i64, arg: Box<FnForm>, body: Box<FnForm> },
    Table(Table, Box<FnForm>),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FnError {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("evaluation failed: {0}")]
    Eval(#[from] EvalError),
    #[error("extension failed: {0}")]
    Extension(#[from] SurnatError),
    #[error("value is not rational")]
    Irrational,
}

fn b(f: FnForm) -> Box<FnForm> {
    Box::new(f)
}

impl FnForm {
    pub fn int(n: i64) -> Self {
        FnForm::Const(ExactConst::from_int(n))
    }

    pub fn rat(q: BigRational) -> Self {
        FnForm::Const(ExactConst::from_rational(&q))
    }

    pub fn var() -> Self {
        FnForm::Var
    }

    pub fn add(self, o: FnForm) -> Self {
        FnForm::Add(b(self), b(o))
    }

    pub fn sub(self, o: FnForm) -> Self {
        FnForm::Sub(b(self), b(o))
    }

    pub fn mul(self, o: FnForm) -> Self {
        FnForm::Mul(b(self), b(o))
    }

    pub fn div(self, o: FnForm) -> Self {
        FnForm::Div(b(self), b(o))
    }

    pub fn neg(self) -> Self {
        FnForm::Neg(b(self))
    }

    pub fn pow(self, r: Exp) -> Self {
        FnForm::Pow(b(self), r)
    }

    pub fn floor(self) -> Self {
        FnForm::Floor(b(self))
    }

    pub fn round(self) -> Self {
        FnForm::Round(b(self))
    }

    pub fn log(self, base: Option<ExactConst>) -> Self {
        FnForm::Log(base, b(self))
    }

    pub fn max(self, o: FnForm) -> Self {
        FnForm::Max(b(self), b(o))
    }

    pub fn from_at(at: i64, arg: FnForm, body: FnForm) -> Self {
        FnForm::From { at, arg: b(arg), body: b(body) }
    }

    pub fn table(t: Table, arg: FnForm) -> Self {
        FnForm::Table(t, b(arg))
    }

    pub fn exp(base: ExactConst, e: FnForm) -> Self {
        FnForm::Exp(base, b(e))
    }

    pub fn parse(s: &str) -> Result<Self, FnError> {
        parse_fn_in(s, &["n"])
    }

    /// f(g(n)).
    pub fn compose(&self, inner: &FnForm) -> FnForm {
        self.map_var(&|| inner.clone())
    }

    fn map_var(&self, sub: &dyn Fn() -> FnForm) -> FnForm {
        use FnForm::*;
        match self {
            Const(c) => Const(c.clone()),
            Var => sub(),
            Add(x, y) => Add(b(x.map_var(sub)), b(y.map_var(sub))),
            Sub(x, y) => Sub(b(x.map_var(sub)), b(y.map_var(sub))),
            Mul(x, y) => Mul(b(x.map_var(sub)), b(y.map_var(sub))),
            Div(x, y) => Div(b(x.map_var(sub)), b(y.map_var(sub))),
            Neg(x) => Neg(b(x.map_var(sub))),
            Pow(x, r) => Pow(b(x.map_var(sub)), *r),
            Exp(c, x) => Exp(c.clone(), b(x.map_var(sub))),
            Log(c, x) => Log(c.clone(), b(x.map_var(sub))),
            Floor(x) => Floor(b(x.map_var(sub))),
            Round(x) => Round(b(x.map_var(sub))),
            Max(x, y) => Max(b(x.map_var(sub)), b(y.map_var(sub))),
            From { at, arg, body } => From { at: *at, arg: b(arg.map_var(sub)), body: b(body.map_var(sub)) },
            Table(t, x) => Table(*t, b(x.map_var(sub))),
        }
    }

    /// True when the form depends on its variable.
    pub fn mentions_var(&self) -> bool {
        use FnForm::*;
        match self {
            Const(_) => false,
            Var => true,
            Add(x, y) | Sub(x, y) | Mul(x, y) | Div(x, y) | Max(x, y) => x.mentions_var() || y.mentions_var(),
            Neg(x) | Pow(x, _) | Exp(_, x) | Log(_, x) | Floor(x) | Round(x) | Table(_, x) => x.mentions_var(),
            From { arg, body, .. } => arg.mentions_var() || body.mentions_var(),
        }
    }

    /// Extension to omega: evaluate symbolically at `w` and report the
    /// infinitesimal tail's sign.
    pub fn extend_to_omega(&self) -> Result<ExtendedValue, FnError> {
        self.compose_extend(&SurnatValue::omega())
    }

    /// Extension evaluated at an arbitrary surnatural argument.
    pub fn compose_extend(&self, arg: &SurnatValue<BigRational>) -> Result<ExtendedValue, FnError> {
        let s = self.extend_series(arg)?;
        Ok(ExtendedValue { value: s.without_infinitesimals(), infinitesimal_sign: s.infinitesimal_sign() })
    }
}

impl ExtendedValue {
    pub fn is_exact_floorless(&self) -> bool {
        self.infinitesimal_sign == InfSign::Zero
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_substitutes_every_var() {
        let f = FnForm::parse("floor(n/2) + n").unwrap();
        let g = FnForm::parse("n^2").unwrap();
        let h = f.compose(&g);
        assert_eq!(h.eval_at(3).unwrap(), crate::scalar::int(13));
    }
}
