use std::fmt;

use num_traits::Signed;

use super::{FnForm, Table as Tb};
use crate::surnat::{ExactConst, Exp as Ex};

const SUM: u8 = 1;
const PROD: u8 = 2;
const UNARY: u8 = 3;
const POW: u8 = 4;
const ATOM: u8 = 5;

fn const_prec(c: &ExactConst) -> u8 {
    if c.parts.len() > 1 {
        return SUM;
    }
    match c.as_rational() {
        Some(q) if q.is_negative() => UNARY,
        Some(q) if crate::scalar::is_int(&q) => ATOM,
        Some(_) => PROD,
        None => {
            let (s, neg) = c.render_factor(&[], &[]);
            if neg {
                UNARY
            } else if s.contains(['*', '/']) {
                PROD
            } else if s.contains('^') {
                POW
            } else {
                ATOM
            }
        }
    }
}

fn exp_text(r: Ex) -> String {
    if r.is_integer() && !r.is_negative() {
        r.numer().to_string()
    } else if r.is_integer() {
        format!("({})", r.numer())
    } else {
        format!("({}/{})", r.numer(), r.denom())
    }
}

impl FnForm {
    fn prec(&self) -> u8 {
        use FnForm::*;
        match self {
            Const(c) => const_prec(c),
            Add(..) | Sub(..) => SUM,
            Mul(..) | Div(..) => PROD,
            Neg(_) => UNARY,
            Pow(_, r) if *r == Ex::new(1, 2) => ATOM,
            Pow(..) | Exp(..) => POW,
            _ => ATOM,
        }
    }

    fn wrap(&self, min: u8, var: &str) -> String {
        let s = self.render_with(var);
        if self.prec() < min {
            format!("({s})")
        } else {
            s
        }
    }

    /// Render using `var` as the variable name.
    pub fn render_with(&self, var: &str) -> String {
        use FnForm::*;
        match self {
            Const(c) => c.render(),
            Var => var.to_string(),
            Add(a, b) => format!("{} + {}", a.wrap(SUM, var), b.wrap(PROD, var)),
            Sub(a, b) => format!("{} - {}", a.wrap(SUM, var), b.wrap(PROD, var)),
            Mul(a, b) => format!("{}*{}", a.wrap(PROD, var), b.wrap(UNARY, var)),
            Div(a, b) => format!("{}/{}", a.wrap(PROD, var), b.wrap(UNARY + 1, var)),
            Neg(a) => format!("-{}", a.wrap(UNARY, var)),
            Pow(a, r) if *r == Ex::new(1, 2) => format!("sqrt({})", a.render_with(var)),
            Pow(a, r) => format!("{}^{}", a.wrap(ATOM, var), exp_text(*r)),
            Exp(c, a) => {
                let base = FnForm::Const(c.clone());
                let e = if a.prec() >= ATOM { a.render_with(var) } else { format!("({})", a.render_with(var)) };
                format!("{}^{}", base.wrap(ATOM, var), e)
            }
            Log(None, a) => format!("log({})", a.render_with(var)),
            Log(Some(c), a) => {
                let base = if *c == ExactConst::phi() { "phi".to_string() } else { c.render() };
                if c.as_rational().is_some_and(|q| q == crate::scalar::int(2)) {
                    format!("log2({})", a.render_with(var))
                } else {
                    format!("log({base},{})", a.render_with(var))
                }
            }
            Floor(a) => format!("floor({})", a.render_with(var)),
            Round(a) => format!("round({})", a.render_with(var)),
            Max(a, b) => format!("max({}, {})", a.render_with(var), b.render_with(var)),
            From { at, arg, body } => format!("from({at}, {}, {})", arg.render_with(var), body.render_with(var)),
            Table(Tb::PrimePi, a) => format!("pi({})", a.render_with(var)),
            Table(Tb::TotientSum, a) => format!("Phi({})", a.render_with(var)),
        }
    }

    pub fn render(&self) -> String {
        self.render_with("n")
    }
}

impl fmt::Display for FnForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rt(s: &str) {
        let f = FnForm::parse(s).unwrap();
        let r = f.render();
        let g = FnForm::parse(&r).unwrap_or_else(|e| panic!("{s} -> {r}: {e}"));
        assert_eq!(f, g, "{s} -> {r}");
    }

    #[test]
    fn renders_canonically() {
        assert_eq!(FnForm::parse("floor((n-1)/2)").unwrap().render(), "floor((n - 1)/2)");
        assert_eq!(FnForm::parse("sqrt(2*n + 1/4) - 1/2").unwrap().render(), "sqrt(2*n + 1/4) - 1/2");
        assert_eq!(FnForm::parse("log(2, n)").unwrap().render(), "log2(n)");
        assert_eq!(FnForm::parse("log(3, 3*n)").unwrap().render(), "log(3,3*n)");
    }

    #[test]
    fn round_trips() {
        for s in [
            "floor((n-1)/2)",
            "n^2",
            "n^(1/3)",
            "floor(log(phi, sqrt(5)*(n + 1/2))) - 1",
            "2^(n-1)",
            "(1 - (-1)^n)/2",
            "max(0, floor((n - 3)/5))",
            "from(4, n, floor(sqrt(n - 3)))",
            "pi(n) + Phi(n)",
            "-n/(2*n + 1)",
            "n - (n - 1)",
            "2^(2/3)*chi*n^(4/3)",
            "n/log(n)",
            "n^(-1)",
        ] {
            rt(s);
        }
    }
}
