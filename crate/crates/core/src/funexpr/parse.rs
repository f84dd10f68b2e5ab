use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::{FnError, FnForm, Table};
use crate::surnat::{ExactConst, Exp};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, FnError> {
    let mut out = Vec::new();
    let cs: Vec<(usize, char)> = s.char_indices().collect();
    let mut i = 0;
    while i < cs.len() {
        let (pos, c) = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < cs.len() && cs[j].1.is_ascii_digit() {
                j += 1;
            }
            let end = if j < cs.len() { cs[j].0 } else { s.len() };
            out.push((pos, Tok::Num(s[pos..end].parse().unwrap())));
            i = j;
        } else if c == 'ω' {
            out.push((pos, Tok::Ident("ω".into())));
            i += 1;
        } else if c.is_alphabetic() || c == '_' {
            let mut j = i;
            while j < cs.len() && (cs[j].1.is_alphanumeric() || cs[j].1 == '_') && cs[j].1 != 'ω' {
                j += 1;
            }
            let end = if j < cs.len() { cs[j].0 } else { s.len() };
            out.push((pos, Tok::Ident(s[pos..end].to_string())));
            i = j;
        } else if "+-*/^(),⌊⌋√".contains(c) {
            out.push((pos, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(FnError::Parse { pos, msg: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    i: usize,
    vars: &'a [&'a str],
    len: usize,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, FnError> {
    Err(FnError::Parse { pos, msg: msg.into() })
}

fn as_const(f: &FnForm) -> Option<&ExactConst> {
    match f {
        FnForm::Const(c) => Some(c),
        _ => None,
    }
}

pub(super) fn mk_add(a: FnForm, b: FnForm) -> FnForm {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => FnForm::Const(x.add(y)),
        _ => a.add(b),
    }
}

pub(super) fn mk_sub(a: FnForm, b: FnForm) -> FnForm {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => FnForm::Const(x.sub(y)),
        _ => a.sub(b),
    }
}

pub(super) fn mk_mul(a: FnForm, b: FnForm) -> FnForm {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => FnForm::Const(x.mul(y)),
        _ => a.mul(b),
    }
}

pub(super) fn mk_div(a: FnForm, b: FnForm) -> FnForm {
    if let (Some(x), Some(y)) = (as_const(&a), as_const(&b)) {
        if let Some(r) = y.recip() {
            return FnForm::Const(x.mul(&r));
        }
    }
    a.div(b)
}

pub(super) fn mk_neg(a: FnForm) -> FnForm {
    match as_const(&a) {
        Some(x) => FnForm::Const(x.neg()),
        None => a.neg(),
    }
}

fn rational_exp(c: &ExactConst) -> Option<Exp> {
    let q = c.as_rational()?;
    let n: i64 = q.numer().try_into().ok()?;
    let d: i64 = q.denom().try_into().ok()?;
    Some(Exp::new(n, d))
}

pub(super) fn mk_pow(base: FnForm, e: FnForm, pos: usize) -> Result<FnForm, FnError> {
    match (as_const(&base), as_const(&e)) {
        (Some(c), Some(x)) => {
            let r = rational_exp(x).ok_or(FnError::Parse { pos, msg: "exponent must be rational".into() })?;
            Ok(match c.pow(r) {
                Some(v) => FnForm::Const(v),
                None => base.pow(r),
            })
        }
        (_, Some(x)) => {
            let r = rational_exp(x).ok_or(FnError::Parse { pos, msg: "exponent must be rational".into() })?;
            Ok(base.pow(r))
        }
        (Some(c), None) => Ok(FnForm::exp(c.clone(), e)),
        (None, None) => err(pos, "variable exponent needs a constant base"),
    }
}

pub(super) fn mk_log(base: Option<ExactConst>, x: FnForm) -> FnForm {
    if let Some(c) = as_const(&x) {
        if let Some(l) = c.ln() {
            match &base {
                None => return FnForm::Const(l),
                Some(bc) => {
                    if let Some(inv) = bc.ln().and_then(|lb| lb.recip()) {
                        return FnForm::Const(l.mul(&inv));
                    }
                }
            }
        }
    }
    x.log(base)
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.len, |t| t.0)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), FnError> {
        if self.eat(c) {
            Ok(())
        } else {
            err(self.pos(), format!("expected '{c}'"))
        }
    }

    fn expr(&mut self) -> Result<FnForm, FnError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = mk_add(acc, self.term()?);
            } else if self.eat('-') {
                acc = mk_sub(acc, self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<FnForm, FnError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = mk_mul(acc, self.unary()?);
            } else if self.eat('/') {
                acc = mk_div(acc, self.unary()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<FnForm, FnError> {
        if self.eat('-') {
            return Ok(mk_neg(self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<FnForm, FnError> {
        let base = self.implicit()?;
        let pos = self.pos();
        if self.eat('^') {
            let e = self.unary()?;
            return mk_pow(base, e, pos);
        }
        Ok(base)
    }

    /// A number directly followed by an atom multiplies it: `2n`, `3(n+1)`.
    fn implicit(&mut self) -> Result<FnForm, FnError> {
        let first = self.atom()?;
        if matches!(first, FnForm::Const(_)) && matches!(self.peek(), Some(Tok::Ident(_)) | Some(Tok::Sym('('))) {
            if let Some((_, Tok::Num(_))) = self.toks.get(self.i - 1) {
                let next = self.implicit_operand()?;
                return Ok(mk_mul(first, next));
            }
        }
        Ok(first)
    }

    fn implicit_operand(&mut self) -> Result<FnForm, FnError> {
        let base = self.atom()?;
        let pos = self.pos();
        if self.eat('^') {
            let e = self.unary()?;
            return mk_pow(base, e, pos);
        }
        Ok(base)
    }

    fn args(&mut self) -> Result<Vec<FnForm>, FnError> {
        self.expect('(')?;
        let mut v = vec![self.expr()?];
        while self.eat(',') {
            v.push(self.expr()?);
        }
        self.expect(')')?;
        Ok(v)
    }

    fn atom(&mut self) -> Result<FnForm, FnError> {
        let pos = self.pos();
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return err(pos, "unexpected end of input"),
        };
        self.i += 1;
        match tok {
            Tok::Num(n) => Ok(FnForm::Const(ExactConst::from_rational(&BigRational::from_integer(n)))),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Sym('⌊') => {
                let e = self.expr()?;
                self.expect('⌋')?;
                Ok(e.floor())
            }
            Tok::Sym('√') => {
                let e = self.atom()?;
                mk_pow(e, FnForm::rat(BigRational::new(1.into(), 2.into())), pos)
            }
            Tok::Sym(c) => err(pos, format!("unexpected '{c}'")),
            Tok::Ident(id) => self.ident(&id, pos),
        }
    }

    fn ident(&mut self, id: &str, pos: usize) -> Result<FnForm, FnError> {
        if self.vars.contains(&id) {
            return Ok(FnForm::Var);
        }
        let nargs = |v: &Vec<FnForm>, k: usize| -> Result<(), FnError> {
            if v.len() == k {
                Ok(())
            } else {
                err(pos, format!("{id} takes {k} argument(s)"))
            }
        };
        match id {
            "chi" => return Ok(FnForm::Const(ExactConst::chi())),
            "phi" => return Ok(FnForm::Const(ExactConst::phi())),
            _ => {}
        }
        if self.peek() != Some(&Tok::Sym('(')) {
            return err(pos, format!("unknown identifier {id:?}"));
        }
        let mut a = self.args()?;
        match id {
            "floor" => {
                nargs(&a, 1)?;
                Ok(a.remove(0).floor())
            }
            "round" => {
                nargs(&a, 1)?;
                Ok(a.remove(0).round())
            }
            "sqrt" => {
                nargs(&a, 1)?;
                mk_pow(a.remove(0), FnForm::rat(BigRational::new(1.into(), 2.into())), pos)
            }
            "ln" => {
                nargs(&a, 1)?;
                Ok(mk_log(None, a.remove(0)))
            }
            "log2" => {
                nargs(&a, 1)?;
                Ok(mk_log(Some(ExactConst::from_int(2)), a.remove(0)))
            }
            "log" => match a.len() {
                1 => Ok(mk_log(None, a.remove(0))),
                2 => {
                    let x = a.pop().unwrap();
                    let base = match a.pop().unwrap() {
                        FnForm::Const(c) => c,
                        _ => return err(pos, "log base must be constant"),
                    };
                    if base.sign() != Some(std::cmp::Ordering::Greater) || base.as_rational().is_some_and(|q| q.is_one()) {
                        return err(pos, "log base must be positive and not 1");
                    }
                    Ok(mk_log(Some(base), x))
                }
                _ => err(pos, "log takes 1 or 2 arguments"),
            },
            "max" => {
                nargs(&a, 2)?;
                let y = a.pop().unwrap();
                Ok(a.pop().unwrap().max(y))
            }
            "from" => {
                nargs(&a, 3)?;
                let body = a.pop().unwrap();
                let arg = a.pop().unwrap();
                let at = match a.pop().unwrap() {
                    FnForm::Const(c) => c
                        .as_rational()
                        .filter(crate::scalar::is_int)
                        .and_then(|q| i64::try_from(q.numer()).ok())
                        .ok_or(FnError::Parse { pos, msg: "from threshold must be an integer".into() })?,
                    _ => return err(pos, "from threshold must be constant"),
                };
                Ok(FnForm::from_at(at, arg, body))
            }
            "pi" => {
                nargs(&a, 1)?;
                Ok(FnForm::table(Table::PrimePi, a.remove(0)))
            }
            "Phi" => {
                nargs(&a, 1)?;
                Ok(FnForm::table(Table::TotientSum, a.remove(0)))
            }
            _ => err(pos, format!("unknown function {id:?}")),
        }
    }
}

/// Parse with the given names standing for the variable.
pub fn parse_fn_in(s: &str, vars: &[&str]) -> Result<FnForm, FnError> {
    let toks = lex(s)?;
    let mut p = Parser { toks, i: 0, vars, len: s.len() };
    let e = p.expr()?;
    if p.i != p.toks.len() {
        return err(p.pos(), "trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn parses_examples() {
        let f = FnForm::parse("floor((n-1)/2)").unwrap();
        assert_eq!(f, FnForm::Var.sub(FnForm::int(1)).div(FnForm::int(2)).floor());
        assert_eq!(FnForm::parse("sqrt(n)").unwrap(), FnForm::Var.pow(Exp::new(1, 2)));
        assert_eq!(
            FnForm::parse("log(2,n)").unwrap(),
            FnForm::Var.log(Some(ExactConst::from_int(2)))
        );
        assert_eq!(FnForm::parse("n^2").unwrap(), FnForm::Var.pow(Exp::from(2)));
    }

    #[test]
    fn constant_folding() {
        assert_eq!(FnForm::parse("1/2 + 1/3").unwrap(), FnForm::rat(rat(5, 6)));
        assert_eq!(FnForm::parse("4^(1/2)").unwrap(), FnForm::int(2));
        assert_eq!(FnForm::parse("2n").unwrap(), FnForm::int(2).mul(FnForm::Var));
        let l = FnForm::parse("ln(8)/ln(2)").unwrap();
        assert_eq!(l, FnForm::int(3));
        assert_eq!(FnForm::parse("(-1)^n").unwrap(), FnForm::exp(ExactConst::from_int(-1), FnForm::Var));
        let _ = int(0);
    }

    #[test]
    fn errors_carry_positions() {
        match FnForm::parse("floor(n") {
            Err(FnError::Parse { pos, .. }) => assert_eq!(pos, 7),
            other => panic!("{other:?}"),
        }
        assert!(FnForm::parse("n^n").is_err());
        assert!(FnForm::parse("log(1,n)").is_err());
    }
}
