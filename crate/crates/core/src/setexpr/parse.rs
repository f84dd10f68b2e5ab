//! Text grammar for set expressions.
//!
//! ```text
//! expr    := inter (("u" | "|+|" | "\") inter)*
//! inter   := cart ("i" cart)*
//! cart    := unary ("x" unary)*
//! unary   := "-" unary | postfix
//! postfix := primary (("+" | "-" | "*") number)*
//! primary := "(" expr ")" | atom | int primary | "{" number,* "}"
//! ```

use num_traits::{One, Signed, Zero};

use super::poly::QPoly;
use super::{SetError, SetExpr, Q};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    QPlus,
    Union,
    Inter,
    Diff,
    Disj,
    Cart,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    pos: usize,
    /// no whitespace before this token
    glued: bool,
}

fn syntax<T>(pos: usize, expected: &str) -> Result<T, SetError> {
    Err(SetError::Syntax { pos, expected: expected.to_string() })
}

fn lex(s: &str) -> Result<Vec<Token>, SetError> {
    let cs: Vec<(usize, char)> = s.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut glued = false;
    while i < cs.len() {
        let (pos, c) = cs[i];
        if c.is_whitespace() {
            glued = false;
            i += 1;
            continue;
        }
        let push = |tok: Tok, n: usize, out: &mut Vec<Token>| {
            out.push(Token { tok, pos, glued });
            n
        };
        let step = match c {
            '0'..='9' => {
                let mut j = i;
                while j < cs.len() && cs[j].1.is_ascii_digit() {
                    j += 1;
                }
                let text: String = cs[i..j].iter().map(|x| x.1).collect();
                let v = text.parse::<i64>().or_else(|_| syntax(pos, "an integer that fits in 64 bits"))?;
                push(Tok::Int(v), j - i, &mut out)
            }
            c if c.is_alphabetic() => {
                let mut j = i;
                while j < cs.len() && (cs[j].1.is_alphanumeric() || cs[j].1 == '_') {
                    j += 1;
                }
                let text: String = cs[i..j].iter().map(|x| x.1).collect();
                if text == "Q" && cs.get(j).map(|x| x.1) == Some('+') {
                    push(Tok::QPlus, j - i + 1, &mut out)
                } else {
                    let tok = match text.as_str() {
                        "u" => Tok::Union,
                        "i" => Tok::Inter,
                        "x" => Tok::Cart,
                        "ℕ" => Tok::Ident("N".into()),
                        "ℤ" => Tok::Ident("Z".into()),
                        _ => Tok::Ident(text),
                    };
                    push(tok, j - i, &mut out)
                }
            }
            '|' => {
                if cs.get(i + 1).map(|x| x.1) == Some('+') && cs.get(i + 2).map(|x| x.1) == Some('|') {
                    push(Tok::Disj, 3, &mut out)
                } else {
                    return syntax(pos, "'|+|'");
                }
            }
            '∪' => push(Tok::Union, 1, &mut out),
            '∩' => push(Tok::Inter, 1, &mut out),
            '⊔' => push(Tok::Disj, 1, &mut out),
            '×' => push(Tok::Cart, 1, &mut out),
            '\\' | '∖' => push(Tok::Diff, 1, &mut out),
            '+' => push(Tok::Plus, 1, &mut out),
            '-' | '−' => push(Tok::Minus, 1, &mut out),
            '*' => push(Tok::Star, 1, &mut out),
            '/' => push(Tok::Slash, 1, &mut out),
            '^' => push(Tok::Caret, 1, &mut out),
            '(' => push(Tok::LParen, 1, &mut out),
            ')' => push(Tok::RParen, 1, &mut out),
            '{' => push(Tok::LBrace, 1, &mut out),
            '}' => push(Tok::RBrace, 1, &mut out),
            ',' => push(Tok::Comma, 1, &mut out),
            _ => return syntax(pos, "a set atom, operator or parenthesis"),
        };
        i += step;
        glued = true;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    i: usize,
    end: usize,
}

const PRIMARY: &str = "a set atom (N, Z, Q+, halfN, primes, fib, tri, od2, kN, N^(k), geom, poly, band, {..}) or '('";

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.tok)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |t| t.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.i).map(|t| t.tok.clone());
        self.i += 1;
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), SetError> {
        if self.peek() == Some(&t) {
            self.i += 1;
            Ok(())
        } else {
            syntax(self.pos(), what)
        }
    }

    fn expr(&mut self) -> Result<SetExpr, SetError> {
        let mut lhs = self.inter()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Union) => SetExpr::union,
                Some(Tok::Disj) => SetExpr::disj,
                Some(Tok::Diff) => SetExpr::diff,
                _ => return Ok(lhs),
            };
            self.i += 1;
            let rhs = self.inter()?;
            lhs = op(lhs, rhs);
        }
    }

    fn inter(&mut self) -> Result<SetExpr, SetError> {
        let mut lhs = self.cart()?;
        while self.peek() == Some(&Tok::Inter) {
            self.i += 1;
            lhs = lhs.inter(self.cart()?);
        }
        Ok(lhs)
    }

    fn cart(&mut self) -> Result<SetExpr, SetError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::Cart) {
            self.i += 1;
            lhs = lhs.cart(self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<SetExpr, SetError> {
        if self.peek() == Some(&Tok::Minus) {
            self.i += 1;
            return Ok(self.unary()?.negate());
        }
        self.postfix()
    }

    fn postfix(&mut self) -> Result<SetExpr, SetError> {
        let mut e = self.primary()?;
        loop {
            let pos = self.pos();
            match self.peek() {
                Some(Tok::Plus) => {
                    self.i += 1;
                    let r = self.number()?;
                    e = shift(e, r, pos)?;
                }
                Some(Tok::Minus) => {
                    self.i += 1;
                    let r = self.number()?;
                    e = shift(e, -r, pos)?;
                }
                Some(Tok::Star) => {
                    self.i += 1;
                    let r = self.number()?;
                    if r.is_zero() {
                        return Err(SetError::Constraint { pos, msg: "scale factor must be nonzero".into() });
                    }
                    e = scale(e, r);
                }
                _ => return Ok(e),
            }
        }
    }

    fn int(&mut self) -> Result<i64, SetError> {
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.i += 1;
            true
        } else {
            false
        };
        match self.bump() {
            Some(Tok::Int(v)) => Ok(if neg { -v } else { v }),
            _ => {
                self.i -= 1;
                syntax(self.pos(), "an integer")
            }
        }
    }

    /// Signed rational literal `a` or `a/b`.
    fn number(&mut self) -> Result<Q, SetError> {
        let n = self.int()?;
        if self.peek() == Some(&Tok::Slash) {
            self.i += 1;
            let pos = self.pos();
            let d = self.int()?;
            if d == 0 {
                return Err(SetError::Constraint { pos, msg: "zero denominator".into() });
            }
            return Ok(Q::new(n, d));
        }
        Ok(Q::from_integer(n))
    }

    fn args(&mut self) -> Result<Vec<Q>, SetError> {
        self.expect(Tok::LParen, "'('")?;
        let mut v = vec![self.number()?];
        while self.peek() == Some(&Tok::Comma) {
            self.i += 1;
            v.push(self.number()?);
        }
        self.expect(Tok::RParen, "',' or ')'")?;
        Ok(v)
    }

    fn int_args(&mut self, n: usize, name: &str) -> Result<Vec<i64>, SetError> {
        let pos = self.pos();
        let v = self.args()?;
        if v.len() != n || v.iter().any(|q| !q.is_integer()) {
            return Err(SetError::Constraint { pos, msg: format!("{name} takes {n} integer argument(s)") });
        }
        Ok(v.iter().map(|q| q.to_integer()).collect())
    }

    fn primary(&mut self) -> Result<SetExpr, SetError> {
        let pos = self.pos();
        let Some(t) = self.toks.get(self.i).cloned() else {
            return syntax(pos, PRIMARY);
        };
        self.i += 1;
        match t.tok {
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::LBrace => {
                let mut v = Vec::new();
                if self.peek() != Some(&Tok::RBrace) {
                    v.push(self.number()?);
                    while self.peek() == Some(&Tok::Comma) {
                        self.i += 1;
                        v.push(self.number()?);
                    }
                }
                self.expect(Tok::RBrace, "',' or '}'")?;
                let mut s = v.clone();
                s.sort();
                s.dedup();
                if s.len() != v.len() {
                    return Err(SetError::Constraint { pos, msg: "duplicate element in finite set".into() });
                }
                Ok(SetExpr::Finite(s))
            }
            Tok::QPlus => Ok(SetExpr::QPlus),
            Tok::Int(k) => {
                let glued = self.toks.get(self.i).is_some_and(|n| n.glued && matches!(n.tok, Tok::Ident(_) | Tok::QPlus | Tok::LParen));
                if !glued {
                    return syntax(pos, PRIMARY);
                }
                if k == 0 {
                    return Err(SetError::Constraint { pos, msg: "coefficient must be positive".into() });
                }
                let inner = self.primary()?;
                Ok(scale(inner, Q::from_integer(k)))
            }
            Tok::Ident(name) => self.atom(&name, pos),
            _ => syntax(pos, PRIMARY),
        }
    }

    fn atom(&mut self, name: &str, pos: usize) -> Result<SetExpr, SetError> {
        Ok(match name {
            "N" => {
                if self.peek() == Some(&Tok::Caret) {
                    self.i += 1;
                    let kpos = self.pos();
                    let k = self.int_args(1, "N^")?[0];
                    if k < 1 {
                        return Err(SetError::Constraint { pos: kpos, msg: "power must be at least 1".into() });
                    }
                    if k == 1 {
                        SetExpr::N
                    } else {
                        SetExpr::Power(k as u32)
                    }
                } else {
                    SetExpr::N
                }
            }
            "Z" => SetExpr::Z,
            "QB" => SetExpr::QPlus,
            "halfN" => SetExpr::HalfN,
            "primes" => SetExpr::Primes,
            "fib" => SetExpr::Fib,
            "tri" => SetExpr::Tri,
            "od2" => SetExpr::Od2,
            "geom" => {
                let v = self.int_args(2, "geom")?;
                if v[0] < 1 || v[1] < 2 {
                    return Err(SetError::Constraint { pos, msg: "geom(a,r) needs a >= 1 and r >= 2".into() });
                }
                SetExpr::Geom { a: v[0], r: v[1] }
            }
            "band" => {
                let v = self.int_args(1, "band")?;
                if v[0] < 1 {
                    return Err(SetError::Constraint { pos, msg: "band index must be positive".into() });
                }
                SetExpr::Band(v[0])
            }
            "poly" => {
                let p = QPoly::new(self.args()?);
                if !p.is_valid_atom() {
                    return Err(SetError::Constraint {
                        pos,
                        msg: "poly needs an integer-valued polynomial, increasing on N with p(1) >= 1".into(),
                    });
                }
                SetExpr::Poly(p)
            }
            _ => return syntax(pos, PRIMARY),
        })
    }
}

/// A + r, folded into arithmetic progressions where possible.
fn shift(e: SetExpr, r: Q, pos: usize) -> Result<SetExpr, SetError> {
    if r.is_integer() {
        let r = r.to_integer();
        let base = match e {
            SetExpr::N => Some((1, 0)),
            SetExpr::Arith { k, m } => Some((k, m)),
            _ => None,
        };
        if let Some((k, m)) = base {
            let m2 = m + r;
            if m2 <= -k {
                return Err(SetError::Constraint {
                    pos,
                    msg: format!("{k}N{m2:+} would contain non-positive numbers (need m > -k)"),
                });
            }
            return Ok(if k == 1 && m2 == 0 { SetExpr::N } else { SetExpr::Arith { k, m: m2 } });
        }
    }
    Ok(e.shift(r))
}

fn scale(e: SetExpr, r: Q) -> SetExpr {
    if r.is_integer() && r.is_positive() {
        let j = r.to_integer();
        match e {
            SetExpr::N => return if j == 1 { SetExpr::N } else { SetExpr::Arith { k: j, m: 0 } },
            SetExpr::Arith { k, m } => return SetExpr::Arith { k: j * k, m: j * m },
            _ => {}
        }
    }
    if r.is_one() {
        return e;
    }
    e.scale(r)
}

pub fn parse(s: &str) -> Result<SetExpr, SetError> {
    let toks = lex(s)?;
    let mut p = Parser { toks, i: 0, end: s.len() };
    let e = p.expr()?;
    if p.i < p.toks.len() {
        return syntax(p.pos(), "an operator (u, i, \\, |+|, x) or end of input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(parse("3N u 4N").unwrap(), SetExpr::arith(3, 0).union(SetExpr::arith(4, 0)));
        assert_eq!(parse("2N - 1").unwrap(), SetExpr::arith(2, -1));
        assert_eq!(parse("N^(2) u N^(3)").unwrap(), SetExpr::Power(2).union(SetExpr::Power(3)));
        assert_eq!(parse("3N∪4N").unwrap(), parse("3N u 4N").unwrap());
        assert_eq!(parse("N+2").unwrap(), SetExpr::arith(1, 2));
        assert_eq!(parse("N - 1/2").unwrap(), SetExpr::N.shift(Q::new(-1, 2)));
        assert_eq!(parse("N * 1/2").unwrap(), SetExpr::N.scale(Q::new(1, 2)));
        assert_eq!(parse("2Z").unwrap(), SetExpr::Z.scale(Q::from_integer(2)));
        assert_eq!(parse("Q+").unwrap(), SetExpr::QPlus);
    }

    #[test]
    fn precedence() {
        let e = parse("A").map(|_| ()).unwrap_err();
        assert!(matches!(e, SetError::Syntax { pos: 0, .. }));
        let e = parse("N u 2N i 3N").unwrap();
        assert_eq!(e, SetExpr::N.union(SetExpr::arith(2, 0).inter(SetExpr::arith(3, 0))));
        let e = parse("-N x N |+| {0}").unwrap();
        assert_eq!(e, SetExpr::N.negate().cart(SetExpr::N).disj(SetExpr::finite(&[0])));
        let e = parse("N \\ 2N \\ {1}").unwrap();
        assert_eq!(e, SetExpr::N.diff(SetExpr::arith(2, 0)).diff(SetExpr::finite(&[1])));
    }

    #[test]
    fn errors_carry_positions() {
        match parse("2N - 2") {
            Err(SetError::Constraint { pos: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse("3N u") {
            Err(SetError::Syntax { pos: 4, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("{1, 1}"), Err(SetError::Constraint { .. })));
        assert!(matches!(parse("poly(0,0,-1)"), Err(SetError::Constraint { .. })));
        assert!(matches!(parse("N ? N"), Err(SetError::Syntax { pos: 2, .. })));
        assert!(matches!(parse("(N"), Err(SetError::Syntax { .. })));
    }
}
