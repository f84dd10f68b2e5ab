use num_traits::{Signed, Zero};

use super::{SetExpr, Q};

const SUM: u8 = 0;
const INTER: u8 = 1;
const CART: u8 = 2;
const UNARY: u8 = 3;
const POST: u8 = 4;
const ATOM: u8 = 5;

fn level(e: &SetExpr) -> u8 {
    use SetExpr::*;
    match e {
        Union(..) | Diff(..) | DisjUnion(..) => SUM,
        Inter(..) => INTER,
        Cart(..) => CART,
        Neg(_) => UNARY,
        Shift(..) | Scale(..) => POST,
        Arith { m, .. } if *m != 0 => POST,
        _ => ATOM,
    }
}

fn q(r: &Q) -> String {
    r.to_string()
}

impl SetExpr {
    fn wrap(&self, min: u8, unicode: bool) -> String {
        let s = self.render(unicode);
        if level(self) < min {
            format!("({s})")
        } else {
            s
        }
    }

    /// Text form accepted by the parser.
    pub fn render(&self, unicode: bool) -> String {
        use SetExpr::*;
        let bin = |a: &SetExpr, b: &SetExpr, op: &str, lv: u8| {
            format!("{} {op} {}", a.wrap(lv, unicode), b.wrap(lv + 1, unicode))
        };
        let (u, i, d, x) = if unicode { ("∪", "∩", "⊔", "×") } else { ("u", "i", "|+|", "x") };
        match self {
            N => "N".into(),
            Z => "Z".into(),
            QPlus => "Q+".into(),
            HalfN => "halfN".into(),
            Primes => "primes".into(),
            Fib => "fib".into(),
            Tri => "tri".into(),
            Od2 => "od2".into(),
            Arith { k, m } => {
                let base = if *k == 1 { "N".to_string() } else { format!("{k}N") };
                match m.signum() {
                    0 => base,
                    1 => format!("{base}+{m}"),
                    _ => format!("{base}-{}", -m),
                }
            }
            Power(k) => format!("N^({k})"),
            Poly(p) => format!("poly({})", p.render_args()),
            Geom { a, r } => format!("geom({a},{r})"),
            Finite(v) => format!("{{{}}}", v.iter().map(q).collect::<Vec<_>>().join(",")),
            Band(k) => format!("band({k})"),
            Union(a, b) => bin(a, b, u, SUM),
            Diff(a, b) => bin(a, b, "\\", SUM),
            DisjUnion(a, b) => bin(a, b, d, SUM),
            Inter(a, b) => bin(a, b, i, INTER),
            Cart(a, b) => bin(a, b, x, CART),
            Neg(a) => format!("-{}", a.wrap(UNARY, unicode)),
            Shift(a, r) => {
                let op = if r.is_negative() { "-" } else { "+" };
                format!("{} {op} {}", a.wrap(POST, unicode), q(&r.abs()))
            }
            Scale(a, r) => {
                let s = if r.is_zero() { "0".into() } else { q(r) };
                format!("{} * {s}", a.wrap(POST, unicode))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::canonicalize;
    use super::*;

    #[test]
    fn renders_and_reparses() {
        for s in [
            "3N u 4N",
            "2N-1",
            "N^(2) u N^(3)",
            "N \\ (2N u {1,2})",
            "(N |+| N) |+| {1}",
            "-N |+| {0} |+| N",
            "N - 1/2",
            "(N u 2N) * 1/3",
            "poly(1,-4,4) i 3N+1",
            "N x N",
            "geom(1,2) \\ {1}",
            "band(3)",
        ] {
            let e = SetExpr::parse(s).unwrap();
            let r = e.render(false);
            assert_eq!(SetExpr::parse(&r).unwrap(), e, "{s} -> {r}");
            let c = canonicalize(&e);
            assert_eq!(SetExpr::parse(&c.render(false)).unwrap(), c, "{s}");
            let uni = e.render(true);
            assert_eq!(SetExpr::parse(&uni).unwrap(), e, "{uni}");
        }
        assert_eq!(SetExpr::parse("2N - 1").unwrap().render(false), "2N-1");
        assert_eq!(SetExpr::parse("3N u 4N").unwrap().render(true), "3N ∪ 4N");
    }
}
