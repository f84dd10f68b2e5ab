//! Canonical forms: flattened, deduplicated and sorted unions and
//! intersections, progressions intersected by residue arithmetic, and
//! shifts/scales folded into atoms.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::periodic::Periodic;
use super::poly::QPoly;
use super::{SetExpr, Q};

/// Largest index period tried when splitting a polynomial atom into
/// residue classes.
const MAX_CLASS_PERIOD: i64 = 4096;

fn flatten<'a>(e: &'a SetExpr, union: bool, out: &mut Vec<&'a SetExpr>) {
    match (e, union) {
        (SetExpr::Union(a, b), true) | (SetExpr::Inter(a, b), false) => {
            flatten(a, union, out);
            flatten(b, union, out);
        }
        _ => out.push(e),
    }
}

fn rebuild(mut v: Vec<SetExpr>, union: bool) -> SetExpr {
    v.sort();
    v.dedup();
    let f = if union { SetExpr::union } else { SetExpr::inter };
    v.into_iter().reduce(f).unwrap_or_else(|| if union { SetExpr::empty() } else { SetExpr::N })
}

/// Normal form of an atom given by a polynomial, if a simpler atom fits.
pub fn poly_atom(p: QPoly) -> SetExpr {
    let c = p.coeffs();
    if c.len() == 2 && c[0].is_integer() && c[1].is_integer() {
        let (m, k) = (c[0].to_integer(), c[1].to_integer());
        return if k == 1 && m == 0 { SetExpr::N } else { SetExpr::Arith { k, m } };
    }
    if c.len() > 2 && c[..c.len() - 1].iter().all(|x| x.is_zero()) && c[c.len() - 1].is_one() {
        return SetExpr::Power(c.len() as u32 - 1);
    }
    if c == [Q::zero(), Q::new(1, 2), Q::new(1, 2)] {
        return SetExpr::Tri;
    }
    SetExpr::Poly(p)
}

fn is_polylike(e: &SetExpr) -> bool {
    matches!(e, SetExpr::Power(_) | SetExpr::Tri | SetExpr::Poly(_))
}

/// {p(j)} ∩ B for eventually periodic B, as a union of polynomial atoms in
/// residue classes of j, with finite corrections.
fn poly_inter_periodic(p: &QPoly, b: &Periodic) -> Option<SetExpr> {
    let raw = b.modulus as i64 * p.denominator();
    if raw > MAX_CLASS_PERIOD {
        return None;
    }
    let hit: Vec<bool> = (0..raw)
        .map(|c| p.eval_int(if c == 0 { raw } else { c }).is_some_and(|v| b.pattern_has(v)))
        .collect();
    // shortest period of the class pattern
    let per = (1..=raw).find(|d| raw % d == 0 && (0..raw as usize).all(|i| hit[i] == hit[i % *d as usize]))?;
    let mut parts: Vec<SetExpr> = Vec::new();
    for c in 1..=per {
        if hit[(c % per) as usize] {
            parts.push(poly_atom(p.substitute(per, c - per)));
        }
    }
    let mut e = rebuild(parts, true);
    let (added, removed) = b.split_exceptions();
    let on_p = |v: &Vec<i64>| v.iter().copied().filter(|&x| p.index_of(x).is_some()).collect::<Vec<_>>();
    let (added, removed) = (on_p(&added), on_p(&removed));
    if !removed.is_empty() {
        e = e.diff(SetExpr::finite(&removed));
    }
    if !added.is_empty() {
        e = if e.is_empty_literal() { SetExpr::finite(&added) } else { e.union(SetExpr::finite(&added)) };
    }
    Some(e)
}

fn rational_sqrt(q: Q) -> Option<Q> {
    let r = |x: i64| super::exact_root(x, 2);
    Some(Q::new(r(*q.numer())?, r(*q.denom())?))
}

/// Quadratic atoms P, Q with a/a' a rational square k². Completing squares
/// gives X² − (kY)² = D for X = 2as + b, Y = 2a't + b'. With D ≠ 0 the
/// atoms meet in a finite set bounded through X + kY = D/(X − kY). With
/// D = 0 either one atom is an index subsequence of the other or the
/// meeting points lie on X = −kY.
fn quadratic_inter(p: &QPoly, q: &QPoly) -> Option<SetExpr> {
    let (pc, qc) = (p.coeffs(), q.coeffs());
    if p.degree() != 2 || q.degree() != 2 {
        return None;
    }
    let (a, b, c) = (pc[2], pc[1], pc[0]);
    let (a2, b2, c2) = (qc[2], qc[1], qc[0]);
    let k = rational_sqrt(a / a2)?;
    let four = Q::from_integer(4);
    let two = Q::from_integer(2);
    let d = b * b - four * a * c - k * k * (b2 * b2 - four * a2 * c2);
    let int_index = |slope: Q, off: Q| slope.is_integer() && off.is_integer() && slope + off >= Q::one();
    let reach = if d.is_zero() {
        if int_index(Q::one() / k, (k * b2 - b) / (two * a)) {
            return Some(poly_atom(q.clone()));
        }
        if int_index(k, (b / k - b2) / (two * a2)) {
            return Some(poly_atom(p.clone()));
        }
        // s = t/k + e has integer points on a progression of t or on none
        let (slope, off) = (Q::one() / k, (k * b2 - b) / (two * a));
        let span = slope.denom() * off.denom();
        if (1..=span).any(|t| (slope * Q::from_integer(t) + off).is_integer()) {
            return None;
        }
        (b.abs() + (k * b2).abs()) / (two * a) + Q::one()
    } else {
        let den = [two * a, b, k * two * a2, k * b2].iter().fold(1i64, |l, x| l.lcm(x.denom()));
        (d.abs() * Q::from_integer(den) + (k * (two * a2 + b2)).abs() + b.abs()) / (two * a)
    };
    let top = reach.ceil().to_integer() + 2;
    if top > 1_000_000 {
        return None;
    }
    let common: Vec<i64> = (1..=top).filter_map(|s| p.eval_int(s)).filter(|v| q.index_of(*v).is_some()).collect();
    Some(SetExpr::finite(&common))
}

/// Pairwise intersection rules; `None` keeps the pair as is.
fn inter_pair(a: &SetExpr, b: &SetExpr) -> Option<SetExpr> {
    use SetExpr::*;
    if a == b {
        return Some(a.clone());
    }
    match (a, b) {
        (Finite(v), o) | (o, Finite(v)) => return Some(Finite(v.iter().copied().filter(|q| o.contains_q(*q)).collect())),
        (N, o) | (o, N) if o.is_nat_subset() => return Some(o.clone()),
        (Power(x), Power(y)) => return Some(Power(x.lcm(y))),
        _ => {}
    }
    if Periodic::from_expr(a).is_some() && Periodic::from_expr(b).is_some() {
        return Periodic::from_expr(&a.clone().inter(b.clone())).map(|p| p.to_expr());
    }
    if is_polylike(a) && is_polylike(b) {
        if let Some(e) = a.as_qpoly().zip(b.as_qpoly()).and_then(|(p, q)| quadratic_inter(&p, &q)) {
            return Some(e);
        }
    }
    for (x, y) in [(a, b), (b, a)] {
        if is_polylike(x) {
            if let (Some(p), Some(per)) = (x.as_qpoly(), Periodic::from_expr(y)) {
                return poly_inter_periodic(&p, &per).map(|e| canonicalize(&e));
            }
        }
    }
    None
}

fn canon_inter(a: &SetExpr, b: &SetExpr) -> SetExpr {
    let mut ops = Vec::new();
    let whole = a.clone().inter(b.clone());
    flatten(&whole, false, &mut ops);
    let mut v: Vec<SetExpr> = ops.into_iter().cloned().collect();
    v.sort();
    v.dedup();
    // fold pairs until nothing changes
    'outer: loop {
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                if let Some(r) = inter_pair(&v[i], &v[j]) {
                    v.remove(j);
                    v[i] = r;
                    if v[i].is_empty_literal() {
                        return SetExpr::empty();
                    }
                    continue 'outer;
                }
            }
        }
        break;
    }
    rebuild(v, false)
}

fn canon_union(a: &SetExpr, b: &SetExpr) -> SetExpr {
    let mut ops = Vec::new();
    let whole = a.clone().union(b.clone());
    flatten(&whole, true, &mut ops);
    let mut v: Vec<SetExpr> = ops.into_iter().filter(|e| !e.is_empty_literal()).cloned().collect();
    if v.contains(&SetExpr::N) && v.iter().all(|e| e.is_nat_subset()) {
        return SetExpr::N;
    }
    // merge finite literals
    let mut fin: Vec<Q> = Vec::new();
    v.retain(|e| match e {
        SetExpr::Finite(x) => {
            fin.extend(x);
            false
        }
        _ => true,
    });
    if !fin.is_empty() {
        fin.sort();
        fin.dedup();
        fin.retain(|q| !v.iter().any(|e| e.contains_q(*q)));
        if !fin.is_empty() {
            v.push(SetExpr::Finite(fin));
        }
    }
    rebuild(v, true)
}

fn fold_shift(a: SetExpr, r: Q) -> SetExpr {
    use SetExpr::*;
    if r.is_zero() {
        return a;
    }
    match a {
        Shift(x, s) => fold_shift(*x, s + r),
        Finite(v) => Finite(v.into_iter().map(|q| q + r).collect()),
        N if r.is_integer() && r.is_positive() => Arith { k: 1, m: r.to_integer() },
        Arith { k, m } if r.is_integer() && m + r.to_integer() > -k => {
            let m = m + r.to_integer();
            if k == 1 && m == 0 {
                N
            } else {
                Arith { k, m }
            }
        }
        x => x.shift(r),
    }
}

fn fold_scale(a: SetExpr, r: Q) -> SetExpr {
    use SetExpr::*;
    if r.is_one() {
        return a;
    }
    match a {
        Scale(x, s) => fold_scale(*x, s * r),
        Finite(v) => {
            let mut w: Vec<Q> = v.into_iter().map(|q| q * r).collect();
            w.sort();
            Finite(w)
        }
        N if r == Q::new(1, 2) => HalfN,
        N if r.is_integer() && r.is_positive() => Arith { k: r.to_integer(), m: 0 },
        Arith { k, m } if r.is_integer() && r.is_positive() => Arith { k: k * r.to_integer(), m: m * r.to_integer() },
        x => x.scale(r),
    }
}

/// Replace a Boolean combination of progressions and finite sets by its
/// periodic normal form when that is smaller.
fn periodic_shrink(e: SetExpr) -> SetExpr {
    if let Some(p) = Periodic::from_expr(&e) {
        let c = p.to_expr();
        if c.node_count() < e.node_count() {
            return c;
        }
    }
    e
}

pub fn canonicalize(e: &SetExpr) -> SetExpr {
    use SetExpr::*;
    let out = match e {
        Arith { k: 1, m: 0 } | Power(1) => N,
        Poly(p) => poly_atom(p.clone()),
        Finite(v) => {
            let mut w = v.clone();
            w.sort();
            w.dedup();
            Finite(w)
        }
        Union(a, b) => canon_union(&canonicalize(a), &canonicalize(b)),
        Inter(a, b) => canon_inter(&canonicalize(a), &canonicalize(b)),
        Diff(a, b) => {
            let (a, b) = (canonicalize(a), canonicalize(b));
            if a == b || a.is_empty_literal() {
                SetExpr::empty()
            } else if b.is_empty_literal() {
                a
            } else if let Finite(v) = &a {
                Finite(v.iter().copied().filter(|q| !b.contains_q(*q)).collect())
            } else {
                a.diff(b)
            }
        }
        DisjUnion(a, b) => {
            let (a, b) = (canonicalize(a), canonicalize(b));
            if a.is_empty_literal() {
                b
            } else if b.is_empty_literal() {
                a
            } else {
                a.disj(b)
            }
        }
        Cart(a, b) => canonicalize(a).cart(canonicalize(b)),
        Neg(a) => match canonicalize(a) {
            Neg(x) => *x,
            Finite(v) => {
                let mut w: Vec<Q> = v.into_iter().map(|q| -q).collect();
                w.sort();
                Finite(w)
            }
            x => x.negate(),
        },
        Shift(a, r) => fold_shift(canonicalize(a), *r),
        Scale(a, r) => fold_scale(canonicalize(a), *r),
        x => x.clone(),
    };
    periodic_shrink(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> SetExpr {
        canonicalize(&SetExpr::parse(s).unwrap())
    }

    fn p(s: &str) -> SetExpr {
        SetExpr::parse(s).unwrap()
    }

    #[test]
    fn spec_examples() {
        assert_eq!(c("3N i 4N"), p("12N"));
        assert_eq!(c("(2N u 3N) u (2N u 3N)"), p("2N u 3N"));
        assert_eq!(c("N * 1/2"), SetExpr::HalfN);
        assert_eq!(c("2N u (2N-1)"), SetExpr::N);
        assert_eq!(c("3N u 4N"), p("3N u 4N"));
    }

    #[test]
    fn polynomial_classes() {
        assert_eq!(c("N^(2) i 2N"), p("poly(0,0,4)"));
        assert_eq!(c("N^(2) i (2N-1)"), p("poly(1,-4,4)"));
        assert_eq!(c("N^(2) i N^(3)"), p("N^(6)"));
        assert_eq!(c("N^(2) i (2N+1)"), p("poly(1,-4,4) \\ {1}"));
        let e = c("tri i 2N");
        for n in 1..500 {
            assert_eq!(e.contains_int(n), p("tri i 2N").contains_int(n), "{n}");
        }
        assert_eq!(c("N^(2) i 3N+2"), SetExpr::empty());
        assert_eq!(c("N^(2) i poly(7,0,1)"), SetExpr::finite(&[16]));
        assert_eq!(c("poly(1,-6,8) i poly(3,-10,8)"), SetExpr::empty());
        assert_eq!(c("N^(2) i poly(1,-4,4)"), p("poly(1,-4,4)"));
        assert_eq!(c("N^(2) i poly(4,0,4)"), SetExpr::empty());
    }

    #[test]
    fn folding() {
        assert_eq!(c("{3,1} + 1/2"), SetExpr::Finite(vec![Q::new(3, 2), Q::new(7, 2)]));
        assert_eq!(c("(N + 1/2) - 1/2"), SetExpr::N);
        assert_eq!(c("(2N-1) * 3"), p("6N-3"));
        assert_eq!(c("--N"), SetExpr::N);
        assert_eq!(c("{} |+| N"), SetExpr::N);
        assert_eq!(c("2N \\ 2N"), SetExpr::empty());
        assert_eq!(c("{1,2,3} \\ 2N"), p("{1,3}"));
        assert_eq!(c("N u 3N u {7}"), SetExpr::N);
    }

    #[test]
    fn canonical_form_preserves_membership() {
        for s in [
            "3N u 4N \\ {12}",
            "N^(2) i (3N+1)",
            "tri i 3N",
            "(N^(3) u 2N) i 5N",
            "primes u {1}",
            "(N \\ 2N) u 4N",
        ] {
            let e = p(s);
            let k = canonicalize(&e);
            assert_eq!(e.enumerate(3000).unwrap(), k.enumerate(3000).unwrap(), "{s} vs {k}");
        }
    }
}
