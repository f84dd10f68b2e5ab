//! Reference contexts: an ordered reference set cut into finite windows,
//! with its magnum θ and the endpoint function Λ.

use num_integer::Integer;
use num_rational::BigRational;

use crate::counting::{derive_counting, first_elements, relative_counting, Provenance};
use crate::fenestration::{Endpoints, Fenestration, OmegaStatus};
use crate::funexpr::{FnForm, Table};
use crate::setexpr::{canonicalize, Elem, Periodic, SetExpr, Q};
use crate::surnat::{Constant, Exactness, Key, SurnatValue};

type S = SurnatValue<BigRational>;

#[derive(Clone, Debug, PartialEq)]
pub enum Ordering {
    /// increasing order of a subset of N, one element per window
    CanonicalN,
    /// N×N by max(m, l); pairs in lowest terms double as rationals m/l
    SquareN2,
    /// 0, 1, -1, 2, -2, ...
    InterleavedZ,
    /// windows {k - 1/2, k}
    DoubletonHalfN,
    /// reduced fractions m/l by max(m, l)
    SquareQ,
    /// reduced fractions by the sets H(n) = {m/l : l <= n, m <= n*l}
    BandedQ,
    /// N reordered in blocks; each block takes the next unused element of
    /// each listed class in turn
    PeriodicBlocks(Vec<SetExpr>),
}

impl Ordering {
    pub fn name(&self) -> String {
        match self {
            Ordering::CanonicalN => "canonical".into(),
            Ordering::SquareN2 => "square".into(),
            Ordering::InterleavedZ => "interleaved".into(),
            Ordering::DoubletonHalfN => "doubleton".into(),
            Ordering::SquareQ => "square".into(),
            Ordering::BandedQ => "banded".into(),
            Ordering::PeriodicBlocks(p) => {
                format!("blocks[{}]", p.iter().map(|e| e.render(false)).collect::<Vec<_>>().join("; "))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct RefContext {
    pub reference: SetExpr,
    pub ordering: Ordering,
    pub fen: Fenestration,
    pub theta: S,
    pub caveats: Vec<String>,
}

/// 2χω² + o(ω²), the magnum of the positive rationals.
pub fn theta_qplus() -> S {
    S::term(Constant::chi().scale(&crate::scalar::int(2)), Key::omega_pow(2, 1))
        .with_exactness(Exactness::LittleO(Key::omega_pow(2, 1)))
}

fn fen_with(lambda: FnForm, target: S, status: OmegaStatus) -> Fenestration {
    Fenestration { endpoints: Endpoints::Symbolic(lambda), target, status }
}

impl RefContext {
    pub fn canonical_n() -> Self {
        Self::subset(&SetExpr::N, S::omega())
    }

    /// A subset of N in increasing order with singleton windows; `theta` is
    /// its magnum.
    pub fn subset(a: &SetExpr, theta: S) -> Self {
        let status = OmegaStatus::IsFenestration(Some(theta.clone()));
        RefContext {
            reference: canonicalize(a),
            ordering: Ordering::CanonicalN,
            fen: fen_with(FnForm::Var, theta.clone(), status),
            theta,
            caveats: vec![],
        }
    }

    pub fn square_n2() -> Self {
        let theta = S::omega().powi(2);
        let fen = Fenestration::new(FnForm::parse("n^2").unwrap(), theta.clone());
        RefContext { reference: SetExpr::N.cart(SetExpr::N), ordering: Ordering::SquareN2, fen, theta, caveats: vec![] }
    }

    pub fn interleaved_z() -> Self {
        let theta = S::omega().scale(&crate::scalar::int(2)).add(&S::from_int(1));
        let fen = Fenestration::new(FnForm::parse("2*n - 1").unwrap(), theta.clone());
        RefContext { reference: SetExpr::Z, ordering: Ordering::InterleavedZ, fen, theta, caveats: vec![] }
    }

    pub fn doubleton_half_n() -> Self {
        let theta = S::omega().scale(&crate::scalar::int(2));
        let fen = Fenestration::new(FnForm::parse("2*n").unwrap(), theta.clone());
        RefContext { reference: SetExpr::HalfN, ordering: Ordering::DoubletonHalfN, fen, theta, caveats: vec![] }
    }

    /// Q+ in square order. The window count 2Φ(n) - 1 has no closed inverse;
    /// ν = ω is taken from the square ordering of N×N.
    pub fn square_q() -> Self {
        let theta = theta_qplus();
        let lambda = FnForm::parse("2*Phi(n) - 1").unwrap();
        let fen = fen_with(lambda, theta.clone(), OmegaStatus::IsFenestration(Some(S::omega())));
        RefContext {
            reference: SetExpr::QPlus,
            ordering: Ordering::SquareQ,
            fen,
            theta,
            caveats: vec!["asymptotic: magnum of the reference known to o(w^2)".into()],
        }
    }

    /// Q+ in banded order, Λ(n) = nΦ(n). ν solves χν³ = 2χω² to leading
    /// order.
    pub fn banded_q() -> Self {
        let theta = theta_qplus();
        let key = Key::omega_pow(2, 3);
        let c = Constant::from_int(2).pow(crate::surnat::Exp::new(1, 3)).unwrap();
        let nu = S::term(c, key).with_exactness(Exactness::LittleO(key));
        let lambda = FnForm::parse("n*Phi(n)").unwrap();
        let fen = fen_with(lambda, theta.clone(), OmegaStatus::IsFenestration(Some(nu)));
        RefContext {
            reference: SetExpr::QPlus,
            ordering: Ordering::BandedQ,
            fen,
            theta,
            caveats: vec!["asymptotic: window index solved to leading order".into()],
        }
    }

    pub fn periodic_blocks(pattern: Vec<SetExpr>) -> Self {
        let l = pattern.len() as i64;
        let reference = pattern.iter().cloned().reduce(SetExpr::union).map(|u| canonicalize(&u)).unwrap_or(SetExpr::N);
        let theta = S::omega();
        let fen = Fenestration::new(FnForm::int(l).mul(FnForm::Var), theta.clone());
        RefContext { reference, ordering: Ordering::PeriodicBlocks(pattern), fen, theta, caveats: vec![] }
    }

    /// Context by the short names used on the command line.
    pub fn by_name(name: &str, order: Option<&str>) -> Option<Self> {
        Some(match (name, order) {
            ("N", None | Some("canonical")) => Self::canonical_n(),
            ("N2", None | Some("square")) => Self::square_n2(),
            ("Z", None | Some("interleaved")) => Self::interleaved_z(),
            ("halfN", None | Some("doubleton")) => Self::doubleton_half_n(),
            ("Q" | "Q+", None | Some("square")) => Self::square_q(),
            ("Q" | "Q+", Some("banded")) | ("QB", None | Some("banded")) => Self::banded_q(),
            _ => return None,
        })
    }

    pub fn nu(&self) -> Option<&S> {
        self.fen.status.nu()
    }

    /// Elements of windows 1..=count, window by window.
    pub fn windows(&self, count: usize) -> Vec<Vec<Elem>> {
        let num = |p: i64, q: i64| Elem::Num(Q::new(p, q));
        match &self.ordering {
            Ordering::CanonicalN => match first_elements(&self.reference, count) {
                Ok(v) => v.into_iter().map(|x| vec![Elem::int(x)]).collect(),
                Err(_) => vec![],
            },
            Ordering::SquareN2 | Ordering::SquareQ => (1..=count as i64)
                .map(|k| {
                    let side = (1..=k).map(|m| (m, k)).chain((1..k).rev().map(|l| (k, l)));
                    if self.ordering == Ordering::SquareN2 {
                        side.map(|(m, l)| Elem::pair(Elem::int(m), Elem::int(l))).collect()
                    } else {
                        side.filter(|(m, l)| m.gcd(l) == 1).map(|(m, l)| num(m, l)).collect()
                    }
                })
                .collect(),
            Ordering::BandedQ => (1..=count as i64)
                .map(|k| {
                    (1..=k)
                        .flat_map(|l| {
                            let lo = if l < k { (k - 1) * l + 1 } else { 1 };
                            (lo..=k * l).filter(move |m| m.gcd(&l) == 1).map(move |m| Elem::Num(Q::new(m, l)))
                        })
                        .collect()
                })
                .collect(),
            Ordering::InterleavedZ => (1..=count as i64)
                .map(|k| if k == 1 { vec![Elem::int(0)] } else { vec![Elem::int(k - 1), Elem::int(1 - k)] })
                .collect(),
            Ordering::DoubletonHalfN => (1..=count as i64).map(|k| vec![num(2 * k - 1, 2), Elem::int(k)]).collect(),
            Ordering::PeriodicBlocks(pattern) => {
                let mut per: Vec<Vec<i64>> = Vec::new();
                let mut slot = Vec::new();
                for (i, c) in pattern.iter().enumerate() {
                    let mult = pattern.iter().filter(|d| *d == c).count();
                    let nth = pattern[..i].iter().filter(|d| *d == c).count();
                    per.push(first_elements(c, count * mult).unwrap_or_default());
                    slot.push((mult, nth));
                }
                (0..count)
                    .map(|k| {
                        (0..pattern.len())
                            .filter_map(|i| per[i].get(k * slot[i].0 + slot[i].1).map(|&x| Elem::int(x)))
                            .collect()
                    })
                    .collect()
            }
        }
    }

    /// Whether a window element belongs to `set`. Pairs in lowest terms are
    /// read as rationals unless the set is a product.
    pub fn member(&self, set: &SetExpr, e: &Elem) -> bool {
        match e {
            Elem::Pair(a, b) if !matches!(set, SetExpr::Cart(..)) => match (&**a, &**b) {
                (Elem::Num(m), Elem::Num(l)) if m.is_integer() && l.is_integer() => {
                    let (m, l) = (m.to_integer(), l.to_integer());
                    m.gcd(&l) == 1 && set.contains_q(Q::new(m, l))
                }
                _ => false,
            },
            _ => set.contains(e),
        }
    }

    /// Closed form of the cumulative window count K_B(n), when a rule
    /// applies.
    pub fn window_count_form(&self, b: &SetExpr) -> Option<(FnForm, Vec<Provenance>)> {
        let b = canonicalize(b);
        let nat = |e: &SetExpr| {
            let c = derive_counting(e);
            c.symbolic.map(|f| (f, c.provenance))
        };
        let p = |s: &str| FnForm::parse(s).unwrap();
        let spec = |f: FnForm| Some((f, vec![Provenance::Tabulated]));
        match &self.ordering {
            Ordering::CanonicalN => {
                if self.reference == SetExpr::N {
                    return nat(&b);
                }
                let c = relative_counting(&b, &self.reference);
                c.symbolic.map(|f| (f, c.provenance))
            }
            Ordering::SquareN2 | Ordering::SquareQ | Ordering::BandedQ if b.is_nat_subset() => nat(&b),
            Ordering::SquareN2 => match &b {
                SetExpr::Cart(u, v) => {
                    let (fu, mut tu) = nat(u)?;
                    let (fv, tv) = nat(v)?;
                    tu.extend(tv);
                    Some((crate::counting::tidy(&fu.mul(fv)), tu))
                }
                SetExpr::HalfN => spec(p("n + from(2, n, floor((n + 1)/2))")),
                _ => None,
            },
            Ordering::SquareQ => match &b {
                SetExpr::QPlus => spec(FnForm::int(2).mul(FnForm::table(Table::TotientSum, FnForm::Var)).sub(FnForm::int(1))),
                SetExpr::HalfN => spec(p("n + from(2, n, floor((n + 1)/2))")),
                SetExpr::Shift(a, r) if **a == SetExpr::N && *r == Q::new(-1, 2) => spec(p("from(2, n, floor((n + 1)/2))")),
                _ => None,
            },
            Ordering::BandedQ => match &b {
                SetExpr::QPlus => spec(p("n*Phi(n)")),
                SetExpr::Band(k) => spec(FnForm::from_at(*k, FnForm::Var, p("Phi(n)"))),
                SetExpr::HalfN => spec(p("n + from(2, n, n)")),
                _ => None,
            },
            Ordering::DoubletonHalfN => nat(&b).filter(|_| halves_only(&b)),
            Ordering::InterleavedZ => z_form(&b),
            Ordering::PeriodicBlocks(pattern) => {
                let target = Periodic::from_expr(&b)?;
                let mut w = 0i64;
                for c in pattern {
                    let pc = Periodic::from_expr(c)?;
                    let meet = Periodic::combine(&pc, &target, |x, y| x && y)?;
                    if pc.is_subset_of(&target) {
                        w += 1;
                    } else if !(meet.is_finite() && meet.exceptions.is_empty()) {
                        return None;
                    }
                }
                Some((FnForm::int(w).mul(FnForm::Var), vec![Provenance::Tabulated]))
            }
        }
    }
}

fn halves_only(b: &SetExpr) -> bool {
    b.is_nat_subset()
        || matches!(b, SetExpr::HalfN)
        || matches!(b, SetExpr::Shift(a, r) if a.is_nat_subset() && *r.denom() <= 2)
}

/// K_B(n) under 0, ±1, ±2, ...: window n holds ±(n-1).
fn z_form(b: &SetExpr) -> Option<(FnForm, Vec<Provenance>)> {
    let prev = FnForm::Var.sub(FnForm::int(1));
    let f = match b {
        SetExpr::Z => FnForm::parse("2*n - 1").unwrap(),
        SetExpr::Finite(v) => v
            .iter()
            .filter(|q| q.is_integer())
            .map(|q| FnForm::from_at(q.to_integer().abs() + 1, FnForm::Var, FnForm::int(1)))
            .reduce(FnForm::add)
            .unwrap_or_else(|| FnForm::int(0)),
        SetExpr::Neg(a) if a.is_nat_subset() => derive_counting(a).symbolic?.compose(&prev),
        SetExpr::DisjUnion(..) => return None,
        SetExpr::Union(x, y) => {
            let both = canonicalize(&SetExpr::Inter(x.clone(), y.clone()));
            if !both.is_empty_literal() {
                return None;
            }
            z_form(x)?.0.add(z_form(y)?.0)
        }
        a if a.is_nat_subset() => derive_counting(a).symbolic?.compose(&prev),
        _ => return None,
    };
    Some((crate::counting::tidy(&f), vec![Provenance::Shift]))
}
