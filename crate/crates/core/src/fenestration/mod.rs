//! Fenestrations: partitions of a reference set into finite windows with
//! endpoints Λ(n), the omega-set test for Λ, weight sequences, isobary and
//! the isobary rewrite between sets.

use num_rational::BigRational;

use crate::counting::{derive_counting, CountingForm};
use crate::funexpr::simplify::as_poly;
use crate::funexpr::FnForm;
use crate::setexpr::{canonicalize, SetExpr, Q};
use crate::surnat::SurnatValue;

type S = SurnatValue<BigRational>;

#[derive(Clone, Debug, PartialEq)]
pub enum OmegaStatus {
    /// ν = Λ⁻¹(target) is surnatural; `None` when the endpoint set is known
    /// to qualify but ν has no closed form
    IsFenestration(Option<S>),
    NotFenestration,
    Unknown(String),
}

impl OmegaStatus {
    pub fn is_fenestration(&self) -> bool {
        matches!(self, OmegaStatus::IsFenestration(_))
    }

    pub fn nu(&self) -> Option<&S> {
        match self {
            OmegaStatus::IsFenestration(Some(v)) => Some(v),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Endpoints {
    Symbolic(FnForm),
    /// endpoints given by an atom's enumeration
    Set(SetExpr),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fenestration {
    pub endpoints: Endpoints,
    pub target: S,
    pub status: OmegaStatus,
}

/// Decides whether Λ is an omega set relative to `target`: ν = Λ̂⁻¹(target)
/// must be surnatural.
pub fn omega_set_decision(lambda: &FnForm, target: &S) -> OmegaStatus {
    let inv = match lambda.invert() {
        Ok(g) => g,
        Err(e) => return OmegaStatus::Unknown(e.to_string()),
    };
    let nu = match inv.extend_series(target) {
        Ok(v) => v,
        Err(e) => return OmegaStatus::Unknown(e.to_string()),
    };
    match nu.surnatural_status() {
        Some(true) => OmegaStatus::IsFenestration(Some(nu)),
        Some(false) => OmegaStatus::NotFenestration,
        None => OmegaStatus::Unknown(format!("integrality of {nu} is open")),
    }
}

impl Fenestration {
    pub fn new(lambda: FnForm, target: S) -> Self {
        let status = omega_set_decision(&lambda, &target);
        Fenestration { endpoints: Endpoints::Symbolic(lambda), target, status }
    }

    /// Windows of constant length L over N.
    pub fn uniform(l: i64) -> Self {
        Self::new(FnForm::int(l).mul(FnForm::Var), S::omega())
    }

    pub fn parse(lambda: &str) -> Result<Self, crate::FnError> {
        Ok(Self::new(FnForm::parse(lambda)?, S::omega()))
    }

    /// Λ as a closed form, when there is one.
    pub fn lambda(&self) -> Option<FnForm> {
        match &self.endpoints {
            Endpoints::Symbolic(f) => Some(f.clone()),
            Endpoints::Set(e) => e.defining_fn(),
        }
    }

    /// Λ(k) for k = 0..=count; Λ(0) = 0.
    pub fn endpoint_list(&self, count: usize) -> Option<Vec<i64>> {
        let mut out = vec![0];
        match &self.endpoints {
            Endpoints::Symbolic(f) => {
                for k in 1..=count as i64 {
                    out.push(f.eval_int(k).ok()?);
                }
            }
            Endpoints::Set(e) => out.extend(crate::counting::first_elements(e, count).ok()?),
        }
        out.windows(2).all(|w| w[0] < w[1]).then_some(out)
    }

    /// Endpoint set {Λ(n)} as a set expression.
    pub fn endpoint_set(&self) -> Option<SetExpr> {
        match &self.endpoints {
            Endpoints::Set(e) => Some(e.clone()),
            Endpoints::Symbolic(f) => {
                let p = as_poly(f)?;
                let deg = p.keys().max()?;
                if !deg.is_integer() || p.keys().any(|e| !e.is_integer() || *e < Q::from_integer(0)) {
                    return None;
                }
                let mut c = vec![Q::from_integer(0); deg.to_integer() as usize + 1];
                for (e, v) in &p {
                    let q = v.as_rational()?;
                    let num: i64 = q.numer().try_into().ok()?;
                    let den: i64 = q.denom().try_into().ok()?;
                    c[e.to_integer() as usize] = Q::new(num, den);
                }
                let qp = crate::setexpr::QPoly::new(c);
                qp.is_valid_atom().then(|| crate::setexpr::poly_atom(qp))
            }
        }
    }
}

/// Weight sequence w_A(n) = |A ∩ W_n|.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSeq {
    pub weights: Vec<u64>,
}

impl WeightSeq {
    pub fn prefix_sums(&self) -> Vec<u64> {
        self.weights
            .iter()
            .scan(0u64, |acc, w| {
                *acc += w;
                Some(*acc)
            })
            .collect()
    }
}

pub fn weight_seq(a: &SetExpr, fen: &Fenestration, windows: usize) -> Option<WeightSeq> {
    let ends = fen.endpoint_list(windows)?;
    let weights = ends
        .windows(2)
        .map(|w| (w[0] + 1..=w[1]).filter(|&x| a.contains_int(x)).count() as u64)
        .collect();
    Some(WeightSeq { weights })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Isobary {
    IsobaricUpTo(usize),
    /// first differing window and its weights
    CounterexampleAt { n: usize, wa: u64, wb: u64 },
    /// windows could not be enumerated
    Unavailable,
}

pub fn check_isobaric(a: &SetExpr, b: &SetExpr, fen: &Fenestration, depth: usize) -> Isobary {
    let (Some(wa), Some(wb)) = (weight_seq(a, fen, depth), weight_seq(b, fen, depth)) else {
        return Isobary::Unavailable;
    };
    match wa.weights.iter().zip(&wb.weights).position(|(x, y)| x != y) {
        None => Isobary::IsobaricUpTo(depth),
        Some(i) => Isobary::CounterexampleAt { n: i + 1, wa: wa.weights[i], wb: wb.weights[i] },
    }
}

/// Fenestration whose endpoints are common to both.
pub fn intersect_fenestrations(f1: &Fenestration, f2: &Fenestration) -> Fenestration {
    if f1.endpoints == f2.endpoints {
        return f1.clone();
    }
    let target = f1.target.clone();
    if let (Some(a), Some(b)) = (f1.endpoint_set(), f2.endpoint_set()) {
        let both = canonicalize(&a.inter(b));
        if let Some(lambda) = both.defining_fn() {
            let mut f = Fenestration::new(lambda, target);
            if !f.status.is_fenestration() && f1.status.is_fenestration() && f2.status.is_fenestration() {
                f.status = OmegaStatus::IsFenestration(None);
            }
            return f;
        }
        let status = if f1.status.is_fenestration() && f2.status.is_fenestration() {
            OmegaStatus::IsFenestration(None)
        } else {
            OmegaStatus::Unknown("endpoint intersection has no closed form".into())
        };
        return Fenestration { endpoints: Endpoints::Set(both), target, status };
    }
    Fenestration {
        endpoints: f1.endpoints.clone(),
        target,
        status: OmegaStatus::Unknown("endpoint sets are not comparable".into()),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GitVerdict {
    /// K_A(Λ(n)) and K_B(Λ(n)) reduce to this common form
    EqualMagnums(FnForm),
    NotApplicable(String),
}

/// Cumulative window count κ_A(Λ(n)) in closed form.
fn window_form(c: &CountingForm, lambda: &FnForm) -> Option<FnForm> {
    let k = c.symbolic.as_ref()?;
    Some(crate::counting::tidy(&k.compose(lambda)))
}

/// Equal magnums from isobary under a fenestration. Requires the omega-set
/// property, agreement of weights to `depth`, and a closed-form identity of
/// the cumulative window counts.
pub fn apply_git(a: &SetExpr, b: &SetExpr, fen: &Fenestration, depth: usize) -> GitVerdict {
    match &fen.status {
        OmegaStatus::IsFenestration(_) => {}
        OmegaStatus::NotFenestration => return GitVerdict::NotApplicable("NotFenestration".into()),
        OmegaStatus::Unknown(why) => return GitVerdict::NotApplicable(format!("omega status unknown: {why}")),
    }
    let (ca, cb) = (canonicalize(a), canonicalize(b));
    let Some(lambda) = fen.lambda() else {
        return GitVerdict::NotApplicable("no closed form for the endpoints".into());
    };
    if ca == cb {
        return match window_form(&derive_counting(&ca), &lambda) {
            Some(f) => GitVerdict::EqualMagnums(f),
            None => GitVerdict::EqualMagnums(FnForm::Var),
        };
    }
    match check_isobaric(&ca, &cb, fen, depth) {
        Isobary::IsobaricUpTo(_) => {}
        Isobary::CounterexampleAt { n, wa, wb } => {
            return GitVerdict::NotApplicable(format!("weights differ in window {n}: {wa} vs {wb}"))
        }
        Isobary::Unavailable => return GitVerdict::NotApplicable("windows not enumerable".into()),
    }
    let fa = window_form(&derive_counting(&ca), &lambda);
    let fb = window_form(&derive_counting(&cb), &lambda);
    match (fa, fb) {
        (Some(x), Some(y)) => {
            let d = crate::counting::tidy(&x.clone().sub(y.clone()));
            if x == y || crate::counting::is_zero_form(&d) {
                GitVerdict::EqualMagnums(x)
            } else {
                GitVerdict::NotApplicable(format!("no symbolic certificate: {} vs {}", x.render(), y.render()))
            }
        }
        _ => GitVerdict::NotApplicable("no closed-form counting sequence".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str) -> SetExpr {
        SetExpr::parse(s).unwrap()
    }

    #[test]
    fn omega_set_decisions() {
        let d = |s: &str| omega_set_decision(&FnForm::parse(s).unwrap(), &S::omega());
        assert_eq!(d("2*n").nu().unwrap().to_string(), "w/2");
        assert_eq!(d("2*n - 1"), OmegaStatus::NotFenestration);
        assert_eq!(d("n^2").nu().unwrap().to_string(), "w^(1/2)");
        for l in 1..=12 {
            assert!(Fenestration::uniform(l).status.is_fenestration());
        }
        assert!(d("n^3").is_fenestration());
    }

    #[test]
    fn isobary_checks() {
        let f2 = Fenestration::uniform(2);
        assert_eq!(check_isobaric(&set("2N"), &set("2N-1"), &f2, 1000), Isobary::IsobaricUpTo(1000));
        let f12 = Fenestration::uniform(12);
        assert_eq!(check_isobaric(&set("3N u 4N"), &set("2N"), &f12, 1000), Isobary::IsobaricUpTo(1000));
        let odd = Fenestration::parse("2*n - 1").unwrap();
        assert_eq!(check_isobaric(&set("2N"), &set("2N+1"), &odd, 1000), Isobary::IsobaricUpTo(1000));
        assert!(matches!(check_isobaric(&set("2N"), &set("3N"), &f2, 10), Isobary::CounterexampleAt { n: 1, .. }));
    }

    #[test]
    fn isobary_rewrite() {
        let f2 = Fenestration::uniform(2);
        assert!(matches!(apply_git(&set("2N"), &set("2N-1"), &f2, 1000), GitVerdict::EqualMagnums(_)));
        let odd = Fenestration::parse("2*n - 1").unwrap();
        assert_eq!(apply_git(&set("2N"), &set("2N+1"), &odd, 1000), GitVerdict::NotApplicable("NotFenestration".into()));
        assert!(matches!(apply_git(&set("N^(2)"), &set("N^(2)"), &f2, 10), GitVerdict::EqualMagnums(_)));
        let f12 = Fenestration::uniform(12);
        assert!(matches!(apply_git(&set("3N u 4N"), &set("2N"), &f12, 500), GitVerdict::EqualMagnums(_)));
    }

    #[test]
    fn endpoint_intersections() {
        let f = intersect_fenestrations(&Fenestration::uniform(2), &Fenestration::uniform(3));
        assert_eq!(f.lambda().unwrap().render(), "6*n");
        let sq = Fenestration::parse("n^2").unwrap();
        let g = intersect_fenestrations(&Fenestration::uniform(2), &sq);
        assert_eq!(g.endpoint_list(3).unwrap(), vec![0, 4, 16, 36]);
        assert!(g.status.is_fenestration());
        let h = intersect_fenestrations(&sq, &sq);
        assert_eq!(h, sq);
    }

    #[test]
    fn weights_sum_to_counts() {
        let a = set("N^(2) u 3N");
        let f = Fenestration::uniform(5);
        let w = weight_seq(&a, &f, 1000).unwrap();
        let k = a.prefix_counts(5000).unwrap();
        for (i, s) in w.prefix_sums().iter().enumerate() {
            assert_eq!(*s, k[5 * (i + 1)]);
        }
    }
}
