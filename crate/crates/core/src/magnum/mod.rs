//! Magnums: the extended counting sequence at ω, relative magnums over
//! reference contexts, the disjoint-union, product and reflection rules,
//! density estimates and the integer and rational specialisations.

mod context;
mod density;
mod genetic;

use num_rational::BigRational;
use serde::Serialize;
use serde_json::json;

use crate::counting::{derive_counting, Provenance};
use crate::funexpr::FnForm;
use crate::setexpr::{canonicalize, SetError, SetExpr};
use crate::surnat::{Comparison, Exactness, Key, SurnatValue};

pub use context::{theta_qplus, Ordering, RefContext};
pub use density::{
    band_counts_oracle, bayes_check, density_estimate, parity_class_densities, surreal_density, ParityDensities,
};
pub use genetic::genetic_form;

type S = SurnatValue<BigRational>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Extension,
    Git,
    TheoremRewrite,
    DensityEstimate,
    ReferenceSpecialization,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleCheck {
    pub depth: i64,
    pub agreed: bool,
}

#[derive(Clone, Debug)]
pub struct MagnumResult {
    pub expr: String,
    pub reference: String,
    pub ordering: String,
    pub value: S,
    pub method: Vec<Method>,
    pub provenance: Vec<Provenance>,
    pub caveats: Vec<String>,
    pub oracle: Option<OracleCheck>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MagnumError {
    #[error("undetermined: {0}")]
    Undetermined(String),
    #[error("no density: {0}")]
    NoDensity(String),
    #[error("not a fenestration: {0}")]
    NoFenestration(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("unknown pattern: {0}")]
    UnknownPattern(String),
    #[error(transparent)]
    Set(#[from] SetError),
}

pub fn exactness_label(e: Exactness) -> String {
    match e {
        Exactness::Exact => "exact".into(),
        Exactness::LittleO(k) => format!("o({})", crate::surnat::render_key(k, false)),
        Exactness::BigO(k) => format!("O({})", crate::surnat::render_key(k, false)),
    }
}

impl MagnumResult {
    fn new(value: S, method: Method) -> Self {
        let mut r = MagnumResult {
            expr: String::new(),
            reference: "N".into(),
            ordering: "canonical".into(),
            value,
            method: vec![method],
            provenance: vec![],
            caveats: vec![],
            oracle: None,
        };
        r.note_exactness();
        r
    }

    fn note_exactness(&mut self) {
        if !self.value.is_exact() && !self.caveats.iter().any(|c| c.starts_with("asymptotic")) {
            self.caveats.push(format!("asymptotic: remainder {}", exactness_label(self.value.exactness())));
        }
    }

    fn with_ctx(mut self, ctx: &RefContext) -> Self {
        self.reference = ctx.reference.render(false);
        self.ordering = ctx.ordering.name();
        for c in &ctx.caveats {
            if !self.caveats.contains(c) {
                self.caveats.push(c.clone());
            }
        }
        self
    }

    pub fn render(&self, unicode: bool) -> String {
        self.value.render(unicode)
    }

    pub fn to_json(&self, unicode: bool) -> serde_json::Value {
        json!({
            "expr": self.expr,
            "reference": self.reference,
            "ordering": self.ordering,
            "value": self.value.render(unicode),
            "exactness": exactness_label(self.value.exactness()),
            "method": self.method,
            "caveats": self.caveats,
            "oracle": self.oracle.as_ref().map(|o| json!({"depth": o.depth, "agreed": o.agreed})),
        })
    }

    /// Checks the symbolic counting sequence behind the result against
    /// enumeration.
    pub fn verify(&mut self, set: &SetExpr, depth: i64) {
        let c = derive_counting(set);
        if c.is_symbolic() && c.set.is_nat_subset() {
            self.oracle = Some(OracleCheck { depth, agreed: c.check(depth).is_ok() });
        }
    }
}

pub fn magnum(a: &SetExpr) -> Result<MagnumResult, MagnumError> {
    let c = canonicalize(a);
    let mut r = magnum_canonical(&c)?;
    r.expr = a.render(false);
    Ok(r)
}

fn finite_size(v: &[crate::setexpr::Q]) -> S {
    S::from_int(v.len() as i64)
}

fn magnum_canonical(c: &SetExpr) -> Result<MagnumResult, MagnumError> {
    use SetExpr::*;
    match c {
        DisjUnion(u, v) => return magnum_disjoint_union(u, v),
        Cart(u, v) => return magnum_product(u, v),
        Neg(u) => return magnum_negate(u),
        Z => return Ok(magnum_z_reflection()),
        QPlus => return Ok(magnum_qplus()),
        Band(k) => return Ok(magnum_qband(*k)),
        Finite(v) => {
            let mut r = MagnumResult::new(finite_size(v), Method::Extension);
            r.provenance.push(Provenance::FiniteSum);
            return Ok(r);
        }
        _ => {}
    }
    let cf = derive_counting(c);
    let mut diag = String::from("no closed-form counting sequence");
    if let Some(f) = &cf.symbolic {
        match f.extend_to_omega() {
            Ok(ev) => {
                let mut r = MagnumResult::new(ev.value, Method::Extension);
                r.provenance = cf.provenance.clone();
                return Ok(r);
            }
            Err(e) => diag = e.to_string(),
        }
    }
    let rewrite = |v: S, parts: &[&MagnumResult]| {
        let mut r = MagnumResult::new(v, Method::TheoremRewrite);
        for p in parts {
            r.method.extend(p.method.iter().copied().filter(|m| *m != Method::TheoremRewrite));
            r.caveats.extend(p.caveats.iter().cloned());
        }
        r.caveats.dedup();
        r.note_exactness();
        r
    };
    match c {
        Diff(u, v) if matches!(**v, Finite(_)) => {
            let mu = magnum_canonical(u)?;
            let Finite(f) = &**v else { unreachable!() };
            let k = f.iter().filter(|q| u.contains_q(**q)).count() as i64;
            return Ok(rewrite(mu.value.sub(&S::from_int(k)), &[&mu]));
        }
        Union(u, v) => {
            let both = canonicalize(&c.clone());
            let meet = canonicalize(&Inter(u.clone(), v.clone()));
            if both == *c {
                if let (Ok(mu), Ok(mv), Ok(mi)) = (magnum_canonical(u), magnum_canonical(v), magnum_canonical(&meet)) {
                    return Ok(rewrite(mu.value.add(&mv.value).sub(&mi.value), &[&mu, &mv, &mi]));
                }
            }
        }
        Diff(u, v) => {
            let meet = canonicalize(&Inter(u.clone(), v.clone()));
            if let (Ok(mu), Ok(mi)) = (magnum_canonical(u), magnum_canonical(&meet)) {
                return Ok(rewrite(mu.value.sub(&mi.value), &[&mu, &mi]));
            }
        }
        _ => {}
    }
    match density_estimate(c) {
        Ok(mut r) => {
            r.caveats.push(format!("no exact rule ({diag}); leading term from density"));
            Ok(r)
        }
        Err(MagnumError::NoDensity(d)) => Err(MagnumError::Undetermined(format!("{diag}; {d}"))),
        Err(e) => Err(e),
    }
}

/// m(U ⊔ V) = m(U) + m(V), with reference N ⊔ N.
pub fn magnum_disjoint_union(u: &SetExpr, v: &SetExpr) -> Result<MagnumResult, MagnumError> {
    let (mu, mv) = (magnum_canonical(&canonicalize(u))?, magnum_canonical(&canonicalize(v))?);
    let mut r = MagnumResult::new(mu.value.add(&mv.value), Method::TheoremRewrite);
    r.reference = "N |+| N".into();
    r.caveats = [mu.caveats, mv.caveats].concat();
    r.caveats.dedup();
    r.note_exactness();
    Ok(r)
}

/// m(U × V) = m(U)·m(V) under square ordering.
pub fn magnum_product(u: &SetExpr, v: &SetExpr) -> Result<MagnumResult, MagnumError> {
    let (mu, mv) = (magnum_canonical(&canonicalize(u))?, magnum_canonical(&canonicalize(v))?);
    let mut r = MagnumResult::new(mu.value.mul(&mv.value), Method::TheoremRewrite);
    r.reference = "N x N".into();
    r.ordering = "square".into();
    r.caveats = [mu.caveats, mv.caveats].concat();
    r.caveats.dedup();
    r.note_exactness();
    Ok(r)
}

/// m(−A) = m(A).
pub fn magnum_negate(a: &SetExpr) -> Result<MagnumResult, MagnumError> {
    let mut r = magnum_canonical(&canonicalize(a))?;
    if !r.method.contains(&Method::TheoremRewrite) {
        r.method.insert(0, Method::TheoremRewrite);
    }
    Ok(r)
}

/// Magnum of B relative to a reference context: K̂_B(ν) with ν = Λ̂⁻¹(θ).
pub fn magnum_relative(b: &SetExpr, ctx: &RefContext) -> Result<MagnumResult, MagnumError> {
    let nu = ctx.nu().ok_or_else(|| MagnumError::NoFenestration(format!("{:?}", ctx.fen.status)))?;
    let (k, trace) = ctx
        .window_count_form(b)
        .ok_or_else(|| MagnumError::Undetermined(format!("no window-count form for {b} in this context")))?;
    let ev = k.compose_extend(nu).map_err(|e| MagnumError::Undetermined(e.to_string()))?;
    let mut r = MagnumResult::new(ev.value, Method::Extension).with_ctx(ctx);
    r.provenance = trace;
    r.expr = b.render(false);
    r.note_exactness();
    Ok(r)
}

/// m(B|A) for subsets of N, with A in increasing order.
pub fn magnum_in(b: &SetExpr, a: &SetExpr) -> Result<MagnumResult, MagnumError> {
    let theta = magnum(a)?.value;
    magnum_relative(b, &RefContext::subset(a, theta))
}

/// m(Z) from the counting sequence: with K_N(n) = n − 1 under the
/// interleaved order and m(N|Z) = ω, solve ω = K̂_N(Λ̂⁻¹(θ)) for θ.
pub fn magnum_z_counting() -> MagnumResult {
    let ctx = RefContext::interleaved_z();
    let (k, _) = ctx.window_count_form(&SetExpr::N).expect("K_N under the interleaved order");
    let lambda = ctx.fen.lambda().expect("closed-form endpoints");
    let nu = k.invert().and_then(|g| g.extend_series(&S::omega())).expect("linear inverse");
    let theta = lambda.extend_series(&nu).expect("linear extension");
    let mut r = MagnumResult::new(theta, Method::ReferenceSpecialization).with_ctx(&ctx);
    r.expr = "Z".into();
    r
}

/// m(Z) by reflection: Z = (−N) ⊔ {0} ⊔ N.
pub fn magnum_z_reflection() -> MagnumResult {
    let e = SetExpr::N.negate().disj(SetExpr::finite(&[0])).disj(SetExpr::N);
    let mut r = magnum_canonical(&e).expect("reflection parts have magnums");
    r.expr = "Z".into();
    r.reference = "(-N) |+| {0} |+| N".into();
    r.ordering = "reflection".into();
    r
}

pub fn magnum_qplus() -> MagnumResult {
    let ctx = RefContext::square_q();
    let mut r = magnum_relative(&SetExpr::QPlus, &ctx).expect("square-ordered Q+");
    r.method = vec![Method::ReferenceSpecialization];
    r
}

/// m(Q) = 2·m(Q+) + 1 by reflection.
pub fn magnum_q() -> MagnumResult {
    let q = magnum_qplus();
    let v = q.value.scale(&crate::scalar::int(2)).add(&S::from_int(1));
    let mut r = MagnumResult::new(v, Method::TheoremRewrite);
    r.expr = "Q".into();
    r.reference = "Q".into();
    r.ordering = "square".into();
    r.caveats = q.caveats;
    r.note_exactness();
    r
}

/// Magnum of the unit band (k−1, k] of Q+ under the banded order.
pub fn magnum_qband(k: i64) -> MagnumResult {
    let ctx = RefContext::banded_q();
    let mut r = magnum_relative(&SetExpr::Band(k), &ctx).expect("banded Q+");
    r.method = vec![Method::ReferenceSpecialization];
    r
}

/// Equal magnums certified by isobary, as a result.
pub fn magnum_by_isobary(
    a: &SetExpr,
    known: &SetExpr,
    fen: &crate::fenestration::Fenestration,
    depth: usize,
) -> Result<MagnumResult, MagnumError> {
    match crate::fenestration::apply_git(a, known, fen, depth) {
        crate::fenestration::GitVerdict::EqualMagnums(_) => {
            let mut r = magnum(known)?;
            r.method = vec![Method::Git];
            r.expr = a.render(false);
            Ok(r)
        }
        crate::fenestration::GitVerdict::NotApplicable(why) => Err(MagnumError::Undetermined(why)),
    }
}

/// Comparison of two magnums.
pub fn compare(a: &MagnumResult, b: &MagnumResult) -> Comparison {
    a.value.compare(&b.value)
}

/// Compares m(A|R) and m(B|R). Window-count forms that agree past a
/// finite threshold give equal magnums even when the values are only known
/// to leading order.
pub fn compare_relative(a: &SetExpr, b: &SetExpr, ctx: &RefContext) -> Comparison {
    fn strip(f: FnForm) -> FnForm {
        match f {
            FnForm::From { body, .. } => strip(*body),
            f => f,
        }
    }
    if let (Some((fa, _)), Some((fb, _))) = (ctx.window_count_form(a), ctx.window_count_form(b)) {
        if strip(fa) == strip(fb) {
            return Comparison::Equal;
        }
    }
    match (magnum_relative(a, ctx), magnum_relative(b, ctx)) {
        (Ok(x), Ok(y)) => compare(&x, &y),
        _ => Comparison::Undetermined,
    }
}

/// Leading coefficient (as f64) and key of a value.
pub fn leading(v: &S) -> Option<(f64, Key)> {
    v.leading().map(|t| (t.coeff.to_f64(), t.key))
}

pub fn symbolic_kappa(a: &SetExpr) -> Option<FnForm> {
    derive_counting(a).symbolic
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> String {
        magnum(&SetExpr::parse(s).unwrap()).unwrap().value.to_string()
    }

    #[test]
    fn table_magnums() {
        assert_eq!(m("N"), "w");
        assert_eq!(m("N \\ {1}"), "w - 1");
        assert_eq!(m("2N"), "w/2");
        assert_eq!(m("2N-1"), "w/2");
        assert_eq!(m("2N+1"), "w/2 - 1");
        assert_eq!(m("5N+3"), "w/5 - 1");
        assert_eq!(m("5N-3"), "w/5");
        assert_eq!(m("5N+7"), "w/5 - 2");
        assert_eq!(m("N^(2)"), "w^(1/2)");
        assert_eq!(m("tri"), "2^(1/2)*w^(1/2) - 1");
        assert_eq!(m("N^(2) u N^(3)"), "w^(1/2) + w^(1/3) - w^(1/6)");
        assert_eq!(m("3N u 4N"), "w/2");
    }

    #[test]
    fn rewrites() {
        assert_eq!(m("N |+| {1,2,3}"), "w + 3");
        assert_eq!(m("N |+| N"), "2*w");
        assert_eq!(m("{} |+| 2N"), "w/2");
        assert_eq!(m("N x N"), "w^2");
        assert_eq!(m("N x N x N"), "w^3");
        assert_eq!(m("{1} x 2N"), "w/2");
        assert_eq!(m("-N"), "w");
        assert_eq!(m("-{}"), "0");
        assert_eq!(m("N + 1/2"), "w - 1");
        assert_eq!(m("N - 1/2"), "w");
    }

    #[test]
    fn integers_both_ways() {
        assert_eq!(magnum_z_counting().value.to_string(), "2*w + 1");
        assert_eq!(magnum_z_reflection().value.to_string(), "2*w + 1");
        assert_eq!(m("Z"), "2*w + 1");
    }

    #[test]
    fn relative_examples() {
        let p = |s: &str| SetExpr::parse(s).unwrap();
        assert_eq!(magnum_in(&p("N^(2)"), &p("2N")).unwrap().value.to_string(), "w^(1/2)/2");
        assert_eq!(magnum_in(&p("2N"), &p("N^(2)")).unwrap().value.to_string(), "w^(1/2)/2");
        assert_eq!(magnum_in(&p("2N-1"), &p("2N")).unwrap().value.to_string(), "0");
        let sq = RefContext::square_n2();
        assert_eq!(magnum_relative(&p("halfN"), &sq).unwrap().value.to_string(), "3*w/2");
        let z = RefContext::interleaved_z();
        assert_eq!(magnum_relative(&p("N"), &z).unwrap().value.to_string(), "w");
        assert_eq!(magnum_relative(&p("-N"), &z).unwrap().value.to_string(), "w");
        let h = RefContext::doubleton_half_n();
        assert_eq!(magnum_relative(&p("halfN"), &h).unwrap().value.to_string(), "2*w");
    }

    #[test]
    fn rationals() {
        let q = magnum_qplus();
        let (c, k) = leading(&q.value).unwrap();
        assert!((c - 6.0 / std::f64::consts::PI.powi(2)).abs() < 1e-12);
        assert_eq!(k, Key::omega_pow(2, 1));
        assert!(!q.caveats.is_empty());
        let bands: Vec<_> = (1..=5).map(magnum_qband).collect();
        for k in 2..=5 {
            assert_eq!(compare_relative(&SetExpr::Band(1), &SetExpr::Band(k), &RefContext::banded_q()), Comparison::Equal);
        }
        let (c, k) = leading(&bands[0].value).unwrap();
        assert!((c - 2f64.powf(2.0 / 3.0) * 3.0 / std::f64::consts::PI.powi(2)).abs() < 1e-12);
        assert_eq!(k, Key::omega_pow(4, 3));
        let n = magnum_relative(&SetExpr::N, &RefContext::banded_q()).unwrap();
        assert_eq!(n.value.to_string(), "2^(1/3)*w^(2/3) + o(w^(2/3))");
        let whole = magnum_q();
        assert_eq!(leading(&whole.value).unwrap().1, Key::omega_pow(2, 1));
    }

    #[test]
    fn oscillating_set_is_undetermined() {
        assert!(matches!(magnum(&SetExpr::Od2), Err(MagnumError::Undetermined(_))));
    }

    #[test]
    fn blocks_reorder_n() {
        let ctx = RefContext::periodic_blocks(vec![SetExpr::arith(2, -1), SetExpr::arith(2, -1), SetExpr::arith(2, 0)]);
        let w = ctx.windows(2);
        assert_eq!(w[1], vec![crate::Elem::int(5), crate::Elem::int(7), crate::Elem::int(4)]);
        assert_eq!(magnum_relative(&SetExpr::arith(2, 0), &ctx).unwrap().value.to_string(), "w/3");
    }
}
