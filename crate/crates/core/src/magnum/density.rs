//! Density estimates, surreal densities and the Bayes identity.

use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{ToPrimitive, Zero};

use super::{magnum_relative, MagnumError, MagnumResult, Method, RefContext};
use crate::counting::{density_sequence, derive_counting};
use crate::setexpr::{canonicalize, Elem, Periodic, SetExpr};
use crate::surnat::{Comparison, Exactness, Key, SurnatValue};

type S = SurnatValue<BigRational>;

/// Depth of the numeric density probe.
const PROBE: i64 = 1 << 17;
/// Largest oscillation of ρ over the last dyadic windows still read as
/// convergence.
const SPREAD_TOL: f64 = 0.02;

/// Simplest fraction in [lo, hi] (Stern–Brocot descent).
fn simplest_between(lo: f64, hi: f64) -> Ratio<i64> {
    let (mut a, mut b, mut c, mut d) = (0i64, 1i64, 1i64, 0i64);
    for _ in 0..64 {
        let (p, q) = (a + c, b + d);
        let x = p as f64 / q as f64;
        if x < lo {
            a = p;
            b = q;
        } else if x > hi {
            c = p;
            d = q;
        } else {
            return Ratio::new(p, q);
        }
    }
    Ratio::new(a, b)
}

fn rho_omega(rho: BigRational) -> S {
    S::omega().scale(&rho).with_exactness(Exactness::LittleO(Key::omega_pow(1, 1)))
}

/// ρ(A)·ω + o(ω) when the density exists.
pub fn density_estimate(a: &SetExpr) -> Result<MagnumResult, MagnumError> {
    let c = canonicalize(a);
    let mut caveats = vec![];
    let rho = if let Some(p) = Periodic::from_expr(&c) {
        crate::scalar::rat(p.weight() as i64, p.modulus as i64)
    } else if let Some(ev) = derive_counting(&c).symbolic.and_then(|f| f.extend_to_omega().ok()) {
        match ev.value.leading() {
            Some(t) if t.key == Key::omega_pow(1, 1) => t.coeff.as_rational().ok_or_else(|| {
                MagnumError::Undetermined("irrational density".into())
            })?,
            _ => BigRational::zero(),
        }
    } else {
        let d = density_sequence(&c, PROBE)?;
        let w = d.dyadic_extrema();
        let tail: Vec<_> = w.iter().rev().take(2).collect();
        let lo = tail.iter().map(|x| x.min_q()).min().unwrap();
        let hi = tail.iter().map(|x| x.max_q()).max().unwrap();
        let (lo, hi) = (lo.to_f64().unwrap(), hi.to_f64().unwrap());
        if hi - lo > SPREAD_TOL {
            let k = tail[0].k;
            return Err(MagnumError::NoDensity(format!(
                "density oscillates between {lo:.4} and {hi:.4} over n in [2^{}, 2^{}]",
                k - 1,
                k + 1
            )));
        }
        caveats.push(format!("numeric density from n <= {PROBE}"));
        let q = simplest_between(lo, hi);
        crate::scalar::rat(*q.numer(), *q.denom())
    };
    if rho.is_zero() {
        caveats.push("uninformative: zero density".into());
    }
    let mut r = MagnumResult::new(rho_omega(rho), Method::DensityEstimate);
    r.expr = a.render(false);
    r.caveats.extend(caveats);
    Ok(r)
}

/// σ(A|B) = m(A∩B|R) / m(B|R).
pub fn surreal_density(a: &SetExpr, b: &SetExpr, ctx: &RefContext) -> Result<S, MagnumError> {
    let meet = canonicalize(&a.clone().inter(b.clone()));
    let num = magnum_relative(&meet, ctx)?.value;
    let den = magnum_relative(b, ctx)?.value;
    if den.is_zero() {
        return Err(MagnumError::ZeroDenominator);
    }
    num.div(&den).map_err(|e| MagnumError::Undetermined(e.to_string()))
}

/// σ(A|B)·σ(B|R) = σ(B|A)·σ(A|R), checked exactly.
pub fn bayes_check(a: &SetExpr, b: &SetExpr, ctx: &RefContext) -> Result<bool, MagnumError> {
    let r = &ctx.reference;
    let lhs = surreal_density(a, b, ctx)?.mul(&surreal_density(b, r, ctx)?);
    let rhs = surreal_density(b, a, ctx)?.mul(&surreal_density(a, r, ctx)?);
    Ok(lhs.compare(&rhs) == Comparison::Equal)
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct ParityDensities {
    /// reduced m/l with m even, l even, both odd
    pub counts: [u64; 3],
    pub total: u64,
    pub densities: [f64; 3],
}

/// Shares of the three parity classes among the first `depth` positive
/// rationals in square order.
pub fn parity_class_densities(depth: u64) -> ParityDensities {
    let ctx = RefContext::square_q();
    let mut counts = [0u64; 3];
    let mut total = 0u64;
    let mut k = 1usize;
    'outer: loop {
        let w = ctx.windows(k).pop().unwrap_or_default();
        for e in w {
            if total == depth {
                break 'outer;
            }
            if let Elem::Num(q) = e {
                let cls = if q.numer().is_even() {
                    0
                } else if q.denom().is_even() {
                    1
                } else {
                    2
                };
                counts[cls] += 1;
                total += 1;
            }
        }
        k += 1;
    }
    let densities = counts.map(|c| c as f64 / total.max(1) as f64);
    ParityDensities { counts, total, densities }
}

/// K_{Q_k}(n) for n <= upto under the banded order, by counting reduced
/// fractions row by row.
pub fn band_counts_oracle(k: i64, upto: i64) -> Vec<u64> {
    let mut rows = vec![0u64; upto as usize + 1];
    for l in 1..=upto {
        rows[l as usize] = ((k - 1) * l + 1..=k * l).filter(|m| m.gcd(&l) == 1).count() as u64;
    }
    let mut out = vec![0u64; upto as usize + 1];
    let mut acc = 0;
    for n in 1..=upto {
        acc += rows[n as usize];
        out[n as usize] = if n >= k { acc } else { 0 };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> SetExpr {
        SetExpr::parse(s).unwrap()
    }

    #[test]
    fn estimates() {
        let r = density_estimate(&p("2N u {1}")).unwrap();
        assert_eq!(r.value.to_string(), "w/2 + o(w)");
        let sq = density_estimate(&p("N^(2)")).unwrap();
        assert_eq!(sq.value.to_string(), "o(w)");
        assert!(sq.caveats.iter().any(|c| c.contains("uninformative")));
        assert!(matches!(density_estimate(&p("od2")), Err(MagnumError::NoDensity(_))));
    }

    #[test]
    fn bayes_example() {
        let ctx = RefContext::canonical_n();
        let (a, b, n) = (p("2N"), p("3N"), p("N"));
        assert_eq!(surreal_density(&a, &n, &ctx).unwrap().to_string(), "1/2");
        assert_eq!(surreal_density(&b, &n, &ctx).unwrap().to_string(), "1/3");
        assert_eq!(surreal_density(&b, &a, &ctx).unwrap().to_string(), "1/3");
        assert_eq!(surreal_density(&a, &b, &ctx).unwrap().to_string(), "1/2");
        assert_eq!(surreal_density(&a, &a, &ctx).unwrap().to_string(), "1");
        assert!(bayes_check(&a, &b, &ctx).unwrap());
        assert!(bayes_check(&a, &a, &ctx).unwrap());
        assert!(bayes_check(&a, &p("2N-1"), &ctx).unwrap());
        assert_eq!(surreal_density(&a, &p("{}"), &ctx), Err(MagnumError::ZeroDenominator));
    }

    #[test]
    fn parity_classes() {
        let d = parity_class_densities(10_000);
        assert_eq!(d.counts.iter().sum::<u64>(), d.total);
        assert!(d.densities.iter().all(|x| (x - 1.0 / 3.0).abs() < 0.05), "{d:?}");
    }

    #[test]
    fn band_oracle_matches_totient_sums() {
        for k in 1..=5 {
            let o = band_counts_oracle(k, 300);
            for n in k..=300 {
                assert_eq!(o[n as usize], crate::counting::totient_sum(n as u64));
            }
        }
    }
}
