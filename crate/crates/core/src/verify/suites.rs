use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{catalog, verify_counting_form, Outcome, VerificationReport};
use crate::counting::{derive_counting, first_elements};
use crate::magnum::{compare, magnum};
use crate::setexpr::SetExpr;
use crate::surnat::Comparison;

pub const SUITES: &[&str] = &["catalog", "ultrafilter", "euclid", "additivity", "empty-catalog"];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown suite `{0}` (known: catalog, ultrafilter, euclid, additivity, empty-catalog)")]
pub struct UnknownSuite(pub String);

/// Runs a registered suite. Output is sorted by subject and depends only on
/// `seed` and `depth`.
pub fn run_property_suite(id: &str, seed: u64, depth: i64) -> Result<Vec<VerificationReport>, UnknownSuite> {
    let mut out = match id {
        "catalog" => catalog().par_iter().map(|e| verify_counting_form(e, depth)).collect(),
        "ultrafilter" => ultrafilter(),
        "euclid" => euclid(seed),
        "additivity" => additivity(seed, depth),
        "empty-catalog" => Vec::new(),
        _ => return Err(UnknownSuite(id.to_string())),
    };
    out.sort_by(|a, b| a.subject.cmp(&b.subject));
    Ok(out)
}

fn parse(s: &str) -> SetExpr {
    SetExpr::parse(s).expect("suite set parses")
}

pub const OMEGA_CATALOG: &[&str] = &[
    "N",
    "{}",
    "{1,2,3}",
    "{7}",
    "2N",
    "2N-1",
    "3N",
    "3N+1",
    "3N-1",
    "4N",
    "4N-1",
    "5N+3",
    "6N",
    "10N",
    "12N-5",
    "N^(2)",
    "N^(3)",
    "tri",
    "poly(0,0,4)",
    "poly(1,-4,4)",
    "N \\ {1}",
    "N \\ {2,7}",
    "N \\ 2N",
    "N \\ 3N",
    "N \\ N^(2)",
    "2N u 3N",
    "3N u 4N",
    "(2N u 3N) \\ 6N",
    "6N u (6N-1)",
    "2N \\ 4N",
];

type Omega = Result<bool, String>;

fn in_omega(e: &SetExpr) -> Omega {
    e.is_omega_set().map_err(|err| format!("{e}: {err}"))
}

/// Six laws making Ω = {A : w in Â} a non-principal ultrafilter, checked
/// over a fixed catalog.
fn ultrafilter() -> Vec<VerificationReport> {
    let sets: Vec<SetExpr> = OMEGA_CATALOG.iter().map(|s| parse(s)).collect();
    let n = sets.len() as i64;
    let law = |name: &str, f: &dyn Fn() -> Result<(), String>| {
        VerificationReport::timed(format!("ultrafilter/{name}"), n, || match f() {
            Ok(()) => Outcome::Pass,
            Err(detail) => Outcome::Fail { detail },
        })
    };
    let expect = |e: &SetExpr, want: bool| -> Result<(), String> {
        match in_omega(e)? {
            b if b == want => Ok(()),
            b => Err(format!("{e}: membership {b}, expected {want}")),
        }
    };
    let pairs: Vec<(&SetExpr, &SetExpr)> =
        sets.iter().enumerate().flat_map(|(i, a)| sets[i..].iter().map(move |b| (a, b))).collect();
    vec![
        law("contains-N", &|| expect(&SetExpr::N, true)),
        law("excludes-empty", &|| expect(&SetExpr::empty(), false)),
        law("non-principal", &|| {
            sets.iter().filter(|e| matches!(e, SetExpr::Finite(_))).try_for_each(|e| expect(e, false))
        }),
        law("complement", &|| {
            sets.iter().try_for_each(|a| {
                let c = SetExpr::N.diff(a.clone());
                match (in_omega(a)?, in_omega(&c)?) {
                    (x, y) if x != y => Ok(()),
                    (x, _) => Err(format!("{a} and its complement both {}", if x { "in" } else { "out" })),
                }
            })
        }),
        law("intersection", &|| {
            pairs.iter().try_for_each(|(a, b)| {
                let both = in_omega(a)? && in_omega(b)?;
                expect(&(*a).clone().inter((*b).clone()), both)
            })
        }),
        law("union", &|| {
            pairs.iter().try_for_each(|(a, b)| {
                let either = in_omega(a)? || in_omega(b)?;
                expect(&(*a).clone().union((*b).clone()), either)
            })
        }),
    ]
}

const EUCLID_BASES: &[&str] = &[
    "N",
    "2N",
    "2N-1",
    "3N",
    "3N+1",
    "4N-1",
    "5N+3",
    "7N+4",
    "N^(2)",
    "N^(3)",
    "tri",
    "3N u 4N",
    "N \\ 2N",
    "N \\ N^(2)",
    "N \\ {1,2,3}",
];

/// Pairs B ⊂ A built by deleting elements, thinning by a residue class or
/// adding disjoint finite sets.
pub fn euclid_pairs(seed: u64, count: usize) -> Vec<(SetExpr, SetExpr)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bases: Vec<SetExpr> = EUCLID_BASES.iter().map(|s| parse(s)).collect();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a = bases.choose(&mut rng).expect("bases").clone();
        let head = first_elements(&a, 60).expect("bases enumerate");
        let pair = match rng.gen_range(0..3) {
            0 => {
                let k = rng.gen_range(1..=3);
                let mut xs: Vec<i64> = head[..12].choose_multiple(&mut rng, k).copied().collect();
                xs.sort();
                (a.clone().diff(SetExpr::finite(&xs)), a)
            }
            1 => {
                let k = rng.gen_range(2..=6);
                let r = rng.gen_range(0..k);
                let cls = SetExpr::arith(k, -r);
                if head.iter().all(|x| cls.contains_int(*x)) {
                    continue;
                }
                (a.clone().inter(cls), a)
            }
            _ => {
                let outside: Vec<i64> = (1..200).filter(|x| !a.contains_int(*x)).take(40).collect();
                if outside.is_empty() {
                    continue;
                }
                let k = rng.gen_range(1..=3.min(outside.len()));
                let mut xs: Vec<i64> = outside.choose_multiple(&mut rng, k).copied().collect();
                xs.sort();
                (a.clone(), a.union(SetExpr::finite(&xs)))
            }
        };
        out.push(pair);
    }
    out
}

/// Proper subsets have strictly smaller magnums.
fn euclid(seed: u64) -> Vec<VerificationReport> {
    let pairs = euclid_pairs(seed, 200);
    pairs
        .par_iter()
        .enumerate()
        .map(|(i, (b, a))| {
            VerificationReport::timed(format!("euclid/{i:03}: {b} < {a}"), 0, || {
                let (mb, ma) = match (magnum(b), magnum(a)) {
                    (Ok(x), Ok(y)) => (x, y),
                    (Err(e), _) | (_, Err(e)) => return Outcome::Fail { detail: e.to_string() },
                };
                match compare(&mb, &ma) {
                    Comparison::Less => Outcome::Pass,
                    c => Outcome::Fail { detail: format!("{} vs {}: {c:?}", mb.value, ma.value) },
                }
            })
        })
        .collect()
}

const ADDITIVE_POOL: &[&str] = &[
    "N",
    "2N",
    "2N-1",
    "3N",
    "3N+1",
    "4N",
    "4N-1",
    "5N+3",
    "6N",
    "7N-2",
    "N^(2)",
    "N^(3)",
    "tri",
    "2N u {3}",
    "N \\ 2N",
    "N \\ {1,2,3}",
    "{2,5,9}",
];

/// Inclusion–exclusion for counting functions over seeded pairs, plus the
/// magnum of 3N u 4N.
fn additivity(seed: u64, depth: i64) -> Vec<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool: Vec<SetExpr> = ADDITIVE_POOL.iter().map(|s| parse(s)).collect();
    let mut all: Vec<(usize, usize)> =
        (0..pool.len()).flat_map(|i| (i + 1..pool.len()).map(move |j| (i, j))).collect();
    all.shuffle(&mut rng);
    all.truncate(50);
    let mut out: Vec<VerificationReport> = all
        .par_iter()
        .map(|&(i, j)| {
            let (a, b) = (&pool[i], &pool[j]);
            VerificationReport::timed(format!("additivity/{a} ; {b}"), depth, || kappa_identity(a, b, depth))
        })
        .collect();
    out.push(VerificationReport::timed("additivity/m(3N u 4N)", 0, || {
        match magnum(&parse("3N u 4N")) {
            Ok(r) if r.value == crate::surnat::parse_surnat("w/2").expect("literal") => Outcome::Pass,
            Ok(r) => Outcome::Fail { detail: format!("got {}", r.value) },
            Err(e) => Outcome::Fail { detail: e.to_string() },
        }
    }));
    out
}

fn kappa_identity(a: &SetExpr, b: &SetExpr, depth: i64) -> Outcome {
    let forms = [
        derive_counting(&a.clone().union(b.clone())),
        derive_counting(&a.clone().inter(b.clone())),
        derive_counting(a),
        derive_counting(b),
    ];
    if let Some(f) = forms.iter().find(|f| !f.is_symbolic()) {
        return Outcome::Skipped { reason: format!("no symbolic form for {}", f.set) };
    }
    let ev = |k: usize, n: i64| forms[k].eval(n);
    let bad = (1..=depth).into_par_iter().find_first(|&n| {
        let lhs = ev(0, n).zip(ev(1, n)).map(|(x, y)| x + y);
        let rhs = ev(2, n).zip(ev(3, n)).map(|(x, y)| x + y);
        lhs.is_none() || lhs != rhs
    });
    match bad {
        None => Outcome::Pass,
        Some(n) => {
            let rhs = ev(2, n).zip(ev(3, n)).map(|(x, y)| x + y).unwrap_or(-1);
            let lhs = ev(0, n).zip(ev(1, n)).map(|(x, y)| x + y);
            Outcome::FailAt { n, expected: rhs, got: lhs }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_and_empty() {
        assert!(run_property_suite("nope", 1, 10).is_err());
        assert!(run_property_suite("empty-catalog", 1, 10).unwrap().is_empty());
    }

    #[test]
    fn ultrafilter_laws_hold() {
        let rs = run_property_suite("ultrafilter", 1, 0).unwrap();
        assert_eq!(rs.len(), 6);
        for r in &rs {
            assert!(r.outcome.is_pass(), "{}", r.render());
        }
    }

    #[test]
    fn euclid_pairs_are_proper_and_seeded() {
        let ps = euclid_pairs(7, 40);
        assert_eq!(ps.len(), 40);
        let again = euclid_pairs(7, 40);
        assert!(ps.iter().zip(&again).all(|(x, y)| x == y));
        for (b, a) in &ps {
            let eb = b.enumerate(2000).unwrap();
            let ea = a.enumerate(2000).unwrap();
            assert!(eb.iter().all(|x| a.contains_int(*x)), "{b} not inside {a}");
            assert!(ea.len() > eb.len(), "{b} not proper in {a}");
        }
    }

    #[test]
    fn euclid_small_run() {
        for r in euclid(3).iter().take(30) {
            assert!(r.outcome.is_pass(), "{}", r.render());
        }
    }

    #[test]
    fn additivity_small_depth() {
        for r in run_property_suite("additivity", 1, 500).unwrap() {
            assert!(r.outcome.is_pass(), "{}", r.render());
        }
    }
}
