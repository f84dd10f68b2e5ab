//! Acceptance criteria: one PASS/FAIL line each, exit status 1 if any fail.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use ::magnum::counting::density_sequence;
use ::magnum::counting::totient_sum;
use ::magnum::fenestration::{omega_set_decision, OmegaStatus};
use ::magnum::magnum::{
    band_counts_oracle, bayes_check, compare_relative, leading, magnum_in, magnum_qband, magnum_qplus,
    magnum_relative, magnum_z_counting, magnum_z_reflection, surreal_density,
};
use ::magnum::surnat::Key;
use ::magnum::verify::{reproduce_calendar, reproduce_table1, run_property_suite};
use ::magnum::{magnum, parse_surnat, Comparison, FnForm, RefContext, SetExpr, Surnat};
use num_rational::Ratio;

const TABLE1_ROWS: usize = 13;
const TABLE1_BUDGET: Duration = Duration::from_secs(1);
const CATALOG_DEPTH: i64 = 100_000;
const CATALOG_MIN_SETS: usize = 15;
const CATALOG_BUDGET: Duration = Duration::from_secs(30);
const EUCLID_SEED: u64 = 1;
const EUCLID_PAIRS: usize = 200;
const ADDITIVITY_DEPTH: i64 = 10_000;
const ADDITIVITY_PAIRS: usize = 50;
const TOTIENT_N: u64 = 100_000;
const TOTIENT_TOL: f64 = 0.02;
const OD2_UPTO: i64 = 1 << 17;
const OD2_TOL: f64 = 0.02;
const COEFF_TOL: f64 = 1e-12;
const BAND_ORACLE_UPTO: i64 = 2000;
const BANDS: i64 = 5;
const UNIFORM_WINDOWS: i64 = 12;

type Check = Result<(), String>;

fn set(s: &str) -> SetExpr {
    SetExpr::parse(s).expect("literal set parses")
}

fn val(s: &str) -> Surnat {
    parse_surnat(s).expect("literal value parses")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn table1() -> Check {
    let t = Instant::now();
    let r = reproduce_table1();
    let dt = t.elapsed();
    ensure(r.is_clean(), || format!("diff: {:?}", r.diff))?;
    let rows = r.rendered.lines().count() - 1;
    ensure(rows == TABLE1_ROWS, || format!("{rows} rows"))?;
    ensure(dt < TABLE1_BUDGET, || format!("took {dt:?}"))
}

fn catalog() -> Check {
    let t = Instant::now();
    let rs = run_property_suite("catalog", 0, CATALOG_DEPTH).map_err(|e| e.to_string())?;
    let dt = t.elapsed();
    ensure(rs.len() >= CATALOG_MIN_SETS, || format!("only {} sets", rs.len()))?;
    if let Some(r) = rs.iter().find(|r| !r.outcome.is_pass()) {
        return Err(r.render());
    }
    ensure(dt < CATALOG_BUDGET, || format!("took {dt:?}"))
}

fn euclid() -> Check {
    let rs = run_property_suite("euclid", EUCLID_SEED, 0).map_err(|e| e.to_string())?;
    ensure(rs.len() == EUCLID_PAIRS, || format!("{} pairs", rs.len()))?;
    match rs.iter().find(|r| !r.outcome.is_pass()) {
        Some(r) => Err(r.render()),
        None => Ok(()),
    }
}

fn additivity() -> Check {
    let m = magnum(&set("3N u 4N")).map_err(|e| e.to_string())?;
    ensure(m.value == val("w/2"), || format!("m(3N u 4N) = {}", m.value))?;
    let rs = run_property_suite("additivity", 1, ADDITIVITY_DEPTH).map_err(|e| e.to_string())?;
    let pairs = rs.iter().filter(|r| r.subject.contains(" ; ")).count();
    ensure(pairs == ADDITIVITY_PAIRS, || format!("{pairs} pairs"))?;
    match rs.iter().find(|r| !r.outcome.is_pass()) {
        Some(r) => Err(r.render()),
        None => Ok(()),
    }
}

fn densities() -> Check {
    let even = density_sequence(&set("2N"), 10_000).map_err(|e| e.to_string())?;
    ensure(even.rho(10_000) == Ratio::new(1, 2), || format!("rho = {}", even.rho(10_000)))?;
    let n = TOTIENT_N as f64;
    let hw = totient_sum(TOTIENT_N) as f64 * PI * PI / (3.0 * n * n);
    ensure((hw - 1.0).abs() <= TOTIENT_TOL, || format!("totient ratio {hw}"))?;
    let od = density_sequence(&set("od2"), OD2_UPTO).map_err(|e| e.to_string())?;
    let w = od
        .dyadic_extrema()
        .into_iter()
        .filter(|w| w.end == 2 * w.start - 1)
        .last()
        .ok_or("no complete window")?;
    let (lo, hi) = (w.min.0 as f64 / w.min.1 as f64, w.max.0 as f64 / w.max.1 as f64);
    ensure((lo - 1.0 / 3.0).abs() <= OD2_TOL && (hi - 2.0 / 3.0).abs() <= OD2_TOL, || {
        format!("window [{}, {}]: min {lo} max {hi}", w.start, w.end)
    })
}

fn relative() -> Check {
    let half_root = val("w^(1/2)/2");
    let checks = [
        ("m(N^(2) in 2N)", magnum_in(&set("N^(2)"), &set("2N")), half_root.clone()),
        ("m(2N in N^(2))", magnum_in(&set("2N"), &set("N^(2)")), half_root),
        ("m(halfN | N2)", magnum_relative(&set("halfN"), &RefContext::square_n2()), val("3*w/2")),
        ("m(2N-1 in 2N)", magnum_in(&set("2N-1"), &set("2N")), val("0")),
    ];
    for (what, got, want) in checks {
        let got = got.map_err(|e| format!("{what}: {e}"))?;
        ensure(got.value == want, || format!("{what} = {}, expected {want}", got.value))?;
    }
    Ok(())
}

fn bayes() -> Check {
    let ctx = RefContext::canonical_n();
    let (a, b, n) = (set("2N"), set("3N"), SetExpr::N);
    let checks = [(&a, &n, "1/2"), (&b, &n, "1/3"), (&b, &a, "1/3"), (&a, &b, "1/2")];
    for (x, y, want) in checks {
        let got = surreal_density(x, y, &ctx).map_err(|e| e.to_string())?;
        ensure(got == val(want), || format!("sigma({x} | {y}) = {got}, expected {want}"))?;
    }
    let ok = bayes_check(&a, &b, &ctx).map_err(|e| e.to_string())?;
    ensure(ok, || "Bayes identity fails".into())
}

fn coeff_is(v: &Surnat, c: f64, key: Key) -> Check {
    match leading(v) {
        Some((x, k)) if k == key && (x - c).abs() <= COEFF_TOL => Ok(()),
        got => Err(format!("{v}: leading {got:?}, expected {c} at {key:?}")),
    }
}

fn integers_rationals() -> Check {
    let (zc, zr) = (magnum_z_counting().value, magnum_z_reflection().value);
    ensure(zc == val("2*w + 1") && zr == zc, || format!("Z: {zc} / {zr}"))?;
    let pi2 = PI * PI;
    coeff_is(&magnum_qplus().value, 6.0 / pi2, Key::new(Ratio::from_integer(2), 0))?;
    let band_coeff = 2f64.powf(2.0 / 3.0) * 3.0 / pi2;
    let ctx = RefContext::banded_q();
    for k in 1..=BANDS {
        coeff_is(&magnum_qband(k).value, band_coeff, Key::new(Ratio::new(4, 3), 0))?;
        for j in k + 1..=BANDS {
            let c = compare_relative(&SetExpr::Band(k), &SetExpr::Band(j), &ctx);
            ensure(c == Comparison::Equal, || format!("band {k} vs {j}: {c:?}"))?;
        }
    }
    let counts: Vec<Vec<u64>> = (1..=BANDS).map(|k| band_counts_oracle(k, BAND_ORACLE_UPTO)).collect();
    let from = BANDS as usize;
    ensure(counts.iter().all(|c| c[from..] == counts[0][from..]), || "band counts differ eventually".into())
}

fn fenestrations() -> Check {
    let w = Surnat::omega();
    let mut lambdas: Vec<String> = (1..=UNIFORM_WINDOWS).map(|l| format!("{l}*n")).collect();
    lambdas.push("n^2".into());
    lambdas.push("n^3".into());
    for l in &lambdas {
        let st = omega_set_decision(&FnForm::parse(l).expect("literal form"), &w);
        ensure(st.is_fenestration(), || format!("{l}: {st:?}"))?;
    }
    let st = omega_set_decision(&FnForm::parse("2*n - 1").expect("literal form"), &w);
    ensure(st == OmegaStatus::NotFenestration, || format!("2*n - 1: {st:?}"))?;
    let rs = run_property_suite("ultrafilter", 0, 0).map_err(|e| e.to_string())?;
    match rs.iter().find(|r| !r.outcome.is_pass()) {
        Some(r) => Err(r.render()),
        None => Ok(()),
    }
}

fn calendar() -> Check {
    let r = reproduce_calendar();
    ensure(r.is_clean(), || format!("diff: {:?}", r.diff))
}

fn grandi() -> Check {
    let f = FnForm::parse("(1 - (-1)^n)/2").map_err(|e| e.to_string())?;
    let v = f.extend_to_omega().map_err(|e| e.to_string())?;
    ensure(v.value == val("0"), || format!("extends to {}", v.value))
}

fn main() {
    let criteria: &[(&str, fn() -> Check)] = &[
        ("table1 reproduces", table1),
        ("catalog counting forms", catalog),
        ("euclid principle", euclid),
        ("additivity", additivity),
        ("densities", densities),
        ("relative magnums", relative),
        ("bayes", bayes),
        ("integers and rationals", integers_rationals),
        ("fenestrations and ultrafilter", fenestrations),
        ("calendar reproduces", calendar),
        ("grandi series", grandi),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match f() {
            Ok(()) => println!("PASS {:>2} {name} ({:.2?})", i + 1, t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
