use std::fs::File;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use magnum_core::counting::density_sequence;
use magnum_core::fenestration::{apply_git, check_isobaric, GitVerdict, Isobary, OmegaStatus};
use magnum_core::magnum::{magnum_in, magnum_relative};
use magnum_core::verify::{self, VerificationReport};
use magnum_core::{magnum, Fenestration, MagnumError, MagnumResult, RefContext, SetExpr};

#[derive(Parser)]
#[command(name = "magnum", version, about = "Surnatural sizes of infinite sets")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Magnum of a set expression
    Eval(EvalArgs),
    /// Density sequence rho(n) = kappa(n)/n
    Density(DensityArgs),
    /// Isobary of two sets under a fenestration
    Isobaric(IsoArgs),
    /// Days on which simple sets receive magnums
    Calendar(TableArgs),
    /// Closed forms for selected subsets of N
    Table1(TableArgs),
    /// Check symbolic counting forms or run a property suite
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Output {
    /// Machine-readable output
    #[arg(long, global = true)]
    json: bool,
    /// Write omega as ω
    #[arg(long, global = true)]
    unicode: bool,
}

#[derive(Args)]
struct EvalArgs {
    expr: String,
    /// Reference set
    #[arg(long = "ref", value_parser = ["N", "N2", "Z", "halfN", "Q", "Q+", "QB"])]
    reference: Option<String>,
    /// Ordering of the reference set
    #[arg(long, value_parser = ["canonical", "square", "banded", "interleaved", "doubleton"], requires = "reference")]
    order: Option<String>,
    /// Magnum relative to an arbitrary subset of N, in increasing order
    #[arg(long, conflicts_with = "reference")]
    within: Option<String>,
    /// Check the counting form against enumeration to this depth
    #[arg(long, num_args = 0..=1, value_name = "DEPTH", value_parser = depth)]
    verify: Option<Option<i64>>,
    #[arg(long, env = "MAGNUM_DEPTH_DEFAULT", default_value_t = 10_000, value_parser = depth, hide = true)]
    default_depth: i64,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct DensityArgs {
    expr: String,
    #[arg(long, default_value_t = 1 << 17, value_parser = depth)]
    upto: i64,
    /// Write n,kappa,rho rows to this file
    #[arg(long, value_name = "PATH")]
    csv: Option<String>,
    /// Keep every k-th row in the CSV
    #[arg(long, default_value_t = 1)]
    step: usize,
    /// Print the extrema of rho over dyadic windows [2^k, 2^(k+1))
    #[arg(long)]
    window: bool,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct IsoArgs {
    a: String,
    b: String,
    /// Window endpoints Λ(n), as a function of n
    #[arg(long, conflicts_with = "window")]
    lambda: Option<String>,
    /// Uniform windows of this length
    #[arg(long)]
    window: Option<i64>,
    /// Number of windows compared
    #[arg(long, env = "MAGNUM_DEPTH_DEFAULT", default_value_t = 10_000, value_parser = depth)]
    check: i64,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct VerifyArgs {
    /// Sets to check; the built-in catalog when empty
    exprs: Vec<String>,
    /// Run a property suite instead
    #[arg(long, conflicts_with = "exprs")]
    suite: Option<String>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, env = "MAGNUM_DEPTH_DEFAULT", default_value_t = 10_000, value_parser = depth)]
    depth: i64,
    #[command(flatten)]
    out: Output,
}

fn depth(s: &str) -> Result<i64, String> {
    match s.parse::<i64>() {
        Ok(d) if d >= 1 => Ok(d),
        _ => Err(format!("`{s}` is not a depth (an integer >= 1)")),
    }
}

/// Outcome of a command: exit 1 for undetermined or failed checks, 2 for
/// bad input that got past the flag parser.
enum Fail {
    Undetermined(String),
    Usage(String),
}

type Res = Result<(), Fail>;

fn parse_set(s: &str) -> Result<SetExpr, Fail> {
    SetExpr::parse(s).map_err(|e| Fail::Usage(format!("cannot parse `{s}`: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match cli.cmd {
        Cmd::Eval(a) => eval(a),
        Cmd::Density(a) => density(a),
        Cmd::Isobaric(a) => isobaric(a),
        Cmd::Calendar(a) => table(verify::reproduce_calendar(), a.out),
        Cmd::Table1(a) => table(verify::reproduce_table1(), a.out),
        Cmd::Verify(a) => run_verify(a),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Undetermined(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Fail::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn eval(a: EvalArgs) -> Res {
    let set = parse_set(&a.expr)?;
    let result = match (&a.reference, &a.within) {
        (Some(name), _) => {
            let ctx = RefContext::by_name(name, a.order.as_deref()).ok_or_else(|| {
                Fail::Usage(format!(
                    "reference {name} has no ordering `{}`; pairs are N/canonical, N2/square, Z/interleaved, halfN/doubleton, Q/square, Q/banded, QB/banded",
                    a.order.as_deref().unwrap_or("")
                ))
            })?;
            magnum_relative(&set, &ctx)
        }
        (None, Some(w)) => magnum_in(&set, &parse_set(w)?),
        (None, None) => magnum(&set),
    };
    let mut r = match result {
        Ok(r) => r,
        Err(e) => return Err(report_error(&a.expr, e, &a.out)),
    };
    if let Some(d) = a.verify {
        r.verify(&set, d.unwrap_or(a.default_depth));
    }
    if a.out.json {
        println!("{}", r.to_json(a.out.unicode));
    } else {
        print_result(&r, a.out.unicode);
    }
    if r.oracle.as_ref().is_some_and(|o| !o.agreed) {
        return Err(Fail::Undetermined("oracle check failed".into()));
    }
    Ok(())
}

fn report_error(expr: &str, e: MagnumError, out: &Output) -> Fail {
    let kind = match &e {
        MagnumError::Undetermined(_) => "undetermined",
        MagnumError::NoDensity(_) => "no-density",
        MagnumError::NoFenestration(_) => "no-fenestration",
        MagnumError::ZeroDenominator => "zero-denominator",
        MagnumError::UnknownPattern(_) => "unknown-pattern",
        MagnumError::Set(_) => "unsupported",
    };
    if out.json {
        println!("{}", json!({ "expr": expr, "error": kind, "message": e.to_string() }));
    }
    Fail::Undetermined(format!("m({expr}): {e}"))
}

fn print_result(r: &MagnumResult, unicode: bool) {
    let m = if r.reference == "N" && r.ordering == "canonical" {
        format!("m({})", r.expr)
    } else {
        format!("m({} | {}, {})", r.expr, r.reference, r.ordering)
    };
    println!("{m} = {}", r.render(unicode));
    let methods: Vec<String> = r.method.iter().map(|x| json!(x).as_str().unwrap_or("").to_string()).collect();
    println!("  method: {}", methods.join(", "));
    if !r.provenance.is_empty() {
        let p: Vec<String> = r.provenance.iter().map(|x| json!(x).as_str().unwrap_or("").to_string()).collect();
        println!("  counting: {}", p.join(", "));
    }
    for c in &r.caveats {
        println!("  caveat: {c}");
    }
    if let Some(o) = &r.oracle {
        let verdict = if o.agreed { "agrees" } else { "DISAGREES" };
        println!("  oracle: {verdict} with enumeration to n = {}", o.depth);
    }
}

fn density(a: DensityArgs) -> Res {
    let set = parse_set(&a.expr)?;
    let seq = density_sequence(&set, a.upto).map_err(|e| Fail::Undetermined(e.to_string()))?;
    if let Some(path) = &a.csv {
        let f = File::create(path).map_err(|e| Fail::Usage(format!("cannot write {path}: {e}")))?;
        seq.write_csv(f, a.step).map_err(|e| Fail::Usage(format!("cannot write {path}: {e}")))?;
    }
    let n = seq.upto();
    let windows = seq.dyadic_extrema();
    if a.out.json {
        let ws: Vec<_> = windows
            .iter()
            .map(|w| json!({"k": w.k, "start": w.start, "end": w.end, "min": w.min_q().to_string(), "max": w.max_q().to_string()}))
            .collect();
        println!(
            "{}",
            json!({"expr": a.expr, "n": n, "kappa": seq.kappa(n), "rho": seq.rho(n).to_string(), "windows": ws})
        );
        return Ok(());
    }
    println!("rho({n}) = {} = {:.6}", seq.rho(n), seq.rho_f64(n));
    if a.window {
        for w in &windows {
            println!(
                "  n in [{}, {}]  min {:.6}  max {:.6}",
                w.start,
                w.end,
                *w.min_q().numer() as f64 / *w.min_q().denom() as f64,
                *w.max_q().numer() as f64 / *w.max_q().denom() as f64
            );
        }
    }
    Ok(())
}

fn isobaric(a: IsoArgs) -> Res {
    let (x, y) = (parse_set(&a.a)?, parse_set(&a.b)?);
    let fen = match (&a.lambda, a.window) {
        (Some(l), _) => Fenestration::parse(l).map_err(|e| Fail::Usage(format!("cannot parse `{l}`: {e}")))?,
        (None, Some(l)) if l >= 1 => Fenestration::uniform(l),
        (None, Some(l)) => return Err(Fail::Usage(format!("window length {l} must be positive"))),
        (None, None) => Fenestration::uniform(1),
    };
    let depth = a.check as usize;
    let iso = check_isobaric(&x, &y, &fen, depth);
    let git = apply_git(&x, &y, &fen, depth);
    let status = match &fen.status {
        OmegaStatus::IsFenestration(Some(nu)) => format!("fenestration, nu = {}", nu.render(a.out.unicode)),
        OmegaStatus::IsFenestration(None) => "fenestration".to_string(),
        OmegaStatus::NotFenestration => "not a fenestration".to_string(),
        OmegaStatus::Unknown(why) => format!("unknown: {why}"),
    };
    let iso_s = match iso {
        Isobary::IsobaricUpTo(n) => format!("isobaric over the first {n} windows"),
        Isobary::CounterexampleAt { n, wa, wb } => format!("window {n} has weights {wa} and {wb}"),
        Isobary::Unavailable => "windows not enumerable".to_string(),
    };
    let git_s = match &git {
        GitVerdict::EqualMagnums(f) => format!("equal magnums (cumulative count {})", f.render()),
        GitVerdict::NotApplicable(why) => format!("not applicable: {why}"),
    };
    if a.out.json {
        println!(
            "{}",
            json!({"a": a.a, "b": a.b, "omega": status, "isobary": iso_s,
                   "equal": matches!(git, GitVerdict::EqualMagnums(_)), "git": git_s})
        );
    } else {
        println!("windows: {status}");
        println!("isobary: {iso_s}");
        println!("magnums: {git_s}");
    }
    Ok(())
}

fn table(r: verify::Reproduction, out: Output) -> Res {
    if out.json {
        println!("{}", json!({"rendered": r.rendered, "diff": r.diff}));
    } else {
        print!("{}", r.rendered);
        for d in &r.diff {
            println!("DIFF {d}");
        }
    }
    if r.is_clean() {
        Ok(())
    } else {
        Err(Fail::Undetermined(format!("{} differences from the expected table", r.diff.len())))
    }
}

fn run_verify(a: VerifyArgs) -> Res {
    let reports: Vec<VerificationReport> = match &a.suite {
        Some(id) => verify::run_property_suite(id, a.seed, a.depth).map_err(|e| Fail::Usage(e.to_string()))?,
        None if a.exprs.is_empty() => verify::run_property_suite("catalog", a.seed, a.depth).expect("catalog suite"),
        None => {
            let sets = a.exprs.iter().map(|s| parse_set(s)).collect::<Result<Vec<_>, _>>()?;
            sets.iter().map(|e| verify::verify_counting_form(e, a.depth)).collect()
        }
    };
    let mut stdout = std::io::stdout().lock();
    for r in &reports {
        let line = if a.out.json { r.to_json_line() } else { r.render() };
        let _ = writeln!(stdout, "{line}");
    }
    let failed = reports.iter().filter(|r| r.outcome.is_failure()).count();
    if failed > 0 {
        return Err(Fail::Undetermined(format!("{failed} of {} checks failed", reports.len())));
    }
    Ok(())
}
