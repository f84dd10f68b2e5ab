use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_magnum")).args(args).env_remove("MAGNUM_DEPTH_DEFAULT").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(stdout(o).trim()).expect("json output")
}

#[test]
fn eval_prints_magnum() {
    let o = run(&["eval", "2N u (2N-1)"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("m(2N u 2N-1) = w\n"), "{}", stdout(&o));
}

#[test]
fn eval_json_schema() {
    let o = run(&["eval", "3N u 4N", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["value"], "w/2");
    assert_eq!(v["exactness"], "exact");
    assert_eq!(v["reference"], "N");
    assert_eq!(v["ordering"], "canonical");
    for key in ["expr", "method", "caveats", "oracle"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn undetermined_exits_one() {
    let o = run(&["eval", "od2", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["expr"], "od2");
    assert_eq!(v["error"], "undetermined");
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(run(&["eval", "2N u"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "2N", "--order", "square"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "bogus"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn relative_references() {
    let o = run(&["eval", "halfN", "--ref", "N2"]);
    assert!(stdout(&o).contains("= 3*w/2"), "{}", stdout(&o));
    let o = run(&["eval", "N^(2)", "--within", "2N"]);
    assert!(stdout(&o).contains("= w^(1/2)/2"), "{}", stdout(&o));
}

#[test]
fn eval_verify_reports_oracle() {
    let o = run(&["eval", "2N", "--verify", "500"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("agrees with enumeration to n = 500"), "{}", stdout(&o));
}

#[test]
fn density_csv() {
    let path = std::env::temp_dir().join(format!("magnum-cli-{}.csv", std::process::id()));
    let o = run(&["density", "2N", "--upto", "64", "--csv", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("rho(64) = 1/2"));
    let csv = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 65);
    assert_eq!(lines[0], "n,kappa,rho");
    assert_eq!(lines[2], "2,1,1/2");
}

#[test]
fn verify_json_lines_are_seeded() {
    let a = run(&["verify", "--suite", "euclid", "--seed", "5", "--json"]);
    let b = run(&["verify", "--suite", "euclid", "--seed", "5", "--json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let lines: Vec<serde_json::Value> =
        stdout(&a).lines().map(|l| serde_json::from_str(l).expect("json line")).collect();
    assert_eq!(lines.len(), 200);
    assert!(lines.iter().all(|v| v["outcome"]["status"] == "pass"));
}

#[test]
fn depth_default_from_env() {
    let o = Command::new(env!("CARGO_BIN_EXE_magnum"))
        .args(["verify", "2N", "--json"])
        .env("MAGNUM_DEPTH_DEFAULT", "123")
        .output()
        .unwrap();
    assert_eq!(json(&o)["depth"], 123);
}

#[test]
fn tables_are_clean() {
    for cmd in ["table1", "calendar"] {
        let o = run(&[cmd]);
        assert_eq!(o.status.code(), Some(0), "{cmd}");
        assert!(!stdout(&o).contains("DIFF"), "{cmd}");
    }
}
