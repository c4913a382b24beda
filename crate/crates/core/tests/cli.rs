use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adic-shifts"))
        .args(args)
        .env_remove("SHIFTS_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn dump_of_u() {
    let o = cli(&["dump", "--op", "U", "--s", "2", "--depth", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "# s=2 N=2 dim=7 ordering=level-lex");
    assert_eq!(
        &lines[1..],
        [
            "2 0 1.0000000000000000e0 0.0000000000000000e0",
            "4 1 1.0000000000000000e0 0.0000000000000000e0",
            "5 2 1.0000000000000000e0 0.0000000000000000e0",
        ]
    );
}

#[test]
fn norm_of_generator_sum() {
    let o = cli(&["norm", "--op", "S_0 + S_1", "--s", "2", "--depth", "4"]);
    assert!(o.status.success());
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 2f64.sqrt()).abs() < 1e-12);
}

#[test]
fn bad_operator_spec_exits_with_error() {
    let o = cli(&["dump", "--op", "Q"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown factor"));
}

#[test]
fn check_passes_and_reports_json() {
    let o = cli(&["check", "--name", "isometry.U", "--s", "2", "--depth", "6"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["checks"][0]["name"], "isometry.U");
    assert_eq!(v["passed"], true);
}

#[test]
fn failing_check_exits_nonzero() {
    let o = cli(&["check", "--name", "toeplitz.U", "--tol", "1e-300"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unknown_check_exits_with_error() {
    assert_eq!(cli(&["check", "--name", "nope"]).status.code(), Some(2));
}

#[test]
fn family_suite_to_csv_file() {
    let dir = std::env::temp_dir().join(format!("adic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bd.csv");
    let o = cli(&[
        "suite",
        "--filter",
        "bunce-deddens",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
        "--depth",
        "5",
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "name,paper_ref,max_residual,tolerance,validity_count,pass,notes"
    );
    assert_eq!(lines.count(), 8);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn reports_are_deterministic() {
    let args = ["suite", "--filter", "transfer.*", "--depth", "5", "--seed", "99"];
    assert_eq!(cli(&args).stdout, cli(&args).stdout);
}

#[test]
fn seed_flag_overrides_environment() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_adic-shifts"));
        c.args(["check", "--name", "toeplitz.V", "--depth", "5"]);
        c.env_remove("SHIFTS_SEED");
        if let Some(e) = env {
            c.env("SHIFTS_SEED", e);
        }
        if let Some(f) = flag {
            c.args(["--seed", f]);
        }
        c.output().unwrap().stdout
    };
    let flag_only = run(None, Some("5"));
    assert_eq!(run(Some("6"), Some("5")), flag_only);
    assert_eq!(run(Some("5"), None), flag_only);
}

#[test]
fn unwritable_output_path_is_reported() {
    let o = cli(&["suite", "--filter", "isometry.U", "--out", "/nonexistent-dir/r.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent-dir/r.json"));
}
