use std::path::Path;
use std::process::{Command, Output};

fn fpsearch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fpsearch")).args(args).output().unwrap()
}

fn config(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(format!("{name}.toml")).display().to_string()
}

#[test]
fn list_names_every_experiment() {
    let out = fpsearch(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["table1", "k1-curves", "k2-curves", "robustness", "bb1-scaling", "spectra"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing from:\n{text}");
    }
}

#[test]
fn run_writes_files_under_out() {
    let dir = tempfile::tempdir().unwrap();
    let out =
        fpsearch(&["run", "table1", "--config", &config("table1"), "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("table1.csv")).unwrap();
    assert!(csv.starts_with("# schema=fpsearch/1 experiment=table1 config="));
    assert!(!csv.contains('\r'));
}

#[test]
fn overrides_change_output_and_hash() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let base = ["run", "robustness", "--config"];
    let cfg = config("robustness");
    let run = |dir: &Path, extra: &[&str]| {
        let mut args: Vec<&str> = base.to_vec();
        args.push(&cfg);
        args.extend(["--out", dir.to_str().unwrap()]);
        args.extend(extra);
        let out = fpsearch(&args);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read_to_string(dir.join("robustness.csv")).unwrap()
    };
    let full = run(a.path(), &[]);
    let small = run(b.path(), &["--override", "errors.eps=[0.1]", "--override", "errors.delta_j=[0.0]"]);
    assert_ne!(full.lines().next(), small.lines().next());
    // 4 oracles × 4 orders
    assert_eq!(small.lines().count(), 2 + 16);
    let residuals: Vec<f64> = small
        .lines()
        .skip(2)
        .filter_map(|l| l.rsplit(',').next().filter(|v| !v.is_empty()))
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(residuals.len(), 12);
    assert!(residuals.iter().all(|&r| r > 0.0));
}

#[test]
fn config_errors_exit_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "[errors]\neps = [0.1]\ntypo = 1\n").unwrap();
    let bad = bad.to_str().unwrap();
    let out_dir = dir.path().join("out");
    let out_dir = out_dir.to_str().unwrap();
    let robustness = config("robustness");
    let cases: Vec<Vec<&str>> = vec![
        vec!["run", "robustness", "--config", bad, "--out", out_dir],
        vec!["run", "table1", "--config", &robustness, "--out", out_dir],
        vec!["run", "table2", "--out", out_dir],
        vec!["run", "table1", "--override", "order.max=99", "--out", out_dir],
        vec!["run", "table1", "--config", "/nonexistent/cfg.toml", "--out", out_dir],
    ];
    for args in cases {
        let out = fpsearch(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
    assert!(!Path::new(out_dir).exists());
}

#[test]
fn verify_reports_every_check() {
    let out = fpsearch(&["verify"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let fails: Vec<&str> = text.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 10, "{text}");
    // Composite z rotations carry the rf error too, so the exact law is lost.
    assert_eq!(fails.len(), 1, "{text}");
    assert!(fails[0].contains("rf error on all pulses"));
    assert_eq!(out.status.code(), Some(1));
}
