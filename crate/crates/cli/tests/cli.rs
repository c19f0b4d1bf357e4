//! End-to-end runs of the `warpcheck` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn workdir(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"))
        .join("cli")
        .join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(dir: &Path, command: &str, scenario: &str, extra: &[&str]) -> Output {
    let path = dir.join("scenario.json");
    std::fs::write(&path, scenario).unwrap();
    Command::new(env!("CARGO_BIN_EXE_warpcheck"))
        .arg(command)
        .arg("--scenario")
        .arg(&path)
        .arg("--out")
        .arg(dir.join("out"))
        .args(extra)
        .output()
        .unwrap()
}

fn read(dir: &Path, file: &str) -> String {
    std::fs::read_to_string(dir.join("out").join(file)).unwrap()
}

const EXP_FLAT: &str = r#"{
    "version": 1,
    "warping": {"family": "exp", "L": 1.0},
    "fiber": {"kind": "flat", "dim": 3},
    "lambda_bar": "oracle",
    "sampling": {"count": 30, "seed": 5}
}"#;

#[test]
fn exp_family_with_flat_fiber_passes() {
    let dir = workdir("exp");
    let out = run(&dir, "verify", EXP_FLAT, &[]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: Value = serde_json::from_str(&read(&dir, "report.json")).unwrap();
    assert_eq!(report["pass"], true);
    assert!((report["lambda_bar"].as_f64().unwrap() - 3.0).abs() < 1e-9);
    let csv = read(&dir, "residuals.csv");
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,x1,x2,x3,max_abs,max_rel"));
    assert_eq!(lines.count(), 30);
}

#[test]
fn mismatched_fiber_fails_with_exit_1() {
    let dir = workdir("cosh-flat");
    let scenario = EXP_FLAT.replace("\"exp\"", "\"cosh\"");
    let out = run(&dir, "verify", &scenario, &[]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_str(&read(&dir, "report.json")).unwrap();
    assert_eq!(report["pass"], false);
    assert!(report["max_rel_residual"].as_f64().unwrap() > 1e-2);
}

#[test]
fn malformed_expression_reports_position() {
    let dir = workdir("malformed");
    let scenario = r#"{
        "version": 1,
        "base": {"builtin": "flat2"},
        "fiber": {"kind": "sphere", "dim": 2},
        "warping": {"expression": "1 + sin(x*)"},
        "lambda_bar": "oracle"
    }"#;
    let out = run(&dir, "verify", scenario, &[]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("offset 10"), "{stderr}");
    assert!(stderr.contains("1 + sin(x*)\n              ^"), "{stderr}");
}

#[test]
fn strict_config() {
    let dir = workdir("strict");
    let typo = EXP_FLAT.replace("\"L\"", "\"l\"");
    assert_eq!(run(&dir, "verify", &typo, &[]).status.code(), Some(2));
    let version = EXP_FLAT.replace("\"version\": 1", "\"version\": 2");
    assert_eq!(run(&dir, "verify", &version, &[]).status.code(), Some(2));
    assert_eq!(run(&dir, "verify", "{not json", &[]).status.code(), Some(2));
    let family = EXP_FLAT.replace("\"exp\"", "\"tanh\"");
    assert_eq!(run(&dir, "verify", &family, &[]).status.code(), Some(2));
    // a section the command needs is missing
    assert_eq!(run(&dir, "classify", EXP_FLAT, &[]).status.code(), Some(2));
    assert_eq!(
        run(&dir, "verify", EXP_FLAT, &["--samples", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&dir, "verify", EXP_FLAT, &["--tol", "-1"])
            .status
            .code(),
        Some(2)
    );

    let missing = Command::new(env!("CARGO_BIN_EXE_warpcheck"))
        .args(["verify", "--scenario", "/nonexistent/scenario.json"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));
    let usage = Command::new(env!("CARGO_BIN_EXE_warpcheck"))
        .arg("plot")
        .output()
        .unwrap();
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let a = workdir("det-a");
    let b = workdir("det-b");
    for cmd in ["verify", "curvature"] {
        let oa = run(&a, cmd, EXP_FLAT, &[]);
        let ob = run(&b, cmd, EXP_FLAT, &[]);
        assert_eq!(oa.stdout, ob.stdout);
    }
    for file in ["report.json", "residuals.csv", "curvature.json"] {
        assert_eq!(read(&a, file), read(&b, file), "{file}");
    }
    let disc = r#"{"version": 1, "discrepancies": {"n": 3, "L": 2.0, "k": 0.5, "b": 0.7}, "sampling": {"count": 20, "seed": 1}}"#;
    run(&a, "discrepancies", disc, &[]);
    run(&b, "discrepancies", disc, &[]);
    assert_eq!(
        read(&a, "discrepancies.json"),
        read(&b, "discrepancies.json")
    );
}

#[test]
fn overrides_change_the_sample() {
    let dir = workdir("overrides");
    run(&dir, "verify", EXP_FLAT, &[]);
    let base = read(&dir, "residuals.csv");
    run(
        &dir,
        "verify",
        EXP_FLAT,
        &["--seed", "6", "--samples", "12"],
    );
    let other = read(&dir, "residuals.csv");
    assert_ne!(base, other);
    assert_eq!(other.lines().count(), 13);
    let report: Value = serde_json::from_str(&read(&dir, "report.json")).unwrap();
    assert_eq!(report["samples"]["seed"], 6);

    // a tolerance below the roundoff floor turns the pass into a failure
    assert_eq!(
        run(&dir, "verify", EXP_FLAT, &["--tol", "1e-20"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn numbers_carry_seventeen_digits() {
    let dir = workdir("digits");
    run(&dir, "verify", EXP_FLAT, &[]);
    let json = read(&dir, "report.json");
    assert!(
        json.contains("\"residual\": 9.9999999999999995e-7"),
        "{json}"
    );
    let first = read(&dir, "residuals.csv")
        .lines()
        .nth(1)
        .unwrap()
        .to_string();
    for field in first.split(',') {
        let mantissa = field.trim_start_matches('-').split('e').next().unwrap();
        assert_eq!(mantissa.len(), 18, "{field}");
    }
}

#[test]
fn curvature_at_given_points() {
    let dir = workdir("curvature");
    let scenario = r#"{
        "version": 1,
        "preset": {"de_sitter": {"lambda": 3.0}},
        "points": [[0.2, 1.0, 1.0471975511965976, 0.5]]
    }"#;
    let out = run(&dir, "curvature", scenario, &[]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&read(&dir, "curvature.json")).unwrap();
    let p = &doc["points"][0];
    let g = &p["metric"];
    let gmat = &p["einstein"];
    for i in 0..4 {
        for j in 0..4 {
            let (gij, eij) = (g[i][j].as_f64().unwrap(), gmat[i][j].as_f64().unwrap());
            assert!((eij + 3.0 * gij).abs() < 1e-6);
        }
    }
    assert!((p["scalar"].as_f64().unwrap() - 12.0).abs() < 1e-9);
}

#[test]
fn classify_lists_families_with_both_constants() {
    let dir = workdir("classify");
    let scenario = r#"{"version": 1, "classify": {"lambda_bar": -3.0, "n": 3}, "sampling": {"count": 20, "seed": 1}}"#;
    let out = run(&dir, "classify", scenario, &[]);
    assert_eq!(out.status.code(), Some(0));
    let families: Value = serde_json::from_str(&read(&dir, "families.json")).unwrap();
    let kinds: Vec<&str> = families
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["kind"].as_str().unwrap())
        .collect();
    assert_eq!(kinds, ["exp", "cosh", "sinh"]);
    for f in families.as_array().unwrap() {
        assert_eq!(f["lambda_bar_paper"].as_f64(), Some(-3.0));
        assert!((f["lambda_bar_oracle"].as_f64().unwrap() - 3.0).abs() < 1e-9);
        for key in ["L", "k", "b", "lambda_fiber_paper", "lambda_fiber_oracle"] {
            assert!(f[key].is_number(), "{key}");
        }
    }
}

#[test]
fn custom_chart_and_warping_expression() {
    let dir = workdir("custom");
    let scenario = r#"{
        "version": 1,
        "base": {"custom": {
            "coords": ["u", "v"],
            "metric": [["1", "0"], ["0", "a*cosh(u)^2"]],
            "signature": [1, 1],
            "bounds": [[-1, 1], [-1, 1]],
            "params": {"a": 2.0}
        }},
        "fiber": {"kind": "hyperbolic", "dim": 2, "scale": 1.5},
        "warping": {"expression": "c + u^2", "params": {"c": 1.0}},
        "lambda_bar": {"explicit": 0.0},
        "tolerances": {"oracle": 1e-9}
    }"#;
    let out = run(&dir, "verify", scenario, &[]);
    // not Einstein, but closed form and oracle must agree
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_str(&read(&dir, "report.json")).unwrap();
    assert!(report["oracle_diff"].as_f64().unwrap() < 1e-9);
    assert_eq!(report["tolerances"]["oracle"].as_f64(), Some(1e-9));
}

#[test]
fn shipped_scenarios_load() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let scenario = warpcheck_cli::Scenario::load(&path).unwrap();
        let buildable =
            scenario.preset.is_some() || scenario.base.is_some() || scenario.warping.is_some();
        let is_bad = path
            .file_name()
            .unwrap()
            .to_str()
            .unwrap()
            .starts_with("bad_");
        if buildable {
            assert_eq!(scenario.geometry().is_err(), is_bad, "{}", path.display());
        }
        count += 1;
    }
    assert!(count >= 5);
}
