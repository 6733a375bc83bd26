use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_neutralflow"));
    c.env_remove("NEUTRALFLOW_OUT");
    c
}

fn run_in(dir: &Path, args: &[&str], config: Option<&str>) -> Output {
    let mut c = bin();
    c.current_dir(dir).args(args);
    if let Some(text) = config {
        fs::write(dir.join("run.toml"), text).unwrap();
        c.args(["--config", "run.toml"]);
    }
    c.output().unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

const SMALL: &str = "[solver]\ngrid_n = 60\ntol_steady = 1e-9\n[initial]\nkind = \"perturbed\"\n";

#[test]
fn solve_converges_and_writes_report() {
    let d = tempfile::tempdir().unwrap();
    let o = run_in(d.path(), &["solve", "--out", "a"], Some(SMALL));
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let r = json(&d.path().join("a/report.json"));
    assert_eq!(r["converged"], true);
    assert!(r["linf_error"].as_f64().unwrap() < 1e-3);
    let m = json(&d.path().join("a/manifest.json"));
    assert_eq!(m["command"], "solve");
    assert!(m["config_echo"].as_str().unwrap().contains("grid_n = 60"));
    let header = fs::read_to_string(d.path().join("a/monitors.csv")).unwrap();
    assert!(header.starts_with("t,u_min,u_max,sup_sigma,B_min,B_max,"));
}

#[test]
fn unconverged_solve_exits_two() {
    let d = tempfile::tempdir().unwrap();
    let cfg = SMALL.replace("tol_steady = 1e-9", "tol_steady = 1e-9\nt_end = 1e-4");
    let o = run_in(d.path(), &["solve", "--out", "b"], Some(&cfg));
    assert_eq!(o.status.code(), Some(2));
    let r = json(&d.path().join("b/report.json"));
    assert_eq!(r["converged"], false);
    assert!(r["final_residual"].as_f64().unwrap() > 1e-9);
}

#[test]
fn unknown_key_names_key_and_line() {
    let d = tempfile::tempdir().unwrap();
    let o = run_in(
        d.path(),
        &["solve"],
        Some("[solver]\ngrid_n = 50\nbogus = 1\n"),
    );
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("bogus") && err.contains("line 3"), "{err}");
}

#[test]
fn family_fills_and_single_leaf_matches_solve() {
    let d = tempfile::tempdir().unwrap();
    let cfg = "[solver]\ngrid_n = 40\ntol_steady = 1e-9\n[family]\nleaves = 3\n";
    let o = run_in(d.path(), &["family", "--out", "f"], Some(cfg));
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let f = json(&d.path().join("f/family.json"));
    assert_eq!(f["filling"], true);
    assert_eq!(f["leaves"].as_array().unwrap().len(), 3);
    for name in ["family.csv", "leaves.csv", "lines.csv"] {
        assert!(d.path().join("f").join(name).exists());
    }

    let one = "[solver]\ngrid_n = 40\n[family]\nleaves = 1\n";
    let o = run_in(d.path(), &["family", "--out", "g"], Some(one));
    assert_eq!(o.status.code(), Some(0));
    let f = json(&d.path().join("g/family.json"));
    let leaf = &f["leaves"][0];
    assert!(leaf["linf_to_bishop"].as_f64().unwrap() < 1e-4);

    let solo = format!("[solver]\ngrid_n = 40\nc0 = {:e}\n", 0.3f64.tan().powi(2));
    assert_eq!(
        run_in(d.path(), &["solve", "--out", "s"], Some(&solo))
            .status
            .code(),
        Some(0)
    );
    let s = json(&d.path().join("s/report.json"));
    assert_eq!(leaf["report"]["limit"]["a"], s["a"]);
    assert_eq!(leaf["report"]["limit"]["b"], s["b"]);
    assert_eq!(leaf["report"]["final_residual"], s["final_residual"]);
}

#[test]
fn crossing_table_is_a_precondition_error() {
    let d = tempfile::tempdir().unwrap();
    let v: Vec<f64> = (0..=300).map(|i| i as f64 * 1e-3).collect();
    let p: Vec<f64> = v
        .iter()
        .map(|t| 2.0 * t.sin().powi(2) * (1.0 - t))
        .collect();
    let fmt = |xs: &[f64]| {
        xs.iter()
            .map(|x| format!("{x:e}"))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let cfg = format!(
        "[solver]\ngrid_n = 100\n[family]\nambient = \"table\"\nangles = [0.15, 0.3]\nperturbation = 0.0\ntable_vartheta = [{}]\ntable_psi = [{}]\n",
        fmt(&v),
        fmt(&p)
    );
    let o = run_in(d.path(), &["family"], Some(&cfg));
    assert_eq!(
        o.status.code(),
        Some(1),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(String::from_utf8_lossy(&o.stderr).contains("not ordered"));
}

#[test]
fn oracle_runs_for_both_drifts() {
    let d = tempfile::tempdir().unwrap();
    let o = run_in(d.path(), &["oracle", "--out", "o"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("k_hat = 2.000000"));
    let o = run_in(d.path(), &["oracle", "--out", "o1", "--k", "1"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("predicted sqrt(psi)cot2theta"));
    let o = run_in(d.path(), &["oracle", "--thetas", ""], None);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_is_seeded_and_tolerance_controls_exit() {
    let d = tempfile::tempdir().unwrap();
    let a = run_in(
        d.path(),
        &["verify", "--out", "v1", "--seed", "7", "--jets", "16"],
        None,
    );
    let b = run_in(
        d.path(),
        &["verify", "--out", "v2", "--seed", "7", "--jets", "16"],
        None,
    );
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stdout)
    );
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(
        fs::read(d.path().join("v1/verify.json")).unwrap(),
        fs::read(d.path().join("v2/verify.json")).unwrap()
    );
    let z = run_in(
        d.path(),
        &["verify", "--out", "v3", "--jets", "4", "--tolerance", "0"],
        None,
    );
    assert_eq!(z.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&z.stdout).contains("FAIL"));
}

#[test]
fn environment_overrides_out() {
    let d = tempfile::tempdir().unwrap();
    let o = bin()
        .current_dir(d.path())
        .env("NEUTRALFLOW_OUT", "from_env")
        .args(["oracle", "--out", "from_flag", "--quiet"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(d.path().join("from_env/oracle.json").exists());
    assert!(!d.path().join("from_flag").exists());
}

#[test]
fn repeat_runs_are_byte_identical() {
    let d = tempfile::tempdir().unwrap();
    for out in ["r1", "r2"] {
        assert_eq!(
            run_in(d.path(), &["solve", "--quiet", "--out", out], Some(SMALL))
                .status
                .code(),
            Some(0)
        );
    }
    let m1 = json(&d.path().join("r1/manifest.json"));
    let m2 = json(&d.path().join("r2/manifest.json"));
    let files = m1["files"].as_array().unwrap();
    assert!(files.len() >= 3);
    for (f1, f2) in files.iter().zip(m2["files"].as_array().unwrap()) {
        assert_eq!(f1["sha256"], f2["sha256"], "{}", f1["name"]);
        let name = f1["name"].as_str().unwrap();
        assert_eq!(
            fs::read(d.path().join("r1").join(name)).unwrap(),
            fs::read(d.path().join("r2").join(name)).unwrap()
        );
    }
}
