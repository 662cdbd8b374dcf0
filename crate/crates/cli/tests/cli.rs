use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use finetti::povm::{write_povm, Povm};
use finetti::random::{random_povm_elements, rng};
use serde_json::Value;
use tempfile::TempDir;

fn finetti(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_finetti")).args(args).env_remove("FINETTI_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn repo_file(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

fn value(out: &str, key: &str) -> f64 {
    let line = out.lines().find(|l| l.starts_with(key)).unwrap_or_else(|| panic!("no `{key}` in\n{out}"));
    line[key.len()..].trim_start_matches(':').split_whitespace().next().unwrap().parse().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const QUBIT_STATE: &str = "state\nancilla 1\nfactor 2\ncopies 1\n0.7,0 0.2,0.1\n0.2,-0.1 0.3,0\n";

#[test]
fn sic_constants() {
    let o = finetti(&["povm", "constants", "--d", "2", "--kind", "sic"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(value(&out, "C1"), 24.0);
    assert_eq!(value(&out, "C2"), 48.0);
    assert_eq!(value(&out, "tr|F*_0|"), 3.0);
}

#[test]
fn wh_constants_below_ceiling() {
    let o = finetti(&["povm", "constants", "--d", "2", "--kind", "wh"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let c1 = value(&out, "C1");
    let ceiling = value(&out, "general C1 ceiling 2*sqrt(2)*d^5");
    assert!((ceiling - 90.50966799187809).abs() < 1e-9);
    assert!(c1 <= ceiling);
}

#[test]
fn sic_outside_qubits_is_rejected() {
    let o = finetti(&["povm", "build", "--d", "3", "--kind", "sic"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unsupported dimension 3"));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(finetti(&["povm", "constants", "--d", "2", "--kind", "tetra"]).status.code(), Some(2));
}

#[test]
fn tomography_round_trip() {
    let dir = TempDir::new().unwrap();
    let povm = dir.path().join("sic.txt");
    let o = finetti(&["povm", "build", "--d", "2", "--kind", "sic", "--out", povm.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let state = write(&dir, "rho.txt", QUBIT_STATE);
    let (s, p) = (state.to_str().unwrap(), povm.to_str().unwrap());

    let o = finetti(&["tomography", "--state", s, "--povm", p]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(value(&stdout(&o), "reconstruction residual") <= 1e-9);

    let o = finetti(&["tomography", "--state", s, "--povm", p, "--perturb", "1e-3", "--seed", "9"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let observed = value(&out, "observed error");
    assert!(observed > 0.0);
    assert!(observed <= value(&out, "error bound"));
}

#[test]
fn tomography_dimension_mismatch() {
    let dir = TempDir::new().unwrap();
    let povm = dir.path().join("wh3.txt");
    assert!(finetti(&["povm", "build", "--d", "3", "--kind", "wh", "--out", povm.to_str().unwrap()]).status.success());
    let state = write(&dir, "rho.txt", QUBIT_STATE);
    let o = finetti(&["tomography", "--state", state.to_str().unwrap(), "--povm", povm.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("does not match"));
}

fn definetti_json(config: &Path) -> Value {
    let o = finetti(&["definetti", "--config", config.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn product_config_has_zero_distances() {
    let report = definetti_json(&repo_file("configs/product.toml"));
    assert_eq!(report["config"]["name"], "product");
    let records = report["records"].as_array().unwrap();
    assert_eq!(records.len(), 16);
    for r in records {
        assert!(r["quantum_distance"].as_f64().unwrap() < 1e-12);
    }
    assert_eq!(report["passed"], true);
}

#[test]
fn mixture_config_matches_oracle() {
    let fixture: Value = serde_json::from_str(
        &std::fs::read_to_string(repo_file("crates/core/tests/fixtures/oracle_mixture.json")).unwrap(),
    )
    .unwrap();
    let case = fixture["cases"].as_array().unwrap().iter().find(|c| c["n"] == 2).unwrap();
    let report = definetti_json(&repo_file("configs/two-product-mixture.toml"));
    let close = |a: &Value, b: &Value| (a.as_f64().unwrap() - b.as_f64().unwrap()).abs() <= 1e-9;
    assert!(close(&report["expectations"]["quantum"], &case["expectations"]["quantum"]));
    assert!(close(&report["expectations"]["classical"], &case["expectations"]["classical"]));
    assert!(close(&report["mixture"]["distance"], &case["mixture_distance"]));
    for (r, o) in report["records"].as_array().unwrap().iter().zip(case["branches"].as_array().unwrap()) {
        assert_eq!(r["outcome"], o["outcome"]);
        assert!(close(&r["probability"], &o["probability"]));
        assert!(close(&r["quantum_distance"], &o["quantum_distance"]));
        assert!(close(&r["classical_distance"], &o["classical_distance"]));
    }
}

#[test]
fn over_cap_config_is_refused() {
    let o = finetti(&["definetti", "--config", repo_file("configs/over-cap.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("exceeds the cap"));
}

#[test]
fn unknown_config_key_is_refused() {
    let dir = TempDir::new().unwrap();
    let text = std::fs::read_to_string(repo_file("configs/product.toml")).unwrap().replace("seed = 7", "sead = 7");
    let cfg = write(&dir, "typo.toml", &text);
    let o = finetti(&["definetti", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("sead"), "{}", stderr(&o));
}

#[test]
fn seeded_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let cfg = repo_file("configs/sampled-wh.toml");
    let mut outputs = Vec::new();
    for (i, threads) in ["1", "3"].iter().enumerate() {
        let out = dir.path().join(format!("run{i}.csv"));
        let tail = dir.path().join(format!("run{i}.tail.csv"));
        let o = finetti(&[
            "--threads",
            threads,
            "definetti",
            "--config",
            cfg.to_str().unwrap(),
            "--format",
            "csv",
            "--out",
            out.to_str().unwrap(),
            "--tail-out",
            tail.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        outputs.push((std::fs::read(&out).unwrap(), std::fs::read(&tail).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    let csv = String::from_utf8(outputs[0].0.clone()).unwrap();
    assert!(csv.starts_with("# config=sampled-wh d=3"));
    assert_eq!(csv.lines().nth(1), Some("branch_index,zbar,probability,quantum_distance,classical_distance"));
    assert!(!String::from_utf8(outputs[0].1.clone()).unwrap().contains("-0"));
}

#[test]
fn relative_povm_path_resolves_against_config() {
    let dir = TempDir::new().unwrap();
    let povm = dir.path().join("sic.txt");
    assert!(finetti(&["povm", "build", "--d", "2", "--kind", "sic", "--out", povm.to_str().unwrap()]).status.success());
    let text = std::fs::read_to_string(repo_file("configs/two-product-mixture.toml"))
        .unwrap()
        .replace("kind = \"sic\"", "kind = \"file\"\npath = \"sic.txt\"");
    let cfg = write(&dir, "from-file.toml", &text);
    let from_file = definetti_json(&cfg);
    let built_in = definetti_json(&repo_file("configs/two-product-mixture.toml"));
    assert_eq!(from_file["records"], built_in["records"]);
}

#[test]
fn selftest_passes_and_flags_a_corrupted_sic() {
    let o = finetti(&["selftest", "--format", "json"]);
    let summary: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(o.status.success(), "{summary:#}");
    assert_eq!(summary["passed"], true);
    assert_eq!(summary["total"], 10);

    let dir = TempDir::new().unwrap();
    let bogus = dir.path().join("bogus-sic.txt");
    let povm = Povm::with_index_labels(random_povm_elements::<f64>(2, 4, &mut rng(5))).unwrap();
    write_povm(&bogus, &povm).unwrap();
    let o = finetti(&["selftest", "--sic-file", bogus.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let out = stdout(&o);
    let line = out.lines().find(|l| l.contains(" 2 qubit SIC-POVM")).unwrap();
    assert!(line.starts_with("[FAIL]"), "{line}");
    assert!(stderr(&o).contains("violated: criterion 2"));
}
