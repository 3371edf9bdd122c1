use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const SMALL_SELFTEST: &str = r#"{
  "command": "selftest",
  "grid": {"b_halfwidth": 128, "n_b": 512, "a_min": 0.25, "a_max": 4, "n_a": 16, "n_phi": 16},
  "line_grid": {"b_halfwidth": 1024, "n_b": 4096},
  "atom": {"radius": 4},
  "seed": 3
}"#;

fn run(dir: &Path, config: &str, extra: &[&str], threads: usize) -> Output {
    let path = dir.join("config.json");
    fs::write(&path, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_coorbit"))
        .arg("--config")
        .arg(&path)
        .args(extra)
        .env("RAYON_NUM_THREADS", threads.to_string())
        .output()
        .unwrap()
}

#[test]
fn exponent_below_one_exits_one_naming_field() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = run(dir.path(), r#"{"command": "norms", "ps": [1, 0.5]}"#, &["--out", out.to_str().unwrap()], 1);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("ps[1]"), "{err}");
    assert!(!out.exists());
}

#[test]
fn unknown_key_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), r#"{"command": "norms", "exponents": [2]}"#, &[], 1);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exponents"));
}

#[test]
fn shannon_norms_split_at_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = run(dir.path(), r#"{"command": "norms", "rep": "shannon", "ps": [1, 2]}"#, &["--out", out.to_str().unwrap()], 1);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out.join("norms.csv")).unwrap();
    let verdicts: Vec<&str> = csv.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(csv.lines().next(), Some("p,increment,partial_norm,verdict"));
    assert_eq!(verdicts, ["divergent", "convergent"]);
}

#[test]
fn positional_command_and_seed_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"{"command": "norms", "grid": {"b_halfwidth": 64, "n_b": 256, "a_min": 0.25, "a_max": 4, "n_a": 16}, "seed": 1}"#;
    let voice = |seed: &str, name: &str| {
        let out = dir.path().join(name);
        let o = run(dir.path(), config, &["voice", "--seed", seed, "--out", out.to_str().unwrap()], 1);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        fs::read(out.join("voice.csv")).unwrap()
    };
    let (a, b, c) = (voice("5", "a"), voice("5", "b"), voice("6", "c"));
    assert!(String::from_utf8_lossy(&a).starts_with("b,a,real,imag\n"));
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn selftest_is_byte_identical_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for (name, threads) in [("one", 1), ("two", 2)] {
        let out = dir.path().join(name);
        let o = run(dir.path(), SMALL_SELFTEST, &["--out", out.to_str().unwrap()], threads);
        // Grids this coarse miss the tolerances of the accuracy criteria.
        assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push(fs::read(out.join("selftest.json")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let summary: serde_json::Value = serde_json::from_slice(&outputs[0]).unwrap();
    assert_eq!(summary["pass"], false);
    assert_eq!(summary["criteria"].as_array().unwrap().len(), 13);
    assert_eq!(summary["params"]["seed"], 3);
}

#[test]
fn coorbit_batch_is_byte_identical_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"{"command": "coorbit", "rep": "translation", "grid": {"b_halfwidth": 512, "n_b": 2048}, "signals": 3, "ps": [1.5, 2], "weight": "poly:1"}"#;
    let mut outputs = Vec::new();
    for (name, threads) in [("one", 1), ("two", 2)] {
        let out = dir.path().join(name);
        let o = run(dir.path(), config, &["--out", out.to_str().unwrap()], threads);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push((fs::read(out.join("coorbit.csv")).unwrap(), fs::read(out.join("coorbit.json")).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    let csv = String::from_utf8(outputs[0].0.clone()).unwrap();
    assert_eq!(csv.lines().count(), 1 + 3 * 2);
}
