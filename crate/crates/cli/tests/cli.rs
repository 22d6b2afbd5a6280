use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sha2::{Digest, Sha256};

fn oscequiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oscequiv")).args(args).output().expect("binary runs")
}

fn scenario(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name).display().to_string()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn hashes(root: &Path) -> BTreeMap<PathBuf, String> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let digest = Sha256::digest(std::fs::read(&path).unwrap());
                let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
                out.insert(path.strip_prefix(root).unwrap().to_path_buf(), hex);
            }
        }
    }
    out
}

#[test]
fn unknown_mode_exits_2_and_names_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.toml", "name = \"x\"\nmode = \"foo\"\n");
    let out = oscequiv(&["run", &cfg, "--check-only"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.toml:2") && err.contains("`mode`") && err.contains("foo"), "{err}");
}

#[test]
fn negative_horizon_message() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "h.toml", "name = \"x\"\nmode = \"classical-equivalence\"\nhorizon = -1\n[field]\nb3 = 1\n");
    let out = oscequiv(&["run", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("horizon must be positive"));
}

#[test]
fn missing_file_is_config_error() {
    let out = oscequiv(&["run", "/nonexistent/scenario.toml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failed_check_exits_1() {
    let out = oscequiv(&["run", &scenario("hill_constant.toml"), "--check-only", "--tolerance-scale", "1e-12"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL constant.trace"));
}

#[test]
fn check_only_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = oscequiv(&["run", &scenario("case2.toml"), "--check-only", "--out-dir", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(!out_dir.exists());
}

#[test]
fn reports_sorted_by_scenario_name() {
    let out = oscequiv(&[
        "run",
        &scenario("mathieu.toml"),
        &scenario("case2.toml"),
        &scenario("hill_constant.toml"),
        "--check-only",
        "--threads",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    let order: Vec<&str> = stdout.lines().filter_map(|l| l.strip_prefix("scenario ")).map(|l| l.split(' ').next().unwrap()).collect();
    assert_eq!(order, ["case2", "hill-constant", "mathieu"]);
}

#[test]
fn duplicate_names_rejected() {
    let out = oscequiv(&["run", &scenario("case2.toml"), &scenario("case2.toml"), "--check-only"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn artifacts_are_bit_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let configs = [
        scenario("case1.toml"),
        scenario("case2.toml"),
        scenario("mathieu.toml"),
        scenario("classical_magnetic.toml"),
        scenario("eigenstates.toml"),
    ];
    let mut runs = Vec::new();
    for (i, threads) in [(0, "1"), (1, "4")] {
        let out_dir = dir.path().join(format!("run{i}"));
        let mut args = vec!["run"];
        args.extend(configs.iter().map(String::as_str));
        args.extend(["--out-dir", out_dir.to_str().unwrap(), "--threads", threads]);
        let out = oscequiv(&args);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
        runs.push(hashes(&out_dir));
    }
    assert!(runs[0].len() >= 15, "{:?}", runs[0].keys());
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn fuzz_corpus_parses_without_panic() {
    let corpus = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus/parse_scenario");
    let mut accepted = 0;
    for entry in std::fs::read_dir(corpus).unwrap() {
        let bytes = std::fs::read(entry.unwrap().path()).unwrap();
        let text = String::from_utf8_lossy(&bytes);
        accepted += usize::from(oscequiv_cli::parse_scenario_str(&text, "seed.toml").is_ok());
    }
    // the nine shipped scenarios parse, the malformed seeds do not
    assert_eq!(accepted, 9);
}
