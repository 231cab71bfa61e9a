//! End-to-end checks of the binary: exit codes, output determinism, and the
//! report formats.

use std::fs;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_noisy-select"))
}

#[test]
fn run_writes_deterministic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let status = bin()
            .args([
                "run",
                "--algo",
                "ftmin",
                "--n",
                "128",
                "--k",
                "32",
                "--p",
                "0.1",
                "--trials",
                "10",
                "--seed",
                "9",
                "--profile",
                "practical",
                "--core",
                "tournament",
                "--out",
            ])
            .arg(path)
            .status()
            .unwrap();
        assert!(status.success());
    }
    let first = fs::read(&a).unwrap();
    let second = fs::read(&b).unwrap();
    assert!(!first.is_empty());
    assert_eq!(first, second);
    let text = String::from_utf8(first).unwrap();
    assert!(text.starts_with("# version=1\n"));
    assert!(text.contains("trial,element_id,true_rank,success,comparisons,queries,micros"));
}

#[test]
fn seed_env_fallback_matches_flag() {
    let dir = tempfile::tempdir().unwrap();
    let via_flag = dir.path().join("flag.csv");
    let via_env = dir.path().join("env.csv");
    let args = [
        "run", "--algo", "find-min", "--n", "32", "--p", "0.2", "--trials", "5",
    ];
    let status = bin()
        .args(args)
        .args(["--seed", "1234", "--out"])
        .arg(&via_flag)
        .status()
        .unwrap();
    assert!(status.success());
    let status = bin()
        .args(args)
        .env("NOISY_SELECT_SEED", "1234")
        .arg("--out")
        .arg(&via_env)
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(fs::read(&via_flag).unwrap(), fs::read(&via_env).unwrap());
}

#[test]
fn json_format_has_config_trials_summary() {
    let out = bin()
        .args([
            "run", "--algo", "tournament", "--n", "64", "--p", "0.05", "--trials", "4",
            "--format", "json",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"version\": \"1\""));
    assert!(text.contains("\"config\""));
    assert!(text.contains("\"trials\""));
    assert!(text.contains("\"summary\""));
}

#[test]
fn invalid_config_exits_2() {
    // p out of range.
    let status = bin()
        .args(["run", "--algo", "find-min", "--n", "16", "--p", "0.5", "--trials", "2"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    // k >= n.
    let status = bin()
        .args(["run", "--algo", "ftmin", "--n", "16", "--k", "16", "--trials", "2"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    // Missing k for a general-target algorithm.
    let status = bin()
        .args(["run", "--algo", "find-one", "--n", "16", "--trials", "2"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    // gamma override under the paper profile.
    let status = bin()
        .args([
            "run", "--algo", "ftmin", "--n", "16", "--k", "4", "--gamma", "8", "--trials", "2",
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn sweep_single_cell_matches_run_summary_shape() {
    let out = bin()
        .args([
            "sweep",
            "--algo",
            "reduction-tournament",
            "--n",
            "64",
            "--k",
            "16",
            "--p",
            "0.0",
            "--trials",
            "5",
            "--profile",
            "practical",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rows = text.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(
        rows.next().unwrap(),
        "algorithm,n,k,p,trials,successes,success_rate,ci_low,ci_high,\
mean_comparisons,max_comparisons,mean_queries,max_queries,reference"
    );
    let cell = rows.next().unwrap();
    assert!(cell.starts_with("reduction-tournament,64,16,0,5,5,1,"));
}

#[test]
fn sweep_rejects_empty_grid() {
    let status = bin()
        .args(["sweep", "--algo", "ftmin", "--n", "", "--k", "16", "--trials", "2"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}
