//! End-to-end behaviour of the `qbgg` binary: report streams, exit codes,
//! seeds and config files.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn qbgg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qbgg"))
        .args(args)
        .env_remove("QBGG_SEED")
        .output()
        .expect("binary runs")
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("JSON line"))
        .collect()
}

fn scratch(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn passing_suite_exits_zero_with_one_line_per_check() {
    let out = qbgg(&["check", "det", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let reports = lines(&out);
    assert!(!reports.is_empty());
    for r in &reports {
        assert_eq!(r["status"], "pass");
        assert_eq!(r["seed"], 3);
        assert!(r["mode"].is_string());
        assert!(r.get("elapsed_ms").is_none(), "wall times only with --timings");
    }
}

#[test]
fn same_seed_gives_byte_identical_streams() {
    let a = qbgg(&["check", "tviaqq", "--seed", "11"]);
    let b = qbgg(&["check", "tviaqq", "--seed", "11"]);
    assert_eq!(a.stdout, b.stdout);
    let c = qbgg(&["check", "tviaqq", "--seed", "12"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn environment_seed_overrides_the_flag() {
    let flag = qbgg(&["check", "tsym", "--seed", "5"]);
    let env = Command::new(env!("CARGO_BIN_EXE_qbgg"))
        .args(["check", "tsym", "--seed", "9"])
        .env("QBGG_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(flag.stdout, env.stdout);
}

#[test]
fn timings_are_opt_in() {
    let out = qbgg(&["check", "comm", "--timings"]);
    assert!(lines(&out).iter().all(|r| r["elapsed_ms"].is_u64()));
}

#[test]
fn usage_errors_exit_two() {
    // Unknown suite, inadmissible block size, non-dominant weight, float suite without the flag.
    for args in [
        vec!["check", "nonsense"],
        vec!["check", "bgg", "--alg", "A", "--n", "2", "--a", "2", "--t", "1"],
        vec!["check", "bgg", "--alg", "A", "--n", "2", "--t", "1/2"],
        vec!["check", "oracle"],
        vec!["check", "det", "--n", "3", "--kind", "bogus"],
    ] {
        let out = qbgg(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn single_checks_select_one_family() {
    let out = qbgg(&["check", "qq", "--n", "3", "--subset", "1", "--i", "2", "--j", "3", "--N", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let reports = lines(&out);
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0]["check"], "qq");
    let out = qbgg(&["check", "tviaqq", "--alg", "D", "--K", "6", "--index", "2", "--t", "2/5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(lines(&out).len(), 1);
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let cfg = scratch("det.toml");
    std::fs::write(&cfg, "suite = \"det\"\nkind = \"qi\"\nn = 3\nsubset = \"1,2\"\nN = 1\nseed = 4\n").unwrap();
    let from_config = qbgg(&["check", "--config", cfg.to_str().unwrap()]);
    assert_eq!(from_config.status.code(), Some(0));
    let reports = lines(&from_config);
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0]["seed"], 4);
    assert_eq!(reports[0]["family"], "A(n=3)-qi(I={1,2})");

    let overridden = qbgg(&["check", "--config", cfg.to_str().unwrap(), "--subset", "2,3", "--seed", "8"]);
    let reports = lines(&overridden);
    assert_eq!(reports[0]["seed"], 8);
    assert_eq!(reports[0]["family"], "A(n=3)-qi(I={2,3})");

    std::fs::write(&cfg, "suite = \"det\"\nbackend = \"float-oracle\"\n").unwrap();
    assert_eq!(qbgg(&["check", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn reports_can_go_to_a_file() {
    let path = scratch("limit.jsonl");
    let _ = std::fs::remove_file(&path);
    let out = qbgg(&["check", "limit", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().count() >= 8);
    assert_eq!(text, String::from_utf8(qbgg(&["check", "limit"]).stdout).unwrap());
}

#[test]
fn char_and_trace_commands_print_json() {
    let out = qbgg(&["char", "--alg", "C", "--r", "2", "--t", "1", "--tau", "2,3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = &lines(&out)[0];
    // Highest weight (1,1) of sp_4: weights ±e₁±e₂ and 0, so 6 + 1/6 + 2/3 + 3/2 + 1.
    assert_eq!(v["value"], "28/3");

    let out = qbgg(&["trace", "--alg", "A", "--n", "2", "--family", "finite", "--t", "1", "--tau", "2,7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = &lines(&out)[0];
    let op = &v["terms"][0]["operator"];
    assert_eq!(op["N"], 1);
    assert_eq!(op["K"], 2);
    assert!(op["coeffs"]["x^1"].is_array());
}

#[test]
fn list_names_every_suite() {
    let out = qbgg(&["list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for suite in ["rtt", "lie", "laxfac", "limit", "bgg", "tviaqq", "qq", "det", "comm", "tsym", "vanish", "chars", "qweyl", "twistconj", "oracle"] {
        assert!(text.contains(&format!("check {suite}")), "{suite} missing from the index");
    }
}

#[test]
fn oracle_suite_runs_with_the_flag() {
    let out = qbgg(&["check", "oracle", "--oracle"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(lines(&out).iter().any(|r| r["check"] == "oracle-trace"));
}
