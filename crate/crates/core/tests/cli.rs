//! The command-line surface: exit codes, determinism and the pinned vectors.

use hcburger::cli::{run, REFERENCE_DRAWS, SPLITMIX_DRAWS};
use hcburger::rng::{replica_rng, splitmix64_next};
use rand::RngCore;
use serde_json::Value;
use std::path::PathBuf;
use std::process::Command;

fn call(args: &[&str]) -> (i32, Vec<u8>, String) {
    let argv: Vec<String> = std::iter::once("hcburger").chain(args.iter().copied()).map(String::from).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&argv, &mut out, &mut err);
    (code, out, String::from_utf8(err).unwrap())
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn exit_codes() {
    assert_eq!(call(&["--help"]).0, 0);
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(call(&["sample", "--range", "1:4", "--seed", "1"]).0, 2, "missing p");
    assert_eq!(call(&["sample", "--range", "1:4", "--p", "0.3"]).0, 2, "missing seed");
    assert_eq!(call(&["sample", "--range", "4:1", "--p", "0.3", "--seed", "1"]).0, 2);
    assert_eq!(call(&["sample", "--range", "1:4", "--p", "0.3", "--q", "1", "--seed", "1"]).0, 2);
    assert_eq!(call(&["sample", "--range", "1:4", "--p", "0.7", "--seed", "1"]).0, 1);
    assert_eq!(call(&["reduce", "--word", "HXC"]).0, 2);
    assert_eq!(call(&["renewal", "product", "--lifetime", "det:2", "--indices", "2,4"]).0, 0);
    assert_eq!(call(&["renewal", "product", "--lifetime", "det:2", "--indices", "2,40"]).0, 1);
}

#[test]
fn reduce_displayed_example() {
    let (code, out, _) = call(&["reduce", "--word", "HChFHc"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["orders"], serde_json::json!(["o_c"]));
    assert_eq!(v["burgers"], serde_json::json!(["b_h"]));
}

#[test]
fn sample_file_round_trips_through_reduce() {
    let path = tmp("cli_sample.fkw");
    let p = path.to_str().unwrap();
    assert_eq!(call(&["sample", "--p", "0.3333333333", "--range", "1:16", "--seed", "7", "--out", p]).0, 0);
    let first = std::fs::read(&path).unwrap();
    assert_eq!(call(&["sample", "--p", "0.3333333333", "--range", "1:16", "--seed", "7", "--out", p]).0, 0);
    assert_eq!(first, std::fs::read(&path).unwrap());
    let w = hcburger::word::from_bytes(&first).unwrap();
    assert_eq!((w.start, w.len()), (1, 16));
    let (code, out, _) = call(&["reduce", "--input", p]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_slice(&out).unwrap();
    let r = hcburger::word::reduce(&w);
    assert_eq!(v["orders"].as_array().unwrap().len(), r.orders.len());
    assert_eq!(v["burgers"].as_array().unwrap().len(), r.burgers.len());
}

#[test]
fn config_supplies_defaults_and_flags_win() {
    let cfg = tmp("cli_config.json");
    std::fs::write(&cfg, r#"{"p": 0.25, "seed": 3, "samples": 200, "thresholds": "16:64"}"#).unwrap();
    let c = cfg.to_str().unwrap();
    let (code, a, err) = call(&["tails", "--stat", "J", "--config", c]);
    assert_eq!(code, 0, "{err}");
    let (_, b, _) = call(&["tails", "--stat", "J", "--p", "0.25", "--seed", "3", "--samples", "200", "--thresholds", "16:64"]);
    assert_eq!(a, b);
    let (_, c2, _) = call(&["tails", "--stat", "J", "--config", c, "--seed", "4"]);
    assert_ne!(a, c2);
    std::fs::write(&cfg, r#"{"p": 0.25, "colour": 1}"#).unwrap();
    assert_eq!(call(&["tails", "--stat", "J", "--config", c]).0, 2);
}

#[test]
fn selftest_pins_reference_draws() {
    let data: Value = serde_json::from_str(include_str!("data/reference_draws.json")).unwrap();
    let hex = |v: &Value| u64::from_str_radix(v.as_str().unwrap(), 16).unwrap();
    let pinned: Vec<u64> = data["draws"].as_array().unwrap().iter().map(hex).collect();
    assert_eq!(pinned, REFERENCE_DRAWS);
    let mut rng = replica_rng(0, 0);
    assert_eq!((0..3).map(|_| rng.next_u64()).collect::<Vec<_>>(), pinned);
    let split: Vec<u64> = data["splitmix64_from_zero"].as_array().unwrap().iter().map(hex).collect();
    assert_eq!(split, SPLITMIX_DRAWS);
    let mut state = 0;
    assert_eq!([splitmix64_next(&mut state), splitmix64_next(&mut state)], SPLITMIX_DRAWS);

    let (code, out, _) = call(&["selftest"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["ok"], Value::Bool(true));
}

#[test]
fn binary_is_deterministic_across_workers() {
    let exe = env!("CARGO_BIN_EXE_hcburger");
    let go = |workers: &str| {
        let o = Command::new(exe)
            .args(["loops", "--p", "0.3", "--seed", "9", "--n", "200", "--samples", "20", "--workers", workers])
            .output()
            .unwrap();
        assert!(o.status.success());
        o.stdout
    };
    let a = go("1");
    assert!(!a.is_empty());
    assert_eq!(a, go("8"));
    let bad = Command::new(exe).args(["walk"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
