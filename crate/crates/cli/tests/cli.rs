use std::process::{Command, Output};

use serde_json::Value;

fn superchsh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superchsh"))
        .args(args)
        .env_remove("SUPERCHSH_SEED")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

const SMALL: [&str; 4] = ["--restarts", "3", "--max-iters", "300"];

#[test]
fn play_defaults_to_published_parameters() {
    let v = json_of(&superchsh(&["play"]));
    for key in ["map", "params", "tables", "p_win", "feasible", "seed", "version"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["map"], "rogers");
    assert!(v["seed"].is_null());
    let p = v["p_win"].as_f64().unwrap();
    assert!((0.9245..=0.9285).contains(&p), "{p}");
    assert_eq!(v["feasible"], true);
    assert_eq!(v["tables"].as_array().unwrap().len(), 4);
}

#[test]
fn play_zero_dewitt_is_three_quarters() {
    let v = json_of(&superchsh(&["play", "--map", "dewitt", "--params", "zero"]));
    assert!((v["p_win"].as_f64().unwrap() - 0.75).abs() < 1e-12);
}

#[test]
fn play_overrides_and_parameter_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("params.json");
    let base = json_of(&superchsh(&["play", "--set", "q=-1.0"]));
    assert_eq!(base["params"]["q"], -1.0);
    std::fs::write(&path, serde_json::to_string(&base["params"]).unwrap()).unwrap();
    let again = json_of(&superchsh(&["play", "--params", path.to_str().unwrap()]));
    assert_eq!(base["p_win"], again["p_win"]);
}

#[test]
fn bad_parameters_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\"p\": 1.0").unwrap();
    let extra = dir.path().join("extra.json");
    let mut v = json_of(&superchsh(&["play"]))["params"].clone();
    v["zeta"] = 1.0.into();
    std::fs::write(&extra, v.to_string()).unwrap();
    for args in [
        vec!["play", "--params", broken.to_str().unwrap()],
        vec!["play", "--params", extra.to_str().unwrap()],
        vec!["play", "--params", "/nonexistent/params.json"],
        vec!["play", "--set", "zeta=1"],
        vec!["play", "--set", "p=nan"],
        vec!["play", "--set", "p"],
        vec!["play", "--map", "trig"],
        vec!["optimize", "--set", "bogus=1"],
        vec!["optimize", "--set", "penalty_weights=10:1"],
        vec!["maps-demo", "--alpha", "0.5"],
    ] {
        let out = superchsh(&args);
        assert_eq!(code(&out), 2, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn trig_play_requires_opt_in() {
    let v = json_of(&superchsh(&["play", "--map", "trig", "--experimental", "--set", "r1=0.3"]));
    assert_eq!(v["map"], "trig");
    assert_eq!(v["trig_scale"], "rotation");
}

#[test]
fn trig_with_undefined_substitution_exits_3() {
    let out = superchsh(&["play", "--map", "trig", "--experimental", "--set", "r1=0", "--set", "p=0.5"]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn csv_tables() {
    let out = superchsh(&["play", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 37);
    assert_eq!(lines[0], "i,j,alice,bob,probability");
    assert!(lines[1].starts_with("0,0,dot,dot,"));
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = superchsh(&["play", "-o", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["map"], "rogers");
}

#[test]
fn optimize_is_deterministic() {
    let args: Vec<&str> = ["optimize", "--seed", "11"].into_iter().chain(SMALL).collect();
    let a = superchsh(&args);
    let b = superchsh(&args);
    assert_eq!(a.stdout, b.stdout);
    let v = json_of(&a);
    for key in [
        "map",
        "params",
        "tables",
        "p_win",
        "feasible",
        "seed",
        "version",
        "history",
        "best_restart",
        "restarts_run",
        "worst_violation",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["seed"], 11);
    assert_eq!(v["restarts_run"], 3);
    assert_eq!(v["history"].as_array().unwrap().len(), 3);
}

#[test]
fn optimize_seed_from_environment() {
    let args: Vec<&str> = ["optimize"].into_iter().chain(SMALL).collect();
    let out = Command::new(env!("CARGO_BIN_EXE_superchsh"))
        .args(&args)
        .env("SUPERCHSH_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(json_of(&out)["seed"], 5);
}

#[test]
fn optimize_box_is_respected() {
    let args: Vec<&str> = ["optimize", "--box", "0.5"].into_iter().chain(SMALL).collect();
    let v = json_of(&superchsh(&args));
    for k in ["r0", "r1", "s0", "s1"] {
        assert!(v["params"][k].as_f64().unwrap().abs() <= 0.5);
    }
}

#[test]
fn optimize_without_feasible_point_exits_4() {
    let out = superchsh(&["optimize", "--restarts", "1", "--max-iters", "1", "--set", "feasibility_tol=0"]);
    assert_eq!(code(&out), 4, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn baselines_are_labeled() {
    let v = json_of(&superchsh(&["baselines"]));
    let rows = v["baselines"].as_array().unwrap();
    let get = |name: &str| {
        rows.iter()
            .find(|r| r["name"] == name)
            .and_then(|r| r["value"].as_f64())
            .unwrap()
    };
    assert_eq!(get("classical"), 0.75);
    assert!((get("tsirelson") - (std::f64::consts::PI / 8.0).cos().powi(2)).abs() < 1e-15);
    assert!((get("comm-complexity") - (3.0 + 6f64.sqrt()) / 6.0).abs() < 1e-15);
    assert_eq!(get("pr-box"), 1.0);
    assert!(rows.iter().all(|r| r["role"].is_string()));
}

#[test]
fn maps_demo_orders_p0_p1_dot() {
    let v = json_of(&superchsh(&["maps-demo", "--alpha", "0.6", "--beta", "0.8i", "--r", "0.5"]));
    let maps = v["maps"].as_array().unwrap();
    assert_eq!(maps.len(), 3);
    let row = |name: &str| maps.iter().find(|m| m["map"] == name).unwrap().clone();
    let dewitt = row("dewitt");
    assert!((dewitt["p0"].as_f64().unwrap() - 0.36).abs() < 1e-12);
    assert!((dewitt["p1"].as_f64().unwrap() - 0.64).abs() < 1e-12);
    assert_eq!(dewitt["p_dot"].as_f64().unwrap(), 0.0);
    let rogers = row("rogers");
    assert!((rogers["p0"].as_f64().unwrap() - 0.36 * 0.75).abs() < 1e-12);
    assert!((rogers["p_dot"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    let trig = row("trig");
    assert!((trig["p_dot"].as_f64().unwrap() - 0.5f64.cos().powi(2)).abs() < 1e-12);
}

#[test]
fn check_passes() {
    let v = json_of(&superchsh(&["check", "--seed", "3"]));
    assert_eq!(v["passed"], true);
}
