//! End-to-end runs of the `eprsteer` binary.

use std::process::{Command, Output};

use epr_steering::experiment::PipelineReport;
use epr_steering::{Bound, Chsh, Ensemble, Scheme, Steering};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eprsteer"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn stderr_json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    let line = text.lines().last().expect("an error line");
    serde_json::from_str(line).expect("error line is JSON")
}

#[test]
fn scheme_round_trips_and_validates() {
    for n in ["2", "3", "4", "6", "10"] {
        let v = json(&["scheme", "--n", n]);
        let scheme: Scheme = serde_json::from_value(v["scheme"].clone()).unwrap();
        scheme.validate().unwrap();
        assert_eq!(scheme.n.to_string(), n);
    }
    let csv = run(&["scheme", "--n", "3", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("role,index,x,y,z\n"), "{text}");
    assert_eq!(
        text.lines().filter(|l| l.starts_with("axis,")).count(),
        3,
        "{text}"
    );
}

#[test]
fn bounds_round_trip_and_match_published_values() {
    let v = json(&["bounds", "--n", "6"]);
    let bound: Bound = serde_json::from_value(v.clone()).unwrap();
    bound.validate().unwrap();
    assert!((bound.value - 0.5393).abs() < 5e-5);
    assert!(v["analytic_difference"].as_f64().unwrap().abs() < 1e-10);
}

#[test]
fn honest_steering_on_the_mixed_state_is_zero() {
    let v = json(&["steer", "--mu", "0", "--n", "3"]);
    let report: Steering = serde_json::from_value(v).unwrap();
    report.validate().unwrap();
    assert_eq!(report.s_value, 0.0);
    assert!(!report.violated);
}

#[test]
fn cheat_and_bell_round_trip() {
    let v = json(&["cheat", "--n", "4"]);
    let report: Steering = serde_json::from_value(v.clone()).unwrap();
    report.validate().unwrap();
    let ensemble: Ensemble = serde_json::from_value(v["ensemble"].clone()).unwrap();
    ensemble.validate().unwrap();
    assert!(v["gap"].as_f64().unwrap().abs() < 1e-12);

    let v = json(&["bell", "--mu", "0.6"]);
    let chsh: Chsh = serde_json::from_value(v).unwrap();
    chsh.validate().unwrap();
    assert!((chsh.b_value - 1.697).abs() < 5e-4);
    assert!(!chsh.violated);
}

#[test]
fn state_reports_werner_entanglement() {
    let v = json(&["state", "--mu", "0.45"]);
    let tangle = v["tangle"].as_f64().unwrap();
    assert!((tangle - (0.35f64 / 2.0).powi(2)).abs() < 1e-12);
    assert_eq!(v["regime"], "entangled_unsteerable");
}

#[test]
fn scan_flips_at_the_thresholds() {
    let v = json(&[
        "scan", "--from", "0.5", "--to", "0.8", "--step", "0.01", "--n", "3", "--format", "json",
    ]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 31);
    let first = |key: &str| {
        rows.iter()
            .find(|r| r[key].as_bool().unwrap())
            .map(|r| r["mu"].as_f64().unwrap())
            .unwrap()
    };
    assert!((first("steering_violated") - 0.58).abs() < 1e-9);
    assert!((first("chsh_violated") - 0.71).abs() < 1e-9);

    let csv = run(&["scan", "--from", "0", "--to", "1", "--step", "0.25"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("mu,"), "{text}");
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn mc_is_reproducible_and_validates() {
    let args = [
        "mc",
        "--mu",
        "0.67",
        "--n",
        "3",
        "--shots",
        "2000",
        "--seed",
        "11",
        "--resamples",
        "200",
        "--restarts",
        "3",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(
        a.stdout, b.stdout,
        "same seed must give byte-identical output"
    );
    let report: PipelineReport = serde_json::from_slice(&a.stdout).unwrap();
    report.validate().unwrap();
    assert_eq!(report.seed, 11);
}

#[test]
fn mc_repeats_do_not_depend_on_thread_count() {
    let base = [
        "mc",
        "--mu",
        "0.6",
        "--n",
        "2",
        "--shots",
        "1000",
        "--seed",
        "5",
        "--repeats",
        "3",
        "--resamples",
        "50",
        "--restarts",
        "2",
    ];
    let one = run(&[&base[..], &["--threads", "1"]].concat());
    let two = run(&[&base[..], &["--threads", "2"]].concat());
    assert!(one.status.success() && two.status.success());
    assert_eq!(one.stdout, two.stdout);
    let v: Value = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(v["runs"].as_array().unwrap().len(), 3);
}

#[test]
fn tomo_is_reproducible() {
    let args = [
        "tomo",
        "--mu",
        "0.7",
        "--shots",
        "20000",
        "--seed",
        "4",
        "--resamples",
        "20",
    ];
    let a = run(&args);
    assert_eq!(a.stdout, run(&args).stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v["fidelity_to_target"].as_f64().unwrap() > 0.99);
    assert_eq!(v["rho_hat"].as_array().unwrap().len(), 16);
}

#[test]
fn missing_seed_is_generated_and_reported() {
    let out = run(&["tomo", "--mu", "0.5", "--shots", "1000", "--resamples", "0"]);
    assert!(out.status.success());
    let seed = stderr_json(&out)["generated_seed"]
        .as_u64()
        .expect("seed on stderr");
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"].as_u64(), Some(seed));
}

#[test]
fn invalid_input_exits_with_one_and_a_json_error() {
    for args in [
        &["bounds", "--n", "5"][..],
        &["steer", "--mu", "1.5", "--n", "3"],
        &["state", "--mu", "-0.1"],
        &["frobnicate"],
        &[
            "mc", "--mu", "0.5", "--n", "3", "--shots", "0", "--seed", "1",
        ],
        &["scan", "--step", "0"],
        &["steer", "--mu", "0.5", "--n", "3", "--threads", "0"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        let err = stderr_json(&out);
        assert_eq!(err["error"], "validation", "{args:?}");
        assert!(!err["detail"].as_str().unwrap().is_empty());
    }
}

#[test]
fn help_is_available_for_every_subcommand() {
    for sub in [
        "scheme", "bounds", "state", "steer", "cheat", "bell", "scan", "mc", "tomo",
    ] {
        let out = run(&[sub, "--help"]);
        assert_eq!(out.status.code(), Some(0), "{sub}");
        assert!(
            String::from_utf8_lossy(&out.stdout).contains("Usage"),
            "{sub}"
        );
    }
}

#[test]
fn output_flag_writes_the_file() {
    let path = std::env::temp_dir().join(format!("eprsteer-bounds-{}.json", std::process::id()));
    let out = run(&["bounds", "--n", "3", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert!((v["value"].as_f64().unwrap() - 1.0 / 3f64.sqrt()).abs() < 1e-12);
}
