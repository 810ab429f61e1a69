//! End-to-end checks of the `pagelab` binary.

use std::path::Path;
use std::process::{Command, Output};

fn pagelab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pagelab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn generate_is_reproducible_and_ingestible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for path in [&a, &b] {
        let out = pagelab(&[
            "generate",
            "--alpha",
            "1.0",
            "--m",
            "4",
            "--n",
            "10",
            "--seed",
            "7",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let ta = std::fs::read(&a).unwrap();
    let tb = std::fs::read(&b).unwrap();
    assert_eq!(ta, tb, "same config must produce identical bytes");
    let text = String::from_utf8(ta).unwrap();
    assert!(text.starts_with("# pagelab generate"));
    let values: Vec<u32> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.parse().unwrap())
        .collect();
    assert_eq!(values.len(), 10);
    assert!(values.iter().all(|&v| (1..=4).contains(&v)));

    // replay through simulate
    let out = pagelab(&[
        "simulate",
        "--trace",
        a.to_str().unwrap(),
        "--k",
        "2",
        "--policies",
        "lru,fifo,belady",
    ]);
    let text = stdout_of(&out);
    assert_eq!(text.lines().count(), 4); // header + 3 rows
    assert!(text.starts_with("policy,"));
}

#[test]
fn generate_scales_to_a_million_requests() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.txt");
    let out = pagelab(&[
        "generate",
        "--alpha",
        "1.0",
        "--m",
        "100",
        "--n",
        "1000000",
        "--seed",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 1_000_001); // header + requests

    let trace = pagelab::fit::ingest_trace(&path).unwrap();
    assert_eq!(trace.total, 1_000_000);
    assert!(trace.m <= 100);
}

#[test]
fn roe_of_belady_is_one() {
    let out = pagelab(&[
        "roe",
        "--uniform",
        "--m",
        "4",
        "--k",
        "2",
        "--n",
        "1000",
        "--trials",
        "30",
        "--seed",
        "3",
        "--policies",
        "belady",
        "--format",
        "jsonl",
    ]);
    let text = stdout_of(&out);
    let row: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(row["roe"], serde_json::json!(1.0));
}

#[test]
fn unknown_policy_is_a_usage_error() {
    let out = pagelab(&[
        "roe",
        "--uniform",
        "--m",
        "4",
        "--k",
        "2",
        "--n",
        "1000",
        "--trials",
        "30",
        "--seed",
        "3",
        "--policies",
        "lruu",
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown policy"));
}

#[test]
fn bounds_row_matches_hand_value_and_k_guard() {
    let out = pagelab(&[
        "bounds",
        "--uniform",
        "--m",
        "16",
        "--k",
        "8",
        "--format",
        "jsonl",
    ]);
    let text = stdout_of(&out);
    let row: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    let lru = row["bound_lru"].as_f64().unwrap();
    assert!((lru - 16.0 * 13.0 / 6.0).abs() < 1e-6);

    let out = pagelab(&["bounds", "--uniform", "--m", "16", "--k", "7"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("k must be >= 8"), "stderr: {err}");
    assert!(err.contains("rounded conservatively"), "stderr: {err}");
}

#[test]
fn bounds_certificate_for_power_law() {
    let out = pagelab(&[
        "bounds", "--alpha", "1.0", "--m", "64", "--k", "8", "--format", "jsonl",
    ]);
    let text = stdout_of(&out);
    let row: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    let cert = row["certificate"].as_f64().unwrap();
    assert!((cert - (2.0 - 11f64.ln() / 4f64.ln())).abs() < 1e-9);
}

#[test]
fn empty_sweep_grid_emits_header_only() {
    let out = pagelab(&["sweep", "--alphas", "", "--seed", "1"]);
    let text = stdout_of(&out);
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("alpha,kappa,k,"));
}

#[test]
fn small_sweep_passes_and_is_deterministic() {
    let run = || {
        stdout_of(&pagelab(&[
            "sweep", "--alphas", "1.0", "--kappas", "1", "--ks", "8", "--n", "5000", "--trials",
            "30", "--seed", "9",
        ]))
    };
    let a = run();
    assert_eq!(a, run(), "sweep output must be byte-identical per seed");
    let row = a.lines().nth(1).unwrap();
    assert!(row.ends_with(",true"), "row: {row}");
}

#[test]
fn demo_rejects_unknown_name() {
    let out = pagelab(&["demo", "nonsense", "--k", "4", "--seed", "2"]);
    assert!(!out.status.success());
}

#[test]
fn roe_bootstrap_flag_changes_only_the_stderr() {
    let base = [
        "roe",
        "--alpha",
        "1.0",
        "--m",
        "8",
        "--k",
        "2",
        "--n",
        "1000",
        "--trials",
        "30",
        "--seed",
        "3",
        "--policies",
        "lru",
        "--format",
        "jsonl",
    ];
    let delta = stdout_of(&pagelab(&base));
    let mut with_boot = base.to_vec();
    with_boot.extend(["--bootstrap", "200"]);
    let boot = stdout_of(&pagelab(&with_boot));
    let d: serde_json::Value = serde_json::from_str(delta.lines().next().unwrap()).unwrap();
    let b: serde_json::Value = serde_json::from_str(boot.lines().next().unwrap()).unwrap();
    assert_eq!(d["roe"], b["roe"]);
    assert_ne!(d["stderr"], b["stderr"]);
    assert!(b["stderr"].as_f64().unwrap() > 0.0);
}

#[test]
fn sweep_grid_file_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.json");
    std::fs::write(&grid, r#"{"alphas":[1.0],"kappas":[1.0],"ks":[8]}"#).unwrap();
    let out = pagelab(&[
        "sweep",
        "--grid-file",
        grid.to_str().unwrap(),
        "--n",
        "5000",
        "--trials",
        "30",
        "--seed",
        "9",
    ]);
    let text = stdout_of(&out);
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().starts_with("1.0,1.0,8,16,"));
}

#[test]
fn fit_round_trips_on_generated_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.txt");
    let out = pagelab(&[
        "generate",
        "--alpha",
        "0.9",
        "--m",
        "50",
        "--n",
        "30000",
        "--seed",
        "11",
        "--out",
        trace.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let prefix = dir.path().join("curves");
    let out = pagelab(&[
        "fit",
        "--trace",
        trace.to_str().unwrap(),
        "--model",
        "both",
        "--out-prefix",
        prefix.to_str().unwrap(),
        "--format",
        "jsonl",
    ]);
    let text = stdout_of(&out);
    let rows: Vec<serde_json::Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 2);
    let pl = &rows[0];
    let mc = &rows[1];
    assert_eq!(pl["model"], "powerlaw");
    assert_eq!(mc["model"], "multicore");
    let alpha = pl["alpha"].as_f64().unwrap();
    assert!((alpha - 0.9).abs() < 0.15, "alpha {alpha}");
    assert!(mc["ks"].as_f64().unwrap() <= pl["ks"].as_f64().unwrap() + 1e-6);
    for suffix in [
        "curves_powerlaw_data.dat",
        "curves_powerlaw_model.dat",
        "curves_multicore_data.dat",
        "curves_multicore_model.dat",
    ] {
        assert!(Path::new(dir.path()).join(suffix).exists(), "{suffix}");
    }

    let out = pagelab(&["fit", "--trace", "/nonexistent/x.txt"]);
    assert!(!out.status.success());
}

#[test]
fn phases_records_are_printed() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.txt");
    std::fs::write(&trace, "1\n2\n1\n3\n4\n").unwrap();
    let out = pagelab(&[
        "phases",
        "--trace",
        trace.to_str().unwrap(),
        "--k",
        "2",
        "--decomposition",
        "marking",
    ]);
    let text = stdout_of(&out);
    assert!(text.lines().nth(1).unwrap().starts_with("0 3 true 2"));
}
