//! End-to-end runs of the `avd` binary: every subcommand, the exit-code
//! contract, and byte-level reproducibility.

use std::path::Path;
use std::process::{Command, Output};

fn avd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_avd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {:?}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

#[test]
fn gen_writes_parsable_edge_lists_deterministically() {
    let a = avd(&["gen", "--family", "gnp 20 0.4 5"]);
    assert!(a.status.success());
    let b = avd(&["gen", "--family", "gnp 20 0.4 5"]);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let header = text.lines().next().unwrap();
    assert!(header.starts_with("20 "));
}

#[test]
fn color_then_verify_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let graph_path = dir.path().join("g.txt");
    let report_path = dir.path().join("report.json");
    let coloring_path = dir.path().join("coloring.json");

    let gen = avd(&["gen", "--family", "regular 30 6 2", "--out", graph_path.to_str().unwrap()]);
    assert!(gen.status.success());

    let color = avd(&[
        "color",
        "--input",
        graph_path.to_str().unwrap(),
        "--seed",
        "3",
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert!(color.status.success(), "{}", String::from_utf8_lossy(&color.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report["status"], "ok");
    assert_eq!(report["report"]["proper"], true);
    assert_eq!(report["report"]["avd"], true);
    std::fs::write(&coloring_path, report["coloring"].to_string()).unwrap();

    let verify = avd(&[
        "verify",
        "--input",
        graph_path.to_str().unwrap(),
        "--coloring",
        coloring_path.to_str().unwrap(),
    ]);
    assert!(verify.status.success(), "{}", String::from_utf8_lossy(&verify.stderr));
    let verdict = stdout_json(&verify);
    assert_eq!(verdict["status"], "ok");
    assert_eq!(verdict["avd"], true);
}

#[test]
fn verify_rejects_a_tampered_coloring_listing_the_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let graph_path = dir.path().join("c4.txt");
    let coloring_path = dir.path().join("bad.json");
    std::fs::write(&graph_path, "4 4\n0 1\n1 2\n2 3\n3 0\n").unwrap();
    // Proper, but every vertex sees {1, 2}.
    std::fs::write(&coloring_path, r#"{"k": 2, "colors": [1, 2, 1, 2]}"#).unwrap();
    let out = avd(&[
        "verify",
        "--input",
        graph_path.to_str().unwrap(),
        "--coloring",
        coloring_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let verdict = stdout_json(&out);
    assert_eq!(verdict["status"], "error");
    assert_eq!(verdict["proper"], true);
    assert_eq!(verdict["indistinguishable"].as_array().unwrap().len(), 4);
}

#[test]
fn exact_reports_the_five_cycle_landmark() {
    let out = avd(&["exact", "--family", "cycle 5"]);
    assert!(out.status.success());
    let row = stdout_json(&out);
    assert_eq!(row["chi_avd"], 5);
    assert_eq!(row["status"], "exact");
}

#[test]
fn color_refuses_an_isolated_edge_with_an_error_report() {
    let out = avd(&["color", "--family", "path 2"]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["status"], "error");
    assert!(report["error"].as_str().unwrap().contains("isolated edge"));
}

#[test]
fn malformed_family_text_is_a_clean_failure() {
    let out = avd(&["gen", "--family", "rectangle 4"]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["status"], "error");
}

#[test]
fn bounds_subcommands_emit_the_published_values() {
    let out = avd(&["bounds", "local-lemma", "--p", "0.032", "--d", "6"]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert!((report["values"]["value"].as_f64().unwrap() - 0.768).abs() < 1e-12);
    assert_eq!(report["values"]["holds"], 1.0);

    let out = avd(&["bounds", "repair-failure", "--r", "2", "--beta", "300"]);
    let report = stdout_json(&out);
    assert!((report["values"]["bound"].as_f64().unwrap() - 2.0 / 301.0).abs() < 1e-12);

    // Out-of-domain arguments exit 1 with an error payload.
    let out = avd(&["bounds", "chernoff", "--n", "10", "--p", "0.5", "--t", "50"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["status"], "error");
}

#[test]
fn mc_graph_respects_params_overrides_and_seeding() {
    let args = [
        "mc",
        "graph",
        "--family",
        "regular 24 8 3",
        "--trials",
        "40",
        "--seed",
        "12",
        "--params",
        "max_attempts=9",
    ];
    let a = avd(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let b = avd(&args);
    assert_eq!(a.stdout, b.stdout, "same seed, same report");
    let report = stdout_json(&a);
    assert_eq!(report["report"]["trials"], 40);
    assert_eq!(report["report"]["rows"].as_array().unwrap().len(), 6);
    assert_eq!(report["violations"].as_array().unwrap().len(), 0);

    let c = avd(&[
        "mc", "graph", "--family", "regular 24 8 3", "--trials", "40", "--seed", "13",
    ]);
    assert_ne!(a.stdout, c.stdout, "different seed, different report");
}

#[test]
fn color_reports_are_reproducible_byte_for_byte() {
    let args = ["color", "--family", "gnp 60 0.3 8", "--seed", "21"];
    let a = avd(&args);
    let b = avd(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn params_overrides_reach_the_color_report() {
    let out = avd(&[
        "color",
        "--family",
        "gnp 40 0.5 2",
        "--params",
        "max_attempts=7",
        "--params",
        "fresh_colors=11",
    ]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["report"]["params"]["max_attempts"], 7);
    assert_eq!(report["report"]["params"]["fresh_colors"], 11);

    let out = avd(&["color", "--family", "gnp 40 0.5 2", "--params", "nonsense=1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn graph_source_is_required_and_exclusive() {
    // Neither --input nor --family: a usage error from argument parsing.
    let out = avd(&["color"]);
    assert_eq!(out.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    std::fs::write(&path, "3 2\n0 1\n1 2\n").unwrap();
    let out = avd(&["color", "--input", path.to_str().unwrap(), "--family", "cycle 5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_files_and_stdout_carry_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path: &Path = &dir.path().join("out.json");
    let to_file = avd(&["exact", "--family", "cycle 6", "--out", path.to_str().unwrap()]);
    assert!(to_file.status.success());
    let to_stdout = avd(&["exact", "--family", "cycle 6"]);
    assert_eq!(std::fs::read(path).unwrap(), to_stdout.stdout);
}
