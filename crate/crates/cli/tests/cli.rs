use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn electlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_electlab")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(&electlab(args))).expect("valid JSON")
}

fn examples(dir: &Path) -> PathBuf {
    stdout(&electlab(&["examples", "--output-dir", dir.to_str().unwrap()]));
    dir.to_path_buf()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

fn result<'a>(report: &'a Value, system: &str) -> &'a Value {
    report["results"].as_array().unwrap().iter().find(|r| r["system"] == system).unwrap()
}

fn winners(report: &Value, system: &str) -> Vec<String> {
    serde_json::from_value(result(report, system)["winners"].clone()).unwrap()
}

fn scores(report: &Value, system: &str) -> Vec<String> {
    result(report, system)["scores"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["text"].as_str().unwrap().to_string())
        .collect()
}

#[test]
fn table1_minimax_and_cmo() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = examples(tmp.path());
    let file = path(&dir, "table1.txt");
    let rep = json(&["tally", "-i", &file, "-s", "minimax,cmo", "-f", "json"]);
    assert_eq!(winners(&rep, "minimax"), ["D"]);
    assert_eq!(scores(&rep, "minimax"), ["201", "201", "203", "1"]);
    assert_eq!(winners(&rep, "cmo"), ["D"]);
    let lrs = result(&rep, "cmo")["likelihood"].as_array().unwrap();
    assert_eq!(lrs[0]["lr_text"], "1.6594e-15");
    assert!(lrs[1]["lr"].as_f64().unwrap() < 1e-12 && lrs[2]["lr"].as_f64().unwrap() < 1e-12);
    assert!((lrs[3]["lr"].as_f64().unwrap() - 0.9992).abs() <= 5e-4);
    let margins: Vec<(String, String, i64)> = rep["pairwise"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p["candidate"].as_str().unwrap().into(), p["opponent"].as_str().unwrap().into(), p["margin"].as_i64().unwrap()))
        .collect();
    assert!(margins.contains(&("A".into(), "C".into(), -201)));
    assert!(margins.contains(&("B".into(), "C".into(), 203)));
    assert_eq!(rep["condorcet"]["status"], "none");

    let text = stdout(&electlab(&["tally", "-i", &file, "-s", "minimax,cmo"]));
    for needle in ["403", "A vs B: 403 to 202, 0 tied, margin +201", "LR 1.6594e-15", "log-LR", "minimax: D"] {
        assert!(text.contains(needle), "missing {needle:?} in\n{text}");
    }
}

#[test]
fn emitted_fixtures_retally() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = examples(tmp.path());
    let t2 = json(&["tally", "-i", &path(&dir, "table2.txt"), "-s", "minimax", "-f", "json"]);
    assert_eq!(winners(&t2, "minimax"), ["B"]);
    assert_eq!(scores(&t2, "minimax"), ["10", "4", "6", "10"]);
    let cycle = json(&["tally", "-i", &path(&dir, "cycle3.txt"), "-s", "minimax", "-f", "json"]);
    assert_eq!(cycle["condorcet"]["status"], "none");
}

#[test]
fn consistency_fixture_in_one_call() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = examples(tmp.path());
    let (whole, first, second) = (path(&dir, "table3.txt"), path(&dir, "table3_first.txt"), path(&dir, "table3_second.txt"));
    let reps = json(&["tally", "-i", &whole, &first, &second, "-s", "minimax", "-f", "json"]);
    let got: Vec<Vec<String>> = reps.as_array().unwrap().iter().map(|r| winners(r, "minimax")).collect();
    assert_eq!(got, [["C"], ["A"], ["A"]]);
}

#[test]
fn two_candidates_every_system_agrees() {
    let tmp = tempfile::tempdir().unwrap();
    let file = tmp.path().join("two.txt");
    fs::write(&file, "candidates: X, Y\n3: Y>X\n2: X>Y\n").unwrap();
    let rep = json(&["tally", "-i", file.to_str().unwrap(), "-s", "all", "-f", "json"]);
    let results = rep["results"].as_array().unwrap();
    assert_eq!(results.len(), 25);
    for r in results {
        assert_eq!(r["winners"], serde_json::json!(["Y"]), "{}", r["system"]);
    }
    assert!(rep["skipped"].as_array().unwrap().is_empty());
}

#[test]
fn capped_systems_are_skipped_under_all_only() {
    let tmp = tempfile::tempdir().unwrap();
    let file = tmp.path().join("partial.txt");
    fs::write(&file, "candidates: A, B, C\n3: A>B\n2: B=C\n2: C>A>B\n").unwrap();
    let f = file.to_str().unwrap();
    let text = stdout(&electlab(&["tally", "-i", f]));
    assert!(text.contains("skipped dodgson: needs strict full rankings"), "{text}");
    let out = electlab(&["tally", "-i", f, "-s", "dodgson"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("strict full rankings"));
}

#[test]
fn bad_input_is_rejected_with_context() {
    let tmp = tempfile::tempdir().unwrap();
    let file = tmp.path().join("bad.txt");
    fs::write(&file, "candidates: A, B\n1: A>B\n2: A>Q\n").unwrap();
    let out = electlab(&["tally", "-i", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3") && err.contains("unknown candidate `Q`"), "{err}");

    let out = electlab(&["tally", "-i", file.to_str().unwrap(), "-s", "minimax,bogus"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("known systems: minimax"));
    let out = electlab(&["simulate", "--study", "error", "--trials", "ten"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn csv_tally_has_a_fixed_header() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = examples(tmp.path());
    let out = stdout(&electlab(&["tally", "-i", &path(&dir, "table1.txt"), "-s", "cmo", "-f", "csv"]));
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("source,system,candidate,score,winner,lr,log_lr"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn simulate_is_byte_identical_across_runs_and_threads() {
    let tmp = tempfile::tempdir().unwrap();
    let run = |sub: &str, threads: &str| {
        let dir = tmp.path().join(sub);
        let d = dir.to_str().unwrap();
        let args = ["simulate", "--study", "error", "--trials", "200", "--candidates", "5", "--seed", "1", "--output-dir", d, "--threads", threads];
        stdout(&electlab(&args));
        fs::read(dir.join("error-cp-5c.json")).unwrap()
    };
    let a = run("a", "1");
    assert_eq!(a, run("b", "1"));
    assert_eq!(a, run("c", "4"));
    let rep: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(rep["qualifying"], 200);
}

#[test]
fn copeland_always_ties_at_four_candidates() {
    let rep = json(&["simulate", "--study", "tie-rate", "--method", "copeland", "--candidates", "4", "--trials", "300", "--format", "json"]);
    assert_eq!(rep["tie_rate"], 1.0);
    assert_eq!(rep["paradox_trials"], 300);
}

#[test]
fn config_file_drives_a_run() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.cfg");
    fs::write(&cfg, "study = paradox-rate\ncandidates = 5\ntrials = 2000\nformat = csv\n").unwrap();
    let out = stdout(&electlab(&["simulate", "--config", cfg.to_str().unwrap(), "--format", "json"]));
    let rep: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(rep["trials"], 2000);
    let rate = rep["rate"].as_f64().unwrap();
    assert!((0.2..0.32).contains(&rate), "{rate}");
}

#[test]
fn opinion_change_report_is_complete() {
    let rep = json(&["simulate", "--study", "opinion-change", "--trials", "300", "--format", "json"]);
    assert_eq!(rep["study"], "opinion-change");
    assert_eq!(rep["qualifying"], 300);
    let hits = rep["systems"][0]["hits"].as_u64().unwrap();
    assert!(hits > 150, "minimax-t2 recovered {hits} of 300");
    assert_eq!(rep["pairs"][0]["opponent"], "schulze");
}

#[test]
fn plan_writes_every_sub_study() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path().to_str().unwrap();
    let args = ["simulate", "--study", "centrism", "--plan", "--trials", "50", "--output-dir", d, "--format", "csv", "--trial-records"];
    let out = electlab(&args);
    let summary = stdout(&out);
    assert_eq!(summary.matches("centrism study").count(), 3);
    let mut names: Vec<String> = fs::read_dir(d).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(
        names,
        [
            "centrism-all-10c-trials.csv",
            "centrism-all-10c.csv",
            "centrism-cp-10c-trials.csv",
            "centrism-cp-10c.csv",
            "centrism-cp-4c-trials.csv",
            "centrism-cp-4c.csv"
        ]
    );
}
