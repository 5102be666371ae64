use std::path::Path;
use std::process::{Command, Output};

fn coherank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coherank")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn synth(dir: &Path) -> String {
    let out = dir.join("syn");
    let o = coherank(&[
        "synth", "--d1", "2", "--d2", "3", "--cluster", "1:40", "--cluster", "2:30", "--seed", "9", "--out-dir",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out.join("synthetic.csv").to_str().unwrap().to_string()
}

#[test]
fn analyze_recovers_the_planted_group() {
    let dir = tempfile::tempdir().unwrap();
    let data = synth(dir.path());
    let o = coherank(&["analyze", &data, "--format", "csv-borda"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("cohG(1): 70 voters (100.00%)"), "{text}");
    assert!(text.contains("J1 = {A, B}"), "{text}");
    assert!(text.contains("noisyG: 0 voters"), "{text}");
}

#[test]
fn analyze_writes_report_and_maps() {
    let dir = tempfile::tempdir().unwrap();
    let data = synth(dir.path());
    let out = dir.path().join("out");
    let o = coherank(&["analyze", &data, "--format", "csv-borda", "--style", "markdown", "--maps", "--out-dir", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let report = std::fs::read_to_string(out.join("report.md")).unwrap();
    assert!(report.starts_with("# Coherent groups"));
    let first = std::fs::read(out.join("voters.svg")).unwrap();
    assert!(out.join("items.svg").exists());

    let again = dir.path().join("again");
    coherank(&["analyze", &data, "--format", "csv-borda", "--maps", "--out-dir", again.to_str().unwrap()]);
    assert_eq!(first, std::fs::read(again.join("voters.svg")).unwrap());
}

#[test]
fn tca_and_census() {
    let dir = tempfile::tempdir().unwrap();
    let data = synth(dir.path());
    let o = coherank(&["tca", &data, "--format", "csv-borda", "--engine", "ascent", "--restarts", "8", "--seed", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("engine: ascent"), "{text}");
    assert!(text.contains("yes"), "{text}");

    let o = coherank(&["census", &data, "--format", "csv-borda", "--j1", "A,1", "--voters", "0-39"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["-", "{0,1}", "1", "40"]), "{text}");
}

#[test]
fn order_lines_with_sidecar_labels() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("votes.txt");
    let labels = dir.path().join("labels.txt");
    std::fs::write(&data, "# toy\n2 1 0\n2 0 1\n1 2 0\n1 0 2\n").unwrap();
    std::fs::write(&labels, "C\nB\nA\n").unwrap();
    let o = coherank(&["analyze", data.to_str().unwrap(), "--labels", labels.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("3 items: C B A"), "{text}");
    assert!(text.contains("2/3"), "{text}");
}

#[test]
fn map_to_stdout_needs_one_kind() {
    let dir = tempfile::tempdir().unwrap();
    let data = synth(dir.path());
    let o = coherank(&["map", &data, "--format", "csv-borda", "--kind", "items"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("<svg"));
    let o = coherank(&["map", &data, "--format", "csv-borda"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn input_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "0 1 2\n0 1 1\n").unwrap();
    let o = coherank(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    assert_eq!(coherank(&["analyze", "/nonexistent/file"]).status.code(), Some(1));
    assert_eq!(coherank(&["analyze"]).status.code(), Some(1));
    assert_eq!(coherank(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(coherank(&["analyze", bad.to_str().unwrap(), "--min-group-frac", "2"]).status.code(), Some(1));
    assert_eq!(coherank(&["synth", "--d1", "2", "--d2", "2", "--cluster", "9:10"]).status.code(), Some(1));
    assert_eq!(coherank(&["--help"]).status.code(), Some(0));
}
