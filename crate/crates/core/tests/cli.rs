use std::process::Command;

use ssarc::cli::{exit, main_with_args, read_csv};
use ssarc::SolverStatus;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = main_with_args(std::iter::once("ssarc").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn without_cpu_column(csv: &str) -> String {
    csv.lines()
        .map(|l| {
            let mut cells: Vec<&str> = l.split(',').collect();
            cells.remove(4);
            cells.join(",")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn csv_run_then_compare() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("runs.csv");
    let (code, csv, _) = run(&["run", "BOOTH", "HS28", "MARATOS", "--format", "csv"]);
    assert_eq!(code, exit::OK);
    let records = read_csv(csv.as_bytes()).unwrap();
    assert_eq!(records.iter().map(|r| r.problem.as_str()).collect::<Vec<_>>(), ["BOOTH", "HS28", "MARATOS"]);
    assert!(records.iter().all(|r| r.status == SolverStatus::Converged && r.res <= 1e-8));
    std::fs::write(&path, &csv).unwrap();

    let (code, table, _) = run(&["compare", "--input", path.to_str().unwrap()]);
    assert_eq!(code, exit::OK, "{table}");
    assert!(table.contains("MARATOS"));
}

#[test]
fn json_output_round_trips_through_compare() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("runs.json");
    let (code, json, _) = run(&["run", "HS6", "--format", "json"]);
    assert_eq!(code, exit::OK);
    std::fs::write(&path, json).unwrap();
    let (code, _, err) = run(&["compare", "--input", path.to_str().unwrap()]);
    assert_eq!(code, exit::OK, "{err}");
}

#[test]
fn trace_has_one_line_per_trial() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.jsonl");
    let (code, csv, _) = run(&["run", "BT3", "--format", "csv", "--trace", path.to_str().unwrap()]);
    assert_eq!(code, exit::OK);
    let record = &read_csv(csv.as_bytes()).unwrap()[0];
    let trace = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<serde_json::Value> = trace.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len() + 1, record.nif);
    assert!(lines.iter().all(|l| l["problem"] == "BT3"));
    assert_eq!(lines.iter().filter(|l| l["accepted"] == true).count(), record.nit);
}

#[test]
fn repeated_runs_are_identical_apart_from_timing() {
    let args = ["run", "HS40", "HS47", "BT11", "--format", "csv"];
    let (_, first, _) = run(&args);
    let (_, second, _) = run(&args);
    assert_eq!(without_cpu_column(&first), without_cpu_column(&second));
}

#[test]
fn looser_tolerance_never_needs_more_iterations() {
    let (_, tight, _) = run(&["run", "HS6", "--format", "csv"]);
    let (_, loose, _) = run(&["run", "HS6", "--format", "csv", "--epsilon", "1e-4"]);
    let tight = &read_csv(tight.as_bytes()).unwrap()[0];
    let loose = &read_csv(loose.as_bytes()).unwrap()[0];
    assert_eq!(loose.status, SolverStatus::Converged);
    assert!(loose.res <= 1e-4);
    assert!(loose.nit <= tight.nit);
}

#[test]
fn iteration_cap_reports_not_converged() {
    let (code, csv, _) = run(&["run", "HS6", "--format", "csv", "--max-outer", "1"]);
    assert_eq!(code, exit::NOT_CONVERGED);
    assert_eq!(read_csv(csv.as_bytes()).unwrap()[0].status, SolverStatus::IterationCap);
}

#[test]
fn bad_input_is_a_usage_error() {
    assert_eq!(run(&["run", "NOSUCH"]).0, exit::USAGE);
    assert_eq!(run(&["run", "HS6", "--eta1", "0.9", "--eta2", "0.5"]).0, exit::USAGE);
    assert_eq!(run(&["compare", "--input", "/nonexistent/runs.csv"]).0, exit::USAGE);
    assert_eq!(run(&["frobnicate"]).0, exit::USAGE);
}

#[test]
fn list_names_every_problem() {
    let (code, out, _) = run(&["list"]);
    assert_eq!(code, exit::OK);
    assert_eq!(out.lines().count(), ssarc::builtin_collection().len());
}

#[test]
fn binary_runs_end_to_end() {
    let out = Command::new(env!("CARGO_BIN_EXE_ssarc"))
        .args(["run", "HS28", "--format", "csv"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let records = read_csv(&out.stdout[..]).unwrap();
    assert_eq!(records[0].status, SolverStatus::Converged);

    let out = Command::new(env!("CARGO_BIN_EXE_ssarc")).args(["run", "--format", "xml"]).output().unwrap();
    assert_eq!(out.status.code(), Some(exit::USAGE));
}
