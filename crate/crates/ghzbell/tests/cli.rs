//! End-to-end checks of the command-line interface: exit codes, report
//! schemas in every format, atomic output files, and seed resolution.

use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut command = Command::new(env!("CARGO_BIN_EXE_ghzbell"));
    command.args(args).env_remove("GHZBELL_SEED");
    for (key, value) in envs {
        command.env(key, value);
    }
    command.output().expect("binary runs")
}

fn stdout_of(args: &[&str], envs: &[(&str, &str)]) -> String {
    let output = run(args, envs);
    assert!(
        output.status.success(),
        "{args:?} exited {:?}: {}",
        output.status.code(),
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout).expect("utf-8 output")
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["superdense", "--n", "0"] as &[&str],
        &["superdense", "--n", "5"],
        &["teleport", "--trials", "0"],
        &["nonsense"],
        &["qis", "--protocol", "seven"],
    ] {
        let output = run(args, &[]);
        assert_eq!(output.status.code(), Some(2), "{args:?}");
    }

    let output = run(&["teleport", "--n", "1"], &[("GHZBELL_SEED", "pineapple")]);
    assert_eq!(output.status.code(), Some(2), "unparseable seed env");
}

#[test]
fn corrupted_family_fails_verification() {
    let output = run(&["verify", "--n", "1", "--corrupt-basis", "--seed", "3"], &[]);
    assert_eq!(output.status.code(), Some(1));

    let report: serde_json::Value =
        serde_json::from_slice(&output.stdout).expect("json report");
    assert_eq!(report["pass"], serde_json::Value::Bool(false));
    let results = report["results"].as_array().unwrap();
    assert!(results
        .iter()
        .any(|e| e["name"].as_str().unwrap().contains("corrupt-bell")
            && e["pass"] == serde_json::Value::Bool(false)));
    assert!(results
        .iter()
        .filter(|e| !e["name"].as_str().unwrap().contains("corrupt-bell"))
        .all(|e| e["pass"] == serde_json::Value::Bool(true)));
}

#[test]
fn reports_carry_the_declared_schema() {
    let text = stdout_of(&["teleport", "--n", "1", "--trials", "2", "--seed", "3"], &[]);
    let report: serde_json::Value = serde_json::from_str(&text).expect("json report");

    assert_eq!(report["command"], "teleport");
    assert_eq!(report["pass"], serde_json::Value::Bool(true));
    let config = &report["config"];
    assert_eq!(config["n"], 1);
    assert_eq!(config["trials"], 2);
    assert_eq!(config["seed"], 3);

    let results = report["results"].as_array().unwrap();
    assert!(!results.is_empty());
    for entry in results {
        assert!(entry["name"].is_string());
        assert!(entry["pass"].is_boolean());
    }
    assert!(results
        .iter()
        .any(|e| e["name"].as_str().unwrap() == "sampled-fidelity"));
}

#[test]
fn csv_lists_one_check_per_row() {
    let args = ["qis", "--protocol", "i", "--enumerate", "--seed", "3"];

    let json_text = stdout_of(&args, &[]);
    let report: serde_json::Value = serde_json::from_str(&json_text).unwrap();
    let count = report["results"].as_array().unwrap().len();

    let mut csv_args = args.to_vec();
    csv_args.extend(["--format", "csv"]);
    let csv = stdout_of(&csv_args, &[]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("name,trial,branch,measured,bound,pass"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), count);
    for row in rows {
        assert_eq!(row.split(',').count(), 6, "row {row}");
    }
    assert!(csv.contains("e0") || csv.contains("e-"), "scientific floats");
}

#[test]
fn text_report_shows_overall_status() {
    let text = stdout_of(
        &["teleport", "--protocol", "fivequbit", "--trials", "2", "--seed", "3", "--format", "text"],
        &[],
    );
    assert!(text.starts_with("ghzbell teleport report\n"));
    assert!(text.contains("config: n="));
    assert!(text.contains("[ok]"));
    assert!(text.contains("overall: PASS"));
}

#[test]
fn superdense_text_includes_the_encoding_table() {
    let text = stdout_of(&["superdense", "--n", "2", "--seed", "3", "--format", "text"], &[]);
    assert!(text.contains("encoding table (bits, operator, state, decomposition):"));
    assert!(text.contains("00000  I"));
    assert!(text.contains("|xi+>|psi+>"));
    assert!(text.contains("Z2Z3X1X2X3"));
}

#[test]
fn output_file_is_written_atomically() {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(format!("report-{}.json", std::process::id()));
    let tmp = dir.join(format!("report-{}.json.tmp", std::process::id()));

    let text = stdout_of(
        &[
            "qis", "--protocol", "two", "--trials", "2", "--seed", "3",
            "--output", path.to_str().unwrap(),
        ],
        &[],
    );
    assert!(text.is_empty(), "nothing on stdout when --output is set");
    assert!(path.exists());
    assert!(!tmp.exists(), "temporary file left behind");

    let body = std::fs::read_to_string(&path).unwrap();
    let report: serde_json::Value = serde_json::from_str(&body).expect("file holds json");
    assert_eq!(report["command"], "qis");
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn env_seed_matches_explicit_seed_and_flag_wins() {
    let args = ["teleport", "--n", "1", "--trials", "3"];
    let with_flag = stdout_of(&[&args[..], &["--seed", "5"]].concat(), &[]);
    let with_env = stdout_of(&args, &[("GHZBELL_SEED", "5")]);
    assert_eq!(with_flag, with_env);

    let flag_nine = stdout_of(&[&args[..], &["--seed", "9"]].concat(), &[]);
    let env_five_flag_nine =
        stdout_of(&[&args[..], &["--seed", "9"]].concat(), &[("GHZBELL_SEED", "5")]);
    assert_eq!(flag_nine, env_five_flag_nine);
    assert_ne!(with_flag, flag_nine, "different seeds change the report");
}
