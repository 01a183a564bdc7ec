use std::io::Write as _;
use std::process::Command;

use peerstat_cli::{run, EXIT_DATA, EXIT_OK, EXIT_USAGE};
use peerstat_core::format::two;
use serde_json::Value;
use tempfile::NamedTempFile;

const SAMPLE: &str = "\
cpp_fcsm,quality
0.62,3
0.81,3
1.10,3
0.95,3
1.21,4
1.48,4
1.02,4
1.66,4
1.35,4
0.90,4
2.05,5
1.73,5
1.88,5
2.40,5
";

fn data_file(contents: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn invoke(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("peerstat").chain(args.iter().copied()), &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn on_sample(cmd: &str, extra: &[&str]) -> Outcome {
    let f = data_file(SAMPLE);
    let path = f.path().to_str().unwrap().to_owned();
    let mut args = vec![cmd, "--input", &path, "--replicates", "500"];
    args.extend_from_slice(extra);
    invoke(&args)
}

fn json(cmd: &str, extra: &[&str]) -> Value {
    let mut args = vec!["--format", "json"];
    args.extend_from_slice(extra);
    let o = on_sample(cmd, &args);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    serde_json::from_str(&o.stdout).unwrap()
}

fn csv_records(text: &str) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(text.as_bytes())
        .records()
        .collect::<Result<_, _>>()
        .unwrap()
}

#[test]
fn every_subcommand_succeeds_in_every_format() {
    for cmd in ["validate", "table1", "diffs", "correlations", "counterfactual", "figures", "all"] {
        for format in ["text", "csv", "json"] {
            let o = on_sample(cmd, &["--format", format]);
            assert_eq!(o.code, EXIT_OK, "{cmd} {format}: {}", o.stderr);
            assert!(!o.stdout.trim().is_empty(), "{cmd} {format}");
        }
    }
}

#[test]
fn validate_counts() {
    let v = json("validate", &[]);
    assert_eq!(v["total"], 14);
    assert_eq!(v["counts_by_quality"]["3"], 4);
    assert_eq!(v["counts_by_quality"]["4"], 6);
    assert_eq!(v["counts_by_quality"]["5"], 4);
}

#[test]
fn empty_file_is_a_data_error() {
    let f = data_file("");
    let o = invoke(&["validate", "--input", f.path().to_str().unwrap()]);
    assert_eq!(o.code, EXIT_DATA);
    assert!(o.stderr.contains("EmptyInput"), "{}", o.stderr);
    assert!(o.stdout.is_empty());
}

#[test]
fn malformed_line_reports_line_number() {
    let f = data_file("1.0 3\n1.2 4 7\n");
    let o = invoke(&["table1", "--input", f.path().to_str().unwrap()]);
    assert_eq!(o.code, EXIT_DATA);
    assert!(o.stderr.contains("MalformedLine") && o.stderr.contains('2'), "{}", o.stderr);
}

#[test]
fn missing_file_is_a_data_error() {
    let o = invoke(&["validate", "--input", "/nonexistent/peerstat.txt"]);
    assert_eq!(o.code, EXIT_DATA);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(on_sample("table1", &["--no-such-flag"]).code, EXIT_USAGE);
    assert_eq!(invoke(&["table1"]).code, EXIT_USAGE);
    assert_eq!(invoke(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(on_sample("table1", &["--format", "xml"]).code, EXIT_USAGE);
    let bad_level = on_sample("table1", &["--level", "1.5"]);
    assert_eq!(bad_level.code, EXIT_USAGE);
    assert!(bad_level.stderr.contains("InvalidConfig"), "{}", bad_level.stderr);
    assert_eq!(on_sample("figures", &["--bin-width", "0"]).code, EXIT_USAGE);
    assert_eq!(on_sample("diffs", &["--replicates", "0"]).code, EXIT_USAGE);
}

#[test]
fn help_exits_zero() {
    let o = invoke(&["--help"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("table1"));
}

#[test]
fn table1_csv_has_group_rows_and_all() {
    let o = on_sample("table1", &["--format", "csv"]);
    let rows = csv_records(&o.stdout);
    let labels: Vec<&str> = rows.iter().map(|r| &r[0]).collect();
    assert_eq!(labels, ["3", "4", "5", "All"]);
    assert_eq!(&rows[3][1], "14");
}

#[test]
fn csv_and_json_carry_identical_values() {
    let j = json("table1", &[]);
    let o = on_sample("table1", &["--format", "csv"]);
    let rows = csv_records(&o.stdout);
    for (row, obj) in rows.iter().zip(j["rows"].as_array().unwrap()) {
        for (col, key) in [(2, "median"), (3, "mean"), (4, "sd")] {
            assert_eq!(row[col].parse::<f64>().unwrap(), obj[key].as_f64().unwrap());
        }
        assert_eq!(row[5].parse::<f64>().unwrap(), obj["mean_ci"]["low"].as_f64().unwrap());
        assert_eq!(row[6].parse::<f64>().unwrap(), obj["mean_ci"]["high"].as_f64().unwrap());
    }
}

#[test]
fn text_shows_values_rounded_to_two_decimals() {
    let j = json("table1", &[]);
    let text = on_sample("table1", &[]).stdout;
    for obj in j["rows"].as_array().unwrap() {
        let label = match &obj["quality_label"] {
            Value::String(s) => s.clone(),
            v => v.to_string(),
        };
        let line = text
            .lines()
            .find(|l| l.split_whitespace().next() == Some(label.as_str()))
            .unwrap();
        for key in ["median", "mean", "sd"] {
            let shown = two(obj[key].as_f64().unwrap());
            assert!(line.contains(&shown), "{line} lacks {shown}");
        }
    }
}

#[test]
fn correlations_json_shape() {
    let j = json("correlations", &[]);
    assert_eq!(j["n"], 14);
    for key in ["spearman", "adler"] {
        let est = j[key]["estimate"].as_f64().unwrap();
        assert!(est > 0.0 && est <= 1.0);
        let ci = &j[key]["ci"];
        assert!(ci["low"].as_f64().unwrap() <= ci["high"].as_f64().unwrap());
        assert_eq!(ci["replicates_used"], 500);
    }
    assert_eq!(j["spearman"]["method"], "spearman");
    assert_eq!(j["adler"]["method"], "adler");
}

#[test]
fn diffs_include_ratio_of_top_two_groups() {
    let j = json("diffs", &[]);
    let diffs = j["differences"].as_array().unwrap();
    assert_eq!(diffs.len(), 2);
    assert_eq!(diffs[0]["group_lo"], 3);
    assert_eq!(diffs[1]["group_hi"], 5);
    let r = &j["ratio"];
    let expected = r["mean_hi"].as_f64().unwrap() / r["mean_lo"].as_f64().unwrap() - 1.0;
    assert!((r["ratio"].as_f64().unwrap() - expected).abs() < 1e-15);
}

#[test]
fn output_is_reproducible_and_independent_of_workers() {
    let first = on_sample("all", &["--format", "json", "--seed", "9"]).stdout;
    let again = on_sample("all", &["--format", "json", "--seed", "9"]).stdout;
    let one = on_sample("all", &["--format", "json", "--seed", "9", "--workers", "1"]).stdout;
    let many = on_sample("all", &["--format", "json", "--seed", "9", "--workers", "4"]).stdout;
    assert_eq!(first, again);
    assert_eq!(one, many);
    assert_eq!(first, one);
    let other = on_sample("all", &["--format", "json", "--seed", "10"]).stdout;
    assert_ne!(first, other);
}

#[test]
fn swapped_columns_are_noted_on_stderr() {
    let swapped: String = SAMPLE
        .lines()
        .skip(1)
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            format!("{b}\t{a}\n")
        })
        .collect();
    let f = data_file(&swapped);
    let path = f.path().to_str().unwrap();
    let o = invoke(&["validate", "--input", path, "--format", "json"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stderr.starts_with("note:"), "{}", o.stderr);
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["total"], 14);

    let forced = invoke(&["validate", "--input", path, "--columns", "quality-first"]);
    assert_eq!(forced.code, EXIT_OK);
    assert!(forced.stderr.is_empty());
}

#[test]
fn all_csv_has_named_blocks() {
    let o = on_sample("all", &["--format", "csv"]);
    for name in ["validation", "table1", "differences", "ratio", "correlations", "boxplots", "histogram"] {
        assert!(o.stdout.contains(&format!("# {name}\n")), "missing {name}");
    }
}

#[test]
fn histogram_counts_cover_dataset() {
    let j = json("figures", &["--bin-width", "0.5"]);
    let bins = j["histogram"]["bins"].as_array().unwrap();
    let total: u64 = bins
        .iter()
        .flat_map(|b| b["counts"].as_object().unwrap().values())
        .map(|c| c.as_u64().unwrap())
        .sum();
    assert_eq!(total, 14);
    assert_eq!(j["boxplots"].as_array().unwrap().len(), 3);
}

#[test]
fn binary_exit_status() {
    let f = data_file(SAMPLE);
    let ok = Command::new(env!("CARGO_BIN_EXE_peerstat"))
        .args(["counterfactual", "--input", f.path().to_str().unwrap()])
        .output()
        .unwrap();
    assert!(ok.status.success());
    let bad = Command::new(env!("CARGO_BIN_EXE_peerstat"))
        .args(["counterfactual"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
}
