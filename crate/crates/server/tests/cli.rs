//! The `emissor` subcommands, run in-process.

use std::path::{Path, PathBuf};

use clap::Parser;
use emissor::storage::load_scenario;
use emissor_server::cli::{run, Cli};

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(rel)
}

fn copy_dir(src: &Path, dst: &Path) {
    std::fs::create_dir_all(dst).unwrap();
    for entry in std::fs::read_dir(src).unwrap() {
        let entry = entry.unwrap();
        let to = dst.join(entry.file_name());
        if entry.file_type().unwrap().is_dir() {
            copy_dir(&entry.path(), &to);
        } else {
            std::fs::copy(entry.path(), &to).unwrap();
        }
    }
}

/// Exit code and output of one command line.
fn emissor(args: &[&str]) -> (u8, String) {
    let cli = Cli::try_parse_from(std::iter::once("emissor").chain(args.iter().copied())).unwrap();
    let mut out = Vec::new();
    let code = run(cli, &mut out).unwrap();
    (code, String::from_utf8(out).unwrap())
}

fn annotated_copy() -> (tempfile::TempDir, PathBuf) {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("carl-robot");
    copy_dir(&fixture("annotated/carl-robot"), &dir);
    (tmp, dir)
}

#[test]
fn validate_reports_warnings_and_violations() {
    let (code, out) = emissor(&["validate", fixture("carl-robot").to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.ends_with(" warnings, 0 violations\n"), "{out}");
    let warnings: Vec<&str> = out.lines().filter(|l| l.starts_with("warning: ")).collect();
    assert_eq!(warnings.iter().filter(|l| l.contains("duplicate key")).count(), 2);
    assert_eq!(
        warnings
            .iter()
            .filter(|l| l.contains("start 10976 > end 7133, swapped"))
            .count(),
        1
    );
    assert!(out.contains(&format!("carl-robot: {} warnings", warnings.len())));

    let (_tmp, dir) = annotated_copy();
    std::fs::remove_file(dir.join("image/carl-robot-000_frame30_1000.jpg")).unwrap();
    let (code, out) = emissor(&["validate", dir.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(
        out.lines()
            .any(|l| l.starts_with("violation: ") && l.contains("frame30")),
        "{out}"
    );
}

#[test]
fn emit_then_query() {
    let (_tmp, dir) = annotated_copy();
    let d = dir.to_str().unwrap();

    let (code, out) = emissor(&["emit", d, "--dry-run"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("new quads, nothing written\n"), "{out}");
    assert!(!dir.join("rdf").exists());

    let (_, out) = emissor(&["emit", d]);
    assert!(out.contains("statements1.trig"), "{out}");
    let (_, out) = emissor(&["emit", d, "--print"]);
    assert_eq!(out, "0 new quads, nothing written\n");

    let (code, out) = emissor(&[
        "query",
        d,
        "--s",
        "pills",
        "--p",
        "locatedUnder",
        "--t",
        "4000",
        "--source",
        "Leolani",
    ]);
    assert_eq!(code, 0);
    let line = out.lines().next().unwrap();
    let fields: Vec<&str> = line.split('\t').collect();
    assert_eq!(fields[0], "pills_locatedunder_table");
    assert_eq!(fields[1], "pills locatedUnder table");
    assert_eq!(fields[4], "3933");

    let (_, out) = emissor(&["query", d, "--s", "pills", "--t", "1000", "--source", "Carl", "--json"]);
    let results: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(results[0]["polarity"], "NEGATIVE");
    assert_eq!(results[0]["time"], 0);
}

#[test]
fn convert_csv_with_frames_and_context() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("out");
    let (code, out) = emissor(&[
        "convert",
        "csv",
        "--in",
        fixture("carl-robot/text/carl-robot.csv").to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "--frames",
        fixture("carl-robot/image").to_str().unwrap(),
        "--context-from",
        fixture("carl-robot").to_str().unwrap(),
        "--tokens",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("with 6 signals"), "{out}");
    let dir = out_dir.join("carl-robot");
    let bundle = load_scenario(&dir).unwrap().bundle;
    let fixture_ruler = load_scenario(&fixture("carl-robot")).unwrap().bundle.scenario.ruler;
    assert_eq!(bundle.scenario.ruler, fixture_ruler);
    assert!(bundle.validate_with_media(&dir).is_valid());
    let (code, _) = emissor(&["validate", dir.to_str().unwrap()]);
    assert_eq!(code, 0);
}

#[test]
fn convert_frames_only() {
    let tmp = tempfile::tempdir().unwrap();
    let (code, out) = emissor(&[
        "convert",
        "frames",
        "--in",
        fixture("carl-robot/image").to_str().unwrap(),
        "--out",
        tmp.path().to_str().unwrap(),
        "--id",
        "camera",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("with 3 signals"), "{out}");
    let bundle = load_scenario(&tmp.path().join("camera")).unwrap().bundle;
    assert_eq!(bundle.all_signals().count(), 3);
}

#[test]
fn convert_meld_transcript() {
    let tmp = tempfile::tempdir().unwrap();
    let csv = tmp.path().join("dia1.csv");
    std::fs::write(
        &csv,
        "Sr No.,Utterance,Speaker,Emotion,StartTime,EndTime\n\
         1,Hi there.,Ross,joy,\"00:00:01,500\",\"00:00:02,250\"\n\
         2,Oh no.,Rachel,sadness,\"00:00:03,000\",\"00:00:04,100\"\n",
    )
    .unwrap();
    let out_dir = tmp.path().join("out");
    let (code, out) = emissor(&[
        "convert",
        "meld",
        "--in",
        csv.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{out}");
    let dir = out_dir.join("dia1");
    let bundle = load_scenario(&dir).unwrap().bundle;
    assert_eq!(bundle.all_signals().count(), 2);
    assert!(bundle.validate_with_media(&dir).is_valid());
}

#[test]
fn bad_arguments_are_rejected() {
    assert!(Cli::try_parse_from(["emissor", "convert", "csv", "--out", "x"]).is_err());
    assert!(Cli::try_parse_from(["emissor", "query"]).is_err());
    let cli = Cli::try_parse_from(["emissor", "validate", "/definitely/not/here"]).unwrap();
    assert!(run(cli, &mut Vec::new()).is_err());
}
