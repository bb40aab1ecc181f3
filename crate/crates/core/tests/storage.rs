mod common;

use std::path::Path;

use common::{copy_dir, fixture};
use emissor::model::{Modality, Violation};
use emissor::storage::{
    load_scenario, parse_signals, read_media_row, resolve_media, save_scenario, signals_to_string, StorageError,
    StorageWarning,
};
use serde_json::json;

fn text_signal(id_key: &str) -> serde_json::Value {
    json!([{
        "@context": "http://emissor.org/jsonldcontext.jsonld",
        id_key: "sig",
        "type": "TextSignal",
        "modality": "text",
        "files": ["text/chat.csv#0"],
        "time": {"type": "TimeSegment", "container_id": "chat", "start": 0, "end": 0},
        "ruler": {"type": "Index", "container_id": "sig", "start": 0, "stop": 2},
        "seq": ["H", "i"],
        "colour": "blue",
        "mentions": [{
            "type": "Mention",
            id_key: "m1",
            "segment": [{"type": "Index", "container_id": "sig", "start": 0, "stop": 2}],
            "annotations": [{
                "type": "emotion",
                "value": {"type": "Label", "value": "JOY"},
                "source": "tester",
                "timestamp": 5,
                "confidence": 0.5
            }]
        }]
    }])
}

#[test]
fn id_spellings_are_equivalent_and_unknown_keys_survive() {
    let file = Path::new("text.json");
    let (plain, _) = parse_signals(&text_signal("id").to_string(), file, Modality::Text).unwrap();
    let (ld, _) = parse_signals(&text_signal("@id").to_string(), file, Modality::Text).unwrap();
    assert_eq!(plain, ld);
    assert_eq!(plain[0].id, "sig");
    assert_eq!(plain[0].mentions[0].id, "m1");
    assert_eq!(plain[0].extra["colour"], "blue");
    assert_eq!(plain[0].mentions[0].annotations[0].extra["confidence"], 0.5);

    let written = signals_to_string(&plain);
    let (again, _) = parse_signals(&written, file, Modality::Text).unwrap();
    assert_eq!(again, plain);
    assert!(written.contains("\"colour\": \"blue\""));
    assert_eq!(signals_to_string(&again), written);
}

#[test]
fn duplicate_keys_keep_the_last_value_with_a_warning() {
    let text = r#"[{"id": "sig", "id": "sig2", "type": "TextSignal", "modality": "text", "files": [],
        "time": {"type": "TimeSegment", "container_id": "chat", "start": 0, "end": 0},
        "ruler": {"type": "Index", "container_id": "sig2", "start": 0, "stop": 0},
        "seq": [], "mentions": []}]"#;
    let (signals, warnings) = parse_signals(text, Path::new("t.json"), Modality::Text).unwrap();
    assert_eq!(signals[0].id, "sig2");
    assert!(matches!(&warnings[..], [StorageWarning::DuplicateKey { pointer, .. }] if pointer == "/0/id"));
}

#[test]
fn malformed_json_reports_its_position() {
    let err = parse_signals("[\n  {\"id\": }\n]", Path::new("t.json"), Modality::Text).unwrap_err();
    match err {
        StorageError::MalformedJson { line, .. } => assert_eq!(line, 2),
        other => panic!("unexpected {other}"),
    }
}

#[test]
fn unknown_segment_type_is_a_schema_violation() {
    let mut doc = text_signal("id");
    doc[0]["mentions"][0]["segment"][0]["type"] = json!("Polygon");
    let err = parse_signals(&doc.to_string(), Path::new("t.json"), Modality::Text).unwrap_err();
    match err {
        StorageError::SchemaViolation { pointer, .. } => {
            assert!(pointer.starts_with("/0/mentions/0/segment/0"), "{pointer}")
        }
        other => panic!("unexpected {other}"),
    }
}

#[test]
fn missing_scenario_file_is_an_error() {
    let tmp = tempfile::tempdir().unwrap();
    assert!(matches!(
        load_scenario(tmp.path()),
        Err(StorageError::MissingScenarioFile(_))
    ));
}

#[test]
fn saving_into_a_folder_with_another_name_is_refused() {
    let loaded = load_scenario(&fixture("carl-robot")).unwrap();
    let tmp = tempfile::tempdir().unwrap();
    let err = save_scenario(&loaded.bundle, &tmp.path().join("elsewhere")).unwrap_err();
    assert!(matches!(err, StorageError::FolderNameMismatch { .. }), "{err}");
}

#[test]
fn media_files_resolve_to_rows_and_images() {
    let dir = fixture("carl-robot");
    let loaded = load_scenario(&dir).unwrap();
    let texts = loaded.bundle.signals_in_time_order(|s| s.modality == Modality::Text);
    let media = resolve_media(texts[1], &dir).unwrap();
    assert_eq!(media.len(), 1);
    let row = media[0].row.as_ref().unwrap();
    assert_eq!(
        (row.speaker.as_str(), row.utterance.as_str(), row.time),
        ("Leolani", "I found them. They are under the table.", 3933)
    );

    let image = &loaded.bundle.signals[&Modality::Image][0];
    let media = resolve_media(image, &dir).unwrap();
    assert!(media[0].path.ends_with("carl-robot-000_frame0_0.jpg"));
    assert!(media[0].row.is_none());

    let csv = dir.join("text/carl-robot.csv");
    assert_eq!(read_media_row(&csv, 2).unwrap().utterance, "Oh! Got it. Thank you.");
    assert!(matches!(
        read_media_row(&csv, 3),
        Err(StorageError::RowOutOfRange { row: 3, rows: 3, .. })
    ));
}

#[test]
fn deleted_media_is_a_violation() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("carl-robot");
    copy_dir(&fixture("carl-robot"), &dir);
    std::fs::remove_file(dir.join("image/carl-robot-000_frame30_1000.jpg")).unwrap();
    let loaded = load_scenario(&dir).unwrap();
    let report = loaded.bundle.validate_with_media(&dir);
    assert!(loaded.bundle.validate().is_valid());
    assert!(matches!(
        &report.violations[..],
        [Violation::MissingMedia { path, .. }] if path.contains("frame30")
    ));
}
