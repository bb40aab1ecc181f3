mod common;

use std::time::{Duration, Instant};

use common::{fixture, token_table, tree_bytes};
use emissor::model::{AnnotationValue, Modality, ModelWarning, Segment};
use emissor::segmentation::tokenize;
use emissor::storage::{load_scenario, save_scenario, StorageWarning};

const UTTERANCES: [&str; 3] = [
    "I need to take my pills, but I cannot find them.",
    "I found them. They are under the table.",
    "Oh! Got it. Thank you.",
];

#[test]
fn carl_robot_loads_as_shipped() {
    let started = Instant::now();
    let loaded = load_scenario(&fixture("carl-robot")).unwrap();
    let elapsed = started.elapsed();
    let b = &loaded.bundle;

    assert_eq!((b.scenario.ruler.start, b.scenario.ruler.end), (0, 11133));
    assert_eq!(b.scenario.context.agent, "robot_agent");
    let texts = b.signals_in_time_order(|s| s.modality == Modality::Text);
    assert_eq!(texts.len(), 3);
    let seqs: Vec<&str> = texts.iter().map(|s| s.seq.as_deref().unwrap()).collect();
    assert_eq!(seqs, UTTERANCES);
    assert_eq!(texts.iter().map(|s| s.time.start).collect::<Vec<_>>(), [0, 3933, 7133]);
    assert_eq!(b.signals[&Modality::Image].len(), 3);

    let faces: Vec<[u32; 4]> = b
        .signals_in_time_order(|s| s.modality == Modality::Image)
        .iter()
        .flat_map(|s| &s.mentions)
        .filter(|m| {
            m.annotations
                .iter()
                .any(|a| matches!(a.value, AnnotationValue::Face(_)))
        })
        .flat_map(|m| &m.segments)
        .filter_map(|seg| match seg {
            Segment::Box(b) => Some(b.bounds.to_array()),
            _ => None,
        })
        .collect();
    assert_eq!(faces, [[2830, 241, 3034, 521], [2831, 235, 3036, 514]]);

    let first = texts[0];
    let tokens: Vec<(String, u64, u64)> = first
        .mentions
        .iter()
        .filter_map(|m| {
            let AnnotationValue::Token(t) = &m.annotations.first()?.value else {
                return None;
            };
            let Segment::Index(s) = m.segments.first()? else {
                return None;
            };
            Some((t.value.clone(), s.start, s.stop))
        })
        .collect();
    assert_eq!(tokens.first().unwrap(), &("I".to_string(), 0, 1));
    assert_eq!(tokens.last().unwrap(), &(".".to_string(), 47, 48));

    assert!(elapsed < Duration::from_secs(1), "loading took {elapsed:?}");
    assert!(b.validate_with_media(&fixture("carl-robot")).is_valid());
}

#[test]
fn carl_robot_quirks_are_reported() {
    let loaded = load_scenario(&fixture("carl-robot")).unwrap();
    let duplicates: Vec<String> = loaded
        .warnings
        .iter()
        .filter_map(|w| match w {
            StorageWarning::DuplicateKey { pointer, .. } => Some(pointer.clone()),
            _ => None,
        })
        .collect();
    assert_eq!(
        duplicates,
        ["/0/mentions/0/annotations/0/type", "/1/mentions/0/annotations/0/type"]
    );
    let swapped: Vec<_> = loaded
        .warnings
        .iter()
        .filter(|w| matches!(w, StorageWarning::Model(ModelWarning::SwappedTime { .. })))
        .collect();
    assert_eq!(swapped.len(), 1);
    let third = loaded.bundle.signals_in_time_order(|s| s.modality == Modality::Text)[2];
    assert_eq!((third.time.start, third.time.end), (7133, 10976));
    // The last type key of the duplicated pair decides the kind.
    let face = &loaded.bundle.signals[&Modality::Image][0].mentions[0].annotations[0];
    assert_eq!(face.kind, "person");
}

#[test]
fn token_mentions_and_tokenizer_agree_with_oracle() {
    let table = token_table("carl_tokens.tsv");
    let loaded = load_scenario(&fixture("carl-robot")).unwrap();
    let texts = loaded.bundle.signals_in_time_order(|s| s.modality == Modality::Text);
    for (row, utterance) in UTTERANCES.iter().enumerate() {
        let want: Vec<(String, usize, usize)> = table
            .iter()
            .filter(|r| r.0 == row + 1)
            .map(|r| (r.1.clone(), r.2, r.3))
            .collect();
        let got: Vec<(String, usize, usize)> = tokenize(utterance)
            .into_iter()
            .map(|t| (t.value, t.start, t.stop))
            .collect();
        assert_eq!(got, want, "tokenizer on row {}", row + 1);

        let stored: Vec<(String, usize, usize)> = texts[row]
            .mentions
            .iter()
            .filter_map(|m| {
                let AnnotationValue::Token(t) = &m.annotations.first()?.value else {
                    return None;
                };
                let Segment::Index(s) = m.segments.first()? else {
                    return None;
                };
                Some((t.value.clone(), s.start as usize, s.stop as usize))
            })
            .collect();
        assert_eq!(stored, want, "fixture token mentions on row {}", row + 1);
    }
    assert_eq!(table.iter().filter(|r| r.0 == 3).count(), 8);
}

fn round_trip(rel: &str) {
    let original = load_scenario(&fixture(rel)).unwrap();
    let id = original.bundle.scenario.id.clone();
    let tmp = tempfile::tempdir().unwrap();
    let first = tmp.path().join("a").join(&id);
    let second = tmp.path().join("b").join(&id);

    save_scenario(&original.bundle, &first).unwrap();
    let reloaded = load_scenario(&first).unwrap();
    assert_eq!(reloaded.bundle, original.bundle, "{rel}: structure changed");
    assert!(reloaded.warnings.is_empty(), "{rel}: {:?}", reloaded.warnings);

    save_scenario(&reloaded.bundle, &second).unwrap();
    assert_eq!(tree_bytes(&first), tree_bytes(&second), "{rel}: bytes changed");
    let before = tree_bytes(&first);
    save_scenario(&reloaded.bundle, &first).unwrap();
    assert_eq!(tree_bytes(&first), before, "{rel}: saving again changed bytes");
}

#[test]
fn carl_robot_round_trips() {
    round_trip("carl-robot");
}

#[test]
fn annotated_carl_robot_round_trips() {
    round_trip("annotated/carl-robot");
}
