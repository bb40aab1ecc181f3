mod common;

use std::path::Path;

use common::fixture;
use emissor::ids::IdMint;
use emissor::model::{AnnotationValue, Bounds, Extra, Face, Modality, ModelError, Person, Signal};
use emissor::segmentation::{
    box_mentions, detect_entities, resolve_identity, token_mentions, tokenize, Detection, Gazetteer, GazetteerError,
    IdentityQuery, PerceptionPlugin, RegistryEntry, Resolution, PERSON_CLASS,
};
use emissor::storage::load_scenario;

fn spans(text: &str) -> Vec<(String, usize, usize)> {
    tokenize(text).into_iter().map(|t| (t.value, t.start, t.stop)).collect()
}

#[test]
fn tokenizer_keeps_contractions_and_counts_characters() {
    assert_eq!(
        spans("I'm   here—ok?"),
        [
            ("I'm".to_string(), 0, 3),
            ("here".to_string(), 6, 10),
            ("—".to_string(), 10, 11),
            ("ok".to_string(), 11, 13),
            ("?".to_string(), 13, 14),
        ]
    );
    assert_eq!(spans("café 42"), [("café".to_string(), 0, 4), ("42".to_string(), 5, 7)]);
    assert!(tokenize(" \t\n").is_empty());
}

#[test]
fn token_mentions_are_deterministic_and_valid() {
    let mut bundle = load_scenario(&fixture("carl-robot")).unwrap().bundle;
    let sig = bundle.signals_in_time_order(|s| s.modality == Modality::Text)[1]
        .id
        .clone();
    let text = bundle.signal(&sig).unwrap().seq.clone().unwrap();
    let a = token_mentions(&sig, &text, "tokenizer", 3933, &mut IdMint::seeded("k"));
    let b = token_mentions(&sig, &text, "tokenizer", 3933, &mut IdMint::seeded("k"));
    assert_eq!(a, b);
    assert_eq!(a.len(), 10);
    let s = bundle.signal_mut(&sig).unwrap();
    s.mentions = a;
    assert!(bundle.validate().is_valid(), "{:?}", bundle.validate());
}

#[test]
fn gazetteer_takes_longest_match_left_to_right() {
    let g = Gazetteer::parse("# names\nCarl\tPERSON\nthe table\tOBJECT\ntable\tFURNITURE\n\n").unwrap();
    assert_eq!(g.len(), 3);
    let tokens = tokenize("Carl looked under the table and the chair.");
    let found = detect_entities(&tokens, &g);
    let labelled: Vec<(&str, (usize, usize))> = found
        .iter()
        .map(|e| (e.label.as_str(), e.char_range(&tokens)))
        .collect();
    assert_eq!(labelled, [("PERSON", (0, 4)), ("OBJECT", (18, 27))]);
    assert!(matches!(
        Gazetteer::parse("Carl PERSON"),
        Err(GazetteerError::Line { line: 1 })
    ));
}

fn face(id: &str, name: &str) -> Face {
    Face {
        instance: Person::new(id, name),
        age: None,
        gender: None,
        faceprob: 0.99,
        extra: Extra::new(),
    }
}

#[test]
fn identities_resolve_by_name_or_face_id() {
    let registry = [
        RegistryEntry::new("http://experiment.my/bc913d64-a597-4876-a3fe-fe47472cd274", "Carl"),
        RegistryEntry::new("robotFriends:lani", "Leolani"),
    ];
    let mut ids = IdMint::seeded("test");
    assert_eq!(
        resolve_identity(IdentityQuery::Name("  leolani "), &registry, &mut ids),
        Resolution::Known("robotFriends:lani".into())
    );
    let known = face("bc913d64-a597-4876-a3fe-fe47472cd274", "");
    assert_eq!(
        resolve_identity(IdentityQuery::Face(&known), &registry, &mut ids),
        Resolution::Known(registry[0].iri.clone())
    );
    let stranger = face("f00", "Bram");
    match resolve_identity(IdentityQuery::Face(&stranger), &registry, &mut ids) {
        Resolution::New(n) => assert_eq!(
            (n.iri.as_str(), n.name.as_str(), n.class.as_str()),
            ("f00", "Bram", PERSON_CLASS)
        ),
        other => panic!("{other:?}"),
    }
    let Resolution::New(n) = resolve_identity(IdentityQuery::Name("Selene"), &registry, &mut IdMint::seeded("x"))
    else {
        panic!("Selene is unknown")
    };
    let Resolution::New(again) = resolve_identity(IdentityQuery::Name("Selene"), &registry, &mut IdMint::seeded("x"))
    else {
        panic!("Selene is unknown")
    };
    assert_eq!(n.iri, again.iri);
}

struct FixedDetector(Vec<Detection>);

impl PerceptionPlugin for FixedDetector {
    fn name(&self) -> &str {
        "fixed_detector"
    }

    fn detect(&self, _: &Signal, _: &Path) -> Result<Vec<Detection>, String> {
        Ok(self.0.clone())
    }
}

#[test]
fn box_mentions_come_from_plugins_and_stay_in_frame() {
    let image = Signal::image("img", "s", Bounds::new(0, 0, 640, 480), 1000, 1033);
    let cup = Detection {
        bounds: Bounds::new(10, 10, 50, 60),
        kind: "object".into(),
        value: AnnotationValue::Label("cup".into()),
    };
    let mentions = FixedDetector(vec![cup.clone()])
        .annotate(&image, Path::new("."), &mut IdMint::seeded("d"))
        .unwrap();
    assert_eq!(mentions.len(), 1);
    let ann = &mentions[0].annotations[0];
    assert_eq!(
        (ann.source.as_str(), ann.timestamp, ann.kind.as_str()),
        ("fixed_detector", 1000, "object")
    );

    let outside = Detection {
        bounds: Bounds::new(600, 400, 700, 480),
        ..cup
    };
    assert!(matches!(
        box_mentions(&image, &[outside], "d", &mut IdMint::Random),
        Err(ModelError::OutOfBounds { .. })
    ));
    let text = Signal::text("t", "s", "hi", 0, 0);
    assert!(box_mentions(&text, &[], "d", &mut IdMint::Random).is_err());
}
