//! Adds a label mention, stacks an entity link on a token, saves the
//! scenario to a temporary folder and prints who is mentioned where.
use std::path::Path;

use emissor::model::{AnnotationValue, EntityLink, IndexSegment, Modality, NewAnnotation, Segment};
use emissor::storage::{load_scenario, save_scenario};

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/annotated/carl-robot");
    let mut bundle = load_scenario(&dir).expect("load scenario").bundle;
    let first = bundle.signals_in_time_order(|s| s.modality == Modality::Text)[0];
    let (signal, text) = (first.id.clone(), first.seq.clone().unwrap_or_default());

    // "my pills" is characters 15..23 of the first utterance.
    let label = NewAnnotation::new("label", AnnotationValue::Label("medication".into()), "example");
    let m = bundle
        .add_mention(
            &signal,
            vec![Segment::Index(IndexSegment::new(&signal, 15, 23))],
            vec![label],
        )
        .expect("add mention");
    println!("added {} over {:?}", m.id, &text[15..23]);

    let rejected = bundle.add_mention(
        &signal,
        vec![Segment::Index(IndexSegment::new(&signal, 40, 400))],
        vec![NewAnnotation::new(
            "label",
            AnnotationValue::Label("x".into()),
            "example",
        )],
    );
    println!("out of bounds: {}", rejected.expect_err("rejected"));

    // The first token of the utterance is "I", spoken by Carl.
    let token = first_token_id(&bundle, &signal);
    let link = NewAnnotation::new(
        "entity",
        AnnotationValue::EntityLink(EntityLink::new("robotFriends:carl")),
        "example",
    );
    let stacked = bundle.stack_annotation(&token, link).expect("stack annotation");
    println!("linked token {token} via {}", stacked.id);

    let out = tempfile::tempdir().expect("temp dir");
    let target = out.path().join(&bundle.scenario.id);
    save_scenario(&bundle, &target).expect("save");
    let reloaded = load_scenario(&target).expect("reload").bundle;
    println!(
        "saved to {}, {} violations",
        target.display(),
        reloaded.validate().violations.len()
    );

    for (identity, entries) in reloaded.coreference_index() {
        println!("{identity}");
        for e in entries {
            println!("  {:<6} t={:<5} {}", e.modality, e.time, e.mention_id);
        }
    }
}

fn first_token_id(bundle: &emissor::model::ScenarioBundle, signal: &str) -> String {
    bundle
        .signal(signal)
        .expect("signal")
        .mentions
        .iter()
        .flat_map(|m| &m.annotations)
        .find_map(|a| match &a.value {
            AnnotationValue::Token(t) => Some(t.id.clone()),
            _ => None,
        })
        .expect("the fixture has tokens")
}
