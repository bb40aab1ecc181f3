//! Finds gazetteer entries in each utterance (longest match first).
use std::path::Path;

use emissor::model::Modality;
use emissor::segmentation::{detect_entities, tokenize, Gazetteer};
use emissor::storage::load_scenario;

const NAMES: &str = "\
# surface<TAB>label
Carl\tPERSON
pills\tOBJECT
my pills\tOBJECT
the table\tOBJECT
table\tFURNITURE
";

fn main() {
    let gazetteer = match std::env::args().nth(1) {
        Some(path) => Gazetteer::load(Path::new(&path)).expect("load gazetteer"),
        None => Gazetteer::parse(NAMES).expect("built-in gazetteer"),
    };
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/carl-robot");
    let bundle = load_scenario(&dir).expect("load scenario").bundle;
    for signal in bundle.signals_in_time_order(|s| s.modality == Modality::Text) {
        let text = signal.seq.as_deref().unwrap_or_default();
        let tokens = tokenize(text);
        println!("{text}");
        for entity in detect_entities(&tokens, &gazetteer) {
            let (start, stop) = entity.char_range(&tokens);
            println!("  [{start}, {stop}) {:<10} {}", entity.label, &text[start..stop]);
        }
    }
}
