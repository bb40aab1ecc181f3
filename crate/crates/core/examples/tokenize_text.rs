//! Tokenizes the utterances of a scenario, attaches the tokens as mentions
//! and checks that the result still validates.
use std::path::Path;

use emissor::ids::IdMint;
use emissor::model::Modality;
use emissor::segmentation::{token_mentions, tokenize};
use emissor::storage::load_scenario;

fn main() {
    let default = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/carl-robot");
    let dir = std::env::args().nth(1).map_or(default, Into::into);
    let mut bundle = load_scenario(&dir).expect("load scenario").bundle;

    let texts: Vec<(String, i64, String)> = bundle
        .signals_in_time_order(|s| s.modality == Modality::Text)
        .iter()
        .map(|s| (s.id.clone(), s.time.start, s.seq.clone().unwrap_or_default()))
        .collect();
    for (id, time, text) in &texts {
        println!("{text}");
        for t in tokenize(text) {
            println!("  {:>3}..{:<3} {}", t.start, t.stop, t.value);
        }
        // Seeded ids make repeated runs produce the same mentions.
        let mentions = token_mentions(id, text, "tokenizer", *time, &mut IdMint::seeded(id.as_str()));
        bundle.signal_mut(id).expect("signal").mentions = mentions;
    }
    let report = bundle.validate();
    println!("{} violations after tokenizing", report.violations.len());
}
