//! Loads a scenario, emits its annotations into a fresh graph and prints TriG.
use std::path::Path;

use emissor::ekg::{emit_from_scenario, serialize_trig, EmitConfig, GraphStore};

fn main() {
    let default = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/annotated/carl-robot");
    let dir = std::env::args().nth(1).map_or(default, Into::into);
    let loaded = emissor::storage::load_scenario(&dir).expect("load scenario");
    let bundle = &loaded.bundle;
    let config = EmitConfig::default();
    let mut store = GraphStore::new();
    let delta = emit_from_scenario(&mut store, bundle, &config).expect("emit");
    eprintln!("{} quads emitted", delta.len());
    print!("{}", serialize_trig(&store));
}
