//! Parses a TriG file into named graphs, writes it back and checks that the
//! quads survive unchanged.
use std::path::Path;

use emissor::ekg::{parse_trig, serialize_trig};

fn main() {
    let default = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/statements2.trig");
    let path = std::env::args().nth(1).map_or(default, Into::into);
    let text = std::fs::read_to_string(&path).expect("read trig");
    let store = parse_trig(&text).expect("parse trig");
    println!("{} quads in {} graphs", store.len(), store.graph_names().len());
    for g in store.graph_names() {
        println!("  {:>4}  {g}", store.graph(g).count());
    }
    let written = serialize_trig(&store);
    let reparsed = parse_trig(&written).expect("reparse");
    println!("round trip equal: {}", reparsed == store);
    println!("stable output: {}", serialize_trig(&reparsed) == written);
}
