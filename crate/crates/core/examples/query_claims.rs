//! Emits the annotated scenario and asks where the pills are, as Carl saw it
//! at 1s and as Leolani saw it at 4s, then lists conflicting claims.
use std::path::Path;

use emissor::ekg::{detect_conflicts, emit_from_scenario, query, ClaimQuery, EmitConfig, GraphStore, Term};
use emissor::storage::load_scenario;

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/annotated/carl-robot");
    let bundle = load_scenario(&dir).expect("load scenario").bundle;
    let mut store = GraphStore::new();
    emit_from_scenario(&mut store, &bundle, &EmitConfig::default()).expect("emit");

    let pills = ClaimQuery::new().subject("pills").predicate("locatedUnder");
    for (who, at) in [("Carl", 1000), ("Leolani", 4000)] {
        println!("{who} at {at} ms:");
        for r in query(&store, &pills.clone().source(who).at(at)) {
            println!(
                "  {} {} {}  {}  (t={})",
                r.subject.local_name(),
                r.predicate.local_name(),
                short(&r.object),
                r.perspective.suffix(),
                r.time.map_or("-".into(), |t| t.to_string())
            );
        }
    }

    for group in detect_conflicts(&store, None, None) {
        println!(
            "conflict on {} {}:",
            group.subject.local_name(),
            group.predicate.local_name()
        );
        for e in &group.entries {
            let source = e.source.as_ref().map_or("-", |s| s.local_name());
            println!("  {source:<8} {} {}", short(&e.object), e.polarity().as_str());
        }
    }
}

fn short(term: &Term) -> &str {
    term.as_iri().map_or_else(|| term.lexical(), |i| i.local_name())
}
