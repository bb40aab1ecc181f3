//! Resolves speaker names against the people a scenario already knows and
//! mints new identities for strangers.
use std::path::Path;

use emissor::ids::IdMint;
use emissor::segmentation::{resolve_identity, IdentityQuery, RegistryEntry, Resolution};
use emissor::storage::load_scenario;

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/carl-robot");
    let bundle = load_scenario(&dir).expect("load scenario").bundle;
    let mut registry: Vec<RegistryEntry> = bundle
        .scenario
        .context
        .participants()
        .map(|p| RegistryEntry::new(p.id.clone(), p.name.clone()))
        .collect();

    let names: Vec<String> = std::env::args().skip(1).collect();
    let names = if names.is_empty() {
        vec!["carl".into(), "Fred".into(), "fred".into()]
    } else {
        names
    };
    let mut ids = IdMint::seeded("resolve-example");
    for name in &names {
        match resolve_identity(IdentityQuery::Name(name), &registry, &mut ids) {
            Resolution::Known(iri) => println!("{name:<8} known  {iri}"),
            Resolution::New(n) => {
                println!("{name:<8} new    {} ({})", n.iri, n.class);
                registry.push(RegistryEntry::new(n.iri, n.name));
            }
        }
    }
}
