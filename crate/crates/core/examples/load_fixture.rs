//! Loads a scenario folder, lists its signals and reports load warnings and
//! validation problems.
use std::path::{Path, PathBuf};

fn main() {
    let default = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/carl-robot");
    let dir: PathBuf = std::env::args().nth(1).map_or(default, Into::into);
    let loaded = emissor::storage::load_scenario(&dir).expect("load scenario");
    let bundle = &loaded.bundle;
    let r = &bundle.scenario.ruler;
    println!("scenario {} [{}, {}]", bundle.scenario.id, r.start, r.end);
    for signal in bundle.all_signals() {
        println!(
            "  {} {} [{}, {}] {} mentions",
            signal.modality,
            signal.id,
            signal.time.start,
            signal.time.end,
            signal.mentions.len()
        );
    }
    println!("{} load warnings", loaded.warnings.len());
    for w in loaded.warnings.iter().take(3) {
        println!("  {w}");
    }
    let report = bundle.validate_with_media(&dir);
    println!("{} violations", report.violations.len());
    for v in &report.violations {
        println!("  {v}");
    }
}
