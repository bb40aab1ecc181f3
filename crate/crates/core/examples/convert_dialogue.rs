//! Rebuilds a scenario folder from a dialogue CSV and a directory of frames,
//! then validates the result.
use std::path::{Path, PathBuf};

use emissor::convert::{add_frames, from_dialogue_csv, DialogueOptions};
use emissor::storage::load_scenario;

fn main() {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut args = std::env::args().skip(1);
    let csv: PathBuf = args
        .next()
        .map_or_else(|| fixtures.join("carl-robot/text/carl-robot.csv"), Into::into);
    let frames: PathBuf = args
        .next()
        .map_or_else(|| fixtures.join("carl-robot/image"), Into::into);
    let out = tempfile::tempdir().expect("temp dir");

    // Reuse the speaker metadata of the fixture so Carl resolves to his id.
    let fixture = load_scenario(&fixtures.join("carl-robot")).expect("load fixture");
    let context = fixture.bundle.scenario.context.clone();

    let options = DialogueOptions {
        tokens: true,
        ..Default::default()
    };
    let mut folder = from_dialogue_csv(&csv, "carl-robot", context, &options).expect("convert csv");
    let frames_added = add_frames(&mut folder, &frames).expect("convert frames");
    for w in &folder.warnings {
        println!("warning: {w}");
    }
    let dir = folder.write(out.path()).expect("write folder");

    let loaded = load_scenario(&dir).expect("reload");
    let r = &loaded.bundle.scenario.ruler;
    println!("scenario ruler [{}, {}], {} frames", r.start, r.end, frames_added);
    for s in loaded.bundle.signals_in_time_order(|_| true) {
        println!(
            "  {} {} [{}, {}] {}",
            s.modality,
            s.id,
            s.time.start,
            s.time.end,
            s.files.join(" ")
        );
    }
    let report = loaded.bundle.validate_with_media(&dir);
    println!("{} violations", report.violations.len());
}
