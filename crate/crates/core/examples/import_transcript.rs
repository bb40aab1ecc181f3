//! Imports a transcript with speaker, utterance, start/end and emotion
//! columns into a scenario folder. Without arguments a two-line sample is
//! used.
use std::path::PathBuf;

use emissor::convert::{import_meld_like, MeldOptions};
use emissor::model::AnnotationValue;
use emissor::storage::load_scenario;

const SAMPLE: &str = "\
Sr No.,Utterance,Speaker,Emotion,StartTime,EndTime
1,Where are my pills?,Carl,fear,\"00:00:01,500\",\"00:00:02,250\"
2,They are under the table.,Leolani,neutral,\"00:00:03,000\",\"00:00:04,100\"
";

fn main() {
    let tmp = tempfile::tempdir().expect("temp dir");
    let transcript = std::env::args().nth(1).map_or_else(
        || {
            let p = tmp.path().join("sample.csv");
            std::fs::write(&p, SAMPLE).expect("write sample");
            p
        },
        PathBuf::from,
    );
    let media = std::env::args().nth(2).map(PathBuf::from);
    let id = transcript
        .file_stem()
        .expect("file name")
        .to_string_lossy()
        .into_owned();

    let folder = import_meld_like(&transcript, media.as_deref(), &id, &MeldOptions::default()).expect("import");
    for w in &folder.warnings {
        println!("warning: {w}");
    }
    let dir = folder.write(&tmp.path().join("out")).expect("write folder");
    let bundle = load_scenario(&dir).expect("reload").bundle;
    let r = &bundle.scenario.ruler;
    println!("scenario {} [{}, {}]", bundle.scenario.id, r.start, r.end);
    for s in bundle.all_signals() {
        let labels: Vec<String> = s
            .mentions
            .iter()
            .flat_map(|m| &m.annotations)
            .filter_map(|a| match &a.value {
                AnnotationValue::Label(l) => Some(format!("{}={l}", a.kind)),
                AnnotationValue::EntityLink(e) => Some(format!("{}={}", a.kind, e.iri)),
                _ => None,
            })
            .collect();
        println!(
            "  [{}, {}] {:?} {}",
            s.time.start,
            s.time.end,
            s.seq.as_deref().unwrap_or(""),
            labels.join(" ")
        );
    }
    println!("{} violations", bundle.validate_with_media(&dir).violations.len());
}
