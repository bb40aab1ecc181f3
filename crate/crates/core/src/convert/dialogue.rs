use std::path::Path;

use super::{file_name, time_order_warnings, ConvertError, FolderFile, ScenarioFolder, Speakers, CLOSING_MARGIN_MS};
use crate::ids::IdMint;
use crate::model::*;
use crate::segmentation::token_mentions;
use crate::storage::read_dialogue;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DialogueOptions {
    pub margin_ms: Millis,
    /// Adds one token mention per token to every utterance.
    pub tokens: bool,
    /// Source recorded on generated annotations.
    pub source: String,
}

impl Default for DialogueOptions {
    fn default() -> Self {
        DialogueOptions {
            margin_ms: CLOSING_MARGIN_MS,
            tokens: false,
            source: "converter".into(),
        }
    }
}

/// One text signal per `speaker,utterance,time` row. Utterances are point
/// events; the scenario runs from 0 to the last utterance plus the margin.
/// Each utterance gets a mention over its full text linking it to the
/// speaker.
pub fn from_dialogue_csv(
    csv: &Path,
    scenario_id: &str,
    context: ScenarioContext,
    options: &DialogueOptions,
) -> Result<ScenarioFolder, ConvertError> {
    let rows = read_dialogue(csv)?;
    let name = file_name(csv)?;
    let mut context = context;
    let mut warnings = time_order_warnings(&rows.iter().map(|r| r.time).collect::<Vec<_>>());
    let mut speakers = Speakers::new(scenario_id, &context);
    let mut ids = IdMint::seeded(format!("{scenario_id}/text"));

    let mut signals = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let speaker = speakers.resolve(&row.speaker, &mut context, &mut warnings);
        let mut signal = Signal::text(ids.next("signal"), scenario_id, &row.utterance, row.time, row.time);
        signal.files = vec![format!("text/{name}#{i}")];
        let len = row.utterance.chars().count() as u64;
        let mut link = EntityLink::new(speaker);
        link.label = Some(row.speaker.clone());
        signal.mentions.push(Mention {
            id: ids.next("mention"),
            segments: vec![Segment::Index(IndexSegment::new(&signal.id, 0, len))],
            annotations: vec![Annotation::new(
                "speaker",
                AnnotationValue::EntityLink(link),
                options.source.clone(),
                row.time,
            )],
            extra: Extra::new(),
        });
        if options.tokens {
            let tokens = token_mentions(&signal.id, &row.utterance, &options.source, row.time, &mut ids);
            signal.mentions.extend(tokens);
        }
        signals.push(signal);
    }
    signals.sort_by_key(|s| s.time.start);

    let end = rows.iter().map(|r| r.time).max().unwrap_or(0).max(0) + options.margin_ms;
    let mut bundle = ScenarioBundle::new(Scenario::new(scenario_id, context, 0, end));
    bundle.scenario.signals.insert(Modality::Text, "./text.json".into());
    for s in signals {
        bundle.push_signal(s);
    }
    Ok(ScenarioFolder {
        bundle,
        files: vec![(format!("text/{name}"), FolderFile::Copy(csv.to_path_buf()))],
        warnings,
    })
}
