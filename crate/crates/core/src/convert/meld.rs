use std::path::Path;

use super::{time_order_warnings, ConvertError, FolderFile, ScenarioFolder, Speakers, CLOSING_MARGIN_MS};
use crate::ids::IdMint;
use crate::model::*;
use crate::storage::DIALOGUE_HEADER;

/// Column names to use. `None` means "find by alias": header names are
/// compared lowercased with `_`, `-` and spaces removed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ColumnMap {
    pub speaker: Option<String>,
    pub utterance: Option<String>,
    pub start: Option<String>,
    pub end: Option<String>,
    pub emotion: Option<String>,
    pub media: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeldOptions {
    pub columns: ColumnMap,
    pub margin_ms: Millis,
    pub context: ScenarioContext,
}

impl Default for MeldOptions {
    fn default() -> Self {
        MeldOptions {
            columns: ColumnMap::default(),
            margin_ms: CLOSING_MARGIN_MS,
            context: ScenarioContext::new("robot_agent"),
        }
    }
}

const SPEAKER: &[&str] = &["speaker"];
const UTTERANCE: &[&str] = &["utterance", "text", "transcript", "sentence"];
const START: &[&str] = &["start", "starttime", "begin", "startms"];
const END: &[&str] = &["end", "endtime", "stop", "endms"];
const EMOTION: &[&str] = &["emotion", "label"];
const MEDIA: &[&str] = &["media", "file", "clip"];

/// Source recorded on annotations copied from the dataset.
pub const DATASET_SOURCE: &str = "dataset";

fn normalize(h: &str) -> String {
    h.trim()
        .chars()
        .filter(|c| !matches!(c, '_' | '-' | ' '))
        .flat_map(char::to_lowercase)
        .collect()
}

struct Column {
    index: usize,
    /// Values are integer milliseconds rather than seconds.
    millis: bool,
}

fn find(header: &[String], explicit: Option<&str>, aliases: &[&str]) -> Option<Column> {
    let index = match explicit {
        Some(name) => header.iter().position(|h| h.trim() == name)?,
        None => header.iter().position(|h| aliases.contains(&normalize(h).as_str()))?,
    };
    Some(Column {
        index,
        millis: normalize(&header[index]).ends_with("ms"),
    })
}

fn require(
    header: &[String],
    explicit: Option<&str>,
    aliases: &[&str],
    wanted: &'static str,
) -> Result<Column, ConvertError> {
    find(header, explicit, aliases).ok_or_else(|| ConvertError::ColumnMapping {
        wanted,
        found: header.to_vec(),
    })
}

/// Parses a time cell into milliseconds: integer ms for `*ms` columns,
/// otherwise `[hh:]mm:ss[,.]fff` or decimal seconds.
pub(crate) fn parse_time(cell: &str, millis: bool) -> Option<Millis> {
    let cell = cell.trim();
    if millis {
        return cell
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(|v| v.round() as Millis);
    }
    if cell.contains(':') {
        let mut total = 0.0;
        for part in cell.split(':') {
            let v: f64 = part.replace(',', ".").parse().ok()?;
            if !v.is_finite() || v < 0.0 {
                return None;
            }
            total = total * 60.0 + v;
        }
        return Some((total * 1000.0).round() as Millis);
    }
    cell.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .map(|v| (v * 1000.0).round() as Millis)
}

/// Imports a transcript with speaker, utterance and start columns, plus
/// optional end, emotion and media columns. Each utterance becomes a text
/// signal with one mention over its full text carrying the speaker link
/// and, when present, the emotion label. Media files named in the media
/// column are copied from `media_dir` into `video/` and listed on the
/// utterance's signal.
pub fn import_meld_like(
    transcript: &Path,
    media_dir: Option<&Path>,
    scenario_id: &str,
    options: &MeldOptions,
) -> Result<ScenarioFolder, ConvertError> {
    let stem = transcript
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .ok_or_else(|| ConvertError::input(transcript, "not a file"))?;
    let name = format!("{stem}.csv");
    let mut reader = csv::ReaderBuilder::new()
        .flexible(false)
        .from_path(transcript)
        .map_err(|e| ConvertError::input(transcript, e))?;
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| ConvertError::input(transcript, e))?
        .iter()
        .map(str::to_string)
        .collect();
    let cols = &options.columns;
    let speaker_col = require(&header, cols.speaker.as_deref(), SPEAKER, "speaker")?;
    let text_col = require(&header, cols.utterance.as_deref(), UTTERANCE, "utterance")?;
    let start_col = require(&header, cols.start.as_deref(), START, "start")?;
    let end_col = find(&header, cols.end.as_deref(), END);
    let emotion_col = find(&header, cols.emotion.as_deref(), EMOTION);
    let media_col = match (&cols.media, media_dir) {
        (Some(m), _) => Some(require(&header, Some(m), MEDIA, "media")?),
        (None, Some(_)) => find(&header, None, MEDIA),
        (None, None) => None,
    };

    let mut context = options.context.clone();
    let mut speakers = Speakers::new(scenario_id, &context);
    let mut ids = IdMint::seeded(format!("{scenario_id}/text"));
    let mut warnings = Vec::new();
    let mut files = Vec::new();
    // Rows are rewritten as a speaker,utterance,time dialogue so `#row`
    // references resolve like any other dialogue file.
    let mut dialogue = csv::Writer::from_writer(Vec::new());
    let write_err = |e: csv::Error| ConvertError::input(transcript, e);
    dialogue.write_record(DIALOGUE_HEADER).map_err(write_err)?;
    let mut signals = Vec::new();
    let mut starts = Vec::new();
    let mut last_end = 0;

    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| ConvertError::input(transcript, e))?;
        let bad = |what: &str, cell: &str| ConvertError::input(transcript, format!("row {row}: bad {what} {cell:?}"));
        let start_cell = &record[start_col.index];
        let start = parse_time(start_cell, start_col.millis).ok_or_else(|| bad("start", start_cell))?;
        let end = match &end_col {
            Some(c) if !record[c.index].trim().is_empty() => {
                let cell = &record[c.index];
                let end = parse_time(cell, c.millis).ok_or_else(|| bad("end", cell))?;
                if end < start {
                    return Err(bad("end before start", cell));
                }
                end
            }
            _ => start,
        };
        starts.push(start);
        last_end = last_end.max(end);

        let text = &record[text_col.index];
        let speaker_name = record[speaker_col.index].trim();
        let speaker = speakers.resolve(speaker_name, &mut context, &mut warnings);
        let mut signal = Signal::text(ids.next("signal"), scenario_id, text, start, end);
        signal.files = vec![format!("text/{name}#{row}")];
        dialogue
            .write_record([speaker_name, text, start.to_string().as_str()])
            .map_err(write_err)?;
        if let (Some(c), Some(dir)) = (&media_col, media_dir) {
            let file = record[c.index].trim();
            if !file.is_empty() {
                let src = dir.join(file);
                if !src.is_file() {
                    return Err(ConvertError::input(&src, "media file not found"));
                }
                let rel = format!("video/{file}");
                signal.files.push(rel.clone());
                files.push((rel, FolderFile::Copy(src)));
            }
        }

        let mut link = EntityLink::new(speaker);
        link.label = Some(speaker_name.to_string());
        let mut annotations = vec![Annotation::new(
            "speaker",
            AnnotationValue::EntityLink(link),
            DATASET_SOURCE,
            start,
        )];
        if let Some(c) = &emotion_col {
            let emotion = record[c.index].trim();
            if !emotion.is_empty() {
                annotations.push(Annotation::new(
                    "emotion",
                    AnnotationValue::Label(emotion.to_string()),
                    DATASET_SOURCE,
                    start,
                ));
            }
        }
        let len = text.chars().count() as u64;
        signal.mentions.push(Mention {
            id: ids.next("mention"),
            segments: vec![Segment::Index(IndexSegment::new(&signal.id, 0, len))],
            annotations,
            extra: Extra::new(),
        });
        signals.push(signal);
    }
    warnings.splice(0..0, time_order_warnings(&starts));
    signals.sort_by_key(|s| s.time.start);

    let mut bundle = ScenarioBundle::new(Scenario::new(scenario_id, context, 0, last_end + options.margin_ms));
    bundle.scenario.signals.insert(Modality::Text, "./text.json".into());
    for s in signals {
        bundle.push_signal(s);
    }
    let dialogue = dialogue.into_inner().map_err(|e| ConvertError::input(transcript, e))?;
    files.insert(0, (format!("text/{name}"), FolderFile::Generated(dialogue)));
    Ok(ScenarioFolder {
        bundle,
        files,
        warnings,
    })
}
