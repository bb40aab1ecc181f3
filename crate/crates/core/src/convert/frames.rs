use std::path::Path;
use std::sync::OnceLock;

use regex::Regex;

use super::{file_name, ConvertError, FolderFile, ScenarioFolder, DEFAULT_FRAME_MS};
use crate::ids::IdMint;
use crate::model::{Bounds, Millis, Modality, Signal};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameName {
    pub prefix: String,
    pub frame: u64,
    pub ms: Millis,
}

fn pattern() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^(.+)_frame(\d+)_(\d+)\.(?i:jpe?g|png)$").expect("valid regex"))
}

/// Parses `<prefix>_frame<F>_<ms>.jpg`.
pub fn parse_frame_name(name: &str) -> Option<FrameName> {
    let c = pattern().captures(name)?;
    Some(FrameName {
        prefix: c[1].to_string(),
        frame: c[2].parse().ok()?,
        ms: c[3].parse().ok()?,
    })
}

/// One image signal per frame file in `dir`, ordered by time. A frame lasts
/// until the next one would start at the rate implied by the two frame
/// numbers; the last frame reuses its predecessor's duration. Hidden files
/// are skipped, anything else that does not match the pattern is an error.
pub fn from_frames(dir: &Path, scenario_id: &str) -> Result<Vec<Signal>, ConvertError> {
    let entries = std::fs::read_dir(dir).map_err(|e| ConvertError::input(dir, e))?;
    let mut frames = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| ConvertError::input(dir, e))?.path();
        if !path.is_file() {
            continue;
        }
        let name = file_name(&path)?;
        if name.starts_with('.') {
            continue;
        }
        let parsed = parse_frame_name(&name).ok_or_else(|| ConvertError::PatternMismatch(name.clone()))?;
        frames.push((parsed, name, path));
    }
    frames.sort_by(|a, b| (a.0.ms, a.0.frame, &a.1).cmp(&(b.0.ms, b.0.frame, &b.1)));

    let rate = |a: &FrameName, b: &FrameName| -> Option<Millis> {
        let df = b.frame.checked_sub(a.frame).filter(|d| *d > 0)?;
        let d = (b.ms - a.ms) / df as Millis;
        (d > 0).then_some(d)
    };
    let mut ids = IdMint::seeded(format!("{scenario_id}/image"));
    let mut signals = Vec::with_capacity(frames.len());
    let mut last_duration = DEFAULT_FRAME_MS;
    for i in 0..frames.len() {
        let (f, name, path) = &frames[i];
        let duration = match frames.get(i + 1) {
            Some((next, _, _)) => rate(f, next).unwrap_or(DEFAULT_FRAME_MS),
            None => last_duration,
        };
        last_duration = duration;
        let (w, h) = image::image_dimensions(path).map_err(|e| ConvertError::input(path, e))?;
        let mut signal = Signal::image(
            ids.next("signal"),
            scenario_id,
            Bounds::new(0, 0, w, h),
            f.ms,
            f.ms + duration,
        );
        signal.files = vec![format!("image/{name}")];
        signals.push(signal);
    }
    Ok(signals)
}

/// Adds the frames in `dir` to a converted scenario, copying the images into
/// its `image/` folder and stretching the scenario ruler when a frame ends
/// after it.
pub fn add_frames(folder: &mut ScenarioFolder, dir: &Path) -> Result<usize, ConvertError> {
    let scenario_id = folder.bundle.scenario.id.clone();
    let signals = from_frames(dir, &scenario_id)?;
    let n = signals.len();
    folder
        .bundle
        .scenario
        .signals
        .entry(Modality::Image)
        .or_insert_with(|| "./image.json".into());
    for s in signals {
        let rel = s.files[0].clone();
        let name = rel.trim_start_matches("image/");
        folder.files.push((rel.clone(), FolderFile::Copy(dir.join(name))));
        let ruler = &mut folder.bundle.scenario.ruler;
        ruler.end = ruler.end.max(s.time.end);
        folder.bundle.push_signal(s);
    }
    Ok(n)
}
