//! Converters from external recordings into scenario folders.
//!
//! All converters are deterministic: ids are name-based UUIDs derived from
//! the scenario id, and annotation timestamps are taken from the signal
//! they annotate, so converting the same input twice yields byte-identical
//! folders.

mod dialogue;
mod frames;
mod meld;

use std::fmt;
use std::path::{Path, PathBuf};

use crate::ids::IdMint;
use crate::model::{Millis, Person, ScenarioBundle, ScenarioContext};
use crate::segmentation::{resolve_identity, IdentityQuery, RegistryEntry, Resolution};
use crate::storage::{save_scenario, StorageError};

pub use dialogue::{from_dialogue_csv, DialogueOptions};
pub use frames::{add_frames, from_frames, parse_frame_name, FrameName};
pub use meld::DATASET_SOURCE;
pub use meld::{import_meld_like, ColumnMap, MeldOptions};

/// Time added after the last utterance to close the scenario ruler. The
/// carl-robot example conversation ends 4000 ms after its last utterance.
pub const CLOSING_MARGIN_MS: Millis = 4000;

/// Frame duration used when it cannot be derived from neighbouring frames.
pub const DEFAULT_FRAME_MS: Millis = 33;

#[derive(Debug, thiserror::Error)]
pub enum ConvertError {
    #[error(transparent)]
    Storage(#[from] StorageError),
    #[error("{0} does not match <scenario>_frame<F>_<ms>.<jpg|png>")]
    PatternMismatch(String),
    #[error("cannot map column {wanted}; header is {found:?}")]
    ColumnMapping { wanted: &'static str, found: Vec<String> },
    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error("scenario id {0:?} cannot be used as a folder name")]
    BadScenarioId(String),
}

impl ConvertError {
    fn input(path: &Path, message: impl fmt::Display) -> Self {
        ConvertError::Input {
            path: path.to_path_buf(),
            message: message.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConvertWarning {
    /// A row starts before the row preceding it. Signals are sorted by start
    /// time regardless.
    NonMonotonicTime { row: usize, previous: Millis, time: Millis },
    /// A speaker name matched nobody in the context and was given a new id.
    NewSpeaker { name: String, id: String },
}

impl fmt::Display for ConvertWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConvertWarning::NonMonotonicTime { row, previous, time } => {
                write!(
                    f,
                    "row {row} starts at {time} ms, before the previous row at {previous} ms"
                )
            }
            ConvertWarning::NewSpeaker { name, id } => write!(f, "speaker {name:?} is new, minted {id}"),
        }
    }
}

/// Content of a file that goes into the scenario folder next to the
/// metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FolderFile {
    Copy(PathBuf),
    Generated(Vec<u8>),
}

/// A converted scenario plus the media files it refers to.
#[derive(Debug, Clone)]
pub struct ScenarioFolder {
    pub bundle: ScenarioBundle,
    /// Paths relative to the folder, with their content.
    pub files: Vec<(String, FolderFile)>,
    pub warnings: Vec<ConvertWarning>,
}

impl ScenarioFolder {
    /// Writes `<root>/<scenario id>/` and returns its path.
    pub fn write(&self, root: &Path) -> Result<PathBuf, ConvertError> {
        let id = &self.bundle.scenario.id;
        if id.is_empty() || id.contains(['/', '\\']) || id == "." || id == ".." {
            return Err(ConvertError::BadScenarioId(id.clone()));
        }
        let dir = root.join(id);
        save_scenario(&self.bundle, &dir)?;
        for (rel, file) in &self.files {
            let dst = dir.join(rel);
            if let Some(parent) = dst.parent() {
                std::fs::create_dir_all(parent).map_err(|e| StorageError::io(parent, e))?;
            }
            match file {
                FolderFile::Copy(src) => std::fs::copy(src, &dst)
                    .map(|_| ())
                    .map_err(|e| StorageError::io(src, e))?,
                FolderFile::Generated(bytes) => std::fs::write(&dst, bytes).map_err(|e| StorageError::io(&dst, e))?,
            }
        }
        Ok(dir)
    }
}

/// Resolves speaker names against the context participants, adding
/// unknown speakers to the context as they are met.
struct Speakers {
    registry: Vec<RegistryEntry>,
    ids: IdMint,
}

impl Speakers {
    fn new(scenario_id: &str, context: &ScenarioContext) -> Self {
        Speakers {
            registry: context
                .participants()
                .map(|p| RegistryEntry::new(p.id.clone(), p.name.clone()))
                .collect(),
            ids: IdMint::seeded(format!("{scenario_id}/speakers")),
        }
    }

    fn resolve(&mut self, name: &str, context: &mut ScenarioContext, warnings: &mut Vec<ConvertWarning>) -> String {
        match resolve_identity(IdentityQuery::Name(name), &self.registry, &mut self.ids) {
            Resolution::Known(iri) => iri,
            Resolution::New(n) => {
                self.registry.push(RegistryEntry::new(n.iri.clone(), n.name.clone()));
                context.persons.push(Person::new(n.iri.clone(), n.name.clone()));
                warnings.push(ConvertWarning::NewSpeaker {
                    name: n.name,
                    id: n.iri.clone(),
                });
                n.iri
            }
        }
    }
}

fn file_name(path: &Path) -> Result<String, ConvertError> {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .ok_or_else(|| ConvertError::input(path, "not a file"))
}

/// Orders text signals by start time and reports rows that went back in
/// time.
fn time_order_warnings(times: &[Millis]) -> Vec<ConvertWarning> {
    times
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[1] < w[0])
        .map(|(i, w)| ConvertWarning::NonMonotonicTime {
            row: i + 1,
            previous: w[0],
            time: w[1],
        })
        .collect()
}
