//! Scenario folders on disk.
//!
//! ```text
//! carl-robot/
//!   carl-robot.json      scenario, named after the folder
//!   text.json            one JSON-LD array of signals per modality
//!   image.json
//!   text/ image/ audio/ video/   media
//!   rdf/                 TriG files written by the graph emitter
//! ```

mod context;
mod dialogue;
pub mod json;
mod media;
mod read;
mod write;

use std::path::PathBuf;

pub use context::{LdContext, CONTEXT_DOCUMENT, CONTEXT_IRI};
pub use dialogue::{read_dialogue, DialogueRow, DIALOGUE_HEADER};
pub use media::{read_media_row, resolve_media, ResolvedMedia};
pub use read::{
    annotation_from_json, load_scenario, mention_from_json, parse_signals, segment_from_json, Loaded, StorageWarning,
};
pub use write::{
    annotation_to_json, mention_to_json, save_scenario, scenario_to_json, segment_to_json, signal_to_json,
    signals_to_string,
};

/// Subfolders of a scenario folder.
pub const MEDIA_DIRS: [&str; 4] = ["text", "image", "audio", "video"];
pub const RDF_DIR: &str = "rdf";

#[derive(Debug, thiserror::Error)]
pub enum StorageError {
    #[error("no scenario file {0}")]
    MissingScenarioFile(PathBuf),
    #[error("{file}:{line}:{column}: malformed JSON: {message}")]
    MalformedJson {
        file: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{file}#{pointer}: {message}")]
    SchemaViolation {
        file: PathBuf,
        pointer: String,
        message: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("media file {0} is missing")]
    MissingMedia(PathBuf),
    #[error("{path}: row {row} requested but the file has {rows} data rows")]
    RowOutOfRange { path: PathBuf, row: usize, rows: usize },
    #[error("{path}: expected header speaker,utterance,time, found {found:?}")]
    BadHeader { path: PathBuf, found: String },
    #[error("{path}: {message}")]
    Csv { path: PathBuf, message: String },
    #[error("scenario {id} must be saved in a folder named {id}, not {folder}")]
    FolderNameMismatch { folder: String, id: String },
}

impl StorageError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        StorageError::Io {
            path: path.into(),
            source,
        }
    }
}
