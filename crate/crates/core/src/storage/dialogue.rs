use std::path::Path;

use super::StorageError;
use crate::model::Millis;

pub const DIALOGUE_HEADER: [&str; 3] = ["speaker", "utterance", "time"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DialogueRow {
    pub speaker: String,
    pub utterance: String,
    pub time: Millis,
}

/// Reads a `speaker,utterance,time` CSV. The header is mandatory; times are
/// integer milliseconds.
pub fn read_dialogue(path: &Path) -> Result<Vec<DialogueRow>, StorageError> {
    let bytes = std::fs::read(path).map_err(|e| StorageError::io(path, e))?;
    let csv_err = |e: csv::Error| StorageError::Csv {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let mut reader = csv::ReaderBuilder::new().from_reader(bytes.as_slice());
    let header = reader.headers().map_err(csv_err)?.clone();
    let found: Vec<&str> = header.iter().map(str::trim).collect();
    if found != DIALOGUE_HEADER {
        return Err(StorageError::BadHeader {
            path: path.to_path_buf(),
            found: header.iter().collect::<Vec<_>>().join(","),
        });
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_err)?;
        let time = record[2].trim().parse::<Millis>().map_err(|e| StorageError::Csv {
            path: path.to_path_buf(),
            message: format!("row {}: time {:?}: {e}", rows.len(), &record[2]),
        })?;
        rows.push(DialogueRow {
            speaker: record[0].to_string(),
            utterance: record[1].to_string(),
            time,
        });
    }
    Ok(rows)
}
