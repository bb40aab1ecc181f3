use std::path::{Path, PathBuf};

use super::{read_dialogue, DialogueRow, StorageError};
use crate::model::Signal;

/// A signal file resolved against the scenario root. CSV-backed text
/// signals also carry the selected data row.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedMedia {
    pub path: PathBuf,
    pub row: Option<DialogueRow>,
}

fn split_fragment(file: &str) -> (&str, Option<&str>) {
    match file.split_once('#') {
        Some((path, frag)) => (path, Some(frag)),
        None => (file, None),
    }
}

/// Absolute paths for every file of a signal. `#n` selects data row `n`
/// (0-based, header excluded) of a dialogue CSV.
pub fn resolve_media(signal: &Signal, root: &Path) -> Result<Vec<ResolvedMedia>, StorageError> {
    let root = std::path::absolute(root).map_err(|e| StorageError::io(root, e))?;
    signal
        .files
        .iter()
        .map(|file| {
            let (rel, frag) = split_fragment(file);
            let path = root.join(rel.trim_start_matches("./"));
            if !path.is_file() {
                return Err(StorageError::MissingMedia(path));
            }
            let row = match frag {
                Some(frag) => {
                    let n = frag.parse::<usize>().map_err(|_| StorageError::Csv {
                        path: path.clone(),
                        message: format!("fragment #{frag} is not a row number"),
                    })?;
                    Some(read_media_row(&path, n)?)
                }
                None => None,
            };
            Ok(ResolvedMedia { path, row })
        })
        .collect()
}

pub fn read_media_row(path: &Path, row: usize) -> Result<DialogueRow, StorageError> {
    let rows = read_dialogue(path)?;
    let count = rows.len();
    rows.into_iter().nth(row).ok_or(StorageError::RowOutOfRange {
        path: path.to_path_buf(),
        row,
        rows: count,
    })
}
