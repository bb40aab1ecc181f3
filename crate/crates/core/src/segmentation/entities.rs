use std::path::Path;

use super::tokenize;
use super::TokenSpan;

#[derive(Debug, thiserror::Error)]
pub enum GazetteerError {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: expected name<TAB>label")]
    Line { line: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Entry {
    tokens: Vec<String>,
    label: String,
}

/// Surface strings with labels. Surfaces are matched token by token, so
/// "Carl and" matches the tokens `Carl`, `and`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Gazetteer {
    entries: Vec<Entry>,
}

impl Gazetteer {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an entry. A surface already present keeps its first label.
    pub fn insert(&mut self, surface: &str, label: impl Into<String>) {
        let tokens: Vec<String> = tokenize(surface).into_iter().map(|t| t.value).collect();
        if tokens.is_empty() || self.entries.iter().any(|e| e.tokens == tokens) {
            return;
        }
        self.entries.push(Entry {
            tokens,
            label: label.into(),
        });
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// One `name<TAB>label` per line; blank lines and `#` comments skipped.
    pub fn parse(text: &str) -> Result<Gazetteer, GazetteerError> {
        let mut g = Gazetteer::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (name, label) = line.split_once('\t').ok_or(GazetteerError::Line { line: i + 1 })?;
            if name.trim().is_empty() || label.trim().is_empty() {
                return Err(GazetteerError::Line { line: i + 1 });
            }
            g.insert(name.trim(), label.trim());
        }
        Ok(g)
    }

    pub fn load(path: &Path) -> Result<Gazetteer, GazetteerError> {
        Gazetteer::parse(&std::fs::read_to_string(path)?)
    }

    /// Longest entry matching the tokens starting at `at`.
    fn longest_at(&self, tokens: &[TokenSpan], at: usize) -> Option<(usize, &str)> {
        self.entries
            .iter()
            .filter(|e| {
                e.tokens.len() <= tokens.len() - at && e.tokens.iter().zip(&tokens[at..]).all(|(a, b)| *a == b.value)
            })
            .max_by_key(|e| e.tokens.len())
            .map(|e| (e.tokens.len(), e.label.as_str()))
    }
}

/// A labelled run of tokens `[first, last)` (token indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntitySpan {
    pub first: usize,
    pub last: usize,
    pub label: String,
}

impl EntitySpan {
    /// Character range covered in the tokenized text.
    pub fn char_range(&self, tokens: &[TokenSpan]) -> (usize, usize) {
        (tokens[self.first].start, tokens[self.last - 1].stop)
    }
}

/// Greedy left-to-right longest match; spans never overlap.
pub fn detect_entities(tokens: &[TokenSpan], gazetteer: &Gazetteer) -> Vec<EntitySpan> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        match gazetteer.longest_at(tokens, i) {
            Some((len, label)) => {
                out.push(EntitySpan {
                    first: i,
                    last: i + len,
                    label: label.to_string(),
                });
                i += len;
            }
            None => i += 1,
        }
    }
    out
}
