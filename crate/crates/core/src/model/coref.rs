use std::collections::BTreeMap;

use super::{Millis, Modality, ScenarioBundle};
use crate::ns::resolve_identifier;

/// One mention grounded to an identity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CorefEntry {
    pub modality: Modality,
    pub time: Millis,
    pub signal_id: String,
    pub mention_id: String,
}

/// Resolved identity IRI to the mentions that carry it, across modalities.
pub type CoreferenceIndex = BTreeMap<String, Vec<CorefEntry>>;

impl ScenarioBundle {
    /// Groups mentions whose entity-link or face annotations name the same
    /// identity. Identifiers are resolved (CURIEs expanded, bare ids joined to
    /// the context base) so that `bc913d64-...` on a face and on an entity
    /// link land in the same group. Entries are ordered by modality, signal
    /// time, then mention id; a mention appears once per identity.
    pub fn coreference_index(&self) -> CoreferenceIndex {
        let mut index = CoreferenceIndex::new();
        for signal in self.all_signals() {
            for mention in &signal.mentions {
                for ann in &mention.annotations {
                    let Some(id) = ann.value.identity() else { continue };
                    let entry = CorefEntry {
                        modality: signal.modality,
                        time: signal.time.start,
                        signal_id: signal.id.clone(),
                        mention_id: mention.id.clone(),
                    };
                    let group = index.entry(resolve_identifier(id)).or_default();
                    if !group.contains(&entry) {
                        group.push(entry);
                    }
                }
            }
        }
        for group in index.values_mut() {
            group.sort_by(|a, b| {
                (a.modality, a.time, &a.mention_id, &a.signal_id).cmp(&(
                    b.modality,
                    b.time,
                    &b.mention_id,
                    &b.signal_id,
                ))
            });
        }
        index
    }
}
