use std::cmp::Reverse;
use std::collections::BTreeMap;

use super::emit::event_start;
use super::store::GraphStore;
use super::term::{vocab, Iri, Term};
use crate::model::{AttributionValue, Millis, Perspective, Polarity};
use crate::ns;

/// Pattern over claims. Terms may be full IRIs, declared CURIEs or bare
/// local names (matched case-insensitively). `time` keeps claims whose
/// supporting mention was made at or before it. `source` matches the
/// source IRI, its local name, its label or its `foaf:name`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClaimQuery {
    pub subject: Option<String>,
    pub predicate: Option<String>,
    pub object: Option<String>,
    pub time: Option<Millis>,
    pub source: Option<String>,
}

impl ClaimQuery {
    pub fn new() -> Self {
        Self::default()
    }
    pub fn subject(mut self, s: impl Into<String>) -> Self {
        self.subject = Some(s.into());
        self
    }
    pub fn predicate(mut self, p: impl Into<String>) -> Self {
        self.predicate = Some(p.into());
        self
    }
    pub fn object(mut self, o: impl Into<String>) -> Self {
        self.object = Some(o.into());
        self
    }
    pub fn at(mut self, t: Millis) -> Self {
        self.time = Some(t);
        self
    }
    pub fn source(mut self, s: impl Into<String>) -> Self {
        self.source = Some(s.into());
        self
    }
}

/// One claim as supported by one mention under one attribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryResult {
    pub claim: Iri,
    pub subject: Iri,
    pub predicate: Iri,
    pub object: Term,
    pub mention: Iri,
    pub source: Option<Iri>,
    pub attribution: Option<Iri>,
    pub perspective: Perspective,
    /// Start of the mention's event; unknown for graphs written elsewhere.
    pub time: Option<Millis>,
}

impl QueryResult {
    /// Missing polarity reads as positive.
    pub fn polarity(&self) -> Polarity {
        self.perspective.polarity.unwrap_or(Polarity::Positive)
    }

    fn certainty_rank(&self) -> i16 {
        self.perspective.certainty.map_or(-1, |c| c.rank() as i16)
    }
}

fn term_matches(pattern: &str, term: &Term) -> bool {
    match term {
        Term::Literal(l) => l.value == pattern,
        Term::Iri(iri) => iri_matches(pattern, iri),
    }
}

fn iri_matches(pattern: &str, iri: &Iri) -> bool {
    if ns::is_absolute_iri(pattern) {
        pattern == iri.as_str()
    } else if let Some(full) = ns::expand_curie(pattern) {
        full == iri.as_str()
    } else {
        iri.local_name().eq_ignore_ascii_case(pattern)
    }
}

fn source_matches(store: &GraphStore, pattern: &str, source: &Iri) -> bool {
    if iri_matches(pattern, source) {
        return true;
    }
    let g = vocab::interactions();
    let (label, name) = (vocab::label(), vocab::foaf_name());
    let found = store
        .objects(&g, source, &label)
        .chain(store.objects(&g, source, &name))
        .any(|t| t.lexical().eq_ignore_ascii_case(pattern));
    found
}

/// Newest supporting mention first; ties broken by certainty.
pub fn query(store: &GraphStore, q: &ClaimQuery) -> Vec<QueryResult> {
    let persp = vocab::perspectives();
    let claims_g = vocab::claims();
    let mut out = Vec::new();
    for claim in store.claims() {
        let Some(t) = store.claim_triple(&claim) else { continue };
        if q.subject.as_deref().is_some_and(|p| !iri_matches(p, &t.subject))
            || q.predicate.as_deref().is_some_and(|p| !iri_matches(p, &t.predicate))
            || q.object.as_deref().is_some_and(|p| !term_matches(p, &t.object))
        {
            continue;
        }
        for mention in store.object_iris(&claims_g, &claim, &vocab::gaf("denotedBy")) {
            let time = store
                .object_iris(&persp, mention, &vocab::was_derived_from())
                .find_map(|e| event_start(store, e));
            if let Some(limit) = q.time {
                if !time.is_some_and(|t| t <= limit) {
                    continue;
                }
            }
            let source = store
                .object_iris(&persp, mention, &vocab::grasp("wasAttributedTo"))
                .next()
                .cloned();
            if let Some(pattern) = &q.source {
                if !source.as_ref().is_some_and(|s| source_matches(store, pattern, s)) {
                    continue;
                }
            }
            let attributions: Vec<Iri> = store
                .object_iris(&persp, mention, &vocab::grasp("hasAttribution"))
                .cloned()
                .collect();
            let mut push = |attribution: Option<Iri>, perspective: Perspective| {
                out.push(QueryResult {
                    claim: claim.clone(),
                    subject: t.subject.clone(),
                    predicate: t.predicate.clone(),
                    object: t.object.clone(),
                    mention: mention.clone(),
                    source: source.clone(),
                    attribution,
                    perspective,
                    time,
                })
            };
            if attributions.is_empty() {
                push(None, Perspective::default());
            }
            for a in attributions {
                let values: Vec<AttributionValue> = store
                    .object_iris(&persp, &a, &vocab::rdf_value())
                    .filter_map(|v| AttributionValue::from_iri(v.as_str()))
                    .collect();
                let perspective = Perspective::from_values(&values).unwrap_or_default();
                push(Some(a), perspective);
            }
        }
    }
    out.sort_by(|a, b| {
        (
            Reverse(a.time),
            Reverse(a.certainty_rank()),
            &a.claim,
            &a.mention,
            &a.attribution,
        )
            .cmp(&(
                Reverse(b.time),
                Reverse(b.certainty_rank()),
                &b.claim,
                &b.mention,
                &b.attribution,
            ))
    });
    out
}

/// Claims on one (subject, predicate) whose supporters disagree on
/// polarity or on the object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictGroup {
    pub subject: Iri,
    pub predicate: Iri,
    pub entries: Vec<QueryResult>,
}

impl ConflictGroup {
    pub fn sources(&self) -> Vec<&Iri> {
        let mut s: Vec<&Iri> = self.entries.iter().filter_map(|e| e.source.as_ref()).collect();
        s.sort();
        s.dedup();
        s
    }
}

pub fn detect_conflicts(store: &GraphStore, subject: Option<&str>, predicate: Option<&str>) -> Vec<ConflictGroup> {
    let mut q = ClaimQuery::new();
    q.subject = subject.map(str::to_string);
    q.predicate = predicate.map(str::to_string);
    let mut groups: BTreeMap<(Iri, Iri), Vec<QueryResult>> = BTreeMap::new();
    for r in query(store, &q) {
        groups
            .entry((r.subject.clone(), r.predicate.clone()))
            .or_default()
            .push(r);
    }
    groups
        .into_iter()
        .filter(|(_, entries)| {
            entries.iter().any(|a| {
                entries
                    .iter()
                    .any(|b| a.polarity() != b.polarity() || a.object != b.object)
            })
        })
        .map(|((subject, predicate), entries)| ConflictGroup {
            subject,
            predicate,
            entries,
        })
        .collect()
}
