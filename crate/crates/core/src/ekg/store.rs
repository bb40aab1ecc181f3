use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Bound;
use std::sync::{Arc, RwLock};

use super::term::{vocab, Iri, Quad, Term};

/// A set of quads. Iteration order is sorted by subject, predicate, object,
/// graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GraphStore {
    quads: BTreeSet<Quad>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionViolation {
    /// A quad sits in a graph that is neither a layer graph nor a claim.
    UnknownGraph { graph: Iri },
    /// A claim graph must hold exactly one triple.
    ClaimGraphSize { claim: Iri, triples: usize },
    /// The same triple appears in two graphs.
    SharedTriple { triple: String, graphs: Vec<Iri> },
}

impl fmt::Display for PartitionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionViolation::UnknownGraph { graph } => write!(f, "quads in unknown graph <{graph}>"),
            PartitionViolation::ClaimGraphSize { claim, triples } => {
                write!(f, "claim graph <{claim}> holds {triples} triples")
            }
            PartitionViolation::SharedTriple { triple, graphs } => {
                let names: Vec<String> = graphs.iter().map(|g| format!("<{g}>")).collect();
                write!(f, "{triple} appears in {}", names.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroundingViolation {
    ClaimWithoutMention(Iri),
    MentionWithoutEvent(Iri),
}

impl GraphStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.quads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quads.is_empty()
    }

    /// True when the quad was not present.
    pub fn insert(&mut self, quad: Quad) -> bool {
        self.quads.insert(quad)
    }

    pub fn contains(&self, quad: &Quad) -> bool {
        self.quads.contains(quad)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Quad> {
        self.quads.iter()
    }

    pub fn extend(&mut self, other: &GraphStore) -> usize {
        other.iter().filter(|q| self.insert((*q).clone())).count()
    }

    /// Quads in `self` but not in `before`.
    pub fn difference(&self, before: &GraphStore) -> GraphStore {
        GraphStore {
            quads: self.quads.difference(&before.quads).cloned().collect(),
        }
    }

    pub fn graph<'a>(&'a self, graph: &'a Iri) -> impl Iterator<Item = &'a Quad> + 'a {
        self.quads.iter().filter(move |q| &q.graph == graph)
    }

    pub fn graph_names(&self) -> BTreeSet<&Iri> {
        self.quads.iter().map(|q| &q.graph).collect()
    }

    /// Quads with the given subject and predicate, in any graph.
    pub fn with_subject_predicate<'a>(&'a self, s: &'a Iri, p: &'a Iri) -> impl Iterator<Item = &'a Quad> + 'a {
        let low = Quad {
            subject: s.clone(),
            predicate: p.clone(),
            object: Term::Iri(Iri::new("")),
            graph: Iri::new(""),
        };
        self.quads
            .range((Bound::Included(low), Bound::Unbounded))
            .take_while(move |q| &q.subject == s && &q.predicate == p)
    }

    /// Objects of `s p ?o` in `graph`.
    pub fn objects<'a>(&'a self, graph: &'a Iri, s: &'a Iri, p: &'a Iri) -> impl Iterator<Item = &'a Term> + 'a {
        self.with_subject_predicate(s, p)
            .filter(move |q| &q.graph == graph)
            .map(|q| &q.object)
    }

    pub fn object_iris<'a>(&'a self, graph: &'a Iri, s: &'a Iri, p: &'a Iri) -> impl Iterator<Item = &'a Iri> + 'a {
        self.objects(graph, s, p).filter_map(Term::as_iri)
    }

    /// Subjects of `?s p o` in `graph`.
    pub fn subjects<'a>(&'a self, graph: &'a Iri, p: &'a Iri, o: &'a Term) -> impl Iterator<Item = &'a Iri> + 'a {
        self.quads
            .iter()
            .filter(move |q| &q.graph == graph && &q.predicate == p && &q.object == o)
            .map(|q| &q.subject)
    }

    /// Subjects typed `gaf:Assertion` in the Claims graph.
    pub fn claims(&self) -> BTreeSet<Iri> {
        let claims = vocab::claims();
        let assertion = Term::Iri(vocab::gaf("Assertion"));
        self.subjects(&claims, &vocab::rdf_type(), &assertion)
            .cloned()
            .collect()
    }

    /// The single triple of a claim graph, if it has exactly one.
    pub fn claim_triple<'a>(&'a self, claim: &'a Iri) -> Option<&'a Quad> {
        let mut it = self.graph(claim);
        let first = it.next()?;
        it.next().is_none().then_some(first)
    }

    /// Every quad lives in one of the four layer graphs or in a claim
    /// graph of exactly one triple, and no triple is repeated across graphs.
    pub fn validate_partition(&self) -> Vec<PartitionViolation> {
        let layers = [
            vocab::instances(),
            vocab::interactions(),
            vocab::claims(),
            vocab::perspectives(),
        ];
        let claims = self.claims();
        let mut out = Vec::new();
        let mut sizes: BTreeMap<&Iri, usize> = BTreeMap::new();
        let mut homes: BTreeMap<(&Iri, &Iri, &Term), Vec<Iri>> = BTreeMap::new();
        for q in &self.quads {
            homes.entry(q.triple()).or_default().push(q.graph.clone());
            if layers.contains(&q.graph) {
                continue;
            }
            if claims.contains(&q.graph) {
                *sizes.entry(&q.graph).or_default() += 1;
            } else if !out
                .iter()
                .any(|v| matches!(v, PartitionViolation::UnknownGraph { graph } if graph == &q.graph))
            {
                out.push(PartitionViolation::UnknownGraph { graph: q.graph.clone() });
            }
        }
        for claim in &claims {
            let n = sizes.get(claim).copied().unwrap_or(0);
            if n != 1 {
                out.push(PartitionViolation::ClaimGraphSize {
                    claim: claim.clone(),
                    triples: n,
                });
            }
        }
        for ((s, p, o), graphs) in homes {
            if graphs.len() > 1 {
                out.push(PartitionViolation::SharedTriple {
                    triple: format!("<{s}> <{p}> {o}"),
                    graphs,
                });
            }
        }
        out
    }

    /// Claims need a mention and mentions need an interaction event.
    pub fn validate_grounding(&self) -> Vec<GroundingViolation> {
        let claims_g = vocab::claims();
        let persp = vocab::perspectives();
        let denoted_by = vocab::gaf("denotedBy");
        let derived = vocab::was_derived_from();
        let mut out = Vec::new();
        for claim in self.claims() {
            let mentions: Vec<&Iri> = self.object_iris(&claims_g, &claim, &denoted_by).collect();
            if mentions.is_empty() {
                out.push(GroundingViolation::ClaimWithoutMention(claim.clone()));
            }
            for m in mentions {
                if self.object_iris(&persp, m, &derived).next().is_none() {
                    out.push(GroundingViolation::MentionWithoutEvent(m.clone()));
                }
            }
        }
        out.dedup();
        out
    }
}

impl FromIterator<Quad> for GraphStore {
    fn from_iter<T: IntoIterator<Item = Quad>>(iter: T) -> Self {
        GraphStore {
            quads: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a GraphStore {
    type Item = &'a Quad;
    type IntoIter = std::collections::btree_set::Iter<'a, Quad>;

    fn into_iter(self) -> Self::IntoIter {
        self.quads.iter()
    }
}

/// A store shared between readers and one writer. Readers take cheap
/// snapshots; a batch either lands completely or not at all.
#[derive(Debug, Default)]
pub struct SharedGraphStore {
    current: RwLock<Arc<GraphStore>>,
}

impl SharedGraphStore {
    pub fn new(store: GraphStore) -> Self {
        SharedGraphStore {
            current: RwLock::new(Arc::new(store)),
        }
    }

    pub fn snapshot(&self) -> Arc<GraphStore> {
        self.current.read().unwrap_or_else(|e| e.into_inner()).clone()
    }

    /// Runs `batch` on a private copy and publishes it only on success.
    /// Writers are serialized by the lock.
    pub fn apply<T, E>(&self, batch: impl FnOnce(&mut GraphStore) -> Result<T, E>) -> Result<T, E> {
        let mut guard = self.current.write().unwrap_or_else(|e| e.into_inner());
        let mut next = GraphStore::clone(&guard);
        let out = batch(&mut next)?;
        *guard = Arc::new(next);
        Ok(out)
    }
}
