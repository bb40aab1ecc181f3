//! Episodic knowledge graph.
//!
//! Layout, one named graph per layer plus one per claim:
//!
//! | graph | holds |
//! |---|---|
//! | `robotWorld:Instances` | identities and the mentions they are denoted in |
//! | `robotTalk:Interactions` | chat/visual events, sources, episode context |
//! | `robotWorld:Claims` | one assertion node per claim, with its mentions |
//! | `robotTalk:Perspectives` | mention nodes and their attributions |
//! | `robotWorld:<claim>` | the single triple of that claim |

mod emit;
mod query;
mod store;
mod term;
mod trig;

pub use emit::{
    box_index_range, emit_claim, emit_from_scenario, emit_instance, emit_instance_iri, emit_signal, event_start,
    resolve_term, sanitize, triple_terms, Area, Claim, EkgError, EmitConfig, EpisodeContext, MentionKind, MentionNode,
    Place,
};
pub use query::{detect_conflicts, query, ClaimQuery, ConflictGroup, QueryResult};
pub use store::{GraphStore, GroundingViolation, PartitionViolation, SharedGraphStore};
pub use term::{vocab, xsd_string, Iri, Literal, Quad, Term};
pub use trig::{parse_trig, read_batches, serialize_trig, write_batch, BatchKind, ParseError};
