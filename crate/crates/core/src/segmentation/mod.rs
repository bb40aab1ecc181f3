//! Baseline segmenters and identity resolution that prepare raw signals for
//! annotation. Real detectors plug in through [`PerceptionPlugin`].

mod entities;
mod identity;
mod tokens;

use std::path::Path;

pub use entities::{detect_entities, EntitySpan, Gazetteer, GazetteerError};
pub use identity::{resolve_identity, IdentityQuery, NewInstance, RegistryEntry, Resolution, PERSON_CLASS};
pub use tokens::{token_mentions, tokenize, TokenSpan};

use crate::ids::IdMint;
use crate::model::{
    Annotation, AnnotationValue, BoundingBox, Bounds, Extra, Mention, ModelError, Segment, Signal, SignalRuler,
};

/// One detector hit on an image.
#[derive(Debug, Clone, PartialEq)]
pub struct Detection {
    pub bounds: Bounds,
    /// Annotation kind, e.g. `person` or `object`.
    pub kind: String,
    pub value: AnnotationValue,
}

/// A mention per detection, annotated with the detector as source and the
/// signal's start time as timestamp.
pub fn box_mentions(
    signal: &Signal,
    detections: &[Detection],
    detector: &str,
    ids: &mut IdMint,
) -> Result<Vec<Mention>, ModelError> {
    let SignalRuler::MultiIndex(ruler) = &signal.ruler else {
        return Err(ModelError::IncompatibleSegment(signal.id.clone()));
    };
    detections
        .iter()
        .map(|d| {
            if !d.bounds.is_well_formed() || !ruler.bounds.contains(&d.bounds) {
                return Err(ModelError::OutOfBounds {
                    container: signal.id.clone(),
                    segment: d.bounds.to_string(),
                });
            }
            Ok(Mention {
                id: ids.next("mention"),
                segments: vec![Segment::Box(BoundingBox::new(signal.id.clone(), d.bounds))],
                annotations: vec![Annotation::new(
                    d.kind.clone(),
                    d.value.clone(),
                    detector,
                    signal.time.start,
                )],
                extra: Extra::new(),
            })
        })
        .collect()
}

/// Seam for real perception modules (face, object, speech detectors).
pub trait PerceptionPlugin {
    /// Used as the annotation source.
    fn name(&self) -> &str;

    /// Detections for one image signal whose media lives under `root`.
    fn detect(&self, signal: &Signal, root: &Path) -> Result<Vec<Detection>, String>;

    fn annotate(&self, signal: &Signal, root: &Path, ids: &mut IdMint) -> Result<Vec<Mention>, String> {
        let detections = self.detect(signal, root)?;
        box_mentions(signal, &detections, self.name(), ids).map_err(|e| e.to_string())
    }
}
