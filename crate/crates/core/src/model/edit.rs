use std::time::{SystemTime, UNIX_EPOCH};

use super::check::{segment_fits, SegmentProblem};
use super::{Annotation, AnnotationValue, Extra, Mention, Millis, ModelError, ScenarioBundle, Segment};

/// Current UTC time in epoch milliseconds.
pub fn now_millis() -> Millis {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as Millis)
        .unwrap_or(0)
}

/// Annotation to attach; a missing timestamp is filled in with the current
/// time when the mention is created.
#[derive(Debug, Clone, PartialEq)]
pub struct NewAnnotation {
    pub kind: String,
    pub value: AnnotationValue,
    pub source: String,
    pub timestamp: Option<Millis>,
}

impl NewAnnotation {
    pub fn new(kind: impl Into<String>, value: AnnotationValue, source: impl Into<String>) -> Self {
        NewAnnotation {
            kind: kind.into(),
            value,
            source: source.into(),
            timestamp: None,
        }
    }

    pub fn at(mut self, timestamp: Millis) -> Self {
        self.timestamp = Some(timestamp);
        self
    }

    fn finish(self, now: Millis) -> Annotation {
        Annotation::new(self.kind, self.value, self.source, self.timestamp.unwrap_or(now))
    }
}

impl From<Annotation> for NewAnnotation {
    fn from(a: Annotation) -> Self {
        NewAnnotation {
            kind: a.kind,
            value: a.value,
            source: a.source,
            timestamp: Some(a.timestamp),
        }
    }
}

fn fresh_id() -> String {
    uuid::Uuid::new_v4().to_string()
}

impl ScenarioBundle {
    fn check_segments(&self, segments: &[Segment]) -> Result<(), ModelError> {
        if segments.is_empty() {
            return Err(ModelError::EmptySegmentList);
        }
        let (containers, _) = self.containers();
        for seg in segments {
            match segment_fits(&containers, seg) {
                Ok(()) => {}
                Err(SegmentProblem::Dangling) => {
                    return Err(ModelError::DanglingContainer(seg.container_id().to_string()))
                }
                Err(SegmentProblem::Incompatible) => {
                    return Err(ModelError::IncompatibleSegment(seg.container_id().to_string()))
                }
                Err(SegmentProblem::OutOfBounds | SegmentProblem::Inverted(..)) => {
                    return Err(ModelError::OutOfBounds {
                        container: seg.container_id().to_string(),
                        segment: seg.to_string(),
                    })
                }
            }
        }
        Ok(())
    }

    /// Appends a mention with a fresh id to a signal. Segments must lie in
    /// the signal's ruler (or in an annotation value container).
    pub fn add_mention(
        &mut self,
        signal_id: &str,
        segments: Vec<Segment>,
        annotations: Vec<NewAnnotation>,
    ) -> Result<Mention, ModelError> {
        if self.signal(signal_id).is_none() {
            return Err(ModelError::UnknownSignal(signal_id.to_string()));
        }
        if annotations.is_empty() {
            return Err(ModelError::EmptyAnnotationList);
        }
        self.check_segments(&segments)?;
        let now = now_millis();
        let mention = Mention {
            id: fresh_id(),
            segments,
            annotations: annotations.into_iter().map(|a| a.finish(now)).collect(),
            extra: Extra::new(),
        };
        let signal = self.signal_mut(signal_id).expect("checked above");
        signal.mentions.push(mention.clone());
        Ok(mention)
    }

    /// Annotates an annotation value (e.g. a token) by adding a mention whose
    /// only segment is the value's atomic container. The new mention lives on
    /// the same signal as the base value.
    pub fn stack_annotation(&mut self, base_value_id: &str, annotation: NewAnnotation) -> Result<Mention, ModelError> {
        let signal_id = self
            .all_signals()
            .find(|s| {
                s.mentions
                    .iter()
                    .flat_map(|m| &m.annotations)
                    .any(|a| a.value.container_id() == Some(base_value_id))
            })
            .map(|s| s.id.clone())
            .ok_or_else(|| ModelError::UnknownBase(base_value_id.to_string()))?;
        let segment = Segment::Atomic {
            container_id: base_value_id.to_string(),
        };
        self.add_mention(&signal_id, vec![segment], vec![annotation])
    }

    pub fn remove_mention(&mut self, mention_id: &str) -> Result<Mention, ModelError> {
        for signal in self.signals.values_mut().flatten() {
            if let Some(pos) = signal.mentions.iter().position(|m| m.id == mention_id) {
                return Ok(signal.mentions.remove(pos));
            }
        }
        Err(ModelError::UnknownMention(mention_id.to_string()))
    }

    /// Replaces the mention with the same id, returning the previous one.
    pub fn replace_mention(&mut self, mention: Mention) -> Result<Mention, ModelError> {
        if mention.annotations.is_empty() {
            return Err(ModelError::EmptyAnnotationList);
        }
        if self.find_mention(&mention.id).is_none() {
            return Err(ModelError::UnknownMention(mention.id));
        }
        self.check_segments(&mention.segments)?;
        let slot = self
            .signals
            .values_mut()
            .flatten()
            .flat_map(|s| s.mentions.iter_mut())
            .find(|m| m.id == mention.id)
            .expect("checked above");
        Ok(std::mem::replace(slot, mention))
    }
}
