use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use super::{AnnotationValue, Bounds, Millis, Modality, ModelError, ScenarioBundle, Segment, Signal, SignalRuler};

/// Annotation timestamps in this range are epoch seconds, not milliseconds.
/// Smaller values are scenario-relative millisecond offsets.
const EPOCH_SECONDS: std::ops::Range<i64> = 1_000_000_000..100_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extent {
    Time { start: Millis, end: Millis },
    Index { start: u64, stop: u64 },
    Pixels(Bounds),
    Atomic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContainerKind {
    Scenario,
    Signal(Modality),
    /// An annotation value with its own atomic ruler, e.g. a token.
    AnnotationValue {
        signal: String,
        mention: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Container {
    pub id: String,
    pub kind: ContainerKind,
    pub extent: Extent,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    DanglingContainer {
        at: String,
        id: String,
    },
    DuplicateId {
        id: String,
    },
    WrongContainer {
        at: String,
        expected: String,
        found: String,
    },
    InvertedExtent {
        at: String,
        start: i64,
        end: i64,
    },
    OutOfBounds {
        at: String,
        segment: String,
        container: String,
    },
    IncompatibleSegment {
        at: String,
        segment: String,
        container: String,
    },
    EmptyMention {
        at: String,
    },
    SeqLengthMismatch {
        at: String,
        ruler_stop: u64,
        seq_len: u64,
    },
    TokenTextMismatch {
        at: String,
        token: String,
        text: String,
    },
    FaceProbability {
        at: String,
        value: f64,
    },
    MissingMedia {
        at: String,
        path: String,
    },
}

impl Violation {
    /// Variant name, for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::DanglingContainer { .. } => "DanglingContainer",
            Violation::DuplicateId { .. } => "DuplicateId",
            Violation::WrongContainer { .. } => "WrongContainer",
            Violation::InvertedExtent { .. } => "InvertedExtent",
            Violation::OutOfBounds { .. } => "OutOfBounds",
            Violation::IncompatibleSegment { .. } => "IncompatibleSegment",
            Violation::EmptyMention { .. } => "EmptyMention",
            Violation::SeqLengthMismatch { .. } => "SeqLengthMismatch",
            Violation::TokenTextMismatch { .. } => "TokenTextMismatch",
            Violation::FaceProbability { .. } => "FaceProbability",
            Violation::MissingMedia { .. } => "MissingMedia",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DanglingContainer { at, id } => write!(f, "{at}: container {id} does not resolve"),
            Violation::DuplicateId { id } => write!(f, "id {id} is used by more than one container"),
            Violation::WrongContainer { at, expected, found } => {
                write!(f, "{at}: container_id {found} should be {expected}")
            }
            Violation::InvertedExtent { at, start, end } => write!(f, "{at}: start {start} > end {end}"),
            Violation::OutOfBounds { at, segment, container } => {
                write!(f, "{at}: {segment} is outside {container}")
            }
            Violation::IncompatibleSegment { at, segment, container } => {
                write!(f, "{at}: {segment} cannot segment {container}")
            }
            Violation::EmptyMention { at } => write!(f, "{at}: mention without segments or annotations"),
            Violation::SeqLengthMismatch {
                at,
                ruler_stop,
                seq_len,
            } => {
                write!(f, "{at}: ruler stop {ruler_stop} but seq has {seq_len} characters")
            }
            Violation::TokenTextMismatch { at, token, text } => {
                write!(f, "{at}: token {token:?} covers {text:?}")
            }
            Violation::FaceProbability { at, value } => write!(f, "{at}: faceprob {value} outside [0, 1]"),
            Violation::MissingMedia { at, path } => write!(f, "{at}: media file {path} is missing"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn dangling(&self) -> impl Iterator<Item = &Violation> {
        self.violations
            .iter()
            .filter(|v| matches!(v, Violation::DanglingContainer { .. }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelWarning {
    /// A temporal ruler or time segment had start > end and was swapped.
    SwappedTime { at: String, start: Millis, end: Millis },
    /// An epoch-seconds annotation timestamp was converted to milliseconds.
    EpochSeconds { at: String, original: i64 },
}

impl fmt::Display for ModelWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelWarning::SwappedTime { at, start, end } => {
                write!(f, "{at}: start {start} > end {end}, swapped")
            }
            ModelWarning::EpochSeconds { at, original } => {
                write!(f, "{at}: timestamp {original} read as epoch seconds")
            }
        }
    }
}

/// Warnings `normalize` would emit, without mutating.
pub fn normalize_warnings(bundle: &ScenarioBundle) -> Vec<ModelWarning> {
    bundle.clone().normalize()
}

fn signal_at(s: &Signal) -> String {
    format!("{}/{}", s.modality, s.id)
}

fn mention_at(s: &Signal, mention: &str) -> String {
    format!("{}/{}/mentions/{}", s.modality, s.id, mention)
}

fn swap_if_inverted(at: String, start: &mut Millis, end: &mut Millis, out: &mut Vec<ModelWarning>) {
    if *start > *end {
        out.push(ModelWarning::SwappedTime {
            at,
            start: *start,
            end: *end,
        });
        std::mem::swap(start, end);
    }
}

impl ScenarioBundle {
    /// Swaps inverted temporal extents and converts epoch-second annotation
    /// timestamps. Idempotent: a second call reports nothing.
    pub fn normalize(&mut self) -> Vec<ModelWarning> {
        let mut out = Vec::new();
        let ruler = &mut self.scenario.ruler;
        swap_if_inverted(self.scenario.id.clone(), &mut ruler.start, &mut ruler.end, &mut out);
        for signal in self.signals.values_mut().flatten() {
            let at = signal_at(signal);
            swap_if_inverted(
                format!("{at}/time"),
                &mut signal.time.start,
                &mut signal.time.end,
                &mut out,
            );
            for mention in &mut signal.mentions {
                let mat = format!("{at}/mentions/{}", mention.id);
                for seg in &mut mention.segments {
                    if let Segment::Time(t) = seg {
                        swap_if_inverted(mat.clone(), &mut t.start, &mut t.end, &mut out);
                    }
                }
                for (i, ann) in mention.annotations.iter_mut().enumerate() {
                    if ann.timestamp_epoch_seconds.is_none() && EPOCH_SECONDS.contains(&ann.timestamp) {
                        out.push(ModelWarning::EpochSeconds {
                            at: format!("{mat}/annotations/{i}"),
                            original: ann.timestamp,
                        });
                        ann.timestamp_epoch_seconds = Some(ann.timestamp);
                        ann.timestamp *= 1000;
                    }
                }
            }
        }
        out
    }

    /// Every container in the scenario by id, with duplicate ids reported
    /// separately.
    pub(crate) fn containers(&self) -> (BTreeMap<String, Container>, Vec<String>) {
        let mut map = BTreeMap::new();
        let mut dups = Vec::new();
        let mut add = |c: Container| {
            if map.contains_key(&c.id) {
                dups.push(c.id.clone());
            } else {
                map.insert(c.id.clone(), c);
            }
        };
        let r = &self.scenario.ruler;
        add(Container {
            id: self.scenario.id.clone(),
            kind: ContainerKind::Scenario,
            extent: Extent::Time {
                start: r.start,
                end: r.end,
            },
        });
        for signal in self.all_signals() {
            let extent = match &signal.ruler {
                SignalRuler::Index(r) => Extent::Index {
                    start: r.start,
                    stop: r.stop,
                },
                SignalRuler::MultiIndex(r) => Extent::Pixels(r.bounds),
            };
            add(Container {
                id: signal.id.clone(),
                kind: ContainerKind::Signal(signal.modality),
                extent,
            });
            for mention in &signal.mentions {
                for ann in &mention.annotations {
                    if let Some(id) = ann.value.container_id() {
                        add(Container {
                            id: id.to_string(),
                            kind: ContainerKind::AnnotationValue {
                                signal: signal.id.clone(),
                                mention: mention.id.clone(),
                            },
                            extent: Extent::Atomic,
                        });
                    }
                }
            }
        }
        (map, dups)
    }

    /// Map from container id to container, total over every id referenced
    /// by a ruler or segment.
    pub fn container_closure(&self) -> Result<BTreeMap<String, Container>, ModelError> {
        let (map, _) = self.containers();
        for (_, id) in self.references() {
            if !map.contains_key(&id) {
                return Err(ModelError::DanglingContainer(id));
            }
        }
        Ok(map)
    }

    /// (location, container id) for every reference in the scenario.
    fn references(&self) -> Vec<(String, String)> {
        let mut out = vec![(self.scenario.id.clone(), self.scenario.ruler.container_id.clone())];
        for signal in self.all_signals() {
            let at = signal_at(signal);
            out.push((format!("{at}/time"), signal.time.container_id.clone()));
            out.push((format!("{at}/ruler"), signal.ruler.container_id().to_string()));
            for mention in &signal.mentions {
                let mat = mention_at(signal, &mention.id);
                for seg in &mention.segments {
                    out.push((mat.clone(), seg.container_id().to_string()));
                }
                for ann in &mention.annotations {
                    if let AnnotationValue::Token(t) = &ann.value {
                        out.push((mat.clone(), t.ruler_container.clone()));
                    }
                }
            }
        }
        out
    }

    /// Structural validation. Problems are collected, never raised.
    pub fn validate(&self) -> ValidationReport {
        let mut v = Vec::new();
        let (containers, dups) = self.containers();
        v.extend(dups.into_iter().map(|id| Violation::DuplicateId { id }));

        let scenario = &self.scenario;
        if scenario.ruler.container_id != scenario.id {
            v.push(Violation::WrongContainer {
                at: scenario.id.clone(),
                expected: scenario.id.clone(),
                found: scenario.ruler.container_id.clone(),
            });
        }
        if scenario.ruler.start > scenario.ruler.end {
            v.push(Violation::InvertedExtent {
                at: scenario.id.clone(),
                start: scenario.ruler.start,
                end: scenario.ruler.end,
            });
        }

        for signal in self.all_signals() {
            let at = signal_at(signal);
            let time = Segment::Time(signal.time.clone());
            if signal.time.container_id != scenario.id {
                v.push(Violation::WrongContainer {
                    at: format!("{at}/time"),
                    expected: scenario.id.clone(),
                    found: signal.time.container_id.clone(),
                });
            }
            check_segment(&containers, &format!("{at}/time"), &time, &mut v);
            if signal.ruler.container_id() != signal.id {
                v.push(Violation::WrongContainer {
                    at: format!("{at}/ruler"),
                    expected: signal.id.clone(),
                    found: signal.ruler.container_id().to_string(),
                });
            }
            match &signal.ruler {
                SignalRuler::Index(r) if r.start > r.stop => v.push(Violation::InvertedExtent {
                    at: format!("{at}/ruler"),
                    start: r.start as i64,
                    end: r.stop as i64,
                }),
                SignalRuler::MultiIndex(r) if !r.bounds.is_well_formed() => v.push(Violation::InvertedExtent {
                    at: format!("{at}/ruler"),
                    start: r.bounds.x0 as i64,
                    end: r.bounds.x1 as i64,
                }),
                _ => {}
            }
            if let (Some(seq), SignalRuler::Index(r)) = (&signal.seq, &signal.ruler) {
                let len = seq.chars().count() as u64;
                if r.stop != len {
                    v.push(Violation::SeqLengthMismatch {
                        at: at.clone(),
                        ruler_stop: r.stop,
                        seq_len: len,
                    });
                }
            }

            for mention in &signal.mentions {
                let mat = mention_at(signal, &mention.id);
                if mention.segments.is_empty() || mention.annotations.is_empty() {
                    v.push(Violation::EmptyMention { at: mat.clone() });
                }
                for seg in &mention.segments {
                    check_segment(&containers, &mat, seg, &mut v);
                }
                for ann in &mention.annotations {
                    match &ann.value {
                        AnnotationValue::Token(t) => {
                            if !containers.contains_key(&t.ruler_container) {
                                v.push(Violation::DanglingContainer {
                                    at: mat.clone(),
                                    id: t.ruler_container.clone(),
                                });
                            } else if t.ruler_container != t.id {
                                v.push(Violation::WrongContainer {
                                    at: mat.clone(),
                                    expected: t.id.clone(),
                                    found: t.ruler_container.clone(),
                                });
                            }
                            self.check_token_text(signal, &mat, &mention.segments, &t.value, &mut v);
                        }
                        AnnotationValue::Face(f) if !(0.0..=1.0).contains(&f.faceprob) => {
                            v.push(Violation::FaceProbability {
                                at: mat.clone(),
                                value: f.faceprob,
                            })
                        }
                        _ => {}
                    }
                }
            }
        }
        ValidationReport { violations: v }
    }

    /// [`validate`](Self::validate) plus a check that every media file exists
    /// under `root`.
    pub fn validate_with_media(&self, root: &Path) -> ValidationReport {
        let mut report = self.validate();
        for signal in self.all_signals() {
            for file in &signal.files {
                let rel = file.split('#').next().unwrap_or(file);
                if !root.join(rel).is_file() {
                    report.violations.push(Violation::MissingMedia {
                        at: signal_at(signal),
                        path: rel.to_string(),
                    });
                }
            }
        }
        report
    }

    fn check_token_text(&self, signal: &Signal, at: &str, segments: &[Segment], token: &str, v: &mut Vec<Violation>) {
        let [Segment::Index(seg)] = segments else { return };
        let host = if seg.container_id == signal.id {
            Some(signal)
        } else {
            self.signal(&seg.container_id)
        };
        let Some(host) = host else { return };
        if let Some(text) = host.text_span(seg.start, seg.stop) {
            if text != token {
                v.push(Violation::TokenTextMismatch {
                    at: at.to_string(),
                    token: token.to_string(),
                    text,
                });
            }
        }
    }
}

pub(crate) enum SegmentProblem {
    Dangling,
    Inverted(i64, i64),
    OutOfBounds,
    Incompatible,
}

/// Containment of one segment in the container it names.
pub(crate) fn segment_fits(containers: &BTreeMap<String, Container>, seg: &Segment) -> Result<(), SegmentProblem> {
    let Some(container) = containers.get(seg.container_id()) else {
        return Err(SegmentProblem::Dangling);
    };
    match (seg, &container.extent) {
        (Segment::Index(s), Extent::Index { start, stop }) => {
            if s.start > s.stop {
                Err(SegmentProblem::Inverted(s.start as i64, s.stop as i64))
            } else if s.start < *start || s.stop > *stop {
                Err(SegmentProblem::OutOfBounds)
            } else {
                Ok(())
            }
        }
        (Segment::Box(b), Extent::Pixels(outer)) => {
            if !b.bounds.is_well_formed() {
                Err(SegmentProblem::Inverted(b.bounds.x0 as i64, b.bounds.x1 as i64))
            } else if !outer.contains(&b.bounds) {
                Err(SegmentProblem::OutOfBounds)
            } else {
                Ok(())
            }
        }
        (Segment::Time(t), Extent::Time { start, end }) => {
            if t.start > t.end {
                Err(SegmentProblem::Inverted(t.start, t.end))
            } else if t.start < *start || t.end > *end {
                Err(SegmentProblem::OutOfBounds)
            } else {
                Ok(())
            }
        }
        (Segment::Atomic { .. }, Extent::Atomic) => Ok(()),
        _ => Err(SegmentProblem::Incompatible),
    }
}

fn check_segment(containers: &BTreeMap<String, Container>, at: &str, seg: &Segment, v: &mut Vec<Violation>) {
    match segment_fits(containers, seg) {
        Ok(()) => {}
        Err(SegmentProblem::Dangling) => v.push(Violation::DanglingContainer {
            at: at.to_string(),
            id: seg.container_id().to_string(),
        }),
        Err(SegmentProblem::Inverted(start, end)) => v.push(Violation::InvertedExtent {
            at: at.to_string(),
            start,
            end,
        }),
        Err(SegmentProblem::OutOfBounds) => v.push(Violation::OutOfBounds {
            at: at.to_string(),
            segment: seg.to_string(),
            container: seg.container_id().to_string(),
        }),
        Err(SegmentProblem::Incompatible) => v.push(Violation::IncompatibleSegment {
            at: at.to_string(),
            segment: seg.to_string(),
            container: seg.container_id().to_string(),
        }),
    }
}
