//! In-memory scenario model: containers, rulers, segments, signals, mentions
//! and layered annotations.
//!
//! Every container (scenario, signal, annotation value with its own ruler) is
//! addressed by id; rulers and segments point at their container through
//! `container_id`. [`ScenarioBundle`] owns a scenario together with the
//! signals of each modality and offers validation, closure and co-reference
//! queries over them.

mod check;
mod coref;
mod edit;
pub mod perspective;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde_json::{Map, Value};

pub use check::{normalize_warnings, Container, ContainerKind, Extent, ModelWarning, ValidationReport, Violation};
pub use coref::{CorefEntry, CoreferenceIndex};
pub use edit::{now_millis, NewAnnotation};
pub use perspective::{AttributionValue, Certainty, Dimension, Emotion, Perspective, Polarity, Sentiment};

/// Milliseconds. Ruler and segment times are relative to the scenario epoch;
/// annotation timestamps are UTC epoch milliseconds.
pub type Millis = i64;

/// Unknown JSON keys kept for round-tripping.
pub type Extra = Map<String, Value>;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ModelError {
    #[error("unknown signal {0}")]
    UnknownSignal(String),
    #[error("segment {segment} lies outside container {container}")]
    OutOfBounds { container: String, segment: String },
    #[error("segment kind does not fit container {0}")]
    IncompatibleSegment(String),
    #[error("a mention needs at least one segment")]
    EmptySegmentList,
    #[error("a mention needs at least one annotation")]
    EmptyAnnotationList,
    #[error("no annotation value with id {0}")]
    UnknownBase(String),
    #[error("no mention with id {0}")]
    UnknownMention(String),
    #[error("container {0} does not resolve")]
    DanglingContainer(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Modality {
    Audio,
    Image,
    Text,
    Video,
}

impl Modality {
    pub const ALL: [Modality; 4] = [Modality::Audio, Modality::Image, Modality::Text, Modality::Video];

    pub fn as_str(self) -> &'static str {
        match self {
            Modality::Audio => "audio",
            Modality::Image => "image",
            Modality::Text => "text",
            Modality::Video => "video",
        }
    }

    /// Signal kind stored in this modality's metadata file. Video is a
    /// sequence of image frames.
    pub fn signal_kind(self) -> SignalKind {
        match self {
            Modality::Audio => SignalKind::Audio,
            Modality::Image | Modality::Video => SignalKind::Image,
            Modality::Text => SignalKind::Text,
        }
    }
}

impl fmt::Display for Modality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Modality {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "audio" => Ok(Modality::Audio),
            "image" => Ok(Modality::Image),
            "text" => Ok(Modality::Text),
            "video" => Ok(Modality::Video),
            other => Err(format!("unknown modality {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignalKind {
    Text,
    Image,
    Audio,
}

impl SignalKind {
    pub fn type_name(self) -> &'static str {
        match self {
            SignalKind::Text => "TextSignal",
            SignalKind::Image => "ImageSignal",
            SignalKind::Audio => "AudioSignal",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Person {
    pub id: String,
    pub name: String,
    pub birth_date: Option<String>,
    pub gender: Option<String>,
    pub extra: Extra,
}

impl Person {
    pub fn new(id: impl Into<String>, name: impl Into<String>) -> Self {
        Person {
            id: id.into(),
            name: name.into(),
            birth_date: None,
            gender: None,
            extra: Extra::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObjectInstance {
    pub id: String,
    pub label: Option<String>,
    pub extra: Extra,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioContext {
    pub agent: String,
    pub speaker: Option<Person>,
    pub persons: Vec<Person>,
    pub objects: Vec<ObjectInstance>,
    pub extra: Extra,
}

impl ScenarioContext {
    pub fn new(agent: impl Into<String>) -> Self {
        ScenarioContext {
            agent: agent.into(),
            speaker: None,
            persons: Vec::new(),
            objects: Vec::new(),
            extra: Extra::new(),
        }
    }

    /// Speaker first, then the listed persons, skipping repeated ids.
    pub fn participants(&self) -> impl Iterator<Item = &Person> {
        let mut seen = std::collections::HashSet::new();
        self.speaker
            .iter()
            .chain(self.persons.iter())
            .filter(move |p| seen.insert(p.id.clone()))
    }
}

/// Scenario-global temporal ruler.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalRuler {
    pub container_id: String,
    pub start: Millis,
    pub end: Millis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TimeTag {
    #[default]
    TimeSegment,
    TemporalRuler,
}

/// Grounds a signal (or a segment) on the scenario's temporal ruler.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeSegment {
    pub container_id: String,
    pub start: Millis,
    pub end: Millis,
    pub tag: TimeTag,
}

impl TimeSegment {
    pub fn new(container_id: impl Into<String>, start: Millis, end: Millis) -> Self {
        TimeSegment {
            container_id: container_id.into(),
            start,
            end,
            tag: TimeTag::TimeSegment,
        }
    }
}

/// Half-open offset range `[start, stop)` over characters or samples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSegment {
    pub container_id: String,
    pub start: u64,
    pub stop: u64,
}

impl IndexSegment {
    pub fn new(container_id: impl Into<String>, start: u64, stop: u64) -> Self {
        IndexSegment {
            container_id: container_id.into(),
            start,
            stop,
        }
    }
}

/// Pixel box `[x0, x1) x [y0, y1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bounds {
    pub x0: u32,
    pub y0: u32,
    pub x1: u32,
    pub y1: u32,
}

impl Bounds {
    pub fn new(x0: u32, y0: u32, x1: u32, y1: u32) -> Self {
        Bounds { x0, y0, x1, y1 }
    }

    pub fn is_well_formed(&self) -> bool {
        self.x0 <= self.x1 && self.y0 <= self.y1
    }

    pub fn contains(&self, inner: &Bounds) -> bool {
        self.x0 <= inner.x0 && self.y0 <= inner.y0 && inner.x1 <= self.x1 && inner.y1 <= self.y1
    }

    pub fn to_array(self) -> [u32; 4] {
        [self.x0, self.y0, self.x1, self.y1]
    }
}

impl From<[u32; 4]> for Bounds {
    fn from(b: [u32; 4]) -> Self {
        Bounds::new(b[0], b[1], b[2], b[3])
    }
}

impl fmt::Display for Bounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}, {}]", self.x0, self.y0, self.x1, self.y1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundingBox {
    pub container_id: String,
    pub bounds: Bounds,
}

impl BoundingBox {
    pub fn new(container_id: impl Into<String>, bounds: impl Into<Bounds>) -> Self {
        BoundingBox {
            container_id: container_id.into(),
            bounds: bounds.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Segment {
    Index(IndexSegment),
    Box(BoundingBox),
    Time(TimeSegment),
    /// Whole extent of an atomic container such as a token. Used for
    /// annotations stacked on other annotations.
    Atomic {
        container_id: String,
    },
}

impl Segment {
    pub fn container_id(&self) -> &str {
        match self {
            Segment::Index(s) => &s.container_id,
            Segment::Box(b) => &b.container_id,
            Segment::Time(t) => &t.container_id,
            Segment::Atomic { container_id } => container_id,
        }
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Segment::Index(s) => write!(f, "[{}, {}) of {}", s.start, s.stop, s.container_id),
            Segment::Box(b) => write!(f, "box {} of {}", b.bounds, b.container_id),
            Segment::Time(t) => write!(f, "time [{}, {}] of {}", t.start, t.end, t.container_id),
            Segment::Atomic { container_id } => write!(f, "atom {container_id}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexRuler {
    pub container_id: String,
    pub start: u64,
    pub stop: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiIndexRuler {
    pub container_id: String,
    pub bounds: Bounds,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SignalRuler {
    Index(IndexRuler),
    MultiIndex(MultiIndexRuler),
}

impl SignalRuler {
    pub fn container_id(&self) -> &str {
        match self {
            SignalRuler::Index(r) => &r.container_id,
            SignalRuler::MultiIndex(r) => &r.container_id,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub id: String,
    pub value: String,
    /// `container_id` of the token's atomic ruler; equals `id` when well formed.
    pub ruler_container: String,
    pub extra: Extra,
}

impl Token {
    pub fn new(id: impl Into<String>, value: impl Into<String>) -> Self {
        let id = id.into();
        Token {
            ruler_container: id.clone(),
            id,
            value: value.into(),
            extra: Extra::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub instance: Person,
    pub age: Option<u32>,
    pub gender: Option<String>,
    pub faceprob: f64,
    pub extra: Extra,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntityLink {
    pub iri: String,
    pub label: Option<String>,
    pub types: Vec<String>,
}

impl EntityLink {
    pub fn new(iri: impl Into<String>) -> Self {
        EntityLink {
            iri: iri.into(),
            label: None,
            types: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TripleObject {
    Iri(String),
    Literal { value: String, datatype: Option<String> },
}

/// A relation asserted by a mention. The perspective is kept as raw
/// dimension/value strings so that malformed values survive loading and are
/// reported when the triple is emitted into the graph.
#[derive(Debug, Clone, PartialEq)]
pub struct TripleValue {
    pub subject: String,
    pub predicate: String,
    pub object: TripleObject,
    pub subject_types: Vec<String>,
    pub object_types: Vec<String>,
    pub perspective: BTreeMap<String, String>,
    /// Holder of the perspective. Defaults to the utterance speaker or the
    /// camera when absent.
    pub source: Option<String>,
    pub extra: Extra,
}

impl TripleValue {
    pub fn new(subject: impl Into<String>, predicate: impl Into<String>, object: TripleObject) -> Self {
        TripleValue {
            subject: subject.into(),
            predicate: predicate.into(),
            object,
            subject_types: Vec::new(),
            object_types: Vec::new(),
            perspective: BTreeMap::new(),
            source: None,
            extra: Extra::new(),
        }
    }

    pub fn with_perspective(mut self, perspective: &Perspective) -> Self {
        self.perspective = perspective.to_raw();
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnnotationValue {
    Token(Token),
    Face(Face),
    EntityLink(EntityLink),
    Triple(TripleValue),
    Label(String),
    /// Free-form values are allowed; they are carried verbatim.
    Other(Value),
}

impl AnnotationValue {
    /// Id of the value when it is itself a container (tokens).
    pub fn container_id(&self) -> Option<&str> {
        match self {
            AnnotationValue::Token(t) => Some(&t.id),
            _ => None,
        }
    }

    /// Identity this value grounds its segment to, if any.
    pub fn identity(&self) -> Option<&str> {
        match self {
            AnnotationValue::EntityLink(l) => Some(&l.iri),
            AnnotationValue::Face(f) => Some(&f.instance.id),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Annotation {
    /// Kind of annotation (`token`, `person`, `emotion`, ...).
    pub kind: String,
    pub value: AnnotationValue,
    pub source: String,
    pub timestamp: Millis,
    /// Original value when an epoch-seconds timestamp was converted.
    pub timestamp_epoch_seconds: Option<i64>,
    pub extra: Extra,
}

impl Annotation {
    pub fn new(kind: impl Into<String>, value: AnnotationValue, source: impl Into<String>, timestamp: Millis) -> Self {
        Annotation {
            kind: kind.into(),
            value,
            source: source.into(),
            timestamp,
            timestamp_epoch_seconds: None,
            extra: Extra::new(),
        }
    }
}

/// Segments paired with their interpretations. Audiovisual mentions are the
/// "perceptions" of the model; the modality of the hosting signal tells them
/// apart.
#[derive(Debug, Clone, PartialEq)]
pub struct Mention {
    pub id: String,
    pub segments: Vec<Segment>,
    pub annotations: Vec<Annotation>,
    pub extra: Extra,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    pub id: String,
    pub kind: SignalKind,
    pub modality: Modality,
    /// Paths relative to the scenario root; `#n` selects a CSV data row.
    pub files: Vec<String>,
    pub time: TimeSegment,
    pub ruler: SignalRuler,
    /// Character sequence of a text signal.
    pub seq: Option<String>,
    pub mentions: Vec<Mention>,
    pub extra: Extra,
}

impl Signal {
    pub fn text(id: impl Into<String>, scenario_id: &str, text: &str, start: Millis, end: Millis) -> Self {
        let id = id.into();
        Signal {
            kind: SignalKind::Text,
            modality: Modality::Text,
            files: Vec::new(),
            time: TimeSegment {
                container_id: scenario_id.to_string(),
                start,
                end,
                tag: TimeTag::TemporalRuler,
            },
            ruler: SignalRuler::Index(IndexRuler {
                container_id: id.clone(),
                start: 0,
                stop: text.chars().count() as u64,
            }),
            seq: Some(text.to_string()),
            mentions: Vec::new(),
            extra: Extra::new(),
            id,
        }
    }

    pub fn image(id: impl Into<String>, scenario_id: &str, bounds: Bounds, start: Millis, end: Millis) -> Self {
        let id = id.into();
        Signal {
            kind: SignalKind::Image,
            modality: Modality::Image,
            files: Vec::new(),
            time: TimeSegment::new(scenario_id, start, end),
            ruler: SignalRuler::MultiIndex(MultiIndexRuler {
                container_id: id.clone(),
                bounds,
            }),
            seq: None,
            mentions: Vec::new(),
            extra: Extra::new(),
            id,
        }
    }

    /// Text in `[start, stop)` character offsets.
    pub fn text_span(&self, start: u64, stop: u64) -> Option<String> {
        let seq = self.seq.as_ref()?;
        let len = seq.chars().count() as u64;
        if start > stop || stop > len {
            return None;
        }
        Some(seq.chars().skip(start as usize).take((stop - start) as usize).collect())
    }

    pub fn mention(&self, id: &str) -> Option<&Mention> {
        self.mentions.iter().find(|m| m.id == id)
    }

    /// Identity of the utterance speaker, from a `speaker` annotation.
    pub fn speaker(&self) -> Option<&str> {
        self.mentions
            .iter()
            .flat_map(|m| &m.annotations)
            .filter(|a| a.kind.eq_ignore_ascii_case("speaker"))
            .find_map(|a| a.value.identity())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub id: String,
    pub context: ScenarioContext,
    pub ruler: TemporalRuler,
    /// Modality name to metadata file path, relative to the scenario folder.
    pub signals: BTreeMap<Modality, String>,
    /// Free-form qualifying attributes (purpose, place, episode, ...).
    pub attributes: Option<Extra>,
    pub extra: Extra,
}

impl Scenario {
    pub fn new(id: impl Into<String>, context: ScenarioContext, start: Millis, end: Millis) -> Self {
        let id = id.into();
        Scenario {
            ruler: TemporalRuler {
                container_id: id.clone(),
                start,
                end,
            },
            id,
            context,
            signals: BTreeMap::new(),
            attributes: None,
            extra: Extra::new(),
        }
    }
}

/// A scenario with the signals of every modality it lists.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioBundle {
    pub scenario: Scenario,
    pub signals: BTreeMap<Modality, Vec<Signal>>,
}

impl ScenarioBundle {
    pub fn new(scenario: Scenario) -> Self {
        ScenarioBundle {
            scenario,
            signals: BTreeMap::new(),
        }
    }

    pub fn all_signals(&self) -> impl Iterator<Item = &Signal> {
        self.signals.values().flatten()
    }

    pub fn signal(&self, id: &str) -> Option<&Signal> {
        self.all_signals().find(|s| s.id == id)
    }

    pub fn signal_mut(&mut self, id: &str) -> Option<&mut Signal> {
        self.signals.values_mut().flatten().find(|s| s.id == id)
    }

    /// Adds a signal under its modality, registering the modality's
    /// metadata file when the scenario does not list it yet.
    pub fn push_signal(&mut self, signal: Signal) {
        let modality = signal.modality;
        self.scenario
            .signals
            .entry(modality)
            .or_insert_with(|| format!("./{modality}.json"));
        self.signals.entry(modality).or_default().push(signal);
    }

    pub fn remove_signal(&mut self, id: &str) -> Option<Signal> {
        for signals in self.signals.values_mut() {
            if let Some(pos) = signals.iter().position(|s| s.id == id) {
                return Some(signals.remove(pos));
            }
        }
        None
    }

    /// Signal and mention for a mention id.
    pub fn find_mention(&self, mention_id: &str) -> Option<(&Signal, &Mention)> {
        self.all_signals().find_map(|s| s.mention(mention_id).map(|m| (s, m)))
    }

    /// Signals of one kind ordered by time start, then id.
    pub fn signals_in_time_order(&self, filter: impl Fn(&Signal) -> bool) -> Vec<&Signal> {
        let mut out: Vec<&Signal> = self.all_signals().filter(|s| filter(s)).collect();
        out.sort_by(|a, b| (a.time.start, &a.id).cmp(&(b.time.start, &b.id)));
        out
    }

    pub fn person(&self, id: &str) -> Option<&Person> {
        self.scenario
            .context
            .participants()
            .find(|p| p.id == id || crate::ns::resolve_identifier(&p.id) == crate::ns::resolve_identifier(id))
    }
}
