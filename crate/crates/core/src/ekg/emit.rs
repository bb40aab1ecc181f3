use std::collections::{BTreeMap, BTreeSet};

use serde_json::Value;

use super::store::{GraphStore, PartitionViolation};
use super::term::{vocab, Iri, Quad, Term};
use crate::model::perspective::InvalidAttributionDimension;
use crate::model::{
    AnnotationValue, AttributionValue, Millis, Modality, Perspective, ScenarioBundle, Segment, Signal, TripleObject,
};
use crate::ns::{self, ROBOT_CONTEXT, ROBOT_FRIENDS, ROBOT_INPUTS, ROBOT_MU, ROBOT_TALK, ROBOT_WORLD};

#[derive(Debug, thiserror::Error)]
pub enum EkgError {
    #[error(transparent)]
    InvalidAttributionDimension(#[from] InvalidAttributionDimension),
    #[error("unknown signal {0}")]
    UnknownSignal(String),
    #[error("graph layout broken: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Partition(Vec<PartitionViolation>),
}

/// Where and when an episode took place; adds an `eps:Context` node that
/// collects the scenario's visual detections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpisodeContext {
    /// Local name in the context namespace, e.g. `context212127`.
    pub id: String,
    pub robot_id: Option<String>,
    /// `YYYY-MM-DD`.
    pub date: Option<String>,
    pub place: Option<Place>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Place {
    pub id: String,
    pub robot_id: Option<String>,
    /// Enclosing areas, e.g. country, region, city.
    pub within: Vec<Area>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Area {
    pub label: String,
    pub kind: String,
}

impl EpisodeContext {
    /// Reads the `episode` entry of scenario attributes:
    /// `{"id", "robot_id"?, "date"?, "place"?: {"id", "robot_id"?, "within": [{"label", "kind"}]}}`.
    pub fn from_json(v: &Value) -> Option<EpisodeContext> {
        let s = |v: &Value, k: &str| v.get(k).and_then(Value::as_str).map(str::to_string);
        let place = v.get("place").and_then(|p| {
            Some(Place {
                id: s(p, "id")?,
                robot_id: s(p, "robot_id"),
                within: p
                    .get("within")
                    .and_then(Value::as_array)
                    .map(|a| {
                        a.iter()
                            .filter_map(|x| {
                                Some(Area {
                                    label: s(x, "label")?,
                                    kind: s(x, "kind")?,
                                })
                            })
                            .collect()
                    })
                    .unwrap_or_default(),
            })
        });
        Some(EpisodeContext {
            id: s(v, "id")?,
            robot_id: s(v, "robot_id"),
            date: s(v, "date"),
            place,
        })
    }

    pub fn iri(&self) -> Iri {
        Iri::ns(ROBOT_CONTEXT, &self.id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmitConfig {
    /// Source of visual perceptions.
    pub camera: Iri,
    /// Overrides the scenario's `attributes.episode`.
    pub episode: Option<EpisodeContext>,
}

impl Default for EmitConfig {
    fn default() -> Self {
        EmitConfig {
            camera: Iri::ns(ROBOT_INPUTS, "front-camera"),
            episode: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim {
    pub iri: Iri,
    pub subject: Iri,
    pub predicate: Iri,
    pub object: Term,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MentionKind {
    /// Said or written.
    Statement,
    /// Perceived.
    Experience,
}

/// A mention as it appears in the Perspectives graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MentionNode {
    pub iri: Iri,
    pub kind: MentionKind,
    pub event: Iri,
    pub source: Iri,
    pub value: Option<String>,
    pub contains: Vec<Iri>,
}

/// Keeps only [A-Za-z0-9-] (and `_` when `underscore`), mapping the rest to `-`.
pub fn sanitize(s: &str, underscore: bool) -> String {
    s.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || (underscore && c == '_') {
                c
            } else {
                '-'
            }
        })
        .collect()
}

/// IRI for a term from scenario metadata: absolute IRIs and declared CURIEs
/// are kept, bare names are minted in `default_ns`.
pub fn resolve_term(s: &str, default_ns: &str) -> Iri {
    if ns::is_absolute_iri(s) {
        Iri::new(s)
    } else if let Some(iri) = ns::expand_curie(s) {
        Iri::new(iri)
    } else {
        Iri::ns(default_ns, &sanitize(s, true))
    }
}

/// Graph terms of an annotated triple. Bare subjects and objects are world
/// instances, bare predicates come from the robot ontology.
pub fn triple_terms(t: &crate::model::TripleValue) -> (Iri, Iri, Term) {
    let s = resolve_term(&t.subject, ROBOT_WORLD);
    let p = resolve_term(&t.predicate, ROBOT_MU);
    let o = match &t.object {
        TripleObject::Iri(i) => Term::Iri(resolve_term(i, ROBOT_WORLD)),
        TripleObject::Literal { value, datatype } => match datatype {
            Some(dt) => Term::typed(value.clone(), resolve_term(dt, ns::XSD)),
            None => Term::string(value.clone()),
        },
    };
    (s, p, o)
}

fn xml1_string(v: impl Into<String>) -> Term {
    Term::typed(v, vocab::xml1("string"))
}

/// Inserts unless the triple already lives in another graph, which keeps
/// every triple in exactly one partition.
fn add(store: &mut GraphStore, s: &Iri, p: &Iri, o: impl Into<Term>, g: &Iri) -> bool {
    let o = o.into();
    if store
        .with_subject_predicate(s, p)
        .any(|q| q.object == o && &q.graph != g)
    {
        return false;
    }
    store.insert(Quad::new(s, p, o, g))
}

fn add_types(store: &mut GraphStore, s: &Iri, types: &[Iri], g: &Iri) {
    for t in types {
        add(store, s, &vocab::rdf_type(), t.clone(), g);
    }
}

fn add_label(store: &mut GraphStore, s: &Iri, g: &Iri) {
    add(store, s, &vocab::label(), Term::string(s.local_name()), g);
}

/// Instance with `gaf:denotedIn` evidence in the Instances graph.
/// Re-emitting the same IRI merges types and mentions.
pub fn emit_instance_iri(store: &mut GraphStore, iri: &Iri, types: &[Iri], mentions: &[Iri]) -> Iri {
    let g = vocab::instances();
    add_types(store, iri, &[vocab::gaf("Instance")], &g);
    add_types(store, iri, types, &g);
    add_label(store, iri, &g);
    for m in mentions {
        add(store, iri, &vocab::gaf("denotedIn"), m.clone(), &g);
    }
    // Detector output names instances `<label>-<id>`; keep the id.
    if let Some((_, id)) = iri.local_name().rsplit_once('-') {
        if !id.is_empty() && id.bytes().all(|b| b.is_ascii_digit()) {
            add(store, iri, &vocab::mu("id"), xml1_string(id), &g);
        }
    }
    iri.clone()
}

/// Instance named after `label` in the world namespace.
pub fn emit_instance(store: &mut GraphStore, label: &str, types: &[Iri], mentions: &[Iri]) -> Iri {
    let iri = Iri::ns(ROBOT_WORLD, &sanitize(label, true));
    emit_instance_iri(store, &iri, types, mentions)
}

fn claim_local(s: &Iri, p: &Iri, o: &Term) -> String {
    let part = |x: &str| sanitize(&x.to_lowercase(), false);
    let o = match o {
        Term::Iri(i) => i.local_name().to_string(),
        Term::Literal(l) => l.value.clone(),
    };
    format!("{}_{}_{}", part(s.local_name()), part(p.local_name()), part(&o))
}

/// Claim IRI for a triple: an existing claim graph holding the same triple,
/// or the first free `<base>`, `<base>-2`, `<base>-3`, ...
fn claim_iri(store: &GraphStore, s: &Iri, p: &Iri, o: &Term) -> Iri {
    let base = claim_local(s, p, o);
    for n in 1.. {
        let local = if n == 1 { base.clone() } else { format!("{base}-{n}") };
        let iri = Iri::ns(ROBOT_WORLD, &local);
        let (free, same) = {
            let mut existing = store.graph(&iri).peekable();
            let free = existing.peek().is_none();
            (
                free,
                existing.any(|q| (&q.subject, &q.predicate, &q.object) == (s, p, o)),
            )
        };
        if free || same {
            return iri;
        }
    }
    unreachable!()
}

fn emit_mention_node(store: &mut GraphStore, m: &MentionNode) {
    let g = vocab::perspectives();
    let kind = match m.kind {
        MentionKind::Statement => "Statement",
        MentionKind::Experience => "Experience",
    };
    add_types(store, &m.iri, &[vocab::gaf("Mention"), vocab::grasp(kind)], &g);
    add_label(store, &m.iri, &g);
    if let Some(v) = &m.value {
        add(store, &m.iri, &vocab::rdf_value(), xml1_string(v.clone()), &g);
    }
    add(store, &m.iri, &vocab::was_derived_from(), m.event.clone(), &g);
    for x in &m.contains {
        add(store, &m.iri, &vocab::gaf("containsDenotation"), x.clone(), &g);
    }
    add(store, &m.iri, &vocab::grasp("wasAttributedTo"), m.source.clone(), &g);
}

/// Attribution of `mention` carrying exactly `values`, creating it when
/// needed. Named after the first claim the mention supports with them.
fn attribution(store: &mut GraphStore, mention: &Iri, claim: &Iri, perspective: &Perspective) -> Iri {
    let g = vocab::perspectives();
    let value_p = vocab::rdf_value();
    let wanted: BTreeSet<Term> = perspective
        .values()
        .iter()
        .map(|v| Term::Iri(Iri::new(v.iri())))
        .collect();
    let for_p = vocab::grasp("isAttributionFor");
    let mention_term = Term::Iri(mention.clone());
    let existing: Vec<Iri> = store.subjects(&g, &for_p, &mention_term).cloned().collect();
    for a in existing {
        let have: BTreeSet<Term> = store.objects(&g, &a, &value_p).cloned().collect();
        if have == wanted {
            return a;
        }
    }
    let base = format!("{}_{}", claim.local_name(), perspective.suffix());
    let iri = (1..)
        .map(|n| Iri::ns(ROBOT_TALK, &if n == 1 { base.clone() } else { format!("{base}-{n}") }))
        .find(|iri| store.with_subject_predicate(iri, &for_p).next().is_none())
        .expect("unbounded");
    add_types(store, &iri, &[vocab::grasp("Attribution")], &g);
    add_label(store, &iri, &g);
    for v in perspective.values() {
        let viri = Iri::new(v.iri());
        add(store, &iri, &value_p, viri.clone(), &g);
        add_types(
            store,
            &viri,
            &[vocab::grasp("AttributionValue"), Iri::new(v.dimension().value_class())],
            &g,
        );
    }
    add(store, &iri, &for_p, mention.clone(), &g);
    iri
}

/// Claim graph, Claims entry, mention node and attribution for one
/// perspective-qualified triple. Idempotent.
pub fn emit_claim(
    store: &mut GraphStore,
    triple: (&Iri, &Iri, &Term),
    mention: &MentionNode,
    values: &[AttributionValue],
) -> Result<Claim, EkgError> {
    let perspective = Perspective::from_values(values)?;
    let (s, p, o) = triple;
    let claim = claim_iri(store, s, p, o);
    add(store, s, p, o.clone(), &claim);

    let g = vocab::claims();
    add_types(store, &claim, &[vocab::gaf("Assertion"), vocab::sem("Event")], &g);
    add_label(store, &claim, &g);
    add(store, &claim, &vocab::gaf("denotedBy"), mention.iri.clone(), &g);

    emit_mention_node(store, mention);
    add(
        store,
        &mention.iri,
        &vocab::gaf("denotes"),
        claim.clone(),
        &vocab::perspectives(),
    );
    if !perspective.is_empty() {
        let a = attribution(store, &mention.iri, &claim, &perspective);
        add(
            store,
            &mention.iri,
            &vocab::grasp("hasAttribution"),
            a,
            &vocab::perspectives(),
        );
    }
    Ok(Claim {
        iri: claim,
        subject: s.clone(),
        predicate: p.clone(),
        object: o.clone(),
    })
}

/// 1-based position of each signal among signals of its event family,
/// ordered by start time.
struct Ordinals {
    position: BTreeMap<String, usize>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Family {
    Chat,
    Visual,
    Audio,
}

fn family(m: Modality) -> Family {
    match m {
        Modality::Text => Family::Chat,
        Modality::Image | Modality::Video => Family::Visual,
        Modality::Audio => Family::Audio,
    }
}

impl Ordinals {
    fn new(bundle: &ScenarioBundle) -> Self {
        let mut position = BTreeMap::new();
        for f in [Family::Chat, Family::Visual, Family::Audio] {
            for (i, s) in bundle
                .signals_in_time_order(|s| family(s.modality) == f)
                .into_iter()
                .enumerate()
            {
                position.insert(s.id.clone(), i + 1);
            }
        }
        Ordinals { position }
    }
}

/// Local names for the event hierarchy of a signal.
struct Events {
    parent: String,
    child: String,
    parent_class: &'static str,
    child_class: &'static str,
    ordinal: usize,
}

fn events(signal: &Signal, ordinals: &Ordinals) -> Events {
    let n = ordinals.position.get(&signal.id).copied().unwrap_or(1);
    let (parent, child, parent_class, child_class) = match family(signal.modality) {
        Family::Chat => ("chat1", "utterance", "Chat", "Utterance"),
        Family::Visual => ("visual1", "detection", "Visual", "Detection"),
        Family::Audio => ("audio1", "utterance", "Audio", "Utterance"),
    };
    Events {
        parent: parent.to_string(),
        child: format!("{parent}_{child}{n}"),
        parent_class,
        child_class,
        ordinal: n,
    }
}

/// Character range of a mention, following stacked segments down to the
/// index segment of the annotated token.
fn index_range(signal: &Signal, segments: &[Segment]) -> Option<(u64, u64)> {
    let mut range: Option<(u64, u64)> = None;
    let mut widen = |a: u64, b: u64| {
        range = Some(match range {
            Some((x, y)) => (x.min(a), y.max(b)),
            None => (a, b),
        })
    };
    for seg in segments {
        match seg {
            Segment::Index(s) => widen(s.start, s.stop),
            Segment::Atomic { container_id } => {
                let base = signal.mentions.iter().find(|m| {
                    m.annotations
                        .iter()
                        .any(|a| a.value.container_id() == Some(container_id))
                });
                if let Some(base) = base {
                    let inner: Vec<Segment> = base
                        .segments
                        .iter()
                        .filter(|s| !matches!(s, Segment::Atomic { .. }))
                        .cloned()
                        .collect();
                    if let Some((a, b)) = index_range(signal, &inner) {
                        widen(a, b);
                    }
                }
            }
            _ => {}
        }
    }
    range
}

/// Half-open range of this mention's boxes in the signal's box enumeration
/// (boxes numbered in mention order).
pub fn box_index_range(signal: &Signal, mention_id: &str) -> Option<(usize, usize)> {
    let mut next = 0;
    for m in &signal.mentions {
        let n = m.segments.iter().filter(|s| matches!(s, Segment::Box(_))).count();
        if m.id == mention_id {
            return (n > 0).then_some((next, next + n));
        }
        next += n;
    }
    None
}

fn mention_local(signal: &Signal, ev: &Events, mention: &crate::model::Mention) -> String {
    let extent = match signal.modality {
        Modality::Text => index_range(signal, &mention.segments).map(|(a, b)| format!("char{a}-{b}")),
        Modality::Audio => index_range(signal, &mention.segments).map(|(a, b)| format!("sample{a}-{b}")),
        Modality::Image | Modality::Video => box_index_range(signal, &mention.id).map(|(a, b)| format!("pixel{a}-{b}")),
    };
    let extent = extent.unwrap_or_else(|| format!("mention-{}", sanitize(&mention.id, false)));
    format!("{}_{extent}", ev.child)
}

fn text_of(signal: &Signal, mention: &crate::model::Mention) -> Option<String> {
    let (a, b) = index_range(signal, &mention.segments)?;
    signal.text_span(a, b)
}

/// Source of a signal's statements: the speaker of an utterance, the
/// camera for visual signals.
fn signal_source(bundle: &ScenarioBundle, signal: &Signal, config: &EmitConfig) -> (Iri, Option<String>) {
    if family(signal.modality) == Family::Visual {
        return (config.camera.clone(), None);
    }
    let speaker_id = signal
        .speaker()
        .map(str::to_string)
        .or_else(|| bundle.scenario.context.speaker.as_ref().map(|p| p.id.clone()));
    let Some(id) = speaker_id else {
        return (Iri::ns(ROBOT_FRIENDS, "unknown"), None);
    };
    let person = bundle.person(&id);
    let name = person.map(|p| p.name.clone()).filter(|n| !n.is_empty());
    let resolved = ns::resolve_identifier(&id);
    if ns::split_iri(&resolved).is_some() {
        return (Iri::new(resolved), name);
    }
    let local = name.clone().unwrap_or_else(|| ns::local_name(&id).to_string());
    (Iri::ns(ROBOT_FRIENDS, &sanitize(&local.to_lowercase(), true)), name)
}

fn emit_source(store: &mut GraphStore, source: &Iri, name: Option<&str>, camera: bool) {
    let g = vocab::interactions();
    let class = if camera {
        vocab::mu("sensor")
    } else {
        vocab::mu("person")
    };
    add_types(
        store,
        source,
        &[
            class,
            vocab::gaf("Instance"),
            vocab::grasp("Source"),
            vocab::sem("Actor"),
        ],
        &g,
    );
    add_label(store, source, &g);
    if let Some(name) = name {
        add(store, source, &vocab::foaf_name(), Term::string(name), &g);
    }
}

fn agent_iri(bundle: &ScenarioBundle) -> Option<Iri> {
    let agent = &bundle.scenario.context.agent;
    (!agent.is_empty()).then(|| resolve_term(agent, ROBOT_WORLD))
}

fn episode(bundle: &ScenarioBundle, config: &EmitConfig) -> Option<EpisodeContext> {
    config.episode.clone().or_else(|| {
        bundle
            .scenario
            .attributes
            .as_ref()
            .and_then(|a| a.get("episode"))
            .and_then(EpisodeContext::from_json)
    })
}

fn emit_episode(store: &mut GraphStore, ep: &EpisodeContext, event: &Iri) {
    let g = vocab::interactions();
    let ctx = ep.iri();
    add_types(store, &ctx, &[vocab::eps("Context")], &g);
    add_label(store, &ctx, &g);
    let digits: String = ep.id.chars().filter(char::is_ascii_digit).collect();
    if let Some(id) = ep.robot_id.clone().or((!digits.is_empty()).then_some(digits)) {
        add(store, &ctx, &vocab::mu("id"), xml1_string(id), &g);
    }
    add(store, &ctx, &vocab::sem("hasEvent"), event.clone(), &g);
    if let Some(date) = &ep.date {
        let day = Iri::ns(ROBOT_CONTEXT, &sanitize(date, true));
        add(store, &ctx, &vocab::sem("hasBeginTimeStamp"), day.clone(), &g);
        add_types(
            store,
            &day,
            &[vocab::sem("Time"), vocab::time("DateTimeDescription")],
            &g,
        );
        add_label(store, &day, &g);
        let parts: Vec<&str> = date.split('-').collect();
        if let [y, m, d] = parts[..] {
            let num = |s: &str| s.trim_start_matches('0').to_string();
            add(
                store,
                &day,
                &vocab::time("year"),
                Term::typed(y, vocab::xml1("gYear")),
                &g,
            );
            add(
                store,
                &day,
                &vocab::time("month"),
                Term::typed(num(m), vocab::xml1("gMonthDay")),
                &g,
            );
            add(
                store,
                &day,
                &vocab::time("day"),
                Term::typed(num(d), vocab::xml1("gDay")),
                &g,
            );
            add(store, &day, &vocab::time("unitType"), vocab::time("unitDay"), &g);
        }
    }
    if let Some(place) = &ep.place {
        let p = Iri::ns(ROBOT_CONTEXT, &sanitize(&place.id, true));
        add(store, &ctx, &vocab::sem("hasPlace"), p.clone(), &g);
        add_types(store, &p, &[vocab::mu("location"), vocab::sem("Place")], &g);
        add_label(store, &p, &g);
        if let Some(id) = &place.robot_id {
            add(store, &p, &vocab::mu("id"), xml1_string(id.clone()), &g);
        }
        for area in &place.within {
            let a = Iri::ns(ROBOT_WORLD, &sanitize(&area.label, true));
            add(store, &p, &vocab::mu("in"), a.clone(), &g);
            add_types(
                store,
                &a,
                &[
                    vocab::mu("location"),
                    vocab::sem("Place"),
                    resolve_term(&area.kind, ROBOT_MU),
                ],
                &g,
            );
            add_label(store, &a, &g);
        }
    }
}

fn is_evidence(v: &AnnotationValue, kind: &str) -> bool {
    match v {
        AnnotationValue::Triple(_) => true,
        AnnotationValue::EntityLink(_) => !kind.eq_ignore_ascii_case("speaker"),
        _ => false,
    }
}

/// Emits everything one signal contributes. Returns the number of quads
/// added. Signals without triples or entity links contribute nothing.
pub fn emit_signal(
    store: &mut GraphStore,
    bundle: &ScenarioBundle,
    signal_id: &str,
    config: &EmitConfig,
) -> Result<usize, EkgError> {
    let signal = bundle
        .signal(signal_id)
        .ok_or_else(|| EkgError::UnknownSignal(signal_id.to_string()))?;
    let evidence: Vec<_> = signal
        .mentions
        .iter()
        .filter(|m| m.annotations.iter().any(|a| is_evidence(&a.value, &a.kind)))
        .collect();
    if evidence.is_empty() {
        return Ok(0);
    }
    let before = store.len();
    let ordinals = Ordinals::new(bundle);
    let ev = events(signal, &ordinals);
    let agent = agent_iri(bundle);
    let visual = family(signal.modality) == Family::Visual;
    // Every event joins the episode; only perceptions are tied to it as context.
    let context = episode(bundle, config);
    let episode = context.clone().filter(|_| visual);

    // Interaction events.
    let g = vocab::interactions();
    let parent = Iri::ns(ROBOT_TALK, &ev.parent);
    let child = Iri::ns(ROBOT_TALK, &ev.child);
    add_types(
        store,
        &parent,
        &[vocab::sem("Event"), vocab::grasp(ev.parent_class)],
        &g,
    );
    add_label(store, &parent, &g);
    add(store, &parent, &vocab::mu("id"), xml1_string("1"), &g);
    add(store, &parent, &vocab::sem("hasSubEvent"), child.clone(), &g);
    add_types(store, &child, &[vocab::sem("Event"), vocab::grasp(ev.child_class)], &g);
    add_label(store, &child, &g);
    add(store, &child, &vocab::mu("id"), xml1_string(ev.ordinal.to_string()), &g);
    add(
        store,
        &child,
        &vocab::start_ms(),
        Term::typed(signal.time.start.to_string(), vocab::xsd_long()),
        &g,
    );
    let (source, name) = signal_source(bundle, signal, config);
    add(store, &child, &vocab::sem("hasActor"), source.clone(), &g);
    emit_source(store, &source, name.as_deref(), visual);

    if let Some(agent) = &agent {
        emit_instance_iri(store, agent, &[vocab::mu("robot")], &[]);
    }
    if let Some(ep) = &context {
        emit_episode(store, ep, &parent);
    }

    for mention in evidence {
        let iri = Iri::ns(ROBOT_TALK, &mention_local(signal, &ev, mention));
        let mut contains: Vec<Iri> = Vec::new();
        let mut typed: BTreeMap<Iri, Vec<Iri>> = BTreeMap::new();
        let mut note = |x: Iri, types: &[String]| {
            if Some(&x) == agent.as_ref() {
                return;
            }
            let entry = typed.entry(x.clone()).or_default();
            entry.extend(types.iter().map(|t| resolve_term(t, ROBOT_MU)));
            if !contains.contains(&x) {
                contains.push(x);
            }
        };
        let mut triples = Vec::new();
        for ann in &mention.annotations {
            match &ann.value {
                AnnotationValue::EntityLink(l) if is_evidence(&ann.value, &ann.kind) => {
                    note(resolve_term(&l.iri, ROBOT_WORLD), &l.types)
                }
                AnnotationValue::Triple(t) => {
                    let (s, p, o) = triple_terms(t);
                    if let Term::Iri(o) = &o {
                        note(o.clone(), &t.object_types);
                    }
                    note(s.clone(), &t.subject_types);
                    let perspective = Perspective::from_raw(&t.perspective)?;
                    let src = t.source.as_deref().map(|x| resolve_term(x, ROBOT_FRIENDS));
                    triples.push((s, p, o, perspective, src));
                }
                _ => {}
            }
        }
        let node = MentionNode {
            iri: iri.clone(),
            kind: if visual {
                MentionKind::Experience
            } else {
                MentionKind::Statement
            },
            event: child.clone(),
            source: source.clone(),
            value: if signal.modality == Modality::Text {
                text_of(signal, mention)
            } else {
                None
            },
            contains: contains.clone(),
        };
        if triples.is_empty() {
            emit_mention_node(store, &node);
        }
        for (s, p, o, perspective, src) in &triples {
            let mut node = node.clone();
            if let Some(src) = src {
                emit_source(store, src, None, false);
                node.source = src.clone();
            }
            let claim = emit_claim(store, (s, p, o), &node, &perspective.values())?;
            if let Some(ep) = &episode {
                add(store, &claim.iri, &vocab::eps("hasContext"), ep.iri(), &vocab::claims());
            }
        }
        for x in &contains {
            emit_instance_iri(store, x, &typed[x], std::slice::from_ref(&iri));
            if let Some(ep) = &episode {
                add(store, x, &vocab::eps("hasContext"), ep.iri(), &vocab::instances());
                add(
                    store,
                    &ep.iri(),
                    &vocab::eps("hasDetection"),
                    x.clone(),
                    &vocab::interactions(),
                );
            }
        }
    }

    let violations = store.validate_partition();
    if !violations.is_empty() {
        return Err(EkgError::Partition(violations));
    }
    Ok(store.len() - before)
}

/// Emits every signal in time order and returns the quads that were new.
pub fn emit_from_scenario(
    store: &mut GraphStore,
    bundle: &ScenarioBundle,
    config: &EmitConfig,
) -> Result<GraphStore, EkgError> {
    let before = store.clone();
    let ids: Vec<String> = bundle
        .signals_in_time_order(|_| true)
        .iter()
        .map(|s| s.id.clone())
        .collect();
    for id in ids {
        emit_signal(store, bundle, &id, config)?;
    }
    Ok(store.difference(&before))
}

/// Start of a mention's event, read back from the Interactions graph.
pub fn event_start(store: &GraphStore, event: &Iri) -> Option<Millis> {
    store
        .objects(&vocab::interactions(), event, &vocab::start_ms())
        .find_map(|t| t.as_literal()?.value.parse().ok())
}
