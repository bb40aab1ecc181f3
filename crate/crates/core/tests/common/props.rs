//! Property checks shared by the `properties` tests and the acceptance
//! harness. Each `check_*` runs its own case budget and returns the first
//! failure, shrunk.

use std::collections::{BTreeMap, BTreeSet};

use emissor::ekg::{
    emit_from_scenario, emit_signal, parse_trig, serialize_trig, EmitConfig, GraphStore, Iri, Literal, Quad, Term,
};
use emissor::ids::IdMint;
use emissor::model::{
    Annotation, AnnotationValue, BoundingBox, Bounds, Certainty, EntityLink, Extra, Face, IndexSegment, Mention,
    ModelError, Person, Perspective, Polarity, Scenario, ScenarioBundle, ScenarioContext, Segment, Signal, TimeSegment,
    Token, TripleObject, TripleValue, Violation,
};
use emissor::ns::{BASE, RDF, ROBOT_MU, ROBOT_TALK, ROBOT_WORLD, XSD};
use emissor::segmentation::{resolve_identity, IdentityQuery, RegistryEntry, Resolution};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestError, TestRunner};

pub const CASES: u32 = 1000;

fn run<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| match e {
        TestError::Fail(why, input) => format!("{why}; minimal input: {input:?}"),
        TestError::Abort(why) => format!("aborted: {why}"),
    })
}

fn label(value: &str) -> Annotation {
    Annotation::new("label", AnnotationValue::Label(value.into()), "test", 0)
}

fn mention(id: impl Into<String>, segments: Vec<Segment>, annotations: Vec<Annotation>) -> Mention {
    Mention {
        id: id.into(),
        segments,
        annotations,
        extra: Extra::new(),
    }
}

fn violations_at<'a>(report: &'a [Violation], mention: &str) -> Vec<&'a Violation> {
    let needle = format!("/mentions/{mention}");
    report
        .iter()
        .filter(|v| v.to_string().split(':').next().is_some_and(|at| at.ends_with(&needle)))
        .collect()
}

// Segment containment ------------------------------------------------------

#[derive(Debug, Clone)]
pub struct Containment {
    text_len: usize,
    index: (u64, u64),
    frame: (u32, u32),
    bbox: [u32; 4],
    ruler_end: i64,
    time: (i64, i64),
}

fn containment() -> impl Strategy<Value = Containment> {
    (
        0usize..30,
        (0u64..40, 0u64..40),
        (1u32..50, 1u32..50),
        [0u32..60, 0u32..60, 0u32..60, 0u32..60],
        0i64..100,
        (0i64..120, 0i64..120),
    )
        .prop_map(|(text_len, index, frame, bbox, ruler_end, time)| Containment {
            text_len,
            index,
            frame,
            bbox,
            ruler_end,
            time,
        })
}

/// A segment is accepted by `add_mention` and passes validation exactly when
/// it lies inside its container, computed here by plain arithmetic.
pub fn check_segment_containment(cases: u32) -> Result<(), String> {
    run(cases, containment(), |c| {
        let (a, b) = c.index;
        let [x0, y0, x1, y1] = c.bbox;
        let (w, h) = c.frame;
        let (t0, t1) = c.time;
        let index_ok = a <= b && b <= c.text_len as u64;
        let box_ok = x0 <= x1 && y0 <= y1 && x1 <= w && y1 <= h;
        let time_ok = t0 <= t1 && t1 <= c.ruler_end;

        let mut base = ScenarioBundle::new(Scenario::new("s", ScenarioContext::new("agent"), 0, c.ruler_end));
        base.push_signal(Signal::text("t", "s", &"x".repeat(c.text_len), 0, 0));
        base.push_signal(Signal::image("i", "s", Bounds::new(0, 0, w, h), 0, 0));
        let segments = [
            (Segment::Index(IndexSegment::new("t", a, b)), "t", index_ok),
            (Segment::Box(BoundingBox::new("i", c.bbox)), "i", box_ok),
            (Segment::Time(TimeSegment::new("s", t0, t1)), "t", time_ok),
        ];

        let mut direct = base.clone();
        for (n, (seg, signal, ok)) in segments.iter().enumerate() {
            let mut edited = base.clone();
            let added = edited.add_mention(signal, vec![seg.clone()], vec![label("x").into()]);
            prop_assert_eq!(added.is_ok(), *ok, "add_mention on {}", seg);
            if let Err(e) = added {
                prop_assert!(matches!(e, ModelError::OutOfBounds { .. }), "unexpected error {e}");
            }
            direct.signal_mut(signal).unwrap().mentions.push(mention(
                format!("m{n}"),
                vec![seg.clone()],
                vec![label("x")],
            ));
        }
        let report = direct.validate();
        for (n, (seg, _, ok)) in segments.iter().enumerate() {
            let found = violations_at(&report.violations, &format!("m{n}"));
            let expected = usize::from(!ok);
            prop_assert_eq!(found.len(), expected, "violations for {}: {:?}", seg, found);
            if let Some(v) = found.first() {
                let kind_ok = matches!(v, Violation::OutOfBounds { .. } | Violation::InvertedExtent { .. });
                prop_assert!(kind_ok, "unexpected violation {}", v);
            }
        }
        prop_assert_eq!(report.is_valid(), index_ok && box_ok && time_ok);
        Ok(())
    })
}

// Container closure --------------------------------------------------------

#[derive(Debug, Clone)]
enum Target {
    Signal(usize),
    Token(usize),
    Ghost(u8),
}

#[derive(Debug, Clone)]
pub struct Closure {
    tokens: Vec<Vec<bool>>,
    refs: Vec<(usize, Target)>,
}

fn closure() -> impl Strategy<Value = Closure> {
    let target = prop_oneof![
        (0usize..8).prop_map(Target::Signal),
        (0usize..16).prop_map(Target::Token),
        (0u8..4).prop_map(Target::Ghost),
    ];
    (
        prop::collection::vec(prop::collection::vec(prop::bool::weighted(0.85), 0..4), 1..5),
        prop::collection::vec((0usize..8, target), 0..8),
    )
        .prop_map(|(tokens, refs)| Closure { tokens, refs })
}

/// `container_closure` is total exactly when every referenced id is declared
/// by the scenario, a signal or a token, and then maps exactly those ids.
pub fn check_container_closure(cases: u32) -> Result<(), String> {
    run(cases, closure(), |c| {
        let n = c.tokens.len();
        let mut bundle = ScenarioBundle::new(Scenario::new("s", ScenarioContext::new("agent"), 0, 10));
        let mut declared: BTreeSet<String> = ["s".to_string()].into();
        let mut referenced: Vec<String> = vec!["s".into()];
        let mut token_ids = Vec::new();
        for (i, toks) in c.tokens.iter().enumerate() {
            let id = format!("sig{i}");
            let mut signal = Signal::text(&id, "s", "abc", 0, 0);
            declared.insert(id.clone());
            referenced.extend([id.clone(), "s".into()]);
            for (j, well_formed) in toks.iter().enumerate() {
                let tid = format!("tok{i}-{j}");
                let mut token = Token::new(&tid, "a");
                if !well_formed {
                    token.ruler_container = format!("lost{i}-{j}");
                }
                referenced.extend([id.clone(), token.ruler_container.clone()]);
                declared.insert(tid.clone());
                token_ids.push(tid);
                signal.mentions.push(mention(
                    format!("tm{i}-{j}"),
                    vec![Segment::Index(IndexSegment::new(&id, 0, 1))],
                    vec![Annotation::new("token", AnnotationValue::Token(token), "test", 0)],
                ));
            }
            bundle.push_signal(signal);
        }
        for (k, (host, target)) in c.refs.iter().enumerate() {
            let host = format!("sig{}", host % n);
            let seg = match target {
                Target::Signal(i) => Segment::Index(IndexSegment::new(format!("sig{}", i % n), 0, 1)),
                Target::Token(i) if !token_ids.is_empty() => Segment::Atomic {
                    container_id: token_ids[i % token_ids.len()].clone(),
                },
                Target::Token(i) => Segment::Atomic {
                    container_id: format!("tok-missing{i}"),
                },
                Target::Ghost(g) => Segment::Atomic {
                    container_id: format!("ghost{g}"),
                },
            };
            referenced.push(seg.container_id().to_string());
            bundle
                .signal_mut(&host)
                .unwrap()
                .mentions
                .push(mention(format!("r{k}"), vec![seg], vec![label("x")]));
        }

        let missing: Vec<&String> = referenced.iter().filter(|id| !declared.contains(*id)).collect();
        match bundle.container_closure() {
            Ok(map) => {
                prop_assert!(missing.is_empty(), "closure ok despite missing {:?}", missing);
                let keys: BTreeSet<String> = map.keys().cloned().collect();
                prop_assert_eq!(keys, declared);
            }
            Err(ModelError::DanglingContainer(id)) => {
                prop_assert!(!declared.contains(&id), "{} reported dangling but declared", id);
                prop_assert!(missing.contains(&&id));
            }
            Err(e) => return Err(TestCaseError::fail(format!("unexpected error {e}"))),
        }
        // Signals' own rulers and time segments are always declared, so every
        // dangling reference comes from a mention.
        prop_assert_eq!(bundle.validate().dangling().count(), missing.len());
        Ok(())
    })
}

// Co-reference ---------------------------------------------------------------

/// Is it an image, its start time, and per mention the (person, spelling)
/// pairs its annotations name.
type SignalGrounding = (bool, i64, Vec<Vec<(usize, usize)>>);

#[derive(Debug, Clone)]
pub struct Grounding {
    signals: Vec<SignalGrounding>,
}

fn grounding() -> impl Strategy<Value = Grounding> {
    let mention = prop::collection::vec((0usize..4, 0usize..3), 0..3);
    let signal = (any::<bool>(), 0i64..50, prop::collection::vec(mention, 0..4));
    prop::collection::vec(signal, 1..6).prop_map(|signals| Grounding { signals })
}

fn spelling(person: usize, form: usize) -> String {
    let bare = format!("p{person}-0000-4000-8000-{person:012}");
    match form {
        0 => bare,
        1 => format!("{BASE}{bare}"),
        _ => format!("./{bare}"),
    }
}

/// The co-reference index groups exactly the mentions that name the same
/// person, however the identifier is spelled, without repeats.
pub fn check_coreference(cases: u32) -> Result<(), String> {
    run(cases, grounding(), |g| {
        let mut bundle = ScenarioBundle::new(Scenario::new("s", ScenarioContext::new("agent"), 0, 100));
        let mut truth: BTreeMap<usize, BTreeSet<(String, String)>> = BTreeMap::new();
        for (i, (image, start, mentions)) in g.signals.iter().enumerate() {
            let id = format!("sig{i}");
            let mut signal = if *image {
                Signal::image(&id, "s", Bounds::new(0, 0, 10, 10), *start, *start)
            } else {
                Signal::text(&id, "s", "hello", *start, *start)
            };
            for (j, names) in mentions.iter().enumerate() {
                let mid = format!("m{i}-{j}");
                let annotations = names
                    .iter()
                    .map(|&(p, f)| {
                        truth.entry(p).or_default().insert((id.clone(), mid.clone()));
                        let value = if *image {
                            AnnotationValue::Face(Face {
                                instance: Person::new(spelling(p, f), format!("person {p}")),
                                age: None,
                                gender: None,
                                faceprob: 0.9,
                                extra: Extra::new(),
                            })
                        } else {
                            AnnotationValue::EntityLink(EntityLink::new(spelling(p, f)))
                        };
                        Annotation::new("person", value, "test", 0)
                    })
                    .collect();
                signal.mentions.push(mention(mid, Vec::new(), annotations));
            }
            bundle.push_signal(signal);
        }

        let index = bundle.coreference_index();
        let got: BTreeSet<BTreeSet<(String, String)>> = index
            .values()
            .map(|group| {
                group
                    .iter()
                    .map(|e| (e.signal_id.clone(), e.mention_id.clone()))
                    .collect()
            })
            .collect();
        let want: BTreeSet<BTreeSet<(String, String)>> = truth.values().cloned().collect();
        prop_assert_eq!(got, want);
        for group in index.values() {
            let keys: Vec<_> = group
                .iter()
                .map(|e| (e.modality, e.time, e.mention_id.clone(), e.signal_id.clone()))
                .collect();
            let mut sorted = keys.clone();
            sorted.sort();
            sorted.dedup();
            prop_assert_eq!(keys, sorted, "group not sorted or repeated");
        }
        Ok(())
    })
}

// TriG round trip ------------------------------------------------------------

const NAMESPACES: &[&str] = &[ROBOT_WORLD, ROBOT_TALK, ROBOT_MU, "http://example.org/other/"];

fn iri() -> impl Strategy<Value = Iri> {
    (0..NAMESPACES.len(), "[A-Za-z0-9_][A-Za-z0-9_.~()!é/-]{0,12}")
        .prop_map(|(ns, local)| Iri::ns(NAMESPACES[ns], &local))
}

fn literal() -> impl Strategy<Value = Term> {
    let text = "[ -~\\n\\t\\r\"\\\\éß€😀]{0,16}";
    prop_oneof![
        text.prop_map(Term::string),
        (0i64..1_000_000).prop_map(|n| Term::typed(n.to_string(), Iri::ns(XSD, "long"))),
        (text, "[a-z]{2}(-[a-z]{2})?").prop_map(|(value, lang)| Term::Literal(Literal {
            value,
            datatype: Iri::ns(RDF, "langString"),
            lang: Some(lang),
        })),
        (text, iri()).prop_map(|(v, dt)| Term::typed(v, dt)),
    ]
}

fn store() -> impl Strategy<Value = GraphStore> {
    let object = prop_oneof![iri().prop_map(Term::Iri), literal()];
    prop::collection::vec((iri(), iri(), object, iri()), 0..12).prop_map(|quads| {
        let mut store = GraphStore::new();
        for (s, p, o, g) in quads {
            store.insert(Quad::new(&s, &p, o, &g));
        }
        store
    })
}

/// Serializing and parsing back gives the same quad set, and serializing is
/// stable.
pub fn check_trig_round_trip(cases: u32) -> Result<(), String> {
    run(cases, store(), |store| {
        let text = serialize_trig(&store);
        let back = parse_trig(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&back, &store, "{}", text);
        prop_assert_eq!(serialize_trig(&back), text);
        Ok(())
    })
}

// Emission -------------------------------------------------------------------

const THINGS: &[&str] = &["pills", "table", "carl", "cup", "robotWorld:lani"];
const RELATIONS: &[&str] = &["locatedUnder", "see", "robotMu:like", "holds"];
const SPEAKERS: &[(&str, &str)] = &[("robotFriends:carl", "Carl"), ("robotFriends:lani", "Leolani")];

#[derive(Debug, Clone)]
pub struct TripleDraft {
    s: usize,
    p: usize,
    o: usize,
    certainty: Option<Certainty>,
    polarity: Option<Polarity>,
    source: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct SignalDraft {
    visual: bool,
    start: i64,
    speaker: usize,
    mentions: Vec<(Vec<TripleDraft>, Vec<usize>)>,
}

fn triple_draft() -> impl Strategy<Value = TripleDraft> {
    (
        0..THINGS.len(),
        0..RELATIONS.len(),
        0..THINGS.len(),
        prop::option::of(prop::sample::select(Certainty::ALL)),
        prop::option::of(prop::sample::select(Polarity::ALL)),
        prop::option::of(0..SPEAKERS.len()),
    )
        .prop_map(|(s, p, o, certainty, polarity, source)| TripleDraft {
            s,
            p,
            o,
            certainty,
            polarity,
            source,
        })
}

fn scenario_draft() -> impl Strategy<Value = Vec<SignalDraft>> {
    let mention = (
        prop::collection::vec(triple_draft(), 0..3),
        prop::collection::vec(0..THINGS.len(), 0..2),
    );
    let signal = (
        any::<bool>(),
        0i64..10_000,
        0..SPEAKERS.len(),
        prop::collection::vec(mention, 0..3),
    )
        .prop_map(|(visual, start, speaker, mentions)| SignalDraft {
            visual,
            start,
            speaker,
            mentions,
        });
    prop::collection::vec(signal, 1..5)
}

fn build_scenario(draft: &[SignalDraft]) -> ScenarioBundle {
    let mut context = ScenarioContext::new("lani");
    context.persons = SPEAKERS.iter().map(|(id, name)| Person::new(*id, *name)).collect();
    let mut bundle = ScenarioBundle::new(Scenario::new("prop", context, 0, 20_000));
    let text = "things were said here";
    let len = text.chars().count() as u64;
    for (i, s) in draft.iter().enumerate() {
        let id = format!("sig{i}");
        let mut signal = if s.visual {
            Signal::image(&id, "prop", Bounds::new(0, 0, 100, 100), s.start, s.start + 33)
        } else {
            let mut t = Signal::text(&id, "prop", text, s.start, s.start);
            let mut link = EntityLink::new(SPEAKERS[s.speaker].0);
            link.label = Some(SPEAKERS[s.speaker].1.into());
            t.mentions.push(mention(
                format!("{id}-speaker"),
                vec![Segment::Index(IndexSegment::new(&id, 0, len))],
                vec![Annotation::new(
                    "speaker",
                    AnnotationValue::EntityLink(link),
                    "test",
                    s.start,
                )],
            ));
            t
        };
        for (j, (triples, links)) in s.mentions.iter().enumerate() {
            let segment = if s.visual {
                Segment::Box(BoundingBox::new(&id, [10, 10, 20, 20]))
            } else {
                Segment::Index(IndexSegment::new(&id, 0, len))
            };
            let mut annotations: Vec<Annotation> = triples
                .iter()
                .map(|t| {
                    let perspective = Perspective {
                        certainty: t.certainty,
                        polarity: t.polarity,
                        ..Default::default()
                    };
                    let mut value =
                        TripleValue::new(THINGS[t.s], RELATIONS[t.p], TripleObject::Iri(THINGS[t.o].to_string()))
                            .with_perspective(&perspective);
                    value.source = t.source.map(|k| SPEAKERS[k].0.to_string());
                    Annotation::new("triple", AnnotationValue::Triple(value), "test", s.start)
                })
                .collect();
            annotations.extend(links.iter().map(|&k| {
                Annotation::new(
                    "entity",
                    AnnotationValue::EntityLink(EntityLink::new(THINGS[k])),
                    "test",
                    s.start,
                )
            }));
            if !annotations.is_empty() {
                signal
                    .mentions
                    .push(mention(format!("{id}-m{j}"), vec![segment], annotations));
            }
        }
        bundle.push_signal(signal);
    }
    bundle
}

fn signal_order(bundle: &ScenarioBundle) -> Vec<String> {
    bundle
        .signals_in_time_order(|_| true)
        .iter()
        .map(|s| s.id.clone())
        .collect()
}

/// The graph stays partitioned into the layer graphs and one-triple claim
/// graphs after every single signal emission.
pub fn check_partition_invariant(cases: u32) -> Result<(), String> {
    run(cases, scenario_draft(), |draft| {
        let bundle = build_scenario(&draft);
        prop_assert!(
            bundle.validate().is_valid(),
            "generated scenario invalid: {:?}",
            bundle.validate()
        );
        let mut store = GraphStore::new();
        for id in signal_order(&bundle) {
            emit_signal(&mut store, &bundle, &id, &EmitConfig::default())
                .map_err(|e| TestCaseError::fail(format!("emit {id}: {e}")))?;
            let broken = store.validate_partition();
            prop_assert!(broken.is_empty(), "after {}: {:?}", id, broken);
        }
        Ok(())
    })
}

/// Emission only ever adds quads, and emitting the same scenario again adds
/// nothing.
pub fn check_monotonic_growth(cases: u32) -> Result<(), String> {
    run(cases, scenario_draft(), |draft| {
        let bundle = build_scenario(&draft);
        let mut store = GraphStore::new();
        for id in signal_order(&bundle) {
            let before = store.clone();
            let added = emit_signal(&mut store, &bundle, &id, &EmitConfig::default())
                .map_err(|e| TestCaseError::fail(format!("emit {id}: {e}")))?;
            prop_assert!(before.iter().all(|q| store.contains(q)), "{} removed quads", id);
            prop_assert_eq!(store.len(), before.len() + added);
        }
        let full = store.clone();
        let again = emit_from_scenario(&mut store, &bundle, &EmitConfig::default())
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(again.is_empty(), "second emission added {} quads", again.len());
        prop_assert_eq!(store, full);
        Ok(())
    })
}

// Identity resolution --------------------------------------------------------

const NAMES: &[&str] = &["Carl", "carl", " Leolani", "Bram", "Selene", "LEOLANI "];

#[derive(Debug, Clone)]
pub struct Registry {
    entries: Vec<(usize, u8)>,
    query: usize,
    shuffled: Vec<(usize, u8)>,
}

fn registry() -> impl Strategy<Value = Registry> {
    prop::collection::vec((0..NAMES.len(), any::<u8>()), 0..6)
        .prop_flat_map(|entries| {
            let shuffled = Just(entries.clone()).prop_shuffle();
            (Just(entries), 0..NAMES.len(), shuffled)
        })
        .prop_map(|(entries, query, shuffled)| Registry {
            entries,
            query,
            shuffled,
        })
}

fn key(name: &str) -> String {
    name.trim().to_lowercase()
}

/// Name resolution returns the first registry entry whose normalised name
/// matches. Reordering the registry changes nothing unless two entries share
/// the name.
pub fn check_resolver_permutation(cases: u32) -> Result<(), String> {
    run(cases, registry(), |r| {
        let entries = |list: &[(usize, u8)]| -> Vec<RegistryEntry> {
            list.iter()
                .map(|&(n, tag)| RegistryEntry::new(format!("iri:{n}:{tag}"), NAMES[n]))
                .collect()
        };
        let original = entries(&r.entries);
        let shuffled = entries(&r.shuffled);
        let query = NAMES[r.query];
        let resolve =
            |reg: &[RegistryEntry]| resolve_identity(IdentityQuery::Name(query), reg, &mut IdMint::seeded("p"));

        let first = original.iter().find(|e| key(&e.name) == key(query));
        let got = resolve(&original);
        match first {
            Some(e) => prop_assert_eq!(&got, &Resolution::Known(e.iri.clone())),
            None => prop_assert!(
                matches!(&got, Resolution::New(n) if n.name == query),
                "expected a new identity, got {:?}",
                got
            ),
        }
        let matching: BTreeSet<&str> = original
            .iter()
            .filter(|e| key(&e.name) == key(query))
            .map(|e| e.iri.as_str())
            .collect();
        let other = resolve(&shuffled);
        if matching.len() <= 1 {
            prop_assert_eq!(other, got);
        } else {
            prop_assert!(matching.contains(other.iri()));
        }
        Ok(())
    })
}

pub type Suite = fn(u32) -> Result<(), String>;

pub const SUITES: &[(&str, Suite)] = &[
    ("segment containment", check_segment_containment),
    ("container closure", check_container_closure),
    ("co-reference index", check_coreference),
    ("TriG round trip", check_trig_round_trip),
    ("partition invariant", check_partition_invariant),
    ("monotonic store growth", check_monotonic_growth),
    ("resolver permutation", check_resolver_permutation),
];
