use std::path::Path;

use serde_json::{json, Map, Value};

use super::{StorageError, CONTEXT_IRI};
use crate::model::*;

/// Writes the scenario file and one metadata file per listed modality.
/// The folder name must equal the scenario id. Output is deterministic:
/// fixed key order, two-space indentation, trailing newline.
pub fn save_scenario(bundle: &ScenarioBundle, dir: &Path) -> Result<(), StorageError> {
    let folder = dir
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let id = &bundle.scenario.id;
    if &folder != id {
        return Err(StorageError::FolderNameMismatch { folder, id: id.clone() });
    }
    std::fs::create_dir_all(dir).map_err(|e| StorageError::io(dir, e))?;
    write_pretty(&dir.join(format!("{id}.json")), &scenario_to_json(&bundle.scenario))?;
    for (modality, rel) in &bundle.scenario.signals {
        let signals = bundle.signals.get(modality).map(Vec::as_slice).unwrap_or(&[]);
        let path = dir.join(rel.trim_start_matches("./"));
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(|e| StorageError::io(parent, e))?;
        }
        std::fs::write(&path, signals_to_string(signals)).map_err(|e| StorageError::io(&path, e))?;
    }
    Ok(())
}

fn write_pretty(path: &Path, value: &Value) -> Result<(), StorageError> {
    std::fs::write(path, to_pretty(value)).map_err(|e| StorageError::io(path, e))
}

fn to_pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Contents of a modality metadata file.
pub fn signals_to_string(signals: &[Signal]) -> String {
    to_pretty(&Value::Array(signals.iter().map(signal_to_json).collect()))
}

/// Appends unknown keys; JSON-LD keywords go first so that, e.g., a
/// person's `@context` stays at the top of its object.
fn with_extra(mut known: Map<String, Value>, extra: &Extra) -> Value {
    let mut out = Map::new();
    for (k, v) in extra.iter().filter(|(k, _)| k.starts_with('@')) {
        out.insert(k.clone(), v.clone());
    }
    out.append(&mut known);
    for (k, v) in extra.iter().filter(|(k, _)| !k.starts_with('@')) {
        out.insert(k.clone(), v.clone());
    }
    Value::Object(out)
}

fn obj(value: Value) -> Map<String, Value> {
    match value {
        Value::Object(m) => m,
        _ => unreachable!("json! object literal"),
    }
}

pub fn scenario_to_json(s: &Scenario) -> Value {
    let mut m = obj(json!({
        "@context": CONTEXT_IRI,
        "type": "Scenario",
        "id": s.id,
        "context": context_to_json(&s.context),
        "ruler": {
            "type": "TemporalRuler",
            "container_id": s.ruler.container_id,
            "start": s.ruler.start,
            "end": s.ruler.end,
        },
        "signals": s.signals.iter().map(|(k, v)| (k.to_string(), Value::from(v.as_str()))).collect::<Map<_, _>>(),
    }));
    if let Some(attrs) = &s.attributes {
        m.insert("attributes".into(), Value::Object(attrs.clone()));
    }
    with_extra(m, &s.extra)
}

fn context_to_json(c: &ScenarioContext) -> Value {
    let mut m = obj(json!({ "agent": c.agent }));
    if let Some(speaker) = &c.speaker {
        m.insert("speaker".into(), person_to_json(speaker));
    }
    m.insert("persons".into(), c.persons.iter().map(person_to_json).collect());
    m.insert(
        "objects".into(),
        c.objects
            .iter()
            .map(|o| {
                let mut m = obj(json!({ "id": o.id }));
                if let Some(label) = &o.label {
                    m.insert("label".into(), label.as_str().into());
                }
                with_extra(m, &o.extra)
            })
            .collect(),
    );
    with_extra(m, &c.extra)
}

fn person_to_json(p: &Person) -> Value {
    let mut m = obj(json!({ "id": p.id, "type": "Person", "name": p.name }));
    if let Some(b) = &p.birth_date {
        m.insert("birthDate".into(), b.as_str().into());
    }
    if let Some(g) = &p.gender {
        m.insert("gender".into(), g.as_str().into());
    }
    with_extra(m, &p.extra)
}

fn time_to_json(t: &TimeSegment) -> Value {
    let tag = match t.tag {
        TimeTag::TimeSegment => "TimeSegment",
        TimeTag::TemporalRuler => "TemporalRuler",
    };
    json!({ "type": tag, "container_id": t.container_id, "start": t.start, "end": t.end })
}

fn bounds_json(b: &Bounds) -> Value {
    Value::from(b.to_array().to_vec())
}

pub fn signal_to_json(s: &Signal) -> Value {
    let ruler = match &s.ruler {
        SignalRuler::Index(r) => {
            json!({ "type": "Index", "container_id": r.container_id, "start": r.start, "stop": r.stop })
        }
        SignalRuler::MultiIndex(r) => {
            json!({ "type": "MultiIndex", "container_id": r.container_id, "bounds": bounds_json(&r.bounds) })
        }
    };
    let mut m = obj(json!({
        "@context": CONTEXT_IRI,
        "type": s.kind.type_name(),
        "id": s.id,
        "modality": s.modality.as_str(),
        "files": s.files,
        "time": time_to_json(&s.time),
        "ruler": ruler,
    }));
    if let Some(seq) = &s.seq {
        m.insert("seq".into(), seq.chars().map(|c| Value::from(c.to_string())).collect());
    }
    m.insert("mentions".into(), s.mentions.iter().map(mention_to_json).collect());
    with_extra(m, &s.extra)
}

pub fn segment_to_json(seg: &Segment) -> Value {
    match seg {
        Segment::Index(s) => {
            json!({ "type": "Index", "container_id": s.container_id, "start": s.start, "stop": s.stop })
        }
        Segment::Box(b) => {
            json!({ "type": "BoundingBox", "container_id": b.container_id, "bounds": bounds_json(&b.bounds) })
        }
        Segment::Time(t) => time_to_json(t),
        Segment::Atomic { container_id } => json!({ "type": "Atomic", "container_id": container_id }),
    }
}

pub fn mention_to_json(m: &Mention) -> Value {
    let known = obj(json!({
        "type": "Mention",
        "id": m.id,
        "annotations": m.annotations.iter().map(annotation_to_json).collect::<Vec<_>>(),
        "segment": m.segments.iter().map(segment_to_json).collect::<Vec<_>>(),
    }));
    with_extra(known, &m.extra)
}

pub fn annotation_to_json(a: &Annotation) -> Value {
    let mut m = obj(json!({
        "type": a.kind,
        "value": value_to_json(&a.value),
        "source": a.source,
        "timestamp": a.timestamp,
    }));
    if let Some(secs) = a.timestamp_epoch_seconds {
        m.insert("timestamp_epoch_seconds".into(), secs.into());
    }
    with_extra(m, &a.extra)
}

fn value_to_json(v: &AnnotationValue) -> Value {
    match v {
        AnnotationValue::Token(t) => with_extra(
            obj(json!({
                "type": "Token",
                "id": t.id,
                "value": t.value,
                "ruler": { "type": "AtomicRuler", "container_id": t.ruler_container },
            })),
            &t.extra,
        ),
        AnnotationValue::Face(f) => {
            let mut m = obj(json!({ "type": "Face", "instance": person_to_json(&f.instance) }));
            if let Some(age) = f.age {
                m.insert("age".into(), age.into());
            }
            if let Some(g) = &f.gender {
                m.insert("gender".into(), g.as_str().into());
            }
            m.insert("faceprob".into(), f.faceprob.into());
            with_extra(m, &f.extra)
        }
        AnnotationValue::EntityLink(l) => {
            let mut m = obj(json!({ "type": "EntityLink", "id": l.iri }));
            if let Some(label) = &l.label {
                m.insert("label".into(), label.as_str().into());
            }
            if !l.types.is_empty() {
                m.insert("types".into(), l.types.clone().into());
            }
            Value::Object(m)
        }
        AnnotationValue::Triple(t) => {
            let object = match &t.object {
                TripleObject::Iri(iri) => Value::from(iri.as_str()),
                TripleObject::Literal { value, datatype } => {
                    let mut m = obj(json!({ "@value": value }));
                    if let Some(dt) = datatype {
                        m.insert("@type".into(), dt.as_str().into());
                    }
                    Value::Object(m)
                }
            };
            let mut m = obj(json!({
                "type": "Triple",
                "subject": t.subject,
                "predicate": t.predicate,
                "object": object,
            }));
            if !t.subject_types.is_empty() {
                m.insert("subject_types".into(), t.subject_types.clone().into());
            }
            if !t.object_types.is_empty() {
                m.insert("object_types".into(), t.object_types.clone().into());
            }
            if !t.perspective.is_empty() {
                m.insert(
                    "perspective".into(),
                    t.perspective
                        .iter()
                        .map(|(k, v)| (k.clone(), Value::from(v.as_str())))
                        .collect(),
                );
            }
            if let Some(src) = &t.source {
                m.insert("source".into(), src.as_str().into());
            }
            with_extra(m, &t.extra)
        }
        AnnotationValue::Label(s) => Value::from(s.as_str()),
        AnnotationValue::Other(v) => v.clone(),
    }
}
