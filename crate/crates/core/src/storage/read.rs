use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use super::{json, StorageError};
use crate::model::*;

#[derive(Debug, Clone, PartialEq)]
pub enum StorageWarning {
    /// A key occurred twice in one object; the last value was kept.
    DuplicateKey {
        file: PathBuf,
        pointer: String,
    },
    Model(ModelWarning),
}

impl fmt::Display for StorageWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StorageWarning::DuplicateKey { file, pointer } => {
                write!(f, "{}#{pointer}: duplicate key, last value kept", file.display())
            }
            StorageWarning::Model(w) => w.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Loaded {
    pub bundle: ScenarioBundle,
    pub warnings: Vec<StorageWarning>,
}

/// Loads `<dir>/<dir-name>.json` and every modality file it lists, then
/// normalizes the model (see [`ScenarioBundle::normalize`]).
pub fn load_scenario(dir: &Path) -> Result<Loaded, StorageError> {
    let name = dir
        .canonicalize()
        .ok()
        .and_then(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
        .ok_or_else(|| StorageError::MissingScenarioFile(dir.to_path_buf()))?;
    let file = dir.join(format!("{name}.json"));
    if !file.is_file() {
        return Err(StorageError::MissingScenarioFile(file));
    }
    let mut warnings = Vec::new();
    let value = read_json(&file, &mut warnings)?;
    let scenario = Decoder { file: &file }.scenario(&Cur::root(&value))?;

    let mut bundle = ScenarioBundle::new(scenario);
    for (modality, rel) in bundle.scenario.signals.clone() {
        let path = dir.join(rel.trim_start_matches("./"));
        let text = std::fs::read_to_string(&path).map_err(|e| StorageError::io(&path, e))?;
        let signals = parse_signals_into(&text, &path, modality, &mut warnings)?;
        bundle.signals.insert(modality, signals);
    }
    warnings.extend(bundle.normalize().into_iter().map(StorageWarning::Model));
    Ok(Loaded { bundle, warnings })
}

/// Parses one modality metadata file. No normalization is applied.
pub fn parse_signals(
    text: &str,
    file: &Path,
    modality: Modality,
) -> Result<(Vec<Signal>, Vec<StorageWarning>), StorageError> {
    let mut warnings = Vec::new();
    let signals = parse_signals_into(text, file, modality, &mut warnings)?;
    Ok((signals, warnings))
}

/// Decodes one segment object as it appears in a mention's `segment` list.
/// Errors name `origin` in place of a file.
pub fn segment_from_json(value: &Value, origin: &Path) -> Result<Segment, StorageError> {
    Decoder { file: origin }.segment(&Cur::root(value))
}

/// Decodes one annotation object.
pub fn annotation_from_json(value: &Value, origin: &Path) -> Result<Annotation, StorageError> {
    Decoder { file: origin }.annotation(&Cur::root(value))
}

/// Decodes one mention object; `id` is required.
pub fn mention_from_json(value: &Value, origin: &Path) -> Result<Mention, StorageError> {
    Decoder { file: origin }.mention(&Cur::root(value))
}

fn parse_signals_into(
    text: &str,
    file: &Path,
    modality: Modality,
    warnings: &mut Vec<StorageWarning>,
) -> Result<Vec<Signal>, StorageError> {
    let value = parse_json(text, file, warnings)?;
    let dec = Decoder { file };
    let root = Cur::root(&value);
    root.array(&dec)?
        .into_iter()
        .map(|c| dec.signal(&c, modality))
        .collect()
}

fn read_json(file: &Path, warnings: &mut Vec<StorageWarning>) -> Result<Value, StorageError> {
    let text = std::fs::read_to_string(file).map_err(|e| StorageError::io(file, e))?;
    parse_json(&text, file, warnings)
}

fn parse_json(text: &str, file: &Path, warnings: &mut Vec<StorageWarning>) -> Result<Value, StorageError> {
    let parsed = json::parse(text).map_err(|e| StorageError::MalformedJson {
        file: file.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    warnings.extend(
        parsed
            .duplicates
            .into_iter()
            .map(|pointer| StorageWarning::DuplicateKey {
                file: file.to_path_buf(),
                pointer,
            }),
    );
    Ok(parsed.value)
}

/// A value with its JSON pointer, for error reporting.
#[derive(Clone)]
struct Cur<'a> {
    v: &'a Value,
    ptr: String,
}

impl<'a> Cur<'a> {
    fn root(v: &'a Value) -> Self {
        Cur { v, ptr: String::new() }
    }

    fn child(&self, key: &str, v: &'a Value) -> Cur<'a> {
        Cur {
            v,
            ptr: format!("{}{}", self.ptr, json::pointer([key])),
        }
    }

    fn get(&self, key: &str) -> Option<Cur<'a>> {
        self.v.get(key).filter(|v| !v.is_null()).map(|v| self.child(key, v))
    }

    fn object(&self, dec: &Decoder) -> Result<&'a Map<String, Value>, StorageError> {
        self.v.as_object().ok_or_else(|| dec.err(self, "expected an object"))
    }

    fn array(&self, dec: &Decoder) -> Result<Vec<Cur<'a>>, StorageError> {
        let items = self.v.as_array().ok_or_else(|| dec.err(self, "expected an array"))?;
        Ok(items
            .iter()
            .enumerate()
            .map(|(i, v)| self.child(&i.to_string(), v))
            .collect())
    }

    fn str(&self, dec: &Decoder) -> Result<&'a str, StorageError> {
        self.v.as_str().ok_or_else(|| dec.err(self, "expected a string"))
    }

    fn i64(&self, dec: &Decoder) -> Result<i64, StorageError> {
        self.v.as_i64().ok_or_else(|| dec.err(self, "expected an integer"))
    }

    fn u64(&self, dec: &Decoder) -> Result<u64, StorageError> {
        self.v
            .as_u64()
            .ok_or_else(|| dec.err(self, "expected a non-negative integer"))
    }

    fn f64(&self, dec: &Decoder) -> Result<f64, StorageError> {
        self.v.as_f64().ok_or_else(|| dec.err(self, "expected a number"))
    }

    fn type_name(&self) -> Option<&'a str> {
        self.v
            .get("type")
            .or_else(|| self.v.get("@type"))
            .and_then(Value::as_str)
    }
}

struct Decoder<'f> {
    file: &'f Path,
}

impl Decoder<'_> {
    fn err(&self, at: &Cur, message: impl Into<String>) -> StorageError {
        StorageError::SchemaViolation {
            file: self.file.to_path_buf(),
            pointer: at.ptr.clone(),
            message: message.into(),
        }
    }

    fn req<'a>(&self, c: &Cur<'a>, key: &str) -> Result<Cur<'a>, StorageError> {
        c.get(key).ok_or_else(|| self.err(c, format!("missing {key:?}")))
    }

    fn req_str(&self, c: &Cur, key: &str) -> Result<String, StorageError> {
        Ok(self.req(c, key)?.str(self)?.to_string())
    }

    fn opt_str(&self, c: &Cur, key: &str) -> Result<Option<String>, StorageError> {
        c.get(key).map(|v| v.str(self).map(str::to_string)).transpose()
    }

    /// `id` or `@id`.
    fn id(&self, c: &Cur) -> Result<String, StorageError> {
        match c.get("id").or_else(|| c.get("@id")) {
            Some(v) => Ok(v.str(self)?.to_string()),
            None => Err(self.err(c, "missing \"id\"")),
        }
    }

    fn strings(&self, c: &Cur, key: &str) -> Result<Vec<String>, StorageError> {
        match c.get(key) {
            None => Ok(Vec::new()),
            Some(v) => v.array(self)?.iter().map(|s| s.str(self).map(str::to_string)).collect(),
        }
    }

    /// Keys not consumed by the decoder, in document order.
    fn extra(&self, c: &Cur, known: &[&str]) -> Result<Extra, StorageError> {
        Ok(c.object(self)?
            .iter()
            .filter(|(k, _)| !known.contains(&k.as_str()))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect())
    }

    fn scenario(&self, c: &Cur) -> Result<Scenario, StorageError> {
        c.object(self)?;
        let id = self.id(c)?;
        let ctx = self.req(c, "context")?;
        let context = self.context(&ctx)?;
        let r = self.req(c, "ruler")?;
        let ruler = TemporalRuler {
            container_id: self.req_str(&r, "container_id")?,
            start: self.req(&r, "start")?.i64(self)?,
            end: self.req(&r, "end")?.i64(self)?,
        };
        let mut signals = BTreeMap::new();
        if let Some(s) = c.get("signals") {
            for (key, value) in s.object(self)? {
                let at = s.child(key, value);
                let modality: Modality = key.parse().map_err(|e: String| self.err(&at, e))?;
                signals.insert(modality, at.str(self)?.to_string());
            }
        }
        let attributes = match c.get("attributes") {
            Some(a) => Some(a.object(self)?.clone()),
            None => None,
        };
        Ok(Scenario {
            id,
            context,
            ruler,
            signals,
            attributes,
            extra: self.extra(
                c,
                &[
                    "@context",
                    "type",
                    "@type",
                    "id",
                    "@id",
                    "context",
                    "ruler",
                    "signals",
                    "attributes",
                ],
            )?,
        })
    }

    fn context(&self, c: &Cur) -> Result<ScenarioContext, StorageError> {
        c.object(self)?;
        let persons = match c.get("persons") {
            Some(p) => p
                .array(self)?
                .iter()
                .map(|p| self.person(p))
                .collect::<Result<_, _>>()?,
            None => Vec::new(),
        };
        let objects = match c.get("objects") {
            Some(o) => o
                .array(self)?
                .iter()
                .map(|o| {
                    Ok(ObjectInstance {
                        id: self.id(o)?,
                        label: self.opt_str(o, "label")?,
                        extra: self.extra(o, &["id", "@id", "label"])?,
                    })
                })
                .collect::<Result<_, StorageError>>()?,
            None => Vec::new(),
        };
        Ok(ScenarioContext {
            agent: self.opt_str(c, "agent")?.unwrap_or_default(),
            speaker: c.get("speaker").map(|s| self.person(&s)).transpose()?,
            persons,
            objects,
            extra: self.extra(c, &["agent", "speaker", "persons", "objects"])?,
        })
    }

    fn person(&self, c: &Cur) -> Result<Person, StorageError> {
        c.object(self)?;
        Ok(Person {
            id: self.id(c)?,
            name: self.opt_str(c, "name")?.unwrap_or_default(),
            birth_date: self.opt_str(c, "birthDate")?,
            gender: self.opt_str(c, "gender")?,
            extra: self.extra(c, &["id", "@id", "type", "name", "birthDate", "gender"])?,
        })
    }

    fn signal(&self, c: &Cur, modality: Modality) -> Result<Signal, StorageError> {
        c.object(self)?;
        let id = self.id(c)?;
        if let Some(m) = c.get("modality") {
            let declared: Modality = m.str(self)?.parse().map_err(|e: String| self.err(&m, e))?;
            if declared != modality {
                return Err(self.err(&m, format!("{declared} signal listed in the {modality} file")));
            }
        }
        let kind = match c.type_name() {
            Some("TextSignal") => SignalKind::Text,
            Some("ImageSignal") => SignalKind::Image,
            Some("AudioSignal") => SignalKind::Audio,
            Some(other) => return Err(self.err(c, format!("unknown signal type {other:?}"))),
            None => modality.signal_kind(),
        };
        let time = self.time_segment(&self.req(c, "time")?)?;
        let ruler = self.signal_ruler(&self.req(c, "ruler")?)?;
        let seq = match c.get("seq") {
            None => None,
            Some(s) => Some(match s.v {
                Value::String(text) => text.clone(),
                _ => s
                    .array(self)?
                    .iter()
                    .map(|ch| ch.str(self))
                    .collect::<Result<String, _>>()?,
            }),
        };
        let mentions = match c.get("mentions") {
            Some(m) => m
                .array(self)?
                .iter()
                .map(|m| self.mention(m))
                .collect::<Result<_, _>>()?,
            None => Vec::new(),
        };
        Ok(Signal {
            id,
            kind,
            modality,
            files: self.strings(c, "files")?,
            time,
            ruler,
            seq,
            mentions,
            extra: self.extra(
                c,
                &[
                    "@context", "type", "@type", "id", "@id", "modality", "files", "time", "ruler", "seq", "mentions",
                ],
            )?,
        })
    }

    fn time_segment(&self, c: &Cur) -> Result<TimeSegment, StorageError> {
        let tag = match c.type_name() {
            Some("TemporalRuler") => TimeTag::TemporalRuler,
            Some("TimeSegment") | None => TimeTag::TimeSegment,
            Some(other) => return Err(self.err(c, format!("expected a time segment, found {other:?}"))),
        };
        Ok(TimeSegment {
            container_id: self.req_str(c, "container_id")?,
            start: self.req(c, "start")?.i64(self)?,
            end: self.req(c, "end")?.i64(self)?,
            tag,
        })
    }

    fn bounds(&self, c: &Cur) -> Result<Bounds, StorageError> {
        let b = self.req(c, "bounds")?;
        let items = b.array(self)?;
        if items.len() != 4 {
            return Err(self.err(&b, format!("bounds need 4 numbers, found {}", items.len())));
        }
        let mut out = [0u32; 4];
        for (slot, item) in out.iter_mut().zip(&items) {
            *slot = u32::try_from(item.u64(self)?).map_err(|_| self.err(item, "coordinate too large"))?;
        }
        Ok(Bounds::from(out))
    }

    fn signal_ruler(&self, c: &Cur) -> Result<SignalRuler, StorageError> {
        let container_id = self.req_str(c, "container_id")?;
        match c.type_name() {
            Some("Index" | "IndexRuler") => Ok(SignalRuler::Index(IndexRuler {
                container_id,
                start: self.req(c, "start")?.u64(self)?,
                stop: self.req(c, "stop")?.u64(self)?,
            })),
            Some("MultiIndex" | "MultiIndexRuler") => Ok(SignalRuler::MultiIndex(MultiIndexRuler {
                container_id,
                bounds: self.bounds(c)?,
            })),
            other => Err(self.err(c, format!("expected an Index or MultiIndex ruler, found {other:?}"))),
        }
    }

    fn segment(&self, c: &Cur) -> Result<Segment, StorageError> {
        let container_id = self.req_str(c, "container_id")?;
        match c.type_name() {
            Some("Index" | "IndexSegment") => Ok(Segment::Index(IndexSegment {
                container_id,
                start: self.req(c, "start")?.u64(self)?,
                stop: self.req(c, "stop")?.u64(self)?,
            })),
            Some("BoundingBox" | "MultiIndex") => Ok(Segment::Box(BoundingBox {
                container_id,
                bounds: self.bounds(c)?,
            })),
            Some("TimeSegment" | "TemporalRuler") => Ok(Segment::Time(self.time_segment(c)?)),
            Some("Atomic" | "AtomicRuler") => Ok(Segment::Atomic { container_id }),
            other => Err(self.err(c, format!("unknown segment type {other:?}"))),
        }
    }

    fn mention(&self, c: &Cur) -> Result<Mention, StorageError> {
        c.object(self)?;
        let segments = match c.get("segment").or_else(|| c.get("segments")) {
            Some(s) => s
                .array(self)?
                .iter()
                .map(|s| self.segment(s))
                .collect::<Result<_, _>>()?,
            None => Vec::new(),
        };
        let annotations = match c.get("annotations") {
            Some(a) => a
                .array(self)?
                .iter()
                .map(|a| self.annotation(a))
                .collect::<Result<_, _>>()?,
            None => Vec::new(),
        };
        Ok(Mention {
            id: self.id(c)?,
            segments,
            annotations,
            extra: self.extra(c, &["type", "@type", "id", "@id", "segment", "segments", "annotations"])?,
        })
    }

    fn annotation(&self, c: &Cur) -> Result<Annotation, StorageError> {
        c.object(self)?;
        let value = self.req(c, "value")?;
        Ok(Annotation {
            kind: c.type_name().unwrap_or("Annotation").to_string(),
            value: self.annotation_value(&value)?,
            source: self.opt_str(c, "source")?.unwrap_or_default(),
            timestamp: self.req(c, "timestamp")?.i64(self)?,
            timestamp_epoch_seconds: c.get("timestamp_epoch_seconds").map(|t| t.i64(self)).transpose()?,
            extra: self.extra(
                c,
                &[
                    "type",
                    "@type",
                    "value",
                    "source",
                    "timestamp",
                    "timestamp_epoch_seconds",
                ],
            )?,
        })
    }

    fn annotation_value(&self, c: &Cur) -> Result<AnnotationValue, StorageError> {
        if let Value::String(s) = c.v {
            return Ok(AnnotationValue::Label(s.clone()));
        }
        if !c.v.is_object() {
            return Ok(AnnotationValue::Other(c.v.clone()));
        }
        match c.type_name() {
            Some("Token") => {
                let id = self.id(c)?;
                let ruler_container = match c.get("ruler") {
                    Some(r) => self.req_str(&r, "container_id")?,
                    None => id.clone(),
                };
                Ok(AnnotationValue::Token(Token {
                    value: self.req_str(c, "value")?,
                    ruler_container,
                    extra: self.extra(c, &["type", "@type", "id", "@id", "value", "ruler"])?,
                    id,
                }))
            }
            Some("Face") => {
                let age = c
                    .get("age")
                    .map(|a| {
                        a.u64(self)
                            .and_then(|n| u32::try_from(n).map_err(|_| self.err(&a, "age too large")))
                    })
                    .transpose()?;
                Ok(AnnotationValue::Face(Face {
                    instance: self.person(&self.req(c, "instance")?)?,
                    age,
                    gender: self.opt_str(c, "gender")?,
                    faceprob: self.req(c, "faceprob")?.f64(self)?,
                    extra: self.extra(c, &["type", "@type", "instance", "age", "gender", "faceprob"])?,
                }))
            }
            Some("EntityLink") => {
                let iri = match c.get("iri") {
                    Some(i) => i.str(self)?.to_string(),
                    None => self.id(c)?,
                };
                Ok(AnnotationValue::EntityLink(EntityLink {
                    iri,
                    label: self.opt_str(c, "label")?,
                    types: self.strings(c, "types")?,
                }))
            }
            Some("Triple" | "TripleValue") => self.triple(c).map(AnnotationValue::Triple),
            Some("Label") if c.v.as_object().is_some_and(|o| o.len() == 2) => {
                Ok(AnnotationValue::Label(self.req_str(c, "value")?))
            }
            _ => Ok(AnnotationValue::Other(c.v.clone())),
        }
    }

    fn triple(&self, c: &Cur) -> Result<TripleValue, StorageError> {
        let o = self.req(c, "object")?;
        let object = match o.v {
            Value::String(s) => TripleObject::Iri(s.clone()),
            Value::Object(_) => match o.get("@value") {
                Some(v) => TripleObject::Literal {
                    value: v.str(self)?.to_string(),
                    datatype: self.opt_str(&o, "@type")?,
                },
                None => TripleObject::Iri(self.id(&o)?),
            },
            _ => return Err(self.err(&o, "object must be an IRI string or a literal")),
        };
        let mut perspective = BTreeMap::new();
        if let Some(p) = c.get("perspective") {
            for (key, value) in p.object(self)? {
                perspective.insert(key.clone(), p.child(key, value).str(self)?.to_string());
            }
        }
        Ok(TripleValue {
            subject: self.req_str(c, "subject")?,
            predicate: self.req_str(c, "predicate")?,
            object,
            subject_types: self.strings(c, "subject_types")?,
            object_types: self.strings(c, "object_types")?,
            perspective,
            source: self.opt_str(c, "source")?,
            extra: self.extra(
                c,
                &[
                    "type",
                    "@type",
                    "subject",
                    "predicate",
                    "object",
                    "subject_types",
                    "object_types",
                    "perspective",
                    "source",
                ],
            )?,
        })
    }
}
