//! TriG reading and writing.
//!
//! Writing is hand rolled so that output is byte-stable: the full prefix
//! table, then the layer graphs in a fixed order, then claim graphs by IRI;
//! subjects sorted, `a` first, objects sorted. Reading goes through oxttl.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::store::GraphStore;
use super::term::{vocab, xsd_string, Iri, Literal, Quad, Term};
use crate::ns::{split_iri, PREFIXES};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: u64,
    pub column: u64,
    pub message: String,
}

fn is_pn_local(local: &str) -> bool {
    let ok = |c: char| c.is_ascii_alphanumeric() || c == '_' || c == '-';
    let mut chars = local.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphanumeric() || c == '_' => {}
        _ => return false,
    }
    local.chars().all(|c| ok(c) || c == '.') && !local.ends_with('.')
}

fn write_iri(out: &mut String, iri: &Iri) {
    match split_iri(iri.as_str()) {
        Some((prefix, local)) if is_pn_local(local) => {
            let _ = write!(out, "{prefix}:{local}");
        }
        _ => {
            out.push('<');
            for c in iri.as_str().chars() {
                match c {
                    '>' | '\\' | '"' | '{' | '}' | '|' | '^' | '`' | '<' | ' ' => {
                        let _ = write!(out, "\\u{:04X}", c as u32);
                    }
                    c => out.push(c),
                }
            }
            out.push('>');
        }
    }
}

fn write_string(out: &mut String, value: &str) {
    out.push('"');
    for c in value.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

fn write_term(out: &mut String, term: &Term) {
    match term {
        Term::Iri(i) => write_iri(out, i),
        Term::Literal(Literal { value, datatype, lang }) => {
            write_string(out, value);
            if let Some(lang) = lang {
                let _ = write!(out, "@{lang}");
            } else if *datatype != xsd_string() {
                out.push_str("^^");
                write_iri(out, datatype);
            }
        }
    }
}

fn graph_order(store: &GraphStore) -> Vec<Iri> {
    let layers = [
        vocab::instances(),
        vocab::interactions(),
        vocab::claims(),
        vocab::perspectives(),
    ];
    let names = store.graph_names();
    let mut out: Vec<Iri> = layers.iter().filter(|g| names.contains(g)).cloned().collect();
    out.extend(names.into_iter().filter(|g| !layers.contains(g)).cloned());
    out
}

/// Serializes the whole store. An empty store yields the prefix block only.
pub fn serialize_trig(store: &GraphStore) -> String {
    let mut out = String::new();
    for (prefix, ns) in PREFIXES {
        let _ = writeln!(out, "@prefix {prefix}: <{ns}> .");
    }
    let rdf_type = vocab::rdf_type();
    for graph in graph_order(store) {
        out.push('\n');
        write_iri(&mut out, &graph);
        out.push_str(" {\n");
        let mut subjects: BTreeMap<&Iri, BTreeMap<&Iri, Vec<&Term>>> = BTreeMap::new();
        for q in store.graph(&graph) {
            subjects
                .entry(&q.subject)
                .or_default()
                .entry(&q.predicate)
                .or_default()
                .push(&q.object);
        }
        for (subject, mut preds) in subjects {
            out.push_str("  ");
            write_iri(&mut out, subject);
            let mut ordered: Vec<(Option<&Iri>, Vec<&Term>)> = Vec::new();
            if let Some(types) = preds.remove(&rdf_type) {
                ordered.push((None, types));
            }
            ordered.extend(preds.into_iter().map(|(p, o)| (Some(p), o)));
            for (i, (pred, mut objects)) in ordered.into_iter().enumerate() {
                objects.sort();
                out.push_str(if i == 0 { " " } else { " ;\n      " });
                match pred {
                    None => out.push('a'),
                    Some(p) => write_iri(&mut out, p),
                }
                for (j, o) in objects.iter().enumerate() {
                    out.push_str(if j == 0 { " " } else { ", " });
                    write_term(&mut out, o);
                }
            }
            out.push_str(" .\n");
        }
        out.push_str("}\n");
    }
    out
}

fn position_error(e: &oxttl::TurtleSyntaxError) -> ParseError {
    let start = e.location().start;
    ParseError {
        line: start.line + 1,
        column: start.column + 1,
        message: e.message().to_string(),
    }
}

/// Parses strict TriG. Blank nodes and default-graph triples are rejected:
/// the graph layout names every node and every graph.
pub fn parse_trig(text: &str) -> Result<GraphStore, ParseError> {
    let mut store = GraphStore::new();
    let refuse = |what: &str, quad: &oxrdf::Quad| ParseError {
        line: 0,
        column: 0,
        message: format!("{what} in {quad}"),
    };
    for quad in oxttl::TriGParser::new().for_slice(text.as_bytes()) {
        let quad = quad.map_err(|e| position_error(&e))?;
        let subject = match &quad.subject {
            oxrdf::NamedOrBlankNode::NamedNode(n) => Iri::new(n.as_str()),
            _ => return Err(refuse("blank node subject", &quad)),
        };
        let object = match &quad.object {
            oxrdf::Term::NamedNode(n) => Term::Iri(Iri::new(n.as_str())),
            oxrdf::Term::Literal(l) => Term::Literal(Literal {
                value: l.value().to_string(),
                datatype: Iri::new(l.datatype().as_str()),
                lang: l.language().map(str::to_string),
            }),
            _ => return Err(refuse("blank node object", &quad)),
        };
        let graph = match &quad.graph_name {
            oxrdf::GraphName::NamedNode(n) => Iri::new(n.as_str()),
            _ => return Err(refuse("triple outside a named graph", &quad)),
        };
        store.insert(Quad {
            subject,
            predicate: Iri::new(quad.predicate.as_str()),
            object,
            graph,
        });
    }
    Ok(store)
}

/// Kind of emission batch; decides the file name under `rdf/`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BatchKind {
    Statements,
    ObjectDetection,
}

impl BatchKind {
    pub fn stem(self) -> &'static str {
        match self {
            BatchKind::Statements => "statements",
            BatchKind::ObjectDetection => "objectdetection",
        }
    }
}

/// Writes `store` as the next numbered batch file (`statements1.trig`,
/// `statements2.trig`, ...) in `rdf_dir` and returns its path.
pub fn write_batch(rdf_dir: &Path, kind: BatchKind, store: &GraphStore) -> std::io::Result<PathBuf> {
    std::fs::create_dir_all(rdf_dir)?;
    let stem = kind.stem();
    let mut last = 0u64;
    for entry in std::fs::read_dir(rdf_dir)? {
        let name = entry?.file_name().to_string_lossy().into_owned();
        if let Some(n) = name
            .strip_prefix(stem)
            .and_then(|r| r.strip_suffix(".trig"))
            .and_then(|n| n.parse::<u64>().ok())
        {
            last = last.max(n);
        }
    }
    let path = rdf_dir.join(format!("{stem}{}.trig", last + 1));
    std::fs::write(&path, serialize_trig(store))?;
    Ok(path)
}

/// Union of every `*.trig` file in `rdf_dir`, in file name order.
pub fn read_batches(rdf_dir: &Path) -> Result<GraphStore, Box<dyn std::error::Error + Send + Sync>> {
    let mut store = GraphStore::new();
    if !rdf_dir.is_dir() {
        return Ok(store);
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(rdf_dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "trig"))
        .collect();
    files.sort();
    for f in files {
        let text = std::fs::read_to_string(&f)?;
        let parsed = parse_trig(&text).map_err(|e| format!("{}: {e}", f.display()))?;
        store.extend(&parsed);
    }
    Ok(store)
}
