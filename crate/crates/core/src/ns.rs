//! Namespace table shared by the JSON-LD layer and the episodic graph.
//!
//! The first block mirrors the prefixes found in the example statement files;
//! the second block declares the namespaces those files use without declaring
//! them (`robotWorld`, `robotTalk`, `eps`, ...).

pub const ROBOT_CONTEXT: &str = "http://emissor.org/robot/context/";
pub const ROBOT_WORLD: &str = "http://emissor.org/robot/world/";
pub const ROBOT_TALK: &str = "http://emissor.org/robot/talk/";
pub const ROBOT_FRIENDS: &str = "http://emissor.org/robot/friends/";
pub const ROBOT_INPUTS: &str = "http://emissor.org/robot/inputs/";
pub const ROBOT_MU: &str = "http://emissor.org/robot/ontology/";

pub const XML1: &str = "https://www.w3.org/TR/xmlschema-2/#";
pub const OWL: &str = "http://www.w3.org/2002/07/owl#";
pub const GAF: &str = "http://groundedannotationframework.org/gaf#";
pub const GRASP: &str = "http://groundedannotationframework.org/grasp#";
pub const GRASPF: &str = "http://groundedannotationframework.org/grasp/factuality#";
pub const GRASPS: &str = "http://groundedannotationframework.org/grasp/sentiment#";
pub const GRASPE: &str = "http://groundedannotationframework.org/grasp/emotion#";
pub const SEM: &str = "http://semanticweb.cs.vu.nl/2009/11/sem/";
pub const PROV: &str = "http://www.w3.org/ns/prov#";
pub const EPS: &str = "http://cltl.nl/episodicawareness/";
pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
pub const TIME: &str = "http://www.w3.org/TR/owl-time/#";
pub const EMISSOR: &str = "http://emmisor.org/emissor#";

/// `@base` of the bundled JSON-LD context; relative identifiers resolve here.
pub const BASE: &str = "http://experiment.my/";

/// Prefix table in declaration order. Serialized TriG always starts with
/// exactly this block.
pub const PREFIXES: &[(&str, &str)] = &[
    ("robotContext", ROBOT_CONTEXT),
    ("xml1", XML1),
    ("owl", OWL),
    ("wdt", "http://www.wikidata.org/prop/direct/"),
    ("ceo", "http://www.newsreader-project.eu/domain-ontology#"),
    ("gaf", GAF),
    ("ns1", "urn:x-rdflib:"),
    ("wd", "http://www.wikidata.org/entity/"),
    ("grasp", GRASP),
    ("xml", "http://www.w3.org/XML/1998/namespace"),
    ("grasps", GRASPS),
    ("sem", SEM),
    ("prov", PROV),
    ("foaf", "http://xmlns.com/foaf/0.1/"),
    ("wgs", "http://www.w3.org/2003/01/geo/wgs84_pos#"),
    ("graspf", GRASPF),
    ("xsd", XSD),
    ("rdfs", RDFS),
    ("rdf", RDF),
    ("graspe", GRASPE),
    ("eps", EPS),
    ("time", TIME),
    ("robotWorld", ROBOT_WORLD),
    ("robotTalk", ROBOT_TALK),
    ("robotFriends", ROBOT_FRIENDS),
    ("robotInputs", ROBOT_INPUTS),
    ("robotMu", ROBOT_MU),
    ("emissor", EMISSOR),
];

pub fn namespace(prefix: &str) -> Option<&'static str> {
    PREFIXES.iter().find(|(p, _)| *p == prefix).map(|(_, ns)| *ns)
}

/// Expands `prefix:local` when the prefix is declared. Absolute IRIs and
/// unknown prefixes yield `None`.
pub fn expand_curie(curie: &str) -> Option<String> {
    let (prefix, local) = curie.split_once(':')?;
    if local.starts_with("//") {
        return None;
    }
    namespace(prefix).map(|ns| format!("{ns}{local}"))
}

/// True when the string has a URI scheme (`http:`, `urn:`, ...) and is not a
/// CURIE over a declared prefix.
pub fn is_absolute_iri(s: &str) -> bool {
    match s.split_once(':') {
        Some((scheme, _)) if namespace(scheme).is_none() => {
            let mut chars = scheme.chars();
            matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
                && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
        }
        _ => false,
    }
}

/// Resolves an identifier as it appears in scenario metadata (absolute IRI,
/// CURIE over a declared prefix, or a bare id relative to [`BASE`]).
pub fn resolve_identifier(id: &str) -> String {
    if is_absolute_iri(id) {
        id.to_string()
    } else if let Some(iri) = expand_curie(id) {
        iri
    } else {
        format!("{BASE}{}", id.trim_start_matches("./"))
    }
}

/// Longest declared namespace that prefixes `iri`.
pub fn split_iri(iri: &str) -> Option<(&'static str, &str)> {
    PREFIXES
        .iter()
        .filter(|(_, ns)| iri.starts_with(ns))
        .max_by_key(|(_, ns)| ns.len())
        .map(|(p, ns)| (*p, &iri[ns.len()..]))
}

/// Local part of an IRI: text after the last `#` or `/`.
pub fn local_name(iri: &str) -> &str {
    if let Some((_, local)) = split_iri(iri) {
        if !local.is_empty() {
            return local;
        }
    }
    iri.rsplit(['#', '/']).next().unwrap_or(iri)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curies_expand_only_for_declared_prefixes() {
        assert_eq!(
            expand_curie("robotMu:locatedUnder").as_deref(),
            Some("http://emissor.org/robot/ontology/locatedUnder")
        );
        assert_eq!(expand_curie("nope:x"), None);
        assert_eq!(expand_curie("http://example.org/x"), None);
    }

    #[test]
    fn absolute_iris() {
        assert!(is_absolute_iri("http://example.org/x"));
        assert!(is_absolute_iri("urn:x-rdflib:a"));
        assert!(!is_absolute_iri("gaf:Instance"));
        assert!(!is_absolute_iri("bc913d64-a597-4876-a3fe-fe47472cd274"));
    }

    #[test]
    fn identifiers_resolve_against_base() {
        assert_eq!(
            resolve_identifier("bc913d64-a597-4876-a3fe-fe47472cd274"),
            "http://experiment.my/bc913d64-a597-4876-a3fe-fe47472cd274"
        );
        assert_eq!(
            resolve_identifier("robotFriends:lani"),
            "http://emissor.org/robot/friends/lani"
        );
        assert_eq!(resolve_identifier("urn:a:b"), "urn:a:b");
    }

    #[test]
    fn local_names() {
        assert_eq!(local_name("http://emissor.org/robot/friends/lani"), "lani");
        assert_eq!(local_name("http://example.org/a#b"), "b");
        assert_eq!(local_name(&format!("{GRASPF}CERTAIN")), "CERTAIN");
    }

    #[test]
    fn prefixes_are_unique() {
        let mut seen = std::collections::HashSet::new();
        assert!(PREFIXES.iter().all(|(p, _)| seen.insert(*p)));
    }
}
