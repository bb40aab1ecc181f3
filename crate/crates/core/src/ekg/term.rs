use std::fmt;

use crate::ns::{self, XSD};

/// An absolute IRI.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

impl Iri {
    pub fn new(iri: impl Into<String>) -> Iri {
        Iri(iri.into())
    }

    /// `namespace` + `local`.
    pub fn ns(namespace: &str, local: &str) -> Iri {
        Iri(format!("{namespace}{local}"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn local_name(&self) -> &str {
        ns::local_name(&self.0)
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Iri {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    Literal(Literal),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub value: String,
    pub datatype: Iri,
    pub lang: Option<String>,
}

pub fn xsd_string() -> Iri {
    Iri::ns(XSD, "string")
}

impl Term {
    pub fn iri(iri: &Iri) -> Term {
        Term::Iri(iri.clone())
    }

    /// A plain `xsd:string` literal.
    pub fn string(value: impl Into<String>) -> Term {
        Term::typed(value, xsd_string())
    }

    pub fn typed(value: impl Into<String>, datatype: Iri) -> Term {
        Term::Literal(Literal {
            value: value.into(),
            datatype,
            lang: None,
        })
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(i) => Some(i),
            Term::Literal(_) => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(l) => Some(l),
            Term::Iri(_) => None,
        }
    }

    /// IRI text or literal value.
    pub fn lexical(&self) -> &str {
        match self {
            Term::Iri(i) => i.as_str(),
            Term::Literal(l) => &l.value,
        }
    }
}

impl From<Iri> for Term {
    fn from(i: Iri) -> Term {
        Term::Iri(i)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(i) => write!(f, "<{i}>"),
            Term::Literal(l) => match &l.lang {
                Some(lang) => write!(f, "{:?}@{lang}", l.value),
                None => write!(f, "{:?}^^<{}>", l.value, l.datatype),
            },
        }
    }
}

/// A triple in a named graph. There is no default graph and no blank node.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quad {
    pub subject: Iri,
    pub predicate: Iri,
    pub object: Term,
    pub graph: Iri,
}

impl Quad {
    pub fn new(subject: &Iri, predicate: &Iri, object: impl Into<Term>, graph: &Iri) -> Quad {
        Quad {
            subject: subject.clone(),
            predicate: predicate.clone(),
            object: object.into(),
            graph: graph.clone(),
        }
    }

    pub fn triple(&self) -> (&Iri, &Iri, &Term) {
        (&self.subject, &self.predicate, &self.object)
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "<{}> <{}> {} <{}>",
            self.subject, self.predicate, self.object, self.graph
        )
    }
}

/// Vocabulary used by the graph layout.
pub mod vocab {
    use super::Iri;
    use crate::ns::*;

    fn iri(ns: &str, local: &str) -> Iri {
        Iri::ns(ns, local)
    }

    pub fn instances() -> Iri {
        iri(ROBOT_WORLD, "Instances")
    }
    pub fn claims() -> Iri {
        iri(ROBOT_WORLD, "Claims")
    }
    pub fn interactions() -> Iri {
        iri(ROBOT_TALK, "Interactions")
    }
    pub fn perspectives() -> Iri {
        iri(ROBOT_TALK, "Perspectives")
    }

    pub fn rdf_type() -> Iri {
        iri(RDF, "type")
    }
    pub fn rdf_value() -> Iri {
        iri(RDF, "value")
    }
    pub fn label() -> Iri {
        iri(RDFS, "label")
    }
    pub fn gaf(local: &str) -> Iri {
        iri(GAF, local)
    }
    pub fn grasp(local: &str) -> Iri {
        iri(GRASP, local)
    }
    pub fn sem(local: &str) -> Iri {
        iri(SEM, local)
    }
    pub fn eps(local: &str) -> Iri {
        iri(EPS, local)
    }
    pub fn mu(local: &str) -> Iri {
        iri(ROBOT_MU, local)
    }
    pub fn time(local: &str) -> Iri {
        iri(TIME, local)
    }
    pub fn xml1(local: &str) -> Iri {
        iri(XML1, local)
    }
    pub fn was_derived_from() -> Iri {
        iri(PROV, "wasDerivedFrom")
    }
    pub fn foaf_name() -> Iri {
        iri("http://xmlns.com/foaf/0.1/", "name")
    }
    /// Millisecond start of an interaction event on the scenario ruler.
    pub fn start_ms() -> Iri {
        iri(EMISSOR, "startMs")
    }
    pub fn xsd_long() -> Iri {
        iri(XSD, "long")
    }
}
