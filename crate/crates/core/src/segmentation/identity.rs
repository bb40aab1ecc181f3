use crate::ids::IdMint;
use crate::model::Face;
use crate::ns::resolve_identifier;

/// Class assigned to identities minted for unknown speakers and faces.
pub const PERSON_CLASS: &str = "PERSON";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegistryEntry {
    pub iri: String,
    pub name: String,
}

impl RegistryEntry {
    pub fn new(iri: impl Into<String>, name: impl Into<String>) -> Self {
        RegistryEntry {
            iri: iri.into(),
            name: name.into(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum IdentityQuery<'a> {
    Name(&'a str),
    Face(&'a Face),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewInstance {
    pub iri: String,
    pub name: String,
    pub class: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Resolution {
    Known(String),
    New(NewInstance),
}

impl Resolution {
    pub fn iri(&self) -> &str {
        match self {
            Resolution::Known(iri) => iri,
            Resolution::New(n) => &n.iri,
        }
    }
}

/// Names match the first registry entry with the same name, ignoring case.
/// Faces match on person id. Anything unmatched becomes a new PERSON
/// instance; a face keeps the id its detector gave it, a name gets a fresh
/// one from `ids`.
pub fn resolve_identity(query: IdentityQuery, registry: &[RegistryEntry], ids: &mut IdMint) -> Resolution {
    match query {
        IdentityQuery::Name(name) => {
            let wanted = name.trim().to_lowercase();
            match registry.iter().find(|e| e.name.trim().to_lowercase() == wanted) {
                Some(e) => Resolution::Known(e.iri.clone()),
                None => Resolution::New(NewInstance {
                    iri: ids.next("person"),
                    name: name.to_string(),
                    class: PERSON_CLASS.to_string(),
                }),
            }
        }
        IdentityQuery::Face(face) => {
            let wanted = resolve_identifier(&face.instance.id);
            match registry.iter().find(|e| resolve_identifier(&e.iri) == wanted) {
                Some(e) => Resolution::Known(e.iri.clone()),
                None => Resolution::New(NewInstance {
                    iri: if face.instance.id.is_empty() {
                        ids.next("person")
                    } else {
                        face.instance.id.clone()
                    },
                    name: face.instance.name.clone(),
                    class: PERSON_CLASS.to_string(),
                }),
            }
        }
    }
}
