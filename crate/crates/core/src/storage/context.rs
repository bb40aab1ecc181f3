use serde_json::{Map, Value};

/// IRI every EMISSOR metadata file names as its `@context`. It is never
/// dereferenced; [`CONTEXT_DOCUMENT`] is the vendored copy.
pub const CONTEXT_IRI: &str = "http://emissor.org/jsonldcontext.jsonld";

pub const CONTEXT_DOCUMENT: &str = include_str!("jsonldcontext.jsonld");

#[derive(Debug, Clone, PartialEq)]
pub struct LdContext {
    pub base: String,
    pub vocab: String,
    /// Remaining term definitions, in document order.
    pub terms: Map<String, Value>,
}

impl LdContext {
    pub fn bundled() -> LdContext {
        LdContext::parse(CONTEXT_DOCUMENT).expect("vendored context is valid")
    }

    pub fn parse(text: &str) -> Result<LdContext, String> {
        let doc: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let mut ctx = doc
            .get("@context")
            .and_then(Value::as_object)
            .cloned()
            .ok_or("missing @context object")?;
        let mut take = |key: &str| match ctx.remove(key) {
            Some(Value::String(s)) => Ok(s),
            _ => Err(format!("missing {key}")),
        };
        let base = take("@base")?;
        let vocab = take("@vocab")?;
        Ok(LdContext {
            base,
            vocab,
            terms: ctx,
        })
    }

    /// Expands a term: keywords map to themselves, prefixed names through
    /// the term table, anything else into the vocabulary.
    pub fn expand_term(&self, term: &str) -> String {
        match self.terms.get(term) {
            Some(Value::String(s)) if s.starts_with('@') => s.clone(),
            Some(Value::String(s)) => self.expand_term(s),
            _ => match term.split_once(':') {
                Some((prefix, local)) if !local.starts_with("//") => match self.terms.get(prefix) {
                    Some(Value::String(ns)) => format!("{ns}{local}"),
                    _ => term.to_string(),
                },
                Some(_) => term.to_string(),
                None => format!("{}{term}", self.vocab),
            },
        }
    }

    /// True when the term's values are node references (`{"@type": "@id"}`).
    pub fn is_id_typed(&self, term: &str) -> bool {
        matches!(self.terms.get(term), Some(Value::Object(o)) if o.get("@type") == Some(&Value::String("@id".into())))
    }
}
