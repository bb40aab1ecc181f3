//! Perspective values a source attaches to its support for a claim.
//!
//! Four dimensions, at most one value each. Certainty and polarity live in the
//! factuality namespace, sentiment and emotion in their own namespaces, so
//! `POSITIVE` as a polarity and `POSITIVE` as a sentiment are distinct IRIs.

use std::collections::BTreeMap;
use std::fmt;

use crate::ns::{GRASPE, GRASPF, GRASPS};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{value:?} is not a valid {dimension} value")]
pub struct InvalidAttributionDimension {
    pub dimension: String,
    pub value: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dimension {
    Certainty,
    Polarity,
    Emotion,
    Sentiment,
}

impl Dimension {
    pub const ALL: [Dimension; 4] = [
        Dimension::Certainty,
        Dimension::Polarity,
        Dimension::Emotion,
        Dimension::Sentiment,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Dimension::Certainty => "certainty",
            Dimension::Polarity => "polarity",
            Dimension::Emotion => "emotion",
            Dimension::Sentiment => "sentiment",
        }
    }

    pub fn from_key(key: &str) -> Option<Dimension> {
        Dimension::ALL.into_iter().find(|d| d.key().eq_ignore_ascii_case(key))
    }

    fn namespace(self) -> &'static str {
        match self {
            Dimension::Certainty | Dimension::Polarity => GRASPF,
            Dimension::Emotion => GRASPE,
            Dimension::Sentiment => GRASPS,
        }
    }

    /// Class every value of this dimension is typed with.
    pub fn value_class(self) -> String {
        let local = match self {
            Dimension::Certainty => "CertaintyValue",
            Dimension::Polarity => "PolarityValue",
            Dimension::Emotion => "EmotionValue",
            Dimension::Sentiment => "SentimentValue",
        };
        format!("{}{local}", self.namespace())
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

macro_rules! value_enum {
    ($name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum $name { $($variant),+ }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self { $($name::$variant => $text),+ }
            }

            pub fn parse(s: &str) -> Option<$name> {
                match s { $($text => Some($name::$variant),)+ _ => None }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

// POSSIBLE and UNDERSPECIFIED extend the two certainty values seen in the
// carl-robot example data with the rest of the factuality scale.
value_enum!(Certainty {
    Certain => "CERTAIN",
    Probable => "PROBABLE",
    Possible => "POSSIBLE",
    Underspecified => "UNDERSPECIFIED",
});

value_enum!(Polarity {
    Positive => "POSITIVE",
    Negative => "NEGATIVE",
});

value_enum!(Sentiment {
    Positive => "POSITIVE",
    Negative => "NEGATIVE",
    Neutral => "NEUTRAL",
});

value_enum!(Emotion {
    Anger => "ANGER",
    Disgust => "DISGUST",
    Fear => "FEAR",
    Joy => "JOY",
    Sadness => "SADNESS",
    Surprise => "SURPRISE",
    Neutral => "NEUTRAL",
});

impl Certainty {
    /// Higher is more certain; used to break ties when ranking answers.
    pub fn rank(self) -> u8 {
        match self {
            Certainty::Certain => 3,
            Certainty::Probable => 2,
            Certainty::Possible => 1,
            Certainty::Underspecified => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AttributionValue {
    Certainty(Certainty),
    Polarity(Polarity),
    Emotion(Emotion),
    Sentiment(Sentiment),
}

impl AttributionValue {
    pub fn dimension(self) -> Dimension {
        match self {
            AttributionValue::Certainty(_) => Dimension::Certainty,
            AttributionValue::Polarity(_) => Dimension::Polarity,
            AttributionValue::Emotion(_) => Dimension::Emotion,
            AttributionValue::Sentiment(_) => Dimension::Sentiment,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AttributionValue::Certainty(v) => v.as_str(),
            AttributionValue::Polarity(v) => v.as_str(),
            AttributionValue::Emotion(v) => v.as_str(),
            AttributionValue::Sentiment(v) => v.as_str(),
        }
    }

    pub fn iri(self) -> String {
        format!("{}{}", self.dimension().namespace(), self.name())
    }

    /// Parses a value for a given dimension. Accepts the bare name, a CURIE
    /// or the full IRI, as long as the namespace matches the dimension.
    pub fn parse(dimension: Dimension, value: &str) -> Result<AttributionValue, InvalidAttributionDimension> {
        let err = || InvalidAttributionDimension {
            dimension: dimension.key().to_string(),
            value: value.to_string(),
        };
        let name = if let Some(rest) = value.strip_prefix(dimension.namespace()) {
            rest
        } else if let Some((prefix, rest)) = value.split_once(':') {
            match crate::ns::namespace(prefix) {
                Some(ns) if ns == dimension.namespace() => rest,
                _ => return Err(err()),
            }
        } else {
            value
        };
        let name = name.to_ascii_uppercase();
        let parsed = match dimension {
            Dimension::Certainty => Certainty::parse(&name).map(AttributionValue::Certainty),
            Dimension::Polarity => Polarity::parse(&name).map(AttributionValue::Polarity),
            Dimension::Emotion => Emotion::parse(&name).map(AttributionValue::Emotion),
            Dimension::Sentiment => Sentiment::parse(&name).map(AttributionValue::Sentiment),
        };
        parsed.ok_or_else(err)
    }

    /// Recognizes a value IRI regardless of dimension.
    pub fn from_iri(iri: &str) -> Option<AttributionValue> {
        Dimension::ALL.into_iter().find_map(|d| {
            iri.strip_prefix(d.namespace())
                .and_then(|_| AttributionValue::parse(d, iri).ok())
        })
    }
}

/// At most one value per dimension.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Perspective {
    pub certainty: Option<Certainty>,
    pub polarity: Option<Polarity>,
    pub emotion: Option<Emotion>,
    pub sentiment: Option<Sentiment>,
}

impl Perspective {
    pub fn certainty(mut self, c: Certainty) -> Self {
        self.certainty = Some(c);
        self
    }

    pub fn polarity(mut self, p: Polarity) -> Self {
        self.polarity = Some(p);
        self
    }

    pub fn emotion(mut self, e: Emotion) -> Self {
        self.emotion = Some(e);
        self
    }

    pub fn sentiment(mut self, s: Sentiment) -> Self {
        self.sentiment = Some(s);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.values().is_empty()
    }

    /// Values in dimension order: certainty, polarity, emotion, sentiment.
    pub fn values(&self) -> Vec<AttributionValue> {
        let mut out = Vec::new();
        out.extend(self.certainty.map(AttributionValue::Certainty));
        out.extend(self.polarity.map(AttributionValue::Polarity));
        out.extend(self.emotion.map(AttributionValue::Emotion));
        out.extend(self.sentiment.map(AttributionValue::Sentiment));
        out
    }

    /// Builds a perspective from individual values; a repeated dimension is
    /// rejected.
    pub fn from_values(values: &[AttributionValue]) -> Result<Perspective, InvalidAttributionDimension> {
        let mut p = Perspective::default();
        for v in values {
            let taken = match *v {
                AttributionValue::Certainty(c) => p.certainty.replace(c).is_some(),
                AttributionValue::Polarity(x) => p.polarity.replace(x).is_some(),
                AttributionValue::Emotion(e) => p.emotion.replace(e).is_some(),
                AttributionValue::Sentiment(s) => p.sentiment.replace(s).is_some(),
            };
            if taken {
                return Err(InvalidAttributionDimension {
                    dimension: v.dimension().key().to_string(),
                    value: format!("second value {}", v.name()),
                });
            }
        }
        Ok(p)
    }

    pub fn from_raw(raw: &BTreeMap<String, String>) -> Result<Perspective, InvalidAttributionDimension> {
        let mut values = Vec::new();
        for (key, value) in raw {
            let dimension = Dimension::from_key(key).ok_or_else(|| InvalidAttributionDimension {
                dimension: key.clone(),
                value: value.clone(),
            })?;
            values.push(AttributionValue::parse(dimension, value)?);
        }
        Perspective::from_values(&values)
    }

    pub fn to_raw(&self) -> BTreeMap<String, String> {
        self.values()
            .into_iter()
            .map(|v| (v.dimension().key().to_string(), v.name().to_string()))
            .collect()
    }

    /// `CERTAIN-POSITIVE-NEUTRAL-NEUTRAL` style suffix for attribution ids.
    pub fn suffix(&self) -> String {
        self.values().iter().map(|v| v.name()).collect::<Vec<_>>().join("-")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suffix_follows_dimension_order() {
        let p = Perspective::default()
            .sentiment(Sentiment::Neutral)
            .emotion(Emotion::Neutral)
            .polarity(Polarity::Positive)
            .certainty(Certainty::Certain);
        assert_eq!(p.suffix(), "CERTAIN-POSITIVE-NEUTRAL-NEUTRAL");
        assert_eq!(
            Perspective::default().certainty(Certainty::Probable).suffix(),
            "PROBABLE"
        );
    }

    #[test]
    fn parse_accepts_names_curies_and_iris() {
        let c = AttributionValue::Certainty(Certainty::Certain);
        assert_eq!(AttributionValue::parse(Dimension::Certainty, "CERTAIN"), Ok(c));
        assert_eq!(AttributionValue::parse(Dimension::Certainty, "graspf:CERTAIN"), Ok(c));
        assert_eq!(AttributionValue::parse(Dimension::Certainty, &c.iri()), Ok(c));
        assert_eq!(AttributionValue::from_iri(&c.iri()), Some(c));
    }

    #[test]
    fn wrong_dimension_is_rejected() {
        assert!(AttributionValue::parse(Dimension::Certainty, "POSITIVE").is_err());
        assert!(AttributionValue::parse(Dimension::Polarity, "grasps:POSITIVE").is_err());
        assert!(AttributionValue::parse(Dimension::Emotion, "MAYBE").is_err());
        let raw = BTreeMap::from([("mood".to_string(), "HAPPY".to_string())]);
        assert!(Perspective::from_raw(&raw).is_err());
    }

    #[test]
    fn one_value_per_dimension() {
        let values = [
            AttributionValue::Certainty(Certainty::Certain),
            AttributionValue::Certainty(Certainty::Probable),
        ];
        assert!(Perspective::from_values(&values).is_err());
    }

    #[test]
    fn polarity_and_sentiment_are_distinct_iris() {
        let a = AttributionValue::Polarity(Polarity::Positive).iri();
        let b = AttributionValue::Sentiment(Sentiment::Positive).iri();
        assert_ne!(a, b);
        assert_eq!(
            AttributionValue::from_iri(&b),
            Some(AttributionValue::Sentiment(Sentiment::Positive))
        );
    }
}
