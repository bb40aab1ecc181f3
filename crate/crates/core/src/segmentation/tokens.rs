use crate::ids::IdMint;
use crate::model::{Annotation, AnnotationValue, Extra, IndexSegment, Mention, Millis, Segment, Token};

/// A token with character offsets `[start, stop)` into the original text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenSpan {
    pub value: String,
    pub start: usize,
    pub stop: usize,
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || c == '\u{2019}'
}

/// Maximal runs of word characters (letters, digits, `_`, apostrophes);
/// every other non-space character is a token of its own. Offsets count
/// characters, not bytes.
pub fn tokenize(text: &str) -> Vec<TokenSpan> {
    let mut out: Vec<TokenSpan> = Vec::new();
    let mut in_word = false;
    for (i, c) in text.chars().enumerate() {
        if c.is_whitespace() {
            in_word = false;
        } else if is_word_char(c) {
            match out.last_mut() {
                Some(t) if in_word => {
                    t.value.push(c);
                    t.stop = i + 1;
                }
                _ => out.push(TokenSpan {
                    value: c.to_string(),
                    start: i,
                    stop: i + 1,
                }),
            }
            in_word = true;
        } else {
            out.push(TokenSpan {
                value: c.to_string(),
                start: i,
                stop: i + 1,
            });
            in_word = false;
        }
    }
    out
}

/// One token mention per token of a text signal's sequence.
pub fn token_mentions(signal_id: &str, text: &str, source: &str, timestamp: Millis, ids: &mut IdMint) -> Vec<Mention> {
    tokenize(text)
        .into_iter()
        .map(|t| {
            let mention_id = ids.next("mention");
            let token_id = ids.next("token");
            Mention {
                id: mention_id,
                segments: vec![Segment::Index(IndexSegment::new(
                    signal_id,
                    t.start as u64,
                    t.stop as u64,
                ))],
                annotations: vec![Annotation::new(
                    "token",
                    AnnotationValue::Token(Token::new(token_id, t.value)),
                    source,
                    timestamp,
                )],
                extra: Extra::new(),
            }
        })
        .collect()
}
