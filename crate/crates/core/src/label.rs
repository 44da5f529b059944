//! Vertex labels.
//!
//! Every complex in the crate names its vertices with a [`Label`].
//! Constructions (subdivisions, cylinders, total spaces) build compound labels
//! out of the labels they started from, so the provenance of a vertex stays
//! visible in reports. In JSON a label is its display string, and
//! [`Label::parse`] reads it back.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An opaque, totally ordered vertex identifier.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Int(i64),
    Name(String),
    Tuple(Vec<Label>),
}

impl Label {
    pub fn name(s: impl Into<String>) -> Self {
        Label::Name(s.into())
    }

    pub fn pair(a: Label, b: Label) -> Self {
        Label::Tuple(vec![a, b])
    }

    /// Tags a label with a small integer, used for the two ends of a cylinder and
    /// the two halves of a disjoint union.
    pub fn tagged(tag: i64, inner: Label) -> Self {
        Label::Tuple(vec![Label::Int(tag), inner])
    }

    /// Inverse of the display form: canonical integers become `Int`, a
    /// parenthesized list split at top-level commas becomes `Tuple`, and
    /// anything else is a name.
    pub fn parse(s: &str) -> Label {
        if let Ok(i) = s.parse::<i64>() {
            if i.to_string() == s {
                return Label::Int(i);
            }
        }
        if let Some(inner) = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
            if let Some(parts) = split_top_level(inner) {
                return Label::Tuple(parts.into_iter().map(Label::parse).collect());
            }
        }
        Label::Name(s.to_string())
    }
}

/// Split at commas outside parentheses; `None` if the parentheses do not
/// balance or a part is empty.
fn split_top_level(s: &str) -> Option<Vec<&str>> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0usize, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.checked_sub(1)?,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    (depth == 0 && parts.iter().all(|p| !p.is_empty())).then_some(parts)
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Int(i) => write!(f, "{i}"),
            Label::Name(s) => f.write_str(s),
            Label::Tuple(parts) => {
                f.write_str("(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label::Name(s.to_string())
    }
}

impl From<String> for Label {
    fn from(s: String) -> Self {
        Label::Name(s)
    }
}

impl From<i64> for Label {
    fn from(i: i64) -> Self {
        Label::Int(i)
    }
}

impl From<usize> for Label {
    fn from(i: usize) -> Self {
        Label::Int(i as i64)
    }
}

// Labels travel through JSON as their display string.
impl Serialize for Label {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer).map(|s| Label::parse(&s))
    }
}
