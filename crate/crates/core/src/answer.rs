use serde::Serialize;

use crate::products::Decision;

/// The fixed answer vocabulary of every query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Answer {
    True,
    False,
    Equal,
    Unknown,
    Inconclusive,
    NotApplicable,
}

impl From<bool> for Answer {
    fn from(b: bool) -> Self {
        if b {
            Answer::True
        } else {
            Answer::False
        }
    }
}

impl From<&Decision> for Answer {
    fn from(d: &Decision) -> Self {
        match d {
            Ok(b) => Answer::from(*b),
            Err(_) => Answer::Inconclusive,
        }
    }
}

impl std::fmt::Display for Answer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Answer::True => "true",
            Answer::False => "false",
            Answer::Equal => "equal",
            Answer::Unknown => "unknown",
            Answer::Inconclusive => "inconclusive",
            Answer::NotApplicable => "not-applicable",
        };
        f.write_str(s)
    }
}
