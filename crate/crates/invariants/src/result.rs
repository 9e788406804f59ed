use std::fmt;

use fincat_core::RawPiece;
use serde_json::{json, Value as Json};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Weak,
    Strong,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Weak => "weak",
            Mode::Strong => "strong",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SectionMode {
    Strict,
    Weak,
    Strong,
}

impl SectionMode {
    pub fn name(self) -> &'static str {
        match self {
            SectionMode::Strict => "strict",
            SectionMode::Weak => "weak",
            SectionMode::Strong => "strong",
        }
    }
}

impl From<Mode> for SectionMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Weak => SectionMode::Weak,
            Mode::Strong => SectionMode::Strong,
        }
    }
}

/// Value of a counting invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Value {
    Exact(usize),
    /// Proven: no family of qualifying pieces covers the category.
    Infinite,
    /// Search ran out of budget between these bounds.
    Unknown { lower: usize, upper: Option<usize> },
}

impl Value {
    pub fn exact(self) -> Option<usize> {
        match self {
            Value::Exact(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_known(self) -> bool {
        !matches!(self, Value::Unknown { .. })
    }

    /// `self <= other` when both sides are known.
    pub fn le(self, other: Value) -> Option<bool> {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => Some(a <= b),
            (Value::Exact(_), Value::Infinite) | (Value::Infinite, Value::Infinite) => Some(true),
            (Value::Infinite, Value::Exact(_)) => Some(false),
            _ => None,
        }
    }

    pub fn to_json(self) -> Json {
        match self {
            Value::Exact(n) => json!(n),
            Value::Infinite => json!("inf"),
            Value::Unknown { .. } => Json::Null,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(n) => write!(f, "{n}"),
            Value::Infinite => write!(f, "inf"),
            Value::Unknown { lower, upper: Some(u) } => write!(f, "unknown in [{lower}, {u}]"),
            Value::Unknown { lower, upper: None } => write!(f, "unknown, >= {lower}"),
        }
    }
}

/// A computed invariant with its cover certificate.
#[derive(Debug, Clone)]
pub struct InvariantResult {
    pub invariant: String,
    pub mode: String,
    pub value: Value,
    pub pieces: Vec<RawPiece>,
    pub witnesses: Vec<Json>,
    /// Set when the search stopped on a budget.
    pub budget: Option<String>,
    /// Per-component results of a disconnected input.
    pub components: Vec<InvariantResult>,
}

impl InvariantResult {
    pub fn certificate(&self) -> Option<Json> {
        self.value.exact().map(|n| {
            json!({
                "n": n,
                "pieces": self.pieces,
                "witnesses": self.witnesses,
            })
        })
    }

    pub fn to_json(&self) -> Json {
        let mut out = json!({
            "invariant": self.invariant,
            "mode": self.mode,
            "value": self.value.to_json(),
            "certificate": self.certificate(),
            "budget_exhausted": self.budget.is_some(),
        });
        if let Value::Unknown { lower, upper } = self.value {
            out["bounds"] = json!({ "lower": lower, "upper": upper });
            out["reason"] = json!(self.budget);
        }
        if !self.components.is_empty() {
            out["components"] = self.components.iter().map(|c| c.to_json()).collect();
        }
        out
    }
}
