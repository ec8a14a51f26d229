//! Three-valued check outcomes with certificates and witnesses.

use serde::{Deserialize, Serialize};
use serde_json::Value as Json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    Holds,
    Fails,
    UnknownUpTo,
}

/// Why a `Holds` (or how far an `UnknownUpTo`) is to be believed.
///
/// - `Exhaustive`: every instance in the (finite) quantification range was
///   checked.
/// - `Theory(tag)`: a proposition certified for this structure was applied;
///   the tag names it (e.g. `zerosumfree-by-construction`).
/// - `Bound(n)`: a search up to size/sample bound `n` was performed.
/// - `Vacuous`: the antecedent of the checked implication never held, so the
///   implication holds trivially. Reported distinctly so audit statistics are
///   not inflated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Exhaustive,
    Theory(String),
    Bound(u64),
    Vacuous,
}

impl Certificate {
    pub fn as_string(&self) -> String {
        match self {
            Certificate::Exhaustive => "exhaustive".to_string(),
            Certificate::Theory(tag) => format!("theory:{tag}"),
            Certificate::Bound(n) => format!("bound:{n}"),
            Certificate::Vacuous => "vacuous".to_string(),
        }
    }
}

/// Outcome of an axiom or property check.
///
/// `Fails` always carries a finitely checkable witness; `Holds` carries an
/// exhaustiveness note or a theory certificate naming the proposition used.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub certificate: Certificate,
    /// Witness data for `Fails` (structured, JSON-serializable); `None` otherwise.
    pub witness: Option<Json>,
    /// Human-readable trace of what was checked.
    pub trace: Vec<String>,
}

impl Verdict {
    pub fn holds_exhaustive() -> Self {
        Verdict {
            status: VerdictStatus::Holds,
            certificate: Certificate::Exhaustive,
            witness: None,
            trace: Vec::new(),
        }
    }

    pub fn holds_theory(tag: &str) -> Self {
        Verdict {
            status: VerdictStatus::Holds,
            certificate: Certificate::Theory(tag.to_string()),
            witness: None,
            trace: Vec::new(),
        }
    }

    pub fn holds_bounded(bound: u64) -> Self {
        Verdict {
            status: VerdictStatus::Holds,
            certificate: Certificate::Bound(bound),
            witness: None,
            trace: Vec::new(),
        }
    }

    pub fn holds_vacuous() -> Self {
        Verdict {
            status: VerdictStatus::Holds,
            certificate: Certificate::Vacuous,
            witness: None,
            trace: Vec::new(),
        }
    }

    pub fn fails(witness: Json) -> Self {
        Verdict {
            status: VerdictStatus::Fails,
            certificate: Certificate::Exhaustive,
            witness: Some(witness),
            trace: Vec::new(),
        }
    }

    pub fn unknown_up_to(bound: u64) -> Self {
        Verdict {
            status: VerdictStatus::UnknownUpTo,
            certificate: Certificate::Bound(bound),
            witness: None,
            trace: Vec::new(),
        }
    }

    pub fn with_trace(mut self, line: impl Into<String>) -> Self {
        self.trace.push(line.into());
        self
    }

    pub fn holds(&self) -> bool {
        self.status == VerdictStatus::Holds
    }

    pub fn failed(&self) -> bool {
        self.status == VerdictStatus::Fails
    }

    /// Stable JSON form: `{"status", "witness", "certificate", "trace"}` with
    /// sorted keys (serde_json maps are ordered).
    pub fn to_json(&self) -> Json {
        let mut map = serde_json::Map::new();
        map.insert(
            "certificate".to_string(),
            Json::String(self.certificate.as_string()),
        );
        map.insert(
            "status".to_string(),
            serde_json::to_value(self.status).unwrap(),
        );
        map.insert(
            "trace".to_string(),
            Json::Array(self.trace.iter().cloned().map(Json::String).collect()),
        );
        map.insert(
            "witness".to_string(),
            self.witness.clone().unwrap_or(Json::Null),
        );
        Json::Object(map)
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.status {
            VerdictStatus::Holds => write!(f, "HOLDS ({})", self.certificate.as_string()),
            VerdictStatus::Fails => {
                write!(f, "FAILS")?;
                if let Some(w) = &self.witness {
                    write!(f, " witness={w}")?;
                }
                Ok(())
            }
            VerdictStatus::UnknownUpTo => {
                write!(f, "UNKNOWN ({})", self.certificate.as_string())
            }
        }
    }
}
