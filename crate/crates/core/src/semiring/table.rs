//! Finite semirings given by explicit operation tables.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value as Json};

use crate::error::Error;
use crate::verdict::Verdict;
use crate::Result;

/// A finite semiring presented by row-major label tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteTable {
    pub labels: Vec<String>,
    /// `add[i][j]` is the index of `labels[i] + labels[j]`.
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
    pub zero: usize,
    pub one: usize,
}

impl FiniteTable {
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    /// Reads the JSON file format
    /// `{"elements": [...], "add": [[...]], "mul": [[...]], "zero": l, "one": l}`
    /// with table entries given as element labels.
    pub fn from_json(v: &Json) -> Result<FiniteTable> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::MalformedTable("expected a JSON object".into()))?;
        let labels: Vec<String> = obj
            .get("elements")
            .and_then(|e| e.as_array())
            .ok_or_else(|| Error::MalformedTable("missing \"elements\" array".into()))?
            .iter()
            .map(|l| {
                l.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| Error::MalformedTable("element labels must be strings".into()))
            })
            .collect::<Result<_>>()?;
        if labels.is_empty() {
            return Err(Error::MalformedTable("empty element list".into()));
        }
        {
            let mut sorted = labels.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != labels.len() {
                return Err(Error::MalformedTable("duplicate element labels".into()));
            }
        }
        let index = |label: &str| -> Result<usize> {
            labels
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| Error::MalformedTable(format!("unknown element label {label:?}")))
        };
        let read_table = |key: &str| -> Result<Vec<Vec<usize>>> {
            let rows = obj
                .get(key)
                .and_then(|t| t.as_array())
                .ok_or_else(|| Error::MalformedTable(format!("missing {key:?} table")))?;
            if rows.len() != labels.len() {
                return Err(Error::MalformedTable(format!(
                    "{key:?} table has {} rows for {} elements",
                    rows.len(),
                    labels.len()
                )));
            }
            rows.iter()
                .map(|row| {
                    let row = row
                        .as_array()
                        .filter(|r| r.len() == labels.len())
                        .ok_or_else(|| {
                            Error::MalformedTable(format!("{key:?} table is not square"))
                        })?;
                    row.iter()
                        .map(|cell| {
                            cell.as_str()
                                .ok_or_else(|| {
                                    Error::MalformedTable(format!(
                                        "{key:?} table entries must be labels"
                                    ))
                                })
                                .and_then(index)
                        })
                        .collect()
                })
                .collect()
        };
        let add = read_table("add")?;
        let mul = read_table("mul")?;
        let unit = |key: &str| -> Result<usize> {
            obj.get(key)
                .and_then(|l| l.as_str())
                .ok_or_else(|| Error::MalformedTable(format!("missing {key:?} label")))
                .and_then(index)
        };
        let zero = unit("zero")?;
        let one = unit("one")?;
        Ok(FiniteTable { labels, add, mul, zero, one })
    }

    pub fn to_json(&self) -> Json {
        let table = |t: &[Vec<usize>]| -> Json {
            Json::Array(
                t.iter()
                    .map(|row| {
                        Json::Array(
                            row.iter()
                                .map(|&i| Json::String(self.labels[i].clone()))
                                .collect(),
                        )
                    })
                    .collect(),
            )
        };
        json!({
            "elements": self.labels,
            "add": table(&self.add),
            "mul": table(&self.mul),
            "zero": self.labels[self.zero],
            "one": self.labels[self.one],
        })
    }

    /// Exhaustively verifies the commutative-semiring axioms.
    pub fn validate(&self) -> Verdict {
        check_semiring_axioms(
            &self.labels,
            &self.add,
            &self.mul,
            self.zero,
            self.one,
        )
    }
}

/// Exhaustive commutative-semiring axiom check over explicit tables.
///
/// `Fails` names the violated law and carries the witness labels.
pub(crate) fn check_semiring_axioms(
    labels: &[String],
    add: &[Vec<usize>],
    mul: &[Vec<usize>],
    zero: usize,
    one: usize,
) -> Verdict {
    let n = labels.len();
    let fail = |law: &str, witness: &[usize]| {
        Verdict::fails(json!({
            "law": law,
            "witness": witness.iter().map(|&i| labels[i].clone()).collect::<Vec<_>>(),
        }))
    };
    if zero == one {
        return fail("nontriviality", &[zero]);
    }
    for a in 0..n {
        if add[a][zero] != a {
            return fail("additive unit", &[a]);
        }
        if mul[a][one] != a {
            return fail("multiplicative unit", &[a]);
        }
        if mul[a][zero] != zero {
            return fail("annihilation", &[a]);
        }
        for b in 0..n {
            if add[a][b] != add[b][a] {
                return fail("additive commutativity", &[a, b]);
            }
            if mul[a][b] != mul[b][a] {
                return fail("multiplicative commutativity", &[a, b]);
            }
            for c in 0..n {
                if add[add[a][b]][c] != add[a][add[b][c]] {
                    return fail("additive associativity", &[a, b, c]);
                }
                if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                    return fail("multiplicative associativity", &[a, b, c]);
                }
                if mul[a][add[b][c]] != add[mul[a][b]][mul[a][c]] {
                    return fail("distributivity", &[a, b, c]);
                }
            }
        }
    }
    Verdict::holds_exhaustive()
}
