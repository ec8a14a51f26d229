//! Finite bounded lattices and the exhaustive lattice-law validator.
//!
//! A bounded *distributive* lattice is a commutative semiring with `+` = join
//! and `·` = meet; [`validate_lattice`] checks the lattice laws (including
//! distributivity) so such a lattice can be promoted to a semiring.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::verdict::Verdict;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteLattice {
    pub labels: Vec<String>,
    /// `join[i][j]` is the index of `labels[i] ∨ labels[j]`.
    pub join: Vec<Vec<usize>>,
    pub meet: Vec<Vec<usize>>,
    pub bottom: usize,
    pub top: usize,
}

impl FiniteLattice {
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    /// Chain lattice `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> FiniteLattice {
        assert!(n >= 2, "a bounded lattice needs distinct bottom and top");
        FiniteLattice {
            labels: (0..n).map(|i| i.to_string()).collect(),
            join: (0..n).map(|i| (0..n).map(|j| i.max(j)).collect()).collect(),
            meet: (0..n).map(|i| (0..n).map(|j| i.min(j)).collect()).collect(),
            bottom: 0,
            top: n - 1,
        }
    }

    /// Boolean algebra on `atoms` atoms; elements are subsets labeled by their
    /// bitstrings (least significant atom first), so `bool_algebra(2)` has
    /// elements `00 < {10, 01} < 11`.
    pub fn bool_algebra(atoms: u32) -> FiniteLattice {
        let n = 1usize << atoms;
        let label = |mask: usize| -> String {
            (0..atoms)
                .map(|k| if mask >> k & 1 == 1 { '1' } else { '0' })
                .collect()
        };
        FiniteLattice {
            labels: (0..n).map(label).collect(),
            join: (0..n).map(|i| (0..n).map(|j| i | j).collect()).collect(),
            meet: (0..n).map(|i| (0..n).map(|j| i & j).collect()).collect(),
            bottom: 0,
            top: n - 1,
        }
    }

    /// Divisor lattice of `n` under divisibility: join = lcm, meet = gcd.
    pub fn divisors(n: u64) -> FiniteLattice {
        let divs: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
        let idx = |v: u64| divs.iter().position(|&d| d == v).expect("closed under gcd/lcm");
        let gcd = |mut a: u64, mut b: u64| {
            while b != 0 {
                (a, b) = (b, a % b);
            }
            a
        };
        let table = |f: &dyn Fn(u64, u64) -> u64| -> Vec<Vec<usize>> {
            divs.iter()
                .map(|&a| divs.iter().map(|&b| idx(f(a, b))).collect())
                .collect()
        };
        FiniteLattice {
            labels: divs.iter().map(|d| d.to_string()).collect(),
            join: table(&|a, b| a / gcd(a, b) * b),
            meet: table(&gcd),
            bottom: 0,
            top: divs.len() - 1,
        }
    }

    /// The diamond M3: bottom, three pairwise-incomparable atoms, top. A
    /// lattice, but not distributive — the standard validator counterexample.
    pub fn m3() -> FiniteLattice {
        let labels = vec!["0", "a", "b", "c", "1"];
        let n = labels.len();
        let join = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match (i.min(j), i.max(j)) {
                        (i, j) if i == j => i,
                        (0, j) => j,
                        (_, 4) => 4,
                        _ => 4, // distinct atoms join to top
                    })
                    .collect()
            })
            .collect();
        let meet = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match (i.min(j), i.max(j)) {
                        (i, j) if i == j => i,
                        (0, _) => 0,
                        (i, 4) => i,
                        _ => 0, // distinct atoms meet at bottom
                    })
                    .collect()
            })
            .collect();
        FiniteLattice {
            labels: labels.into_iter().map(str::to_string).collect(),
            join,
            meet,
            bottom: 0,
            top: 4,
        }
    }

    pub fn well_formed(&self) -> bool {
        let n = self.size();
        n >= 2
            && self.bottom < n
            && self.top < n
            && [&self.join, &self.meet].iter().all(|t| {
                t.len() == n && t.iter().all(|row| row.len() == n && row.iter().all(|&v| v < n))
            })
    }
}

/// Exhaustively verifies the bounded distributive lattice laws; `Fails` names
/// the violated law and its witness elements.
pub fn validate_lattice(l: &FiniteLattice) -> crate::Result<Verdict> {
    if !l.well_formed() {
        return Err(crate::Error::MalformedTable(
            "lattice tables must be square, total, and in range".into(),
        ));
    }
    let n = l.size();
    let fail = |law: &str, witness: &[usize]| {
        Verdict::fails(json!({
            "law": law,
            "witness": witness.iter().map(|&i| l.labels[i].clone()).collect::<Vec<_>>(),
        }))
    };
    if l.bottom == l.top {
        return Ok(fail("nontriviality", &[l.bottom]));
    }
    for a in 0..n {
        if l.join[a][a] != a {
            return Ok(fail("join idempotence", &[a]));
        }
        if l.meet[a][a] != a {
            return Ok(fail("meet idempotence", &[a]));
        }
        if l.join[a][l.bottom] != a {
            return Ok(fail("bottom is join unit", &[a]));
        }
        if l.meet[a][l.top] != a {
            return Ok(fail("top is meet unit", &[a]));
        }
        for b in 0..n {
            if l.join[a][b] != l.join[b][a] {
                return Ok(fail("join commutativity", &[a, b]));
            }
            if l.meet[a][b] != l.meet[b][a] {
                return Ok(fail("meet commutativity", &[a, b]));
            }
            if l.meet[a][l.join[a][b]] != a {
                return Ok(fail("absorption (meet over join)", &[a, b]));
            }
            if l.join[a][l.meet[a][b]] != a {
                return Ok(fail("absorption (join over meet)", &[a, b]));
            }
            for c in 0..n {
                if l.join[l.join[a][b]][c] != l.join[a][l.join[b][c]] {
                    return Ok(fail("join associativity", &[a, b, c]));
                }
                if l.meet[l.meet[a][b]][c] != l.meet[a][l.meet[b][c]] {
                    return Ok(fail("meet associativity", &[a, b, c]));
                }
                if l.meet[a][l.join[b][c]] != l.join[l.meet[a][b]][l.meet[a][c]] {
                    return Ok(fail("distributivity", &[a, b, c]));
                }
            }
        }
    }
    Ok(Verdict::holds_exhaustive())
}
