//! Ideals of `Z[2i]`, the subring of the Gaussian integers with even
//! imaginary part, in Hermite normal form.
//!
//! An element is written in coordinates `(a, b)` denoting `a + 2i*b`.
//! Multiplication by `2i` acts on coordinates as `T(a, b) = (-4b, a)`, so a
//! subgroup of `Z^2` is an ideal iff it is closed under `T`. The canonical
//! form is the row Hermite normal form `[[p, q], [0, r]]` with `p > 0`,
//! `r > 0`, `0 <= q < r`; the zero ideal is the empty basis. Equality of
//! canonical bases is equality of ideals.

use serde::{Deserialize, Serialize};

/// Multiplication by `2i` in `(a, b)` coordinates.
fn t(row: (i128, i128)) -> (i128, i128) {
    (-4 * row.1, row.0)
}

/// Product of two ring elements in `(a, b)` coordinates:
/// `(a1 + 2i b1)(a2 + 2i b2) = (a1 a2 - 4 b1 b2) + 2i (a1 b2 + a2 b1)`.
pub fn elem_mul(x: (i64, i64), y: (i64, i64)) -> (i64, i64) {
    let (a1, b1) = (x.0 as i128, x.1 as i128);
    let (a2, b2) = (y.0 as i128, y.1 as i128);
    let re = a1 * a2 - 4 * b1 * b2;
    let im = a1 * b2 + a2 * b1;
    (narrow(re), narrow(im))
}

fn narrow(v: i128) -> i64 {
    i64::try_from(v).expect("ideal coordinate overflow")
}

/// Row HNF of a set of integer row vectors in `Z^2`.
///
/// Returns zero, one, or two rows `[(p, q)]`/`[(p, q), (0, r)]` with `p > 0`
/// (or `p = 0` for the rank-1 case on the second coordinate), `r > 0`,
/// `0 <= q < r`.
fn hnf(mut rows: Vec<(i128, i128)>) -> Vec<(i128, i128)> {
    rows.retain(|&(a, b)| a != 0 || b != 0);
    if rows.is_empty() {
        return rows;
    }
    // Euclidean reduction on the first coordinate.
    loop {
        let nonzero: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].0 != 0).collect();
        if nonzero.len() <= 1 {
            break;
        }
        let &piv = nonzero
            .iter()
            .min_by_key(|&&i| rows[i].0.abs())
            .expect("nonempty");
        let (pa, pb) = rows[piv];
        for &i in &nonzero {
            if i == piv {
                continue;
            }
            let k = rows[i].0.div_euclid(pa);
            rows[i].0 -= k * pa;
            rows[i].1 -= k * pb;
        }
        rows.retain(|&(a, b)| a != 0 || b != 0);
    }
    let mut pivot = rows.iter().copied().find(|&(a, _)| a != 0);
    if let Some((a, b)) = pivot {
        if a < 0 {
            pivot = Some((-a, -b));
        }
    }
    // gcd of the remaining second coordinates
    let mut r: i128 = 0;
    for &(a, b) in &rows {
        if a == 0 {
            r = gcd(r, b.abs());
        }
    }
    match (pivot, r) {
        (None, 0) => vec![],
        (None, r) => vec![(0, r)],
        (Some(p), 0) => vec![p],
        (Some((p, mut q)), r) => {
            q = q.rem_euclid(r);
            vec![(p, q), (0, r)]
        }
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// A canonical (Hermite-normal-form) ideal of `Z[2i]`.
///
/// The zero ideal is the empty basis; every nonzero ideal has full rank (a
/// nonzero generator and its `T`-image are independent), so `basis` is either
/// empty or holds exactly the two HNF rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Ideal {
    /// HNF rows `[(p, q), (0, r)]` in `(a, b)` coordinates, or empty for zero.
    pub basis: Vec<(i64, i64)>,
}

impl Ideal {
    pub fn zero() -> Self {
        Ideal { basis: vec![] }
    }

    /// The full ring `Z[2i]`, the multiplicative unit of the ideal semiring.
    pub fn unit() -> Self {
        Ideal::from_generators(&[(1, 0), (0, 1)])
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Smallest ideal containing the generators: closes the generated
    /// subgroup under multiplication by `2i`, then takes HNF. Closure is
    /// iterated to a fixed point.
    pub fn from_generators(generators: &[(i64, i64)]) -> Self {
        let mut rows: Vec<(i128, i128)> = generators
            .iter()
            .map(|&(a, b)| (a as i128, b as i128))
            .collect();
        let mut basis = hnf(rows.clone());
        loop {
            rows = basis.clone();
            rows.extend(basis.iter().map(|&row| t(row)));
            let next = hnf(rows);
            if next == basis {
                break;
            }
            basis = next;
        }
        Ideal {
            basis: basis.iter().map(|&(a, b)| (narrow(a), narrow(b))).collect(),
        }
    }

    /// Principal ideal generated by a single element.
    pub fn principal(g: (i64, i64)) -> Self {
        Ideal::from_generators(&[g])
    }

    /// Ideal sum: subgroup generated by both bases.
    pub fn add(&self, other: &Ideal) -> Ideal {
        let mut gens = self.basis.clone();
        gens.extend(other.basis.iter().copied());
        Ideal::from_generators(&gens)
    }

    /// Ideal product: subgroup generated by pairwise products of basis
    /// elements, re-closed and canonicalized.
    pub fn mul(&self, other: &Ideal) -> Ideal {
        let mut gens = Vec::new();
        for &x in &self.basis {
            for &y in &other.basis {
                gens.push(elem_mul(x, y));
            }
        }
        Ideal::from_generators(&gens)
    }

    /// Membership test against the canonical basis.
    pub fn contains(&self, elem: (i64, i64)) -> bool {
        let (a, b) = (elem.0 as i128, elem.1 as i128);
        match self.basis.as_slice() {
            [] => a == 0 && b == 0,
            [(p, q), (_, r)] => {
                let (p, q, r) = (*p as i128, *q as i128, *r as i128);
                a % p == 0 && (b - (a / p) * q) % r == 0
            }
            _ => unreachable!("canonical basis has 0 or 2 rows"),
        }
    }

    /// Renders in split form `(m,ki)` (meaning `mZ + kiZ`) when the HNF basis
    /// is diagonal, otherwise as the explicit basis `[[p,q],[0,r]]`; the zero
    /// ideal renders as `0`.
    pub fn render(&self) -> String {
        match self.basis.as_slice() {
            [] => "0".to_string(),
            [(p, 0), (0, r)] => format!("({},{}i)", p, 2 * r),
            [(p, q), (0, r)] => format!("[[{p},{q}],[0,{r}]]"),
            _ => unreachable!("canonical basis has 0 or 2 rows"),
        }
    }

    /// Parses the notation produced by [`Ideal::render`].
    pub fn parse(s: &str) -> Option<Ideal> {
        let s = s.trim();
        if s == "0" {
            return Some(Ideal::zero());
        }
        if let Some(body) = s.strip_prefix("(").and_then(|s| s.strip_suffix("i)")) {
            let (m, k) = body.split_once(',')?;
            let m: i64 = m.trim().parse().ok()?;
            let k: i64 = k.trim().parse().ok()?;
            if k % 2 != 0 {
                return None; // ki with odd k is not in Z[2i]
            }
            return Some(Ideal::from_generators(&[(m, 0), (0, k / 2)]));
        }
        // explicit basis [[p,q],[0,r]]
        let nums: Vec<i64> = s
            .split(|c: char| !c.is_ascii_digit() && c != '-')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse().ok())
            .collect::<Option<Vec<_>>>()?;
        match nums.as_slice() {
            [p, q, z, r] if *z == 0 => Some(Ideal::from_generators(&[(*p, *q), (0, *r)])),
            _ => None,
        }
    }
}
