//! Exact linear algebra over the rationals: fraction-free Gaussian
//! elimination for `A x = b`, returning either inconsistency or a particular
//! solution plus a nullspace basis.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Outcome of an exact linear solve.
#[derive(Debug, Clone, PartialEq)]
pub enum LinSolve {
    Inconsistent,
    Solved {
        /// One solution, with all free variables set to zero.
        particular: Vec<BigRational>,
        /// Basis of the homogeneous solution space; empty iff the solution is
        /// unique.
        nullspace: Vec<Vec<BigRational>>,
    },
}

/// Solves `A x = b` exactly. `a` is row-major with `ncols` columns; rows of
/// `a` and entries of `b` correspond.
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational], ncols: usize) -> LinSolve {
    assert_eq!(a.len(), b.len(), "row/rhs length mismatch");
    assert!(a.iter().all(|r| r.len() == ncols), "ragged matrix");

    // Clear denominators row by row so elimination stays in BigInt.
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(a.len());
    for (row, rhs) in a.iter().zip(b) {
        let mut lcm = BigInt::one();
        for v in row.iter().chain(std::iter::once(rhs)) {
            lcm = num_integer::lcm(lcm, v.denom().clone());
        }
        let scale = |v: &BigRational| v.numer() * (&lcm / v.denom());
        let mut r: Vec<BigInt> = row.iter().map(scale).collect();
        r.push(scale(rhs));
        rows.push(r);
    }

    // Fraction-free forward elimination with row pivoting.
    let nrows = rows.len();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(piv) = (rank..nrows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        for r in 0..nrows {
            if r == rank || rows[r][col].is_zero() {
                continue;
            }
            let p = rows[rank][col].clone();
            let f = rows[r][col].clone();
            for c in 0..=ncols {
                rows[r][c] = &rows[r][c] * &p - &rows[rank][c] * &f;
            }
            // keep magnitudes in check
            let mut g = BigInt::zero();
            for c in 0..=ncols {
                g = num_integer::gcd(g, rows[r][c].abs());
            }
            if g > BigInt::one() {
                for c in 0..=ncols {
                    rows[r][c] = &rows[r][c] / &g;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == nrows {
            break;
        }
    }

    for row in rows.iter().skip(rank) {
        if !row[ncols].is_zero() {
            return LinSolve::Inconsistent;
        }
    }

    let is_pivot = |c: usize| pivot_cols.contains(&c);
    let ratio = |n: &BigInt, d: &BigInt| BigRational::new(n.clone(), d.clone());

    let mut particular = vec![BigRational::zero(); ncols];
    for (i, &pc) in pivot_cols.iter().enumerate() {
        particular[pc] = ratio(&rows[i][ncols], &rows[i][pc]);
    }

    let mut nullspace = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot(c)) {
        let mut dir = vec![BigRational::zero(); ncols];
        dir[free] = BigRational::one();
        for (i, &pc) in pivot_cols.iter().enumerate() {
            dir[pc] = -ratio(&rows[i][free], &rows[i][pc]);
        }
        nullspace.push(dir);
    }

    LinSolve::Solved { particular, nullspace }
}

/// Outcome of a nonnegative feasibility search for `A x = b, x ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum NonnegSolve {
    Infeasible,
    Feasible(Vec<BigRational>),
    /// Too many unknowns for conclusive vertex enumeration.
    Unknown,
}

/// Max unknowns for which the zero-subset vertex enumeration is attempted.
const NONNEG_VERTEX_LIMIT: usize = 14;

/// Decides `∃ x ≥ 0 with A x = b` exactly for small systems.
///
/// A nonempty polyhedron inside the nonnegative orthant is pointed, hence has
/// a vertex, and every vertex is the unique solution of `A x = b` plus
/// `x_i = 0` on its zero set. Enumerating zero subsets and keeping
/// unique-solution systems with a nonnegative solution is therefore a
/// complete decision procedure; beyond [`NONNEG_VERTEX_LIMIT`] unknowns it
/// degrades to `Unknown`.
pub fn solve_nonneg(a: &[Vec<BigRational>], b: &[BigRational], ncols: usize) -> NonnegSolve {
    let nonneg = |x: &[BigRational]| x.iter().all(|v| !v.is_negative());
    match solve(a, b, ncols) {
        LinSolve::Inconsistent => return NonnegSolve::Infeasible,
        LinSolve::Solved { particular, nullspace } => {
            if nonneg(&particular) {
                return NonnegSolve::Feasible(particular);
            }
            if nullspace.is_empty() {
                return NonnegSolve::Infeasible;
            }
        }
    }
    if ncols > NONNEG_VERTEX_LIMIT {
        return NonnegSolve::Unknown;
    }
    // Subsets of coordinates pinned to zero, by increasing size.
    for mask in 1u32..(1 << ncols) {
        let mut rows = a.to_vec();
        let mut rhs = b.to_vec();
        for i in 0..ncols {
            if mask >> i & 1 == 1 {
                let mut pin = vec![BigRational::zero(); ncols];
                pin[i] = BigRational::one();
                rows.push(pin);
                rhs.push(BigRational::zero());
            }
        }
        if let LinSolve::Solved { particular, nullspace } = solve(&rows, &rhs, ncols) {
            if nullspace.is_empty() && nonneg(&particular) {
                return NonnegSolve::Feasible(particular);
            }
        }
    }
    NonnegSolve::Infeasible
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter().map(|r| r.iter().map(|&v| q(v, 1)).collect()).collect()
    }

    fn check_solution(a: &[Vec<BigRational>], b: &[BigRational], x: &[BigRational]) {
        for (row, rhs) in a.iter().zip(b) {
            let dot: BigRational = row.iter().zip(x).map(|(c, v)| c * v).sum();
            assert_eq!(&dot, rhs);
        }
    }

    #[test]
    fn unique_solution() {
        let a = mat(&[&[2, 1], &[1, -1]]);
        let b = vec![q(3, 1), q(0, 1)];
        let LinSolve::Solved { particular, nullspace } = solve(&a, &b, 2) else {
            panic!("expected a solution");
        };
        assert_eq!(particular, vec![q(1, 1), q(1, 1)]);
        assert!(nullspace.is_empty());
    }

    #[test]
    fn inconsistent_system() {
        let a = mat(&[&[1, 1], &[2, 2]]);
        let b = vec![q(1, 1), q(3, 1)];
        assert_eq!(solve(&a, &b, 2), LinSolve::Inconsistent);
    }

    #[test]
    fn underdetermined_nullspace() {
        let a = mat(&[&[1, 1, 1]]);
        let b = vec![q(1, 1)];
        let LinSolve::Solved { particular, nullspace } = solve(&a, &b, 3) else {
            panic!("expected a solution");
        };
        check_solution(&a, &b, &particular);
        assert_eq!(nullspace.len(), 2);
        let zero = vec![q(0, 1); 1];
        for dir in &nullspace {
            check_solution(&a, &zero, dir);
            assert!(dir.iter().any(|v| !v.is_zero()));
        }
    }

    #[test]
    fn fractional_coefficients() {
        let a = vec![vec![q(1, 2), q(1, 3)], vec![q(1, 4), q(-1, 6)]];
        let b = vec![q(5, 6), q(1, 12)];
        let LinSolve::Solved { particular, nullspace } = solve(&a, &b, 2) else {
            panic!("expected a solution");
        };
        check_solution(&a, &b, &particular);
        assert!(nullspace.is_empty());
    }

    #[test]
    fn zero_rows_are_harmless() {
        let a = mat(&[&[0, 0], &[1, 0]]);
        let b = vec![q(0, 1), q(2, 1)];
        let LinSolve::Solved { particular, nullspace } = solve(&a, &b, 2) else {
            panic!("expected a solution");
        };
        assert_eq!(particular[0], q(2, 1));
        assert_eq!(nullspace.len(), 1);
    }

    #[test]
    fn nonneg_feasibility() {
        // x + y = 1 has the nonneg solution set [0,1]
        let a = mat(&[&[1, 1]]);
        let b = vec![q(1, 1)];
        match solve_nonneg(&a, &b, 2) {
            NonnegSolve::Feasible(x) => {
                assert!(x.iter().all(|v| !v.is_negative()));
                assert_eq!(x[0].clone() + x[1].clone(), q(1, 1));
            }
            other => panic!("expected feasible, got {other:?}"),
        }

        // x + y = -1 with x, y ≥ 0 is infeasible
        let b = vec![q(-1, 1)];
        assert_eq!(solve_nonneg(&a, &b, 2), NonnegSolve::Infeasible);

        // x - y = 2, x + y = 1: unique solution (3/2, -1/2), not nonneg
        let a = mat(&[&[1, -1], &[1, 1]]);
        let b = vec![q(2, 1), q(1, 1)];
        assert_eq!(solve_nonneg(&a, &b, 2), NonnegSolve::Infeasible);

        // negative particular but a nonneg vertex exists:
        // x - y = -2 → (0, 2) works
        let a = mat(&[&[1, -1]]);
        let b = vec![q(-2, 1)];
        match solve_nonneg(&a, &b, 2) {
            NonnegSolve::Feasible(x) => {
                assert_eq!(x[0].clone() - x[1].clone(), q(-2, 1));
                assert!(x.iter().all(|v| !v.is_negative()));
            }
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn random_systems_satisfy_equations() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..50 {
            let nrows = rng.gen_range(1..=4);
            let ncols = rng.gen_range(1..=4);
            let a: Vec<Vec<BigRational>> = (0..nrows)
                .map(|_| (0..ncols).map(|_| q(rng.gen_range(-3..=3), rng.gen_range(1..=2))).collect())
                .collect();
            // Build b from a known solution so the system is consistent.
            let x0: Vec<BigRational> = (0..ncols).map(|_| q(rng.gen_range(-3..=3), 1)).collect();
            let b: Vec<BigRational> = a
                .iter()
                .map(|row| row.iter().zip(&x0).map(|(c, v)| c * v).sum())
                .collect();
            let LinSolve::Solved { particular, nullspace } = solve(&a, &b, ncols) else {
                panic!("consistent system reported inconsistent");
            };
            check_solution(&a, &b, &particular);
            let zero: Vec<BigRational> = vec![BigRational::zero(); nrows];
            for dir in &nullspace {
                check_solution(&a, &zero, dir);
            }
        }
    }
}
