//! Randomized law checks: semiring axioms, ideal canonicalization, kernel
//! category laws, and the one-way implication from dilational to almost-sure
//! equality.

use std::sync::Arc;

use dilateq_core::dilation::{dilational_equal, SearchOpts};
use dilateq_core::semiring::ideal::{elem_mul, Ideal};
use dilateq_core::{FinSet, Kernel, Semiring, Value};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Exhaustive semiring axioms on every finite bundled instance. No sampling:
/// the carrier is small enough to check all triples.
#[test]
fn finite_semirings_satisfy_axioms_exhaustively() {
    for name in ["boolean", "chain-2", "chain-4", "bool-4", "bool-8", "divisors-12"] {
        let sr = Semiring::by_name(name).unwrap();
        let elems = sr.elements().expect("finite carrier");
        let (zero, one) = (sr.zero(), sr.one());
        for a in &elems {
            assert_eq!(sr.add(a, &zero).unwrap(), *a, "{name}: additive identity");
            assert_eq!(sr.mul(a, &one).unwrap(), *a, "{name}: multiplicative identity");
            assert_eq!(sr.mul(a, &zero).unwrap(), zero, "{name}: absorption");
            for b in &elems {
                assert_eq!(sr.add(a, b).unwrap(), sr.add(b, a).unwrap(), "{name}: +comm");
                assert_eq!(sr.mul(a, b).unwrap(), sr.mul(b, a).unwrap(), "{name}: ·comm");
                for c in &elems {
                    let ab_c = sr.add(&sr.add(a, b).unwrap(), c).unwrap();
                    let a_bc = sr.add(a, &sr.add(b, c).unwrap()).unwrap();
                    assert_eq!(ab_c, a_bc, "{name}: +assoc");
                    let mab_c = sr.mul(&sr.mul(a, b).unwrap(), c).unwrap();
                    let ma_bc = sr.mul(a, &sr.mul(b, c).unwrap()).unwrap();
                    assert_eq!(mab_c, ma_bc, "{name}: ·assoc");
                    let lhs = sr.mul(a, &sr.add(b, c).unwrap()).unwrap();
                    let rhs = sr.add(&sr.mul(a, b).unwrap(), &sr.mul(a, c).unwrap()).unwrap();
                    assert_eq!(lhs, rhs, "{name}: distributivity");
                }
            }
        }
    }
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-20i64..=20, 1i64..=12)
        .prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

proptest! {
    #[test]
    fn rational_semiring_axioms(a in rational(), b in rational(), c in rational()) {
        let sr = Semiring::rational();
        let v = |r: &BigRational| Value::Rational(r.clone());
        let add = |x: &Value, y: &Value| sr.add(x, y).unwrap();
        let mul = |x: &Value, y: &Value| sr.mul(x, y).unwrap();
        let (va, vb, vc) = (v(&a), v(&b), v(&c));
        prop_assert_eq!(add(&va, &vb), add(&vb, &va));
        prop_assert_eq!(mul(&va, &vb), mul(&vb, &va));
        prop_assert_eq!(add(&add(&va, &vb), &vc), add(&va, &add(&vb, &vc)));
        prop_assert_eq!(mul(&mul(&va, &vb), &vc), mul(&va, &mul(&vb, &vc)));
        prop_assert_eq!(
            mul(&va, &add(&vb, &vc)),
            add(&mul(&va, &vb), &mul(&va, &vc))
        );
        prop_assert_eq!(add(&va, &sr.zero()), va.clone());
        prop_assert_eq!(mul(&va, &sr.one()), va);
    }
}

fn gaussian() -> impl Strategy<Value = (i64, i64)> {
    (-6i64..=6, -6i64..=6)
}

fn generators() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec(gaussian(), 1..4)
}

proptest! {
    /// The canonical form of an ideal must not depend on how its generating
    /// set is presented: order, duplicates, and redundant combinations are
    /// all invisible.
    #[test]
    fn ideal_presentation_independence(gens in generators(), perm_seed in any::<u64>()) {
        let canonical = Ideal::from_generators(&gens);

        let mut shuffled = gens.clone();
        let n = shuffled.len();
        for i in (1..n).rev() {
            shuffled.swap(i, (perm_seed as usize).wrapping_mul(i + 7) % (i + 1));
        }
        prop_assert_eq!(Ideal::from_generators(&shuffled), canonical.clone());

        let mut duplicated = gens.clone();
        duplicated.push(gens[0]);
        prop_assert_eq!(Ideal::from_generators(&duplicated), canonical.clone());

        // an element of the ideal (a ring multiple of a generator) is
        // redundant as an extra generator
        let mut extended = gens.clone();
        extended.push(elem_mul(gens[0], (3, 1)));
        prop_assert_eq!(Ideal::from_generators(&extended), canonical);
    }

    /// Multiplication of principal ideals is principal on the product.
    #[test]
    fn principal_ideals_multiply(a in gaussian(), b in gaussian()) {
        let lhs = Ideal::principal(a).mul(&Ideal::principal(b));
        prop_assert_eq!(lhs, Ideal::principal(elem_mul(a, b)));
    }

    /// Quantale laws for ideal arithmetic.
    #[test]
    fn ideal_quantale_laws(x in generators(), y in generators(), z in generators()) {
        let (i, j, k) = (
            Ideal::from_generators(&x),
            Ideal::from_generators(&y),
            Ideal::from_generators(&z),
        );
        prop_assert_eq!(i.add(&j), j.add(&i));
        prop_assert_eq!(i.add(&i), i.clone());
        prop_assert_eq!(i.mul(&j), j.mul(&i));
        prop_assert_eq!(i.mul(&j).mul(&k), i.mul(&j.mul(&k)));
        prop_assert_eq!(i.mul(&j.add(&k)), i.mul(&j).add(&i.mul(&k)));
        prop_assert_eq!(i.add(&Ideal::zero()), i.clone());
        prop_assert_eq!(i.mul(&Ideal::unit()), i);
    }
}

fn bundled() -> impl Strategy<Value = Arc<Semiring>> {
    prop::sample::select(vec![
        "rational",
        "nonneg-rational",
        "boolean",
        "tropical",
        "chain-3",
        "bool-4",
        "ideal-z2i",
    ])
    .prop_map(|name| Arc::new(Semiring::by_name(name).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Category and monoidal laws on random kernels over every bundled
    /// semiring family.
    #[test]
    fn kernel_category_laws(sr in bundled(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = FinSet::new(&["a1", "a2"]);
        let b = FinSet::new(&["b1", "b2", "b3"]);
        let c = FinSet::new(&["c1", "c2"]);
        let d = FinSet::new(&["d1", "d2"]);
        let f = Kernel::random(&sr, a.clone(), b.clone(), &mut rng);
        let g = Kernel::random(&sr, b.clone(), c.clone(), &mut rng);
        let h = Kernel::random(&sr, c.clone(), d.clone(), &mut rng);

        let hg_f = Kernel::compose(&Kernel::compose(&h, &g).unwrap(), &f).unwrap();
        let h_gf = Kernel::compose(&h, &Kernel::compose(&g, &f).unwrap()).unwrap();
        prop_assert_eq!(hg_f, h_gf);

        let id_a = Kernel::identity(&sr, &a);
        let id_b = Kernel::identity(&sr, &b);
        prop_assert_eq!(Kernel::compose(&f, &id_a).unwrap(), f.clone());
        prop_assert_eq!(Kernel::compose(&id_b, &f).unwrap(), f.clone());

        // interchange: (g⊗h)∘(f⊗id) = (g∘f)⊗h
        let id_c = Kernel::identity(&sr, &c);
        let lhs = Kernel::compose(
            &g.tensor_with(&h).unwrap(),
            &f.tensor_with(&id_c).unwrap(),
        ).unwrap();
        let rhs = Kernel::compose(&g, &f).unwrap().tensor_with(&h).unwrap();
        prop_assert_eq!(lhs, rhs);

        // discard is natural: discard∘f = discard
        let disc_b = Kernel::discard(&sr, &b);
        prop_assert_eq!(
            Kernel::compose(&disc_b, &f).unwrap(),
            Kernel::discard(&sr, &a)
        );
    }

    /// Dilational equality refines almost-sure equality; it never holds when
    /// almost-sure equality fails.
    #[test]
    fn dilational_equality_implies_almost_sure(seed in any::<u64>(), off_support in any::<bool>()) {
        let sr: Arc<Semiring> = Arc::new(Semiring::nonneg_rational());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = FinSet::new(&["a"]);
        let x = FinSet::new(&["x1", "x2"]);
        let y = FinSet::new(&["y1", "y2"]);
        // a state with a null outcome, so off-support disagreement is possible
        let p = Kernel::from_rows(&sr, a.clone(), x.clone(), &[&["1"], &["0"]]).unwrap();
        let f = Kernel::random(&sr, x.clone(), y.clone(), &mut rng);
        let g = if off_support {
            // disagree only on the mass-zero column
            let mut entries = Vec::new();
            for col in 0..x.size() {
                for row in 0..y.size() {
                    entries.push(if col == 1 {
                        if row == 0 { sr.one() } else { sr.zero() }
                    } else {
                        f.get(row, col).clone()
                    });
                }
            }
            Kernel::new(sr.clone(), x.clone(), y.clone(), entries).unwrap()
        } else {
            Kernel::random(&sr, x.clone(), y.clone(), &mut rng)
        };

        let ase = Kernel::as_equal(&f, &g, &p).unwrap();
        let dileq = dilational_equal(&f, &g, &p, &SearchOpts::default()).unwrap();
        if dileq.holds() {
            prop_assert!(ase.holds(), "dilational equality without almost-sure equality");
        }
        if !ase.holds() {
            prop_assert!(!dileq.holds());
        }
        if off_support {
            // this construction always agrees almost surely
            prop_assert!(ase.holds());
        }
    }
}
