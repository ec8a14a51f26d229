//! Instance-level axiom checkers: positivity, parametrized equality
//! strengthening, relative positivity, and a batch audit that cross-checks
//! the equivalent formulations against one another.
//!
//! The formulations are deliberately independent code paths — positivity
//! scans the defining equation directly, deterministic-marginal-independence
//! and deterministic-in-a-factor live in [`crate::dilation`] — so that the
//! audits actually exercise the equivalence theorems instead of testing a
//! function against itself.

use std::sync::Arc;

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};

use crate::dilation::{
    check_dmi_instance, dilational_equal, is_deterministic_in, random_dilation, Dilation,
    SearchOpts,
};
use crate::error::Error;
use crate::kernel::{DetFunction, FinSet, Kernel};
use crate::semiring::{Semiring, Strategy, Value};
use crate::verdict::Verdict;
use crate::Result;

/// A checker outcome together with the independently computed formulations it
/// was compared against. Disagreement between formulations is an
/// internal-consistency failure and overrides the verdict; it is never
/// masked.
#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub axiom: String,
    pub verdict: Verdict,
    pub cross_checks: Vec<(String, Verdict)>,
}

impl AxiomReport {
    pub fn to_json(&self) -> Json {
        let mut v = self.verdict.to_json();
        let obj = v.as_object_mut().expect("verdict serializes to an object");
        obj.insert("axiom".into(), json!(self.axiom));
        obj.insert(
            "cross_checks".into(),
            json!(self
                .cross_checks
                .iter()
                .map(|(name, verdict)| json!({
                    "formulation": name,
                    "verdict": verdict.to_json(),
                }))
                .collect::<Vec<_>>()),
        );
        v
    }

    fn inconsistent(axiom: &str, detail: Json, cross_checks: Vec<(String, Verdict)>) -> Self {
        AxiomReport {
            axiom: axiom.to_string(),
            verdict: Verdict::fails(json!({
                "internal_inconsistency": detail,
            }))
            .with_trace("equivalent formulations disagreed; this is a checker bug, not a property of the instance"),
            cross_checks,
        }
    }
}

/// Positivity for one composable pair: if `g∘f` is deterministic then
/// `g(y|x)·f(x|a) = (g∘f)(y|a)·f(x|a)` for all `a, x, y`. A non-deterministic
/// composite makes the instance vacuous.
///
/// The primary witness prefers violations where the composite assigns zero
/// mass but the joint does not, and among those a negative leak when the
/// ordering exists — no stochastic refinement can produce either.
pub fn check_positivity_instance(f: &Kernel, g: &Kernel) -> Result<AxiomReport> {
    let axiom = "positivity";
    let gf = Kernel::compose(g, f)?;
    if !gf.is_deterministic().holds() {
        return Ok(AxiomReport {
            axiom: axiom.into(),
            verdict: Verdict::holds_vacuous()
                .with_trace("g∘f is not deterministic; the positivity antecedent fails"),
            cross_checks: Vec::new(),
        });
    }
    let sr = &f.semiring;
    let mut violations: Vec<(usize, usize, usize, Value, Value)> = Vec::new();
    for a in 0..f.dom.size() {
        for x in 0..f.cod.size() {
            for y in 0..g.cod.size() {
                let lhs = sr.mul(g.get(y, x), f.get(x, a))?;
                let rhs = sr.mul(gf.get(y, a), f.get(x, a))?;
                if lhs != rhs {
                    violations.push((a, x, y, lhs, rhs));
                }
            }
        }
    }
    let entry = |&(a, x, y, ref lhs, ref rhs): &(usize, usize, usize, Value, Value)| {
        json!({
            "a": f.dom.label(a),
            "x": f.cod.label(x),
            "y": g.cod.label(y),
            "lhs": sr.render(lhs),
            "rhs": sr.render(rhs),
        })
    };
    let verdict = if violations.is_empty() {
        Verdict::holds_exhaustive()
    } else {
        let impossible: Vec<&(usize, usize, usize, Value, Value)> = violations
            .iter()
            .filter(|(_, _, _, lhs, rhs)| sr.is_zero(rhs) && !sr.is_zero(lhs))
            .collect();
        let negative = impossible.iter().find(|(_, _, _, lhs, _)| {
            lhs.as_rational().map(|r| r.is_negative()).unwrap_or(false)
        });
        let primary = negative
            .copied()
            .or_else(|| impossible.first().copied())
            .unwrap_or(&violations[0]);
        Verdict::fails(json!({
            "at": entry(primary),
            "violations": violations.iter().map(entry).collect::<Vec<_>>(),
        }))
    };

    // Independent formulation: the swapped joint ⟨g∘f, f⟩ is a dilation of
    // the deterministic g∘f, and its marginal-independence equation is
    // entrywise the positivity equation.
    let joint = Kernel::compose(
        &Kernel::swap(sr, &f.cod, &g.cod),
        &Kernel::compose(
            &Kernel::identity(sr, &f.cod).tensor_with(g)?,
            &Kernel::compose(&Kernel::copy(sr, &f.cod), f)?,
        )?,
    )?;
    let dmi = check_dmi_instance(&Dilation::new(joint, gf)?)?;
    let cross_checks = vec![("dmi-of-swapped-joint".to_string(), dmi.clone())];
    if dmi.holds() != verdict.holds() {
        return Ok(AxiomReport::inconsistent(
            axiom,
            json!({"positivity": verdict.to_json(), "dmi": dmi.to_json()}),
            cross_checks,
        ));
    }
    Ok(AxiomReport { axiom: axiom.into(), verdict, cross_checks })
}

/// Parametrized equality strengthening for one instance: if `h₁∘p = h₂∘p`
/// then `h₁` and `h₂` must be dilationally equal over `p`. A failed
/// antecedent makes the instance vacuous.
pub fn check_pes_instance(
    h1: &Kernel,
    h2: &Kernel,
    p: &Kernel,
    opts: &SearchOpts,
) -> Result<AxiomReport> {
    let axiom = "pes";
    if Kernel::compose(h1, p)? != Kernel::compose(h2, p)? {
        return Ok(AxiomReport {
            axiom: axiom.into(),
            verdict: Verdict::holds_vacuous()
                .with_trace("h₁∘p ≠ h₂∘p; the strengthening antecedent fails"),
            cross_checks: Vec::new(),
        });
    }
    let verdict = dilational_equal(h1, h2, p, opts)?;
    let ase = Kernel::as_equal(h1, h2, p)?;
    let cross_checks = vec![("almost-sure-equality".to_string(), ase.clone())];
    // dilational equality implies almost-sure equality; the converse need not
    // hold, so only one direction is a consistency constraint
    if verdict.holds() && ase.failed() {
        return Ok(AxiomReport::inconsistent(
            axiom,
            json!({"dilational": verdict.to_json(), "almost_sure": ase.to_json()}),
            cross_checks,
        ));
    }
    Ok(AxiomReport { axiom: axiom.into(), verdict, cross_checks })
}

/// Relative positivity for one instance: with `p : Θ → A` supplying the mass,
/// if `g∘f` is `p`-a.s. deterministic then the positivity equation must hold
/// `p`-a.s. as well.
pub fn check_relative_positivity_instance(
    f: &Kernel,
    g: &Kernel,
    p: &Kernel,
) -> Result<AxiomReport> {
    let axiom = "relative-positivity";
    if p.cod != f.dom {
        return Err(Error::Shape(
            "relative positivity: need p : Θ → A and f : A → X".into(),
        ));
    }
    let sr = &f.semiring;
    let gf = Kernel::compose(g, f)?;
    // antecedent: copy∘(g∘f) =_p (g∘f ⊗ g∘f)∘copy
    let det_lhs = Kernel::compose(&Kernel::copy(sr, &g.cod), &gf)?;
    let det_rhs = Kernel::compose(&gf.tensor_with(&gf)?, &Kernel::copy(sr, &f.dom))?;
    if Kernel::as_equal(&det_lhs, &det_rhs, p)?.failed() {
        return Ok(AxiomReport {
            axiom: axiom.into(),
            verdict: Verdict::holds_vacuous()
                .with_trace("g∘f is not p-a.s. deterministic; the antecedent fails"),
            cross_checks: Vec::new(),
        });
    }
    // consequent: ⟨f, g-after⟩ =_p ⟨f, g∘f⟩ as morphisms A → X⊗Y
    let lhs = Kernel::compose(
        &Kernel::identity(sr, &f.cod).tensor_with(g)?,
        &Kernel::compose(&Kernel::copy(sr, &f.cod), f)?,
    )?;
    let rhs = Kernel::compose(&f.tensor_with(&gf)?, &Kernel::copy(sr, &f.dom))?;
    let verdict = Kernel::as_equal(&lhs, &rhs, p)?;
    Ok(AxiomReport { axiom: axiom.into(), verdict, cross_checks: Vec::new() })
}

/// Batch audit of the equivalence theorems on a seeded pool of dilations of
/// random deterministic morphisms. For every instance, three independent
/// formulations — marginal independence, deterministic-in-the-first-factor,
/// and positivity of the projection pair — must agree; axiom *failures* are
/// expected over non-zerosumfree semirings and are tallied, while
/// *disagreements* between formulations fail the audit.
pub fn audit_equivalences(
    sr: &Arc<Semiring>,
    size_bound: usize,
    seed: u64,
    sample_count: usize,
) -> Result<AxiomReport> {
    assert!(size_bound >= 1);
    let axiom = "audit";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut audited = 0usize;
    let mut skipped = 0usize;
    let mut axiom_failures = 0usize;
    let mut disagreements: Vec<Json> = Vec::new();

    let set = |prefix: &str, n: usize| {
        let labels: Vec<String> = (1..=n).map(|i| format!("{prefix}{i}")).collect();
        FinSet::new(&labels.iter().map(String::as_str).collect::<Vec<_>>())
    };
    for _ in 0..sample_count {
        let na = rng.gen_range(1..=size_bound);
        let nx = rng.gen_range(1..=size_bound);
        let ne = rng.gen_range(2..=3);
        let (a, x) = (set("a", na), set("x", nx));
        let map: Vec<usize> = (0..na).map(|_| rng.gen_range(0..nx)).collect();
        let p = Kernel::delta(sr, &DetFunction::new(a, x.clone(), map));
        let Some(d) = random_dilation(&p, ne, &mut rng) else {
            skipped += 1;
            continue;
        };
        audited += 1;
        let dmi = check_dmi_instance(&d)?;
        let detx = is_deterministic_in(&d.total, 1)?;
        let proj = Kernel::identity(sr, &x).tensor_with(&Kernel::discard(sr, &d.env()))?;
        let pos = check_positivity_instance(&d.total, &proj)?;
        if !detx.holds() {
            axiom_failures += 1;
        }
        for (name, ok) in [
            ("dmi-vs-deterministic-in-x", dmi.holds() == detx.holds()),
            ("positivity-vs-deterministic-in-x", pos.verdict.holds() == detx.holds()),
        ] {
            if !ok && disagreements.len() < 10 {
                disagreements.push(json!({
                    "formulations": name,
                    "dilation": d.describe(),
                }));
            }
        }
    }

    let zsf = sr.check_zerosumfree(Strategy::Certified);
    let causality = sr.check_causality_criterion(Strategy::Certified);
    let meta = if causality.holds() && !zsf.holds() {
        Verdict::fails(json!({
            "causality": causality.to_json(),
            "zerosumfree": zsf.to_json(),
        }))
    } else if causality.holds() {
        Verdict::holds_theory("causality-implies-zerosumfree")
    } else {
        Verdict::holds_vacuous()
    };
    let cross_checks = vec![
        ("zerosumfree".to_string(), zsf),
        ("causality-criterion".to_string(), causality),
        ("causality-implies-zerosumfree".to_string(), meta.clone()),
    ];
    if !disagreements.is_empty() || meta.failed() {
        return Ok(AxiomReport::inconsistent(
            axiom,
            json!({"disagreements": disagreements}),
            cross_checks,
        ));
    }
    Ok(AxiomReport {
        axiom: axiom.into(),
        verdict: Verdict::holds_bounded(audited as u64).with_trace(format!(
            "{audited} instances audited ({skipped} draws skipped), {axiom_failures} axiom failures (expected over non-zerosumfree semirings), 0 formulation disagreements"
        )),
        cross_checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Arc<Semiring> {
        Arc::new(Semiring::rational())
    }

    fn nn() -> Arc<Semiring> {
        Arc::new(Semiring::nonneg_rational())
    }

    /// The rank-1 counterexample: f = (1,1,−1)ᵀ, g = [[1,0,0],[0,1,1]].
    fn rank1_pair(sr: &Arc<Semiring>) -> (Kernel, Kernel) {
        let x = FinSet::new(&["x1", "x2", "x3"]);
        let z = FinSet::new(&["z1", "z2"]);
        let f = Kernel::state(sr, x.clone(), &["1", "1", "-1"]).unwrap();
        let g = Kernel::from_rows(sr, x, z, &[&["1", "0", "0"], &["0", "1", "1"]]).unwrap();
        (f, g)
    }

    #[test]
    fn positivity_fails_with_a_negative_leak() {
        let sr = q();
        let (f, g) = rank1_pair(&sr);
        // the composite is deterministic: the negative mass cancels
        assert!(Kernel::compose(&g, &f).unwrap().is_deterministic().holds());
        let report = check_positivity_instance(&f, &g).unwrap();
        assert!(report.verdict.failed());
        let w = report.verdict.witness.as_ref().unwrap();
        assert_eq!(w["at"]["a"], "•");
        assert_eq!(w["at"]["x"], "x3");
        assert_eq!(w["at"]["y"], "z2");
        assert_eq!(w["at"]["lhs"], "-1");
        assert_eq!(w["at"]["rhs"], "0");
        assert_eq!(w["violations"].as_array().unwrap().len(), 4);
        // the independent formulation agrees
        assert!(report.cross_checks[0].1.failed());
    }

    #[test]
    fn positivity_holds_over_nonneg_rationals() {
        use rand::SeedableRng;
        let sr = nn();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = FinSet::new(&["a1", "a2"]);
        let x = FinSet::new(&["x1", "x2", "x3"]);
        let y = FinSet::new(&["y1", "y2"]);
        let mut substantive = 0;
        for _ in 0..40 {
            let f = Kernel::random(&sr, a.clone(), x.clone(), &mut rng);
            let map: Vec<usize> = (0..3).map(|_| rng.gen_range(0..2)).collect();
            let g = Kernel::delta(&sr, &DetFunction::new(x.clone(), y.clone(), map));
            let report = check_positivity_instance(&f, &g).unwrap();
            assert!(report.verdict.holds(), "{}", report.verdict);
            if report.verdict.certificate != crate::Certificate::Vacuous {
                substantive += 1;
            }
        }
        assert!(substantive > 0, "pool produced only vacuous instances");
    }

    #[test]
    fn positivity_is_vacuous_without_a_deterministic_composite() {
        let sr = q();
        let x = FinSet::new(&["x1", "x2"]);
        let f = Kernel::state(&sr, x.clone(), &["1/2", "1/2"]).unwrap();
        let g = Kernel::identity(&sr, &x);
        let report = check_positivity_instance(&f, &g).unwrap();
        assert!(report.verdict.holds());
        assert_eq!(report.verdict.certificate, crate::Certificate::Vacuous);
    }

    #[test]
    fn pes_instance_reports_the_constructed_dilation() {
        let sr = q();
        let x = FinSet::new(&["x", "y"]);
        let y = FinSet::new(&["y1", "y2"]);
        let h1 = Kernel::from_rows(&sr, x.clone(), y.clone(), &[&["1", "1"], &["0", "0"]])
            .unwrap();
        let h2 = Kernel::from_rows(&sr, x.clone(), y, &[&["0", "1"], &["1", "0"]]).unwrap();
        let p = Kernel::state(&sr, x, &["0", "1"]).unwrap();
        let report = check_pes_instance(&h1, &h2, &p, &SearchOpts::default()).unwrap();
        assert!(report.verdict.failed());
        // antecedent held almost surely too
        assert!(report.cross_checks[0].1.holds());
    }

    #[test]
    fn pes_instance_vacuous_when_antecedent_fails() {
        let sr = q();
        let x = FinSet::new(&["x", "y"]);
        let h1 = Kernel::identity(&sr, &x);
        let h2 = Kernel::from_rows(&sr, x.clone(), x.clone(), &[&["0", "1"], &["1", "0"]])
            .unwrap();
        let p = Kernel::state(&sr, x, &["1", "0"]).unwrap();
        let report = check_pes_instance(&h1, &h2, &p, &SearchOpts::default()).unwrap();
        assert!(report.verdict.holds());
        assert_eq!(report.verdict.certificate, crate::Certificate::Vacuous);
    }

    #[test]
    fn pes_holds_over_nonneg_rationals() {
        let sr = nn();
        let x = FinSet::new(&["x", "y"]);
        let y = FinSet::new(&["y1", "y2"]);
        let h1 = Kernel::from_rows(&sr, x.clone(), y.clone(), &[&["1", "1"], &["0", "0"]])
            .unwrap();
        let h2 = Kernel::from_rows(&sr, x.clone(), y, &[&["0", "1"], &["1", "0"]]).unwrap();
        let p = Kernel::state(&sr, x, &["0", "1"]).unwrap();
        let report = check_pes_instance(&h1, &h2, &p, &SearchOpts::default()).unwrap();
        assert!(report.verdict.holds());
    }

    #[test]
    fn relative_positivity_reduces_to_positivity_at_identity() {
        let sr = q();
        let (f, g) = rank1_pair(&sr);
        let id = Kernel::identity(&sr, &f.dom);
        let relative = check_relative_positivity_instance(&f, &g, &id).unwrap();
        let plain = check_positivity_instance(&f, &g).unwrap();
        assert_eq!(relative.verdict.failed(), plain.verdict.failed());
        assert!(relative.verdict.failed());
    }

    #[test]
    fn relative_positivity_masked_by_zero_mass() {
        let sr = q();
        let (f0, g) = rank1_pair(&sr);
        // give f a second, harmless column and weight only that column
        let a = FinSet::new(&["a1", "a2"]);
        let x = f0.cod.clone();
        let f = Kernel::from_rows(
            &sr,
            a.clone(),
            x,
            &[&["1", "1"], &["1", "0"], &["-1", "0"]],
        )
        .unwrap();
        let p = Kernel::state(&sr, a, &["0", "1"]).unwrap();
        let report = check_relative_positivity_instance(&f, &g, &p).unwrap();
        assert!(report.verdict.holds(), "{}", report.verdict);
    }

    #[test]
    fn relative_positivity_vacuous_when_not_as_deterministic() {
        let sr = q();
        let x = FinSet::new(&["x1", "x2"]);
        let f = Kernel::state(&sr, x.clone(), &["1/2", "1/2"]).unwrap();
        let g = Kernel::identity(&sr, &x);
        let id = Kernel::identity(&sr, &f.dom);
        let report = check_relative_positivity_instance(&f, &g, &id).unwrap();
        assert_eq!(report.verdict.certificate, crate::Certificate::Vacuous);
    }

    #[test]
    fn audit_is_clean_over_nonneg_rationals() {
        let sr = nn();
        let report = audit_equivalences(&sr, 3, 5, 120).unwrap();
        assert!(report.verdict.holds(), "{}", report.verdict);
        assert!(report.verdict.trace[0].contains("0 formulation disagreements"));
        assert!(report.verdict.trace[0].contains(" 0 axiom failures"));
    }

    #[test]
    fn audit_finds_expected_failures_over_signed_rationals() {
        let sr = q();
        let report = audit_equivalences(&sr, 3, 5, 120).unwrap();
        // failures are expected over a non-zerosumfree semiring; the audit itself still holds
        assert!(report.verdict.holds(), "{}", report.verdict);
        assert!(report.verdict.trace[0].contains("0 formulation disagreements"));
        assert!(!report.verdict.trace[0].contains(" 0 axiom failures"));
    }

    #[test]
    fn audit_meta_implication_and_converse_refutation() {
        let causal_zsf = [
            Arc::new(Semiring::nonneg_rational()),
            Arc::new(Semiring::boolean()),
            Arc::new(Semiring::tropical()),
        ];
        for sr in &causal_zsf {
            let report = audit_equivalences(sr, 2, 1, 30).unwrap();
            assert!(report.verdict.holds(), "{}: {}", sr.name, report.verdict);
        }
        // the ideal quantale is zerosumfree yet refutes the causality
        // criterion: the implication is vacuous there, never violated
        let ideal = Arc::new(Semiring::ideal_quantale());
        let report = audit_equivalences(&ideal, 2, 1, 30).unwrap();
        assert!(report.verdict.holds(), "{}", report.verdict);
        let zsf = &report.cross_checks[0].1;
        let caus = &report.cross_checks[1].1;
        assert!(zsf.holds());
        assert!(caus.failed());
    }

    #[test]
    fn report_json_carries_cross_checks() {
        let sr = q();
        let (f, g) = rank1_pair(&sr);
        let report = check_positivity_instance(&f, &g).unwrap();
        let j = report.to_json();
        assert_eq!(j["axiom"], "positivity");
        assert_eq!(j["cross_checks"][0]["formulation"], "dmi-of-swapped-joint");
    }
}
