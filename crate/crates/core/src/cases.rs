//! Named, frozen reproduction cases. Each case loads its fixture (inputs plus
//! expected observations), runs the real checkers, and compares. The fixture
//! files live in the repository's `cases/` directory and are embedded at
//! compile time, so `repro` needs no working-directory assumptions.
//!
//! Matching is structural: every leaf present in the expected observation
//! must appear with the same value in the actual one, so fixtures pin only
//! the load-bearing parts of witnesses.

use std::sync::Arc;

use num_rational::BigRational;
use serde_json::{json, Value as Json};

use crate::axioms::{check_pes_instance, check_positivity_instance};
use crate::dilation::{
    check_dmi_instance, dilational_equal, find_broadcasting, find_dilation_morphism,
    is_deterministic_in, verify_dilation, verify_initial, Dilation, MorphismSearch, SearchOpts,
};
use crate::error::Error;
use crate::kernel::Kernel;
use crate::pointed::{
    check_ev_initial, check_ev_marginal, check_ev_noncreative, ev, hom_object, is_dilation,
    self_maps, PointedMap, PointedSet,
};
use crate::semiring::{lattice, Semiring, Strategy};
use crate::verdict::Verdict;
use crate::Result;

/// Outcome of one reproduction case.
#[derive(Debug, Clone)]
pub struct CaseResult {
    pub case_id: String,
    pub expected: Json,
    pub actual: Json,
    pub matched: bool,
}

impl CaseResult {
    pub fn to_json(&self) -> Json {
        json!({
            "case_id": self.case_id,
            "expected": self.expected,
            "actual": self.actual,
            "match": self.matched,
        })
    }
}

struct Case {
    id: &'static str,
    fixture: &'static str,
    run: fn(&Json) -> Result<Json>,
}

static CASES: &[Case] = &[
    Case {
        id: "finstoch_pm_dmi",
        fixture: include_str!("../../../cases/finstoch_pm_dmi.json"),
        run: run_finstoch_pm_dmi,
    },
    Case {
        id: "rank1_positivity",
        fixture: include_str!("../../../cases/rank1_positivity.json"),
        run: run_rank1_positivity,
    },
    Case {
        id: "quantale_z2i",
        fixture: include_str!("../../../cases/quantale_z2i.json"),
        run: run_quantale_z2i,
    },
    Case {
        id: "lattice_causal",
        fixture: include_str!("../../../cases/lattice_causal.json"),
        run: run_lattice_causal,
    },
    Case {
        id: "convex_decomposition",
        fixture: include_str!("../../../cases/convex_decomposition.json"),
        run: run_convex_decomposition,
    },
    Case {
        id: "dileq_vs_ase",
        fixture: include_str!("../../../cases/dileq_vs_ase.json"),
        run: run_dileq_vs_ase,
    },
    Case {
        id: "broadcasting_pm",
        fixture: include_str!("../../../cases/broadcasting_pm.json"),
        run: run_broadcasting_pm,
    },
    Case {
        id: "pointed_ev_initial",
        fixture: include_str!("../../../cases/pointed_ev_initial.json"),
        run: run_pointed_ev_initial,
    },
    Case {
        id: "pointed_discard_creative",
        fixture: include_str!("../../../cases/pointed_discard_creative.json"),
        run: run_pointed_discard_creative,
    },
    Case {
        id: "ioc_initial",
        fixture: include_str!("../../../cases/ioc_initial.json"),
        run: run_ioc_initial,
    },
    Case {
        id: "pes_strengthening",
        fixture: include_str!("../../../cases/pes_strengthening.json"),
        run: run_pes_strengthening,
    },
];

/// Registered case ids in registry order.
pub fn case_ids() -> Vec<&'static str> {
    CASES.iter().map(|c| c.id).collect()
}

/// Tags of one registered case.
pub fn case_tags(case_id: &str) -> Result<Vec<String>> {
    let case = CASES
        .iter()
        .find(|c| c.id == case_id)
        .ok_or_else(|| Error::UnknownCase(case_id.to_string()))?;
    let fixture: Json = serde_json::from_str(case.fixture)?;
    Ok(fixture["tags"]
        .as_array()
        .map(|tags| tags.iter().filter_map(|t| t.as_str().map(str::to_string)).collect())
        .unwrap_or_default())
}

/// Runs one case by id.
pub fn run_case(case_id: &str) -> Result<CaseResult> {
    let case = CASES
        .iter()
        .find(|c| c.id == case_id)
        .ok_or_else(|| Error::UnknownCase(case_id.to_string()))?;
    let fixture: Json = serde_json::from_str(case.fixture)?;
    let expected = fixture["expected"].clone();
    let actual = (case.run)(&fixture["inputs"])?;
    let matched = expected
        .as_object()
        .map(|exp| {
            exp.iter().all(|(name, e)| subset_match(e, &actual[name]))
        })
        .unwrap_or(false);
    Ok(CaseResult { case_id: case_id.to_string(), expected, actual, matched })
}

/// Runs the whole registry, optionally filtered by tag, in registration
/// order.
pub fn run_all(tag: Option<&str>) -> Result<Vec<CaseResult>> {
    let mut out = Vec::new();
    for case in CASES {
        if let Some(tag) = tag {
            if !case_tags(case.id)?.iter().any(|t| t == tag) {
                continue;
            }
        }
        out.push(run_case(case.id)?);
    }
    Ok(out)
}

/// Every leaf of `expected` must be present and equal in `actual`.
fn subset_match(expected: &Json, actual: &Json) -> bool {
    match expected {
        Json::Object(map) => map.iter().all(|(k, v)| subset_match(v, &actual[k])),
        other => other == actual,
    }
}

fn status(v: &Verdict) -> Json {
    v.to_json()
}

fn bool_status(ok: bool) -> Json {
    json!({"status": if ok { "holds" } else { "fails" }})
}

fn kernel(inputs: &Json, name: &str) -> Result<Kernel> {
    Kernel::from_json(&inputs[name], &|name| Semiring::by_name(name).map(Arc::new))
}

fn run_finstoch_pm_dmi(inputs: &Json) -> Result<Json> {
    let q = kernel(inputs, "q")?;
    let base = kernel(inputs, "base")?;
    let marginal = verify_dilation(&q, &base)?;
    let d = Dilation::new(q.clone(), base)?;
    Ok(json!({
        "marginal_is_base": status(&marginal),
        "dmi": status(&check_dmi_instance(&d)?),
        "deterministic_in_x": status(&is_deterministic_in(&q, 1)?),
    }))
}

/// Exact matrix rank over the rationals, used only for the wide-subcategory
/// membership checks.
fn rational_rank(k: &Kernel) -> usize {
    let ncols = k.dom.size();
    let rows: Vec<Vec<BigRational>> = (0..k.cod.size())
        .map(|x| {
            (0..ncols)
                .map(|a| k.get(x, a).as_rational().expect("rational kind").clone())
                .collect()
        })
        .collect();
    let rhs = vec![BigRational::from_integer(0.into()); rows.len()];
    match crate::linalg::solve(&rows, &rhs, ncols) {
        crate::linalg::LinSolve::Solved { nullspace, .. } => ncols - nullspace.len(),
        crate::linalg::LinSolve::Inconsistent => unreachable!("homogeneous system"),
    }
}

fn run_rank1_positivity(inputs: &Json) -> Result<Json> {
    let f = kernel(inputs, "f")?;
    let g = kernel(inputs, "g")?;
    let gf = Kernel::compose(&g, &f)?;
    let nonneg = |k: &Kernel| {
        use num_traits::Signed;
        (0..k.dom.size()).all(|a| {
            (0..k.cod.size())
                .all(|x| !k.get(x, a).as_rational().expect("rational kind").is_negative())
        })
    };
    let report = check_positivity_instance(&f, &g)?;
    Ok(json!({
        "composite_deterministic": status(&gf.is_deterministic()),
        "f_has_rank_one": bool_status(rational_rank(&f) == 1),
        "g_is_stochastic": bool_status(nonneg(&g)),
        "positivity": status(&report.verdict),
    }))
}

fn run_quantale_z2i(inputs: &Json) -> Result<Json> {
    let sr = Semiring::by_name(inputs["semiring"].as_str().unwrap_or_default())?;
    let val = |name: &str| -> Result<crate::Value> {
        sr.parse(inputs[name].as_str().unwrap_or_default())
    };
    let (s, t, v, w) = (val("s")?, val("t")?, val("v")?, val("w")?);
    let vw = sr.add(&v, &w)?;
    let render = |x: Result<crate::Value>| -> Result<Json> { Ok(json!({"value": sr.render(&x?)})) };
    Ok(json!({
        "s_plus_t": render(sr.add(&s, &t))?,
        "s_squared": render(sr.mul(&s, &s))?,
        "t_squared": render(sr.mul(&t, &t))?,
        "s_times_t": render(sr.mul(&s, &t))?,
        "s_times_vw": render(sr.mul(&s, &vw))?,
        "t_times_vw": render(sr.mul(&t, &vw))?,
        "s_times_v": render(sr.mul(&s, &v))?,
        "t_times_v": render(sr.mul(&t, &v))?,
        "zerosumfree": status(&sr.check_zerosumfree(Strategy::Certified)),
        "entire": status(&sr.check_entire(Strategy::Certified)),
        "causality": status(&sr.check_causality_criterion(Strategy::Certified)),
    }))
}

fn run_lattice_causal(inputs: &Json) -> Result<Json> {
    let mut out = serde_json::Map::new();
    for name in inputs["lattices"].as_array().into_iter().flatten() {
        let name = name.as_str().unwrap_or_default();
        let sr = Semiring::by_name(name)?;
        out.insert(
            name.to_string(),
            status(&sr.check_causality_criterion(Strategy::Exhaustive)),
        );
    }
    // the non-distributive diamond M₃ is rejected before it ever becomes a
    // semiring
    out.insert(
        "m3_distributivity".into(),
        status(&lattice::validate_lattice(&lattice::FiniteLattice::m3())?),
    );
    Ok(Json::Object(out))
}

fn run_convex_decomposition(inputs: &Json) -> Result<Json> {
    let p = kernel(inputs, "p")?;
    let m = kernel(inputs, "m")?;
    let k = kernel(inputs, "k")?;
    let composite = Kernel::compose(&k, &m)?;
    let d = Dilation::from_decomposition(&p, &m, &k)?;
    let table = |kr: &Kernel| -> Json {
        kr.to_json()["entries"]["•"].clone()
    };
    Ok(json!({
        "composite_matches": bool_status(composite == p),
        "dilation_verifies": status(&verify_dilation(&d.total, &p)?),
        "total": {"value": table(&d.total)},
        "env_marginal": {"value": table(&d.env_marginal())},
    }))
}

fn run_dileq_vs_ase(inputs: &Json) -> Result<Json> {
    let p = kernel(inputs, "p")?;
    let f = kernel(inputs, "f")?;
    let g = kernel(inputs, "g")?;
    let compose_equal = Kernel::compose(&f, &p)? == Kernel::compose(&g, &p)?;
    Ok(json!({
        "compose_equal": bool_status(compose_equal),
        "almost_sure_equality": status(&Kernel::as_equal(&f, &g, &p)?),
        "dilational_equality": status(&dilational_equal(&f, &g, &p, &SearchOpts::default())?),
    }))
}

fn run_broadcasting_pm(inputs: &Json) -> Result<Json> {
    let b_alt = kernel(inputs, "b_alt")?;
    let x = b_alt.dom.clone();
    let sr = b_alt.semiring.clone();
    let id = Kernel::identity(&sr, &x);
    let broadcasts =
        b_alt.marginalize(&[0])? == id && b_alt.marginalize(&[1])? == id;
    let copy = Kernel::copy(&sr, &x);
    let signed = find_broadcasting(&sr, &x)?;
    let nn: Arc<Semiring> = Arc::new(Semiring::nonneg_rational());
    let nonneg = find_broadcasting(&nn, &x)?;
    Ok(json!({
        "b_alt_broadcasts": bool_status(broadcasts),
        "b_alt_differs_from_copy": bool_status(b_alt != copy),
        "signed_uniqueness": status(&signed.uniqueness),
        "nonneg_solutions_exactly_copy":
            bool_status(nonneg.solutions == vec![Kernel::copy(&nn, &x)]),
        "nonneg_uniqueness": status(&nonneg.uniqueness),
    }))
}

fn pointed_x(n: usize) -> PointedSet {
    match n {
        2 => PointedSet::new(&["∗", "x"]),
        3 => PointedSet::new(&["∗", "x", "y"]),
        _ => PointedSet::generic(n),
    }
}

fn run_pointed_ev_initial(inputs: &Json) -> Result<Json> {
    let max_env = inputs["max_env"].as_u64().unwrap_or(3) as usize;
    let mut out = serde_json::Map::new();
    for size in inputs["sizes"].as_array().into_iter().flatten() {
        let n = size.as_u64().unwrap_or_default() as usize;
        let x = pointed_x(n);
        let (hom, _) = hom_object(&x);
        out.insert(format!("self_maps_{n}"), json!({"value": self_maps(&x).len()}));
        out.insert(
            format!("ev_is_dilation_{n}"),
            bool_status(is_dilation(&ev(&x), &PointedMap::identity(&x), &x, &hom)),
        );
        out.insert(format!("initial_exhaustive_{n}"), status(&check_ev_initial(&x, max_env)));
    }
    Ok(Json::Object(out))
}

fn run_pointed_discard_creative(inputs: &Json) -> Result<Json> {
    let mut out = serde_json::Map::new();
    for size in inputs["sizes"].as_array().into_iter().flatten() {
        let n = size.as_u64().unwrap_or_default() as usize;
        let x = pointed_x(n);
        out.insert(format!("ev_marginal_constant_{n}"), status(&check_ev_marginal(&x)));
        out.insert(format!("no_factorization_{n}"), status(&check_ev_noncreative(&x)));
    }
    Ok(Json::Object(out))
}

fn run_ioc_initial(inputs: &Json) -> Result<Json> {
    let p = kernel(inputs, "p")?;
    let max_env = inputs["max_env"].as_u64().unwrap_or(3) as usize;
    let d = Dilation::ioc(&p);
    let opts = SearchOpts { max_env, ..Default::default() };
    let initial = verify_initial(&d, &opts)?;
    // the mediator to any concrete dilation is the conditional of its total
    let target = Dilation::output_copy(&p);
    let mediator_is_conditional = match find_dilation_morphism(&d, &target)? {
        MorphismSearch::Found(m) => m.representative == target.total.conditional(1)?,
        _ => false,
    };
    Ok(json!({
        "initial": status(&initial),
        "mediator_is_conditional": bool_status(mediator_is_conditional),
    }))
}

fn run_pes_strengthening(inputs: &Json) -> Result<Json> {
    let h1 = kernel(inputs, "h1")?;
    let h2 = kernel(inputs, "h2")?;
    let p = kernel(inputs, "p")?;
    let antecedent = Kernel::compose(&h1, &p)? == Kernel::compose(&h2, &p)?;
    let report = check_pes_instance(&h1, &h2, &p, &SearchOpts::default())?;
    Ok(json!({
        "antecedent": bool_status(antecedent),
        "pes": status(&report.verdict),
    }))
}
