//! The opposite category of pointed sets with cartesian product: a
//! semicartesian category that is not a category of semiring-valued kernels.
//!
//! A categorical morphism `u : A → B` is represented by a basepoint-preserving
//! function `û : B → A` (the arrow reversal of the opposite category), and
//! composition reverses accordingly. The unit object is the one-point set,
//! which is terminal, so the category is semicartesian and the dilation
//! definitions apply verbatim: `π : A → X⊗E` dilates `p : A → X` iff
//! `π̂(x, ∗_E) = p̂(x)` for all `x`.
//!
//! The interesting morphism is the evaluation `ev_X : X → X ⊗ X^X`, where
//! `X^X` is the pointed set of basepoint-preserving self-maps with basepoint
//! `id`. It is a dilation of `id_X`; [`check_ev_initial`] tests its claimed
//! initiality by exhaustive mediator search, and [`check_ev_noncreative`]
//! shows its environment marginal (the constant-basepoint morphism) is
//! creative for `|X| ≥ 2`.

use serde_json::json;

use crate::verdict::Verdict;

/// A finite pointed set; index 0 is the basepoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointedSet {
    labels: Vec<String>,
}

impl PointedSet {
    /// `labels[0]` is the basepoint; labels must be distinct.
    pub fn new(labels: &[&str]) -> PointedSet {
        assert!(!labels.is_empty(), "a pointed set needs a basepoint");
        let labels: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
        for (i, l) in labels.iter().enumerate() {
            assert!(
                labels[..i].iter().all(|m| m != l),
                "duplicate label {l:?}"
            );
        }
        PointedSet { labels }
    }

    /// Generic pointed set `{∗, e1, …, e(n−1)}`.
    pub fn generic(n: usize) -> PointedSet {
        assert!(n >= 1);
        let labels: Vec<String> =
            std::iter::once("∗".to_string()).chain((1..n).map(|i| format!("e{i}"))).collect();
        PointedSet { labels: labels.clone() }
    }

    /// The unit object: the one-point set.
    pub fn unit() -> PointedSet {
        PointedSet::new(&["∗"])
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn basepoint(&self) -> usize {
        0
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// Cartesian product with product basepoint, labels `(a,b)`.
    pub fn product(&self, other: &PointedSet) -> PointedSet {
        let labels: Vec<String> = self
            .labels
            .iter()
            .flat_map(|a| other.labels.iter().map(move |b| format!("({a},{b})")))
            .collect();
        PointedSet { labels }
    }

    /// Index of `(i, j)` in `self.product(other)`; first factor most
    /// significant, mirroring the kernel-side convention.
    pub fn pair(&self, other: &PointedSet, i: usize, j: usize) -> usize {
        i * other.size() + j
    }
}

/// A categorical morphism `dom → cod`, stored as the underlying
/// basepoint-preserving function `cod → dom` (`mapping[c]` is an index into
/// `dom`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointedMap {
    pub dom: PointedSet,
    pub cod: PointedSet,
    mapping: Vec<usize>,
}

impl PointedMap {
    pub fn new(dom: PointedSet, cod: PointedSet, mapping: Vec<usize>) -> PointedMap {
        assert_eq!(mapping.len(), cod.size(), "mapping must cover the codomain set");
        assert!(mapping.iter().all(|&i| i < dom.size()), "mapping out of range");
        assert_eq!(mapping[0], 0, "basepoint must map to basepoint");
        PointedMap { dom, cod, mapping }
    }

    /// The underlying function applied to a codomain-set element.
    pub fn apply(&self, c: usize) -> usize {
        self.mapping[c]
    }

    pub fn identity(at: &PointedSet) -> PointedMap {
        PointedMap::new(at.clone(), at.clone(), (0..at.size()).collect())
    }

    /// The unique morphism `X → I`: underlying function picks the basepoint.
    pub fn discard(at: &PointedSet) -> PointedMap {
        PointedMap::new(at.clone(), PointedSet::unit(), vec![0])
    }

    /// Categorical composition `g∘f`: underlying functions compose the other
    /// way around.
    pub fn compose(g: &PointedMap, f: &PointedMap) -> PointedMap {
        assert_eq!(f.cod, g.dom, "maps do not compose");
        let mapping = g.mapping.iter().map(|&i| f.mapping[i]).collect();
        PointedMap::new(f.dom.clone(), g.cod.clone(), mapping)
    }
}

/// All basepoint-preserving self-maps of `x`, identity first; there are
/// `|X|^(|X|−1)` of them. Each is the underlying function of a categorical
/// endomorphism of `x`.
pub fn self_maps(x: &PointedSet) -> Vec<Vec<usize>> {
    let identity = out_first(x.size());
    let mut out = vec![identity.clone()];
    out.extend(
        all_pointed_functions(x, x)
            .into_iter()
            .filter(|f| *f != identity),
    );
    out
}

fn out_first(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// The hom-object `X^X`: the pointed set of self-maps with basepoint `id`.
pub fn hom_object(x: &PointedSet) -> (PointedSet, Vec<Vec<usize>>) {
    let maps = self_maps(x);
    let labels: Vec<String> = maps
        .iter()
        .map(|m| {
            if *m == out_first(x.size()) {
                "id".to_string()
            } else {
                let parts: Vec<String> = m
                    .iter()
                    .enumerate()
                    .map(|(i, &j)| format!("{}↦{}", x.label(i), x.label(j)))
                    .collect();
                format!("[{}]", parts.join(","))
            }
        })
        .collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    (PointedSet::new(&refs), maps)
}

/// The evaluation morphism `ev_X : X → X ⊗ X^X`, with underlying function
/// `(x, f) ↦ f(x)`.
pub fn ev(x: &PointedSet) -> PointedMap {
    let (hom, maps) = hom_object(x);
    let prod = x.product(&hom);
    let mut mapping = vec![0usize; prod.size()];
    for xi in 0..x.size() {
        for (fi, f) in maps.iter().enumerate() {
            mapping[x.pair(&hom, xi, fi)] = f[xi];
        }
    }
    PointedMap::new(x.clone(), prod, mapping)
}

/// Whether `pi : A → X⊗E` (underlying `X×E → A`) is a dilation of
/// `p : A → X`: `π̂(x, ∗_E) = p̂(x)` for all `x`.
pub fn is_dilation(pi: &PointedMap, p: &PointedMap, x: &PointedSet, e: &PointedSet) -> bool {
    pi.dom == p.dom
        && pi.cod == x.product(e)
        && (0..x.size()).all(|xi| pi.apply(x.pair(e, xi, e.basepoint())) == p.apply(xi))
}

/// All dilations of `id_X` with environment `e`: the `∗_E`-column is forced
/// to the identity and every other column is an arbitrary self-function
/// (not necessarily basepoint-preserving — only the product basepoint is
/// constrained).
pub fn dilations_of_id(x: &PointedSet, e: &PointedSet) -> Vec<PointedMap> {
    let n = x.size();
    let free = (e.size() - 1) * n;
    let mut out = Vec::new();
    let mut digits = vec![0usize; free];
    loop {
        let prod = x.product(e);
        let mut mapping = vec![0usize; prod.size()];
        let mut d = 0usize;
        let mut ok = true;
        for xi in 0..n {
            mapping[x.pair(e, xi, 0)] = xi;
        }
        for ei in 1..e.size() {
            for xi in 0..n {
                mapping[x.pair(e, xi, ei)] = digits[d];
                d += 1;
            }
        }
        // the underlying function must preserve the product basepoint — it
        // does, since the ∗_E column is the identity
        if mapping[0] != 0 {
            ok = false;
        }
        if ok {
            out.push(PointedMap::new(x.clone(), prod, mapping));
        }
        let mut pos = free;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < n {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// Checks that `ev_X` is a dilation of `id_X` and that every dilation of
/// `id_X` with `|E| ≤ max_env` factors through it via a unique mediating
/// morphism `X^X ← E` (a basepoint-preserving function `E → X^X` sending
/// `∗_E` to `id`). Exhaustive; `Fails` carries the first dilation admitting
/// no (or more than one) mediator.
pub fn check_ev_initial(x: &PointedSet, max_env: usize) -> Verdict {
    let e_of_ev = {
        let (hom, _) = hom_object(x);
        hom
    };
    let evx = ev(x);
    if !is_dilation(&evx, &PointedMap::identity(x), x, &e_of_ev) {
        return Verdict::fails(json!({"reason": "ev is not a dilation of id"}));
    }
    let (hom, maps) = hom_object(x);
    for env_size in 1..=max_env {
        let e = PointedSet::generic(env_size);
        for pi in dilations_of_id(x, &e) {
            // a mediator f : E → X^X with f(∗)=id must satisfy
            // f(e) = π̂(·, e) pointwise, so it exists iff every column of π̂
            // is itself a basepoint-preserving map, and is then unique
            let mut mediators = 0usize;
            'cand: for cand in all_pointed_functions(&e, &hom) {
                for ei in 0..e.size() {
                    let f = &maps[cand[ei]];
                    for xi in 0..x.size() {
                        if f[xi] != pi.apply(x.pair(&e, xi, ei)) {
                            continue 'cand;
                        }
                    }
                }
                mediators += 1;
            }
            if mediators != 1 {
                let cols: Vec<Vec<String>> = (0..e.size())
                    .map(|ei| {
                        (0..x.size())
                            .map(|xi| x.label(pi.apply(x.pair(&e, xi, ei))).to_string())
                            .collect()
                    })
                    .collect();
                return Verdict::fails(json!({
                    "env_size": env_size,
                    "columns": cols,
                    "mediators": mediators,
                }))
                .with_trace(
                    "a dilation column is not basepoint-preserving, so no mediator into X^X exists",
                );
            }
        }
    }
    Verdict::holds_exhaustive()
}

/// All basepoint-preserving functions `dom-set → cod-set` (as index vectors
/// over `dom`), i.e. underlying functions of morphisms `cod → dom`.
fn all_pointed_functions(dom: &PointedSet, cod: &PointedSet) -> Vec<Vec<usize>> {
    let (n, m) = (dom.size(), cod.size());
    let mut out = Vec::new();
    let mut digits = vec![0usize; n.saturating_sub(1)];
    loop {
        let mut f = vec![0usize; n];
        for (i, &d) in digits.iter().enumerate() {
            f[i + 1] = d;
        }
        out.push(f);
        let mut pos = digits.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < m {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// The environment marginal of `ev_X` is the constant-basepoint morphism
/// `X → X^X` (underlying function `f ↦ f(∗) = ∗`).
pub fn check_ev_marginal(x: &PointedSet) -> Verdict {
    let (hom, maps) = hom_object(x);
    let evx = ev(x);
    for (fi, f) in maps.iter().enumerate() {
        // marginalizing over X plugs the basepoint of X into ev
        let got = evx.apply(x.pair(&hom, x.basepoint(), fi));
        let expect = f[x.basepoint()];
        if got != x.basepoint() || expect != x.basepoint() {
            return Verdict::fails(json!({
                "f": hom.label(fi),
                "value": x.label(got),
            }));
        }
    }
    Verdict::holds_exhaustive()
}

/// The constant-basepoint morphism `p : X → X^X` is creative for `|X| ≥ 2`:
/// the swapped evaluation is a dilation of `p`, but no dilation `ι` of
/// `id_X` satisfies the factorization `π = (p ⊗ id_E)∘ι` — its right-hand
/// side is independent of the function argument while evaluation is not.
pub fn check_ev_noncreative(x: &PointedSet) -> Verdict {
    let (_, maps) = hom_object(x);
    if x.size() == 1 {
        return Verdict::holds_vacuous().with_trace("a one-point X makes evaluation constant");
    }
    // candidate ι : X → X⊗E with E = X; the factorized composite sends
    // (f, x') to ι̂(p̂(f), x') = ι̂(∗, x'), independent of f — while the
    // swapped evaluation dilation of p sends it to f(x')
    for iota in dilations_of_id(x, x) {
        let factors =
            |fi: usize, xp: usize| iota.apply(x.pair(x, x.basepoint(), xp)) == maps[fi][xp];
        if (0..maps.len()).all(|fi| (0..x.size()).all(|xp| factors(fi, xp))) {
            return Verdict::fails(json!({"unexpected_factorization": true}));
        }
    }
    Verdict::holds_exhaustive()
        .with_trace(format!(
            "no factorization among all {} candidate dilations of the identity",
            dilations_of_id(x, x).len()
        ))
        .with_trace("evaluation depends on the function argument; the factorized form cannot")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x2() -> PointedSet {
        PointedSet::new(&["∗", "x"])
    }

    fn x3() -> PointedSet {
        PointedSet::new(&["∗", "x", "y"])
    }

    #[test]
    fn self_map_counts() {
        assert_eq!(self_maps(&x2()).len(), 2);
        assert_eq!(self_maps(&x3()).len(), 9);
        // identity is the basepoint of the hom-object
        let (hom, maps) = hom_object(&x3());
        assert_eq!(hom.label(0), "id");
        assert_eq!(maps[0], vec![0, 1, 2]);
    }

    #[test]
    fn unit_is_terminal() {
        // exactly one morphism X → I for any pointed X
        let d = PointedMap::discard(&x3());
        assert_eq!(d.apply(0), 0);
        // and composition with it is forced
        let id = PointedMap::identity(&x3());
        assert_eq!(PointedMap::compose(&d, &id), d);
    }

    #[test]
    fn composition_reverses_underlying_functions() {
        let x = x3();
        // categorical f : X → X with underlying swap of x and y
        let f = PointedMap::new(x.clone(), x.clone(), vec![0, 2, 1]);
        let g = PointedMap::new(x.clone(), x.clone(), vec![0, 1, 1]);
        let gf = PointedMap::compose(&g, &f);
        // (g∘f)^ = f̂∘ĝ
        assert_eq!(gf.apply(2), f.apply(g.apply(2)));
    }

    #[test]
    fn ev_is_a_dilation_of_the_identity() {
        for x in [x2(), x3()] {
            let (hom, _) = hom_object(&x);
            assert!(is_dilation(&ev(&x), &PointedMap::identity(&x), &x, &hom));
        }
    }

    #[test]
    fn ev_marginal_is_constant_basepoint() {
        assert!(check_ev_marginal(&x2()).holds());
        assert!(check_ev_marginal(&x3()).holds());
    }

    #[test]
    fn dilation_of_id_condition_pins_the_basepoint_column() {
        let x = x2();
        let e = PointedSet::generic(2);
        let pool = dilations_of_id(&x, &e);
        // the free column ranges over all |X|^|X| functions
        assert_eq!(pool.len(), 4);
        for pi in &pool {
            assert!(is_dilation(pi, &PointedMap::identity(&x), &x, &e));
        }
    }

    #[test]
    fn ev_initiality_search_finds_the_unpointed_column() {
        // the claimed initiality fails under exhaustive search: a dilation
        // column need not be basepoint-preserving, and then no mediator into
        // X^X exists
        let v = check_ev_initial(&x2(), 2);
        assert!(v.failed());
        let w = v.witness.unwrap();
        assert_eq!(w["mediators"], 0);
        // the offending column sends ∗ somewhere else
        let col = w["columns"][1].as_array().unwrap();
        assert_ne!(col[0], "∗");
    }

    #[test]
    fn ev_initiality_holds_on_the_singleton() {
        assert!(check_ev_initial(&PointedSet::unit(), 3).holds());
    }

    #[test]
    fn constant_basepoint_is_creative() {
        assert!(check_ev_noncreative(&x2()).holds());
        assert!(check_ev_noncreative(&x3()).holds());
        assert_eq!(
            check_ev_noncreative(&PointedSet::unit()).certificate,
            crate::Certificate::Vacuous
        );
    }
}
