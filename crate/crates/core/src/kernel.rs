//! Morphisms of the Kleisli category of the distribution monad over a
//! commutative semiring: normalized matrices between finite labeled sets.
//!
//! Objects keep their tensor-factor boundaries (a [`FinSet`] is a list of
//! factors; the monoidal unit is the empty list), so marginalization and
//! environment bookkeeping are structural rather than index arithmetic at the
//! call sites. Tensor is strictly associative by flattening.

use std::sync::Arc;

use serde_json::{json, Map, Value as Json};

use crate::error::Error;
use crate::semiring::{Semiring, Value};
use crate::verdict::Verdict;
use crate::Result;

/// A finite object: a formal tensor of labeled factors. The empty tensor is
/// the monoidal unit `I`, whose single point is labeled `•`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinSet {
    factors: Vec<Vec<String>>,
}

impl FinSet {
    /// Single-factor object. Labels must be distinct and nonempty.
    pub fn new(labels: &[&str]) -> FinSet {
        assert!(!labels.is_empty(), "an object needs at least one point");
        let labels: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), labels.len(), "labels must be distinct");
        FinSet { factors: vec![labels] }
    }

    pub fn unit() -> FinSet {
        FinSet { factors: vec![] }
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn tensor(&self, other: &FinSet) -> FinSet {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        FinSet { factors }
    }

    pub fn factors(&self) -> &[Vec<String>] {
        &self.factors
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    /// The object consisting of one tensor factor of this one.
    pub fn factor(&self, i: usize) -> FinSet {
        FinSet { factors: vec![self.factors[i].clone()] }
    }

    /// Sub-tensor of the given factors (indices must be strictly increasing).
    pub fn select(&self, keep: &[usize]) -> FinSet {
        assert!(keep.windows(2).all(|w| w[0] < w[1]), "factor indices must be increasing");
        FinSet { factors: keep.iter().map(|&i| self.factors[i].clone()).collect() }
    }

    pub fn size(&self) -> usize {
        self.factors.iter().map(|f| f.len()).product()
    }

    /// Flat index of a per-factor multi-index; the first factor is most
    /// significant.
    pub fn rank(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.factors.len());
        idx.iter()
            .zip(&self.factors)
            .fold(0, |acc, (&i, f)| {
                assert!(i < f.len());
                acc * f.len() + i
            })
    }

    pub fn unrank(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.factors.len()];
        for (slot, f) in idx.iter_mut().zip(&self.factors).rev() {
            *slot = flat % f.len();
            flat /= f.len();
        }
        assert_eq!(flat, 0, "index out of range");
        idx
    }

    /// Display label of a point: bare for single factors, `•` for the unit,
    /// `(x,e)` for proper tensors.
    pub fn label(&self, flat: usize) -> String {
        let idx = self.unrank(flat);
        let parts: Vec<&str> = idx
            .iter()
            .zip(&self.factors)
            .map(|(&i, f)| f[i].as_str())
            .collect();
        match parts.len() {
            0 => "•".to_string(),
            1 => parts[0].to_string(),
            _ => format!("({})", parts.join(",")),
        }
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.size()).map(|i| self.label(i)).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        (0..self.size()).find(|&i| self.label(i) == label)
    }
}

/// A deterministic function between objects, the `f♭` underlying a
/// deterministic kernel over an entire semiring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetFunction {
    pub dom: FinSet,
    pub cod: FinSet,
    /// `map[a]` is the flat codomain index of the image of point `a`.
    pub map: Vec<usize>,
}

impl DetFunction {
    pub fn new(dom: FinSet, cod: FinSet, map: Vec<usize>) -> DetFunction {
        assert_eq!(map.len(), dom.size());
        assert!(map.iter().all(|&x| x < cod.size()));
        DetFunction { dom, cod, map }
    }

    pub fn constant(dom: FinSet, cod: FinSet, at: usize) -> DetFunction {
        let map = vec![at; dom.size()];
        DetFunction::new(dom, cod, map)
    }
}

/// A normalized semiring-valued matrix `f(x|a)`: for every domain point `a`,
/// the column over the codomain sums to one. Construction enforces this, so a
/// `Kernel` is always a morphism.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    pub semiring: Arc<Semiring>,
    pub dom: FinSet,
    pub cod: FinSet,
    /// Column-major: `entries[a * cod.size() + x]` is `f(x|a)`.
    entries: Vec<Value>,
}

impl Kernel {
    /// Builds a kernel from column-major entries, checking shape, element
    /// well-formedness, and normalization.
    pub fn new(
        semiring: Arc<Semiring>,
        dom: FinSet,
        cod: FinSet,
        entries: Vec<Value>,
    ) -> Result<Kernel> {
        if entries.len() != dom.size() * cod.size() {
            return Err(Error::Shape(format!(
                "{} entries for a {}×{} kernel",
                entries.len(),
                cod.size(),
                dom.size()
            )));
        }
        for v in &entries {
            semiring.check_value(v)?;
        }
        let one = semiring.one();
        for a in 0..dom.size() {
            let col = &entries[a * cod.size()..(a + 1) * cod.size()];
            let sum = semiring.sum(col.iter())?;
            if sum != one {
                return Err(Error::MalformedTable(format!(
                    "column {} sums to {}, not one",
                    dom.label(a),
                    semiring.render(&sum)
                )));
            }
        }
        Ok(Kernel { semiring, dom, cod, entries })
    }

    /// Builds from a row-major matrix of literals: `rows[x][a] = f(x|a)`,
    /// rows indexed by the codomain as matrices are usually written.
    pub fn from_rows(
        semiring: &Arc<Semiring>,
        dom: FinSet,
        cod: FinSet,
        rows: &[&[&str]],
    ) -> Result<Kernel> {
        if rows.len() != cod.size() || rows.iter().any(|r| r.len() != dom.size()) {
            return Err(Error::Shape(format!(
                "literal matrix must be {}×{}",
                cod.size(),
                dom.size()
            )));
        }
        let mut entries = vec![semiring.zero(); dom.size() * cod.size()];
        for (x, row) in rows.iter().enumerate() {
            for (a, lit) in row.iter().enumerate() {
                entries[a * cod.size() + x] = semiring.parse(lit)?;
            }
        }
        Kernel::new(semiring.clone(), dom, cod, entries)
    }

    /// A state (distribution) on `cod`: a kernel from the unit object.
    pub fn state(semiring: &Arc<Semiring>, cod: FinSet, column: &[&str]) -> Result<Kernel> {
        let rows: Vec<&[&str]> = column.iter().map(std::slice::from_ref).collect();
        Kernel::from_rows(semiring, FinSet::unit(), cod, &rows)
    }

    pub fn get(&self, x: usize, a: usize) -> &Value {
        &self.entries[a * self.cod.size() + x]
    }

    pub fn column(&self, a: usize) -> &[Value] {
        &self.entries[a * self.cod.size()..(a + 1) * self.cod.size()]
    }

    fn ensure_same_semiring(&self, other: &Kernel) -> Result<()> {
        if self.semiring.name != other.semiring.name {
            return Err(Error::SemiringMismatch(
                self.semiring.name.clone(),
                other.semiring.name.clone(),
            ));
        }
        Ok(())
    }

    // --- structural morphisms -------------------------------------------

    pub fn identity(semiring: &Arc<Semiring>, at: &FinSet) -> Kernel {
        Kernel::indicator(semiring, at.clone(), at.clone(), |x, a| x == a)
    }

    /// `copy_X : X → X⊗X`, the comonoid comultiplication.
    pub fn copy(semiring: &Arc<Semiring>, at: &FinSet) -> Kernel {
        let n = at.size();
        Kernel::indicator(semiring, at.clone(), at.tensor(at), |x, a| x == a * n + a)
    }

    /// `discard_X : X → I`, the comonoid counit.
    pub fn discard(semiring: &Arc<Semiring>, at: &FinSet) -> Kernel {
        Kernel::indicator(semiring, at.clone(), FinSet::unit(), |_, _| true)
    }

    /// `swap : X⊗Y → Y⊗X`.
    pub fn swap(semiring: &Arc<Semiring>, x: &FinSet, y: &FinSet) -> Kernel {
        let (nx, ny) = (x.size(), y.size());
        Kernel::indicator(semiring, x.tensor(y), y.tensor(x), move |out, a| {
            let (ix, iy) = (a / ny, a % ny);
            out == iy * nx + ix
        })
    }

    /// The deterministic kernel `δ_{φ(a)}(x)` of a function.
    pub fn delta(semiring: &Arc<Semiring>, phi: &DetFunction) -> Kernel {
        let map = phi.map.clone();
        Kernel::indicator(semiring, phi.dom.clone(), phi.cod.clone(), move |x, a| {
            x == map[a]
        })
    }

    /// The point distribution `δ_at` on `cod`.
    pub fn point(semiring: &Arc<Semiring>, cod: &FinSet, at: usize) -> Kernel {
        Kernel::delta(
            semiring,
            &DetFunction::constant(FinSet::unit(), cod.clone(), at),
        )
    }

    fn indicator(
        semiring: &Arc<Semiring>,
        dom: FinSet,
        cod: FinSet,
        hit: impl Fn(usize, usize) -> bool,
    ) -> Kernel {
        let (zero, one) = (semiring.zero(), semiring.one());
        let entries = (0..dom.size() * cod.size())
            .map(|i| {
                let (a, x) = (i / cod.size(), i % cod.size());
                if hit(x, a) { one.clone() } else { zero.clone() }
            })
            .collect();
        Kernel::new(semiring.clone(), dom, cod, entries)
            .expect("indicator kernels are normalized by construction")
    }

    // --- categorical operations -----------------------------------------

    /// Kleisli composition `(g∘f)(z|a) = Σ_x g(z|x)·f(x|a)`.
    pub fn compose(g: &Kernel, f: &Kernel) -> Result<Kernel> {
        f.ensure_same_semiring(g)?;
        if f.cod != g.dom {
            return Err(Error::Shape(
                "compose: codomain of the first argument must match domain of the second".into(),
            ));
        }
        let sr = &f.semiring;
        let (na, nx, nz) = (f.dom.size(), f.cod.size(), g.cod.size());
        let mut entries = Vec::with_capacity(na * nz);
        for a in 0..na {
            for z in 0..nz {
                let mut acc = sr.zero();
                for x in 0..nx {
                    acc = sr.add(&acc, &sr.mul(g.get(z, x), f.get(x, a))?)?;
                }
                entries.push(acc);
            }
        }
        Kernel::new(sr.clone(), f.dom.clone(), g.cod.clone(), entries)
    }

    /// `(f⊗g)((x,y)|(a,b)) = f(x|a)·g(y|b)`.
    pub fn tensor_with(&self, g: &Kernel) -> Result<Kernel> {
        self.ensure_same_semiring(g)?;
        let sr = &self.semiring;
        let dom = self.dom.tensor(&g.dom);
        let cod = self.cod.tensor(&g.cod);
        let (nxg, nag) = (g.cod.size(), g.dom.size());
        let mut entries = Vec::with_capacity(dom.size() * cod.size());
        for af in 0..self.dom.size() {
            for ag in 0..nag {
                for xf in 0..self.cod.size() {
                    for xg in 0..nxg {
                        entries.push(sr.mul(self.get(xf, af), g.get(xg, ag))?);
                    }
                }
            }
        }
        Kernel::new(sr.clone(), dom, cod, entries)
    }

    /// Discards all codomain factors not in `keep` (strictly increasing
    /// indices; empty `keep` discards everything).
    pub fn marginalize(&self, keep: &[usize]) -> Result<Kernel> {
        if keep.iter().any(|&i| i >= self.cod.num_factors())
            || keep.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::Usage(format!(
                "marginalize: factor indices {keep:?} invalid for a {}-factor codomain",
                self.cod.num_factors()
            )));
        }
        let sr = &self.semiring;
        let cod = self.cod.select(keep);
        let mut entries = vec![sr.zero(); self.dom.size() * cod.size()];
        for a in 0..self.dom.size() {
            for x in 0..self.cod.size() {
                let idx = self.cod.unrank(x);
                let kept: Vec<usize> = keep.iter().map(|&i| idx[i]).collect();
                let slot = a * cod.size() + cod.rank(&kept);
                entries[slot] = sr.add(&entries[slot], self.get(x, a))?;
            }
        }
        Kernel::new(sr.clone(), self.dom.clone(), cod, entries)
    }

    // --- determinism, a.s. equality, conditionals -----------------------

    /// Checks `f(x₁|a)·f(x₂|a) = [x₁=x₂]·f(x₁|a)` for all `a, x₁, x₂`
    /// (commutation with copy).
    pub fn is_deterministic(&self) -> Verdict {
        let sr = &self.semiring;
        // distinct-outcome pairs first, then the diagonal, so witnesses
        // exhibit two outcomes wherever possible
        let n = self.cod.size();
        let pairs = (0..n)
            .flat_map(|x1| (0..n).map(move |x2| (x1, x2)))
            .filter(|(x1, x2)| x1 != x2)
            .chain((0..n).map(|x| (x, x)));
        for (x1, x2) in pairs {
            for a in 0..self.dom.size() {
                {
                    let lhs = sr.mul(self.get(x1, a), self.get(x2, a)).expect("well-formed");
                    let rhs = if x1 == x2 { self.get(x1, a).clone() } else { sr.zero() };
                    if lhs != rhs {
                        return Verdict::fails(json!({
                            "a": self.dom.label(a),
                            "x1": self.cod.label(x1),
                            "x2": self.cod.label(x2),
                            "lhs": sr.render(&lhs),
                            "rhs": sr.render(&rhs),
                        }))
                        .with_trace(format!(
                            "f({x1}|{a})·f({x2}|{a}) = {lhs} ≠ {rhs}",
                            x1 = self.cod.label(x1),
                            x2 = self.cod.label(x2),
                            a = self.dom.label(a),
                            lhs = sr.render(&lhs),
                            rhs = sr.render(&rhs),
                        ));
                    }
                }
            }
        }
        Verdict::holds_exhaustive()
    }

    /// The underlying function when this kernel is literally of delta form
    /// (each column one `one` and zeros elsewhere). Over an entire semiring
    /// this is equivalent to [`Kernel::is_deterministic`].
    pub fn det_function(&self) -> Option<DetFunction> {
        let sr = &self.semiring;
        let mut map = Vec::with_capacity(self.dom.size());
        for a in 0..self.dom.size() {
            let mut image = None;
            for x in 0..self.cod.size() {
                let v = self.get(x, a);
                if sr.is_one(v) && image.is_none() {
                    image = Some(x);
                } else if !sr.is_zero(v) {
                    return None;
                }
            }
            map.push(image?);
        }
        Some(DetFunction::new(self.dom.clone(), self.cod.clone(), map))
    }

    /// `m`-almost-sure equality: `m(x|θ)·f(y|x) = m(x|θ)·g(y|x)` for all
    /// `θ, x, y`.
    pub fn as_equal(f: &Kernel, g: &Kernel, m: &Kernel) -> Result<Verdict> {
        f.ensure_same_semiring(g)?;
        f.ensure_same_semiring(m)?;
        if f.dom != g.dom || f.cod != g.cod || m.cod != f.dom {
            return Err(Error::Shape(
                "as_equal: need f, g : X → Y and m : Θ → X".into(),
            ));
        }
        let sr = &f.semiring;
        for th in 0..m.dom.size() {
            for x in 0..f.dom.size() {
                let mass = m.get(x, th);
                for y in 0..f.cod.size() {
                    let lhs = sr.mul(mass, f.get(y, x))?;
                    let rhs = sr.mul(mass, g.get(y, x))?;
                    if lhs != rhs {
                        return Ok(Verdict::fails(json!({
                            "theta": m.dom.label(th),
                            "x": f.dom.label(x),
                            "y": f.cod.label(y),
                            "lhs": sr.render(&lhs),
                            "rhs": sr.render(&rhs),
                        })));
                    }
                }
            }
        }
        Ok(Verdict::holds_exhaustive())
    }

    /// Conditional `f_{|X} : X⊗A → Y` of `f : A → X⊗Y`, where `X` is the
    /// first `x_factors` codomain factors. Zero-mass points get the default
    /// row `δ` on the first `Y` label, making the output canonical
    /// (conditionals are only almost-surely unique).
    pub fn conditional(&self, x_factors: usize) -> Result<Kernel> {
        let sr = &self.semiring;
        if !sr.supports_division() {
            return Err(Error::Unsupported(format!(
                "conditionals need exact division, unavailable in {}",
                sr.name
            )));
        }
        if x_factors == 0 || x_factors >= self.cod.num_factors() {
            return Err(Error::Usage(
                "conditional: codomain must split as X⊗Y with both parts nonempty".into(),
            ));
        }
        let xs: Vec<usize> = (0..x_factors).collect();
        let x_set = self.cod.select(&xs);
        let y_set = self.cod.select(&(x_factors..self.cod.num_factors()).collect::<Vec<_>>());
        let marg = self.marginalize(&xs)?;
        let (nx, ny, na) = (x_set.size(), y_set.size(), self.dom.size());
        let dom = x_set.tensor(&self.dom);
        let mut entries = vec![sr.zero(); dom.size() * ny];
        for x in 0..nx {
            for a in 0..na {
                let col = (x * na + a) * ny;
                let mass = marg.get(x, a);
                if sr.is_zero(mass) {
                    entries[col] = sr.one();
                    continue;
                }
                for y in 0..ny {
                    // cod index of (x, y) in X⊗Y: X is most significant
                    entries[col + y] = sr.div(self.get(x * ny + y, a), mass)?;
                }
            }
        }
        Kernel::new(sr.clone(), dom, y_set, entries)
    }

    // --- random pool ----------------------------------------------------

    pub fn random(
        semiring: &Arc<Semiring>,
        dom: FinSet,
        cod: FinSet,
        rng: &mut impl rand::Rng,
    ) -> Kernel {
        let mut entries = Vec::with_capacity(dom.size() * cod.size());
        for _ in 0..dom.size() {
            entries.extend(semiring.sample_distribution(cod.size(), rng));
        }
        Kernel::new(semiring.clone(), dom, cod, entries)
            .expect("sample_distribution columns are normalized")
    }

    // --- JSON interchange -----------------------------------------------

    /// Serializes to the kernel file format; the `semiring` field is the
    /// semiring's name.
    pub fn to_json(&self) -> Json {
        let object = |s: &FinSet| -> Json {
            match s.factors().len() {
                1 => json!(s.factors()[0]),
                _ => json!(s.factors()),
            }
        };
        let mut cols = Map::new();
        for a in 0..self.dom.size() {
            let mut col = Map::new();
            for x in 0..self.cod.size() {
                col.insert(
                    self.cod.label(x),
                    Json::String(self.semiring.render(self.get(x, a))),
                );
            }
            cols.insert(self.dom.label(a), Json::Object(col));
        }
        json!({
            "semiring": self.semiring.name,
            "dom": object(&self.dom),
            "cod": object(&self.cod),
            "entries": cols,
        })
    }

    /// Reads the kernel file format. `resolve` maps the `semiring` field (a
    /// built-in name or a file reference) to a semiring.
    pub fn from_json(
        v: &Json,
        resolve: &dyn Fn(&str) -> Result<Arc<Semiring>>,
    ) -> Result<Kernel> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::MalformedTable("kernel file must be a JSON object".into()))?;
        let sr = resolve(
            obj.get("semiring")
                .and_then(|s| s.as_str())
                .ok_or_else(|| Error::MalformedTable("missing \"semiring\" field".into()))?,
        )?;
        let parse_object = |key: &str| -> Result<FinSet> {
            let val = obj
                .get(key)
                .ok_or_else(|| Error::MalformedTable(format!("missing {key:?} field")))?;
            let arr = val
                .as_array()
                .ok_or_else(|| Error::MalformedTable(format!("{key:?} must be an array")))?;
            if arr.is_empty() {
                return Ok(FinSet::unit());
            }
            let to_labels = |a: &Json| -> Result<Vec<String>> {
                a.as_array()
                    .ok_or_else(|| Error::MalformedTable(format!("{key:?}: bad factor")))?
                    .iter()
                    .map(|l| {
                        l.as_str()
                            .map(str::to_string)
                            .ok_or_else(|| Error::MalformedTable(format!("{key:?}: bad label")))
                    })
                    .collect()
            };
            let factors: Vec<Vec<String>> = if arr[0].is_array() {
                arr.iter().map(to_labels).collect::<Result<_>>()?
            } else {
                vec![to_labels(val)?]
            };
            let refs: Vec<Vec<&str>> = factors
                .iter()
                .map(|f| f.iter().map(String::as_str).collect())
                .collect();
            Ok(refs
                .iter()
                .fold(FinSet::unit(), |acc, f| acc.tensor(&FinSet::new(f))))
        };
        let dom = parse_object("dom")?;
        let cod = parse_object("cod")?;
        let cols = obj
            .get("entries")
            .and_then(|e| e.as_object())
            .ok_or_else(|| Error::MalformedTable("missing \"entries\" object".into()))?;
        let mut entries = vec![sr.zero(); dom.size() * cod.size()];
        for a in 0..dom.size() {
            let col = cols.get(&dom.label(a)).and_then(|c| c.as_object()).ok_or_else(|| {
                Error::MalformedTable(format!("missing entries column {:?}", dom.label(a)))
            })?;
            for x in 0..cod.size() {
                let lit = col.get(&cod.label(x)).and_then(|l| l.as_str()).ok_or_else(|| {
                    Error::MalformedTable(format!(
                        "missing entry ({:?} | {:?})",
                        cod.label(x),
                        dom.label(a)
                    ))
                })?;
                entries[a * cod.size() + x] = sr.parse(lit)?;
            }
        }
        Kernel::new(sr, dom, cod, entries)
    }
}
