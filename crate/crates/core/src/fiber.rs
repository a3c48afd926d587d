//! Finite models of `(A_0 × P^{n_1} × ⋯ × P^{n_r})/Δ` and of its factor
//! quotients, with the universal property of the fibered product checked
//! by enumeration.
//!
//! `A_0` is replaced by its `N`-torsion `(Z/N)^{2d}` and each `P^{n_i}` by a
//! finite point set closed under the fibre action. Δ acts freely through
//! translations on the base, so every orbit has exactly `|Δ|` elements.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::classify::FibrationClass;
use crate::error::{Error, Result};
use crate::proj::{fixed_points, proj_order, Mat, ProjMap, ProjPoint, DEFAULT_ORDER_CAP};
use crate::report::Entry;
use crate::torsion::TorsionPoint;

/// Upper bound on `|A_0 model| · ∏ |S_i|`.
pub const MAX_MODEL_POINTS: usize = 1 << 21;

fn default_dim() -> u32 {
    1
}

/// A generator `a = b_1 + ⋯ + b_r` of Δ: its translation on the base and,
/// for each factor, the exponents of that factor's class generators giving
/// the action of `b_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaGenerator {
    pub base: Vec<TorsionPoint>,
    pub actions: Vec<Vec<u32>>,
}

/// Input description of a finite model.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub level: u32,
    /// `d`, with the base modeled as `E[N]^d`.
    #[serde(default = "default_dim")]
    pub dim: u32,
    pub factors: Vec<FibrationClass>,
    pub delta0: Vec<DeltaGenerator>,
}

/// A point of the base model together with one sample index per factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ModelPoint {
    pub base: Vec<i64>,
    pub fibers: Vec<usize>,
}

/// A Δ-orbit, sorted; the representative is its least element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OrbitClass {
    pub representative: ModelPoint,
    pub orbit: Vec<ModelPoint>,
}

impl OrbitClass {
    fn from_points(mut orbit: Vec<ModelPoint>) -> Self {
        orbit.sort();
        orbit.dedup();
        OrbitClass { representative: orbit[0].clone(), orbit }
    }

    /// Sorted base coordinates met by the orbit.
    pub fn base_orbit(&self) -> Vec<Vec<i64>> {
        let s: BTreeSet<_> = self.orbit.iter().map(|p| p.base.clone()).collect();
        s.into_iter().collect()
    }
}

#[derive(Clone, Debug)]
pub struct FiniteModel {
    spec: ModelSpec,
    samples: Vec<Vec<ProjPoint>>,
    /// Elements of Δ as base translations, sorted; index 0 is zero.
    elements: Vec<Vec<i64>>,
    /// `action[e][i][p]`: image of sample `p` of factor `i` under element `e`.
    action: Vec<Vec<Vec<usize>>>,
    /// `transport[e][i][p]`: the same for `-e`, used to move fibres back.
    transport: Vec<Vec<Vec<usize>>>,
}

fn base_residues(p: &[TorsionPoint], n: i64) -> Result<Vec<i64>> {
    let mut out = Vec::with_capacity(2 * p.len());
    for q in p {
        for c in [q.a(), q.b()] {
            let x = c * n;
            if !x.is_integer() {
                return Err(Error::LevelIncompatible);
            }
            out.push(x.to_integer().rem_euclid(n));
        }
    }
    Ok(out)
}

fn word(cls: &FibrationClass, exps: &[u32], conductor: u32) -> Result<ProjMap> {
    if exps.len() != cls.generators.len() {
        return Err(Error::DimMismatch(exps.len(), cls.generators.len()));
    }
    let mut m = ProjMap::identity(cls.n as usize + 1, conductor);
    for (g, &e) in cls.generators.iter().zip(exps) {
        m = m.compose(&g.embed(conductor)?.pow(e))?;
    }
    Ok(m)
}

fn factor_conductor(cls: &FibrationClass) -> u32 {
    cls.generators.iter().fold(1, |l, g| l.lcm(&g.conductor()))
}

/// Coordinate points, the all-ones point, `[1:2:…:n+1]` and the isolated
/// fixed points of the generators, closed under the generators.
fn sample_points(cls: &FibrationClass, conductor: u32) -> Result<Vec<ProjPoint>> {
    let dim = cls.n as usize + 1;
    let gens = cls
        .generators
        .iter()
        .map(|g| g.embed(conductor))
        .collect::<Result<Vec<_>>>()?;
    let mut seeds: Vec<ProjPoint> = (0..dim).map(|i| ProjPoint::coordinate(dim, conductor, i)).collect();
    seeds.push(ProjPoint::from_ints(conductor, &vec![1; dim])?);
    seeds.push(ProjPoint::from_ints(conductor, &(1..=dim as i64).collect::<Vec<_>>())?);
    for g in &gens {
        match fixed_points(g) {
            Ok(f) => seeds.extend(f.into_iter().map(|p| p.embed(conductor)).collect::<Result<Vec<_>>>()?),
            Err(Error::NonIsolatedFixedLocus) => {}
            Err(e) => return Err(e),
        }
    }
    let mut seen: BTreeSet<ProjPoint> = BTreeSet::new();
    let mut frontier = seeds;
    while let Some(p) = frontier.pop() {
        if !seen.insert(p.clone()) {
            continue;
        }
        for g in &gens {
            frontier.push(g.apply(&p)?);
        }
    }
    Ok(seen.into_iter().collect())
}

impl FiniteModel {
    /// Validates the spec and tabulates the Δ-action on every sample set.
    pub fn build(spec: ModelSpec) -> Result<Self> {
        if spec.level == 0 || spec.dim == 0 {
            return Err(Error::LevelIncompatible);
        }
        let n = spec.level as i64;
        let r = spec.factors.len();
        let rank = 2 * spec.dim as usize;
        let conductors: Vec<u32> = spec.factors.iter().map(factor_conductor).collect();

        struct Gen {
            base: Vec<i64>,
            maps: Vec<ProjMap>,
        }
        let mut gens = Vec::new();
        for g in &spec.delta0 {
            if g.base.len() != spec.dim as usize {
                return Err(Error::DimMismatch(g.base.len(), spec.dim as usize));
            }
            if g.actions.len() != r {
                return Err(Error::DimMismatch(g.actions.len(), r));
            }
            let base = base_residues(&g.base, n)?;
            let base_order = base.iter().fold(1, |o: i64, &x| o.lcm(&(n / x.gcd(&n))));
            let mut maps = Vec::new();
            for ((cls, exps), &l) in spec.factors.iter().zip(&g.actions).zip(&conductors) {
                let m = word(cls, exps, l)?;
                if base_order % proj_order(&m, DEFAULT_ORDER_CAP)? as i64 != 0 {
                    return Err(Error::ActionOrderMismatch);
                }
                maps.push(m);
            }
            gens.push(Gen { base, maps });
        }

        let samples = spec
            .factors
            .iter()
            .zip(&conductors)
            .map(|(c, &l)| sample_points(c, l))
            .collect::<Result<Vec<_>>>()?;
        let total = samples
            .iter()
            .try_fold((n as usize).checked_pow(rank as u32).unwrap_or(usize::MAX), |acc, s| {
                acc.checked_mul(s.len())
            });
        if total.is_none_or(|t| t > MAX_MODEL_POINTS) {
            return Err(Error::EnumerationTooLarge(format!("more than {MAX_MODEL_POINTS} model points")));
        }

        // Closure of Δ over (translation, fibre maps); a base element reached
        // twice must carry the same fibre maps.
        let zero = vec![0; rank];
        let ident: Vec<ProjMap> = spec
            .factors
            .iter()
            .zip(&conductors)
            .map(|(c, &l)| ProjMap::identity(c.n as usize + 1, l))
            .collect();
        let mut group: BTreeMap<Vec<i64>, Vec<ProjMap>> = BTreeMap::from([(zero.clone(), ident)]);
        let mut frontier = vec![zero];
        while let Some(x) = frontier.pop() {
            let xm = group[&x].clone();
            for g in &gens {
                let y: Vec<i64> = x.iter().zip(&g.base).map(|(a, b)| (a + b).rem_euclid(n)).collect();
                let ym = xm.iter().zip(&g.maps).map(|(a, b)| a.compose(b)).collect::<Result<Vec<_>>>()?;
                match group.get(&y) {
                    Some(old) => {
                        for (p, q) in old.iter().zip(&ym) {
                            if !crate::proj::proj_eq(p, q)? {
                                return Err(Error::InconsistentAction);
                            }
                        }
                    }
                    None => {
                        group.insert(y.clone(), ym);
                        frontier.push(y);
                    }
                }
            }
        }

        let index: Vec<BTreeMap<&ProjPoint, usize>> =
            samples.iter().map(|s| s.iter().enumerate().map(|(i, p)| (p, i)).collect()).collect();
        let table = |m: &ProjMap, i: usize| -> Result<Vec<usize>> {
            samples[i]
                .iter()
                .map(|p| {
                    let q = m.apply(p)?;
                    index[i].get(&q).copied().ok_or(Error::InconsistentAction)
                })
                .collect()
        };
        let mut elements = Vec::new();
        let mut action = Vec::new();
        let mut transport = Vec::new();
        for (x, maps) in &group {
            elements.push(x.clone());
            action.push(maps.iter().enumerate().map(|(i, m)| table(m, i)).collect::<Result<Vec<_>>>()?);
            transport.push(
                maps.iter()
                    .enumerate()
                    .map(|(i, m)| table(&m.inverse(), i))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        Ok(FiniteModel { spec, samples, elements, action, transport })
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn level(&self) -> u32 {
        self.spec.level
    }

    pub fn factor_count(&self) -> usize {
        self.spec.factors.len()
    }

    /// `|Δ|`.
    pub fn delta_order(&self) -> usize {
        self.elements.len()
    }

    /// Base translations of Δ, sorted.
    pub fn delta_elements(&self) -> &[Vec<i64>] {
        &self.elements
    }

    pub fn samples(&self, factor: usize) -> &[ProjPoint] {
        &self.samples[factor]
    }

    /// All points of `(Z/N)^{2d}` in lexicographic order.
    pub fn base_points(&self) -> Vec<Vec<i64>> {
        let n = self.spec.level as i64;
        let rank = 2 * self.spec.dim as usize;
        let mut out = vec![vec![]];
        for _ in 0..rank {
            out = out
                .into_iter()
                .flat_map(|v: Vec<i64>| {
                    (0..n).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    }

    fn translate(&self, e: usize, base: &[i64]) -> Vec<i64> {
        let n = self.spec.level as i64;
        base.iter().zip(&self.elements[e]).map(|(a, b)| (a + b).rem_euclid(n)).collect()
    }

    /// Replaces the backward transport of the first nontrivial element on the
    /// last factor by the identity. Negative control for
    /// [`check_universal_property`].
    pub fn corrupt_transport(&mut self) {
        if let (Some(t), Some(r)) = (self.transport.get_mut(1), self.spec.factors.len().checked_sub(1)) {
            t[r] = (0..t[r].len()).collect();
        }
    }
}

/// The Δ-orbit of `point` in the combined model.
pub fn orbit_of(model: &FiniteModel, point: &ModelPoint) -> OrbitClass {
    OrbitClass::from_points(
        (0..model.elements.len())
            .map(|e| ModelPoint {
                base: model.translate(e, &point.base),
                fibers: point.fibers.iter().enumerate().map(|(i, &p)| model.action[e][i][p]).collect(),
            })
            .collect(),
    )
}

/// The Δ-orbit of `(base, sample)` in factor `factor` (0-based).
pub fn factor_orbit(model: &FiniteModel, factor: usize, base: &[i64], sample: usize) -> OrbitClass {
    OrbitClass::from_points(
        (0..model.elements.len())
            .map(|e| ModelPoint { base: model.translate(e, base), fibers: vec![model.action[e][factor][sample]] })
            .collect(),
    )
}

/// Image of a combined class in the quotient of factor `factor` (0-based).
pub fn project_factor(model: &FiniteModel, cls: &OrbitClass, factor: usize) -> OrbitClass {
    let rep = &cls.representative;
    factor_orbit(model, factor, &rep.base, rep.fibers[factor])
}

/// The combined class over a compatible tuple of factor classes, built from
/// their representatives. See [`psi_construct_at`].
pub fn psi_construct(model: &FiniteModel, classes: &[OrbitClass]) -> Result<OrbitClass> {
    psi_construct_at(model, classes, &vec![0; classes.len()])
}

/// Ψ with `(x_i, α_i) = classes[i].orbit[choice[i]]`: keep the base point
/// `x_1` and move each `(x_i, α_i)` back to `x_1` along the element
/// `a_i = x_i - x_1` of Δ.
pub fn psi_construct_at(model: &FiniteModel, classes: &[OrbitClass], choice: &[usize]) -> Result<OrbitClass> {
    let r = model.factor_count();
    if classes.len() != r || choice.len() != r {
        return Err(Error::DimMismatch(classes.len(), r));
    }
    let Some(first) = classes.first() else {
        return Ok(orbit_of(model, &ModelPoint { base: vec![0; 2 * model.spec.dim as usize], fibers: vec![] }));
    };
    let base_orbit = first.base_orbit();
    if classes.iter().any(|c| c.base_orbit() != base_orbit) {
        return Err(Error::Incompatible);
    }
    let pick = |i: usize| classes[i].orbit.get(choice[i]).ok_or(Error::DimMismatch(choice[i], classes[i].orbit.len()));
    let n = model.level() as i64;
    let x1 = pick(0)?.base.clone();
    let mut fibers = Vec::with_capacity(r);
    for i in 0..r {
        let p = pick(i)?;
        let a: Vec<i64> = p.base.iter().zip(&x1).map(|(u, v)| (u - v).rem_euclid(n)).collect();
        let e = model.elements.binary_search(&a).map_err(|_| Error::NoTransport)?;
        fibers.push(model.transport[e][i][p.fibers[0]]);
    }
    Ok(orbit_of(model, &ModelPoint { base: x1, fibers }))
}

/// Outcome of [`check_universal_property`].
#[derive(Clone, Debug, Serialize)]
pub struct UniversalPropertyReport {
    pub entries: Vec<Entry>,
    pub delta_order: usize,
    pub combined_classes: usize,
    pub compatible_tuples: usize,
}

/// All combined classes, enumerated over `base × ∏ samples`.
pub fn combined_classes(model: &FiniteModel) -> Vec<OrbitClass> {
    let mut tuples: Vec<Vec<usize>> = vec![vec![]];
    for s in &model.samples {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                (0..s.len()).map(move |p| {
                    let mut u = t.clone();
                    u.push(p);
                    u
                })
            })
            .collect();
    }
    let mut visited = std::collections::HashSet::new();
    let mut out = Vec::new();
    for base in model.base_points() {
        for t in &tuples {
            let p = ModelPoint { base: base.clone(), fibers: t.clone() };
            if !visited.contains(&p) {
                let o = orbit_of(model, &p);
                visited.extend(o.orbit.iter().cloned());
                out.push(o);
            }
        }
    }
    out.sort();
    out
}

/// All classes of factor `factor`.
pub fn factor_classes(model: &FiniteModel, factor: usize) -> Vec<OrbitClass> {
    let mut out = BTreeSet::new();
    for base in model.base_points() {
        for p in 0..model.samples[factor].len() {
            out.insert(factor_orbit(model, factor, &base, p));
        }
    }
    out.into_iter().collect()
}

/// Checks existence, uniqueness and commutation of Ψ over every compatible
/// tuple of factor classes, plus freeness and the cardinality identity.
pub fn check_universal_property(model: &FiniteModel) -> UniversalPropertyReport {
    let r = model.factor_count();
    let order = model.delta_order();
    let combined = combined_classes(model);
    let factors: Vec<Vec<OrbitClass>> = (0..r).map(|i| factor_classes(model, i)).collect();
    let mut entries = Vec::new();

    let free = combined.iter().chain(factors.iter().flatten()).all(|c| c.orbit.len() == order);
    entries.push(Entry::check("fiber.freeness", free, format!("every orbit has {order} elements")));

    let mut well_defined = true;
    let mut base_ok = true;
    let mut section_ok = true;
    let mut preimages: HashMap<Vec<OrbitClass>, Vec<&OrbitClass>> = HashMap::new();
    for c in &combined {
        let proj: Vec<OrbitClass> = (0..r).map(|i| project_factor(model, c, i)).collect();
        for e in &c.orbit {
            let other = orbit_of(model, e);
            well_defined &= (0..r).all(|i| project_factor(model, &other, i) == proj[i]);
        }
        base_ok &= proj.iter().all(|p| p.base_orbit() == c.base_orbit());
        section_ok &= psi_construct(model, &proj).is_ok_and(|x| &x == c);
        preimages.entry(proj).or_default().push(c);
    }
    entries.push(Entry::check("fiber.project.well_defined", well_defined, "projection independent of representative"));
    entries.push(Entry::check("fiber.project.base", base_ok, "projections lie over the same base orbit"));
    entries.push(Entry::check("fiber.psi.section", section_ok, "Ψ(p_1(z), …, p_r(z)) = z"));

    let mut by_base: BTreeMap<Vec<Vec<i64>>, Vec<Vec<&OrbitClass>>> = BTreeMap::new();
    for (i, fc) in factors.iter().enumerate() {
        for c in fc {
            let slot = by_base.entry(c.base_orbit()).or_insert_with(|| vec![vec![]; r]);
            slot[i].push(c);
        }
    }
    let mut compatible = 0usize;
    let (mut exists, mut unique, mut commutes) = (true, true, true);
    for lists in by_base.values() {
        let mut tuples: Vec<Vec<OrbitClass>> = vec![vec![]];
        for l in lists {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    l.iter().map(move |c| {
                        let mut u = t.clone();
                        u.push((*c).clone());
                        u
                    })
                })
                .collect();
        }
        for t in tuples {
            compatible += 1;
            // every choice of representatives, so each transport element is used
            let mut choices: Vec<Vec<usize>> = vec![vec![]];
            for c in &t {
                choices = choices
                    .into_iter()
                    .flat_map(|ch| {
                        (0..c.orbit.len()).map(move |k| {
                            let mut v = ch.clone();
                            v.push(k);
                            v
                        })
                    })
                    .collect();
            }
            for ch in choices {
                match psi_construct_at(model, &t, &ch) {
                    Ok(z) => {
                        exists &= combined.binary_search(&z).is_ok();
                        unique &= preimages.get(&t).is_some_and(|p| p.len() == 1 && *p[0] == z);
                        commutes &= (0..r).all(|i| project_factor(model, &z, i) == t[i]);
                    }
                    Err(_) => {
                        exists = false;
                        unique = false;
                        commutes = false;
                    }
                }
            }
        }
    }
    if r == 0 {
        compatible = combined.len();
    }
    entries.push(Entry::check("fiber.psi.existence", exists, "every compatible tuple has a combined class"));
    entries.push(Entry::check("fiber.psi.uniqueness", unique, "Ψ is the only class over each tuple"));
    entries.push(Entry::check("fiber.psi.commutation", commutes, "p_i ∘ Ψ = identity on inputs"));
    entries.push(Entry::check(
        "fiber.cardinality",
        combined.len() == compatible,
        format!("{} combined classes, {compatible} compatible tuples", combined.len()),
    ));
    UniversalPropertyReport { entries, delta_order: order, combined_classes: combined.len(), compatible_tuples: compatible }
}

/// `r` copies of the case-2 action on `P^1` over `E[2]`, with Δ generated
/// by the 2-torsion point `(1/2, 0)` acting by `diag(1, -1)` on each fibre.
pub fn case2_model_spec(r: usize) -> ModelSpec {
    let alt = ProjMap::new(Mat::from_ints(1, &[&[1, 0], &[0, -1]])).expect("invertible");
    let half = TorsionPoint::frac(1, 0, 2);
    let cls = FibrationClass {
        case: 2,
        n: 1,
        params: None,
        generators: vec![alt],
        delta_generators: vec![vec![half]],
    };
    ModelSpec {
        level: 2,
        dim: 1,
        factors: vec![cls; r],
        delta0: vec![DeltaGenerator { base: vec![half], actions: vec![vec![1]; r] }],
    }
}
