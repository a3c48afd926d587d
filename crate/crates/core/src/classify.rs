//! Classification of the gluing group: from a pair specification and a
//! subgroup Δ of its fixed-point group to one of the five normal forms,
//! with the defining identities re-verified.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::canon::{
    canonical_commuting_pair, canonical_cyclic_pgl2, canonical_involutions_pgl3, canonical_klein_pgl2,
};
use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::proj::{
    commutation_check, fixed_points, generated_order, proj_eq, proj_order, sym_power, Mat, ProjMap,
    DEFAULT_ORDER_CAP,
};
use crate::report::{Entry, Status};
use crate::smith::smith;
use crate::torsion::{
    brute_force_fix_divisors, fix_divisors, fixed_group_of_unit, gamma_fixed_group, is_full_cycle,
    torsion_points, translation_permutation, CMCurve, TorsionPoint, Unit, BRUTE_FORCE_MAX_N,
};

/// A pair `(P_G, G)` of type α, β or γ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum PairSpec {
    Alpha { n: u32, c_order: u32, curve: CMCurve },
    Beta { n: u32, curve: CMCurve },
    Gamma,
}

impl PairSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |s: &str| Err(Error::InvalidPair(s.into()));
        match *self {
            PairSpec::Alpha { n, c_order, curve } => {
                if n == 0 {
                    return bad("n must be positive");
                }
                match (c_order, curve) {
                    (2, _) | (3 | 6, CMCurve::Eisenstein) | (4, CMCurve::Gauss) => Ok(()),
                    (3 | 4 | 6, _) => bad("c_order does not match the curve"),
                    _ => bad("c_order must be 2, 3, 4 or 6"),
                }
            }
            PairSpec::Beta { n: 0, .. } => bad("n must be positive"),
            _ => Ok(()),
        }
    }

    /// Dimension of the fibre `P^n`.
    pub fn n(&self) -> u32 {
        match *self {
            PairSpec::Alpha { n, .. } | PairSpec::Beta { n, .. } => n,
            PairSpec::Gamma => 2,
        }
    }

    /// Points per element of `P_G^G`: one for α/β (diagonal), two for γ.
    fn element_len(&self) -> usize {
        if matches!(self, PairSpec::Gamma) {
            2
        } else {
            1
        }
    }
}

/// An element of `P_G^G`: one point for α/β, a pair for γ.
pub type DeltaElement = Vec<TorsionPoint>;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaSubgroup {
    pub generators: Vec<DeltaElement>,
}

fn add_elements(x: &DeltaElement, y: &DeltaElement) -> DeltaElement {
    x.iter().zip(y).map(|(a, b)| a.add(b)).collect()
}

/// Elements of the subgroup generated by `gens`, sorted.
pub fn element_span(gens: &[DeltaElement], len: usize) -> Vec<DeltaElement> {
    let zero = vec![TorsionPoint::zero(); len];
    let mut seen = BTreeSet::from([zero.clone()]);
    let mut frontier = vec![zero];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = add_elements(&x, g);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen.into_iter().collect()
}

/// `P_G^G` with generators and invariant factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedGroup {
    pub generators: Vec<DeltaElement>,
    pub invariant_factors: Vec<i64>,
    pub elements: Vec<DeltaElement>,
}

pub fn fixed_group(pair: &PairSpec) -> Result<FixedGroup> {
    pair.validate()?;
    let wrap = |g: crate::torsion::FiniteGroup<TorsionPoint>| FixedGroup {
        generators: g.generators.into_iter().map(|p| vec![p]).collect(),
        invariant_factors: g.invariant_factors,
        elements: g.elements.into_iter().map(|p| vec![p]).collect(),
    };
    Ok(match *pair {
        PairSpec::Alpha { c_order, curve, .. } => wrap(fixed_group_of_unit(curve, Unit::new(c_order, 1))?),
        PairSpec::Beta { n, .. } => {
            let m = n as i64 + 1;
            FixedGroup {
                generators: vec![vec![TorsionPoint::frac(1, 0, m)], vec![TorsionPoint::frac(0, 1, m)]],
                invariant_factors: vec![m, m],
                elements: torsion_points(m).into_iter().map(|p| vec![p]).collect(),
            }
        }
        PairSpec::Gamma => {
            let g = gamma_fixed_group();
            FixedGroup {
                generators: g.generators.iter().map(|p| vec![p.0, p.1]).collect(),
                invariant_factors: g.invariant_factors,
                elements: g.elements.iter().map(|p| vec![p.0, p.1]).collect(),
            }
        }
    })
}

/// `H = ⟨a·t, b·u⟩ ⊂ (Z/m)²` with `a | b | m` and `(t, u)` a basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupNormalForm {
    pub a: i64,
    pub b: i64,
    pub t: (i64, i64),
    pub u: (i64, i64),
}

pub fn subgroup_normal_form(m: i64, gens: &[(i64, i64)]) -> SubgroupNormalForm {
    let mut rows: Vec<Vec<i64>> = gens.iter().map(|&(x, y)| vec![x.rem_euclid(m), y.rem_euclid(m)]).collect();
    rows.push(vec![m, 0]);
    rows.push(vec![0, m]);
    let s = smith(&rows, 2);
    let r = |i: usize| (s.v_inv[i][0].rem_euclid(m), s.v_inv[i][1].rem_euclid(m));
    SubgroupNormalForm { a: s.d[0], b: s.d[1], t: r(0), u: r(1) }
}

/// Parameters `(a, b)` of case 5.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseParams {
    pub a: u32,
    pub b: u32,
}

/// One of the five normal forms for the action of Δ on the fibre.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FibrationClass {
    pub case: u8,
    pub n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<CaseParams>,
    /// Maps of `P^n`, one per entry of `delta_generators`.
    pub generators: Vec<ProjMap>,
    /// Elements of Δ acting by the corresponding generator.
    pub delta_generators: Vec<DeltaElement>,
}

impl FibrationClass {
    /// Order of Δ, read from the generators.
    pub fn group_order(&self) -> Result<usize> {
        generated_order(&self.generators, 4096)
    }
}

fn alternating(n: u32) -> ProjMap {
    let d: Vec<CycNum> = (0..=n).map(|i| CycNum::from_int(1, if i % 2 == 0 { 1 } else { -1 })).collect();
    ProjMap::new(Mat::diag(&d)).expect("invertible")
}

fn reversal(n: u32) -> ProjMap {
    ProjMap::new(Mat::reversal(n as usize + 1, 1)).expect("invertible")
}

fn zeta3_diagonal(n: u32) -> ProjMap {
    let d: Vec<CycNum> = (0..=n as i64).map(|i| CycNum::root_of_unity(3, i)).collect();
    ProjMap::new(Mat::diag(&d)).expect("invertible")
}

/// Generators of the normal form on `P^n` for cases 1 to 4: none,
/// `diag(1,-1,…)`, `diag(1,ζ_3,…,ζ_3^n)`, and `diag(1,-1,…)` with the reversal.
pub fn standard_generators(case: u8, n: u32) -> Result<Vec<ProjMap>> {
    Ok(match case {
        1 => vec![],
        2 => vec![alternating(n)],
        3 => vec![zeta3_diagonal(n)],
        4 => vec![alternating(n), reversal(n)],
        _ => return Err(Error::InvalidPair(format!("case {case} has no fixed generators"))),
    })
}

/// The `PGL_2` elements whose symmetric powers are [`standard_generators`]:
/// `diag(-1,1)`, `diag(ζ_3,1)`, and `diag(-1,1)` with the swap.
pub fn standard_pgl2_generators(case: u8) -> Result<Vec<ProjMap>> {
    let m = |rows: &[&[i64]]| ProjMap::new(Mat::from_ints(1, rows)).expect("invertible");
    let z3 = ProjMap::new(Mat::diag(&[CycNum::root_of_unity(3, 1), CycNum::one(3)])).expect("invertible");
    Ok(match case {
        1 => vec![],
        2 => vec![m(&[&[-1, 0], &[0, 1]])],
        3 => vec![z3],
        4 => vec![m(&[&[-1, 0], &[0, 1]]), m(&[&[0, 1], &[1, 0]])],
        _ => return Err(Error::InvalidPair(format!("case {case} has no PGL_2 model"))),
    })
}

/// `δ = diag(1, ζ^a, …, ζ^{an})` and the `b`-step shift `δ′` with
/// `[z_0:…:z_n] ↦ [z_{n+1-b}:…:z_n:z_0:…:z_{n-b}]`, at conductor `n+1`.
pub fn case5_generators(n: u32, a: u32, b: u32) -> (ProjMap, ProjMap) {
    let m = n as usize + 1;
    let l = m as u32;
    let d: Vec<CycNum> = (0..m as i64).map(|i| CycNum::root_of_unity(l, a as i64 * i)).collect();
    let shift = Mat::from_fn(m, l, |i, j| {
        if j == (i + m - b as usize % m) % m {
            CycNum::one(l)
        } else {
            CycNum::zero(l)
        }
    });
    (ProjMap::new(Mat::diag(&d)).expect("invertible"), ProjMap::new(shift).expect("invertible"))
}

fn point_ints(p: &TorsionPoint, m: i64) -> Result<(i64, i64)> {
    let (a, b) = (p.a() * m, p.b() * m);
    if !a.is_integer() || !b.is_integer() {
        return Err(Error::NotASubgroup);
    }
    Ok((a.to_integer(), b.to_integer()))
}

pub fn classify(pair: &PairSpec, delta: &DeltaSubgroup) -> Result<FibrationClass> {
    let fixed = fixed_group(pair)?;
    let len = pair.element_len();
    for g in &delta.generators {
        if g.len() != len {
            return Err(Error::InvalidPair(format!("generator has {} points, expected {len}", g.len())));
        }
        if fixed.elements.binary_search(g).is_err() {
            return Err(Error::NotASubgroup);
        }
    }
    let n = pair.n();
    let elements = element_span(&delta.generators, len);
    let order = elements.len();
    let nonzero: Vec<DeltaElement> = elements.iter().filter(|e| e.iter().any(|p| !p.is_zero())).cloned().collect();
    let class = |case, generators, delta_generators| FibrationClass {
        case,
        n,
        params: None,
        generators,
        delta_generators,
    };
    let mismatch = || Error::InvariantMismatch(format!("unexpected |Δ| = {order} for {pair:?}"));

    if let PairSpec::Beta { .. } = pair {
        let m = n as i64 + 1;
        if order == 1 {
            return Ok(class(1, vec![], vec![]));
        }
        let ints = delta
            .generators
            .iter()
            .map(|g| point_ints(&g[0], m))
            .collect::<Result<Vec<_>>>()?;
        let nf = subgroup_normal_form(m, &ints);
        let (d, dp) = case5_generators(n, nf.a as u32, nf.b as u32);
        let to_point = |(x, y): (i64, i64), k: i64| vec![TorsionPoint::frac(x * k, y * k, m)];
        return Ok(FibrationClass {
            case: 5,
            n,
            params: Some(CaseParams { a: nf.a as u32, b: nf.b as u32 }),
            generators: vec![d, dp],
            delta_generators: vec![to_point(nf.t, nf.a), to_point(nf.u, nf.b)],
        });
    }

    let basis = klein_basis(&elements);
    match (pair, order) {
        (_, 1) => Ok(class(1, vec![], vec![])),
        (PairSpec::Alpha { c_order: 3, .. }, 3) => Ok(class(3, vec![zeta3_diagonal(n)], vec![nonzero[0].clone()])),
        (PairSpec::Alpha { c_order: 2 | 4, .. } | PairSpec::Gamma, 2) => {
            Ok(class(2, vec![alternating(n)], vec![nonzero[0].clone()]))
        }
        (PairSpec::Alpha { c_order: 2, .. } | PairSpec::Gamma, 4) => {
            Ok(class(4, vec![alternating(n), reversal(n)], basis))
        }
        _ => Err(mismatch()),
    }
}

/// Two generators of a Klein four-group given by its elements: the first
/// two nonzero elements in descending order.
fn klein_basis(elements: &[DeltaElement]) -> Vec<DeltaElement> {
    let mut nz: Vec<DeltaElement> = elements.iter().filter(|e| e.iter().any(|p| !p.is_zero())).cloned().collect();
    nz.sort_by(|x, y| y.cmp(x));
    nz.truncate(2);
    nz
}

/// `PGL_2` representatives `t̄` with `sym_power(t̄, n) ≡` the class generators.
pub fn pgl2_representatives(case: u8) -> Result<Vec<ProjMap>> {
    let m = |rows: &[&[i64]]| ProjMap::new(Mat::from_ints(1, rows));
    Ok(match case {
        1 => vec![],
        2 => {
            let model = m(&[&[0, 1], &[-1, 0]])?;
            vec![canonical_cyclic_pgl2(&model)?.conjugate(&model.embed(12)?)?]
        }
        3 => {
            let model = m(&[&[0, -1], &[1, -1]])?;
            vec![canonical_cyclic_pgl2(&model)?.conjugate(&model.embed(12)?)?]
        }
        4 => {
            let (a, b) = (m(&[&[0, 1], &[-1, 0]])?, m(&[&[0, 1], &[1, 0]])?);
            let xi = canonical_klein_pgl2(&a, &b)?;
            vec![xi.conjugate(&a.embed(12)?)?, xi.conjugate(&b.embed(12)?)?]
        }
        _ => return Err(Error::InvalidPair(format!("case {case} has no PGL_2 model"))),
    })
}

fn lcm_embed(a: &ProjMap, b: &ProjMap) -> Result<(ProjMap, ProjMap)> {
    let l = a.conductor().lcm(&b.conductor());
    Ok((a.embed(l)?, b.embed(l)?))
}

fn error_entry(id: &str, e: Error) -> Entry {
    Entry { check_id: id.into(), status: Status::Error, detail: e.to_string() }
}

/// Re-verifies the identities behind a class; failures become entries.
pub fn verify_class(pair: &PairSpec, cls: &FibrationClass, samples: usize, seed: u64) -> Vec<Entry> {
    let mut out = Vec::new();
    let expected = match pair {
        PairSpec::Beta { .. } if cls.case == 5 => {
            let (p, n) = (cls.params, cls.n as usize + 1);
            p.map(|p| (n / p.a as usize) * (n / p.b as usize))
        }
        _ => match cls.case {
            1 => Some(1),
            2 => Some(2),
            3 => Some(3),
            4 => Some(4),
            _ => None,
        },
    };
    out.push(match (cls.group_order(), expected) {
        (Ok(k), Some(e)) => Entry::check("class.group_order", k == e, format!("generated {k}, expected {e}")),
        (Ok(k), None) => Entry::check("class.group_order", false, format!("generated {k}, no expectation")),
        (Err(e), _) => error_entry("class.group_order", e),
    });
    match pair {
        PairSpec::Beta { .. } => verify_beta(cls, &mut out),
        _ => verify_sym_power(pair, cls, samples, seed, &mut out),
    }
    out
}

fn verify_sym_power(pair: &PairSpec, cls: &FibrationClass, samples: usize, seed: u64, out: &mut Vec<Entry>) {
    let reps = match pgl2_representatives(cls.case) {
        Ok(r) => r,
        Err(e) => return out.push(error_entry("class.pgl2_model", e)),
    };
    if reps.len() != cls.generators.len() {
        out.push(Entry::check("class.generator_count", false, "generator count differs from model"));
        return;
    }
    for (i, (t, tbar)) in cls.generators.iter().zip(&reps).enumerate() {
        let id = format!("generator.{i}");
        let r: Result<bool> = (|| {
            let sp = ProjMap::new(sym_power(tbar.lift(), cls.n as usize)?)?;
            let (a, b) = lcm_embed(t, &sp)?;
            proj_eq(&a, &b)
        })();
        out.push(Entry::from_result(format!("{id}.sym_power"), r, "generator ≡ sym_power(t̄, n)"));
        out.push(Entry::from_result(
            format!("{id}.commutation"),
            commutation_check(t, tbar, samples, seed.wrapping_add(i as u64)),
            format!("T∘g = g∘t̄ on {samples} random tuples plus degenerate ones"),
        ));
    }
    if matches!(pair, PairSpec::Gamma) && !cls.generators.is_empty() {
        let r = canonical_involutions_pgl3(&cls.generators).map(|xi| xi.is_identity());
        out.push(Entry::from_result("gamma.pgl3_normal_form", r, "involutions already in normal form"));
    }
}

fn verify_beta(cls: &FibrationClass, out: &mut Vec<Entry>) {
    let Some(p) = cls.params else {
        out.push(Entry::check("beta.params", cls.case == 1, "trivial Δ carries no parameters"));
        return;
    };
    let n = cls.n;
    let m = n + 1;
    let [d, dp] = &cls.generators[..] else {
        out.push(Entry::check("beta.generator_count", false, "case 5 needs two generators"));
        return;
    };
    out.push(Entry::check(
        "beta.params.divisibility",
        m.is_multiple_of(p.b) && p.b % p.a == 0,
        format!("a = {}, b = {}, n+1 = {m}", p.a, p.b),
    ));
    out.push(Entry::from_result(
        "beta.order.delta",
        proj_order(d, DEFAULT_ORDER_CAP).map(|k| k == m / p.a),
        format!("order n+1/a = {}", m / p.a),
    ));
    out.push(Entry::from_result(
        "beta.order.delta_prime",
        proj_order(dp, DEFAULT_ORDER_CAP).map(|k| k == m / p.b),
        format!("order n+1/b = {}", m / p.b),
    ));
    out.push(Entry::from_result(
        "beta.commute",
        d.compose(dp).and_then(|x| proj_eq(&x, &dp.compose(d)?)),
        "δδ′ ≡ δ′δ",
    ));
    if (p.a, p.b) == (1, 1) {
        let fd = fixed_points(d);
        let fdp = fixed_points(dp);
        out.push(Entry::from_result(
            "beta.fixed.count",
            fd.clone().and_then(|a| Ok(a.len() == m as usize && fdp.clone()?.len() == m as usize)),
            format!("|Fix(δ)| = |Fix(δ′)| = {m}"),
        ));
        out.push(Entry::from_result(
            "beta.fixed.disjoint",
            fd.and_then(|a| Ok(fdp?.iter().all(|q| !a.contains(q)))),
            "Fix(δ) ∩ Fix(δ′) = ∅",
        ));
        out.push(Entry::from_result(
            "beta.canonical_pair",
            canonical_commuting_pair(d, dp).map(|r| r.xi.lift().is_monomial()),
            "normal form reached by a monomial conjugator",
        ));
        let (x, y) = (TorsionPoint::frac(1, 0, m as i64), TorsionPoint::frac(0, 1, m as i64));
        out.push(Entry::from_result(
            "beta.divisors.count",
            fix_divisors(n, &x, &y).map(|ds| ds.len() == m as usize && ds.iter().all(|d| d.sum().is_zero())),
            format!("{m} fixed divisors of degree {m}, point-sum 0"),
        ));
        out.push(Entry::from_result(
            "beta.divisors.disjoint",
            fix_divisors(n, &x, &y).and_then(|a| Ok(fix_divisors(n, &y, &x)?.iter().all(|d| !a.contains(d)))),
            "Fix(t) ∩ Fix(u) = ∅",
        ));
        out.push(Entry::from_result(
            "beta.divisors.cycle",
            translation_permutation(n, &x, &y).map(|p| is_full_cycle(&p)),
            "translation by y cycles Fix(t)",
        ));
        if n <= BRUTE_FORCE_MAX_N {
            out.push(Entry::from_result(
                "beta.divisors.oracle",
                fix_divisors(n, &x, &y).and_then(|mut a| {
                    a.sort();
                    Ok(a == brute_force_fix_divisors(n, &x)?)
                }),
                "formula agrees with exhaustive search",
            ));
        }
    }
}
