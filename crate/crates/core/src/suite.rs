//! The acceptance checks, runnable individually or as one report.
//!
//! Each check returns a single entry; its detail records counts so a failing
//! run says where it stopped. Nothing here reads clocks, so reports for equal
//! seeds are byte-identical.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use rand::seq::SliceRandom;

use crate::canon::canonical_commuting_pair;
use crate::classify::{standard_generators, standard_pgl2_generators, subgroup_normal_form};
use crate::cyclo::CycNum;
use crate::error::Result;
use crate::fiber::{case2_model_spec, check_universal_property, FiniteModel};
use crate::proj::{commutation_check, proj_eq, random_invertible, sym_power, Mat, ProjMap};
use crate::report::Entry;
use crate::rng;
use crate::torsion::{
    brute_force_fix_divisors, fix_divisors, fixed_group_of_unit, gamma_fixed_group, is_full_cycle,
    translation_permutation, CMCurve, TorsionPoint, Unit,
};

pub const DEFAULT_SAMPLES: usize = 50;
pub const ROUND_TRIPS: usize = 100;
pub const SAMPLED_PAIRS: usize = 20;

/// Identifier and short name of each check, in run order.
pub const CHECKS: [(u8, &str); 9] = [
    (1, "sym_power_generators"),
    (2, "commutation"),
    (3, "fix_divisors_oracle"),
    (4, "canonical_round_trip"),
    (5, "gamma_fixed_group"),
    (6, "fixed_group_orders"),
    (7, "subgroup_normal_form"),
    (8, "fiber_product"),
    (9, "translation_cycle"),
];

pub fn check_id(id: u8) -> String {
    let name = CHECKS.iter().find(|c| c.0 == id).map_or("unknown", |c| c.1);
    format!("acceptance.{id:02}.{name}")
}

/// Runs check `id` (1 to 9).
pub fn run_check(id: u8, seed: u64, samples: usize) -> Entry {
    let r = match id {
        1 => sym_power_generators(),
        2 => commutation(seed, samples),
        3 => fix_divisors_oracle(seed),
        4 => canonical_round_trip(seed),
        5 => gamma_group(),
        6 => fixed_group_orders(),
        7 => subgroup_normal_forms(),
        8 => fiber_product(),
        9 => translation_cycle(seed),
        _ => Ok((false, format!("no check {id}"))),
    };
    match r {
        Ok((ok, detail)) => Entry::check(check_id(id), ok, detail),
        Err(e) => Entry::from_result(check_id(id), Err(e), ""),
    }
}

pub fn run_suite(seed: u64, samples: usize) -> Vec<Entry> {
    CHECKS.iter().map(|&(id, _)| run_check(id, seed, samples)).collect()
}

type Outcome = Result<(bool, String)>;

fn diag_of(d: Vec<CycNum>) -> Result<ProjMap> {
    ProjMap::new(Mat::diag(&d))
}

fn sym_power_generators() -> Outcome {
    let m = |rows: &[&[i64]]| ProjMap::new(Mat::from_ints(1, rows));
    let neg = m(&[&[-1, 0], &[0, 1]])?;
    let swap = m(&[&[0, 1], &[1, 0]])?;
    let z3 = diag_of(vec![CycNum::root_of_unity(3, 1), CycNum::one(3)])?;
    let mut checked = 0;
    for n in 1..=10usize {
        let alt = diag_of((0..=n as i64).map(|i| CycNum::from_int(1, if i % 2 == 0 { 1 } else { -1 })).collect())?;
        let rev = ProjMap::new(Mat::reversal(n + 1, 1))?;
        let zd = diag_of((0..=n as i64).map(|i| CycNum::root_of_unity(3, i)).collect())?;
        for (tbar, want, label) in [(&neg, &alt, "diag(-1,1)"), (&swap, &rev, "swap"), (&z3, &zd, "diag(ζ_3,1)")] {
            if !proj_eq(&ProjMap::new(sym_power(tbar.lift(), n)?)?, want)? {
                return Ok((false, format!("sym_power({label}, {n}) differs")));
            }
            checked += 1;
        }
    }
    Ok((true, format!("{checked} symmetric powers for n = 1..10")))
}

fn commutation(seed: u64, samples: usize) -> Outcome {
    let mut checked = 0;
    for case in 2..=4u8 {
        let tbars = standard_pgl2_generators(case)?;
        for n in 1..=6u32 {
            for (k, (t, tbar)) in standard_generators(case, n)?.iter().zip(&tbars).enumerate() {
                let s = rng::sub_seed(seed, &format!("commutation/{case}/{n}/{k}"));
                if !commutation_check(t, tbar, samples, s)? {
                    return Ok((false, format!("case {case}, n = {n}, generator {k}")));
                }
                checked += 1;
            }
        }
    }
    Ok((true, format!("{checked} generators, {samples} samples each plus degenerate tuples")))
}

/// Pairs `(x, y)` generating `E[m]`.
pub fn generator_pairs(m: i64) -> Vec<(TorsionPoint, TorsionPoint)> {
    let pts: Vec<(i64, i64)> = (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for &(a, b) in &pts {
        for &(c, d) in &pts {
            if (a * d - b * c).rem_euclid(m).gcd(&m) == 1 {
                out.push((TorsionPoint::frac(a, b, m), TorsionPoint::frac(c, d, m)));
            }
        }
    }
    out
}

/// All pairs for `n <= 3`, `SAMPLED_PAIRS` seeded pairs for `n = 4`.
fn tested_pairs(seed: u64) -> Vec<(u32, Vec<(TorsionPoint, TorsionPoint)>)> {
    let mut out: Vec<_> = (1..=3u32).map(|n| (n, generator_pairs(n as i64 + 1))).collect();
    let mut r = rng::stream(seed, "generator_pairs/4");
    let sampled = generator_pairs(5).choose_multiple(&mut r, SAMPLED_PAIRS).cloned().collect();
    out.push((4, sampled));
    out
}

fn fix_divisors_oracle(seed: u64) -> Outcome {
    let mut instances = 0;
    for (n, pairs) in tested_pairs(seed) {
        let mut oracle: BTreeMap<TorsionPoint, Vec<_>> = BTreeMap::new();
        for (x, y) in &pairs {
            let mut fx = fix_divisors(n, x, y)?;
            fx.sort();
            let fy = fix_divisors(n, y, x)?;
            if !oracle.contains_key(x) {
                oracle.insert(*x, brute_force_fix_divisors(n, x)?);
            }
            if fx != oracle[x] {
                return Ok((false, format!("n = {n}, x = {x}, y = {y}: formula and search differ")));
            }
            if fx.len() != n as usize + 1 || fy.iter().any(|d| fx.contains(d)) {
                return Ok((false, format!("n = {n}, x = {x}, y = {y}: count or disjointness")));
            }
            instances += 1;
        }
    }
    Ok((true, format!("{instances} generator pairs")))
}

fn canonical_round_trip(seed: u64) -> Outcome {
    let mut done = 0;
    for n in 2..=6usize {
        // Q(ζ_12) where it contains ζ_n, else the smallest field that does
        let l = if 12 % n == 0 { 12 } else { (n as u32).lcm(&2) };
        let zn = CycNum::primitive_root(l, n as u32).expect("n divides l");
        let phi = diag_of((0..n as i64).map(|i| zn.pow(i)).collect::<Result<Vec<_>>>()?)?;
        let psi = ProjMap::new(Mat::shift(n, l))?;
        let mut r = rng::stream(seed, &format!("round_trip/{n}"));
        for k in 0..ROUND_TRIPS {
            let x = ProjMap::new(random_invertible(n, l, &mut r))?;
            let res = canonical_commuting_pair(&x.conjugate(&phi)?, &x.conjugate(&psi)?)?;
            let primitive = res.lambda.as_root_of_unity().map(|(o, _)| o as usize) == Some(n);
            if !primitive || !proj_eq(&res.phi_canon, &phi)? || !proj_eq(&res.psi_canon, &psi)? {
                return Ok((false, format!("n = {n}, conjugation {k}")));
            }
            done += 1;
        }
    }
    Ok((true, format!("{done} conjugations for n = 2..6")))
}

fn gamma_group() -> Outcome {
    let g = gamma_fixed_group();
    let half = TorsionPoint::frac(1, 1, 2);
    let zero = TorsionPoint::zero();
    let want = vec![(half, zero), (zero, half)];
    let ok = g.elements.len() == 4 && g.generators == want;
    Ok((ok, format!("{} elements, generators {:?}", g.elements.len(), g.generators)))
}

fn fixed_group_orders() -> Outcome {
    let cases = [
        (CMCurve::Generic, Unit::minus_one(), 4),
        (CMCurve::Gauss, Unit::i(), 2),
        (CMCurve::Eisenstein, Unit::zeta3(), 3),
        (CMCurve::Eisenstein, Unit::zeta6(), 1),
    ];
    let mut got = Vec::new();
    for (curve, u, _) in cases {
        got.push(fixed_group_of_unit(curve, u)?.order());
    }
    let want: Vec<usize> = cases.iter().map(|c| c.2).collect();
    Ok((got == want, format!("orders {got:?} for -1, i, ζ_3, ζ_6")))
}

fn span_mod(m: i64, gens: &[(i64, i64)]) -> BTreeSet<(i64, i64)> {
    let mut seen = BTreeSet::from([(0, 0)]);
    let mut frontier = vec![(0, 0)];
    while let Some((x, y)) = frontier.pop() {
        for &(a, b) in gens {
            let z = ((x + a).rem_euclid(m), (y + b).rem_euclid(m));
            if seen.insert(z) {
                frontier.push(z);
            }
        }
    }
    seen
}

/// Subgroups of `(Z/m)²` keyed by their elements, each with a generating pair.
pub type SubgroupTable = BTreeMap<BTreeSet<(i64, i64)>, [(i64, i64); 2]>;

/// Every subgroup of `(Z/m)²`, found by closing all pairs of elements,
/// with a generating pair for each.
pub fn subgroups_by_closure(m: i64) -> SubgroupTable {
    let pts: Vec<(i64, i64)> = (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).collect();
    let mut out = BTreeMap::new();
    for &g in &pts {
        for &h in &pts {
            out.entry(span_mod(m, &[g, h])).or_insert([g, h]);
        }
    }
    out
}

fn subgroup_normal_forms() -> Outcome {
    let mut total = 0;
    for m in 2..=8i64 {
        for (h, gens) in subgroups_by_closure(m) {
            let nf = subgroup_normal_form(m, &gens);
            let basis = (nf.t.0 * nf.u.1 - nf.t.1 * nf.u.0).rem_euclid(m).gcd(&m) == 1;
            let regen = span_mod(m, &[(nf.a * nf.t.0, nf.a * nf.t.1), (nf.b * nf.u.0, nf.b * nf.u.1)]);
            if m % nf.b != 0 || nf.b % nf.a != 0 || !basis || regen != h {
                return Ok((false, format!("m = {m}, subgroup generated by {gens:?}")));
            }
            total += 1;
        }
    }
    Ok((true, format!("{total} subgroups for m = 2..8")))
}

fn fiber_product() -> Outcome {
    let mut model = FiniteModel::build(case2_model_spec(2))?;
    let rep = check_universal_property(&model);
    let clean = rep.entries.iter().all(Entry::passed) && rep.combined_classes == rep.compatible_tuples;
    model.corrupt_transport();
    let bad = check_universal_property(&model);
    let caught = bad.entries.iter().any(|e| e.check_id == "fiber.psi.uniqueness" && !e.passed());
    Ok((
        clean && caught,
        format!(
            "{} combined classes, {} compatible tuples; corrupted transport {}",
            rep.combined_classes,
            rep.compatible_tuples,
            if caught { "rejected" } else { "accepted" }
        ),
    ))
}

fn translation_cycle(seed: u64) -> Outcome {
    let mut checked = 0;
    for (n, pairs) in tested_pairs(seed) {
        for (x, y) in &pairs {
            let p = translation_permutation(n, x, y)?;
            let no_fixed = p.iter().enumerate().all(|(i, &j)| i != j);
            if p.len() != n as usize + 1 || !is_full_cycle(&p) || !no_fixed {
                return Ok((false, format!("n = {n}, x = {x}, y = {y}")));
            }
            checked += 1;
        }
    }
    Ok((true, format!("{checked} generator pairs for n = 1..4")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_pair_counts() {
        // |GL_2(Z/m)|
        assert_eq!(generator_pairs(2).len(), 6);
        assert_eq!(generator_pairs(3).len(), 48);
        assert_eq!(generator_pairs(4).len(), 96);
    }

    #[test]
    fn cheap_checks_pass() {
        for id in [1, 5, 6] {
            let e = run_check(id, 0, 1);
            assert!(e.passed(), "{e:?}");
        }
        assert!(!run_check(42, 0, 1).passed());
    }
}
