use std::collections::BTreeSet;

use num_integer::Integer;
use quotfib::torsion::{
    brute_force_fix_divisors, cm_action, fix_divisors, fixed_group_of_unit, gamma_fixed_group, is_full_cycle,
    solve_translation_start, torsion_points, translation_permutation, CMCurve, Divisor, PointPair,
    TorsionPoint, Unit, GAMMA_GENERATORS,
};
use quotfib::Error;

fn p(a: i64, b: i64, d: i64) -> TorsionPoint {
    TorsionPoint::frac(a, b, d)
}

// Multiplication by u = e^{2πi·j/k} computed with complex floats: write
// P = a + bτ, multiply, and read lattice coordinates back on the 1/12 grid.
fn float_action(curve: CMCurve, u: Unit, pt: &TorsionPoint) -> TorsionPoint {
    use std::f64::consts::PI;
    let tau = match curve {
        CMCurve::Gauss => (0.0, 1.0),
        CMCurve::Eisenstein => (0.5, 3f64.sqrt() / 2.0),
        CMCurve::Generic => (0.3, 1.7),
    };
    let to_f = |r: num_rational::Rational64| *r.numer() as f64 / *r.denom() as f64;
    let (a, b) = (to_f(pt.a()), to_f(pt.b()));
    let z = (a + b * tau.0, b * tau.1);
    let th = 2.0 * PI * u.exponent as f64 / u.order as f64;
    let w = (z.0 * th.cos() - z.1 * th.sin(), z.0 * th.sin() + z.1 * th.cos());
    let b2 = w.1 / tau.1;
    let a2 = w.0 - b2 * tau.0;
    p((a2 * 12.0).round() as i64, (b2 * 12.0).round() as i64, 12)
}

fn units_for(curve: CMCurve) -> Vec<Unit> {
    let w = curve.automorphism_order();
    (1..w).map(|e| Unit::new(w, e)).collect()
}

#[test]
fn cm_action_matches_complex_multiplication() {
    for curve in [CMCurve::Gauss, CMCurve::Eisenstein, CMCurve::Generic] {
        for u in units_for(curve) {
            for pt in torsion_points(12) {
                assert_eq!(cm_action(curve, u, &pt).unwrap(), float_action(curve, u, &pt), "{curve:?} {u:?} {pt}");
            }
        }
    }
    assert_eq!(cm_action(CMCurve::Generic, Unit::i(), &p(1, 0, 2)).unwrap_err(), Error::InvalidUnit);
}

#[test]
fn fixed_groups_match_exhaustive_search() {
    let grid = torsion_points(12);
    for curve in [CMCurve::Gauss, CMCurve::Eisenstein, CMCurve::Generic] {
        for u in units_for(curve) {
            let g = fixed_group_of_unit(curve, u).unwrap();
            let brute: Vec<_> = grid.iter().filter(|pt| float_action(curve, u, pt) == **pt).copied().collect();
            assert_eq!(g.elements, brute, "{curve:?} {u:?}");
            assert_eq!(g.invariant_factors.iter().product::<i64>() as usize, g.order());
        }
    }
    let orders: Vec<usize> = [
        (CMCurve::Generic, Unit::minus_one()),
        (CMCurve::Gauss, Unit::i()),
        (CMCurve::Eisenstein, Unit::zeta3()),
        (CMCurve::Eisenstein, Unit::zeta6()),
    ]
    .iter()
    .map(|&(c, u)| fixed_group_of_unit(c, u).unwrap().order())
    .collect();
    assert_eq!(orders, [4, 2, 3, 1]);
    assert_eq!(fixed_group_of_unit(CMCurve::Gauss, Unit::one()).unwrap_err(), Error::InvalidUnit);
}

// (p + qi)(a + bi) on Gaussian coordinates.
fn gauss_mul((pr, pi): (i64, i64), t: &TorsionPoint) -> TorsionPoint {
    TorsionPoint::new(t.a() * pr - t.b() * pi, t.b() * pr + t.a() * pi)
}

fn gamma_apply(g: &[[(i64, i64); 2]; 2], x: &PointPair) -> PointPair {
    let row = |r: usize| gauss_mul(g[r][0], &x.0).add(&gauss_mul(g[r][1], &x.1));
    (row(0), row(1))
}

#[test]
fn gamma_fixed_group_matches_exhaustive_search() {
    let e4 = torsion_points(4);
    let mut brute = Vec::new();
    for x in &e4 {
        for y in &e4 {
            let pt = (*x, *y);
            if GAMMA_GENERATORS.iter().all(|g| gamma_apply(g, &pt) == pt) {
                brute.push(pt);
            }
        }
    }
    let g = gamma_fixed_group();
    assert_eq!(g.elements, brute);
    assert_eq!(g.order(), 4);
    let gens: BTreeSet<_> = g.generators.iter().copied().collect();
    let want = BTreeSet::from([(p(1, 1, 2), p(0, 0, 1)), (p(0, 0, 1), p(1, 1, 2))]);
    assert_eq!(gens, want);
    for x in &g.elements {
        assert!(x.0.scalar_mul(2).is_zero() && x.1.scalar_mul(2).is_zero());
    }
}

fn generator_pairs(big_n: i64) -> Vec<(TorsionPoint, TorsionPoint)> {
    let pts = torsion_points(big_n);
    let mut out = Vec::new();
    for x in &pts {
        for y in &pts {
            let (x1, x2) = ((x.a() * big_n).to_integer(), (x.b() * big_n).to_integer());
            let (y1, y2) = ((y.a() * big_n).to_integer(), (y.b() * big_n).to_integer());
            if (x1 * y2 - x2 * y1).rem_euclid(big_n).gcd(&big_n) == 1 {
                out.push((*x, *y));
            }
        }
    }
    out
}

#[test]
fn translation_starts() {
    for n in 1..=5u32 {
        for x in torsion_points(n as i64 + 1).iter().filter(|x| x.order() == n as i64 + 1) {
            let sols = solve_translation_start(n, x).unwrap();
            assert_eq!(sols.len(), ((n + 1) * (n + 1)) as usize);
            let t = x.scalar_mul((n * (n + 1) / 2) as i64);
            assert!(sols.iter().all(|s| s.scalar_mul(n as i64 + 1).add(&t).is_zero()));
        }
    }
    let quarter: BTreeSet<_> = solve_translation_start(1, &p(1, 0, 2)).unwrap().into_iter().collect();
    let want: BTreeSet<_> = [p(1, 0, 4), p(3, 0, 4), p(1, 2, 4), p(3, 2, 4)].into_iter().collect();
    assert_eq!(quarter, want);
    assert!(matches!(solve_translation_start(2, &p(1, 0, 2)), Err(Error::WrongOrder { .. })));
}

#[test]
fn fix_divisors_agree_with_brute_force() {
    for n in 1..=3u32 {
        let pairs = generator_pairs(n as i64 + 1);
        let mut brute_cache = std::collections::HashMap::new();
        for (x, y) in &pairs {
            let fix: BTreeSet<Divisor> = fix_divisors(n, x, y).unwrap().into_iter().collect();
            let brute = brute_cache
                .entry(*x)
                .or_insert_with(|| brute_force_fix_divisors(n, x).unwrap().into_iter().collect::<BTreeSet<_>>());
            assert_eq!(&fix, brute, "n = {n}, x = {x}, y = {y}");
            assert_eq!(fix.len(), n as usize + 1);
            for d in &fix {
                assert_eq!(d.degree(), n as usize + 1);
                assert!(d.sum().is_zero());
            }
            let other: BTreeSet<Divisor> = fix_divisors(n, y, x).unwrap().into_iter().collect();
            assert!(fix.is_disjoint(&other));
            assert!(is_full_cycle(&translation_permutation(n, x, y).unwrap()));
        }
    }
}

#[test]
fn small_examples() {
    let ds = fix_divisors(2, &p(1, 0, 3), &p(0, 1, 3)).unwrap();
    assert_eq!(ds.len(), 3);
    assert_eq!(ds[0], Divisor::new(vec![p(0, 0, 1), p(1, 0, 3), p(2, 0, 3)]));
    assert_eq!(brute_force_fix_divisors(2, &p(1, 0, 3)).unwrap().len(), 3);
    assert_eq!(fix_divisors(2, &p(1, 0, 3), &p(2, 0, 3)).unwrap_err(), Error::NotGenerating);
    assert!(matches!(brute_force_fix_divisors(5, &p(1, 0, 6)), Err(Error::EnumerationTooLarge(_))));
}

#[test]
fn permutations_are_single_cycles() {
    for n in 1..=4u32 {
        for (x, y) in generator_pairs(n as i64 + 1).iter().step_by(7) {
            let perm = translation_permutation(n, x, y).unwrap();
            assert!(is_full_cycle(&perm));
            assert!(perm.iter().enumerate().all(|(i, &j)| i != j));
        }
    }
    assert!(!is_full_cycle(&[1, 0, 2]));
    assert!(is_full_cycle(&[1, 2, 0]));
}

#[test]
fn point_json() {
    let s = serde_json::to_string(&p(0, 1, 3)).unwrap();
    assert_eq!(s, r#"{"a":"0/1","b":"1/3"}"#);
    assert_eq!(serde_json::from_str::<TorsionPoint>(&s).unwrap(), p(0, 1, 3));
    assert_eq!(serde_json::from_str::<TorsionPoint>(r#"{"a":"4/3","b":"-1/2"}"#).unwrap(), p(1, 1, 6).add(&p(1, 2, 6)));
}
