use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use quotfib::cyclo::CycNum;
use quotfib::proj::{
    commutation_check, eval_g, fixed_points, generated_order, proj_eq, proj_order, random_invertible, sym_power,
    Mat, ProjMap, ProjPoint,
};
use quotfib::rng;
use quotfib::Error;
use rand::Rng;

fn binom(n: usize, k: usize) -> BigRational {
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    BigRational::from_integer(c)
}

fn rpow(x: &BigRational, e: usize) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * x)
}

// Entry (j, i) of the symmetric power: coefficient of T^{n-j} S^j in
// (dT + bS)^{n-i} (cT + aS)^i, expanded by the binomial theorem.
fn sym_power_oracle(m: [[i64; 2]; 2], n: usize) -> Vec<Vec<BigRational>> {
    let r = |x: i64| BigRational::from_integer(x.into());
    let (a, b, c, d) = (r(m[0][0]), r(m[0][1]), r(m[1][0]), r(m[1][1]));
    let mut out = vec![vec![BigRational::zero(); n + 1]; n + 1];
    for i in 0..=n {
        for j in 0..=n {
            let mut s = BigRational::zero();
            for k in 0..=(n - i).min(j) {
                let mm = j - k;
                if mm > i {
                    continue;
                }
                s += binom(n - i, k)
                    * binom(i, mm)
                    * rpow(&d, n - i - k)
                    * rpow(&b, k)
                    * rpow(&c, i - mm)
                    * rpow(&a, mm);
            }
            out[j][i] = s;
        }
    }
    out
}

#[test]
fn sym_power_matches_binomial_expansion() {
    let mut r = rng::stream(2, "sym_oracle");
    for _ in 0..40 {
        let m = [[r.gen_range(-4..=4), r.gen_range(-4..=4)], [r.gen_range(-4..=4), r.gen_range(-4..=4)]];
        let n = r.gen_range(1..=6);
        let got = sym_power(&Mat::from_ints(1, &[&m[0], &m[1]]), n).unwrap();
        let want = sym_power_oracle(m, n);
        for (j, row) in want.iter().enumerate() {
            for (i, x) in row.iter().enumerate() {
                assert_eq!(got.get(j, i).as_rational().unwrap(), *x, "m = {m:?}, n = {n}, ({j},{i})");
            }
        }
    }
}

#[test]
fn sym_power_is_multiplicative() {
    let mut r = rng::stream(3, "sym_mult");
    for n in 1..=5 {
        for _ in 0..10 {
            let a = random_invertible(2, 12, &mut r);
            let b = random_invertible(2, 12, &mut r);
            let lhs = sym_power(&(&a * &b), n).unwrap();
            let rhs = &sym_power(&a, n).unwrap() * &sym_power(&b, n).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

// g(t̄·P) = Sym^n(t̄)·g(P) for any t̄, not just the case generators.
#[test]
fn quotient_map_is_natural() {
    let mut r = rng::stream(4, "naturality");
    for n in 1..=4 {
        for k in 0..5 {
            let tbar = ProjMap::new(random_invertible(2, 3, &mut r)).unwrap();
            let t = ProjMap::new(sym_power(tbar.lift(), n).unwrap()).unwrap();
            assert!(commutation_check(&t, &tbar, 10, k).unwrap());
        }
    }
    let tbar = ProjMap::new(Mat::from_ints(1, &[&[1, 1], &[0, 1]])).unwrap();
    let wrong = ProjMap::identity(3, 1);
    assert!(!commutation_check(&wrong, &tbar, 5, 0).unwrap());
}

#[test]
fn eval_g_on_coordinate_points() {
    let zero = ProjPoint::from_ints(1, &[1, 0]).unwrap();
    let inf = ProjPoint::from_ints(1, &[0, 1]).unwrap();
    // ∏ (y T + x S) for [1:0], [1:0], [0:1] is S·S·T
    let g = eval_g(&[zero.clone(), zero, inf]).unwrap();
    assert_eq!(g, ProjPoint::from_ints(1, &[0, 0, 1, 0]).unwrap());
}

#[test]
fn inverse_and_determinant() {
    let mut r = rng::stream(5, "inverse");
    for l in [1, 3, 4, 5, 12] {
        for dim in 1..=4 {
            let a = random_invertible(dim, l, &mut r);
            let b = random_invertible(dim, l, &mut r);
            assert_eq!(&a * &a.inverse().unwrap(), Mat::identity(dim, l));
            assert_eq!((&a * &b).det(), &a.det() * &b.det());
        }
    }
    let singular = Mat::from_ints(1, &[&[1, 2], &[2, 4]]);
    assert_eq!(singular.inverse().unwrap_err(), Error::Singular);
    assert_eq!(singular.rank(), 1);
    assert_eq!(singular.nullspace().len(), 1);
}

#[test]
fn orders_and_fixed_points() {
    let shift = ProjMap::new(Mat::shift(5, 5)).unwrap();
    assert_eq!(proj_order(&shift, 512).unwrap(), 5);
    assert_eq!(fixed_points(&shift).unwrap().len(), 5);
    let d = ProjMap::new(Mat::diag(&[CycNum::from_int(1, 1), CycNum::from_int(1, -1), CycNum::from_int(1, 1)])).unwrap();
    assert_eq!(proj_order(&d, 512).unwrap(), 2);
    assert_eq!(fixed_points(&d).unwrap_err(), Error::NonIsolatedFixedLocus);
    let unipotent = ProjMap::new(Mat::from_ints(1, &[&[1, 1], &[0, 1]])).unwrap();
    assert!(matches!(proj_order(&unipotent, 64), Err(Error::OrderExceedsCap(64))));
    // scalar multiples are the same projective map
    let twice = ProjMap::new(shift.lift().scale(&CycNum::from_int(5, 2))).unwrap();
    assert!(proj_eq(&shift, &twice).unwrap());
}

#[test]
fn conjugate_fixed_points_move_with_the_conjugator() {
    let mut r = rng::stream(6, "fixed_conj");
    let z = |j| CycNum::root_of_unity(3, j);
    let d = ProjMap::new(Mat::diag(&[z(0), z(1), z(2)])).unwrap();
    for _ in 0..10 {
        let x = ProjMap::new(random_invertible(3, 3, &mut r)).unwrap();
        let moved: Vec<ProjPoint> = fixed_points(&d).unwrap().iter().map(|p| x.apply(p).unwrap()).collect();
        let mut moved = moved;
        moved.sort();
        assert_eq!(fixed_points(&x.conjugate(&d).unwrap()).unwrap(), moved);
    }
}

#[test]
fn generated_orders() {
    let alt = ProjMap::new(Mat::from_ints(1, &[&[1, 0, 0], &[0, -1, 0], &[0, 0, 1]])).unwrap();
    let rev = ProjMap::new(Mat::reversal(3, 1)).unwrap();
    assert_eq!(generated_order(&[alt.clone(), rev], 100).unwrap(), 4);
    assert_eq!(generated_order(&[alt], 100).unwrap(), 2);
    assert_eq!(generated_order(&[ProjMap::new(Mat::shift(4, 1)).unwrap()], 100).unwrap(), 4);
    assert_eq!(generated_order(&[], 100).unwrap(), 1);
}

#[test]
fn json_encodings() {
    let m = ProjMap::new(Mat::shift(3, 3)).unwrap();
    let s = serde_json::to_string(&m).unwrap();
    assert!(proj_eq(&serde_json::from_str::<ProjMap>(&s).unwrap(), &m).unwrap());
    let zero = serde_json::to_string(&Mat::zero(2, 1)).unwrap();
    assert!(serde_json::from_str::<ProjMap>(&zero).is_err());
    let p = ProjPoint::from_ints(1, &[2, 4]).unwrap();
    assert_eq!(p, ProjPoint::from_ints(1, &[1, 2]).unwrap());
    let s = serde_json::to_string(&p).unwrap();
    assert_eq!(serde_json::from_str::<ProjPoint>(&s).unwrap(), p);
}
