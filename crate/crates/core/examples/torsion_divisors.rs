//! Torsion points, fixed subgroups of automorphisms, and the divisors in
//! |(n+1)[0]| fixed by translation.

use quotfib::torsion::{
    brute_force_fix_divisors, fix_divisors, fixed_group_of_unit, gamma_fixed_group, translation_permutation,
    CMCurve, TorsionPoint, Unit,
};

fn main() -> quotfib::Result<()> {
    for (curve, u, name) in [
        (CMCurve::Generic, Unit::minus_one(), "-1"),
        (CMCurve::Gauss, Unit::i(), "i"),
        (CMCurve::Eisenstein, Unit::zeta3(), "ζ_3"),
        (CMCurve::Eisenstein, Unit::zeta6(), "ζ_6"),
    ] {
        let g = fixed_group_of_unit(curve, u)?;
        println!("{curve:?}, u = {name}: {} fixed points, generators {:?}", g.order(), g.generators);
    }
    println!("γ fixed group generators: {:?}", gamma_fixed_group().generators);

    let n = 2;
    let (x, y) = (TorsionPoint::frac(1, 0, 3), TorsionPoint::frac(0, 1, 3));
    let ds = fix_divisors(n, &x, &y)?;
    for (m, d) in ds.iter().enumerate() {
        println!("D_{m} = {d:?}");
    }
    println!("exhaustive search finds {} divisors", brute_force_fix_divisors(n, &x)?.len());
    println!("translation by y permutes them as {:?}", translation_permutation(n, &x, &y)?);
    Ok(())
}
