//! Exact arithmetic in Q(ζ_12).

use num_rational::BigRational;
use quotfib::cyclo::CycNum;

fn main() -> quotfib::Result<()> {
    let z = CycNum::root_of_unity(12, 1);
    let sqrt3 = &z + &CycNum::root_of_unity(12, -1);
    println!("ζ + ζ⁻¹ = {sqrt3}");
    println!("(ζ + ζ⁻¹)² = {}", sqrt3.pow(2)?);

    let x = &CycNum::from_int(12, 2) - &z.scale(&BigRational::new(1.into(), 3.into()));
    let inv = x.inv()?;
    println!("x = {x}\nx⁻¹ = {inv}\nx·x⁻¹ = {}", &x * &inv);

    // 3ζ⁻² is a square: √3·ζ⁻¹
    let a = CycNum::root_of_unity(12, -2).scale(&BigRational::from_integer(3.into()));
    match a.nth_root(2) {
        Some(r) => println!("√({a}) = {r}"),
        None => println!("{a} is not a square"),
    }
    println!("ζ^5 as a root of unity: {:?}", CycNum::root_of_unity(12, 5).as_root_of_unity());
    println!("Galois image of ζ under ζ ↦ ζ^5: {}", z.galois(5));
    Ok(())
}
