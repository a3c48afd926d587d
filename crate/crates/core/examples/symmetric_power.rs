//! The action of PGL_2 on binary forms of degree n, and the quotient map
//! g: (P¹)ⁿ → Pⁿ that it commutes with.

use quotfib::proj::{commutation_check, eval_g, sym_power, Mat, ProjMap, ProjPoint};

fn main() -> quotfib::Result<()> {
    let n = 3;
    let m = Mat::from_ints(1, &[&[1, 2], &[0, 1]]);
    println!("Sym^{n} of {m:?}:\n{:?}", sym_power(&m, n)?);

    let swap = Mat::from_ints(1, &[&[0, 1], &[1, 0]]);
    println!("Sym^{n}(swap) = {:?}", sym_power(&swap, n)?);

    let pts = [
        ProjPoint::from_ints(1, &[1, 2])?,
        ProjPoint::from_ints(1, &[0, 1])?,
        ProjPoint::from_ints(1, &[1, -1])?,
    ];
    println!("g{pts:?} = {:?}", eval_g(&pts)?);

    let tbar = ProjMap::new(m.clone())?;
    let t = ProjMap::new(sym_power(&m, n)?)?;
    println!("T∘g = g∘t̄ on 20 random tuples: {}", commutation_check(&t, &tbar, 20, 1)?);
    Ok(())
}
