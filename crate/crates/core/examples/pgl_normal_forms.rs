//! Normal forms of small subgroups of PGL_2 and PGL_3.

use quotfib::canon::{canonical_cyclic_pgl2, canonical_involutions_pgl3, canonical_klein_pgl2};
use quotfib::proj::{Mat, ProjMap};

fn pm(l: u32, rows: &[&[i64]]) -> quotfib::Result<ProjMap> {
    ProjMap::new(Mat::from_ints(l, rows))
}

fn main() -> quotfib::Result<()> {
    // order 3: z ↦ -1/(z - 1)
    let r3 = pm(1, &[&[0, -1], &[1, -1]])?;
    let xi = canonical_cyclic_pgl2(&r3)?;
    println!("order-3 map normalized: {:?}", xi.conjugate(&r3.embed(12)?)?);

    let (a, b) = (pm(1, &[&[0, 1], &[-1, 0]])?, pm(1, &[&[0, 1], &[1, 0]])?);
    let xi = canonical_klein_pgl2(&a, &b)?;
    println!("Klein pair normalized: {:?}, {:?}", xi.conjugate(&a.embed(12)?)?, xi.conjugate(&b.embed(12)?)?);

    let delta = pm(1, &[&[1, 0, 0], &[0, -1, 0], &[0, 0, 1]])?;
    let rev = ProjMap::new(Mat::reversal(3, 1))?;
    let x = pm(1, &[&[1, 2, 0], &[0, 1, 1], &[1, 0, 3]])?;
    let gens = [x.conjugate(&delta)?, x.conjugate(&rev)?];
    let xi = canonical_involutions_pgl3(&gens)?;
    println!("PGL_3 involutions normalized: {:?}, {:?}", xi.conjugate(&gens[0])?, xi.conjugate(&gens[1])?);
    Ok(())
}
