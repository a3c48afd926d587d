//! Bring a disguised commuting pair (φ, ψ) of order-n maps to
//! (diag(1, λ, …, λ^{n-1}), shift).

use quotfib::canon::canonical_commuting_pair;
use quotfib::cyclo::CycNum;
use quotfib::proj::{proj_eq, random_invertible, Mat, ProjMap};

fn main() -> quotfib::Result<()> {
    let n = 4;
    let l = 12;
    let zeta = CycNum::primitive_root(l, n as u32).expect("ζ_4 in Q(ζ_12)");
    let diag: Vec<CycNum> = (0..n as i64).map(|i| zeta.pow(i)).collect::<quotfib::Result<_>>()?;
    let phi = ProjMap::new(Mat::diag(&diag))?;
    let psi = ProjMap::new(Mat::shift(n, l))?;

    let x = ProjMap::new(random_invertible(n, l, &mut quotfib::rng::stream(42, "example")))?;
    let (phi2, psi2) = (x.conjugate(&phi)?, x.conjugate(&psi)?);
    println!("disguised φ = {phi2:?}");

    let r = canonical_commuting_pair(&phi2, &psi2)?;
    println!("λ = {} (order {:?})", r.lambda, r.lambda.as_root_of_unity().map(|(k, _)| k));
    println!("φ ≡ canonical: {}", proj_eq(&r.phi_canon, &phi)?);
    println!("ψ ≡ shift: {}", proj_eq(&r.psi_canon, &psi)?);
    println!("ξφξ⁻¹ ≡ φ_canon: {}", proj_eq(&r.xi.conjugate(&phi2)?, &r.phi_canon)?);
    Ok(())
}
