//! Normal forms for finite abelian subgroups of `PGL_n` that arise as
//! gluing groups: commuting order-`n` pairs, cyclic and Klein subgroups of
//! `PGL_2`, and involution pairs in `PGL_3`.

use num_integer::Integer;
use serde::Serialize;

use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::proj::{
    eigen_decomposition, proj_eq, proj_order, Mat, ProjMap, DEFAULT_ORDER_CAP,
};

/// Output of [`canonical_commuting_pair`].
#[derive(Clone, Debug, Serialize)]
pub struct CanonPairResult {
    pub xi: ProjMap,
    pub phi_canon: ProjMap,
    pub psi_canon: ProjMap,
    pub lambda: CycNum,
}

/// Weights `(v_0, …, v_{n-1})` of a weighted cyclic permutation: `v_i` at
/// `(i-1, i)` for `i >= 1` and `v_0` at the corner `(n-1, 0)`.
fn cycle_weights(m: &Mat) -> Result<Vec<CycNum>> {
    let n = m.dim();
    let mut w = Vec::with_capacity(n);
    for i in 0..n {
        let (r, c) = if i == 0 { (n - 1, 0) } else { (i - 1, i) };
        w.push(m.get(r, c).clone());
    }
    let on_cycle = |r: usize, c: usize| c == (r + 1) % n;
    for r in 0..n {
        for c in 0..n {
            let x = m.get(r, c);
            if on_cycle(r, c) == x.is_zero() {
                return Err(Error::NotWeightedCycle);
            }
        }
    }
    Ok(w)
}

/// The diagonal `D = diag(v_0, v_0v_1, …, v_0⋯v_{n-2}, 1)` for a weighted
/// cyclic permutation with weights of product 1; it satisfies
/// `D·M·D⁻¹ = shift`.
pub fn diagonal_rescale(m: &ProjMap) -> Result<ProjMap> {
    let lift = m.lift();
    let n = lift.dim();
    let l = lift.conductor();
    let w = cycle_weights(lift)?;
    let prod = w.iter().fold(CycNum::one(l), |acc, v| &acc * v);
    if !prod.is_one() {
        return Err(Error::ProductNotOne);
    }
    let mut d = Vec::with_capacity(n);
    let mut acc = CycNum::one(l);
    for v in &w[..n - 1] {
        acc = &acc * v;
        d.push(acc.clone());
    }
    d.push(CycNum::one(l));
    ProjMap::new(Mat::diag(&d))
}

fn expect_order(a: &ProjMap, n: u32) -> Result<()> {
    let k = proj_order(a, DEFAULT_ORDER_CAP)?;
    if k != n {
        return Err(Error::WrongOrder { expected: n.to_string(), found: k });
    }
    Ok(())
}

fn commute(a: &ProjMap, b: &ProjMap) -> Result<bool> {
    proj_eq(&a.compose(b)?, &b.compose(a)?)
}

fn same_shape(a: &ProjMap, b: &ProjMap) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch(a.dim(), b.dim()));
    }
    if a.conductor() != b.conductor() {
        return Err(Error::ConductorMismatch(a.conductor(), b.conductor()));
    }
    Ok(())
}

/// Conjugates a commuting pair of order-`n` maps of `P^{n-1}` with `n`
/// isolated, disjoint fixed points each to `(diag(1, λ, …, λ^{n-1}), shift)`.
pub fn canonical_commuting_pair(phi: &ProjMap, psi: &ProjMap) -> Result<CanonPairResult> {
    same_shape(phi, psi)?;
    let n = phi.dim();
    let l = phi.conductor();
    expect_order(phi, n as u32)?;
    expect_order(psi, n as u32)?;
    if !commute(phi, psi)? {
        return Err(Error::NotCommuting);
    }
    let eig = eigen_decomposition(phi)?;
    for (_, p) in &eig {
        if psi.apply(p)? == *p {
            return Err(Error::FixedSetsNotDisjoint);
        }
    }

    // ψ in the eigenbasis of φ is monomial; read off the permutation.
    let basis: Vec<Vec<CycNum>> = eig.iter().map(|(_, p)| p.coords().to_vec()).collect();
    let p = Mat::from_columns(&basis)?;
    let m = &(&p.inverse()? * psi.lift()) * &p;
    let mut perm = Vec::with_capacity(n);
    for j in 0..n {
        let rows: Vec<usize> = (0..n).filter(|&i| !m.get(i, j).is_zero()).collect();
        if rows.len() != 1 {
            return Err(Error::InvariantMismatch("ψ does not permute Fix(φ)".into()));
        }
        perm.push(rows[0]);
    }
    let mut cycle = vec![0usize];
    while cycle.len() < n {
        let next = perm[*cycle.last().unwrap()];
        if next == 0 {
            return Err(Error::NotFullCycle);
        }
        cycle.push(next);
    }
    if perm[cycle[n - 1]] != 0 {
        return Err(Error::NotFullCycle);
    }

    // w_i = v_{u_{-i}} turns ψ into a weighted shift with ψ(w_{i+1}) ∝ w_i.
    let order: Vec<usize> = (0..n).map(|i| cycle[(n - i) % n]).collect();
    let cols: Vec<Vec<CycNum>> = order.iter().map(|&i| basis[i].clone()).collect();
    let q = Mat::from_columns(&cols)?;
    let q_inv = q.inverse()?;
    let weighted = &(&q_inv * psi.lift()) * &q;
    let prod = cycle_weights(&weighted)?
        .iter()
        .fold(CycNum::one(l), |acc, v| &acc * v);
    let s = prod.nth_root(n as u32).ok_or_else(|| Error::ConductorTooSmall {
        conductor: l,
        detail: format!("no {n}-th root of the cycle product {prod}"),
    })?;
    let normalized = ProjMap::new(weighted.scale(&s.inv()?))?;
    let d = diagonal_rescale(&normalized)?;
    let xi = ProjMap::new(d.lift() * &q_inv)?;

    let phi_diag = xi.conjugate(phi)?;
    let diag = phi_diag.lift().diagonal();
    let lambda = diag[1].checked_div(&diag[0])?;
    match lambda.as_root_of_unity() {
        Some((k, _)) if k as usize == n => {}
        _ => {
            return Err(Error::InvariantMismatch(format!(
                "eigenvalue ratio {lambda} is not a primitive {n}-th root of unity"
            )))
        }
    }
    let phi_canon = ProjMap::new(Mat::diag(
        &(0..n as i64).map(|i| lambda.pow(i)).collect::<Result<Vec<_>>>()?,
    ))?;
    let psi_canon = ProjMap::new(Mat::shift(n, l))?;
    if !proj_eq(&phi_diag, &phi_canon)? || !proj_eq(&xi.conjugate(psi)?, &psi_canon)? {
        return Err(Error::InvariantMismatch("canonical pair certificate failed".into()));
    }
    Ok(CanonPairResult { xi, phi_canon, psi_canon, lambda })
}

/// Conductor used for `PGL_2` normal forms: all of `ζ_2, ζ_3, ζ_4, ζ_6` live there.
pub fn pgl2_conductor(l: u32) -> u32 {
    l.lcm(&12)
}

/// Conjugator `ξ` with `ξMξ⁻¹ ≡ diag(ζ_m, 1)` for `M ∈ PGL_2` of order
/// `m ∈ {2,3,4,6}`. The result lives at conductor [`pgl2_conductor`].
pub fn canonical_cyclic_pgl2(m: &ProjMap) -> Result<ProjMap> {
    if m.dim() != 2 {
        return Err(Error::DimMismatch(m.dim(), 2));
    }
    let l = pgl2_conductor(m.conductor());
    let m = m.embed(l)?;
    let k = proj_order(&m, DEFAULT_ORDER_CAP)?;
    if ![2, 3, 4, 6].contains(&k) {
        return Err(Error::WrongOrder { expected: "2, 3, 4 or 6".into(), found: k });
    }
    let eig = eigen_decomposition(&m)?;
    let zeta = CycNum::primitive_root(l, k).expect("order divides 12");
    let (a, b) = if eig[0].0.checked_div(&eig[1].0)? == zeta { (0, 1) } else { (1, 0) };
    let p = Mat::from_columns(&[eig[a].1.coords().to_vec(), eig[b].1.coords().to_vec()])?;
    let xi = ProjMap::new(p.inverse()?)?;
    let target = ProjMap::new(Mat::diag(&[zeta, CycNum::one(l)]))?;
    if !proj_eq(&xi.conjugate(&m)?, &target)? {
        return Err(Error::InvariantMismatch("cyclic PGL_2 normal form".into()));
    }
    Ok(xi)
}

/// Conjugator taking a Klein four-subgroup `⟨M1, M2⟩ ⊂ PGL_2` to
/// `⟨diag(-1,1), swap⟩`, with `M1 ↦ diag(-1,1)` and `M2 ↦ swap`.
pub fn canonical_klein_pgl2(m1: &ProjMap, m2: &ProjMap) -> Result<ProjMap> {
    same_shape(m1, m2)?;
    if m1.dim() != 2 {
        return Err(Error::DimMismatch(m1.dim(), 2));
    }
    for g in [m1, m2] {
        if proj_order(g, 2) != Ok(2) {
            return Err(Error::NotKlein);
        }
    }
    if !commute(m1, m2)? {
        return Err(Error::NotCommuting);
    }
    if proj_eq(m1, m2)? {
        return Err(Error::NotKlein);
    }
    let l = pgl2_conductor(m1.conductor());
    let xi1 = canonical_cyclic_pgl2(m1)?;
    let m2c = xi1.conjugate(&m2.embed(l)?)?;
    let lift = m2c.lift();
    if !lift.get(0, 0).is_zero() || !lift.get(1, 1).is_zero() {
        return Err(Error::InvariantMismatch("second involution is not antidiagonal".into()));
    }
    let ratio = lift.get(1, 0).checked_div(lift.get(0, 1))?;
    let d = ratio.nth_root(2).ok_or_else(|| Error::ConductorTooSmall {
        conductor: l,
        detail: format!("no square root of {ratio}"),
    })?;
    let dm = Mat::diag(&[d, CycNum::one(l)]);
    let xi = ProjMap::new(&dm * xi1.lift())?;
    let swap = ProjMap::new(Mat::from_ints(l, &[&[0, 1], &[1, 0]]))?;
    if !proj_eq(&xi.conjugate(&m2.embed(l)?)?, &swap)? {
        return Err(Error::InvariantMismatch("Klein normal form".into()));
    }
    Ok(xi)
}

/// Determinant-one lift of an involution: with `A² = cI`, `A·c/det A` squares to `I`.
fn sl_involution(a: &ProjMap) -> Result<Mat> {
    let lift = a.lift();
    let c = lift.pow(2).scalar_value().expect("order two");
    let f = c.checked_div(&lift.det())?;
    Ok(lift.scale(&f))
}

fn column_space_vector(m: &Mat) -> Result<Option<Vec<CycNum>>> {
    match m.rank() {
        0 => Ok(None),
        1 => Ok((0..m.dim())
            .map(|j| m.column(j))
            .find(|c| c.iter().any(|x| !x.is_zero()))
            .map(|c| crate::proj::ProjPoint::new(c).map(|p| p.coords().to_vec()))
            .transpose()?),
        _ => Err(Error::NotFaithful),
    }
}

/// The fixed basis change whose columns `[1,0,1]`, `[0,1,0]`, `[1,0,-1]`
/// diagonalize the 3×3 reversal.
pub fn reversal_basis(l: u32) -> Mat {
    Mat::from_ints(l, &[&[1, 0, 1], &[0, 1, 0], &[1, 0, -1]])
}

/// Conjugator taking one or two commuting involutions of `P^2` to
/// `δ = diag(1,-1,1)` and (for two) the reversal `δ′`.
pub fn canonical_involutions_pgl3(gens: &[ProjMap]) -> Result<ProjMap> {
    if gens.is_empty() || gens.len() > 2 {
        return Err(Error::InvalidPair(format!("expected 1 or 2 generators, got {}", gens.len())));
    }
    for g in gens {
        same_shape(g, &gens[0])?;
        if g.dim() != 3 {
            return Err(Error::DimMismatch(g.dim(), 3));
        }
        expect_order(g, 2)?;
    }
    let l = gens[0].conductor();
    let one = CycNum::one(l);
    let lifts = gens.iter().map(sl_involution).collect::<Result<Vec<_>>>()?;
    let id = Mat::identity(3, l);
    // (I + χA)/2 projects onto the χ-eigenspace of an involution A.
    let projector = |a: &Mat, chi: i64| -> Mat {
        let chi = CycNum::from_int(l, chi);
        let half = CycNum::from_int(l, 2).inv().expect("nonzero");
        Mat::from_fn(3, l, |i, j| {
            let base = if i == j { one.clone() } else { CycNum::zero(l) };
            &(&base + &(&chi * a.get(i, j))) * &half
        })
    };
    let p = if gens.len() == 1 {
        let minus = lifts[0].checked_sub(&Mat::scalar(3, &-&one))?.nullspace();
        let plus = lifts[0].checked_sub(&id)?.nullspace();
        if minus.len() != 2 || plus.len() != 1 {
            return Err(Error::NotFaithful);
        }
        Mat::from_columns(&[minus[0].clone(), plus[0].clone(), minus[1].clone()])?
    } else {
        if !commute(&gens[0], &gens[1])? {
            return Err(Error::NotCommuting);
        }
        let mut cols = Vec::new();
        for (ca, cb) in [(-1, -1), (1, -1), (-1, 1)] {
            let joint = &projector(&lifts[0], ca) * &projector(&lifts[1], cb);
            cols.push(column_space_vector(&joint)?.ok_or(Error::NotFaithful)?);
        }
        let p = Mat::from_columns(&cols)?;
        if p.det().is_zero() {
            return Err(Error::NotFaithful);
        }
        &reversal_basis(l) * &p.inverse()?
    };
    let xi = if gens.len() == 1 { ProjMap::new(p.inverse()?)? } else { ProjMap::new(p)? };
    let delta = ProjMap::new(Mat::from_ints(l, &[&[1, 0, 0], &[0, -1, 0], &[0, 0, 1]]))?;
    let targets = [delta, ProjMap::new(Mat::reversal(3, l))?];
    for (g, t) in gens.iter().zip(&targets) {
        if !proj_eq(&xi.conjugate(g)?, t)? {
            return Err(Error::InvariantMismatch("PGL_3 involution normal form".into()));
        }
    }
    Ok(xi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn z(l: u32, j: i64) -> CycNum {
        CycNum::root_of_unity(l, j)
    }

    fn pm(m: Mat) -> ProjMap {
        ProjMap::new(m).unwrap()
    }

    fn canonical_diag(n: usize, l: u32) -> ProjMap {
        let zn = CycNum::primitive_root(l, n as u32).unwrap();
        pm(Mat::diag(&(0..n as i64).map(|i| zn.pow(i).unwrap()).collect::<Vec<_>>()))
    }

    #[test]
    fn rescale_examples() {
        let d = diagonal_rescale(&pm(Mat::shift(4, 1))).unwrap();
        assert!(proj_eq(&d, &ProjMap::identity(4, 1)).unwrap());

        let mut m = Mat::zero(2, 3);
        m.set(0, 1, z(3, 2));
        m.set(1, 0, z(3, 1));
        let d = diagonal_rescale(&pm(m.clone())).unwrap();
        assert_eq!(d.lift(), &Mat::diag(&[z(3, 1), CycNum::one(3)]));
        assert_eq!(&(d.lift() * &m) * &d.lift().inverse().unwrap(), Mat::shift(2, 3));

        assert_eq!(diagonal_rescale(&ProjMap::identity(3, 1)).unwrap_err(), Error::NotWeightedCycle);
        let doubled = pm(Mat::shift(3, 1).scale(&CycNum::from_int(1, 2)));
        assert_eq!(diagonal_rescale(&doubled).unwrap_err(), Error::ProductNotOne);
    }

    #[test]
    fn canonical_input_is_fixed() {
        for n in 2..=6 {
            let l = (n as u32).lcm(&2);
            let r = canonical_commuting_pair(&canonical_diag(n, l), &pm(Mat::shift(n, l))).unwrap();
            assert!(r.xi.is_identity());
            assert_eq!(r.lambda, CycNum::primitive_root(l, n as u32).unwrap());
        }
    }

    #[test]
    fn pair_round_trip() {
        let mut rng = rng::stream(3, "canon-unit");
        for n in 2..=4 {
            let l = (n as u32).lcm(&12);
            let (phi, psi) = (canonical_diag(n, l), pm(Mat::shift(n, l)));
            for _ in 0..5 {
                let x0 = pm(crate::proj::random_invertible(n, l, &mut rng));
                let r = canonical_commuting_pair(&x0.conjugate(&phi).unwrap(), &x0.conjugate(&psi).unwrap())
                    .unwrap();
                assert!(proj_eq(&r.phi_canon, &phi).unwrap());
                assert!(proj_eq(&r.psi_canon, &psi).unwrap());
            }
        }
    }

    #[test]
    fn pair_errors() {
        let d = pm(Mat::diag(&[z(3, 0), z(3, 1), z(3, 2)]));
        let d2 = pm(Mat::diag(&[z(3, 0), z(3, 2), z(3, 1)]));
        assert_eq!(canonical_commuting_pair(&d, &d2).unwrap_err(), Error::FixedSetsNotDisjoint);
        let id = ProjMap::identity(3, 3);
        assert!(matches!(
            canonical_commuting_pair(&d, &id).unwrap_err(),
            Error::WrongOrder { found: 1, .. }
        ));
        let rot = pm(Mat::from_ints(3, &[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]));
        assert_eq!(canonical_commuting_pair(&d, &rot).unwrap().lambda, z(3, 1));
        assert_eq!(canonical_commuting_pair(&d, &rot.inverse()).unwrap().lambda, z(3, 2));
        let flip = pm(Mat::from_ints(3, &[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]));
        assert!(matches!(
            canonical_commuting_pair(&d, &flip).unwrap_err(),
            Error::WrongOrder { found: 2, .. }
        ));
    }

    #[test]
    fn pgl2_cyclic_examples() {
        let neg = pm(Mat::from_ints(1, &[&[-1, 0], &[0, 1]]));
        assert!(canonical_cyclic_pgl2(&neg).unwrap().is_identity());
        let rot = pm(Mat::from_ints(1, &[&[0, 1], &[-1, 0]]));
        let xi = canonical_cyclic_pgl2(&rot).unwrap();
        assert!(proj_eq(&xi.conjugate(&rot.embed(12).unwrap()).unwrap(), &neg.embed(12).unwrap()).unwrap());
        let r3 = pm(Mat::diag(&[z(3, 1), CycNum::one(3)]));
        assert!(canonical_cyclic_pgl2(&r3).unwrap().is_identity());
        let unipotent = pm(Mat::from_ints(1, &[&[1, 1], &[0, 1]]));
        assert!(canonical_cyclic_pgl2(&unipotent).is_err());
    }

    #[test]
    fn klein_examples() {
        let neg = pm(Mat::from_ints(1, &[&[-1, 0], &[0, 1]]));
        let swap = pm(Mat::from_ints(1, &[&[0, 1], &[1, 0]]));
        assert!(canonical_klein_pgl2(&neg, &swap).unwrap().is_identity());
        let xi = canonical_klein_pgl2(&swap, &neg).unwrap();
        let (n12, s12) = (neg.embed(12).unwrap(), swap.embed(12).unwrap());
        assert!(proj_eq(&xi.conjugate(&s12).unwrap(), &n12).unwrap());
        assert!(proj_eq(&xi.conjugate(&n12).unwrap(), &s12).unwrap());
        assert_eq!(canonical_klein_pgl2(&neg, &neg).unwrap_err(), Error::NotKlein);
    }

    #[test]
    fn pgl3_involution_examples() {
        let delta = pm(Mat::from_ints(1, &[&[1, 0, 0], &[0, -1, 0], &[0, 0, 1]]));
        let rev = pm(Mat::reversal(3, 1));
        assert!(canonical_involutions_pgl3(std::slice::from_ref(&delta)).unwrap().is_identity());
        assert!(canonical_involutions_pgl3(&[delta.clone(), rev.clone()]).unwrap().is_identity());
        let mut rng = rng::stream(5, "pgl3-unit");
        for _ in 0..5 {
            let x0 = pm(crate::proj::random_invertible(3, 1, &mut rng));
            let gens = [x0.conjugate(&delta).unwrap(), x0.conjugate(&rev).unwrap()];
            let xi = canonical_involutions_pgl3(&gens).unwrap();
            assert!(proj_eq(&xi.conjugate(&gens[0]).unwrap(), &delta).unwrap());
            assert!(proj_eq(&xi.conjugate(&gens[1]).unwrap(), &rev).unwrap());
        }
        assert_eq!(
            canonical_involutions_pgl3(&[delta.clone(), delta.clone()]).unwrap_err(),
            Error::NotFaithful
        );
    }
}
