//! Exact linear and projective algebra over [`CycNum`].

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cyclo::{unit_group_order, CycNum};
use crate::error::{Error, Result};
use crate::rng;

/// Default cap for [`proj_order`] when callers do not supply one.
pub const DEFAULT_ORDER_CAP: u32 = 512;

/// A square matrix with entries in one cyclotomic field. May be singular.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    dim: usize,
    conductor: u32,
    entries: Vec<CycNum>,
}

impl Mat {
    pub fn from_rows(rows: Vec<Vec<CycNum>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::DimMismatch(0, 1));
        }
        let conductor = rows[0][0].conductor();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimMismatch(row.len(), dim));
            }
            for x in row {
                if x.conductor() != conductor {
                    return Err(Error::ConductorMismatch(conductor, x.conductor()));
                }
                entries.push(x);
            }
        }
        Ok(Mat { dim, conductor, entries })
    }

    /// Integer matrix at the given conductor.
    pub fn from_ints(conductor: u32, rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| CycNum::from_int(conductor, v)).collect())
            .collect();
        Self::from_rows(rows).expect("square integer matrix")
    }

    pub fn from_fn(dim: usize, conductor: u32, mut f: impl FnMut(usize, usize) -> CycNum) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let x = f(i, j);
                assert_eq!(x.conductor(), conductor);
                entries.push(x);
            }
        }
        Mat { dim, conductor, entries }
    }

    pub fn zero(dim: usize, conductor: u32) -> Self {
        Self::from_fn(dim, conductor, |_, _| CycNum::zero(conductor))
    }

    pub fn identity(dim: usize, conductor: u32) -> Self {
        Self::scalar(dim, &CycNum::one(conductor))
    }

    pub fn scalar(dim: usize, c: &CycNum) -> Self {
        Self::diag(&vec![c.clone(); dim])
    }

    pub fn diag(d: &[CycNum]) -> Self {
        let l = d[0].conductor();
        Self::from_fn(d.len(), l, |i, j| if i == j { d[i].clone() } else { CycNum::zero(l) })
    }

    /// The cyclic shift with ones at `(i, i+1)` and at `(n-1, 0)`.
    pub fn shift(dim: usize, conductor: u32) -> Self {
        Self::from_fn(dim, conductor, |i, j| {
            if j == (i + 1) % dim {
                CycNum::one(conductor)
            } else {
                CycNum::zero(conductor)
            }
        })
    }

    /// The reversal `[z_0:…:z_n] ↦ [z_n:…:z_0]`.
    pub fn reversal(dim: usize, conductor: u32) -> Self {
        Self::from_fn(dim, conductor, |i, j| {
            if i + j + 1 == dim {
                CycNum::one(conductor)
            } else {
                CycNum::zero(conductor)
            }
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<CycNum>]) -> Result<Self> {
        let dim = cols.len();
        if cols.iter().any(|c| c.len() != dim) {
            return Err(Error::DimMismatch(cols[0].len(), dim));
        }
        let rows = (0..dim).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        Self::from_rows(rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn get(&self, i: usize, j: usize) -> &CycNum {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: CycNum) {
        assert_eq!(x.conductor(), self.conductor);
        self.entries[i * self.dim + j] = x;
    }

    pub fn rows(&self) -> Vec<Vec<CycNum>> {
        self.entries.chunks(self.dim).map(<[CycNum]>::to_vec).collect()
    }

    pub fn column(&self, j: usize) -> Vec<CycNum> {
        (0..self.dim).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[CycNum] {
        &self.entries
    }

    fn check(&self, other: &Mat) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        if self.conductor != other.conductor {
            return Err(Error::ConductorMismatch(self.conductor, other.conductor));
        }
        Ok(())
    }

    pub fn checked_mul(&self, other: &Mat) -> Result<Mat> {
        self.check(other)?;
        let n = self.dim;
        Ok(Mat::from_fn(n, self.conductor, |i, j| {
            CycNum::dot(self.conductor, (0..n).map(|k| (self.get(i, k), other.get(k, j)))).expect("same conductor")
        }))
    }

    pub fn checked_sub(&self, other: &Mat) -> Result<Mat> {
        self.check(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(Mat { dim: self.dim, conductor: self.conductor, entries })
    }

    pub fn apply(&self, v: &[CycNum]) -> Result<Vec<CycNum>> {
        if v.len() != self.dim {
            return Err(Error::DimMismatch(v.len(), self.dim));
        }
        (0..self.dim)
            .map(|i| CycNum::dot(self.conductor, v.iter().enumerate().map(|(k, x)| (self.get(i, k), x))))
            .collect()
    }

    pub fn scale(&self, c: &CycNum) -> Mat {
        let entries = self.entries.iter().map(|x| x * c).collect();
        Mat { dim: self.dim, conductor: self.conductor, entries }
    }

    pub fn pow(&self, e: u32) -> Mat {
        let mut acc = Mat::identity(self.dim, self.conductor);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn embed(&self, target: u32) -> Result<Mat> {
        let entries = self.entries.iter().map(|x| x.embed(target)).collect::<Result<_>>()?;
        Ok(Mat { dim: self.dim, conductor: target, entries })
    }

    /// The common value of the diagonal when the matrix is scalar.
    pub fn scalar_value(&self) -> Option<CycNum> {
        let c = self.get(0, 0);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let x = self.get(i, j);
                if (i == j && x != c) || (i != j && !x.is_zero()) {
                    return None;
                }
            }
        }
        Some(c.clone())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// Exactly one nonzero entry in every row and column.
    pub fn is_monomial(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| (0..n).filter(|&j| !self.get(i, j).is_zero()).count() == 1)
            && (0..n).all(|j| (0..n).filter(|&i| !self.get(i, j).is_zero()).count() == 1)
    }

    pub fn diagonal(&self) -> Vec<CycNum> {
        (0..self.dim).map(|i| self.get(i, i).clone()).collect()
    }

    /// Row reduction to reduced echelon form; returns the pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let n = self.dim;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..n {
            let Some(p) = (r..n).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            for j in 0..n {
                self.entries.swap(p * n + j, r * n + j);
            }
            let inv = self.get(r, c).inv().expect("nonzero pivot");
            for j in 0..n {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..n {
                let f = self.get(i, c).clone();
                if i == r || f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = self.get(i, j) - &(&f * self.get(r, j));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Basis of the right kernel read off the reduced echelon form: one
    /// vector per free column, with a 1 in that column.
    pub fn nullspace(&self) -> Vec<Vec<CycNum>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let l = self.conductor;
        (0..self.dim)
            .filter(|c| !pivots.contains(c))
            .map(|f| {
                let mut v = vec![CycNum::zero(l); self.dim];
                v[f] = CycNum::one(l);
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m.get(r, f);
                }
                v
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    pub fn det(&self) -> CycNum {
        let n = self.dim;
        let mut m = self.clone();
        let mut det = CycNum::one(self.conductor);
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return CycNum::zero(self.conductor);
            };
            if p != c {
                for j in 0..n {
                    m.entries.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det = &det * &piv;
            let inv = piv.inv().expect("nonzero pivot");
            for i in c + 1..n {
                let f = m.get(i, c) * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j) - &(&f * m.get(c, j));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Mat> {
        let n = self.dim;
        let l = self.conductor;
        let mut aug = Mat::from_fn(2 * n, l, |i, j| {
            if i < n && j < n {
                self.get(i, j).clone()
            } else if i < n && j == i + n {
                CycNum::one(l)
            } else {
                CycNum::zero(l)
            }
        });
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(Mat::from_fn(n, l, |i, j| aug.get(i, j + n).clone()))
    }
}

impl std::ops::Mul for &Mat {
    type Output = Mat;
    /// Panics on dimension or conductor mismatch.
    fn mul(self, rhs: &Mat) -> Mat {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat[L={}]", self.conductor)?;
        for row in self.entries.chunks(self.dim) {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// An element of `PGL_m`: an invertible lift taken up to nonzero scalars.
#[derive(Clone)]
pub struct ProjMap {
    lift: Mat,
}

impl ProjMap {
    pub fn new(lift: Mat) -> Result<Self> {
        if lift.det().is_zero() {
            return Err(Error::Singular);
        }
        Ok(ProjMap { lift })
    }

    pub fn identity(dim: usize, conductor: u32) -> Self {
        ProjMap { lift: Mat::identity(dim, conductor) }
    }

    pub fn lift(&self) -> &Mat {
        &self.lift
    }

    pub fn dim(&self) -> usize {
        self.lift.dim
    }

    pub fn conductor(&self) -> u32 {
        self.lift.conductor
    }

    pub fn compose(&self, other: &ProjMap) -> Result<ProjMap> {
        Ok(ProjMap { lift: self.lift.checked_mul(&other.lift)? })
    }

    pub fn inverse(&self) -> ProjMap {
        ProjMap { lift: self.lift.inverse().expect("lift is invertible") }
    }

    /// `self · m · self⁻¹`.
    pub fn conjugate(&self, m: &ProjMap) -> Result<ProjMap> {
        self.compose(m)?.compose(&self.inverse())
    }

    pub fn pow(&self, e: u32) -> ProjMap {
        ProjMap { lift: self.lift.pow(e) }
    }

    pub fn embed(&self, target: u32) -> Result<ProjMap> {
        Ok(ProjMap { lift: self.lift.embed(target)? })
    }

    pub fn apply(&self, p: &ProjPoint) -> Result<ProjPoint> {
        ProjPoint::new(self.lift.apply(&p.coords)?)
    }

    pub fn is_identity(&self) -> bool {
        self.lift.scalar_value().is_some()
    }

    /// The lift scaled so its first nonzero entry is 1; equal for
    /// projectively equal maps.
    pub fn normalized(&self) -> Mat {
        let p = self.lift.entries.iter().find(|x| !x.is_zero()).expect("invertible");
        self.lift.scale(&p.inv().expect("nonzero"))
    }
}

/// Order of the subgroup of `PGL` generated by `gens`, by closure; fails
/// with `OrderExceedsCap` beyond `cap` elements.
pub fn generated_order(gens: &[ProjMap], cap: usize) -> Result<usize> {
    let Some(first) = gens.first() else {
        return Ok(1);
    };
    let id = ProjMap::identity(first.dim(), first.conductor());
    let mut seen = std::collections::HashSet::from([id.normalized()]);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.compose(g)?;
            if seen.insert(y.normalized()) {
                if seen.len() > cap {
                    return Err(Error::OrderExceedsCap(cap as u32));
                }
                frontier.push(y);
            }
        }
    }
    Ok(seen.len())
}

impl fmt::Debug for ProjMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Proj{:?}", self.lift)
    }
}

/// True iff `a = c·b` for a nonzero scalar `c`.
pub fn proj_eq(a: &ProjMap, b: &ProjMap) -> Result<bool> {
    a.lift.check(&b.lift)?;
    let p = a.lift.entries.iter().position(|x| !x.is_zero()).expect("invertible");
    let (ap, bp) = (&a.lift.entries[p], &b.lift.entries[p]);
    if bp.is_zero() {
        return Ok(false);
    }
    Ok(a.lift.entries.iter().zip(&b.lift.entries).all(|(x, y)| x * bp == y * ap))
}

/// Least `k <= cap` with `A^k` scalar.
pub fn proj_order(a: &ProjMap, cap: u32) -> Result<u32> {
    let mut p = a.lift.clone();
    for k in 1..=cap {
        if p.scalar_value().is_some() {
            return Ok(k);
        }
        p = &p * &a.lift;
    }
    Err(Error::OrderExceedsCap(cap))
}

/// A point of projective space, stored with its first nonzero coordinate 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    coords: Vec<CycNum>,
}

impl ProjPoint {
    pub fn new(coords: Vec<CycNum>) -> Result<Self> {
        let Some(p) = coords.iter().position(|x| !x.is_zero()) else {
            return Err(Error::DivisionByZero);
        };
        let inv = coords[p].inv()?;
        Ok(ProjPoint { coords: coords.iter().map(|x| x * &inv).collect() })
    }

    pub fn from_ints(conductor: u32, v: &[i64]) -> Result<Self> {
        Self::new(v.iter().map(|&x| CycNum::from_int(conductor, x)).collect())
    }

    /// The `i`-th coordinate point.
    pub fn coordinate(dim: usize, conductor: u32, i: usize) -> Self {
        let mut v = vec![CycNum::zero(conductor); dim];
        v[i] = CycNum::one(conductor);
        ProjPoint { coords: v }
    }

    pub fn coords(&self) -> &[CycNum] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn conductor(&self) -> u32 {
        self.coords[0].conductor()
    }

    fn lead(&self) -> usize {
        self.coords.iter().position(|x| !x.is_zero()).expect("nonzero point")
    }

    pub fn embed(&self, target: u32) -> Result<Self> {
        Ok(ProjPoint {
            coords: self.coords.iter().map(|x| x.embed(target)).collect::<Result<_>>()?,
        })
    }
}

impl PartialOrd for ProjPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Position of the leading coordinate first (so `e_0 < e_1 < …`), then the
/// normalized coordinates lexicographically.
impl Ord for ProjPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lead()
            .cmp(&other.lead())
            .then_with(|| self.coords.cmp(&other.coords))
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", cells.join(" : "))
    }
}

/// A `k`-th root of `c` in the field, searching beyond the plain
/// root-of-unity-times-rational shape with the help of `a` (`a^k = c·I`).
fn scalar_root(a: &Mat, c: &CycNum, k: u32) -> Option<CycNum> {
    if let Some(mu) = c.nth_root(k) {
        return Some(mu);
    }
    let m = a.dim as u32;
    let l = a.conductor;
    let det_root = |a: &Mat, c: &CycNum| -> Option<CycNum> {
        // det = μ^m·ρ with ρ a root of unity; with um + vk = 1,
        // μ = (det/ρ)^u · c^v.
        let e = (m as i64).extended_gcd(&(k as i64));
        if e.gcd != 1 {
            return None;
        }
        let det = a.det();
        let cv = c.pow(e.y).ok()?;
        (0..unit_group_order(l) as i64).find_map(|j| {
            let base = &det * &CycNum::unit_root(l, -j);
            let mu = &base.pow(e.x).ok()? * &cv;
            (mu.pow(k as i64).ok()? == *c).then_some(mu)
        })
    };
    if let Some(mu) = det_root(a, c) {
        return Some(mu);
    }
    let mut seen = Vec::new();
    for x in a.entries.iter().filter(|x| !x.is_zero()) {
        if seen.contains(x) {
            continue;
        }
        seen.push(x.clone());
        let xinv = x.inv().ok()?;
        let c2 = c * &xinv.pow(k as i64).ok()?;
        if let Some(mu) = c2.nth_root(k).or_else(|| det_root(&a.scale(&xinv), &c2)) {
            return Some(&mu * x);
        }
    }
    None
}

/// Eigenvalue/eigenvector pairs of a finite-order map, one per fixed point.
pub fn eigen_decomposition(a: &ProjMap) -> Result<Vec<(CycNum, ProjPoint)>> {
    let l = a.conductor();
    let k = proj_order(a, DEFAULT_ORDER_CAP)?;
    let c = a.lift.pow(k).scalar_value().expect("power is scalar");
    let mu = scalar_root(&a.lift, &c, k).ok_or_else(|| Error::ConductorTooSmall {
        conductor: l,
        detail: format!("no {k}-th root of the scalar {c}"),
    })?;
    let zk = CycNum::primitive_root(l, k).ok_or_else(|| Error::ConductorTooSmall {
        conductor: l,
        detail: format!("no primitive {k}-th root of unity"),
    })?;
    let mut out = Vec::new();
    let mut ev = mu;
    for _ in 0..k {
        let shifted = a.lift.checked_sub(&Mat::scalar(a.dim(), &ev))?;
        let ns = shifted.nullspace();
        match ns.len() {
            0 => {}
            1 => out.push((ev.clone(), ProjPoint::new(ns.into_iter().next().unwrap())?)),
            _ => return Err(Error::NonIsolatedFixedLocus),
        }
        ev = &ev * &zk;
    }
    if out.len() != a.dim() {
        return Err(Error::InvariantMismatch("eigenvectors do not span".into()));
    }
    out.sort_by(|x, y| x.1.cmp(&y.1));
    Ok(out)
}

/// The isolated fixed points of a finite-order map, sorted.
pub fn fixed_points(a: &ProjMap) -> Result<Vec<ProjPoint>> {
    Ok(eigen_decomposition(a)?.into_iter().map(|(_, p)| p).collect())
}

fn binomial_power(p: &[CycNum], e: usize, l: u32) -> Vec<CycNum> {
    let mut acc = vec![CycNum::one(l)];
    for _ in 0..e {
        acc = poly_mul(&acc, p);
    }
    acc
}

fn poly_mul(a: &[CycNum], b: &[CycNum]) -> Vec<CycNum> {
    let l = a[0].conductor();
    let mut out = vec![CycNum::zero(l); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if !x.is_zero() && !y.is_zero() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
    }
    out
}

/// Action of a 2×2 matrix on binary forms of degree `n`; coordinate `i` is
/// the coefficient of `T^{n-i} S^i`.
pub fn sym_power(m: &Mat, n: usize) -> Result<Mat> {
    if m.dim != 2 {
        return Err(Error::DimMismatch(m.dim, 2));
    }
    let l = m.conductor;
    let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    // polynomials in S (T implicit): T ↦ dT + bS, S ↦ cT + aS
    let t_img = [d.clone(), b.clone()];
    let s_img = [c.clone(), a.clone()];
    let mut out = Mat::zero(n + 1, l);
    for i in 0..=n {
        let col = poly_mul(&binomial_power(&t_img, n - i, l), &binomial_power(&s_img, i, l));
        for (j, x) in col.into_iter().enumerate() {
            out.set(j, i, x);
        }
    }
    Ok(out)
}

/// The symmetric-product map `(P¹)^n → P^n`: coefficients of `∏ (y_i T + x_i S)`.
pub fn eval_g(points: &[ProjPoint]) -> Result<ProjPoint> {
    let l = points[0].conductor();
    let mut poly = vec![CycNum::one(l)];
    for p in points {
        if p.dim() != 2 {
            return Err(Error::DimMismatch(p.dim(), 2));
        }
        let (x, y) = (&p.coords[0], &p.coords[1]);
        poly = poly_mul(&poly, &[y.clone(), x.clone()]);
    }
    ProjPoint::new(poly)
}

/// Deterministic point tuples covering the degenerate points `[1:0]`, `[0:1]`.
fn fixed_tuples(n: usize, l: u32) -> Vec<Vec<ProjPoint>> {
    let pt = |x: i64, y: i64| ProjPoint::from_ints(l, &[x, y]).expect("nonzero");
    let basic = [pt(1, 0), pt(0, 1), pt(1, 1), pt(1, -1)];
    let mut out = vec![vec![pt(1, 0); n], vec![pt(0, 1); n]];
    out.push((0..n).map(|i| if i < n / 2 { pt(1, 0) } else { pt(0, 1) }).collect());
    out.push((0..n).map(|i| basic[i % 4].clone()).collect());
    out.push((0..n).map(|i| basic[(i + 1) % 4].clone()).collect());
    out
}

/// Checks `T(g(P)) = g(t̄·P)` on fixed degenerate tuples and `samples`
/// seeded random tuples with coordinates in `-9..=9`.
pub fn commutation_check(t: &ProjMap, tbar: &ProjMap, samples: usize, seed: u64) -> Result<bool> {
    if tbar.dim() != 2 {
        return Err(Error::DimMismatch(tbar.dim(), 2));
    }
    let n = t.dim() - 1;
    let l = t.conductor().lcm(&tbar.conductor());
    let (t, tbar) = (t.embed(l)?, tbar.embed(l)?);
    let mut rng = rng::stream(seed, "commutation_check");
    let mut tuples = fixed_tuples(n, l);
    for _ in 0..samples {
        tuples.push(
            (0..n)
                .map(|_| loop {
                    let (x, y) = (rng.gen_range(-9..=9), rng.gen_range(-9..=9));
                    if (x, y) != (0, 0) {
                        break ProjPoint::from_ints(l, &[x, y]).expect("nonzero");
                    }
                })
                .collect(),
        );
    }
    for tuple in tuples {
        let lhs = t.apply(&eval_g(&tuple)?)?;
        let moved = tuple.iter().map(|p| tbar.apply(p)).collect::<Result<Vec<_>>>()?;
        if lhs != eval_g(&moved)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A random invertible matrix whose entries are small integers plus, with
/// probability one half, a root of unity of the field.
pub fn random_invertible<R: Rng>(dim: usize, conductor: u32, rng: &mut R) -> Mat {
    let w = unit_group_order(conductor) as i64;
    loop {
        let m = Mat::from_fn(dim, conductor, |_, _| {
            let base = CycNum::from_int(conductor, rng.gen_range(-3..=3));
            if rng.gen_bool(0.5) {
                &base + &CycNum::unit_root(conductor, rng.gen_range(0..w))
            } else {
                base
            }
        });
        if !m.det().is_zero() {
            return m;
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatJson {
    dim: usize,
    entries: Vec<Vec<CycNum>>,
}

impl Serialize for Mat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatJson { dim: self.dim, entries: self.rows() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = MatJson::deserialize(d)?;
        if j.entries.len() != j.dim {
            return Err(D::Error::custom("row count differs from dim"));
        }
        Mat::from_rows(j.entries).map_err(D::Error::custom)
    }
}

impl Serialize for ProjMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.lift.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        ProjMap::new(Mat::deserialize(d)?).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointJson {
    coords: Vec<CycNum>,
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PointJson { coords: self.coords.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = PointJson::deserialize(d)?;
        let l = j.coords.first().map(CycNum::conductor);
        if j.coords.iter().any(|x| Some(x.conductor()) != l) {
            return Err(D::Error::custom("mixed conductors"));
        }
        ProjPoint::new(j.coords).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(l: u32, j: i64) -> CycNum {
        CycNum::root_of_unity(l, j)
    }

    fn pm(m: Mat) -> ProjMap {
        ProjMap::new(m).unwrap()
    }

    #[test]
    fn projective_equality() {
        let a = pm(Mat::from_ints(1, &[&[1, 2], &[3, 5]]));
        let two_a = pm(a.lift().scale(&CycNum::from_int(1, 2)));
        assert!(proj_eq(&a, &two_a).unwrap());
        assert!(!proj_eq(&ProjMap::identity(3, 1), &pm(Mat::shift(3, 1))).unwrap());
        let d = pm(Mat::diag(&[z(3, 0), z(3, 1), z(3, 2)]));
        let d2 = pm(d.lift().scale(&z(3, 1)));
        assert!(proj_eq(&d, &d2).unwrap());
        assert_eq!(
            proj_eq(&ProjMap::identity(2, 1), &ProjMap::identity(3, 1)).unwrap_err(),
            Error::DimMismatch(2, 3)
        );
    }

    #[test]
    fn orders() {
        for n in 2..=6u32 {
            let l = n;
            let d = pm(Mat::diag(&(0..n as i64).map(|j| z(l, j)).collect::<Vec<_>>()));
            assert_eq!(proj_order(&d, 64).unwrap(), n);
            assert_eq!(proj_order(&pm(Mat::shift(n as usize, 1)), 64).unwrap(), n);
        }
        assert_eq!(proj_order(&ProjMap::identity(4, 1), 8).unwrap(), 1);
        let infinite = pm(Mat::from_ints(1, &[&[1, 1], &[0, 1]]));
        assert_eq!(proj_order(&infinite, 20), Err(Error::OrderExceedsCap(20)));
    }

    #[test]
    fn nullspaces() {
        assert!(Mat::identity(3, 1).nullspace().is_empty());
        assert_eq!(Mat::zero(3, 1).nullspace().len(), 3);
        let ns = Mat::diag(&[CycNum::zero(1), CycNum::one(1), CycNum::one(1)]).nullspace();
        assert_eq!(ns, vec![vec![CycNum::one(1), CycNum::zero(1), CycNum::zero(1)]]);
    }

    #[test]
    fn inverse_and_det() {
        let m = Mat::from_rows(vec![
            vec![z(12, 1), CycNum::from_int(12, 2), CycNum::zero(12)],
            vec![CycNum::zero(12), z(12, 5), CycNum::one(12)],
            vec![CycNum::from_int(12, -1), CycNum::zero(12), z(12, 3)],
        ])
        .unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Mat::identity(3, 12));
        assert_eq!(Mat::from_ints(1, &[&[1, 2], &[2, 4]]).inverse(), Err(Error::Singular));
        assert_eq!(Mat::from_ints(1, &[&[1, 2], &[3, 4]]).det(), CycNum::from_int(1, -2));
    }

    #[test]
    fn fixed_point_examples() {
        let d = pm(Mat::diag(&[z(3, 0), z(3, 1), z(3, 2)]));
        let fp = fixed_points(&d).unwrap();
        assert_eq!(fp, (0..3).map(|i| ProjPoint::coordinate(3, 3, i)).collect::<Vec<_>>());

        let s = pm(Mat::shift(3, 3));
        let fp = fixed_points(&s).unwrap();
        let mut expected: Vec<_> = (0..3)
            .map(|j| ProjPoint::new(vec![z(3, 0), z(3, j), z(3, 2 * j)]).unwrap())
            .collect();
        expected.sort();
        assert_eq!(fp, expected);
        for p in &fp {
            assert_eq!(&s.apply(p).unwrap(), p);
        }

        let bad = pm(Mat::diag(&[CycNum::one(1), CycNum::from_int(1, -1), CycNum::from_int(1, -1)]));
        assert_eq!(fixed_points(&bad), Err(Error::NonIsolatedFixedLocus));

        // shift over Q: the cube roots of unity are missing
        assert!(matches!(
            fixed_points(&pm(Mat::shift(3, 1))),
            Err(Error::ConductorTooSmall { .. })
        ));
    }

    #[test]
    fn fixed_points_need_non_obvious_root() {
        // lift with A^2 = (1+i)^2·I: the scalar is not a root of unity times a
        // rational square, but one entry rescale fixes that
        let l = 4;
        let w = CycNum::one(l) + z(l, 1);
        let a = pm(Mat::from_rows(vec![
            vec![CycNum::zero(l), w.clone()],
            vec![w.clone(), CycNum::zero(l)],
        ])
        .unwrap());
        let fp = fixed_points(&a).unwrap();
        assert_eq!(fp.len(), 2);
        for p in &fp {
            assert_eq!(&a.apply(p).unwrap(), p);
        }
    }

    #[test]
    fn sym_power_examples() {
        for n in 1..=6 {
            let neg = Mat::from_ints(1, &[&[-1, 0], &[0, 1]]);
            let alt: Vec<_> = (0..=n).map(|i| CycNum::from_int(1, if i % 2 == 0 { 1 } else { -1 })).collect();
            assert_eq!(sym_power(&neg, n).unwrap(), Mat::diag(&alt));
            let swap = Mat::from_ints(1, &[&[0, 1], &[1, 0]]);
            assert_eq!(sym_power(&swap, n).unwrap(), Mat::reversal(n + 1, 1));
            assert_eq!(sym_power(&Mat::identity(2, 1), n).unwrap(), Mat::identity(n + 1, 1));
        }
    }

    #[test]
    fn eval_g_examples() {
        let p = |x, y| ProjPoint::from_ints(1, &[x, y]).unwrap();
        assert_eq!(eval_g(&[p(0, 1), p(0, 1), p(0, 1)]).unwrap(), ProjPoint::coordinate(4, 1, 0));
        assert_eq!(eval_g(&[p(2, 1), p(5, 1)]).unwrap(), ProjPoint::from_ints(1, &[1, 7, 10]).unwrap());
        assert_eq!(eval_g(&[p(1, 0), p(1, 0)]).unwrap(), ProjPoint::coordinate(3, 1, 2));
    }

    #[test]
    fn commutation_examples() {
        let neg = pm(Mat::from_ints(1, &[&[-1, 0], &[0, 1]]));
        for n in 1..=4 {
            let t = pm(sym_power(neg.lift(), n).unwrap());
            assert!(commutation_check(&t, &neg, 10, 1).unwrap());
        }
        assert!(!commutation_check(&ProjMap::identity(2, 1), &neg, 10, 1).unwrap());
        let r = pm(Mat::diag(&[z(3, 1), z(3, 0)]));
        let t = pm(sym_power(r.lift(), 3).unwrap());
        assert!(commutation_check(&t, &r, 10, 1).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let m = Mat::from_rows(vec![vec![z(3, 1), CycNum::zero(3)], vec![CycNum::one(3), z(3, 2)]]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(serde_json::from_str::<Mat>(&s).unwrap(), m);
        let p = ProjPoint::new(vec![CycNum::from_int(3, 2), z(3, 1)]).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<ProjPoint>(&s).unwrap(), p);
        let singular = r#"{"dim":1,"entries":[[{"conductor":1,"coeffs":["0/1"]}]]}"#;
        assert!(serde_json::from_str::<ProjMap>(singular).is_err());
    }
}
