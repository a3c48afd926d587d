//! Torsion points of CM elliptic curves `E = C/Λ` in lattice coordinates,
//! their automorphisms, fixed groups, and the divisor-level model of the
//! linear system `|(n+1)[0]|`.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::smith::torsion_kernel;

fn frac(q: Rational64) -> Rational64 {
    q - q.floor()
}

fn parse_ratio(s: &str) -> Result<Rational64> {
    let q = crate::cyclo::parse_rational(s)?;
    let (n, d) = (q.numer().try_into(), q.denom().try_into());
    match (n, d) {
        (Ok(n), Ok(d)) => Ok(Rational64::new(n, d)),
        _ => Err(Error::ParseError(format!("rational {s:?} out of range"))),
    }
}

/// A point `a + bτ` of `C/Λ` with `a, b ∈ [0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorsionPoint {
    a: Rational64,
    b: Rational64,
}

impl TorsionPoint {
    pub fn new(a: Rational64, b: Rational64) -> Self {
        TorsionPoint { a: frac(a), b: frac(b) }
    }

    /// `(a/d, b/d)`.
    pub fn frac(a: i64, b: i64, d: i64) -> Self {
        Self::new(Rational64::new(a, d), Rational64::new(b, d))
    }

    pub fn zero() -> Self {
        TorsionPoint { a: Rational64::zero(), b: Rational64::zero() }
    }

    pub fn a(&self) -> Rational64 {
        self.a
    }

    pub fn b(&self) -> Rational64 {
        self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.a + o.a, self.b + o.b)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.a - o.a, self.b - o.b)
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.a, -self.b)
    }

    pub fn scalar_mul(&self, m: i64) -> Self {
        Self::new(self.a * m, self.b * m)
    }

    /// Exact order in the group.
    pub fn order(&self) -> i64 {
        self.a.denom().lcm(self.b.denom())
    }

    /// Some point `p` with `m·p = self`.
    pub fn divide(&self, m: i64) -> Self {
        Self::new(self.a / m, self.b / m)
    }

    fn apply(&self, m: &[[i64; 2]; 2]) -> Self {
        Self::new(self.a * m[0][0] + self.b * m[0][1], self.a * m[1][0] + self.b * m[1][1])
    }
}

impl fmt::Debug for TorsionPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

impl fmt::Display for TorsionPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn ratio_str(q: &Rational64) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointJson {
    a: String,
    b: String,
}

impl Serialize for TorsionPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PointJson { a: ratio_str(&self.a), b: ratio_str(&self.b) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TorsionPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = PointJson::deserialize(d)?;
        let a = parse_ratio(&j.a).map_err(D::Error::custom)?;
        let b = parse_ratio(&j.b).map_err(D::Error::custom)?;
        Ok(TorsionPoint::new(a, b))
    }
}

/// All points of `E[m]`, sorted.
pub fn torsion_points(m: i64) -> Vec<TorsionPoint> {
    (0..m)
        .flat_map(|i| (0..m).map(move |j| TorsionPoint::frac(i, j, m)))
        .collect()
}

/// Elements with a group law on a torsion group; lets subgroup closure and
/// generator selection work for `E` and `E²` alike.
pub trait TorsionElement: Clone + Ord {
    fn identity() -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn order(&self) -> i64;
}

impl TorsionElement for TorsionPoint {
    fn identity() -> Self {
        Self::zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn order(&self) -> i64 {
        TorsionPoint::order(self)
    }
}

/// A point of `E²`.
pub type PointPair = (TorsionPoint, TorsionPoint);

impl TorsionElement for PointPair {
    fn identity() -> Self {
        (TorsionPoint::zero(), TorsionPoint::zero())
    }
    fn plus(&self, other: &Self) -> Self {
        (self.0.add(&other.0), self.1.add(&other.1))
    }
    fn order(&self) -> i64 {
        self.0.order().lcm(&self.1.order())
    }
}

/// The subgroup generated by `gens`, sorted.
pub fn span<T: TorsionElement>(gens: &[T]) -> Vec<T> {
    let mut seen = BTreeSet::from([T::identity()]);
    let mut frontier = vec![T::identity()];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.plus(g);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen.into_iter().collect()
}

/// A finite subgroup given by its elements, a generating set and its
/// invariant factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteGroup<T> {
    pub generators: Vec<T>,
    pub invariant_factors: Vec<i64>,
    pub elements: Vec<T>,
}

impl<T: TorsionElement> FiniteGroup<T> {
    /// Builds the group spanned by `gens`, replacing them by a deterministic
    /// generating set: elements taken greedily by descending order then
    /// ascending coordinates, skipping those already spanned, then listed in
    /// descending coordinate order.
    pub fn from_generators(gens: &[T], invariant_factors: Vec<i64>) -> Self {
        let elements = span(gens);
        let mut candidates = elements.clone();
        candidates.sort_by(|x, y| y.order().cmp(&x.order()).then_with(|| x.cmp(y)));
        let mut chosen: Vec<T> = Vec::new();
        let mut covered = span(&chosen);
        for c in candidates {
            if covered.len() == elements.len() {
                break;
            }
            if covered.binary_search(&c).is_err() {
                chosen.push(c);
                covered = span(&chosen);
            }
        }
        chosen.sort_by(|x, y| y.cmp(x));
        FiniteGroup { generators: chosen, invariant_factors, elements }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: &T) -> bool {
        self.elements.binary_search(x).is_ok()
    }
}

/// The three curve families: `Z[i]`, `Z[ζ_6]`, and curves with only `±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CMCurve {
    Gauss,
    Eisenstein,
    Generic,
}

impl CMCurve {
    pub fn automorphism_order(self) -> u32 {
        match self {
            CMCurve::Gauss => 4,
            CMCurve::Eisenstein => 6,
            CMCurve::Generic => 2,
        }
    }

    /// Lattice action of a generator of the automorphism group.
    fn generator_matrix(self) -> [[i64; 2]; 2] {
        match self {
            // i·(a + bi) = -b + ai
            CMCurve::Gauss => [[0, -1], [1, 0]],
            // ζ_6·(a + bζ_6) = -b + (a + b)ζ_6
            CMCurve::Eisenstein => [[0, -1], [1, 1]],
            CMCurve::Generic => [[-1, 0], [0, -1]],
        }
    }
}

/// The root of unity `ζ_k^j` as an automorphism of a curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Unit {
    pub order: u32,
    pub exponent: u32,
}

impl Unit {
    pub fn new(order: u32, exponent: u32) -> Self {
        let e = exponent % order;
        let g = e.gcd(&order);
        if e == 0 {
            Unit { order: 1, exponent: 0 }
        } else {
            Unit { order: order / g, exponent: e / g }
        }
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    pub fn minus_one() -> Self {
        Self::new(2, 1)
    }

    pub fn i() -> Self {
        Self::new(4, 1)
    }

    pub fn zeta3() -> Self {
        Self::new(3, 1)
    }

    pub fn zeta6() -> Self {
        Self::new(6, 1)
    }

    /// Integer matrix of the action on lattice coordinates.
    pub fn matrix(self, curve: CMCurve) -> Result<[[i64; 2]; 2]> {
        let u = Unit::new(self.order, self.exponent);
        let w = curve.automorphism_order();
        if !w.is_multiple_of(u.order) {
            return Err(Error::InvalidUnit);
        }
        let power = u.exponent * (w / u.order);
        let g = curve.generator_matrix();
        let mut m = [[1, 0], [0, 1]];
        for _ in 0..power {
            m = [
                [g[0][0] * m[0][0] + g[0][1] * m[1][0], g[0][0] * m[0][1] + g[0][1] * m[1][1]],
                [g[1][0] * m[0][0] + g[1][1] * m[1][0], g[1][0] * m[0][1] + g[1][1] * m[1][1]],
            ];
        }
        Ok(m)
    }
}

pub fn cm_action(curve: CMCurve, u: Unit, p: &TorsionPoint) -> Result<TorsionPoint> {
    Ok(p.apply(&u.matrix(curve)?))
}

/// `E^u = {P : uP = P}` for `u ≠ 1`, via Smith normal form of `u - 1`.
pub fn fixed_group_of_unit(curve: CMCurve, u: Unit) -> Result<FiniteGroup<TorsionPoint>> {
    let m = u.matrix(curve)?;
    if m == [[1, 0], [0, 1]] {
        return Err(Error::InvalidUnit);
    }
    let rel = vec![vec![m[0][0] - 1, m[0][1]], vec![m[1][0], m[1][1] - 1]];
    let (gens, factors) = torsion_kernel(&rel, 2).ok_or(Error::InvalidUnit)?;
    let gens: Vec<_> = gens.iter().map(|g| TorsionPoint::new(g[0], g[1])).collect();
    Ok(FiniteGroup::from_generators(&gens, factors))
}

/// Real 2×2 block of multiplication by `p + qi` on coordinates over `{1, i}`.
fn gauss_block(p: i64, q: i64) -> [[i64; 2]; 2] {
    [[p, -q], [q, p]]
}

/// The three generators of the order-16 group acting on `E²`, `E = C/Z[i]`,
/// as entries `(re, im)`.
pub const GAMMA_GENERATORS: [[[(i64, i64); 2]; 2]; 3] = [
    [[(-1, 0), (1, 1)], [(0, 0), (1, 0)]],
    [[(0, -1), (-1, 1)], [(0, 0), (0, 1)]],
    [[(-1, 0), (0, 0)], [(-1, 1), (1, 0)]],
];

/// Integer 4×4 matrix of a γ generator on `(a, b, c, d)`.
pub fn gamma_matrix(g: &[[(i64, i64); 2]; 2]) -> [[i64; 4]; 4] {
    let mut out = [[0; 4]; 4];
    for (bi, row) in g.iter().enumerate() {
        for (bj, &(p, q)) in row.iter().enumerate() {
            let blk = gauss_block(p, q);
            for r in 0..2 {
                for c in 0..2 {
                    out[2 * bi + r][2 * bj + c] = blk[r][c];
                }
            }
        }
    }
    out
}

pub fn gamma_action(g: &[[(i64, i64); 2]; 2], x: &PointPair) -> PointPair {
    let m = gamma_matrix(g);
    let v = [x.0.a, x.0.b, x.1.a, x.1.b];
    let w: Vec<Rational64> = (0..4).map(|i| (0..4).map(|j| v[j] * m[i][j]).sum()).collect();
    (TorsionPoint::new(w[0], w[1]), TorsionPoint::new(w[2], w[3]))
}

/// Points of `E²` fixed by the whole γ group: kernel of the stacked `M_k − I`.
pub fn gamma_fixed_group() -> FiniteGroup<PointPair> {
    let mut rel = Vec::new();
    for g in &GAMMA_GENERATORS {
        let m = gamma_matrix(g);
        for (i, row) in m.iter().enumerate() {
            rel.push((0..4).map(|j| row[j] - i64::from(i == j)).collect());
        }
    }
    let (gens, factors) = torsion_kernel(&rel, 4).expect("finite fixed group");
    let gens: Vec<PointPair> = gens
        .iter()
        .map(|g| (TorsionPoint::new(g[0], g[1]), TorsionPoint::new(g[2], g[3])))
        .collect();
    FiniteGroup::from_generators(&gens, factors)
}

/// An effective divisor: a sorted multiset of points.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Divisor {
    points: Vec<TorsionPoint>,
}

impl Divisor {
    pub fn new(mut points: Vec<TorsionPoint>) -> Self {
        points.sort();
        Divisor { points }
    }

    pub fn points(&self) -> &[TorsionPoint] {
        &self.points
    }

    pub fn degree(&self) -> usize {
        self.points.len()
    }

    pub fn sum(&self) -> TorsionPoint {
        self.points.iter().fold(TorsionPoint::zero(), |acc, p| acc.add(p))
    }

    pub fn translate(&self, t: &TorsionPoint) -> Self {
        Self::new(self.points.iter().map(|p| p.add(t)).collect())
    }

    /// `(point, multiplicity)` pairs in ascending point order.
    pub fn multiplicities(&self) -> Vec<(TorsionPoint, usize)> {
        let mut out: Vec<(TorsionPoint, usize)> = Vec::new();
        for p in &self.points {
            match out.last_mut() {
                Some((q, k)) if q == p => *k += 1,
                _ => out.push((*p, 1)),
            }
        }
        out
    }
}

impl fmt::Debug for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .multiplicities()
            .iter()
            .map(|(p, k)| if *k == 1 { format!("[{p}]") } else { format!("{k}[{p}]") })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[derive(Serialize)]
struct MultJson {
    point: TorsionPoint,
    mult: usize,
}

impl Serialize for Divisor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<MultJson> =
            self.multiplicities().into_iter().map(|(point, mult)| MultJson { point, mult }).collect();
        v.serialize(s)
    }
}

fn require_order(x: &TorsionPoint, n: i64) -> Result<()> {
    if x.order() != n {
        return Err(Error::WrongOrder { expected: n.to_string(), found: x.order() as u32 });
    }
    Ok(())
}

/// All `x_0` with `(n+1)x_0 + (n(n+1)/2)x = 0`, sorted; there are `(n+1)²`.
pub fn solve_translation_start(n: u32, x: &TorsionPoint) -> Result<Vec<TorsionPoint>> {
    let big_n = n as i64 + 1;
    require_order(x, big_n)?;
    let t = x.scalar_mul(n as i64 * big_n / 2);
    let base = t.neg().divide(big_n);
    let mut out: Vec<_> = torsion_points(big_n).iter().map(|e| base.add(e)).collect();
    out.sort();
    Ok(out)
}

fn check_generating(n: u32, x: &TorsionPoint, y: &TorsionPoint) -> Result<()> {
    let big_n = n as i64 + 1;
    let ints = |p: &TorsionPoint| -> Option<(i64, i64)> {
        let (a, b) = (p.a * big_n, p.b * big_n);
        (a.is_integer() && b.is_integer()).then(|| (a.to_integer(), b.to_integer()))
    };
    let (Some((x1, x2)), Some((y1, y2))) = (ints(x), ints(y)) else {
        return Err(Error::NotGenerating);
    };
    if (x1 * y2 - x2 * y1).rem_euclid(big_n).gcd(&big_n) != 1 {
        return Err(Error::NotGenerating);
    }
    Ok(())
}

/// The divisors `D_m = Σ_k [x_t + m·y + k·x]`, `m = 0..=n`, indexed by `m`,
/// with `x_t` the least solution of [`solve_translation_start`].
pub fn fix_divisors(n: u32, x: &TorsionPoint, y: &TorsionPoint) -> Result<Vec<Divisor>> {
    check_generating(n, x, y)?;
    let xt = solve_translation_start(n, x)?[0];
    Ok((0..=n as i64)
        .map(|m| {
            let start = xt.add(&y.scalar_mul(m));
            Divisor::new((0..=n as i64).map(|k| start.add(&x.scalar_mul(k))).collect())
        })
        .collect())
}

/// Largest `n` accepted by [`brute_force_fix_divisors`].
pub const BRUTE_FORCE_MAX_N: u32 = 4;

/// Every effective degree-`(n+1)` divisor with point-sum zero that is
/// invariant under translation by `x`, by exhaustive search.
///
/// Support: with `N = n+1`, an `x`-invariant divisor of degree `N` is one
/// coset `z + ⟨x⟩`, whose point-sum is `N·z + (N(N-1)/2)·x`. For `N` odd the
/// second term vanishes and `z ∈ E[N]`; for `N` even it is the 2-torsion
/// point `(N/2)·x`, so `z ∈ E[2N]`. Multisets are enumerated over that grid.
pub fn brute_force_fix_divisors(n: u32, x: &TorsionPoint) -> Result<Vec<Divisor>> {
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::EnumerationTooLarge(format!("n = {n} > {BRUTE_FORCE_MAX_N}")));
    }
    let big_n = n as i64 + 1;
    require_order(x, big_n)?;
    let grid = if big_n % 2 == 0 { 2 * big_n } else { big_n };
    let pts = torsion_points(grid);
    let coords: Vec<(i64, i64)> = (0..grid).flat_map(|i| (0..grid).map(move |j| (i, j))).collect();
    let mut out = BTreeSet::new();
    let mut stack = Vec::with_capacity(big_n as usize);
    enumerate(&coords, grid, big_n as usize, 0, (0, 0), &mut stack, &mut |idx| {
        let d = Divisor::new(idx.iter().map(|&i| pts[i]).collect());
        if d.translate(x) == d {
            out.insert(d);
        }
    });
    Ok(out.into_iter().collect())
}

/// Nondecreasing index sequences of length `left + stack.len()` whose
/// coordinate sum vanishes mod `grid`.
fn enumerate(
    coords: &[(i64, i64)],
    grid: i64,
    left: usize,
    from: usize,
    sum: (i64, i64),
    stack: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if left == 0 {
        if sum == (0, 0) {
            visit(stack);
        }
        return;
    }
    for i in from..coords.len() {
        let s = ((sum.0 + coords[i].0) % grid, (sum.1 + coords[i].1) % grid);
        stack.push(i);
        enumerate(coords, grid, left - 1, i, s, stack, visit);
        stack.pop();
    }
}

/// The permutation `m ↦ m'` with `D_m + y = D_{m'}`.
pub fn translation_permutation(n: u32, x: &TorsionPoint, y: &TorsionPoint) -> Result<Vec<usize>> {
    let ds = fix_divisors(n, x, y)?;
    ds.iter()
        .map(|d| {
            let moved = d.translate(y);
            ds.iter()
                .position(|e| *e == moved)
                .ok_or_else(|| Error::InvariantMismatch("translate of D_m is not fixed".into()))
        })
        .collect()
}

/// True when `perm` is one cycle through every index.
pub fn is_full_cycle(perm: &[usize]) -> bool {
    let mut i = 0;
    for step in 1..=perm.len() {
        i = perm[i];
        if i == 0 {
            return step == perm.len();
        }
    }
    false
}

impl std::ops::Mul for Unit {
    type Output = Unit;
    fn mul(self, o: Unit) -> Unit {
        let l = self.order.lcm(&o.order);
        Unit::new(l, self.exponent * (l / self.order) + o.exponent * (l / o.order))
    }
}
