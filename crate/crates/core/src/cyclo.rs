//! Exact arithmetic in cyclotomic fields `Q(ζ_L)`.
//!
//! An element is stored over the power basis `1, ζ, …, ζ^{φ(L)-1}` reduced
//! modulo the cyclotomic polynomial `Φ_L`, as integer numerators over one
//! positive common denominator. The representation is canonical, so field
//! equality is structural equality.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest conductor accepted; the integer reduction tables use `i64`.
pub const MAX_CONDUCTOR: u32 = 2000;

struct Tables {
    phi: usize,
    /// `x^j mod Φ_L` for `0 <= j < L`.
    pow: Vec<Vec<i64>>,
    /// Residues coprime to `L`, i.e. the Galois group.
    units: Vec<u32>,
}

fn cyclotomic_poly(l: u32, memo: &mut HashMap<u32, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = memo.get(&l) {
        return p.clone();
    }
    // x^l - 1
    let mut num = vec![0i64; l as usize + 1];
    num[0] = -1;
    num[l as usize] = 1;
    for d in 1..l {
        if l.is_multiple_of(d) {
            let den = cyclotomic_poly(d, memo);
            num = exact_div(&num, &den);
        }
    }
    memo.insert(l, num.clone());
    num
}

/// Exact division of integer polynomials by a monic divisor.
fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut q = vec![0i64; qd + 1];
    for k in (0..=qd).rev() {
        let c = rem[k + dd];
        q[k] = c;
        for (i, &d) in den.iter().enumerate() {
            rem[k + i] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

fn convolve_into(out: &mut [BigInt], a: &[BigInt], b: &[BigInt]) {
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
}

/// Reduces a polynomial of degree `< 2φ(L) - 1` modulo `Φ_L`.
fn reduce(l: u32, mut prod: Vec<BigInt>) -> Vec<BigInt> {
    let t = tables(l);
    let phi = t.phi;
    let (low, high) = prod.split_at_mut(phi);
    for (d, c) in high.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (k, &r) in t.pow[(phi + d) % l as usize].iter().enumerate() {
            if r != 0 {
                low[k] += c * r;
            }
        }
    }
    prod.truncate(phi);
    prod
}

fn tables(l: u32) -> Arc<Tables> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Tables>>>> = OnceLock::new();
    assert!(
        (1..=MAX_CONDUCTOR).contains(&l),
        "conductor {l} outside 1..={MAX_CONDUCTOR}"
    );
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&l) {
        return t.clone();
    }
    let mut memo = HashMap::new();
    let poly = cyclotomic_poly(l, &mut memo);
    let phi = poly.len() - 1;
    let mut pow = Vec::with_capacity(l as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..l {
        pow.push(cur.clone());
        // multiply by x, reduce with the monic Φ_L
        let top = cur[phi - 1];
        let mut next = vec![0i64; phi];
        next[1..phi].copy_from_slice(&cur[..phi - 1]);
        if top != 0 {
            for i in 0..phi {
                next[i] -= top * poly[i];
            }
        }
        cur = next;
    }
    let units = (0..l).filter(|a| a.gcd(&l) == 1).collect();
    let t = Arc::new(Tables { phi, pow, units });
    cache.lock().unwrap().insert(l, t.clone());
    t
}

/// Euler's totient of `l`, the degree of `Q(ζ_l)`.
pub fn totient(l: u32) -> usize {
    tables(l).phi
}

/// `lcm(2, L)`: every root of unity in `Q(ζ_L)` has order dividing it.
pub fn unit_group_order(l: u32) -> u32 {
    if l.is_multiple_of(2) {
        l
    } else {
        2 * l
    }
}

/// An element of `Q(ζ_L)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNum {
    conductor: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycNum {
    fn from_parts(conductor: u32, num: Vec<BigInt>, den: BigInt) -> Self {
        let mut x = CycNum { conductor, num, den };
        x.normalize();
        x
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            for c in &mut self.num {
                *c = -std::mem::take(c);
            }
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
        } else if !g.is_one() {
            for c in &mut self.num {
                *c /= &g;
            }
            self.den /= &g;
        }
    }

    pub fn zero(conductor: u32) -> Self {
        let phi = tables(conductor).phi;
        CycNum { conductor, num: vec![BigInt::zero(); phi], den: BigInt::one() }
    }

    pub fn one(conductor: u32) -> Self {
        Self::from_int(conductor, 1)
    }

    pub fn from_int(conductor: u32, v: i64) -> Self {
        let mut x = Self::zero(conductor);
        x.num[0] = BigInt::from(v);
        x
    }

    pub fn from_rational(conductor: u32, q: &BigRational) -> Self {
        let mut x = Self::zero(conductor);
        x.num[0] = q.numer().clone();
        x.den = q.denom().clone();
        x.normalize();
        x
    }

    /// Builds an element from exact coordinates over the power basis.
    /// Fails unless exactly `φ(L)` coordinates are given.
    pub fn from_coeffs(conductor: u32, coeffs: &[BigRational]) -> Result<Self> {
        let phi = tables(conductor).phi;
        if coeffs.len() != phi {
            return Err(Error::DimMismatch(coeffs.len(), phi));
        }
        let mut den = BigInt::one();
        for c in coeffs {
            den = den.lcm(c.denom());
        }
        let num = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        Ok(Self::from_parts(conductor, num, den))
    }

    /// `ζ_L^{j mod L}`.
    pub fn root_of_unity(conductor: u32, j: i64) -> Self {
        let t = tables(conductor);
        let e = j.rem_euclid(conductor as i64) as usize;
        let num = t.pow[e].iter().map(|&v| BigInt::from(v)).collect();
        CycNum { conductor, num, den: BigInt::one() }
    }

    /// `ζ_W^e` where `W = lcm(2, L)`; these are all roots of unity in the field.
    pub fn unit_root(conductor: u32, e: i64) -> Self {
        let w = unit_group_order(conductor) as i64;
        let e = e.rem_euclid(w);
        if w == conductor as i64 {
            return Self::root_of_unity(conductor, e);
        }
        // L odd: ζ_{2L} = -ζ_L^{(L+1)/2}
        let half = (conductor as i64 + 1) / 2;
        let base = Self::root_of_unity(conductor, e * half);
        if e % 2 == 1 {
            -base
        } else {
            base
        }
    }

    /// A primitive `k`-th root of unity of the field, when one exists.
    pub fn primitive_root(conductor: u32, k: u32) -> Option<Self> {
        let w = unit_group_order(conductor);
        if k == 0 || !w.is_multiple_of(k) {
            return None;
        }
        Some(Self::unit_root(conductor, (w / k) as i64))
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Coordinates over the power basis, each in lowest terms.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.conductor != other.conductor {
            Err(Error::ConductorMismatch(self.conductor, other.conductor))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(other, false))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(other, true))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    fn add_unchecked(&self, other: &Self, negate: bool) -> Self {
        if self.den == other.den {
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| if negate { a - b } else { a + b })
                .collect();
            return Self::from_parts(self.conductor, num, self.den.clone());
        }
        let num = {
            self.num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| {
                    let l = a * &other.den;
                    let r = b * &self.den;
                    if negate {
                        l - r
                    } else {
                        l + r
                    }
                })
                .collect()
        };
        Self::from_parts(self.conductor, num, &self.den * &other.den)
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let phi = tables(self.conductor).phi;
        let mut prod = vec![BigInt::zero(); 2 * phi - 1];
        convolve_into(&mut prod, &self.num, &other.num);
        Self::from_parts(self.conductor, reduce(self.conductor, prod), &self.den * &other.den)
    }

    /// `Σ a_i·b_i`, reduced and normalized once.
    pub fn dot<'a>(conductor: u32, terms: impl IntoIterator<Item = (&'a CycNum, &'a CycNum)>) -> Result<Self> {
        let phi = tables(conductor).phi;
        let mut live = Vec::new();
        let mut den = BigInt::one();
        for (a, b) in terms {
            for x in [a, b] {
                if x.conductor != conductor {
                    return Err(Error::ConductorMismatch(conductor, x.conductor));
                }
            }
            if !a.is_zero() && !b.is_zero() {
                let d = &a.den * &b.den;
                den = den.lcm(&d);
                live.push((a, b, d));
            }
        }
        let mut prod = vec![BigInt::zero(); 2 * phi - 1];
        for (a, b, d) in live {
            let f = &den / d;
            if f.is_one() {
                convolve_into(&mut prod, &a.num, &b.num);
            } else {
                let scaled: Vec<BigInt> = a.num.iter().map(|c| c * &f).collect();
                convolve_into(&mut prod, &scaled, &b.num);
            }
        }
        Ok(Self::from_parts(conductor, reduce(conductor, prod), den))
    }

    /// Image under the Galois automorphism `ζ ↦ ζ^a`, `gcd(a, L) = 1`.
    pub fn galois(&self, a: u32) -> Self {
        let t = tables(self.conductor);
        let l = self.conductor as usize;
        let mut out = vec![BigInt::zero(); t.phi];
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, &r) in t.pow[(i * a as usize) % l].iter().enumerate() {
                if r != 0 {
                    out[k] += c * r;
                }
            }
        }
        Self::from_parts(self.conductor, out, self.den.clone())
    }

    /// Multiplicative inverse via the field norm: `x⁻¹ = ∏_{σ≠1} σ(x) / N(x)`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(self.conductor, &q.recip()));
        }
        let t = tables(self.conductor);
        let mut cofactor = Self::one(self.conductor);
        for &a in &t.units {
            if a != 1 {
                cofactor = cofactor.mul_unchecked(&self.galois(a));
            }
        }
        let norm = self
            .mul_unchecked(&cofactor)
            .as_rational()
            .expect("field norm is rational");
        Ok(cofactor.scale(&norm.recip()))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let num = self.num.iter().map(|c| c * q.numer()).collect();
        Self::from_parts(self.conductor, num, &self.den * q.denom())
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.conductor);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        Ok(acc)
    }

    /// The same element expressed in `Q(ζ_target)`.
    pub fn embed(&self, target: u32) -> Result<Self> {
        if target == 0 || !target.is_multiple_of(self.conductor) {
            return Err(Error::NotADivisor { from: self.conductor, to: target });
        }
        if target == self.conductor {
            return Ok(self.clone());
        }
        let t = tables(target);
        let f = (target / self.conductor) as usize;
        let mut out = vec![BigInt::zero(); t.phi];
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, &r) in t.pow[(i * f) % target as usize].iter().enumerate() {
                if r != 0 {
                    out[k] += c * r;
                }
            }
        }
        Ok(Self::from_parts(target, out, self.den.clone()))
    }

    /// `Some((k, j))` with `self = ζ_k^j`, `gcd(j, k) = 1`, when `self` is a
    /// root of unity.
    pub fn as_root_of_unity(&self) -> Option<(u32, u32)> {
        if !self.den.is_one() {
            return None;
        }
        let w = unit_group_order(self.conductor);
        (0..w).find_map(|e| {
            if *self == Self::unit_root(self.conductor, e as i64) {
                let g = e.gcd(&w);
                Some((w / g, e / g))
            } else {
                None
            }
        })
    }

    /// A `k`-th root of `self` in the field, or `None` when there is none.
    ///
    /// Roots of the form `ρ·r` (`ρ` a root of unity, `r` rational) are found
    /// directly. Other roots are located through the complex embeddings and
    /// confirmed exactly, so a returned value is always a true root; the
    /// numeric stage gives up on roots whose scaled integer coordinates
    /// exceed double precision, or when more than [`ROOT_SEARCH_CAP`] root
    /// choices would have to be combined.
    pub fn nth_root(&self, k: u32) -> Option<Self> {
        if k == 0 {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        let w = unit_group_order(self.conductor) as i64;
        for e in 0..w {
            let t = self.mul_unchecked(&Self::unit_root(self.conductor, -(e * k as i64)));
            if let Some(q) = t.as_rational() {
                if let Some(r) = rational_root(&q, k) {
                    return Some(Self::unit_root(self.conductor, e).scale(&r));
                }
            }
        }
        self.embedding_root(k)
    }

    /// Complex embeddings `ζ ↦ e^{2πit/L}` for `t` in the Galois group.
    fn embeddings(&self) -> Option<Vec<Complex64>> {
        let t = tables(self.conductor);
        let den = self.den.to_f64()?;
        let c: Vec<f64> = self.num.iter().map(|x| x.to_f64().map(|v| v / den)).collect::<Option<_>>()?;
        Some(
            t.units
                .iter()
                .map(|&u| {
                    let w = Complex64::from_polar(1.0, TAU * u as f64 / self.conductor as f64);
                    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &x| acc * w + x)
                })
                .collect(),
        )
    }

    // If y^k = self with y in the field then den·y is an algebraic integer,
    // so its power-basis coordinates are integers. Each pair of complex
    // conjugate embeddings of y is one of k candidates; every combination is
    // turned back into coordinates, rounded, and checked exactly.
    fn embedding_root(&self, k: u32) -> Option<Self> {
        let l = self.conductor;
        let t = tables(l);
        let phi = t.phi;
        if phi < 2 {
            return None;
        }
        let vals = self.embeddings()?;
        let scale = self.den.to_f64()?;
        let pos: HashMap<u32, usize> = t.units.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        let reps: Vec<usize> = (0..phi).filter(|&i| 2 * t.units[i] < l).collect();
        let free = if Self::primitive_root(l, k).is_some() { 1 } else { 0 };
        let combos = (k as u64).checked_pow((reps.len() - free) as u32)?;
        if combos > ROOT_SEARCH_CAP {
            return None;
        }
        let vinv = vandermonde_inverse(l, &t.units)?;
        let cand = |v: Complex64, j: u32| -> Complex64 {
            let (r, th) = v.to_polar();
            Complex64::from_polar(r.powf(1.0 / k as f64) * scale, (th + TAU * j as f64) / k as f64)
        };
        let mut y = vec![Complex64::new(0.0, 0.0); phi];
        for mut idx in 0..combos {
            for (n, &i) in reps.iter().enumerate() {
                let j = if n < free { 0 } else { let j = idx % k as u64; idx /= k as u64; j as u32 };
                let c = cand(vals[i], j);
                y[i] = c;
                y[pos[&(l - t.units[i])]] = c.conj();
            }
            let mut num = Vec::with_capacity(phi);
            for row in &vinv {
                let c: Complex64 = row.iter().zip(&y).map(|(a, b)| a * b).sum();
                let r = c.re.round();
                if (c.re - r).abs() > 0.25 || c.im.abs() > 0.25 || r.abs() >= 2f64.powi(52) {
                    break;
                }
                num.push(BigInt::from(r as i64));
            }
            if num.len() < phi {
                continue;
            }
            let root = Self::from_parts(l, num, self.den.clone());
            if root.pow(k as i64).ok().as_ref() == Some(self) {
                return Some(root);
            }
        }
        None
    }
}

/// Largest number of embedding root combinations [`CycNum::nth_root`] tries.
pub const ROOT_SEARCH_CAP: u64 = 1 << 16;

/// Inverse of `V[t][i] = ω_t^i` by Gauss-Jordan elimination with partial pivoting.
fn vandermonde_inverse(l: u32, units: &[u32]) -> Option<Vec<Vec<Complex64>>> {
    let n = units.len();
    let mut a: Vec<Vec<Complex64>> = units
        .iter()
        .map(|&u| {
            let w = Complex64::from_polar(1.0, TAU * u as f64 / l as f64);
            let mut row: Vec<Complex64> = (0..n).map(|i| w.powu(i as u32)).collect();
            row.resize(2 * n, Complex64::new(0.0, 0.0));
            row
        })
        .collect();
    for (i, row) in a.iter_mut().enumerate() {
        row[n + i] = Complex64::new(1.0, 0.0);
    }
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| a[x][c].norm().total_cmp(&a[y][c].norm()))?;
        if a[p][c].norm() < 1e-12 {
            return None;
        }
        a.swap(c, p);
        let inv = a[c][c].inv();
        for v in a[c].iter_mut() {
            *v *= inv;
        }
        let pivot = a[c].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != c {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

fn rational_root(q: &BigRational, k: u32) -> Option<BigRational> {
    let neg = q.is_negative();
    if neg && k.is_multiple_of(2) {
        return None;
    }
    let root = |v: &BigInt| -> Option<BigInt> {
        let r = v.abs().nth_root(k);
        (num_traits::pow(r.clone(), k as usize) == v.abs()).then_some(r)
    };
    let n = root(q.numer())?;
    let d = root(q.denom())?;
    let r = BigRational::new(n, d);
    Some(if neg { -r } else { r })
}

impl PartialOrd for CycNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Conductor first, then coefficients lexicographically as rationals.
impl Ord for CycNum {
    fn cmp(&self, other: &Self) -> Ordering {
        self.conductor.cmp(&other.conductor).then_with(|| {
            for (a, b) in self.num.iter().zip(&other.num) {
                let o = (a * &other.den).cmp(&(b * &self.den));
                if o != Ordering::Equal {
                    return o;
                }
            }
            Ordering::Equal
        })
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl<'a> $tr<&'a CycNum> for &'a CycNum {
            type Output = CycNum;
            /// Panics when conductors differ.
            fn $m(self, rhs: &'a CycNum) -> CycNum {
                self.$f(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum {
                (&self).$m(&rhs)
            }
        }
    };
}
binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(mut self) -> CycNum {
        for c in &mut self.num {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -self.clone()
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [L={}]", self, self.conductor)
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match i {
                0 => format!("{c}"),
                1 => format!("{c}*z"),
                _ => format!("{c}*z^{i}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Canonical `"p/q"` text for a rational.
pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::ParseError(format!("bad rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CycNumJson {
    conductor: u32,
    coeffs: Vec<String>,
}

impl Serialize for CycNum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycNumJson {
            conductor: self.conductor,
            coeffs: self.coeffs().iter().map(format_rational).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = CycNumJson::deserialize(d)?;
        if j.conductor == 0 || j.conductor > MAX_CONDUCTOR {
            return Err(D::Error::custom(format!("conductor {} out of range", j.conductor)));
        }
        let coeffs = j
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        CycNum::from_coeffs(j.conductor, &coeffs).map_err(D::Error::custom)
    }
}
