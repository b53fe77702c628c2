//! Real Clifford algebra Cl(1,3) with signature (+,−,−,−).
//!
//! Elements are stored as 16 coefficients over the blades generated by the
//! raised-index basis vectors `γ^0 … γ^3`. Blades are ordered by grade and
//! then lexicographically:
//!
//! | index | blade        | index | blade          |
//! |-------|--------------|-------|----------------|
//! | 0     | 1            | 8     | γ^1γ^2         |
//! | 1..=4 | γ^0 … γ^3    | 9     | γ^1γ^3         |
//! | 5     | γ^0γ^1       | 10    | γ^2γ^3         |
//! | 6     | γ^0γ^2       | 11    | γ^0γ^1γ^2      |
//! | 7     | γ^0γ^3       | 12    | γ^0γ^1γ^3      |
//! |       |              | 13    | γ^0γ^2γ^3      |
//! |       |              | 14    | γ^1γ^2γ^3      |
//! |       |              | 15    | γ^5 = γ^0γ^1γ^2γ^3 |
//!
//! Lowered vectors follow from the metric: `γ_0 = γ^0`, `γ_i = −γ^i`.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;

/// Diagonal metric `η^{μμ}`.
pub const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// Generator bitmask of each stored blade, in storage order.
pub const BLADE_MASKS: [u8; 16] = [
    0b0000, 0b0001, 0b0010, 0b0100, 0b1000, 0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100,
    0b0111, 0b1011, 0b1101, 0b1110, 0b1111,
];

/// Human readable blade names, in storage order.
pub const BLADE_NAMES: [&str; 16] = [
    "1", "g0", "g1", "g2", "g3", "g01", "g02", "g03", "g12", "g13", "g23", "g012", "g013", "g023",
    "g123", "g0123",
];

const fn blade_grade(mask: u8) -> usize {
    mask.count_ones() as usize
}

const fn mask_to_index(mask: u8) -> usize {
    let mut i = 0;
    while i < 16 {
        if BLADE_MASKS[i] == mask {
            return i;
        }
        i += 1;
    }
    panic!("unreachable blade mask");
}

/// Sign of `e_a e_b` from reordering generators and contracting repeated ones.
const fn blade_product_sign(a: u8, b: u8) -> f64 {
    // count transpositions needed to move every generator of b left past
    // the larger generators of a
    let mut swaps = 0u32;
    let mut shifted = a >> 1;
    while shifted != 0 {
        swaps += (shifted & b).count_ones();
        shifted >>= 1;
    }
    let mut sign = if swaps.is_multiple_of(2) { 1.0 } else { -1.0 };
    let common = a & b;
    let mut mu = 0;
    while mu < 4 {
        if common & (1 << mu) != 0 {
            sign *= METRIC[mu];
        }
        mu += 1;
    }
    sign
}

const fn build_product_table() -> ([[usize; 16]; 16], [[f64; 16]; 16]) {
    let mut index = [[0usize; 16]; 16];
    let mut sign = [[0.0f64; 16]; 16];
    let mut i = 0;
    while i < 16 {
        let mut j = 0;
        while j < 16 {
            let a = BLADE_MASKS[i];
            let b = BLADE_MASKS[j];
            index[i][j] = mask_to_index(a ^ b);
            sign[i][j] = blade_product_sign(a, b);
            j += 1;
        }
        i += 1;
    }
    (index, sign)
}

const PRODUCT: ([[usize; 16]; 16], [[f64; 16]; 16]) = build_product_table();

/// Result blade index of `blade_i * blade_j`.
pub const fn product_index(i: usize, j: usize) -> usize {
    PRODUCT.0[i][j]
}

/// Sign of `blade_i * blade_j`.
pub const fn product_sign(i: usize, j: usize) -> f64 {
    PRODUCT.1[i][j]
}

/// Grade of the blade stored at `index`.
pub const fn grade_of(index: usize) -> usize {
    blade_grade(BLADE_MASKS[index])
}

const GRADE_RANGES: [(usize, usize); 5] = [(0, 1), (1, 5), (5, 11), (11, 15), (15, 16)];

/// Absolute/relative tolerance pair used by every identity comparison.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs: 1e-10, rel: 1e-8 }
    }
}

impl Tolerance {
    pub fn threshold(&self, scale: f64) -> f64 {
        self.abs + self.rel * scale.abs()
    }

    pub fn close(&self, a: &Multivector, b: &Multivector) -> bool {
        (*a - *b).norm() <= self.threshold(a.norm().max(b.norm()))
    }
}

/// A point in Einstein-Lorentz-Poincaré coordinates, `c = 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SpacetimePoint {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SpacetimePoint {
    pub const ORIGIN: Self = Self { t: 0.0, x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self { t, x, y, z }
    }

    pub fn coord(&self, mu: usize) -> f64 {
        match mu {
            0 => self.t,
            1 => self.x,
            2 => self.y,
            3 => self.z,
            _ => panic!("spacetime axis {mu} out of range"),
        }
    }

    /// Copy of the point displaced by `delta` along axis `mu`.
    pub fn shifted(&self, mu: usize, delta: f64) -> Self {
        let mut p = *self;
        match mu {
            0 => p.t += delta,
            1 => p.x += delta,
            2 => p.y += delta,
            3 => p.z += delta,
            _ => panic!("spacetime axis {mu} out of range"),
        }
        p
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

/// Relative electric and magnetic 3-vectors of a bivector, with respect to
/// the frame `γ^0`: `F = E + iB` where `σ_k = γ^0γ^k` and `i = σ1σ2σ3 = −γ^5`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RelativeSplit {
    pub e: [f64; 3],
    pub b: [f64; 3],
}

/// General element of Cl(1,3).
#[derive(Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Multivector(pub [f64; 16]);

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (c, name) in self.0.iter().zip(BLADE_NAMES) {
            if *c != 0.0 {
                if wrote {
                    write!(f, " + ")?;
                }
                write!(f, "{c}*{name}")?;
                wrote = true;
            }
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Multivector {
    pub const ZERO: Self = Self([0.0; 16]);

    pub const fn from_coeffs(c: [f64; 16]) -> Self {
        Self(c)
    }

    pub const fn blade(index: usize, value: f64) -> Self {
        let mut c = [0.0; 16];
        c[index] = value;
        Self(c)
    }

    pub const fn scalar(s: f64) -> Self {
        Self::blade(0, s)
    }

    /// `γ^μ`, the raised-index basis vector.
    pub const fn gamma(mu: usize) -> Self {
        Self::blade(1 + mu, 1.0)
    }

    /// `γ_μ = η_{μμ} γ^μ`.
    pub const fn gamma_lower(mu: usize) -> Self {
        Self::blade(1 + mu, METRIC[mu])
    }

    /// `γ^μ γ^ν` for `μ ≠ ν`.
    pub fn gamma2(mu: usize, nu: usize) -> Self {
        Self::gamma(mu) * Self::gamma(nu)
    }

    /// `γ^5 = γ^0γ^1γ^2γ^3`.
    pub const fn g5() -> Self {
        Self::blade(15, 1.0)
    }

    /// Relative basis vector `σ_k = γ^0γ^k`, `k ∈ 1..=3`.
    pub const fn sigma(k: usize) -> Self {
        Self::blade(4 + k, 1.0)
    }

    /// Spacetime vector `Σ v_μ γ^μ` from lowered components.
    pub fn vector(v: [f64; 4]) -> Self {
        let mut c = [0.0; 16];
        c[1..5].copy_from_slice(&v);
        Self(c)
    }

    /// Relative vector `Σ a_k σ_k`.
    pub fn relative(a: [f64; 3]) -> Self {
        let mut c = [0.0; 16];
        c[5..8].copy_from_slice(&a);
        Self(c)
    }

    pub fn coeffs(&self) -> &[f64; 16] {
        &self.0
    }

    pub fn gp(&self, other: &Self) -> Self {
        let mut out = [0.0; 16];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.0.iter().enumerate() {
                if b == 0.0 {
                    continue;
                }
                out[product_index(i, j)] += product_sign(i, j) * a * b;
            }
        }
        Self(out)
    }

    /// Grade-k projection.
    pub fn grade(&self, k: usize) -> Result<Self, AlgebraError> {
        if k > 4 {
            return Err(AlgebraError::GradeOutOfRange(k));
        }
        Ok(self.project(k))
    }

    pub(crate) fn project(&self, k: usize) -> Self {
        let (lo, hi) = GRADE_RANGES[k];
        let mut c = [0.0; 16];
        c[lo..hi].copy_from_slice(&self.0[lo..hi]);
        Self(c)
    }

    pub fn scalar_part(&self) -> f64 {
        self.0[0]
    }

    pub fn pseudo_part(&self) -> f64 {
        self.0[15]
    }

    /// Lowered components `v_μ` of the grade-1 part.
    pub fn vector_components(&self) -> [f64; 4] {
        [self.0[1], self.0[2], self.0[3], self.0[4]]
    }

    pub fn even(&self) -> Self {
        self.project(0) + self.project(2) + self.project(4)
    }

    pub fn odd(&self) -> Self {
        self.project(1) + self.project(3)
    }

    pub fn is_grade(&self, k: usize, tol: f64) -> bool {
        (*self - self.project(k)).norm() <= tol * self.norm().max(1.0)
    }

    /// Largest magnitude of any grade-k coefficient.
    pub fn grade_norm(&self, k: usize) -> f64 {
        self.project(k).norm()
    }

    pub fn reverse(&self) -> Self {
        let mut c = self.0;
        for (i, v) in c.iter_mut().enumerate() {
            let k = grade_of(i);
            if (k * (k.saturating_sub(1)) / 2) % 2 == 1 {
                *v = -*v;
            }
        }
        Self(c)
    }

    /// Grade involution: odd grades flip sign.
    pub fn involute(&self) -> Self {
        let mut c = self.0;
        for (i, v) in c.iter_mut().enumerate() {
            if grade_of(i) % 2 == 1 {
                *v = -*v;
            }
        }
        Self(c)
    }

    /// Outer product, `Σ ⟨a_r b_s⟩_{r+s}`.
    pub fn wedge(&self, other: &Self) -> Self {
        self.graded_product(other, |r, s| Some(r + s).filter(|k| *k <= 4))
    }

    /// Left contraction, `Σ ⟨a_r b_s⟩_{s−r}` (zero for `s < r`).
    pub fn contract_left(&self, other: &Self) -> Self {
        self.graded_product(other, |r, s| s.checked_sub(r))
    }

    /// Hestenes inner product, `Σ ⟨a_r b_s⟩_{|r−s|}` over nonzero grades.
    ///
    /// Agrees with [`Multivector::contract_left`] when `self` is a vector;
    /// unlike it, a trivector acting on a bivector contributes a vector.
    pub fn inner(&self, other: &Self) -> Self {
        self.graded_product(other, |r, s| {
            if r == 0 || s == 0 {
                None
            } else {
                Some(r.abs_diff(s))
            }
        })
    }

    /// Scalar product `⟨a b⟩_0`.
    pub fn scalar_product(&self, other: &Self) -> f64 {
        let mut s = 0.0;
        for i in 0..16 {
            // blade_i * blade_i is the only pairing landing on the scalar
            s += product_sign(i, i) * self.0[i] * other.0[i];
        }
        s
    }

    fn graded_product(&self, other: &Self, target: impl Fn(usize, usize) -> Option<usize>) -> Self {
        let mut out = Self::ZERO;
        for r in 0..=4 {
            let a = self.project(r);
            if a.is_zero() {
                continue;
            }
            for s in 0..=4 {
                let b = other.project(s);
                if b.is_zero() {
                    continue;
                }
                if let Some(k) = target(r, s) {
                    out += a.gp(&b).project(k);
                }
            }
        }
        out
    }

    /// Hodge dual `⋆a = ã γ^5`.
    pub fn hodge(&self) -> Self {
        self.reverse() * Self::g5()
    }

    /// `e^{γ^5 χ} = cos χ + γ^5 sin χ`.
    pub fn exp_g5(chi: f64) -> Self {
        let (s, c) = chi.sin_cos();
        let mut out = [0.0; 16];
        out[0] = c;
        out[15] = s;
        Self(out)
    }

    /// Exponential of a bivector.
    ///
    /// Uses the closed form when the square of the bivector is a pure
    /// scalar; otherwise a scaled-and-squared Taylor series accurate to
    /// about `1e-15` relative.
    pub fn exp_bivector(b2: &Self) -> Result<Self, AlgebraError> {
        if !b2.is_grade(2, 1e-14) {
            return Err(AlgebraError::NotBivector);
        }
        let b2 = b2.project(2);
        let sq = b2 * b2;
        let scale = sq.norm().max(f64::MIN_POSITIVE);
        if sq.pseudo_part().abs() <= 1e-14 * scale {
            let s = sq.scalar_part();
            let (c, sinc) = if s < 0.0 {
                let a = (-s).sqrt();
                (a.cos(), a.sin() / a)
            } else if s > 0.0 {
                let a = s.sqrt();
                (a.cosh(), a.sinh() / a)
            } else {
                (1.0, 1.0)
            };
            Ok(Self::scalar(c) + b2 * sinc)
        } else {
            Ok(exp_series(&b2))
        }
    }

    pub fn norm_squared(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum()
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| *c == 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// Split a bivector into relative `E`, `B` with respect to `γ^0`.
    pub fn pauli_split(&self) -> Result<RelativeSplit, AlgebraError> {
        if !self.is_grade(2, 1e-12) {
            return Err(AlgebraError::NotBivector);
        }
        let e = [self.0[5], self.0[6], self.0[7]];
        // spatial bivectors are -γ^5 B
        let spatial = Self::from_coeffs({
            let mut c = [0.0; 16];
            c[8..11].copy_from_slice(&self.0[8..11]);
            c
        });
        let b_vec = Self::g5() * spatial;
        Ok(RelativeSplit { e, b: [b_vec.0[5], b_vec.0[6], b_vec.0[7]] })
    }

    pub fn pauli_join(split: &RelativeSplit) -> Self {
        Self::relative(split.e) - Self::g5() * Self::relative(split.b)
    }

    /// Relative split `vγ^0 = v_t + v⃗` of a spacetime vector.
    pub fn space_time_split(&self) -> (f64, [f64; 3]) {
        let r = *self * Self::gamma(0);
        (r.0[0], [r.0[5], r.0[6], r.0[7]])
    }
}

fn exp_series(b: &Multivector) -> Multivector {
    let n = b.norm();
    let mut squarings = 0;
    let mut scaled = *b;
    if n > 0.5 {
        squarings = (n / 0.5).log2().ceil() as u32;
        scaled = *b * (0.5f64).powi(squarings as i32);
    }
    let mut term = Multivector::scalar(1.0);
    let mut sum = term;
    for k in 1..30 {
        term = term * scaled * (1.0 / k as f64);
        sum += term;
        if term.norm() < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

impl Index<usize> for Multivector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for Multivector {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for Multivector {
    fn add_assign(&mut self, rhs: Self) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
    }
}

impl Sub for Multivector {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a -= b;
        }
        self
    }
}

impl Neg for Multivector {
    type Output = Self;
    fn neg(mut self) -> Self {
        for a in &mut self.0 {
            *a = -*a;
        }
        self
    }
}

impl Mul for Multivector {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.gp(&rhs)
    }
}

impl Mul<f64> for Multivector {
    type Output = Self;
    fn mul(mut self, rhs: f64) -> Self {
        for a in &mut self.0 {
            *a *= rhs;
        }
        self
    }
}

impl Mul<Multivector> for f64 {
    type Output = Multivector;
    fn mul(self, rhs: Multivector) -> Multivector {
        rhs * self
    }
}

impl std::iter::Sum for Multivector {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |a, b| a + b)
    }
}

pub fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn norm3(a: [f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}
