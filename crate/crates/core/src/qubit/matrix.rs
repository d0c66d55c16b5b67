use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub use num_complex::Complex64 as C64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// A 2×2 complex matrix stored row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMat2 {
    pub entries: [C64; 4],
}

impl ComplexMat2 {
    pub const fn new(m00: C64, m01: C64, m10: C64, m11: C64) -> Self {
        Self {
            entries: [m00, m01, m10, m11],
        }
    }

    pub const fn from_real(m00: f64, m01: f64, m10: f64, m11: f64) -> Self {
        Self::new(
            C64::new(m00, 0.0),
            C64::new(m01, 0.0),
            C64::new(m10, 0.0),
            C64::new(m11, 0.0),
        )
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn sigma_x() -> Self {
        Self::new(ZERO, ONE, ONE, ZERO)
    }

    pub const fn sigma_y() -> Self {
        Self::new(ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), ZERO)
    }

    pub const fn sigma_z() -> Self {
        Self::from_real(1.0, 0.0, 0.0, -1.0)
    }

    pub const fn diag(d0: C64, d1: C64) -> Self {
        Self::new(d0, ZERO, ZERO, d1)
    }

    /// |v⟩⟨w|
    pub fn outer(v: [C64; 2], w: [C64; 2]) -> Self {
        Self::new(
            v[0] * w[0].conj(),
            v[0] * w[1].conj(),
            v[1] * w[0].conj(),
            v[1] * w[1].conj(),
        )
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[2 * row + col]
    }

    pub fn adjoint(&self) -> Self {
        let [a, b, c, d] = self.entries;
        Self::new(a.conj(), c.conj(), b.conj(), d.conj())
    }

    pub fn trace(&self) -> C64 {
        self.entries[0] + self.entries[3]
    }

    pub fn det(&self) -> C64 {
        let [a, b, c, d] = self.entries;
        a * d - b * c
    }

    pub fn scale(&self, s: C64) -> Self {
        let [a, b, c, d] = self.entries;
        Self::new(a * s, b * s, c * s, d * s)
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Eigenvalues of the Hermitian part, ascending, from the closed-form
    /// trace/determinant solution of the characteristic polynomial.
    pub fn hermitian_eigenvalues(&self) -> [f64; 2] {
        let h = (*self + self.adjoint()).scale(C64::new(0.5, 0.0));
        let half_tr = 0.5 * h.trace().re;
        let a = h.entries[0].re;
        let d = h.entries[3].re;
        let b = h.entries[1];
        // Discriminant written as a sum of squares so it never goes negative.
        let disc = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        [half_tr - disc, half_tr + disc]
    }
}

impl Default for ComplexMat2 {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Debug for ComplexMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.entries;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

impl Add for ComplexMat2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for (o, r) in out.entries.iter_mut().zip(rhs.entries) {
            *o += r;
        }
        out
    }
}

impl Sub for ComplexMat2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut out = self;
        for (o, r) in out.entries.iter_mut().zip(rhs.entries) {
            *o -= r;
        }
        out
    }
}

impl Neg for ComplexMat2 {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul for ComplexMat2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let [a, b, c, d] = self.entries;
        let [e, f, g, h] = rhs.entries;
        Self::new(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
    }
}

impl Mul<C64> for ComplexMat2 {
    type Output = Self;
    fn mul(self, rhs: C64) -> Self {
        self.scale(rhs)
    }
}

impl Mul<f64> for ComplexMat2 {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(C64::new(rhs, 0.0))
    }
}

impl Mul<ComplexMat2> for f64 {
    type Output = ComplexMat2;
    fn mul(self, rhs: ComplexMat2) -> ComplexMat2 {
        rhs.scale(C64::new(self, 0.0))
    }
}
