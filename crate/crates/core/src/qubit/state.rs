//! Qubit density matrices.

use rand::Rng;

use super::{ComplexMat2, C64, REJECT_TOL, VALIDITY_TOL};
use crate::error::{LgError, Result};

/// A valid qubit state: trace one, Hermitian, positive semidefinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMat2,
}

impl DensityMatrix {
    /// Validates `mat` against the density-matrix invariants, rejecting
    /// violations larger than [`REJECT_TOL`].
    pub fn new(mat: ComplexMat2) -> Result<Self> {
        let tr = mat.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > REJECT_TOL {
            return Err(LgError::InvalidState(format!("trace is {tr}, expected 1")));
        }
        if !mat.is_hermitian(REJECT_TOL) {
            return Err(LgError::InvalidState("matrix is not Hermitian".into()));
        }
        let [lo, _] = mat.hermitian_eigenvalues();
        if lo < -REJECT_TOL {
            return Err(LgError::InvalidState(format!(
                "negative eigenvalue {lo:e}"
            )));
        }
        Ok(Self { mat })
    }

    pub(crate) fn from_unchecked(mat: ComplexMat2) -> Self {
        Self { mat }
    }

    /// ρ = |ψ⟩⟨ψ| for ψ = α|0⟩ + β|1⟩. Requires |α|² + |β|² = 1.
    pub fn from_amplitudes(alpha: C64, beta: C64) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > REJECT_TOL {
            return Err(LgError::InvalidState(format!(
                "amplitudes have squared norm {norm}"
            )));
        }
        Ok(Self::from_unchecked(ComplexMat2::outer([alpha, beta], [alpha, beta])))
    }

    /// ρ = (I + r·σ)/2 for a Bloch vector with |r| ≤ 1.
    pub fn from_bloch(r: [f64; 3]) -> Result<Self> {
        let len = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
        if !len.is_finite() || len > 1.0 + REJECT_TOL {
            return Err(LgError::InvalidState(format!(
                "Bloch vector length {len} exceeds 1"
            )));
        }
        let mat = (ComplexMat2::identity()
            + ComplexMat2::sigma_x() * r[0]
            + ComplexMat2::sigma_y() * r[1]
            + ComplexMat2::sigma_z() * r[2])
            * 0.5;
        Ok(Self::from_unchecked(mat))
    }

    pub fn ground() -> Self {
        Self::from_unchecked(ComplexMat2::from_real(1.0, 0.0, 0.0, 0.0))
    }

    pub fn excited() -> Self {
        Self::from_unchecked(ComplexMat2::from_real(0.0, 0.0, 0.0, 1.0))
    }

    /// |+⟩⟨+|
    pub fn plus() -> Self {
        Self::from_unchecked(ComplexMat2::from_real(0.5, 0.5, 0.5, 0.5))
    }

    pub fn maximally_mixed() -> Self {
        Self::from_unchecked(ComplexMat2::from_real(0.5, 0.0, 0.0, 0.5))
    }

    /// Draws a state uniformly from the Bloch ball.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let r: [f64; 3] = [
                rng.gen_range(-1.0..=1.0),
                rng.gen_range(-1.0..=1.0),
                rng.gen_range(-1.0..=1.0),
            ];
            if r.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
                return Self::from_bloch(r).expect("sampled inside the unit ball");
            }
        }
    }

    /// Draws a pure state uniformly from the Bloch sphere.
    pub fn random_pure<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let z: f64 = rng.gen_range(-1.0..=1.0);
        let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let s = (1.0 - z * z).max(0.0).sqrt();
        Self::from_bloch([s * phi.cos(), s * phi.sin(), z]).expect("unit vector")
    }

    pub fn matrix(&self) -> &ComplexMat2 {
        &self.mat
    }

    pub fn bloch_vector(&self) -> [f64; 3] {
        let off = self.mat.get(0, 1);
        [2.0 * off.re, -2.0 * off.im, (self.mat.get(0, 0) - self.mat.get(1, 1)).re]
    }

    /// ⟨0|ρ|1⟩
    pub fn coherence(&self) -> C64 {
        self.mat.get(0, 1)
    }

    pub fn purity(&self) -> f64 {
        (self.mat * self.mat).trace().re
    }

    /// Checks the invariants at the strict [`VALIDITY_TOL`] level.
    pub fn is_valid(&self) -> bool {
        let [lo, _] = self.mat.hermitian_eigenvalues();
        (self.mat.trace() - C64::new(1.0, 0.0)).norm() <= VALIDITY_TOL
            && self.mat.is_hermitian(VALIDITY_TOL)
            && lo >= -VALIDITY_TOL
    }
}
