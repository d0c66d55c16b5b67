//! Dichotomic observables and projective (von Neumann) measurement.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use super::{ComplexMat2, DensityMatrix, C64, PROBABILITY_FLOOR, REJECT_TOL};
use crate::error::{LgError, Result};

/// An orthogonal projector: Hermitian and idempotent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Projector {
    mat: ComplexMat2,
}

impl Projector {
    pub fn new(mat: ComplexMat2) -> Result<Self> {
        if !mat.is_hermitian(REJECT_TOL) {
            return Err(LgError::InvalidProjector("not Hermitian".into()));
        }
        if (mat * mat).max_abs_diff(&mat) > REJECT_TOL {
            return Err(LgError::InvalidProjector("not idempotent".into()));
        }
        Ok(Self { mat })
    }

    /// |v⟩⟨v| / ⟨v|v⟩
    pub fn onto(v: [C64; 2]) -> Result<Self> {
        let n = v[0].norm_sqr() + v[1].norm_sqr();
        if !(n > 0.0) || !n.is_finite() {
            return Err(LgError::InvalidProjector("zero vector".into()));
        }
        Ok(Self {
            mat: ComplexMat2::outer(v, v) * (1.0 / n),
        })
    }

    pub(crate) fn from_unchecked(mat: ComplexMat2) -> Self {
        Self { mat }
    }

    pub fn matrix(&self) -> &ComplexMat2 {
        &self.mat
    }

    /// Tr(Pρ), clamped to [0, 1].
    pub fn probability(&self, rho: &ComplexMat2) -> f64 {
        (self.mat * *rho).trace().re.clamp(0.0, 1.0)
    }
}

/// Result of a projective measurement with nonzero probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Outcome {
    pub probability: f64,
    pub post_state: DensityMatrix,
}

/// Von Neumann measurement: probability Tr(Pρ) and post-state PρP/Tr(Pρ).
///
/// Returns [`LgError::ZeroProbability`] when the outcome cannot occur.
pub fn measure(rho: &DensityMatrix, p: &Projector) -> Result<Outcome> {
    let probability = p.probability(rho.matrix());
    if probability <= PROBABILITY_FLOOR {
        return Err(LgError::ZeroProbability);
    }
    let post = (*p.matrix() * *rho.matrix() * *p.matrix()) * (1.0 / probability);
    Ok(Outcome {
        probability,
        post_state: DensityMatrix::from_unchecked(post),
    })
}

/// The observable O = R†σ_zR with its outcome projectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Observable {
    /// Polar angle, wrapped into [−π, π).
    pub theta: f64,
    /// Azimuthal angle, wrapped into [−π/2, π/2].
    pub phi: f64,
    pub op: ComplexMat2,
    pub plus: Projector,
    pub minus: Projector,
}

impl Observable {
    /// The rotation R whose conjugation maps σ_z onto O.
    pub fn rotation(&self) -> ComplexMat2 {
        let (s, c) = (0.5 * self.theta).sin_cos();
        let e = C64::from_polar(1.0, self.phi);
        ComplexMat2::new(
            C64::new(c, 0.0),
            e * s,
            -e.conj() * s,
            C64::new(c, 0.0),
        )
    }

    /// Eigenvectors |υ±⟩ in the closed form
    /// ((cos θ ± 1) e^{iφ}, sin θ) / N±.
    ///
    /// The formula degenerates for |υ−⟩ at θ = 0 (and |υ+⟩ at θ = −π);
    /// there the basis vector it tends to is returned.
    pub fn eigenvectors(&self) -> ([C64; 2], [C64; 2]) {
        let (s, c) = self.theta.sin_cos();
        let e = C64::from_polar(1.0, self.phi);
        let vec = |sign: f64| -> [C64; 2] {
            let top = c + sign;
            let n = (s * s + top * top).sqrt();
            if n < 1e-300 {
                // sin θ = 0 and cos θ = −sign: eigenvector is |1⟩.
                return [C64::new(0.0, 0.0), C64::new(1.0, 0.0)];
            }
            [e * (top / n), C64::new(s / n, 0.0)]
        };
        (vec(1.0), vec(-1.0))
    }
}

/// Maps (θ, φ) into θ ∈ [−π, π), φ ∈ [−π/2, π/2] without changing O.
///
/// O(θ, φ + π) = O(−θ, φ), so each half-turn folded out of φ flips θ.
pub fn wrap_angles(theta: f64, phi: f64) -> (f64, f64) {
    let (mut theta, mut phi) = (theta, phi);
    if !(-FRAC_PI_2..=FRAC_PI_2).contains(&phi) {
        let k = ((phi + FRAC_PI_2) / PI).floor();
        phi -= k * PI;
        if (k as i64).rem_euclid(2) == 1 {
            theta = -theta;
        }
    }
    theta = (theta + PI).rem_euclid(TAU) - PI;
    if theta >= PI {
        theta -= TAU;
    }
    (theta, phi)
}

/// O(θ, φ) = [[cos θ, e^{iφ} sin θ], [e^{−iφ} sin θ, −cos θ]] and
/// Π± = (I ± O)/2.
pub fn observable(theta: f64, phi: f64) -> Observable {
    let (theta, phi) = wrap_angles(theta, phi);
    let (s, c) = theta.sin_cos();
    let e = C64::from_polar(1.0, phi);
    let op = ComplexMat2::new(C64::new(c, 0.0), e * s, e.conj() * s, C64::new(-c, 0.0));
    let id = ComplexMat2::identity();
    Observable {
        theta,
        phi,
        op,
        plus: Projector::from_unchecked((id + op) * 0.5),
        minus: Projector::from_unchecked((id - op) * 0.5),
    }
}
