//! Kraus-operator channels.

use super::{ComplexMat2, DensityMatrix, REJECT_TOL};
use crate::error::{LgError, Result};

/// Operators {Kᵢ} of a completely positive map ρ ↦ Σᵢ Kᵢ ρ Kᵢ†.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausSet {
    operators: Vec<ComplexMat2>,
}

impl KrausSet {
    /// Builds a set, rejecting it if Σ K†K deviates from I by more than
    /// [`REJECT_TOL`].
    pub fn new(operators: Vec<ComplexMat2>) -> Result<Self> {
        let set = Self { operators };
        let residual = set.completeness_residual();
        if residual > REJECT_TOL {
            return Err(LgError::IncompleteKraus { residual });
        }
        Ok(set)
    }

    /// Builds a set without checking completeness.
    pub fn from_operators_unchecked(operators: Vec<ComplexMat2>) -> Self {
        Self { operators }
    }

    pub fn identity() -> Self {
        Self {
            operators: vec![ComplexMat2::identity()],
        }
    }

    pub fn operators(&self) -> &[ComplexMat2] {
        &self.operators
    }

    /// max |Σ K†K − I| entrywise.
    pub fn completeness_residual(&self) -> f64 {
        self.operators
            .iter()
            .fold(ComplexMat2::zero(), |acc, k| acc + k.adjoint() * *k)
            .max_abs_diff(&ComplexMat2::identity())
    }

    /// Σ K M K† for an arbitrary (not necessarily Hermitian) matrix.
    pub fn apply_to(&self, m: &ComplexMat2) -> ComplexMat2 {
        self.operators
            .iter()
            .fold(ComplexMat2::zero(), |acc, k| acc + *k * *m * k.adjoint())
    }

    /// Heisenberg-picture action Σ K† M K.
    pub fn apply_adjoint_to(&self, m: &ComplexMat2) -> ComplexMat2 {
        self.operators
            .iter()
            .fold(ComplexMat2::zero(), |acc, k| acc + k.adjoint() * *m * *k)
    }

    /// Sequential composition: first `self`, then `next`.
    pub fn then(&self, next: &KrausSet) -> KrausSet {
        let operators = next
            .operators
            .iter()
            .flat_map(|b| self.operators.iter().map(move |a| *b * *a))
            .collect();
        KrausSet { operators }
    }
}

/// Applies the channel to a state, ρ ↦ Σ K ρ K†.
pub fn apply_channel(rho: &DensityMatrix, ks: &KrausSet) -> Result<DensityMatrix> {
    let residual = ks.completeness_residual();
    if residual > REJECT_TOL {
        return Err(LgError::IncompleteKraus { residual });
    }
    Ok(DensityMatrix::from_unchecked(ks.apply_to(rho.matrix())))
}
