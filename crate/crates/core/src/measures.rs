//! Information and entropy functionals, in nats.
//!
//! The information of a state is `I = Tr ρ ln ρ = Σₙ Wₙ ln Wₙ` over its
//! eigenvalues; it is the negative of the von Neumann entropy. Partition
//! entropy is the sum of per-part entropies `Sᵢ = −k_B Tr ρᵢ ln ρᵢ`.

use serde::{Deserialize, Serialize};

use crate::composite::{marginals, Partition};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ZERO};
use crate::state::{DensityOperator, Unitary};

/// Eigenvalues at or below this contribute nothing to `Σ W ln W`.
pub const EIGENVALUE_FLOOR: f64 = 1e-12;
/// Basis probabilities this far below zero are clamped to zero.
pub const BASIS_CLAMP: f64 = 1e-12;
pub const ORTHONORMAL_TOL: f64 = 1e-10;

/// `Σ w ln w` over the weights above [`EIGENVALUE_FLOOR`].
pub fn weighted_log_sum(weights: &[f64]) -> f64 {
    weights
        .iter()
        .filter(|&&w| w > EIGENVALUE_FLOOR)
        .map(|&w| w * w.ln())
        .sum()
}

pub fn information(rho: &DensityOperator) -> f64 {
    weighted_log_sum(&rho.eigen().eigenvalues)
}

/// Von Neumann entropy `−Tr ρ ln ρ` in nats.
pub fn von_neumann_entropy(rho: &DensityOperator) -> f64 {
    -information(rho)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    /// `Sᵢ`, in units of `k_B`·nats.
    pub per_part: Vec<f64>,
    pub total: f64,
    pub k_b: f64,
    /// `Σᵢ Tr ρᵢ ln ρᵢ`, in nats.
    pub information_sum: f64,
}

pub fn entropy_of_partition(rho: &DensityOperator, p: &Partition, k_b: f64) -> Result<EntropyReport> {
    if !k_b.is_finite() || k_b <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "k_b",
            reason: format!("must be positive and finite, got {k_b}"),
        });
    }
    let parts = marginals(rho, p)?;
    let infos: Vec<f64> = parts.iter().map(information).collect();
    let information_sum: f64 = infos.iter().sum();
    let per_part = infos.iter().map(|&i| -k_b * i).collect();
    Ok(EntropyReport {
        per_part,
        total: -k_b * information_sum,
        k_b,
        information_sum,
    })
}

/// An orthonormal basis `{|m⟩}`, stored as the columns of a square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableBasis {
    vectors: ComplexMatrix,
}

impl ObservableBasis {
    pub fn new(vectors: ComplexMatrix) -> Result<Self> {
        if !vectors.is_square() {
            return Err(Error::NotSquare {
                rows: vectors.rows(),
                cols: vectors.cols(),
            });
        }
        let deviation = vectors.unitarity_deviation();
        if deviation > ORTHONORMAL_TOL {
            return Err(Error::NotOrthonormal { deviation });
        }
        Ok(Self { vectors })
    }

    pub fn computational(dim: usize) -> Self {
        Self {
            vectors: ComplexMatrix::identity(dim),
        }
    }

    /// The natural basis of `ρ`, in which it is diagonal.
    pub fn eigenbasis(rho: &DensityOperator) -> Self {
        Self {
            vectors: rho.eigen().eigenvectors.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.vectors.rows()
    }

    pub fn vectors(&self) -> &ComplexMatrix {
        &self.vectors
    }

    /// `W′ₘ = ⟨m|ρ|m⟩`.
    pub fn probabilities(&self, rho: &DensityOperator) -> Result<Vec<f64>> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: rho.dim(),
            });
        }
        let (v, m, n) = (&self.vectors, rho.matrix(), self.dim());
        let mut out = Vec::with_capacity(n);
        for col in 0..n {
            let mut acc = ZERO;
            for i in 0..n {
                let vi = v[(i, col)].conj();
                for j in 0..n {
                    acc += vi * m[(i, j)] * v[(j, col)];
                }
            }
            let w = acc.re;
            out.push(if (-BASIS_CLAMP..0.0).contains(&w) { 0.0 } else { w });
        }
        Ok(out)
    }
}

impl From<Unitary> for ObservableBasis {
    fn from(u: Unitary) -> Self {
        Self {
            vectors: u.matrix().clone(),
        }
    }
}

/// `I_[L] = Σₘ W′ₘ ln W′ₘ`, the information about the observables diagonal in `basis`.
pub fn basis_information(rho: &DensityOperator, basis: &ObservableBasis) -> Result<f64> {
    Ok(weighted_log_sum(&basis.probabilities(rho)?))
}

/// `I − Σᵢ Iᵢ`, the information held only in correlations between parts.
///
/// A single-part partition has no correlations and yields exactly zero.
pub fn correlation_information(rho: &DensityOperator, p: &Partition) -> Result<f64> {
    if p.parts() == 1 {
        if rho.dim() != p.total() {
            return Err(Error::PartitionMismatch {
                expected: p.total(),
                found: rho.dim(),
            });
        }
        return Ok(0.0);
    }
    let report = entropy_of_partition(rho, p, 1.0)?;
    Ok(information(rho) - report.information_sum)
}
