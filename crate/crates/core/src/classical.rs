//! Classical inequalities behind subadditivity.
//!
//! Each function returns the *gap* of one inequality, the amount by which
//! the larger side exceeds the smaller. Every gap is nonnegative in exact
//! arithmetic; the audit suites in [`crate::audit`] check that numerically.
//!
//! - [`xlnx_gap`]: `x ln x ≥ x − 1` for `x > 0`, equality only at `x = 1`.
//! - [`mixing_inequality_gap`]: `w̄ ln w̄ ≤ Σ xᵢ wᵢ ln wᵢ` where `w̄ = Σ xᵢ wᵢ`.
//! - [`contract_distribution`]: a doubly stochastic map never increases `Σ W ln W`.
//! - [`joint_subadditivity_gap`]: `Σ Wᵢⱼ ln Wᵢⱼ ≥ Σ Wᵢ ln Wᵢ + Σ W′ⱼ ln W′ⱼ`,
//!   equality iff the table factorizes.

use serde::{Deserialize, Serialize};

use crate::composite::JointDistribution;
use crate::error::{Error, Result};
use crate::state::Unitary;

/// Entries below this count as zero where strict positivity is required.
pub const STRICT_POSITIVITY_FLOOR: f64 = 1e-300;
pub const STOCHASTIC_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityVector {
    weights: Vec<f64>,
}

impl ProbabilityVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::NotNormalized { sum: 0.0 });
        }
        if let Some((index, &value)) = weights.iter().enumerate().find(|(_, w)| !w.is_finite() || **w < 0.0) {
            return Err(Error::NegativeWeight { index, value });
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > STOCHASTIC_TOL {
            return Err(Error::NotNormalized { sum });
        }
        Ok(Self { weights })
    }

    pub fn from_unnormalized(raw: Vec<f64>) -> Result<Self> {
        let sum: f64 = raw.iter().sum();
        if !sum.is_finite() || sum <= 0.0 {
            return Err(Error::NotNormalized { sum });
        }
        Self::new(raw.into_iter().map(|w| w / sum).collect())
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(vec![1.0 / n as f64; n])
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `Σ w ln w` with `0 ln 0 = 0`.
    pub fn information(&self) -> f64 {
        self.weights.iter().filter(|&&w| w > 0.0).map(|&w| w * w.ln()).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoublyStochasticMatrix {
    size: usize,
    entries: Vec<f64>,
}

impl DoublyStochasticMatrix {
    /// Row-major `size × size` entries; all row and column sums must be 1.
    pub fn new(size: usize, entries: Vec<f64>) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidParameter {
                name: "size",
                reason: "must be at least 1".into(),
            });
        }
        if entries.len() != size * size {
            return Err(Error::EntryCount {
                expected: size * size,
                found: entries.len(),
            });
        }
        if let Some((index, &value)) = entries.iter().enumerate().find(|(_, t)| !t.is_finite() || **t < 0.0) {
            return Err(Error::NegativeWeight { index, value });
        }
        for (index, row) in entries.chunks(size).enumerate() {
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::NotDoublyStochastic { axis: "row", index, sum });
            }
        }
        for index in 0..size {
            let sum: f64 = (0..size).map(|i| entries[i * size + index]).sum();
            if (sum - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::NotDoublyStochastic {
                    axis: "column",
                    index,
                    sum,
                });
            }
        }
        Ok(Self { size, entries })
    }

    pub fn identity(size: usize) -> Self {
        let mut entries = vec![0.0; size * size];
        for i in 0..size {
            entries[i * size + i] = 1.0;
        }
        Self { size, entries }
    }

    pub fn uniform(size: usize) -> Self {
        Self {
            size,
            entries: vec![1.0 / size as f64; size * size],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.size + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Largest `|row or column sum − 1|`.
    pub fn stochastic_deviation(&self) -> f64 {
        let n = self.size;
        let rows = self.entries.chunks(n).map(|r| (r.iter().sum::<f64>() - 1.0).abs());
        let cols = (0..n).map(|j| ((0..n).map(|i| self.entries[i * n + j]).sum::<f64>() - 1.0).abs());
        rows.chain(cols).fold(0.0, f64::max)
    }
}

/// `x ln x − (x − 1)`.
pub fn xlnx_gap(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::NonPositiveInput { value: x });
    }
    Ok(x * x.ln() - (x - 1.0))
}

/// `Σ xᵢwᵢ ln wᵢ − w̄ ln w̄` with `w̄ = Σ xᵢwᵢ`.
pub fn mixing_inequality_gap(x: &ProbabilityVector, w: &[f64]) -> Result<f64> {
    if x.len() != w.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: w.len(),
        });
    }
    if let Some((index, &value)) = w.iter().enumerate().find(|(_, v)| !v.is_finite() || **v <= 0.0) {
        return Err(Error::NonPositiveWeight { index, value });
    }
    let mean: f64 = x.weights().iter().zip(w).map(|(xi, wi)| xi * wi).sum();
    let weighted: f64 = x.weights().iter().zip(w).map(|(xi, wi)| xi * wi * wi.ln()).sum();
    Ok(weighted - mean * mean.ln())
}

/// Applies `W′ⱼ = Σᵢ WᵢTᵢⱼ` and returns `W′` with the gap `Σ W ln W − Σ W′ ln W′`.
pub fn contract_distribution(
    w: &ProbabilityVector,
    t: &DoublyStochasticMatrix,
) -> Result<(ProbabilityVector, f64)> {
    if w.len() != t.size() {
        return Err(Error::SizeMismatch {
            left: w.len(),
            right: t.size(),
        });
    }
    if let Some((index, &value)) = w.weights().iter().enumerate().find(|(_, v)| **v < STRICT_POSITIVITY_FLOOR) {
        return Err(Error::NonPositiveProbability { index, value });
    }
    let n = t.size();
    let mut out = vec![0.0; n];
    for (i, wi) in w.weights().iter().enumerate() {
        for (j, o) in out.iter_mut().enumerate() {
            *o += wi * t.get(i, j);
        }
    }
    let contracted = ProbabilityVector::new(out)?;
    let gap = w.information() - contracted.information();
    Ok((contracted, gap))
}

/// Marginals `(Wᵢ, W′ⱼ)` of a strictly positive table and the gap
/// `Σ Wᵢⱼ ln Wᵢⱼ − Σ Wᵢ ln Wᵢ − Σ W′ⱼ ln W′ⱼ`.
pub fn joint_subadditivity_gap(
    w: &JointDistribution,
) -> Result<(ProbabilityVector, ProbabilityVector, f64)> {
    let (_, d_b) = w.dims();
    if let Some((index, &value)) = w.weights().iter().enumerate().find(|(_, v)| **v < STRICT_POSITIVITY_FLOOR) {
        return Err(Error::NonPositiveEntry {
            row: index / d_b,
            col: index % d_b,
            value,
        });
    }
    let rows = ProbabilityVector::new(w.row_marginal())?;
    let cols = ProbabilityVector::new(w.column_marginal())?;
    let joint: f64 = w.weights().iter().map(|&x| x * x.ln()).sum();
    let gap = joint - rows.information() - cols.information();
    Ok((rows, cols, gap))
}

/// `Tₙₘ = |Uₙₘ|²`.
pub fn unistochastic_from_unitary(u: &Unitary) -> DoublyStochasticMatrix {
    let n = u.dim();
    DoublyStochasticMatrix {
        size: n,
        entries: u.matrix().as_slice().iter().map(|z| z.norm_sqr()).collect(),
    }
}
