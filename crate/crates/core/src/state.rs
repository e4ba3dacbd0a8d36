//! Density operators, unitaries and their random ensembles.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{eigh, ComplexMatrix, EigenDecomposition, DEFAULT_DIM_CAP};
use crate::rng::{ginibre, RngSeed};

/// Relative Hermiticity tolerance for density operators.
pub const DENSITY_HERMITIAN_TOL: f64 = 1e-9;
/// Allowed `|Tr ρ − 1|` before rejection.
pub const TRACE_TOL: f64 = 1e-9;
/// Eigenvalues in `[-POSITIVITY_FLOOR, 0)` are round-off, anything lower is invalid.
pub const POSITIVITY_FLOOR: f64 = 1e-9;
pub const UNITARY_TOL: f64 = 1e-10;

/// A validated density operator.
///
/// Holds the guard-symmetrized, trace-normalized matrix together with its
/// eigendecomposition, which validation has to compute anyway and which
/// every entropy functional needs.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    spectrum: EigenDecomposition,
}

impl DensityOperator {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn eigen(&self) -> &EigenDecomposition {
        &self.spectrum
    }

    /// Eigenvalues, descending, with round-off negatives clamped to zero.
    pub fn probabilities(&self) -> Vec<f64> {
        self.spectrum.eigenvalues.iter().map(|&l| l.max(0.0)).collect()
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        let w = 1.0 / dim as f64;
        validate_density(&ComplexMatrix::from_diagonal(&vec![w; dim]))
    }
}

/// Checks Hermiticity, unit trace and positivity, then returns the
/// symmetrized operator with its trace rescaled to exactly one.
pub fn validate_density(m: &ComplexMatrix) -> Result<DensityOperator> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let deviation = m.hermiticity_deviation();
    let allowed = DENSITY_HERMITIAN_TOL * m.frobenius_norm();
    if deviation > allowed {
        return Err(Error::NotHermitian { deviation, allowed });
    }
    let trace = m.trace().re;
    if (trace - 1.0).abs() > TRACE_TOL {
        return Err(Error::NotUnitTrace { trace });
    }
    let matrix = m.hermitian_part().scale(Complex64::new(1.0 / trace, 0.0));
    let spectrum = eigh(&matrix)?;
    let min_eigenvalue = spectrum.eigenvalues.last().copied().unwrap_or(0.0);
    if min_eigenvalue < -POSITIVITY_FLOOR {
        return Err(Error::NotPositive { min_eigenvalue });
    }
    Ok(DensityOperator { matrix, spectrum })
}

/// `|v̂⟩⟨v̂|` for the normalized vector `v̂ = v/‖v‖`.
pub fn pure_state_density(v: &[Complex64]) -> Result<DensityOperator> {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if v.is_empty() || norm == 0.0 || !norm.is_finite() {
        return Err(Error::ZeroVector);
    }
    let unit: Vec<Complex64> = v.iter().map(|z| z / norm).collect();
    validate_density(&ComplexMatrix::outer(&unit, &unit))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Unitary {
    matrix: ComplexMatrix,
}

impl Unitary {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let deviation = matrix.unitarity_deviation();
        if deviation > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { matrix })
    }

    pub(crate) fn new_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `U ρ U†`, re-validated.
    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: rho.dim(),
            });
        }
        validate_density(&self.matrix.conjugate_by(rho.matrix())?)
    }
}

/// Haar-distributed unitary.
///
/// A Ginibre matrix is orthonormalized column by column with twice-iterated
/// modified Gram-Schmidt. The implied triangular factor then has a positive
/// real diagonal, which is the phase fix that makes the result Haar.
pub fn haar_unitary(dim: usize, seed: RngSeed) -> Result<Unitary> {
    check_dim(dim)?;
    let mut rng = seed.rng();
    let g = ginibre(dim, dim, &mut rng);
    let mut cols: Vec<Vec<Complex64>> = (0..dim).map(|j| g.column(j)).collect();
    for j in 0..dim {
        let (done, rest) = cols.split_at_mut(j);
        let col = &mut rest[0];
        for _ in 0..2 {
            for q in done.iter() {
                let proj: Complex64 = q.iter().zip(col.iter()).map(|(a, b)| a.conj() * b).sum();
                for (c, a) in col.iter_mut().zip(q) {
                    *c -= proj * a;
                }
            }
        }
        let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for c in col.iter_mut() {
            *c /= norm;
        }
    }
    let matrix = ComplexMatrix::from_fn(dim, dim, |i, j| cols[j][i]);
    Ok(Unitary::new_unchecked(matrix))
}

/// `ρ = GG†/Tr(GG†)` for a `dim × rank` Ginibre `G`.
pub fn random_density(dim: usize, rank: usize, seed: RngSeed) -> Result<DensityOperator> {
    check_dim(dim)?;
    if rank == 0 || rank > dim {
        return Err(Error::RankOutOfRange { rank, dim });
    }
    let mut rng = seed.rng();
    let g = ginibre(dim, rank, &mut rng);
    let mut ggh = g.matmul(&g.adjoint())?;
    let trace = ggh.trace().re;
    ggh = ggh.scale(Complex64::new(1.0 / trace, 0.0));
    validate_density(&ggh)
}

/// A uniformly random pure state `|ψ⟩⟨ψ|`.
pub fn random_pure_state(dim: usize, seed: RngSeed) -> Result<DensityOperator> {
    random_density(dim, 1, seed)
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidParameter {
            name: "dim",
            reason: "must be at least 1".into(),
        });
    }
    if dim > DEFAULT_DIM_CAP {
        return Err(Error::DimensionOverflow {
            dim,
            cap: DEFAULT_DIM_CAP,
        });
    }
    Ok(())
}
