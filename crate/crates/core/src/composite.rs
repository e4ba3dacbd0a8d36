//! Partitioned Hilbert spaces.
//!
//! Composite indices are big-endian mixed-radix: part 0 is the most
//! significant digit, so for dims `[d0, d1, d2]` the basis state
//! `|n0 n1 n2⟩` sits at `n0·d1·d2 + n1·d2 + n2`. This matches the row layout
//! of [`kron`](crate::linalg::kron) and is shared by every module.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron_with_cap, ComplexMatrix, DEFAULT_DIM_CAP, ZERO};
use crate::state::{validate_density, DensityOperator, POSITIVITY_FLOOR};

/// Allowed deviation of a joint distribution's total mass from one.
pub const DISTRIBUTION_SUM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    dims: Vec<usize>,
    total: usize,
}

impl Partition {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        Self::with_cap(dims, DEFAULT_DIM_CAP)
    }

    pub fn with_cap(dims: Vec<usize>, cap: usize) -> Result<Self> {
        if dims.is_empty() || dims.iter().any(|&d| d < 2) {
            return Err(Error::InvalidPartition { dims });
        }
        let mut total = 1usize;
        for &d in &dims {
            total = total.saturating_mul(d);
            if total > cap {
                return Err(Error::DimensionOverflow { dim: total, cap });
            }
        }
        Ok(Self { dims, total })
    }

    pub fn bipartite(d_a: usize, d_b: usize) -> Result<Self> {
        Self::new(vec![d_a, d_b])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn parts(&self) -> usize {
        self.dims.len()
    }

    pub fn total(&self) -> usize {
        self.total
    }

    /// Inverse of [`composite_index`].
    pub fn decompose(&self, mut index: usize) -> Result<Vec<usize>> {
        if index >= self.total {
            return Err(Error::IndexOutOfRange {
                index,
                extent: self.total,
            });
        }
        let mut digits = vec![0; self.dims.len()];
        for (slot, &d) in digits.iter_mut().zip(&self.dims).rev() {
            *slot = index % d;
            index /= d;
        }
        Ok(digits)
    }

    fn check_operator(&self, rho: &DensityOperator) -> Result<()> {
        if rho.dim() != self.total {
            return Err(Error::PartitionMismatch {
                expected: self.total,
                found: rho.dim(),
            });
        }
        Ok(())
    }
}

/// `n = Σᵢ nᵢ · Πⱼ>ᵢ dⱼ`.
pub fn composite_index(p: &Partition, part_indices: &[usize]) -> Result<usize> {
    if part_indices.len() != p.parts() {
        return Err(Error::LengthMismatch {
            left: part_indices.len(),
            right: p.parts(),
        });
    }
    let mut n = 0;
    for (&ni, &d) in part_indices.iter().zip(p.dims()) {
        if ni >= d {
            return Err(Error::IndexOutOfRange { index: ni, extent: d });
        }
        n = n * d + ni;
    }
    Ok(n)
}

/// Kronecker product of the factors, in order.
pub fn tensor_product_state(factors: &[DensityOperator]) -> Result<DensityOperator> {
    let (first, rest) = factors.split_first().ok_or(Error::EmptyFactorList)?;
    if rest.is_empty() {
        return Ok(first.clone());
    }
    let mut acc = first.matrix().clone();
    for f in rest {
        acc = kron_with_cap(&acc, f.matrix(), DEFAULT_DIM_CAP)?;
    }
    validate_density(&acc)
}

/// Reduced operator on the parts in `keep`, which are kept in their
/// original order regardless of how `keep` is listed.
pub fn partial_trace(rho: &DensityOperator, p: &Partition, keep: &[usize]) -> Result<DensityOperator> {
    p.check_operator(rho)?;
    if keep.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    let mut kept = vec![false; p.parts()];
    for &k in keep {
        if k >= p.parts() {
            return Err(Error::IndexOutOfRange {
                index: k,
                extent: p.parts(),
            });
        }
        kept[k] = true;
    }
    if kept.iter().all(|&k| k) {
        return Ok(rho.clone());
    }

    let kept_dim: usize = p.dims().iter().zip(&kept).filter(|(_, &k)| k).map(|(d, _)| d).product();
    let traced_dim = p.total() / kept_dim;

    // Split every full index into (kept index, traced index), then group by
    // the traced index: only entries sharing it contribute.
    let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::with_capacity(kept_dim); traced_dim];
    for full in 0..p.total() {
        let digits = p.decompose(full)?;
        let (mut ki, mut ti) = (0, 0);
        for ((&digit, &d), &is_kept) in digits.iter().zip(p.dims()).zip(&kept) {
            if is_kept {
                ki = ki * d + digit;
            } else {
                ti = ti * d + digit;
            }
        }
        groups[ti].push((full, ki));
    }

    let m = rho.matrix();
    let mut out = vec![ZERO; kept_dim * kept_dim];
    for group in &groups {
        for &(i, ki) in group {
            for &(j, kj) in group {
                out[ki * kept_dim + kj] += m[(i, j)];
            }
        }
    }
    validate_density(&ComplexMatrix::new(kept_dim, kept_dim, out)?)
}

/// Single-part reduced operators `ρᵢ = Tr_{≠i} ρ`, in part order.
pub fn marginals(rho: &DensityOperator, p: &Partition) -> Result<Vec<DensityOperator>> {
    (0..p.parts()).map(|i| partial_trace(rho, p, &[i])).collect()
}

/// Nonselective collapse: replaces `ρ` by `⊗ᵢ Tr_{≠i} ρ`.
pub fn collapse_to_product(rho: &DensityOperator, p: &Partition) -> Result<DensityOperator> {
    p.check_operator(rho)?;
    if p.parts() == 1 {
        return Ok(rho.clone());
    }
    tensor_product_state(&marginals(rho, p)?)
}

/// Probability table `W[n_a, n_b]` over a bipartite product basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointDistribution {
    dims: (usize, usize),
    weights: Vec<f64>,
}

impl JointDistribution {
    pub fn new(d_a: usize, d_b: usize, weights: Vec<f64>) -> Result<Self> {
        if d_a == 0 || d_b == 0 {
            return Err(Error::InvalidParameter {
                name: "dims",
                reason: format!("{d_a}x{d_b} has a zero extent"),
            });
        }
        if weights.len() != d_a * d_b {
            return Err(Error::EntryCount {
                expected: d_a * d_b,
                found: weights.len(),
            });
        }
        if let Some((index, &value)) = weights.iter().enumerate().find(|(_, w)| !w.is_finite() || **w < 0.0) {
            return Err(Error::NegativeWeight { index, value });
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > DISTRIBUTION_SUM_TOL {
            return Err(Error::NotNormalized { sum });
        }
        Ok(Self {
            dims: (d_a, d_b),
            weights,
        })
    }

    /// Normalizes nonnegative raw weights before validating.
    pub fn from_unnormalized(d_a: usize, d_b: usize, raw: Vec<f64>) -> Result<Self> {
        let sum: f64 = raw.iter().sum();
        if sum.is_nan() || sum <= 0.0 {
            return Err(Error::NotNormalized { sum });
        }
        Self::new(d_a, d_b, raw.into_iter().map(|w| w / sum).collect())
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    /// Row-major weights.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.weights[a * self.dims.1 + b]
    }

    /// `Wₐ = Σ_b W[a, b]`.
    pub fn row_marginal(&self) -> Vec<f64> {
        self.weights.chunks(self.dims.1).map(|row| row.iter().sum()).collect()
    }

    /// `W′_b = Σ_a W[a, b]`.
    pub fn column_marginal(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dims.1];
        for row in self.weights.chunks(self.dims.1) {
            for (o, w) in out.iter_mut().zip(row) {
                *o += w;
            }
        }
        out
    }
}

/// Diagonal of a bipartite `ρ` in the product basis, read as a joint distribution.
pub fn joint_diagonal_distribution(rho: &DensityOperator, p: &Partition) -> Result<JointDistribution> {
    if p.parts() != 2 {
        return Err(Error::NotBipartite { parts: p.parts() });
    }
    p.check_operator(rho)?;
    let (d_a, d_b) = (p.dims()[0], p.dims()[1]);
    let m = rho.matrix();
    let mut weights = Vec::with_capacity(p.total());
    for a in 0..d_a {
        for b in 0..d_b {
            let n = composite_index(p, &[a, b])?;
            let w = m[(n, n)].re;
            if w < -POSITIVITY_FLOOR {
                return Err(Error::NotPositive { min_eigenvalue: w });
            }
            weights.push(w.max(0.0));
        }
    }
    JointDistribution::new(d_a, d_b, weights)
}

/// The Bell state `(|00⟩ + |11⟩)/√2` on two qubits.
pub fn bell_state() -> DensityOperator {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let v = [Complex64::new(s, 0.0), ZERO, ZERO, Complex64::new(s, 0.0)];
    crate::state::pure_state_density(&v).expect("Bell vector is nonzero")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frobenius_distance;
    use crate::rng::RngSeed;
    use crate::state::random_density;

    #[test]
    fn composite_index_convention() {
        let p = Partition::new(vec![2, 2]).unwrap();
        assert_eq!(composite_index(&p, &[0, 0]).unwrap(), 0);
        assert_eq!(composite_index(&p, &[1, 0]).unwrap(), 2);
        let p = Partition::new(vec![2, 3]).unwrap();
        assert_eq!(composite_index(&p, &[1, 2]).unwrap(), 5);
        assert!(matches!(
            composite_index(&p, &[0, 3]),
            Err(Error::IndexOutOfRange { index: 3, extent: 3 })
        ));
        assert!(composite_index(&p, &[0]).is_err());
    }

    #[test]
    fn decompose_inverts_composite_index() {
        let p = Partition::new(vec![3, 2, 4]).unwrap();
        for n in 0..p.total() {
            let digits = p.decompose(n).unwrap();
            assert_eq!(composite_index(&p, &digits).unwrap(), n);
        }
        assert!(p.decompose(24).is_err());
    }

    #[test]
    fn partition_validation() {
        assert!(matches!(Partition::new(vec![]), Err(Error::InvalidPartition { .. })));
        assert!(matches!(Partition::new(vec![2, 1]), Err(Error::InvalidPartition { .. })));
        assert!(matches!(
            Partition::with_cap(vec![8, 8, 8], 256),
            Err(Error::DimensionOverflow { .. })
        ));
        assert_eq!(Partition::new(vec![2, 3, 2]).unwrap().total(), 12);
    }

    #[test]
    fn tensor_product_examples() {
        let half = DensityOperator::maximally_mixed(2).unwrap();
        let single = tensor_product_state(std::slice::from_ref(&half)).unwrap();
        assert_eq!(single.matrix(), half.matrix());
        let both = tensor_product_state(&[half.clone(), half]).unwrap();
        assert!(frobenius_distance(both.matrix(), &ComplexMatrix::from_diagonal(&[0.25; 4])).unwrap() < 1e-15);
        assert!(matches!(tensor_product_state(&[]), Err(Error::EmptyFactorList)));
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let p = Partition::new(vec![2, 2]).unwrap();
        let a = partial_trace(&bell_state(), &p, &[0]).unwrap();
        assert!(frobenius_distance(a.matrix(), &ComplexMatrix::from_diagonal(&[0.5, 0.5])).unwrap() < 1e-15);
    }

    #[test]
    fn partial_trace_recovers_product_factors() {
        let ra = random_density(2, 2, RngSeed::new(1)).unwrap();
        let rb = random_density(3, 2, RngSeed::new(2)).unwrap();
        let p = Partition::new(vec![2, 3]).unwrap();
        let joint = tensor_product_state(&[ra.clone(), rb.clone()]).unwrap();
        let a = partial_trace(&joint, &p, &[0]).unwrap();
        let b = partial_trace(&joint, &p, &[1]).unwrap();
        for (x, y) in a.matrix().as_slice().iter().zip(ra.matrix().as_slice()) {
            assert!((x - y).norm() <= 1e-12);
        }
        for (x, y) in b.matrix().as_slice().iter().zip(rb.matrix().as_slice()) {
            assert!((x - y).norm() <= 1e-12);
        }
    }

    #[test]
    fn partial_trace_errors_and_identity() {
        let p = Partition::new(vec![2, 2]).unwrap();
        let rho = bell_state();
        assert!(matches!(partial_trace(&rho, &p, &[]), Err(Error::EmptyKeepSet)));
        assert!(matches!(partial_trace(&rho, &p, &[2]), Err(Error::IndexOutOfRange { .. })));
        let q = Partition::new(vec![2, 3]).unwrap();
        assert!(matches!(partial_trace(&rho, &q, &[0]), Err(Error::PartitionMismatch { .. })));
        let all = partial_trace(&rho, &p, &[1, 0]).unwrap();
        assert_eq!(all.matrix(), rho.matrix());
    }

    #[test]
    fn collapse_examples() {
        let p = Partition::new(vec![2, 2]).unwrap();
        let collapsed = collapse_to_product(&bell_state(), &p).unwrap();
        assert!(frobenius_distance(collapsed.matrix(), &ComplexMatrix::from_diagonal(&[0.25; 4])).unwrap() < 1e-15);

        let product = tensor_product_state(&[
            random_density(2, 1, RngSeed::new(4)).unwrap(),
            random_density(2, 2, RngSeed::new(5)).unwrap(),
        ])
        .unwrap();
        let again = collapse_to_product(&product, &p).unwrap();
        assert!(frobenius_distance(again.matrix(), product.matrix()).unwrap() < 1e-12);
    }

    #[test]
    fn collapse_preserves_marginals() {
        let p = Partition::new(vec![2, 2, 2]).unwrap();
        let rho = random_density(8, 8, RngSeed::new(77)).unwrap();
        let collapsed = collapse_to_product(&rho, &p).unwrap();
        for i in 0..3 {
            let before = partial_trace(&rho, &p, &[i]).unwrap();
            let after = partial_trace(&collapsed, &p, &[i]).unwrap();
            assert!(frobenius_distance(before.matrix(), after.matrix()).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn joint_distribution_examples() {
        let p = Partition::new(vec![2, 2]).unwrap();
        let rho = crate::state::validate_density(&ComplexMatrix::from_diagonal(&[0.1, 0.2, 0.3, 0.4])).unwrap();
        let w = joint_diagonal_distribution(&rho, &p).unwrap();
        for (x, y) in w.weights().iter().zip([0.1, 0.2, 0.3, 0.4]) {
            assert!((x - y).abs() < 1e-15);
        }
        let w = joint_diagonal_distribution(&bell_state(), &p).unwrap();
        for (x, y) in w.weights().iter().zip([0.5, 0.0, 0.0, 0.5]) {
            assert!((x - y).abs() < 1e-15);
        }
        let q = Partition::new(vec![2, 2, 2]).unwrap();
        let rho8 = random_density(8, 2, RngSeed::new(1)).unwrap();
        assert!(matches!(
            joint_diagonal_distribution(&rho8, &q),
            Err(Error::NotBipartite { parts: 3 })
        ));
    }

    #[test]
    fn joint_distribution_validation() {
        assert!(matches!(
            JointDistribution::new(1, 2, vec![1.5, -0.5]),
            Err(Error::NegativeWeight { index: 1, .. })
        ));
        assert!(matches!(
            JointDistribution::new(1, 2, vec![0.5, 0.4]),
            Err(Error::NotNormalized { .. })
        ));
        let w = JointDistribution::new(2, 2, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(w.row_marginal().len(), 2);
        assert!((w.row_marginal()[0] - 0.3).abs() < 1e-15);
        assert!((w.column_marginal()[1] - 0.6).abs() < 1e-15);
    }
}
