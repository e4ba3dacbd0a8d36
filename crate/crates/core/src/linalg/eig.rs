//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation acts on one pivot pair `(p, q)`. The pivot entry
//! `a_pq = r·e^{iφ}` is first made real by a phase, then annihilated by a
//! plane rotation. The combined two-by-two unitary is
//!
//! ```text
//! J = [  c          s·e^{iφ} ]
//!     [ -s·e^{-iφ}  c        ]
//! ```
//!
//! with `t = sgn(θ) / (|θ| + √(θ²+1))`, `θ = (a_qq − a_pp) / 2r`,
//! `c = 1/√(1+t²)`, `s = t·c`. The update is `A ← J† A J`, `V ← V J`.

use num_complex::Complex64;

use super::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};

/// Convergence threshold on `‖offdiag(A)‖_F / ‖M‖_F`.
pub const DEFAULT_EIG_TOL: f64 = 1e-12;
/// Sweep budget before [`Error::NoConvergence`].
pub const MAX_SWEEPS: usize = 100;
/// Relative Hermiticity tolerance accepted on input.
pub const HERMITIAN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    /// Sorted descending. Order within a degenerate cluster is unspecified.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector for `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// `V diag(f(λ)) V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        let weights: Vec<Complex64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ZERO;
                for (k, w) in weights.iter().enumerate() {
                    acc += v[(i, k)] * w * v[(j, k)].conj();
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// `V Λ V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| Complex64::new(l, 0.0))
    }
}

/// Eigendecomposition at the default tolerance.
pub fn eigh(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    hermitian_eig(m, DEFAULT_EIG_TOL)
}

pub fn hermitian_eig(m: &ComplexMatrix, tol: f64) -> Result<EigenDecomposition> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let norm = m.frobenius_norm();
    let deviation = m.hermiticity_deviation();
    let allowed = HERMITIAN_TOL * norm;
    if deviation > allowed {
        return Err(Error::NotHermitian { deviation, allowed });
    }

    let mut a = m.hermitian_part().into_vec();
    let mut vt = ComplexMatrix::identity(n).into_vec();
    let threshold = tol * norm;

    let mut converged = false;
    let mut off = off_diagonal_norm(&a, n);
    for _ in 0..MAX_SWEEPS {
        if off <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut vt, n, p, q);
            }
        }
        off = off_diagonal_norm(&a, n);
    }
    if !converged && off > threshold {
        return Err(Error::NoConvergence {
            sweeps: MAX_SWEEPS,
            off_norm: off,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    order.sort_by(|&x, &y| diag[y].total_cmp(&diag[x]));
    let eigenvalues = order.iter().map(|&k| diag[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| vt[order[j] * n + i]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(a: &[Complex64], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[i * n + j].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Rows `p < q` of a row-major `n × n` buffer.
fn two_rows(buf: &mut [Complex64], n: usize, p: usize, q: usize) -> (&mut [Complex64], &mut [Complex64]) {
    let (lo, hi) = buf.split_at_mut(q * n);
    (&mut lo[p * n..(p + 1) * n], &mut hi[..n])
}

/// Applies `A ← J† A J` and `V ← V J`, with `vt` holding `V` transposed.
fn rotate(a: &mut [Complex64], vt: &mut [Complex64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let r = apq.norm();
    if r < f64::MIN_POSITIVE {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let phase = apq / r;
    let j_pq = phase * s;
    let j_qp = -phase.conj() * s;

    // The 2×2 block is handled in closed form, the rest of rows p and q
    // directly; columns follow from Hermiticity.
    let (pp, qq) = {
        let m00 = app * c + apq * j_qp;
        let m01 = app * j_pq + apq * c;
        let m10 = apq.conj() * c + aqq * j_qp;
        let m11 = apq.conj() * j_pq + aqq * c;
        let pp = m00 * c + m10 * j_qp.conj();
        let qq = m01 * j_pq.conj() + m11 * c;
        (pp.re, qq.re)
    };
    let (row_p, row_q) = two_rows(a, n, p, q);
    for (apk, aqk) in row_p.iter_mut().zip(row_q.iter_mut()) {
        let (x, y) = (*apk, *aqk);
        *apk = x * c + y * j_qp.conj();
        *aqk = x * j_pq.conj() + y * c;
    }
    row_p[p] = Complex64::new(pp, 0.0);
    row_q[q] = Complex64::new(qq, 0.0);
    row_p[q] = ZERO;
    row_q[p] = ZERO;
    for k in 0..n {
        if k != p && k != q {
            a[k * n + p] = a[p * n + k].conj();
            a[k * n + q] = a[q * n + k].conj();
        }
    }
    let (vp, vq) = two_rows(vt, n, p, q);
    for (x, y) in vp.iter_mut().zip(vq.iter_mut()) {
        let (vkp, vkq) = (*x, *y);
        *x = vkp * c + vkq * j_qp;
        *y = vkp * j_pq + vkq * c;
    }
}
