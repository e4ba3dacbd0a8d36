//! Reference implementations shared by the integration tests. They avoid
//! the library's own index helpers and eigensolver on purpose.

#![allow(dead_code)]

use entroflow_core::linalg::ComplexMatrix;
use num_complex::Complex64;

pub type Dense = Vec<Vec<Complex64>>;

pub fn to_dense(m: &ComplexMatrix) -> Dense {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m[(i, j)]).collect()).collect()
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Partial trace by brute force over all pairs of full indices: a pair
/// contributes when every traced digit agrees.
pub fn naive_partial_trace(rho: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Dense {
    let n: usize = dims.iter().product();
    let st = strides(dims);
    let digit = |i: usize, k: usize| (i / st[k]) % dims[k];
    let kept: Vec<usize> = (0..dims.len()).filter(|k| keep.contains(k)).collect();
    let kept_dims: Vec<usize> = kept.iter().map(|&k| dims[k]).collect();
    let kst = strides(&kept_dims);
    let m: usize = kept_dims.iter().product();
    let reduced = |i: usize| kept.iter().zip(&kst).map(|(&k, &s)| digit(i, k) * s).sum::<usize>();

    let mut out = vec![vec![Complex64::new(0.0, 0.0); m]; m];
    for i in 0..n {
        for j in 0..n {
            let traced_agree = (0..dims.len())
                .filter(|k| !keep.contains(k))
                .all(|k| digit(i, k) == digit(j, k));
            if traced_agree {
                out[reduced(i)][reduced(j)] += rho[(i, j)];
            }
        }
    }
    out
}

fn identity(n: usize) -> Dense {
    (0..n)
        .map(|i| (0..n).map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect()
}

fn mul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut c = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            for j in 0..n {
                c[i][j] += aik * b[k][j];
            }
        }
    }
    c
}

fn lin(a: &Dense, alpha: f64, b: &Dense, beta: f64) -> Dense {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x * alpha + y * beta).collect())
        .collect()
}

fn norm(a: &Dense) -> f64 {
    a.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Gauss-Jordan inverse with partial pivoting.
fn inverse(a: &Dense) -> Dense {
    let n = a.len();
    let mut m = a.clone();
    let mut inv = identity(n);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| m[x][col].norm().total_cmp(&m[y][col].norm()))
            .unwrap();
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let p = m[col][col];
        for j in 0..n {
            m[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r != col {
                let f = m[r][col];
                if f != Complex64::new(0.0, 0.0) {
                    for j in 0..n {
                        let (mc, ic) = (m[col][j], inv[col][j]);
                        m[r][j] -= f * mc;
                        inv[r][j] -= f * ic;
                    }
                }
            }
        }
    }
    inv
}

/// Principal square root by the Denman-Beavers iteration.
fn sqrtm(a: &Dense) -> Dense {
    let mut y = a.clone();
    let mut z = identity(a.len());
    for _ in 0..100 {
        let (yi, zi) = (inverse(&y), inverse(&z));
        let ny = lin(&y, 0.5, &zi, 0.5);
        let nz = lin(&z, 0.5, &yi, 0.5);
        let delta = norm(&lin(&ny, 1.0, &y, -1.0));
        y = ny;
        z = nz;
        if delta <= 1e-15 * norm(&y) {
            break;
        }
    }
    y
}

/// Logarithm of a positive definite matrix by inverse scaling and squaring:
/// take square roots until close to the identity, sum the Mercator series,
/// then scale back up.
pub fn logm(a: &ComplexMatrix) -> Dense {
    let n = a.rows();
    let id = identity(n);
    let mut x = to_dense(a);
    let mut k = 0;
    while norm(&lin(&x, 1.0, &id, -1.0)) > 0.05 {
        x = sqrtm(&x);
        k += 1;
        assert!(k < 60, "square-root scaling did not approach the identity");
    }
    let e = lin(&x, 1.0, &id, -1.0);
    let mut term = e.clone();
    let mut sum = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for j in 1..=60 {
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        sum = lin(&sum, 1.0, &term, sign / j as f64);
        term = mul(&term, &e);
    }
    let scale = (1u64 << k) as f64;
    sum.iter().map(|r| r.iter().map(|z| z * scale).collect()).collect()
}

/// `Tr(ρ ln ρ)` for full-rank `ρ`, without any eigendecomposition.
pub fn information_by_logm(rho: &ComplexMatrix) -> f64 {
    let l = logm(rho);
    let n = rho.rows();
    let mut tr = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            tr += rho[(i, k)] * l[k][i];
        }
    }
    tr.re
}

pub fn max_distance(a: &ComplexMatrix, b: &Dense) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, row) in b.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            worst = worst.max((a[(i, j)] - z).norm());
        }
    }
    worst
}

/// Every ordered list of part dimensions, each at least 2, with product at most `cap`.
pub fn ordered_partitions(cap: usize) -> Vec<Vec<usize>> {
    fn grow(prefix: &mut Vec<usize>, product: usize, cap: usize, out: &mut Vec<Vec<usize>>) {
        for d in 2..=cap / product {
            prefix.push(d);
            out.push(prefix.clone());
            grow(prefix, product * d, cap, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::new(), 1, cap, &mut out);
    out
}

/// Nonempty subsets of `0..parts`.
pub fn keep_sets(parts: usize) -> Vec<Vec<usize>> {
    (1u32..(1 << parts))
        .map(|mask| (0..parts).filter(|i| mask & (1 << i) != 0).collect())
        .collect()
}

/// `exp(−iHt)` by scaling and squaring a truncated Taylor series.
pub fn expm_minus_i(h: &ComplexMatrix, t: f64) -> Dense {
    let n = h.rows();
    let mut a: Dense = to_dense(h)
        .into_iter()
        .map(|r| r.into_iter().map(|z| z * Complex64::new(0.0, -t)).collect())
        .collect();
    let mut squarings = 0;
    while norm(&a) > 0.5 {
        a = a.iter().map(|r| r.iter().map(|z| z * 0.5).collect()).collect();
        squarings += 1;
    }
    let mut sum = identity(n);
    let mut term = identity(n);
    for j in 1..=30 {
        term = mul(&term, &a);
        term = term.iter().map(|r| r.iter().map(|z| z / j as f64).collect()).collect();
        sum = lin(&sum, 1.0, &term, 1.0);
    }
    for _ in 0..squarings {
        sum = mul(&sum, &sum);
    }
    sum
}

pub fn dense_kron(a: &Dense, b: &Dense) -> Dense {
    let (m, n) = (a.len(), b.len());
    let mut out = vec![vec![Complex64::new(0.0, 0.0); m * n]; m * n];
    for i in 0..m {
        for j in 0..m {
            for k in 0..n {
                for l in 0..n {
                    out[i * n + k][j * n + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

/// `U X U†`.
pub fn dense_conjugate(u: &Dense, x: &Dense) -> Dense {
    let n = u.len();
    let ux = mul(u, x);
    let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                out[i][j] += ux[i][k] * u[j][k].conj();
            }
        }
    }
    out
}

/// Eigenvalues of a 2×2 Hermitian matrix in closed form, largest first.
pub fn eig2(m: &Dense) -> [f64; 2] {
    let (a, d, b) = (m[0][0].re, m[1][1].re, m[0][1]);
    let mean = 0.5 * (a + d);
    let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    [mean + radius, mean - radius]
}

/// `−Σ λ ln λ` over the given eigenvalues, dropping zeros.
pub fn entropy_of(eigenvalues: &[f64]) -> f64 {
    -eigenvalues
        .iter()
        .filter(|&&l| l > 1e-15)
        .map(|&l| l * l.ln())
        .sum::<f64>()
}

pub fn from_dense(d: &Dense) -> ComplexMatrix {
    ComplexMatrix::new(d.len(), d.len(), d.iter().flatten().copied().collect()).unwrap()
}
