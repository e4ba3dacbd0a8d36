//! Randomized audit suites.
//!
//! [`lemma_audit`] exercises the classical inequalities on random data and
//! [`invariant_audit`] exercises the quantum invariants (conservation,
//! subadditivity, basis bound, partial-trace and matrix-log cross-checks).
//! Samples run in parallel, each from its own sub-stream of the base seed,
//! and are reduced in sample order, so a report depends only on its inputs.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classical::{
    contract_distribution, joint_subadditivity_gap, mixing_inequality_gap, unistochastic_from_unitary,
    xlnx_gap, ProbabilityVector, STRICT_POSITIVITY_FLOOR,
};
use crate::composite::{
    composite_index, joint_diagonal_distribution, partial_trace, tensor_product_state, JointDistribution, Partition,
};
use crate::error::{Error, Result};
use crate::io::format_float;
use crate::linalg::{ComplexMatrix, ZERO};
use crate::measures::{basis_information, correlation_information, information, ObservableBasis, EIGENVALUE_FLOOR};
use crate::rng::RngSeed;
use crate::state::{haar_unitary, random_density, DensityOperator};

pub const XLNX_TOL: f64 = 1e-12;
/// An `x ln x − x + 1` gap at or below this counts as zero.
pub const XLNX_ZERO_GAP: f64 = 1e-13;
pub const XLNX_ZERO_RADIUS: f64 = 1e-6;
pub const MIXING_TOL: f64 = 1e-12;
pub const CONTRACTION_TOL: f64 = 1e-10;
pub const JOINT_TOL: f64 = 1e-10;
pub const JOINT_STRICT_GAP: f64 = 1e-5;
pub const JOINT_PERTURBATION: f64 = 0.01;
pub const STOCHASTIC_AUDIT_TOL: f64 = 1e-10;
pub const BRIDGE_TOL: f64 = 1e-10;
/// Largest total dimension of the quantum states fed to the diagonal bridge check.
pub const BRIDGE_MAX_DIM: usize = 16;

pub const CONSERVATION_TOL: f64 = 1e-8;
pub const SUBADDITIVITY_TOL: f64 = 1e-8;
pub const BASIS_BOUND_TOL: f64 = 1e-8;
pub const EIGENBASIS_TOL: f64 = 1e-9;
pub const PARTIAL_TRACE_TOL: f64 = 1e-12;
pub const LOG_PATH_TOL: f64 = 1e-8;

/// Ratio of `x ln x` samples to the requested sample count.
pub const XLNX_SAMPLE_FACTOR: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum Bound {
    AtLeast(f64),
    AtMost(f64),
}

impl Bound {
    fn admits(&self, x: f64) -> bool {
        match *self {
            Bound::AtLeast(b) => x >= b,
            Bound::AtMost(b) => x <= b,
        }
    }

    fn worse(&self, a: f64, b: f64) -> f64 {
        match self {
            Bound::AtLeast(_) => a.min(b),
            Bound::AtMost(_) => a.max(b),
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Bound::AtLeast(_) => "at_least",
            Bound::AtMost(_) => "at_most",
        }
    }

    fn value(&self) -> f64 {
        match *self {
            Bound::AtLeast(b) | Bound::AtMost(b) => b,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub sample: usize,
    /// Folded key of the sample's seed, i.e. the value its generator was seeded from.
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub samples: usize,
    pub worst: f64,
    pub bound: Bound,
    pub violations: usize,
    pub first_failure: Option<Failure>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    fn from_values(name: &str, bound: Bound, values: &[(u64, f64)]) -> Self {
        let mut worst = match bound {
            Bound::AtLeast(_) => f64::INFINITY,
            Bound::AtMost(_) => f64::NEG_INFINITY,
        };
        let mut violations = 0;
        let mut first_failure = None;
        for (sample, &(seed, v)) in values.iter().enumerate() {
            worst = bound.worse(worst, v);
            if !bound.admits(v) || v.is_nan() {
                violations += 1;
                first_failure.get_or_insert(Failure { sample, seed });
            }
        }
        Self {
            name: name.to_string(),
            samples: values.len(),
            worst,
            bound,
            violations,
            first_failure,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,samples,worst,bound_kind,bound,violations,passed,first_failure_sample,first_failure_seed\n");
        for c in &self.checks {
            let (fs, fk) = match c.first_failure {
                Some(f) => (f.sample.to_string(), f.seed.to_string()),
                None => (String::new(), String::new()),
            };
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                c.name,
                c.samples,
                format_float(c.worst),
                c.bound.kind(),
                format_float(c.bound.value()),
                c.violations,
                c.passed(),
                fs,
                fk
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

fn run_samples<F>(base: RngSeed, count: usize, f: F) -> Result<Vec<(u64, f64)>>
where
    F: Fn(RngSeed) -> Result<f64> + Sync,
{
    (0..count)
        .into_par_iter()
        .map(|k| {
            let seed = base.substream(k as u64);
            f(seed).map(|v| (seed.key(), v))
        })
        .collect()
}

/// Like [`run_samples`] for samples that feed several checks at once.
fn run_multi<F, const N: usize>(base: RngSeed, count: usize, f: F) -> Result<[Vec<(u64, f64)>; N]>
where
    F: Fn(RngSeed) -> Result<[f64; N]> + Sync,
{
    let rows: Vec<(u64, [f64; N])> = (0..count)
        .into_par_iter()
        .map(|k| {
            let seed = base.substream(k as u64);
            f(seed).map(|v| (seed.key(), v))
        })
        .collect::<Result<_>>()?;
    Ok(std::array::from_fn(|i| rows.iter().map(|(s, v)| (*s, v[i])).collect()))
}

fn log_uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    let (a, b) = (lo.ln(), hi.ln());
    (a + (b - a) * rng.random::<f64>()).exp()
}

fn positive_weights(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| 0.01 + rng.random::<f64>()).collect()
}

/// Randomized audit of the classical inequalities.
///
/// `samples` per check, except the scalar `x ln x` check which draws
/// `XLNX_SAMPLE_FACTOR × samples` points. Sizes are drawn from `2..=max_size`.
pub fn lemma_audit(samples: usize, max_size: usize, seed: u64) -> Result<AuditReport> {
    if samples == 0 {
        return Err(Error::InvalidParameter {
            name: "samples",
            reason: "must be at least 1".into(),
        });
    }
    if max_size < 2 {
        return Err(Error::InvalidParameter {
            name: "max_size",
            reason: "must be at least 2".into(),
        });
    }
    let base = RngSeed::new(seed);
    let mut checks = Vec::new();

    // x ln x − x + 1 ≥ 0: log-uniform points plus fixed probes around x = 1.
    let xlnx_base = base.substream(1);
    let mut xs: Vec<(u64, f64)> = (0..samples * XLNX_SAMPLE_FACTOR)
        .map(|k| {
            let s = xlnx_base.substream(k as u64);
            (s.key(), log_uniform(&mut s.rng(), 1e-9, 1e3))
        })
        .collect();
    for probe in [1.0, 1.0 - 1e-7, 1.0 + 1e-7, 1.0 - 1e-5, 1.0 + 1e-5, 0.5, 2.0] {
        xs.push((0, probe));
    }
    let gaps: Vec<(u64, f64)> = xs
        .iter()
        .map(|&(s, x)| xlnx_gap(x).map(|g| (s, g)))
        .collect::<Result<_>>()?;
    checks.push(CheckResult::from_values("xlnx_gap", Bound::AtLeast(-XLNX_TOL), &gaps));
    let zero_radius: Vec<(u64, f64)> = xs
        .iter()
        .zip(&gaps)
        .map(|(&(s, x), &(_, g))| (s, if g <= XLNX_ZERO_GAP { (x - 1.0).abs() } else { 0.0 }))
        .collect();
    checks.push(CheckResult::from_values(
        "xlnx_zero_only_at_one",
        Bound::AtMost(XLNX_ZERO_RADIUS),
        &zero_radius,
    ));

    // Mixing inequality: sparse-ish weights, positive values spread over four decades.
    let mixing = run_samples(base.substream(2), samples, |s| {
        let mut rng = s.rng();
        let n = rng.random_range(1..=max_size);
        let mut raw: Vec<f64> = (0..n)
            .map(|_| if rng.random::<f64>() < 0.2 { 0.0 } else { rng.random::<f64>() })
            .collect();
        if raw.iter().all(|&x| x == 0.0) {
            raw[0] = 1.0;
        }
        let x = ProbabilityVector::from_unnormalized(raw)?;
        let w: Vec<f64> = (0..n).map(|_| log_uniform(&mut rng, 1e-2, 1e2)).collect();
        mixing_inequality_gap(&x, &w)
    })?;
    checks.push(CheckResult::from_values("mixing_gap", Bound::AtLeast(-MIXING_TOL), &mixing));

    // Contraction by unistochastic T built from Haar unitaries.
    let [gap3, min3, dev3] = run_multi(base.substream(3), samples, |s| {
        let mut rng = s.rng();
        let n = rng.random_range(2..=max_size);
        let w = ProbabilityVector::from_unnormalized(positive_weights(&mut rng, n))?;
        let t = unistochastic_from_unitary(&haar_unitary(n, s.substream(0))?);
        let (contracted, gap) = contract_distribution(&w, &t)?;
        let min = contracted.weights().iter().copied().fold(f64::INFINITY, f64::min);
        Ok([gap, min, t.stochastic_deviation()])
    })?;
    checks.push(CheckResult::from_values("contraction_gap", Bound::AtLeast(-CONTRACTION_TOL), &gap3));
    checks.push(CheckResult::from_values(
        "contraction_positive",
        Bound::AtLeast(STRICT_POSITIVITY_FLOOR),
        &min3,
    ));
    checks.push(CheckResult::from_values(
        "unistochastic_deviation",
        Bound::AtMost(STOCHASTIC_AUDIT_TOL),
        &dev3,
    ));

    // Joint subadditivity: generic tables, factorized tables, and a perturbed factorized table.
    let [gap4, eq4, strict4] = run_multi(base.substream(4), samples, |s| {
        let mut rng = s.rng();
        let da = rng.random_range(2..=max_size);
        let db = rng.random_range(2..=max_size);
        let generic = JointDistribution::from_unnormalized(da, db, positive_weights(&mut rng, da * db))?;
        let (_, _, gap) = joint_subadditivity_gap(&generic)?;

        let rows = ProbabilityVector::from_unnormalized(positive_weights(&mut rng, da))?;
        let cols = ProbabilityVector::from_unnormalized(positive_weights(&mut rng, db))?;
        let outer: Vec<f64> = rows
            .weights()
            .iter()
            .flat_map(|r| cols.weights().iter().map(move |c| r * c))
            .collect();
        let product = JointDistribution::from_unnormalized(da, db, outer.clone())?;
        let (_, _, eq_gap) = joint_subadditivity_gap(&product)?;

        let mut perturbed = outer;
        let (argmin, _) = perturbed
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
        perturbed[argmin] += JOINT_PERTURBATION;
        let perturbed = JointDistribution::from_unnormalized(da, db, perturbed)?;
        let (_, _, strict_gap) = joint_subadditivity_gap(&perturbed)?;
        Ok([gap, eq_gap.abs(), strict_gap])
    })?;
    checks.push(CheckResult::from_values("joint_gap", Bound::AtLeast(-JOINT_TOL), &gap4));
    checks.push(CheckResult::from_values("joint_product_equality", Bound::AtMost(JOINT_TOL), &eq4));
    checks.push(CheckResult::from_values(
        "joint_strictness",
        Bound::AtLeast(JOINT_STRICT_GAP),
        &strict4,
    ));

    // The joint inequality on the computational-basis diagonal of a quantum state.
    let bridge = run_samples(base.substream(5), samples, |s| {
        let mut rng = s.rng();
        let da = rng.random_range(2..=max_size.min(BRIDGE_MAX_DIM / 2));
        let db = rng.random_range(2..=max_size.min(BRIDGE_MAX_DIM / da));
        let p = Partition::bipartite(da, db)?;
        let rank = rng.random_range(1..=da * db);
        let rho = random_density(da * db, rank, s.substream(0))?;
        let (_, _, gap) = joint_subadditivity_gap(&joint_diagonal_distribution(&rho, &p)?)?;
        Ok(gap)
    })?;
    checks.push(CheckResult::from_values("diagonal_bridge", Bound::AtLeast(-BRIDGE_TOL), &bridge));

    Ok(AuditReport {
        suite: "lemmas".into(),
        seed,
        checks,
    })
}

/// Ordered partitions with 2 or 3 parts, each part at least 2, total at most `max_dim`.
pub fn small_partitions(max_dim: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    for a in 2..=max_dim / 2 {
        for b in 2..=max_dim / a {
            out.push(vec![a, b]);
        }
    }
    for a in 2..=max_dim / 4 {
        for b in 2..=max_dim / (2 * a) {
            for c in 2..=max_dim / (a * b) {
                out.push(vec![a, b, c]);
            }
        }
    }
    out.into_iter().filter_map(|d| Partition::new(d).ok()).collect()
}

/// Independent reference for the partial trace: for every pair of kept
/// multi-indices, sum `ρ` over all traced multi-indices by explicit
/// composition of full basis indices.
pub fn reference_partial_trace(rho: &ComplexMatrix, p: &Partition, keep: &[usize]) -> Result<ComplexMatrix> {
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    let traced: Vec<usize> = (0..p.parts()).filter(|i| !keep.contains(i)).collect();
    let kept_dims: Vec<usize> = keep.iter().map(|&i| p.dims()[i]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&i| p.dims()[i]).collect();
    let kept_total: usize = kept_dims.iter().product();
    let traced_total: usize = traced_dims.iter().product();

    let unrank = |mut n: usize, dims: &[usize]| -> Vec<usize> {
        let mut digits = vec![0; dims.len()];
        for (slot, &d) in digits.iter_mut().zip(dims).rev() {
            *slot = n % d;
            n /= d;
        }
        digits
    };
    let assemble = |kept_digits: &[usize], traced_digits: &[usize]| -> Result<usize> {
        let mut full = vec![0; p.parts()];
        for (&part, &d) in keep.iter().zip(kept_digits) {
            full[part] = d;
        }
        for (&part, &d) in traced.iter().zip(traced_digits) {
            full[part] = d;
        }
        composite_index(p, &full)
    };

    let mut out = ComplexMatrix::zeros(kept_total, kept_total);
    for a in 0..kept_total {
        let da = unrank(a, &kept_dims);
        for b in 0..kept_total {
            let db = unrank(b, &kept_dims);
            let mut acc = ZERO;
            for t in 0..traced_total {
                let dt = unrank(t, &traced_dims);
                acc += rho[(assemble(&da, &dt)?, assemble(&db, &dt)?)];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

/// `Tr(ρ L)` with `L = V diag(ln λ) V†` assembled as a full matrix.
pub fn information_via_matrix_log(rho: &DensityOperator) -> f64 {
    let log = rho
        .eigen()
        .reconstruct_with(|l| num_complex::Complex64::new(if l > EIGENVALUE_FLOOR { l.ln() } else { 0.0 }, 0.0));
    let m = rho.matrix();
    let n = rho.dim();
    let mut tr = ZERO;
    for i in 0..n {
        for k in 0..n {
            tr += m[(i, k)] * log[(k, i)];
        }
    }
    tr.re
}

fn max_entry_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Randomized audit of the quantum invariants for dimensions up to `max_dim`.
pub fn invariant_audit(max_dim: usize, trials: usize, seed: u64) -> Result<AuditReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter {
            name: "trials",
            reason: "must be at least 1".into(),
        });
    }
    if max_dim < 4 {
        return Err(Error::InvalidParameter {
            name: "max_dim",
            reason: "must be at least 4 to admit a bipartition".into(),
        });
    }
    let base = RngSeed::new(seed);
    let partitions = small_partitions(max_dim);
    let dim_for = |t: u64| 2 + (t as usize) % (max_dim - 1);
    let mut checks = Vec::new();

    let [conservation, log_path] = run_multi(base.substream(1), trials, |s| {
        let mut rng = s.rng();
        let dim = dim_for(s.stream);
        let rank = rng.random_range(1..=dim);
        let rho = random_density(dim, rank, s.substream(0))?;
        let u = haar_unitary(dim, s.substream(1))?;
        let out = u.apply(&rho)?;
        Ok([
            (information(&out) - information(&rho)).abs(),
            (information(&rho) - information_via_matrix_log(&rho)).abs(),
        ])
    })?;
    checks.push(CheckResult::from_values(
        "unitary_invariance",
        Bound::AtMost(CONSERVATION_TOL),
        &conservation,
    ));
    checks.push(CheckResult::from_values("matrix_log_path", Bound::AtMost(LOG_PATH_TOL), &log_path));

    let [subadd, equality, oracle] = run_multi(base.substream(2), trials, |s| {
        let mut rng = s.rng();
        let p = &partitions[s.stream as usize % partitions.len()];
        let rank = rng.random_range(1..=p.total());
        let rho = random_density(p.total(), rank, s.substream(0))?;
        let corr = correlation_information(&rho, p)?;

        let factors = p
            .dims()
            .iter()
            .enumerate()
            .map(|(i, &d)| random_density(d, 1 + (i % d), s.substream(1 + i as u64)))
            .collect::<Result<Vec<_>>>()?;
        let product = tensor_product_state(&factors)?;
        let product_corr = correlation_information(&product, p)?;

        // Nonempty subset of parts from the bits of a random mask.
        let full_mask = (1u32 << p.parts()) - 1;
        let mask = rng.random_range(1..=full_mask);
        let keep: Vec<usize> = (0..p.parts()).filter(|i| mask & (1 << i) != 0).collect();
        let fast = partial_trace(&rho, p, &keep)?;
        let slow = reference_partial_trace(rho.matrix(), p, &keep)?;
        Ok([corr, product_corr.abs(), max_entry_distance(fast.matrix(), &slow)])
    })?;
    checks.push(CheckResult::from_values("subadditivity", Bound::AtLeast(-SUBADDITIVITY_TOL), &subadd));
    checks.push(CheckResult::from_values(
        "product_equality",
        Bound::AtMost(SUBADDITIVITY_TOL),
        &equality,
    ));
    checks.push(CheckResult::from_values(
        "partial_trace_oracle",
        Bound::AtMost(PARTIAL_TRACE_TOL),
        &oracle,
    ));

    let [basis_gap, eigen_gap] = run_multi(base.substream(3), trials, |s| {
        let mut rng = s.rng();
        let dim = dim_for(s.stream);
        let rank = rng.random_range(1..=dim);
        let rho = random_density(dim, rank, s.substream(0))?;
        let basis: ObservableBasis = haar_unitary(dim, s.substream(1))?.into();
        let info = information(&rho);
        Ok([
            basis_information(&rho, &basis)? - info,
            (basis_information(&rho, &ObservableBasis::eigenbasis(&rho))? - info).abs(),
        ])
    })?;
    checks.push(CheckResult::from_values("basis_bound", Bound::AtMost(BASIS_BOUND_TOL), &basis_gap));
    checks.push(CheckResult::from_values(
        "eigenbasis_equality",
        Bound::AtMost(EIGENBASIS_TOL),
        &eigen_gap,
    ));

    Ok(AuditReport {
        suite: "check".into(),
        seed,
        checks,
    })
}
