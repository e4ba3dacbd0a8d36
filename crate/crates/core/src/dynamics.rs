//! Unitary dynamics and the measure → entangle → measure protocol.
//!
//! A cycle experiment alternates two steps on a partitioned system:
//!
//! 1. *Measure.* Record the information `I` of the current state and the
//!    part-wise entropy `S = −k_B Σᵢ Tr ρᵢ ln ρᵢ`, then collapse the state to
//!    the product of its single-part marginals.
//! 2. *Evolve.* Apply `exp(−iHt)` for a random interacting Hamiltonian,
//!    which re-entangles the parts while conserving `I`.
//!
//! The recorded `S` sequence is what [`verify_second_law`] checks. Nothing
//! in the protocol forces it to be monotone; that is the property under test.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::composite::{collapse_to_product, Partition};
use crate::error::{Error, Result};
use crate::linalg::{eigh, kron, ComplexMatrix};
use crate::measures::{entropy_of_partition, information};
use crate::rng::{gaussian_hermitian, RngSeed};
use crate::state::{random_density, validate_density, DensityOperator, Unitary};

pub const HAMILTONIAN_HERMITIAN_TOL: f64 = 1e-10;

/// Hermitian generator of time evolution, with `ħ = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    matrix: ComplexMatrix,
}

impl Hamiltonian {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let deviation = matrix.hermiticity_deviation();
        let allowed = HAMILTONIAN_HERMITIAN_TOL * matrix.frobenius_norm();
        if deviation > allowed {
            return Err(Error::NotHermitian { deviation, allowed });
        }
        Ok(Self {
            matrix: matrix.hermitian_part(),
        })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `exp(−iHt)` via the eigendecomposition of `H`.
    pub fn propagator(&self, t: f64) -> Result<Unitary> {
        let eig = eigh(&self.matrix)?;
        let u = eig.reconstruct_with(|e| Complex64::from_polar(1.0, -e * t));
        Unitary::new(u)
    }
}

/// `H = local·Σᵢ (I ⊗ … ⊗ hᵢ ⊗ … ⊗ I) + coupling·G`.
///
/// Each `hᵢ` and the global `G` are independent GUE-style draws taken in
/// that order from one generator, so the local terms for a given seed do
/// not depend on `coupling_strength`.
pub fn random_hamiltonian(
    p: &Partition,
    local_strength: f64,
    coupling_strength: f64,
    seed: RngSeed,
) -> Result<Hamiltonian> {
    check_strength("local_strength", local_strength)?;
    check_strength("coupling_strength", coupling_strength)?;
    let mut rng = seed.rng();
    let total = p.total();
    let mut h = ComplexMatrix::zeros(total, total);
    for (i, &d) in p.dims().iter().enumerate() {
        let local = gaussian_hermitian(d, &mut rng);
        let left: usize = p.dims()[..i].iter().product();
        let right: usize = p.dims()[i + 1..].iter().product();
        let embedded = kron(
            &kron(&ComplexMatrix::identity(left), &local)?,
            &ComplexMatrix::identity(right),
        )?;
        h = h.add(&embedded.scale(Complex64::new(local_strength, 0.0)))?;
    }
    let global = gaussian_hermitian(total, &mut rng);
    h = h.add(&global.scale(Complex64::new(coupling_strength, 0.0)))?;
    Hamiltonian::new(h)
}

fn check_strength(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || value < 0.0 {
        return Err(Error::InvalidParameter {
            name,
            reason: format!("must be a nonnegative finite number, got {value}"),
        });
    }
    Ok(())
}

/// `U ρ U†` with `U = exp(−iHt)`.
pub fn evolve(rho: &DensityOperator, h: &Hamiltonian, t: f64) -> Result<DensityOperator> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: rho.dim(),
        });
    }
    if !t.is_finite() {
        return Err(Error::InvalidParameter {
            name: "t",
            reason: format!("must be finite, got {t}"),
        });
    }
    h.propagator(t)?.apply(rho)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialState {
    PureRandom,
    MixedRandom { rank: usize },
    Explicit(ComplexMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleConfig {
    pub partition: Partition,
    pub cycles: usize,
    pub dt: f64,
    pub local_strength: f64,
    pub coupling_strength: f64,
    pub k_b: f64,
    pub seed: RngSeed,
    pub initial_state: InitialState,
    /// Reuse one Hamiltonian for every cycle instead of drawing a fresh one.
    pub fixed_hamiltonian: bool,
}

impl CycleConfig {
    pub fn new(partition: Partition, seed: RngSeed) -> Self {
        Self {
            partition,
            cycles: 20,
            dt: 1.0,
            local_strength: 1.0,
            coupling_strength: 1.0,
            k_b: 1.0,
            seed,
            initial_state: InitialState::PureRandom,
            fixed_hamiltonian: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.cycles == 0 {
            return Err(Error::InvalidParameter {
                name: "cycles",
                reason: "must be at least 1".into(),
            });
        }
        if !self.dt.is_finite() || self.dt <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "dt",
                reason: format!("must be positive, got {}", self.dt),
            });
        }
        if !self.k_b.is_finite() || self.k_b <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "k_b",
                reason: format!("must be positive, got {}", self.k_b),
            });
        }
        check_strength("local_strength", self.local_strength)?;
        check_strength("coupling_strength", self.coupling_strength)?;
        Ok(())
    }

    fn initial(&self) -> Result<DensityOperator> {
        let dim = self.partition.total();
        let seed = self.seed.substream(0);
        match &self.initial_state {
            InitialState::PureRandom => random_density(dim, 1, seed),
            InitialState::MixedRandom { rank } => random_density(dim, *rank, seed),
            InitialState::Explicit(m) => {
                let rho = validate_density(m)?;
                if rho.dim() != dim {
                    return Err(Error::PartitionMismatch {
                        expected: dim,
                        found: rho.dim(),
                    });
                }
                Ok(rho)
            }
        }
    }

    /// Seed of the Hamiltonian that evolves the state after measurement `cycle`.
    pub fn hamiltonian_seed(&self, cycle: usize) -> RngSeed {
        let stream = if self.fixed_hamiltonian { 1 } else { cycle as u64 + 1 };
        self.seed.substream(stream)
    }
}

/// One measurement event.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub cycle: usize,
    pub time: f64,
    /// Information of the state just before collapse, in nats.
    pub information: f64,
    pub entropy_total: f64,
    pub entropy_parts: Vec<f64>,
    /// `I − Σᵢ Iᵢ` of the pre-collapse state, in nats.
    pub correlation_surrendered: f64,
    /// Information of the collapsed product state, in nats.
    pub information_post_collapse: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub dims: Vec<usize>,
    pub k_b: f64,
    pub steps: Vec<StepRecord>,
}

impl Trajectory {
    pub fn entropies(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.entropy_total).collect()
    }

    /// `k_B Σᵢ ln dᵢ`, the largest partition entropy the system can show.
    pub fn entropy_ceiling(&self) -> f64 {
        self.k_b * self.dims.iter().map(|&d| (d as f64).ln()).sum::<f64>()
    }
}

pub fn run_cycle_experiment(cfg: &CycleConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let p = &cfg.partition;
    let mut state = cfg.initial()?;
    let mut hamiltonian: Option<Hamiltonian> = None;
    let mut steps = Vec::with_capacity(cfg.cycles);

    for cycle in 0..cfg.cycles {
        let info = information(&state);
        let report = entropy_of_partition(&state, p, cfg.k_b)?;
        let collapsed = collapse_to_product(&state, p)?;
        steps.push(StepRecord {
            cycle,
            time: cycle as f64 * cfg.dt,
            information: info,
            entropy_total: report.total,
            entropy_parts: report.per_part,
            correlation_surrendered: info - report.information_sum,
            information_post_collapse: information(&collapsed),
        });
        if cycle + 1 == cfg.cycles {
            break;
        }
        if hamiltonian.is_none() || !cfg.fixed_hamiltonian {
            let seed = cfg.hamiltonian_seed(cycle);
            hamiltonian = Some(random_hamiltonian(p, cfg.local_strength, cfg.coupling_strength, seed)?);
        }
        let h = hamiltonian.as_ref().expect("set above");
        state = evolve(&collapsed, h, cfg.dt)?;
    }

    Ok(Trajectory {
        dims: p.dims().to_vec(),
        k_b: cfg.k_b,
        steps,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondLawReport {
    pub passed: bool,
    /// Most negative `S[k+1] − S[k]` (the smallest increment if none is negative).
    pub worst_increment: f64,
    /// Index `k+1` of the event that ends the worst increment.
    pub worst_index: usize,
    pub tolerance: f64,
}

impl SecondLawReport {
    /// How far the worst increment falls below zero.
    pub fn violation(&self) -> f64 {
        (-self.worst_increment).max(0.0)
    }
}

/// Passes iff `S[k+1] ≥ S[k] − tol` for all `k`.
pub fn verify_entropy_sequence(entropies: &[f64], tol: f64) -> Result<SecondLawReport> {
    if entropies.len() < 2 {
        return Err(Error::TooFewEvents {
            found: entropies.len(),
        });
    }
    let (worst_index, worst_increment) = entropies
        .windows(2)
        .map(|w| w[1] - w[0])
        .enumerate()
        .fold((1, f64::INFINITY), |(bi, bv), (k, inc)| {
            if inc < bv {
                (k + 1, inc)
            } else {
                (bi, bv)
            }
        });
    Ok(SecondLawReport {
        passed: worst_increment >= -tol,
        worst_increment,
        worst_index,
        tolerance: tol,
    })
}

pub fn verify_second_law(traj: &Trajectory, tol: f64) -> Result<SecondLawReport> {
    verify_entropy_sequence(&traj.entropies(), tol)
}
