//! Seeded randomness.
//!
//! Every random draw in the crate goes through an explicit [`RngSeed`]. A
//! seed pair `(seed, stream)` is folded into one 64-bit key with the
//! SplitMix64 finalizer, and that key seeds a ChaCha20 stream cipher
//! generator (`rand_chacha::ChaCha20Rng`). Sub-streams form a tree:
//! [`RngSeed::substream`] derives a child whose seed is the parent's folded
//! key, so independent trials never share generator state and the same
//! `(seed, stream)` path always reproduces the same draws.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::linalg::ComplexMatrix;

pub type SimRng = ChaCha20Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed {
    pub seed: u64,
    pub stream: u64,
}

impl RngSeed {
    pub const fn new(seed: u64) -> Self {
        Self { seed, stream: 0 }
    }

    pub const fn with_stream(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    /// The folded key `mix(seed, stream)`.
    pub fn key(&self) -> u64 {
        mix(self.seed, self.stream)
    }

    pub fn substream(&self, stream: u64) -> Self {
        Self {
            seed: self.key(),
            stream,
        }
    }

    pub fn rng(&self) -> SimRng {
        SimRng::seed_from_u64(self.key())
    }
}

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn mix(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(stream))
}

/// Complex normal with independent real and imaginary parts of variance 1/2.
pub fn complex_gaussian(rng: &mut SimRng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Ginibre matrix with i.i.d. [`complex_gaussian`] entries, filled row-major.
pub fn ginibre(rows: usize, cols: usize, rng: &mut SimRng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// GUE-style Hermitian matrix `(G + G†)/2` from a Ginibre `G`.
pub fn gaussian_hermitian(dim: usize, rng: &mut SimRng) -> ComplexMatrix {
    ginibre(dim, dim, rng).hermitian_part()
}
