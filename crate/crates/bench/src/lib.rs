//! Fixed inputs shared by the criterion benchmarks.

use qreflect_core::states::{random_density, RandomMode};
use qreflect_core::DensityState;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic mixed state on `n` qubits.
pub fn fixed_state(n: usize, seed: u64) -> DensityState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_density(n, RandomMode::MixedDirichlet, &mut rng).expect("supported qubit count")
}
