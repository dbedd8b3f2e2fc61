//! Seeded sampling shared by the sweeps, searches and tests.
//!
//! Every random quantity in the crate is drawn from a `ChaCha8Rng` seeded
//! through [`seeded_rng`], so a run is fully determined by its seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::vectorspace::Vector;

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for the `index`-th task of a run seeded with `seed`.
///
/// Parallel workers each take their own stream so the draws do not depend
/// on scheduling.
pub fn stream_rng(seed: u64, index: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Nonzero vector with coordinates uniform in `[-1, 1]`, scaled by
/// `10^u` where `u` is uniform in `[-log10_spread, log10_spread]`.
pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize, log10_spread: f64) -> Vector {
    loop {
        let scale = if log10_spread > 0.0 {
            10f64.powf(rng.random_range(-log10_spread..=log10_spread))
        } else {
            1.0
        };
        let coords: Vec<f64> = (0..dim)
            .map(|_| rng.random_range(-1.0..=1.0) * scale)
            .collect();
        if coords.iter().any(|c| *c != 0.0) {
            return Vector::from_raw(coords);
        }
    }
}

/// A pair of independent nonzero vectors drawn with [`random_vector`].
pub fn random_pair<R: Rng + ?Sized>(rng: &mut R, dim: usize, log10_spread: f64) -> (Vector, Vector) {
    let x = random_vector(rng, dim, log10_spread);
    let y = random_vector(rng, dim, log10_spread);
    (x, y)
}

/// Deterministic pair list: pair `i` depends only on `(seed, i)`.
pub fn pair_batch(seed: u64, count: usize, dim: usize, log10_spread: f64) -> Vec<(Vector, Vector)> {
    let mut rng = seeded_rng(seed);
    (0..count)
        .map(|_| random_pair(&mut rng, dim, log10_spread))
        .collect()
}
