//! Synthetic inputs for the benchmarks.

use peerstat_core::Dataset;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n` observations with scores 3 to 5 and indicators that drift upward with
/// the score, rounded to two decimals so ties occur.
pub fn synthetic_dataset(n: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(f64, u8)> = (0..n)
        .map(|_| {
            let q: u8 = rng.random_range(3..=5);
            let x = 0.4 * f64::from(q) - 0.6 + rng.random::<f64>() * 1.2;
            ((x * 100.0).round() / 100.0, q)
        })
        .collect();
    Dataset::from_pairs(&pairs).expect("generated values are valid")
}

pub fn pairs(d: &Dataset) -> Vec<(f64, f64)> {
    d.indicators().into_iter().zip(d.qualities()).collect()
}
