//! Shared fixtures for the benchmarks.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vcd_core::{Point, VehicleId};

/// Deterministic pseudo-random bytes.
pub fn random_bytes(len: usize, seed: u64) -> Vec<u8> {
    let mut buf = vec![0u8; len];
    ChaCha8Rng::seed_from_u64(seed).fill_bytes(&mut buf);
    buf
}

/// `n` vehicles scattered uniformly over a `side` x `side` square.
pub fn scattered(n: usize, side: f64, seed: u64) -> Vec<(VehicleId, Point)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n as u32)
        .map(|i| {
            (
                VehicleId(i),
                Point::new(rng.random_range(0.0..side), rng.random_range(0.0..side)),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_deterministic() {
        assert_eq!(random_bytes(64, 3), random_bytes(64, 3));
        assert_ne!(random_bytes(64, 3), random_bytes(64, 4));
        let a = scattered(10, 100.0, 1);
        assert_eq!(a, scattered(10, 100.0, 1));
        assert!(a.iter().all(|(_, p)| p.x < 100.0 && p.y < 100.0));
    }
}
