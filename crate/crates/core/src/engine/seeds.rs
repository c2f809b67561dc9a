use rand::Rng;

use crate::mobility::VehicleId;

use super::store::{ChunkSet, ChunkStore};

/// Number of seeds for a fleet: `round(rate · n)`, at least one when the
/// rate is positive.
pub fn seed_count(seed_rate: f64, n_vehicles: usize) -> usize {
    assert!(
        (0.0..=1.0).contains(&seed_rate),
        "seed rate {seed_rate} outside [0, 1]"
    );
    if seed_rate == 0.0 || n_vehicles == 0 {
        return 0;
    }
    ((seed_rate * n_vehicles as f64).round() as usize).clamp(1, n_vehicles)
}

/// Picks seed vehicles uniformly without replacement and gives each every
/// chunk, complete at t = 0. Returns the seed ids in ascending order.
pub fn provision_seeds<R: Rng + ?Sized>(
    stores: &mut [ChunkStore],
    seed_rate: f64,
    n_chunks: usize,
    rng: &mut R,
) -> Vec<VehicleId> {
    let count = seed_count(seed_rate, stores.len());
    let mut ids: Vec<usize> = rand::seq::index::sample(rng, stores.len(), count).into_vec();
    ids.sort_unstable();
    for &i in &ids {
        stores[i].set = ChunkSet::full(n_chunks);
        stores[i].completed_at = Some(0.0);
    }
    ids.into_iter().map(|i| VehicleId(i as u32)).collect()
}
