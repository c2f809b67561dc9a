use std::collections::HashMap;

use crate::mobility::VehicleId;
use crate::roadnet::Point;

/// Two vehicles within communication range during one step; `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contact {
    pub a: VehicleId,
    pub b: VehicleId,
    pub distance: f64,
}

/// Fixed-radius neighbor search on a uniform hash grid whose cell size equals
/// the range, so every in-range pair lies in adjacent cells.
///
/// Keeps its buckets between calls to avoid reallocating every step.
#[derive(Debug, Default)]
pub struct ContactDetector {
    cells: HashMap<(i64, i64), Vec<usize>>,
}

impl ContactDetector {
    pub fn new() -> Self {
        Self::default()
    }

    /// All unordered pairs at Euclidean distance `<= range`, sorted by `(a, b)`.
    pub fn detect(&mut self, positions: &[(VehicleId, Point)], range: f64) -> Vec<Contact> {
        assert!(range > 0.0, "communication range must be positive");
        let mut out = Vec::new();
        if positions.len() < 2 {
            return out;
        }
        for bucket in self.cells.values_mut() {
            bucket.clear();
        }
        let key = |p: Point| ((p.x / range).floor() as i64, (p.y / range).floor() as i64);
        for (i, &(_, p)) in positions.iter().enumerate() {
            self.cells.entry(key(p)).or_default().push(i);
        }
        let range_sq = range * range;
        for &(id, p) in positions {
            let (cx, cy) = key(p);
            for dx in -1..=1 {
                for dy in -1..=1 {
                    let Some(bucket) = self.cells.get(&(cx + dx, cy + dy)) else {
                        continue;
                    };
                    for &j in bucket {
                        let (other, q) = positions[j];
                        if other <= id {
                            continue;
                        }
                        let (ddx, ddy) = (p.x - q.x, p.y - q.y);
                        let d2 = ddx * ddx + ddy * ddy;
                        if d2 <= range_sq {
                            out.push(Contact {
                                a: id,
                                b: other,
                                distance: d2.sqrt(),
                            });
                        }
                    }
                }
            }
        }
        // Keep the map from growing without bound as vehicles roam.
        if self.cells.len() > 4 * positions.len() + 64 {
            self.cells.retain(|_, b| !b.is_empty());
        }
        out.sort_by_key(|c| (c.a, c.b));
        out
    }
}

pub fn detect_contacts(positions: &[(VehicleId, Point)], comm_range: f64) -> Vec<Contact> {
    ContactDetector::new().detect(positions, comm_range)
}
