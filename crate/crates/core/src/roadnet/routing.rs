//! Shortest, randomized and main-road-preferring routing.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::Rng;

use super::graph::{Edge, EdgeId, NodeId, RoadGraph};
use super::route::Route;
use super::RoadnetError;

/// Multiplicative edge-weight perturbation used by [`random_route`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Perturbation {
    pub min_factor: f64,
    pub max_factor: f64,
}

impl Perturbation {
    /// Per-edge factors drawn uniformly from `[1, 3]`.
    pub const DEFAULT: Perturbation = Perturbation {
        min_factor: 1.0,
        max_factor: 3.0,
    };

    pub const NONE: Perturbation = Perturbation {
        min_factor: 1.0,
        max_factor: 1.0,
    };
}

impl Default for Perturbation {
    fn default() -> Self {
        Self::DEFAULT
    }
}

#[derive(Clone, Copy, PartialEq)]
struct HeapEntry {
    dist: f64,
    node: NodeId,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on (dist, node)
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Single-source Dijkstra. `weight` returns `None` for edges that may not be used.
/// Unreachable nodes get `f64::INFINITY`.
pub fn distances_from<W>(g: &RoadGraph, source: NodeId, weight: W) -> Vec<f64>
where
    W: Fn(EdgeId, &Edge) -> Option<f64>,
{
    let mut dist = vec![f64::INFINITY; g.node_count()];
    let mut heap = BinaryHeap::new();
    dist[source.index()] = 0.0;
    heap.push(HeapEntry {
        dist: 0.0,
        node: source,
    });
    while let Some(HeapEntry { dist: d, node: u }) = heap.pop() {
        if d > dist[u.index()] {
            continue;
        }
        for &(v, e) in g.neighbors(u) {
            let Some(w) = weight(e, g.edge(e)) else {
                continue;
            };
            let nd = d + w;
            if nd < dist[v.index()] {
                dist[v.index()] = nd;
                heap.push(HeapEntry { dist: nd, node: v });
            }
        }
    }
    dist
}

/// Walks from `src` to the node whose distance table is `to_dst`, always
/// stepping to the smallest-id neighbor that stays on a shortest path.
fn walk_down<W>(g: &RoadGraph, src: NodeId, dst: NodeId, to_dst: &[f64], weight: &W) -> Route
where
    W: Fn(EdgeId, &Edge) -> Option<f64>,
{
    let mut route = Route::empty(src);
    let mut at = src;
    let mut guard = g.node_count();
    while at != dst {
        let here = to_dst[at.index()];
        let tol = 1e-9 * here.max(1.0);
        let next = g
            .neighbors(at)
            .iter()
            .filter_map(|&(v, e)| weight(e, g.edge(e)).map(|w| (v, e, w)))
            .find(|&(v, _, w)| w + to_dst[v.index()] <= here + tol && to_dst[v.index()] < here)
            .expect("distance table is consistent with the graph");
        route.push(g, next.1);
        at = next.0;
        guard -= 1;
        assert!(
            guard > 0 || at == dst,
            "shortest-path walk did not terminate"
        );
    }
    route
}

fn check_nodes(g: &RoadGraph, src: NodeId, dst: NodeId) -> Result<(), RoadnetError> {
    for n in [src, dst] {
        if !g.contains(n) {
            return Err(RoadnetError::UnknownNode(n.0));
        }
    }
    Ok(())
}

fn route_with<W>(g: &RoadGraph, src: NodeId, dst: NodeId, weight: W) -> Result<Route, RoadnetError>
where
    W: Fn(EdgeId, &Edge) -> Option<f64>,
{
    check_nodes(g, src, dst)?;
    if src == dst {
        return Ok(Route::empty(src));
    }
    let to_dst = distances_from(g, dst, &weight);
    if !to_dst[src.index()].is_finite() {
        return Err(RoadnetError::NoRoute {
            src: src.0,
            dst: dst.0,
        });
    }
    Ok(walk_down(g, src, dst, &to_dst, &weight))
}

fn length_weight(_: EdgeId, e: &Edge) -> Option<f64> {
    Some(e.length)
}

/// Minimum-length route; ties go to the smallest next-node id.
pub fn shortest_path(g: &RoadGraph, src: NodeId, dst: NodeId) -> Result<Route, RoadnetError> {
    route_with(g, src, dst, length_weight)
}

/// Shortest route under per-trip i.i.d. multiplicative edge-weight noise.
///
/// One factor per edge is drawn (in edge-id order) from
/// `[min_factor, max_factor]`; the returned route's length is measured in
/// true edge lengths.
pub fn random_route<R: Rng + ?Sized>(
    g: &RoadGraph,
    src: NodeId,
    dst: NodeId,
    perturbation: Perturbation,
    rng: &mut R,
) -> Result<Route, RoadnetError> {
    check_nodes(g, src, dst)?;
    let Perturbation {
        min_factor: lo,
        max_factor: hi,
    } = perturbation;
    let factors: Vec<f64> = (0..g.edge_count())
        .map(|_| {
            if hi > lo {
                rng.random_range(lo..=hi)
            } else {
                lo
            }
        })
        .collect();
    route_with(g, src, dst, |id, e| Some(e.length * factors[id.index()]))
}

/// Route through the closest main road: shortest path to the main-road node `A`
/// nearest `src`, along main-road edges to the node `B` of the same main road
/// nearest `dst`, then shortest path to `dst`.
///
/// Among several main roads the one giving the shortest composed route wins
/// (ties: nearer entry, then lower component index). Graphs without main
/// roads fall back to [`shortest_path`].
pub fn main_road_route(g: &RoadGraph, src: NodeId, dst: NodeId) -> Result<Route, RoadnetError> {
    check_nodes(g, src, dst)?;
    if !g.has_main_roads() {
        return shortest_path(g, src, dst);
    }
    let from_src = distances_from(g, src, length_weight);
    if !from_src[dst.index()].is_finite() {
        return Err(RoadnetError::NoRoute {
            src: src.0,
            dst: dst.0,
        });
    }
    let to_dst = distances_from(g, dst, length_weight);
    let main_only = |_: EdgeId, e: &Edge| e.is_main_road.then_some(e.length);

    let nearest = |members: &[NodeId], table: &[f64]| {
        members
            .iter()
            .copied()
            .min_by(|a, b| table[a.index()].total_cmp(&table[b.index()]).then(a.cmp(b)))
            .expect("components are nonempty")
    };

    // (total, entry distance, entry, exit, main-only distance table to exit)
    let mut best: Option<(f64, f64, NodeId, NodeId, Vec<f64>)> = None;
    for members in g.main_road_components() {
        let entry = nearest(members, &from_src);
        let exit = nearest(members, &to_dst);
        let entry_dist = from_src[entry.index()];
        if !entry_dist.is_finite() || !to_dst[exit.index()].is_finite() {
            continue;
        }
        let along = distances_from(g, exit, main_only);
        let total = entry_dist + along[entry.index()] + to_dst[exit.index()];
        let better = match &best {
            None => true,
            Some((t, d, ..)) => total < *t || (total == *t && entry_dist < *d),
        };
        if better {
            best = Some((total, entry_dist, entry, exit, along));
        }
    }
    let Some((_, _, entry, exit, along)) = best else {
        return shortest_path(g, src, dst);
    };

    let mut route = walk_down(
        g,
        src,
        entry,
        &distances_from(g, entry, length_weight),
        &length_weight,
    );
    route.extend(g, &walk_down(g, entry, exit, &along, &main_only));
    route.extend(g, &walk_down(g, exit, dst, &to_dst, &length_weight));
    Ok(route)
}
