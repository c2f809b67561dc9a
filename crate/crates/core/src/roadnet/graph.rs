use std::fmt;

use thiserror::Error;

/// Dense node index into a [`RoadGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

/// Dense edge index into a [`RoadGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Planar position in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn lerp(self, other: Point, t: f64) -> Point {
        Point::new(
            self.x + (other.x - self.x) * t,
            self.y + (other.y - self.y) * t,
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub a: NodeId,
    pub b: NodeId,
    pub length: f64,
    pub is_main_road: bool,
}

impl Edge {
    /// The endpoint opposite to `from`.
    pub fn other(&self, from: NodeId) -> NodeId {
        if from == self.a {
            self.b
        } else {
            self.a
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("edge {edge} references missing node {node}")]
    DanglingNode { edge: u32, node: u32 },
    #[error("edge {edge} is a self-loop on node {node}")]
    SelfLoop { edge: u32, node: u32 },
    #[error("edge {edge} has nonpositive length {length}")]
    NonPositiveLength { edge: u32, length: f64 },
    #[error("node {node} has non-finite coordinates")]
    NonFiniteNode { node: u32 },
}

/// Undirected, embedded road network.
///
/// Node and edge ids are dense: `NodeId(i)` is `nodes()[i]`. Adjacency lists are
/// sorted by neighbor id so graph walks are deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct RoadGraph {
    nodes: Vec<Point>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(NodeId, EdgeId)>>,
    main_components: Vec<Vec<NodeId>>,
}

impl RoadGraph {
    pub fn new(nodes: Vec<Point>, edges: Vec<Edge>) -> Result<Self, GraphError> {
        for (i, p) in nodes.iter().enumerate() {
            if !p.x.is_finite() || !p.y.is_finite() {
                return Err(GraphError::NonFiniteNode { node: i as u32 });
            }
        }
        let mut adjacency = vec![Vec::new(); nodes.len()];
        for (i, e) in edges.iter().enumerate() {
            let id = i as u32;
            for n in [e.a, e.b] {
                if n.index() >= nodes.len() {
                    return Err(GraphError::DanglingNode {
                        edge: id,
                        node: n.0,
                    });
                }
            }
            if e.a == e.b {
                return Err(GraphError::SelfLoop {
                    edge: id,
                    node: e.a.0,
                });
            }
            if !(e.length > 0.0) || !e.length.is_finite() {
                return Err(GraphError::NonPositiveLength {
                    edge: id,
                    length: e.length,
                });
            }
            adjacency[e.a.index()].push((e.b, EdgeId(id)));
            adjacency[e.b.index()].push((e.a, EdgeId(id)));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let mut graph = Self {
            nodes,
            edges,
            adjacency,
            main_components: Vec::new(),
        };
        graph.main_components = graph.compute_main_components();
        Ok(graph)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node(&self, id: NodeId) -> Point {
        self.nodes[id.index()]
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id.index()]
    }

    pub fn contains(&self, id: NodeId) -> bool {
        id.index() < self.nodes.len()
    }

    /// Neighbors of `n` with the connecting edge, sorted by neighbor id.
    pub fn neighbors(&self, n: NodeId) -> &[(NodeId, EdgeId)] {
        &self.adjacency[n.index()]
    }

    pub fn main_road_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.is_main_road).count()
    }

    pub fn has_main_roads(&self) -> bool {
        !self.main_components.is_empty()
    }

    /// Connected components of the subgraph formed by main-road edges, each
    /// sorted by node id. Components are ordered by their smallest node id.
    pub fn main_road_components(&self) -> &[Vec<NodeId>] {
        &self.main_components
    }

    fn compute_main_components(&self) -> Vec<Vec<NodeId>> {
        let mut seen = vec![false; self.nodes.len()];
        let mut components = Vec::new();
        for start in 0..self.nodes.len() {
            let start = NodeId(start as u32);
            if seen[start.index()] || !self.touches_main_road(start) {
                continue;
            }
            let mut stack = vec![start];
            let mut members = Vec::new();
            seen[start.index()] = true;
            while let Some(u) = stack.pop() {
                members.push(u);
                for &(v, e) in self.neighbors(u) {
                    if self.edge(e).is_main_road && !seen[v.index()] {
                        seen[v.index()] = true;
                        stack.push(v);
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }
        components
    }

    fn touches_main_road(&self, n: NodeId) -> bool {
        self.neighbors(n)
            .iter()
            .any(|&(_, e)| self.edge(e).is_main_road)
    }

    /// Axis-aligned bounding box `(min, max)` of all nodes.
    pub fn bounds(&self) -> Option<(Point, Point)> {
        let first = *self.nodes.first()?;
        Some(self.nodes.iter().fold((first, first), |(lo, hi), p| {
            (
                Point::new(lo.x.min(p.x), lo.y.min(p.y)),
                Point::new(hi.x.max(p.x), hi.y.max(p.y)),
            )
        }))
    }
}
