use super::graph::{EdgeId, NodeId, Point, RoadGraph};

/// One traversed edge; `forward` means walking from `edge.a` to `edge.b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RouteStep {
    pub edge: EdgeId,
    pub forward: bool,
}

/// A connected walk through the road graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Route {
    origin: NodeId,
    destination: NodeId,
    steps: Vec<RouteStep>,
    // cumulative distance at the end of each step
    offsets: Vec<f64>,
}

impl Route {
    pub fn empty(at: NodeId) -> Self {
        Self {
            origin: at,
            destination: at,
            steps: Vec::new(),
            offsets: Vec::new(),
        }
    }

    /// Builds a route from a node sequence, picking the shortest edge between
    /// consecutive nodes. Returns `None` if two consecutive nodes are not adjacent.
    pub fn from_nodes(g: &RoadGraph, path: &[NodeId]) -> Option<Self> {
        let (&origin, rest) = path.split_first()?;
        let mut route = Route::empty(origin);
        let mut at = origin;
        for &next in rest {
            let edge = g
                .neighbors(at)
                .iter()
                .filter(|(n, _)| *n == next)
                .map(|&(_, e)| e)
                .min_by(|x, y| g.edge(*x).length.total_cmp(&g.edge(*y).length))?;
            route.push(g, edge);
            at = next;
        }
        Some(route)
    }

    pub(crate) fn push(&mut self, g: &RoadGraph, edge: EdgeId) {
        let e = g.edge(edge);
        let forward = e.a == self.destination;
        debug_assert!(forward || e.b == self.destination);
        let start = self.offsets.last().copied().unwrap_or(0.0);
        self.steps.push(RouteStep { edge, forward });
        self.offsets.push(start + e.length);
        self.destination = e.other(self.destination);
    }

    /// Appends `other`, which must start where `self` ends.
    pub fn extend(&mut self, g: &RoadGraph, other: &Route) {
        assert_eq!(self.destination, other.origin, "routes do not connect");
        for step in &other.steps {
            self.push(g, step.edge);
        }
    }

    pub fn origin(&self) -> NodeId {
        self.origin
    }

    pub fn destination(&self) -> NodeId {
        self.destination
    }

    pub fn steps(&self) -> &[RouteStep] {
        &self.steps
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn total_length(&self) -> f64 {
        self.offsets.last().copied().unwrap_or(0.0)
    }

    /// Visited nodes, origin first.
    pub fn nodes(&self, g: &RoadGraph) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        let mut at = self.origin;
        out.push(at);
        for step in &self.steps {
            at = g.edge(step.edge).other(at);
            out.push(at);
        }
        out
    }

    /// Point reached after walking `distance` meters; clamped to the route.
    pub fn position_at(&self, g: &RoadGraph, distance: f64) -> Point {
        if self.steps.is_empty() || distance <= 0.0 {
            return g.node(self.origin);
        }
        let total = self.total_length();
        if distance >= total {
            return g.node(self.destination);
        }
        let i = self.offsets.partition_point(|&o| o < distance);
        let step = self.steps[i];
        let e = g.edge(step.edge);
        let (from, to) = if step.forward { (e.a, e.b) } else { (e.b, e.a) };
        let start = if i == 0 { 0.0 } else { self.offsets[i - 1] };
        g.node(from).lerp(g.node(to), (distance - start) / e.length)
    }

    /// Checks that the steps form a connected walk from origin to destination
    /// and that the cached lengths match the graph.
    pub fn is_valid_walk(&self, g: &RoadGraph) -> bool {
        let mut at = self.origin;
        let mut sum = 0.0;
        for (step, &offset) in self.steps.iter().zip(&self.offsets) {
            let Some(e) = g.edges().get(step.edge.index()) else {
                return false;
            };
            let (from, to) = if step.forward { (e.a, e.b) } else { (e.b, e.a) };
            if from != at {
                return false;
            }
            sum += e.length;
            if (sum - offset).abs() > 1e-9 * sum.max(1.0) {
                return false;
            }
            at = to;
        }
        at == self.destination && self.steps.len() == self.offsets.len()
    }
}
