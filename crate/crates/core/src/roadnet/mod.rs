//! Road networks: representation, Manhattan-grid generation, the text file
//! format and the three routing policies.

mod format;
mod graph;
mod grid;
mod route;
mod routing;

use thiserror::Error;

pub use format::{load_road_graph, write_road_graph};
pub use graph::{Edge, EdgeId, GraphError, NodeId, Point, RoadGraph};
pub use grid::{generate_manhattan_grid, grid_node};
pub use route::{Route, RouteStep};
pub use routing::{distances_from, main_road_route, random_route, shortest_path, Perturbation};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RoadnetError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("unknown node {0}")]
    UnknownNode(u32),
    #[error("no route from node {src} to node {dst}")]
    NoRoute { src: u32, dst: u32 },
}
