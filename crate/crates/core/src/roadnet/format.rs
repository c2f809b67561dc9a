//! Line-oriented text format for road graphs.
//!
//! ```text
//! # comment
//! nodes <N> edges <E>
//! node <id> <x_m> <y_m>          (N lines)
//! edge <id> <node_a> <node_b> <length_m> <main:0|1>   (E lines)
//! ```

use std::fmt::Write as _;
use std::str::FromStr;

use super::graph::{Edge, NodeId, Point, RoadGraph};
use super::RoadnetError;

fn parse_err(line: usize, message: impl Into<String>) -> RoadnetError {
    RoadnetError::Parse {
        line,
        message: message.into(),
    }
}

fn field<T: FromStr>(
    line: usize,
    tokens: &[&str],
    idx: usize,
    what: &str,
) -> Result<T, RoadnetError> {
    let raw = tokens
        .get(idx)
        .ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    raw.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} `{raw}`")))
}

fn dense_slot<T>(
    line: usize,
    slots: &mut [Option<T>],
    id: usize,
    kind: &str,
) -> Result<usize, RoadnetError> {
    match slots.get(id) {
        None => Err(parse_err(
            line,
            format!("{kind} id {id} outside [0, {})", slots.len()),
        )),
        Some(Some(_)) => Err(parse_err(line, format!("duplicate {kind} id {id}"))),
        Some(None) => Ok(id),
    }
}

pub fn load_road_graph(text: &str) -> Result<RoadGraph, RoadnetError> {
    let mut lines = text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("").trim();
        (!content.is_empty()).then_some((i + 1, content))
    });

    let (header_line, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing `nodes <N> edges <E>` header"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 4 || tokens[0] != "nodes" || tokens[2] != "edges" {
        return Err(parse_err(header_line, "expected `nodes <N> edges <E>`"));
    }
    let n_nodes: usize = field(header_line, &tokens, 1, "node count")?;
    let n_edges: usize = field(header_line, &tokens, 3, "edge count")?;
    if n_edges == 0 {
        return Err(parse_err(header_line, "graph must have at least one edge"));
    }

    let mut nodes: Vec<Option<Point>> = vec![None; n_nodes];
    let mut edges: Vec<Option<Edge>> = vec![None; n_edges];
    let mut seen_nodes = 0;
    let mut seen_edges = 0;
    let mut last_line = header_line;

    for (line, content) in lines {
        last_line = line;
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens[0] {
            "node" => {
                if seen_edges > 0 {
                    return Err(parse_err(line, "node line after edge lines"));
                }
                if tokens.len() != 4 {
                    return Err(parse_err(line, "expected `node <id> <x_m> <y_m>`"));
                }
                let id = dense_slot(
                    line,
                    &mut nodes,
                    field(line, &tokens, 1, "node id")?,
                    "node",
                )?;
                let x: f64 = field(line, &tokens, 2, "x coordinate")?;
                let y: f64 = field(line, &tokens, 3, "y coordinate")?;
                if !x.is_finite() || !y.is_finite() {
                    return Err(parse_err(line, "non-finite coordinate"));
                }
                nodes[id] = Some(Point::new(x, y));
                seen_nodes += 1;
            }
            "edge" => {
                if tokens.len() != 6 {
                    return Err(parse_err(
                        line,
                        "expected `edge <id> <node_a> <node_b> <length_m> <main:0|1>`",
                    ));
                }
                let id = dense_slot(
                    line,
                    &mut edges,
                    field(line, &tokens, 1, "edge id")?,
                    "edge",
                )?;
                let a: u32 = field(line, &tokens, 2, "node_a")?;
                let b: u32 = field(line, &tokens, 3, "node_b")?;
                for n in [a, b] {
                    if n as usize >= n_nodes || nodes[n as usize].is_none() {
                        return Err(parse_err(line, format!("dangling reference to node {n}")));
                    }
                }
                if a == b {
                    return Err(parse_err(line, format!("self-loop on node {a}")));
                }
                let length: f64 = field(line, &tokens, 4, "length")?;
                if !(length > 0.0) || !length.is_finite() {
                    return Err(parse_err(line, format!("nonpositive length {length}")));
                }
                let is_main_road = match tokens[5] {
                    "0" => false,
                    "1" => true,
                    other => {
                        return Err(parse_err(
                            line,
                            format!("main flag must be 0 or 1, got `{other}`"),
                        ))
                    }
                };
                edges[id] = Some(Edge {
                    a: NodeId(a),
                    b: NodeId(b),
                    length,
                    is_main_road,
                });
                seen_edges += 1;
            }
            other => return Err(parse_err(line, format!("unknown record `{other}`"))),
        }
    }

    if seen_nodes != n_nodes {
        return Err(parse_err(
            last_line,
            format!("header declares {n_nodes} nodes, found {seen_nodes}"),
        ));
    }
    if seen_edges != n_edges {
        return Err(parse_err(
            last_line,
            format!("header declares {n_edges} edges, found {seen_edges}"),
        ));
    }

    let nodes = nodes.into_iter().flatten().collect();
    let edges = edges.into_iter().flatten().collect();
    Ok(RoadGraph::new(nodes, edges)?)
}

pub fn write_road_graph(g: &RoadGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "nodes {} edges {}", g.node_count(), g.edge_count());
    for (i, p) in g.nodes().iter().enumerate() {
        let _ = writeln!(out, "node {i} {} {}", p.x, p.y);
    }
    for (i, e) in g.edges().iter().enumerate() {
        let _ = writeln!(
            out,
            "edge {i} {} {} {} {}",
            e.a,
            e.b,
            e.length,
            u8::from(e.is_main_road)
        );
    }
    out
}
