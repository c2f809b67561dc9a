use super::graph::{Edge, NodeId, Point, RoadGraph};
use super::RoadnetError;

/// Node id of the intersection at `(row, col)` in a grid with `cols` columns.
pub fn grid_node(cols: usize, row: usize, col: usize) -> NodeId {
    NodeId((row * cols + col) as u32)
}

/// Builds a `rows × cols` lattice of intersections spaced `block_len` meters
/// apart. Node `(row, col)` sits at `x = col·block_len`, `y = row·block_len`.
///
/// Horizontal edges are emitted first (row-major), then vertical edges. Every
/// vertical edge whose column is listed in `main_cols` is a main road.
pub fn generate_manhattan_grid(
    rows: usize,
    cols: usize,
    block_len: f64,
    main_cols: &[usize],
) -> Result<RoadGraph, RoadnetError> {
    if rows == 0 || cols == 0 {
        return Err(RoadnetError::InvalidGrid(format!(
            "grid needs at least one row and column, got {rows}x{cols}"
        )));
    }
    if !(block_len > 0.0) || !block_len.is_finite() {
        return Err(RoadnetError::InvalidGrid(format!(
            "block length must be positive, got {block_len}"
        )));
    }
    if let Some(&bad) = main_cols.iter().find(|&&c| c >= cols) {
        return Err(RoadnetError::InvalidGrid(format!(
            "main road column {bad} outside [0, {cols})"
        )));
    }
    if (rows * cols) > u32::MAX as usize {
        return Err(RoadnetError::InvalidGrid("grid too large".into()));
    }

    let mut nodes = Vec::with_capacity(rows * cols);
    for row in 0..rows {
        for col in 0..cols {
            nodes.push(Point::new(col as f64 * block_len, row as f64 * block_len));
        }
    }

    let mut edges = Vec::with_capacity(rows * (cols - 1) + cols * (rows - 1));
    for row in 0..rows {
        for col in 0..cols - 1 {
            edges.push(Edge {
                a: grid_node(cols, row, col),
                b: grid_node(cols, row, col + 1),
                length: block_len,
                is_main_road: false,
            });
        }
    }
    for row in 0..rows - 1 {
        for col in 0..cols {
            edges.push(Edge {
                a: grid_node(cols, row, col),
                b: grid_node(cols, row + 1, col),
                length: block_len,
                is_main_road: main_cols.contains(&col),
            });
        }
    }

    Ok(RoadGraph::new(nodes, edges)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_square() {
        let g = generate_manhattan_grid(2, 2, 200.0, &[]).unwrap();
        assert_eq!(
            (g.node_count(), g.edge_count(), g.main_road_edge_count()),
            (4, 4, 0)
        );
    }

    #[test]
    fn ten_by_ten_with_three_main_columns() {
        let g = generate_manhattan_grid(10, 10, 200.0, &[2, 5, 8]).unwrap();
        assert_eq!(g.node_count(), 100);
        assert_eq!(g.edge_count(), 180);
        assert_eq!(g.main_road_edge_count(), 27);
        assert_eq!(g.main_road_components().len(), 3);
        for e in g.edges().iter().filter(|e| e.is_main_road) {
            let (pa, pb) = (g.node(e.a), g.node(e.b));
            assert_eq!(pa.x, pb.x, "main roads are vertical");
            assert!([400.0, 1000.0, 1600.0].contains(&pa.x));
        }
    }

    #[test]
    fn single_row_is_a_path() {
        let g = generate_manhattan_grid(1, 5, 100.0, &[]).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (5, 4));
        for e in g.edges() {
            assert_eq!(e.length, g.node(e.a).distance(g.node(e.b)));
        }
    }

    #[test]
    fn rejects_bad_main_column() {
        assert!(matches!(
            generate_manhattan_grid(3, 3, 10.0, &[3]),
            Err(RoadnetError::InvalidGrid(_))
        ));
        assert!(generate_manhattan_grid(0, 3, 10.0, &[]).is_err());
        assert!(generate_manhattan_grid(3, 3, 0.0, &[]).is_err());
    }

    #[test]
    fn lattice_counts_match_closed_form() {
        for rows in 1..=12 {
            for cols in 1..=12 {
                let g = generate_manhattan_grid(rows, cols, 1.0, &[0]).unwrap();
                assert_eq!(g.node_count(), rows * cols);
                assert_eq!(g.edge_count(), rows * (cols - 1) + cols * (rows - 1));
                assert_eq!(g.main_road_edge_count(), rows - 1);
            }
        }
    }
}
