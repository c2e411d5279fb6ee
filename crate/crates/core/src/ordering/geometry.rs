use alloc::vec;

use super::OrderError;
use crate::hypergraph::{EdgeCost, Hypergraph, Representation};
use crate::layout::{layout_components, Layout, LayoutParams};
use crate::sparse::SparseMatrix;

fn vertex_count(m: &SparseMatrix, repr: Representation) -> usize {
    match repr {
        Representation::Symmetric => m.nrows(),
        Representation::Bipartite => m.nrows() + m.ncols(),
        Representation::ColumnNet => m.nrows(),
        Representation::RowNet => m.ncols(),
        Representation::Finegrain => m.nnz(),
    }
}

/// Averages `points` into one point per group; empty groups sit at the
/// origin.
fn group_means(dim: usize, groups: usize, members: impl Iterator<Item = (usize, usize)>, points: &Layout) -> Layout {
    let mut out = Layout::zeros(dim, groups);
    let mut count = vec![0usize; groups];
    for (group, point) in members {
        count[group] += 1;
        out.point_mut(group)
            .iter_mut()
            .zip(points.point(point))
            .for_each(|(s, v)| *s += v);
    }
    for (g, &c) in count.iter().enumerate() {
        if c > 0 {
            let inv = 1.0 / c as f64;
            out.point_mut(g).iter_mut().for_each(|s| *s *= inv);
        }
    }
    out
}

fn concat(a: &Layout, b: &Layout) -> Layout {
    let mut coords = a.coords().to_vec();
    coords.extend_from_slice(b.coords());
    Layout::new(a.dim(), coords)
}

/// Points for the bipartite vertices (rows, then columns) derived from a
/// layout of another representation.
///
/// Symmetric: row `i` and column `i` share point `i`. Column-net: rows are
/// the layout points and each column sits at the mean of its rows;
/// row-net is the transpose. Finegrain: each row and column sits at the
/// mean of its nonzeros. Rows or columns without nonzeros that have no
/// point of their own go to the origin.
pub fn bipartite_coordinates(m: &SparseMatrix, repr: Representation, layout: &Layout) -> Result<Layout, OrderError> {
    let expected = vertex_count(m, repr);
    if layout.len() != expected {
        return Err(OrderError::GeometryMismatch {
            got: layout.len(),
            expected,
        });
    }
    let d = layout.dim();
    let entries = m.entries();
    Ok(match repr {
        Representation::Bipartite => layout.clone(),
        Representation::Symmetric => {
            if !m.is_square() {
                return Err(OrderError::NotSquare {
                    nrows: m.nrows(),
                    ncols: m.ncols(),
                });
            }
            concat(layout, layout)
        }
        Representation::ColumnNet => {
            let cols = group_means(d, m.ncols(), entries.iter().map(|e| (e.1, e.0)), layout);
            concat(layout, &cols)
        }
        Representation::RowNet => {
            let rows = group_means(d, m.nrows(), entries.iter().map(|e| (e.0, e.1)), layout);
            concat(&rows, layout)
        }
        Representation::Finegrain => {
            let rows = group_means(d, m.nrows(), entries.iter().enumerate().map(|(k, e)| (e.0, k)), layout);
            let cols = group_means(d, m.ncols(), entries.iter().enumerate().map(|(k, e)| (e.1, k)), layout);
            concat(&rows, &cols)
        }
    })
}

/// Lays out the chosen representation component by component and maps the
/// result onto the bipartite vertices. The finegrain representation is laid
/// out through its dual, the bipartite graph.
pub fn bipartite_layout(
    m: &SparseMatrix,
    repr: Representation,
    cost: EdgeCost,
    params: &LayoutParams,
) -> Result<Layout, OrderError> {
    let laid_out = match repr {
        Representation::Finegrain => Representation::Bipartite,
        other => other,
    };
    let g = Hypergraph::from_matrix_with_costs(m, laid_out, cost)?;
    let x = layout_components(&g, params)?;
    bipartite_coordinates(m, laid_out, &x)
}
