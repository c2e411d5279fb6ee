//! Weighted hypergraphs, the matrix representations built on them, duals
//! and connected components.

mod coarsen;

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

pub use coarsen::CoarseningMap;

use crate::sparse::SparseMatrix;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HypergraphError {
    #[error("hyperedge {edge} references vertex {vertex} but there are {num_vertices} vertices")]
    VertexOutOfRange {
        edge: usize,
        vertex: usize,
        num_vertices: usize,
    },
    #[error("vertex {0} has a non-positive or non-finite weight")]
    BadWeight(usize),
    #[error("hyperedge {0} has a non-positive or non-finite cost")]
    BadCost(usize),
    #[error("{got} costs given for {expected} hyperedges")]
    CostCount { got: usize, expected: usize },
    #[error("the symmetric representation needs a structurally symmetric square matrix")]
    NotStructurallySymmetric,
}

/// How a matrix is turned into a hypergraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Representation {
    /// Vertices are the indices `0..m`; one edge `{i, j}` per nonzero.
    Symmetric,
    /// Rows `r_0..r_{m-1}` then columns `c_0..c_{n-1}`; one edge per nonzero.
    Bipartite,
    /// Vertices are rows; one net per column.
    ColumnNet,
    /// Vertices are columns; one net per row.
    RowNet,
    /// One vertex per nonzero (row-major); row nets followed by column nets.
    Finegrain,
}

/// Hyperedge costs derived from a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EdgeCost {
    #[default]
    Unit,
    /// `|a_ij|` rescaled into `[1e-3, 1]`. Only affects the symmetric and
    /// bipartite representations, where edges correspond to nonzeros.
    Magnitude,
}

/// A finite weighted hypergraph on vertices `0..k`.
///
/// Hyperedges are kept as an ordered list, so repeated vertex sets and
/// empty hyperedges survive. Each hyperedge is stored sorted and without
/// repeated vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypergraph {
    weights: Vec<f64>,
    edges: Vec<Vec<usize>>,
    costs: Vec<f64>,
}

impl Hypergraph {
    pub fn new(weights: Vec<f64>, mut edges: Vec<Vec<usize>>, costs: Vec<f64>) -> Result<Self, HypergraphError> {
        if costs.len() != edges.len() {
            return Err(HypergraphError::CostCount {
                got: costs.len(),
                expected: edges.len(),
            });
        }
        if let Some(v) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(HypergraphError::BadWeight(v));
        }
        if let Some(j) = costs.iter().position(|c| !(c.is_finite() && *c > 0.0)) {
            return Err(HypergraphError::BadCost(j));
        }
        let k = weights.len();
        for (j, e) in edges.iter_mut().enumerate() {
            if let Some(&v) = e.iter().find(|&&v| v >= k) {
                return Err(HypergraphError::VertexOutOfRange {
                    edge: j,
                    vertex: v,
                    num_vertices: k,
                });
            }
            e.sort_unstable();
            e.dedup();
        }
        Ok(Hypergraph { weights, edges, costs })
    }

    /// Unit weights and unit costs.
    pub fn unweighted(num_vertices: usize, edges: Vec<Vec<usize>>) -> Result<Self, HypergraphError> {
        let costs = vec![1.0; edges.len()];
        Self::new(vec![1.0; num_vertices], edges, costs)
    }

    pub fn from_matrix(m: &SparseMatrix, kind: Representation) -> Result<Self, HypergraphError> {
        Self::from_matrix_with_costs(m, kind, EdgeCost::Unit)
    }

    pub fn from_matrix_with_costs(
        m: &SparseMatrix,
        kind: Representation,
        cost: EdgeCost,
    ) -> Result<Self, HypergraphError> {
        let (nrows, ncols) = (m.nrows(), m.ncols());
        let max_abs = m.max_abs();
        let edge_cost = |v: f64| match cost {
            EdgeCost::Unit => 1.0,
            EdgeCost::Magnitude if max_abs > 0.0 => f64::max(v.abs() / max_abs, 1e-3),
            EdgeCost::Magnitude => 1.0,
        };
        let (num_vertices, edges, costs): (usize, Vec<Vec<usize>>, Vec<f64>) = match kind {
            Representation::Symmetric => {
                if !m.is_structurally_symmetric() {
                    return Err(HypergraphError::NotStructurallySymmetric);
                }
                let upper: Vec<_> = m.entries().iter().filter(|e| e.0 <= e.1).collect();
                (
                    nrows,
                    upper.iter().map(|e| vec![e.0, e.1]).collect(),
                    upper.iter().map(|e| edge_cost(e.2)).collect(),
                )
            }
            Representation::Bipartite => (
                nrows + ncols,
                m.entries().iter().map(|e| vec![e.0, nrows + e.1]).collect(),
                m.entries().iter().map(|e| edge_cost(e.2)).collect(),
            ),
            Representation::ColumnNet => {
                let t = m.transpose();
                let nets = (0..ncols).map(|j| t.row(j).iter().map(|e| e.1).collect()).collect();
                (nrows, nets, vec![1.0; ncols])
            }
            Representation::RowNet => {
                let nets = (0..nrows).map(|i| m.row(i).iter().map(|e| e.1).collect()).collect();
                (ncols, nets, vec![1.0; nrows])
            }
            Representation::Finegrain => {
                let mut row_nets = vec![Vec::new(); nrows];
                let mut col_nets = vec![Vec::new(); ncols];
                for (k, e) in m.entries().iter().enumerate() {
                    row_nets[e.0].push(k);
                    col_nets[e.1].push(k);
                }
                row_nets.extend(col_nets);
                (m.nnz(), row_nets, vec![1.0; nrows + ncols])
            }
        };
        Self::new(vec![1.0; num_vertices], edges, costs)
    }

    pub fn num_vertices(&self) -> usize {
        self.weights.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, v: usize) -> f64 {
        self.weights[v]
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge(&self, j: usize) -> &[usize] {
        &self.edges[j]
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn cost(&self, j: usize) -> f64 {
        self.costs[j]
    }

    /// For each vertex, the indices of the hyperedges containing it.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.num_vertices()];
        for (j, e) in self.edges.iter().enumerate() {
            for &v in e {
                inc[v].push(j);
            }
        }
        inc
    }

    /// The dual hypergraph: one vertex per hyperedge (weight = its cost) and
    /// one hyperedge per vertex (cost = its weight) listing the hyperedges
    /// incident to it.
    pub fn dual(&self) -> Hypergraph {
        Hypergraph {
            weights: self.costs.clone(),
            edges: self.incidence(),
            costs: self.weights.clone(),
        }
    }

    /// Copy without empty hyperedges.
    pub fn without_empty_edges(&self) -> Hypergraph {
        let keep: Vec<usize> = (0..self.num_edges()).filter(|&j| !self.edges[j].is_empty()).collect();
        Hypergraph {
            weights: self.weights.clone(),
            edges: keep.iter().map(|&j| self.edges[j].clone()).collect(),
            costs: keep.iter().map(|&j| self.costs[j]).collect(),
        }
    }

    /// Sub-hypergraph on `vertices` (listed in the order they should be
    /// renumbered) keeping only hyperedges that lie entirely inside it.
    /// Empty hyperedges are dropped.
    pub fn restrict(&self, vertices: &[usize]) -> Hypergraph {
        let mut local = vec![usize::MAX; self.num_vertices()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        let mut costs = Vec::new();
        for (e, &c) in self.edges.iter().zip(&self.costs) {
            if !e.is_empty() && e.iter().all(|&v| local[v] != usize::MAX) {
                let mut mapped: Vec<usize> = e.iter().map(|&v| local[v]).collect();
                mapped.sort_unstable();
                edges.push(mapped);
                costs.push(c);
            }
        }
        Hypergraph {
            weights: vertices.iter().map(|&v| self.weights[v]).collect(),
            edges,
            costs,
        }
    }

    /// Connected components by merging rooted trees along every hyperedge.
    /// Each label is the smallest vertex index of its component.
    pub fn connected_components(&self) -> ComponentLabels {
        let k = self.num_vertices();
        let mut parent: Vec<usize> = (0..k).collect();
        let find = |parent: &mut Vec<usize>, mut v: usize| {
            while parent[v] != parent[parent[v]] {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            parent[v]
        };
        for e in &self.edges {
            if e.is_empty() {
                continue;
            }
            let mut root = usize::MAX;
            for &v in e {
                root = root.min(find(&mut parent, v));
            }
            for &v in e {
                let r = find(&mut parent, v);
                parent[r] = root;
            }
        }
        for v in 0..k {
            while parent[v] != parent[parent[v]] {
                parent[v] = parent[parent[v]];
            }
        }
        ComponentLabels { labels: parent }
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().count() <= 1
    }

    /// One level of coarsening; see [`CoarseningMap`].
    pub fn coarsen(&self) -> (Hypergraph, CoarseningMap) {
        coarsen::coarsen(self)
    }
}

/// Component label per vertex: the smallest vertex index in its component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentLabels {
    labels: Vec<usize>,
}

impl ComponentLabels {
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn count(&self) -> usize {
        self.labels.iter().enumerate().filter(|(v, &p)| *v == p).count()
    }

    /// Vertex lists per component, ordered by label; vertices ascend.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut slot = vec![usize::MAX; self.labels.len()];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for (v, &p) in self.labels.iter().enumerate() {
            if slot[p] == usize::MAX {
                slot[p] = out.len();
                out.push(Vec::new());
            }
            out[slot[p]].push(v);
        }
        out
    }
}
