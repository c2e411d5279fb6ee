//! Visual representations: vertex positions in `R^d` obtained by minimising
//! a rubber-band plus repelling-charge energy.
//!
//! With hyperedge centres `z_j = mean(x_i, i in e_j)` the energy is
//!
//! ```text
//! f(x) = 1/2 sum_j c_j sum_{i in e_j} |x_i - z_j|^2
//!      + 1/2 sum_{i != j} w_i w_j / |x_i - x_j|^(d-2)
//! ```
//!
//! i.e. rubber-band exponent 2, charge exponent `d - 2` (harmonic, so far
//! clusters of charges can be replaced by their total charge at their
//! weighted centre) and unit scale constants.

mod descent;
mod tree;

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

pub use descent::{descend, layout_components, multilevel_layout};
pub use tree::{energy_approx, gradient_approx, SpatialTree, DUMMY};

use crate::hypergraph::Hypergraph;
use crate::math::{dist2, dist_pow};
use crate::sparse::{cmp_points, SparseMatrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LayoutError {
    #[error("points {0} and {1} coincide")]
    CoincidentPoints(usize, usize),
    #[error("hyperedge {0} is empty and has no centre")]
    EmptyHyperedge(usize),
    #[error("hypergraph has {0} connected components; lay out each component separately")]
    Disconnected(usize),
    #[error("hypergraph has no vertices")]
    Empty,
    #[error("layout has {got} points but the hypergraph has {expected} vertices")]
    SizeMismatch { got: usize, expected: usize },
    #[error("invalid layout parameter: {0}")]
    InvalidParams(&'static str),
}

/// Tunables for layout generation. The energy constants themselves are
/// fixed (exponents 2 and `dim - 2`, unit scales).
#[derive(Debug, Clone, PartialEq)]
pub struct LayoutParams {
    /// Target dimension, at least 3.
    pub dim: usize,
    /// Tree opening threshold: a cell is far when `diameter / distance < theta`.
    pub theta: f64,
    /// Multiplicative decay of the step scale per descent iteration.
    pub step_decay: f64,
    /// Descent iterations per multilevel level.
    pub descent_iters: usize,
    /// Stop coarsening at or below this many vertices.
    pub coarsest_size: usize,
    /// Factor applied to coarse positions when prolonging.
    pub prolong_scale: f64,
    /// Jitter added on prolongation, as a fraction of the mean
    /// nearest-neighbour spacing.
    pub jitter: f64,
    /// Maximum points per spatial tree leaf.
    pub leaf_capacity: usize,
    /// Up to this many vertices the descent guard uses the exact energy.
    pub exact_energy_limit: usize,
    pub seed: u64,
}

impl Default for LayoutParams {
    fn default() -> Self {
        LayoutParams {
            dim: 4,
            theta: 0.5,
            step_decay: 0.9,
            descent_iters: 200,
            coarsest_size: 64,
            prolong_scale: 1.25,
            jitter: 0.01,
            leaf_capacity: 8,
            exact_energy_limit: 1024,
            seed: 0,
        }
    }
}

impl LayoutParams {
    pub fn validate(&self) -> Result<(), LayoutError> {
        if self.dim < 3 {
            return Err(LayoutError::InvalidParams("dim must be at least 3"));
        }
        if self.dim > 63 {
            return Err(LayoutError::InvalidParams("dim must be at most 63"));
        }
        if !(self.step_decay > 0.0 && self.step_decay < 1.0) {
            return Err(LayoutError::InvalidParams("step_decay must lie in (0, 1)"));
        }
        if !(self.theta >= 0.0) {
            return Err(LayoutError::InvalidParams("theta must be non-negative"));
        }
        if self.leaf_capacity == 0 {
            return Err(LayoutError::InvalidParams("leaf_capacity must be positive"));
        }
        if !(self.prolong_scale > 0.0) || !(self.jitter >= 0.0) {
            return Err(LayoutError::InvalidParams("prolongation constants must be positive"));
        }
        Ok(())
    }
}

/// One point in `R^dim` per vertex, stored contiguously.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    dim: usize,
    coords: Vec<f64>,
}

impl Layout {
    pub fn new(dim: usize, coords: Vec<f64>) -> Self {
        assert!(dim > 0, "dimension must be positive");
        assert_eq!(coords.len() % dim, 0, "coordinate count must be a multiple of dim");
        Layout { dim, coords }
    }

    pub fn zeros(dim: usize, len: usize) -> Self {
        Layout::new(dim, vec![0.0; dim * len])
    }

    pub fn from_points<P: AsRef<[f64]>>(dim: usize, points: &[P]) -> Self {
        let mut coords = Vec::with_capacity(dim * points.len());
        for p in points {
            assert_eq!(p.as_ref().len(), dim);
            coords.extend_from_slice(p.as_ref());
        }
        Layout { dim, coords }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn point_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    /// Layout of the listed points, in order.
    pub fn select(&self, indices: &[usize]) -> Layout {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            coords.extend_from_slice(self.point(i));
        }
        Layout { dim: self.dim, coords }
    }

    pub fn scaled(&self, factor: f64) -> Layout {
        Layout {
            dim: self.dim,
            coords: self.coords.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn translated(&self, offset: &[f64]) -> Layout {
        assert_eq!(offset.len(), self.dim);
        let mut out = self.clone();
        for p in out.coords.chunks_exact_mut(self.dim) {
            p.iter_mut().zip(offset).for_each(|(c, o)| *c += o);
        }
        out
    }

    /// Axis-aligned bounds `(lo, hi)`.
    pub fn bounds(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for p in self.points() {
            for a in 0..self.dim {
                lo[a] = lo[a].min(p[a]);
                hi[a] = hi[a].max(p[a]);
            }
        }
        (lo, hi)
    }

    pub fn bbox_diagonal(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let (lo, hi) = self.bounds();
        crate::math::sqrt(dist2(&lo, &hi))
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }

    /// First pair of coincident points, if any.
    pub fn find_coincident(&self) -> Option<(usize, usize)> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| cmp_points(self.point(a), self.point(b)).then(a.cmp(&b)));
        idx.windows(2)
            .find(|w| self.point(w[0]) == self.point(w[1]))
            .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
    }

    pub fn all_distinct(&self) -> bool {
        self.find_coincident().is_none()
    }

    pub fn centroid(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.dim];
        for p in self.points() {
            c.iter_mut().zip(p).for_each(|(s, x)| *s += x);
        }
        let n = self.len().max(1) as f64;
        c.iter_mut().for_each(|s| *s /= n);
        c
    }
}

pub(crate) fn check_inputs(g: &Hypergraph, x: &Layout) -> Result<(), LayoutError> {
    if x.len() != g.num_vertices() {
        return Err(LayoutError::SizeMismatch {
            got: x.len(),
            expected: g.num_vertices(),
        });
    }
    if let Some(j) = g.edges().iter().position(|e| e.is_empty()) {
        return Err(LayoutError::EmptyHyperedge(j));
    }
    Ok(())
}

/// Hyperedge centres, `dim` values per hyperedge.
pub(crate) fn edge_centers(g: &Hypergraph, x: &Layout) -> Vec<f64> {
    let d = x.dim();
    let mut z = vec![0.0; d * g.num_edges()];
    for (j, e) in g.edges().iter().enumerate() {
        let zj = &mut z[j * d..(j + 1) * d];
        for &i in e {
            zj.iter_mut().zip(x.point(i)).for_each(|(s, c)| *s += c);
        }
        let inv = 1.0 / e.len() as f64;
        zj.iter_mut().for_each(|s| *s *= inv);
    }
    z
}

pub(crate) fn rubber_energy(g: &Hypergraph, x: &Layout) -> f64 {
    let d = x.dim();
    let z = edge_centers(g, x);
    let mut sum = 0.0;
    for (j, e) in g.edges().iter().enumerate() {
        let zj = &z[j * d..(j + 1) * d];
        let s: f64 = e.iter().map(|&i| dist2(x.point(i), zj)).sum();
        sum += g.cost(j) * s;
    }
    0.5 * sum
}

/// Adds `c_j (x_n - z_j)` over the hyperedges containing each vertex.
pub(crate) fn add_rubber_gradient(g: &Hypergraph, x: &Layout, y: &mut [f64]) {
    let d = x.dim();
    let z = edge_centers(g, x);
    for (j, e) in g.edges().iter().enumerate() {
        let c = g.cost(j);
        let zj = &z[j * d..(j + 1) * d];
        for &n in e {
            let xn = x.point(n);
            let yn = &mut y[n * d..(n + 1) * d];
            for a in 0..d {
                yn[a] += c * (xn[a] - zj[a]);
            }
        }
    }
}

/// Exact energy, with the `O(k^2)` charge sum.
pub fn energy(g: &Hypergraph, x: &Layout) -> Result<f64, LayoutError> {
    check_inputs(g, x)?;
    let d = x.dim();
    let k = x.len();
    let mut repulsion = 0.0;
    for i in 0..k {
        for j in (i + 1)..k {
            let r2 = dist2(x.point(i), x.point(j));
            if r2 == 0.0 {
                return Err(LayoutError::CoincidentPoints(i, j));
            }
            repulsion += g.weight(i) * g.weight(j) / dist_pow(r2, d - 2);
        }
    }
    // The ordered double sum counts each pair twice, cancelling the 1/2.
    Ok(rubber_energy(g, x) + repulsion)
}

/// Exact gradient, `dim` values per vertex.
pub fn gradient_exact(g: &Hypergraph, x: &Layout) -> Result<Vec<f64>, LayoutError> {
    check_inputs(g, x)?;
    let d = x.dim();
    let k = x.len();
    let mut y = vec![0.0; d * k];
    add_rubber_gradient(g, x, &mut y);
    let charge = (d - 2) as f64;
    for n in 0..k {
        let xn = x.point(n);
        let wn = g.weight(n);
        for i in 0..k {
            if i == n {
                continue;
            }
            let xi = x.point(i);
            let r2 = dist2(xi, xn);
            if r2 == 0.0 {
                return Err(LayoutError::CoincidentPoints(i.min(n), i.max(n)));
            }
            let s = charge * g.weight(i) * wn / dist_pow(r2, d);
            let yn = &mut y[n * d..(n + 1) * d];
            for a in 0..d {
                yn[a] += s * (xi[a] - xn[a]);
            }
        }
    }
    Ok(y)
}

/// Places each nonzero `(i, j)` at the midpoint of row `i` and column `j`
/// of a bipartite layout; output order follows the matrix entries.
pub fn finegrain_points(bipartite: &Layout, m: &SparseMatrix) -> Layout {
    assert_eq!(bipartite.len(), m.nrows() + m.ncols(), "bipartite layout size");
    let d = bipartite.dim();
    let mut coords = Vec::with_capacity(d * m.nnz());
    for &(i, j, _) in m.entries() {
        let r = bipartite.point(i);
        let c = bipartite.point(m.nrows() + j);
        coords.extend(r.iter().zip(c).map(|(a, b)| 0.5 * (a + b)));
    }
    Layout::new(d, coords)
}
