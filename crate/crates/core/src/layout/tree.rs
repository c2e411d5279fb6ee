//! `2^d`-ary spatial tree for approximating the charge interactions.
//!
//! Nodes are threaded: `next` points to the node's sibling, or to the
//! parent's `next` for a last child, and the root's `next` is [`DUMMY`].
//! A traversal therefore never backtracks: it either descends into
//! `child` or jumps to `next`.

use alloc::vec;
use alloc::vec::Vec;

use super::{add_rubber_gradient, rubber_energy, Layout};
use crate::hypergraph::Hypergraph;
use crate::math::{dist2, dist_pow, sqrt};

/// Terminator of the threaded traversal.
pub const DUMMY: usize = usize::MAX;

const MAX_DEPTH: usize = 64;

#[derive(Debug, Clone)]
pub struct SpatialTree {
    dim: usize,
    lo: Vec<f64>,
    hi: Vec<f64>,
    center: Vec<f64>,
    weight: Vec<f64>,
    diameter: Vec<f64>,
    child: Vec<usize>,
    next: Vec<usize>,
    leaf: Vec<(usize, usize)>,
    points: Vec<usize>,
    leaf_capacity: usize,
}

impl SpatialTree {
    /// Recursive bisection of the bounding box along every axis; a cell is
    /// split while it holds more than `leaf_capacity` points and is wider
    /// than a relative `1e-12` of the root.
    pub fn build(x: &Layout, weights: &[f64], leaf_capacity: usize) -> SpatialTree {
        assert!(!x.is_empty(), "spatial tree needs at least one point");
        assert_eq!(weights.len(), x.len());
        assert!(x.dim() <= 63, "spatial tree supports at most 63 dimensions");
        assert!(leaf_capacity > 0);
        let d = x.dim();
        let (lo, hi) = x.bounds();
        let root_extent = lo.iter().zip(&hi).map(|(a, b)| b - a).fold(0.0, f64::max);
        let mut t = SpatialTree {
            dim: d,
            lo: Vec::new(),
            hi: Vec::new(),
            center: Vec::new(),
            weight: Vec::new(),
            diameter: Vec::new(),
            child: Vec::new(),
            next: Vec::new(),
            leaf: Vec::new(),
            points: (0..x.len()).collect(),
            leaf_capacity,
        };
        t.push_node(&lo, &hi, DUMMY);
        t.build_node(0, 0, x.len(), x, weights, 1e-12 * root_extent, 0);
        t
    }

    fn push_node(&mut self, lo: &[f64], hi: &[f64], next: usize) -> usize {
        let id = self.weight.len();
        self.lo.extend_from_slice(lo);
        self.hi.extend_from_slice(hi);
        self.center.extend(core::iter::repeat_n(0.0, self.dim));
        self.weight.push(0.0);
        self.diameter.push(sqrt(dist2(lo, hi)));
        self.child.push(DUMMY);
        self.next.push(next);
        self.leaf.push((0, 0));
        id
    }

    #[allow(clippy::too_many_arguments)]
    fn build_node(
        &mut self,
        node: usize,
        start: usize,
        end: usize,
        x: &Layout,
        weights: &[f64],
        min_extent: f64,
        depth: usize,
    ) {
        let d = self.dim;
        let mut w = 0.0;
        let mut c = vec![0.0; d];
        for &i in &self.points[start..end] {
            w += weights[i];
            c.iter_mut().zip(x.point(i)).for_each(|(s, p)| *s += weights[i] * p);
        }
        c.iter_mut().for_each(|s| *s /= w);
        self.weight[node] = w;
        self.center[node * d..(node + 1) * d].copy_from_slice(&c);

        let lo: Vec<f64> = self.lo[node * d..(node + 1) * d].to_vec();
        let hi: Vec<f64> = self.hi[node * d..(node + 1) * d].to_vec();
        let extent = lo.iter().zip(&hi).map(|(a, b)| b - a).fold(0.0, f64::max);
        if end - start <= self.leaf_capacity || depth >= MAX_DEPTH || !(extent > min_extent) {
            self.leaf[node] = (start, end);
            return;
        }

        let mid: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
        let code = |p: &[f64]| -> u64 { (0..d).fold(0u64, |acc, a| acc | (u64::from(p[a] >= mid[a]) << a)) };
        self.points[start..end].sort_by_key(|&i| code(x.point(i)));

        let mut runs: Vec<(u64, usize, usize)> = Vec::new();
        let mut s = start;
        while s < end {
            let key = code(x.point(self.points[s]));
            let mut e = s + 1;
            while e < end && code(x.point(self.points[e])) == key {
                e += 1;
            }
            runs.push((key, s, e));
            s = e;
        }

        let parent_next = self.next[node];
        let first = self.weight.len();
        for (r, &(key, _, _)) in runs.iter().enumerate() {
            let (clo, chi): (Vec<f64>, Vec<f64>) = (0..d)
                .map(|a| {
                    if key >> a & 1 == 1 {
                        (mid[a], hi[a])
                    } else {
                        (lo[a], mid[a])
                    }
                })
                .unzip();
            let next = if r + 1 < runs.len() { first + r + 1 } else { parent_next };
            self.push_node(&clo, &chi, next);
        }
        self.child[node] = first;
        for (r, &(_, s, e)) in runs.iter().enumerate() {
            self.build_node(first + r, s, e, x, weights, min_extent, depth + 1);
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.weight.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn weight(&self, t: usize) -> f64 {
        self.weight[t]
    }

    /// Weighted mean position of the points in `t`.
    pub fn position(&self, t: usize) -> &[f64] {
        &self.center[t * self.dim..(t + 1) * self.dim]
    }

    pub fn diameter(&self, t: usize) -> f64 {
        self.diameter[t]
    }

    pub fn child(&self, t: usize) -> Option<usize> {
        Some(self.child[t]).filter(|&c| c != DUMMY)
    }

    /// Threaded successor; [`DUMMY`] ends the traversal.
    pub fn next(&self, t: usize) -> usize {
        self.next[t]
    }

    pub fn leaf_capacity(&self) -> usize {
        self.leaf_capacity
    }

    /// Points stored in a leaf (empty for inner nodes).
    pub fn leaf_points(&self, t: usize) -> &[usize] {
        if self.child[t] != DUMMY {
            return &[];
        }
        let (s, e) = self.leaf[t];
        &self.points[s..e]
    }

    /// Direct children of `t`: the run of `next` links that starts at
    /// `child(t)` and stops at `next(t)`.
    pub fn children(&self, t: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut c = self.child[t];
        while c != DUMMY && c != self.next[t] {
            out.push(c);
            c = self.next[c];
        }
        out
    }

    fn contains(&self, t: usize, p: &[f64]) -> bool {
        let d = self.dim;
        let lo = &self.lo[t * d..(t + 1) * d];
        let hi = &self.hi[t * d..(t + 1) * d];
        p.iter().zip(lo.iter().zip(hi)).all(|(v, (a, b))| *v >= *a && *v <= *b)
    }

    /// Cells containing the query point are never far.
    fn is_far(&self, t: usize, p: &[f64], theta: f64) -> bool {
        if theta <= 0.0 || self.contains(t, p) {
            return false;
        }
        let r2 = dist2(self.position(t), p);
        r2 > 0.0 && self.diameter[t] < theta * sqrt(r2)
    }

    /// Visits every far node or leaf point that interacts with point `n`.
    fn visit<F: FnMut(&[f64], f64)>(&self, x: &Layout, w: &[f64], n: usize, theta: f64, mut f: F) {
        let p = x.point(n);
        let mut t = 0;
        while t != DUMMY {
            if self.is_far(t, p, theta) {
                f(self.position(t), self.weight[t]);
                t = self.next[t];
            } else if self.child[t] != DUMMY {
                t = self.child[t];
            } else {
                for &i in self.leaf_points(t) {
                    if i != n {
                        f(x.point(i), w[i]);
                    }
                }
                t = self.next[t];
            }
        }
    }
}

/// Gradient with the exact rubber-band term and the charge term from a
/// tree traversal with opening threshold `theta` (`0` opens every cell).
pub fn gradient_approx(g: &Hypergraph, x: &Layout, tree: &SpatialTree, theta: f64) -> Vec<f64> {
    let d = x.dim();
    let k = x.len();
    let mut y = vec![0.0; d * k];
    add_rubber_gradient(g, x, &mut y);
    let charge = (d - 2) as f64;
    let w = g.weights();
    for n in 0..k {
        let xn = x.point(n);
        let mut acc = vec![0.0; d];
        tree.visit(x, w, n, theta, |pos, wt| {
            let r2 = dist2(pos, xn);
            let s = charge * wt * w[n] / dist_pow(r2, d);
            for a in 0..d {
                acc[a] += s * (pos[a] - xn[a]);
            }
        });
        y[n * d..(n + 1) * d]
            .iter_mut()
            .zip(&acc)
            .for_each(|(yv, av)| *yv += av);
    }
    y
}

/// Energy with the charge sum approximated the same way as
/// [`gradient_approx`].
pub fn energy_approx(g: &Hypergraph, x: &Layout, tree: &SpatialTree, theta: f64) -> f64 {
    let d = x.dim();
    let w = g.weights();
    let mut repulsion = 0.0;
    for n in 0..x.len() {
        let xn = x.point(n);
        let mut acc = 0.0;
        tree.visit(x, w, n, theta, |pos, wt| {
            acc += wt / dist_pow(dist2(pos, xn), d - 2);
        });
        repulsion += w[n] * acc;
    }
    rubber_energy(g, x) + 0.5 * repulsion
}
