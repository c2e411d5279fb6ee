use alloc::vec::Vec;

use thiserror::Error;

use crate::hypergraph::Hypergraph;
use crate::layout::Layout;
use crate::math::{dist2, dot};
use crate::partition::{kmeans_pp, PartitionError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplitError {
    #[error("fewer than two distinct points; nothing to split")]
    Degenerate,
    #[error("hyperedge {0} has more than two vertices; splitting needs a graph")]
    NotAGraph(usize),
    #[error("layout has {got} points for {expected} vertices")]
    SizeMismatch { got: usize, expected: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Part {
    First,
    Second,
    Separator,
}

impl Part {
    fn index(self) -> u8 {
        match self {
            Part::First => 1,
            Part::Second => 2,
            Part::Separator => 3,
        }
    }
}

/// The plane `{x : x . normal = offset}` halfway between the two centers.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparatorPlane {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl SeparatorPlane {
    pub fn distance(&self, x: &[f64]) -> f64 {
        (dot(x, &self.normal) - self.offset).abs()
    }
}

/// Three-way vertex and edge partition of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub vertex_part: Vec<Part>,
    pub edge_part: Vec<Part>,
    pub plane: SeparatorPlane,
}

impl Split {
    pub fn vertices(&self, part: Part) -> Vec<usize> {
        (0..self.vertex_part.len())
            .filter(|&v| self.vertex_part[v] == part)
            .collect()
    }

    pub fn edges(&self, part: Part) -> Vec<usize> {
        (0..self.edge_part.len())
            .filter(|&j| self.edge_part[j] == part)
            .collect()
    }

    /// Checks the separator invariants against `g` and the optional mate
    /// map, returning a description of the first violation.
    pub fn verify(&self, g: &Hypergraph, mate: Option<&[usize]>) -> Result<(), &'static str> {
        if self.vertex_part.len() != g.num_vertices() || self.edge_part.len() != g.num_edges() {
            return Err("part vectors do not cover the graph");
        }
        for (j, e) in g.edges().iter().enumerate() {
            let has = |p: Part| e.iter().any(|&v| self.vertex_part[v] == p);
            if has(Part::First) && has(Part::Second) {
                return Err("an edge joins the first and second parts");
            }
            let ok = match self.edge_part[j] {
                Part::First => e.iter().all(|&v| self.vertex_part[v] == Part::First),
                Part::Second => e.iter().all(|&v| self.vertex_part[v] == Part::Second),
                Part::Separator => has(Part::Separator),
            };
            if !ok {
                return Err("edge classified inconsistently with its vertices");
            }
        }
        if let Some(mate) = mate {
            if (0..g.num_vertices()).any(|v| self.vertex_part[v] != self.vertex_part[mate[v]]) {
                return Err("a matched pair is split across parts");
            }
        }
        Ok(())
    }
}

/// Geometric vertex separator.
///
/// Two k-means++ centers split the points by proximity (ties go to the
/// first center). Every edge that still joins the two sides, taken in
/// edge order, moves its endpoint closer to the bisecting plane (the first
/// endpoint on a tie) into the separator, together with that endpoint's
/// mate when a mate map is given. Edges take the largest part of their
/// endpoints.
pub fn split_once(
    g: &Hypergraph,
    x: &Layout,
    mate: Option<&[usize]>,
    kmeans_iters: usize,
    seed: u64,
) -> Result<Split, SplitError> {
    let k = g.num_vertices();
    if x.len() != k {
        return Err(SplitError::SizeMismatch {
            got: x.len(),
            expected: k,
        });
    }
    if let Some(j) = g.edges().iter().position(|e| e.len() > 2) {
        return Err(SplitError::NotAGraph(j));
    }
    let clustering = match kmeans_pp(x, 2, kmeans_iters, seed) {
        Ok(c) => c,
        Err(PartitionError::TooManyClusters { .. }) | Err(PartitionError::NoClusters) => {
            return Err(SplitError::Degenerate)
        }
        Err(PartitionError::DimMismatch { .. }) => unreachable!("centers come from the points"),
    };
    let z1 = clustering.centers().point(0);
    let z2 = clustering.centers().point(1);

    let mut part: Vec<Part> = x
        .points()
        .map(|p| {
            if dist2(p, z1) <= dist2(p, z2) {
                Part::First
            } else {
                Part::Second
            }
        })
        .collect();

    let normal: Vec<f64> = z2.iter().zip(z1).map(|(b, a)| b - a).collect();
    let mid: Vec<f64> = z2.iter().zip(z1).map(|(b, a)| 0.5 * (b + a)).collect();
    let plane = SeparatorPlane {
        offset: dot(&mid, &normal),
        normal,
    };

    for e in g.edges() {
        if e.len() != 2 {
            continue;
        }
        let (v, w) = (e[0], e[1]);
        let cut = matches!(
            (part[v], part[w]),
            (Part::First, Part::Second) | (Part::Second, Part::First)
        );
        if !cut {
            continue;
        }
        let moved = if plane.distance(x.point(v)) <= plane.distance(x.point(w)) {
            v
        } else {
            w
        };
        part[moved] = Part::Separator;
        if let Some(mate) = mate {
            part[mate[moved]] = Part::Separator;
        }
    }

    let edge_part = g
        .edges()
        .iter()
        .map(|e| {
            e.iter()
                .map(|&v| part[v])
                .max_by_key(|p| p.index())
                .unwrap_or(Part::First)
        })
        .collect();
    Ok(Split {
        vertex_part: part,
        edge_part,
        plane,
    })
}
