//! Matrix orderings from geometric separators: strengthened diagonals,
//! the plane-based vertex separator and recursive BBD/SBD permutations.

mod geometry;
mod matching;
mod recursive;
mod separator;
mod twobit;

use thiserror::Error;

pub use geometry::{bipartite_coordinates, bipartite_layout};
pub use matching::{hopcroft_karp, strengthen_diagonal, Matching, MatchingError};
pub use recursive::{recursive_order, NodeKind, OrderNode, OrderingTree, TreeError};
pub use separator::{split_once, Part, SeparatorPlane, Split, SplitError};
pub use twobit::refine_cut_twobit;

use crate::hypergraph::{EdgeCost, HypergraphError, Representation};
use crate::layout::{LayoutError, LayoutParams};

/// Where the separator goes relative to the two diagonal blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Form {
    /// Bordered block diagonal: first, second, separator.
    #[default]
    Bbd,
    /// Separated block diagonal: first, separator, second.
    Sbd,
}

/// Use of the freedom left inside each separator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CutStrategy {
    #[default]
    None,
    /// Order each separator recursively on the edges it contains.
    Schur,
    /// Sort separator vertices by the parts they touch in this many levels
    /// of the neighbouring splits.
    TwoBit(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderOptions {
    pub representation: Representation,
    pub edge_cost: EdgeCost,
    pub form: Form,
    pub cut: CutStrategy,
    /// Blocks with at most this many rows are not split further.
    pub min_block: usize,
    pub max_depth: usize,
    /// Keep a strengthened diagonal on the diagonal.
    pub matching: bool,
    pub kmeans_iters: usize,
    /// Layout parameters; `layout.seed` seeds the whole ordering.
    pub layout: LayoutParams,
}

impl Default for OrderOptions {
    fn default() -> Self {
        OrderOptions {
            representation: Representation::Bipartite,
            edge_cost: EdgeCost::Unit,
            form: Form::Bbd,
            cut: CutStrategy::None,
            min_block: 32,
            max_depth: 64,
            matching: true,
            kmeans_iters: crate::partition::DEFAULT_LLOYD_ITERS,
            layout: LayoutParams::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrderError {
    #[error("ordering needs a square matrix, got {nrows}x{ncols}")]
    NotSquare { nrows: usize, ncols: usize },
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error("geometry has {got} points but the representation has {expected} vertices")]
    GeometryMismatch { got: usize, expected: usize },
    #[error("invalid ordering option: {0}")]
    InvalidOptions(&'static str),
}
