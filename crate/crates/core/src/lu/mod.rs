//! Dense LU engines for judging orderings, and the quality metrics built
//! on them.
//!
//! The engines keep a structural mask next to the values: an entry is
//! nonzero once it is stored in the input or has been updated by an
//! elimination step, even if its value cancels to zero. Fill is therefore
//! counted the way it appears in a sparse factor pattern.

mod dense;
mod metrics;
mod restricted;

use alloc::vec::Vec;
use core::ops::Range;

use thiserror::Error;

pub use dense::{lu_complete_pivot, PivotMode};
pub use metrics::{
    cut_metrics, determinant, fill_in, numeric_rank, permitted_region, rank_bound_check, reconstruction_error,
    solve_and_backward_error, BlockRanks, CutMetrics, RankVerdict, RegionMask, SplitCut,
};
pub use restricted::{lu_restricted, pivot_scopes, Pivoting, DEFAULT_THRESHOLD};

use crate::sparse::{Permutation, SparseMatrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LuError {
    #[error("LU needs a square matrix, got {nrows}x{ncols}")]
    NotSquare { nrows: usize, ncols: usize },
    #[error("matrix is {got}x{got} but the ordering has {expected} rows")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("no acceptable pivot at step {step} in block rows {rows:?}, columns {cols:?}")]
    SingularBlock {
        step: usize,
        rows: Range<usize>,
        cols: Range<usize>,
    },
    #[error("U has a zero on its diagonal at {0}")]
    ZeroDiagonal(usize),
    #[error("right-hand side has length {got}, expected {expected}")]
    RhsLength { got: usize, expected: usize },
    #[error("block sizes b = {b}, c = {c} exceed a = {a}")]
    InconsistentBlocks { a: usize, b: usize, c: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PivotKind {
    RowSwap,
    ColumnSwap,
    /// A zero pivot: the elimination step was skipped.
    ZeroPivot,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PivotEvent {
    pub step: usize,
    pub kind: PivotKind,
    /// Position swapped with `step`, or `step` itself for a zero pivot.
    pub with: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PivotLog {
    pub events: Vec<PivotEvent>,
    /// Pivot value used at each elimination step.
    pub pivots: Vec<f64>,
}

impl PivotLog {
    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn count(&self, kind: PivotKind) -> usize {
        self.events.iter().filter(|e| e.kind == kind).count()
    }
}

/// `A[row_perm][col_perm] = L U` with unit lower triangular `L`.
///
/// With a partial bound, rows and columns from `eliminated` on form an
/// uneliminated trailing block stored in `U`.
#[derive(Debug, Clone, PartialEq)]
pub struct Factors {
    pub row_perm: Permutation,
    pub col_perm: Permutation,
    pub l: SparseMatrix,
    pub u: SparseMatrix,
    pub log: PivotLog,
    pub eliminated: usize,
}

impl Factors {
    pub fn n(&self) -> usize {
        self.row_perm.len()
    }

    pub fn nnz_l(&self) -> usize {
        self.l.nnz()
    }

    pub fn nnz_u(&self) -> usize {
        self.u.nnz()
    }
}
