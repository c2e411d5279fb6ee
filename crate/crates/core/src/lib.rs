//! Geometric ordering of sparse matrices.
//!
//! The pipeline lays out a hypergraph representation of a matrix in `d`
//! dimensions by minimising a rubber-band/repelling-charge energy, splits
//! the layout with k-means++ and a separating plane, and turns the resulting
//! vertex separators into recursive Bordered Block Diagonal (BBD) or
//! Separated Block Diagonal (SBD) permutations. An evaluation harness
//! (dense LU engines, fill-in, backward error, cut sizes) measures how good
//! an ordering is.
//!
//! The crate is `no_std` and only needs `alloc`. Parsing, file formats and
//! the command-line front end live in the companion `vmo` crate.

#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod math;

pub mod hypergraph;
pub mod layout;
pub mod lu;
pub mod ordering;
pub mod partition;
pub mod sparse;

pub use hypergraph::{CoarseningMap, ComponentLabels, EdgeCost, Hypergraph, Representation};
pub use layout::{Layout, LayoutParams};
pub use ordering::{CutStrategy, Form, Matching, OrderOptions, OrderingTree};
pub use partition::Clustering;
pub use sparse::{Permutation, SparseMatrix};
