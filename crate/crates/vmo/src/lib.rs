//! File formats, plots and the command-line front end for [`vmo_core`].
//!
//! - [`matio`]: Matrix Market, coordinate and permutation files.
//! - [`report`]: the block-tree text format.
//! - [`svg`]: spy plots and layout scatter plots.
//! - [`cli`]: the `vmo` command.

pub mod cli;
pub mod matio;
pub mod report;
pub mod svg;

pub use vmo_core;
