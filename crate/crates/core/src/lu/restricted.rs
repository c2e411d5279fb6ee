use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::ops::Range;

use super::dense::Work;
use super::{Factors, LuError};
use crate::ordering::{NodeKind, OrderNode, OrderingTree};
use crate::sparse::SparseMatrix;

/// Threshold `u` used when none is given.
pub const DEFAULT_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Pivoting {
    /// Eliminate on the diagonal as given; a zero pivot is an error.
    None,
    /// Accept a pivot `a_ik` when `|a_ik| >= u * max_i |a_ik|` over the
    /// remaining rows. The diagonal is preferred, then the largest entry of
    /// the column inside the pivot scope, then a column swap inside the
    /// scope.
    Threshold(f64),
}

fn collect_leaves<'a>(node: &'a OrderNode, tree: &OrderingTree, out: &mut Vec<&'a OrderNode>) {
    match &node.kind {
        NodeKind::Leaf => out.push(node),
        _ => {
            for c in node.children(tree.form()) {
                collect_leaves(c, tree, out);
            }
        }
    }
}

/// Position intervals inside which rows and columns may be exchanged: the
/// leaf blocks of the tree (diagonal blocks and separators), cut further
/// wherever a leaf's row and column ranges end at different positions.
pub fn pivot_scopes(tree: &OrderingTree) -> Vec<Range<usize>> {
    let mut leaves = Vec::new();
    collect_leaves(tree.root(), tree, &mut leaves);
    let mut cuts = BTreeSet::new();
    cuts.insert(0);
    cuts.insert(tree.len());
    for leaf in leaves {
        cuts.extend([leaf.rows.start, leaf.rows.end, leaf.cols.start, leaf.cols.end]);
    }
    let cuts: Vec<usize> = cuts.into_iter().collect();
    cuts.windows(2).map(|w| w[0]..w[1]).collect()
}

/// LU of a matrix already permuted by `tree`, eliminating in positional
/// order and exchanging rows and columns only inside the current pivot
/// scope (see [`pivot_scopes`]). Fill therefore stays in the diagonal
/// blocks, the borders and the separator blocks.
pub fn lu_restricted(a: &SparseMatrix, tree: &OrderingTree, pivoting: Pivoting) -> Result<Factors, LuError> {
    let mut w = Work::new(a)?;
    let n = w.n;
    if tree.len() != n {
        return Err(LuError::DimensionMismatch {
            got: n,
            expected: tree.len(),
        });
    }
    for scope in pivot_scopes(tree) {
        for k in scope.clone() {
            let err = || LuError::SingularBlock {
                step: k,
                rows: scope.clone(),
                cols: scope.clone(),
            };
            match pivoting {
                Pivoting::None => {
                    if w.at(k, k) == 0.0 {
                        return Err(err());
                    }
                }
                Pivoting::Threshold(u) => {
                    let (i, j) = choose_pivot(&w, k, scope.end, u).ok_or_else(err)?;
                    w.swap_rows(k, i);
                    w.swap_cols(k, j);
                }
            }
            w.eliminate(k);
        }
    }
    Ok(w.into_factors(n))
}

fn column_max(w: &Work, j: usize, from: usize) -> f64 {
    (from..w.n).map(|i| w.at(i, j).abs()).fold(0.0, f64::max)
}

fn choose_pivot(w: &Work, k: usize, end: usize, u: f64) -> Option<(usize, usize)> {
    let ok = |i: usize, j: usize, colmax: f64| {
        let v = w.at(i, j).abs();
        v > 0.0 && v >= u * colmax
    };
    let colmax = column_max(w, k, k);
    if ok(k, k, colmax) {
        return Some((k, k));
    }
    let best_row = (k..end).fold(None, |best: Option<usize>, i| match best {
        Some(b) if w.at(b, k).abs() >= w.at(i, k).abs() => Some(b),
        _ => Some(i),
    });
    if let Some(i) = best_row.filter(|&i| ok(i, k, colmax)) {
        return Some((i, k));
    }
    let mut best: Option<(usize, usize, f64)> = None;
    for j in (k + 1)..end {
        let cm = column_max(w, j, k);
        for i in k..end {
            let v = w.at(i, j).abs();
            if ok(i, j, cm) && best.is_none_or(|b| v > b.2) {
                best = Some((i, j, v));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}
