use alloc::vec::Vec;

use super::recursive::{NodeKind, OrderNode, OrderingTree};
use super::CutStrategy;
use crate::sparse::{Permutation, SparseMatrix};

const MAX_LEVELS: usize = 32;

/// Bits contributed by a neighbour at position `p` (a column position when
/// `by_cols`) below a split: level 1 is the most significant pair; within a
/// pair, value 1 marks the first sub-block and value 2 the second.
fn path_bits(first: &OrderNode, second: &OrderNode, p: usize, by_cols: bool, levels: usize) -> u64 {
    let range = |node: &OrderNode| if by_cols { node.cols.clone() } else { node.rows.clone() };
    let mut cur = if range(first).contains(&p) {
        first
    } else if range(second).contains(&p) {
        second
    } else {
        return 0;
    };
    let mut bits = 0u64;
    for level in 1..=levels {
        let NodeKind::Split { first, second, .. } = &cur.kind else {
            break;
        };
        let shift = 2 * (levels - level);
        if range(first).contains(&p) {
            bits |= 1 << shift;
            cur = first;
        } else if range(second).contains(&p) {
            bits |= 2 << shift;
            cur = second;
        } else {
            break;
        }
    }
    bits
}

struct Ctx<'a> {
    m: &'a SparseMatrix,
    mt: SparseMatrix,
    row_pos: Vec<usize>,
    col_pos: Vec<usize>,
    rows: Vec<usize>,
    cols: Vec<usize>,
    matched: bool,
    levels: usize,
}

impl Ctx<'_> {
    fn refine(&mut self, node: &mut OrderNode) {
        match &mut node.kind {
            NodeKind::Leaf => {}
            NodeKind::Components(children) => children.iter_mut().for_each(|c| self.refine(c)),
            NodeKind::Split {
                first,
                second,
                separator,
                refined_levels,
            } => {
                self.sort_separator(first, second, separator);
                *refined_levels = self.levels;
                self.refine(first);
                self.refine(second);
                self.refine(separator);
            }
        }
    }

    fn sort_separator(&mut self, first: &OrderNode, second: &OrderNode, sep: &OrderNode) {
        let levels = self.levels;
        let row_keys: Vec<u64> = sep
            .rows
            .clone()
            .map(|k| {
                self.m.row(self.rows[k]).iter().fold(0, |acc, e| {
                    acc | path_bits(first, second, self.col_pos[e.1], true, levels)
                })
            })
            .collect();
        let col_keys: Vec<u64> = sep
            .cols
            .clone()
            .map(|k| {
                self.mt.row(self.cols[k]).iter().fold(0, |acc, e| {
                    acc | path_bits(first, second, self.row_pos[e.1], false, levels)
                })
            })
            .collect();

        if self.matched && sep.rows.len() == sep.cols.len() {
            let keys: Vec<u64> = row_keys.iter().zip(&col_keys).map(|(a, b)| a | b).collect();
            let order = stable_order(&keys);
            reorder(&mut self.rows[sep.rows.clone()], &order);
            reorder(&mut self.cols[sep.cols.clone()], &order);
        } else {
            reorder(&mut self.rows[sep.rows.clone()], &stable_order(&row_keys));
            reorder(&mut self.cols[sep.cols.clone()], &stable_order(&col_keys));
        }
    }
}

fn stable_order(keys: &[u64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..keys.len()).collect();
    idx.sort_by_key(|&i| keys[i]);
    idx
}

fn reorder(slice: &mut [usize], order: &[usize]) {
    let copy: Vec<usize> = order.iter().map(|&i| slice[i]).collect();
    slice.copy_from_slice(&copy);
}

/// Sorts the vertices of every separator by which sub-blocks of the
/// neighbouring splits they touch, for up to `levels` (at most 32) levels
/// below the split. A row gets the first bit of a level when it has a
/// nonzero in a column of the first sub-block at that level and the second
/// bit for the second sub-block; columns likewise. Matched separators sort
/// row/column pairs on the union of both keys.
///
/// Leaves the tree alone when `levels` is zero or the tree was not built
/// for two-bit refinement.
pub fn refine_cut_twobit(tree: &mut OrderingTree, m: &SparseMatrix, levels: usize) {
    if levels == 0 || !matches!(tree.cut_strategy(), CutStrategy::TwoBit(_)) {
        return;
    }
    let levels = levels.min(MAX_LEVELS);
    let matched = tree.is_matched();
    let (root, row_perm, col_perm) = tree.parts_mut();
    let mut ctx = Ctx {
        m,
        mt: m.transpose(),
        row_pos: row_perm.positions(),
        col_pos: col_perm.positions(),
        rows: row_perm.as_slice().to_vec(),
        cols: col_perm.as_slice().to_vec(),
        matched,
        levels,
    };
    ctx.refine(root);
    *row_perm = Permutation::new(ctx.rows).expect("separators are reordered in place");
    *col_perm = Permutation::new(ctx.cols).expect("separators are reordered in place");
}
