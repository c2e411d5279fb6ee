use alloc::vec;
use alloc::vec::Vec;

use super::{Factors, LuError};
use crate::ordering::{Form, NodeKind, OrderNode, OrderingTree};
use crate::sparse::SparseMatrix;

/// `(nz(L) + nz(U) - n) / nz(A)`, counting the unit diagonal of `L`.
pub fn fill_in(a: &SparseMatrix, f: &Factors) -> f64 {
    ((f.nnz_l() + f.nnz_u()) as f64 - f.n() as f64) / a.nnz() as f64
}

/// `max |A[P][Q] - L U| / max |A|`.
pub fn reconstruction_error(a: &SparseMatrix, f: &Factors) -> f64 {
    let n = f.n();
    let pa = a.permute(&f.row_perm, &f.col_perm).to_dense();
    let u = f.u.to_dense();
    let mut worst = 0.0f64;
    for i in 0..n {
        let mut row = vec![0.0; n];
        for &(_, k, l) in f.l.row(i) {
            for j in 0..n {
                row[j] += l * u[k * n + j];
            }
        }
        for j in 0..n {
            worst = worst.max((pa[i * n + j] - row[j]).abs());
        }
    }
    let scale = a.max_abs();
    if scale > 0.0 {
        worst / scale
    } else {
        worst
    }
}

/// Solves `A x = b` with the factors and returns `x` with the backward
/// error `|A x - b|_inf / (|A|_inf |x|_inf + |b|_inf)`.
pub fn solve_and_backward_error(a: &SparseMatrix, f: &Factors, b: &[f64]) -> Result<(Vec<f64>, f64), LuError> {
    let n = f.n();
    if b.len() != n {
        return Err(LuError::RhsLength {
            got: b.len(),
            expected: n,
        });
    }
    if let Some(k) = (0..n).find(|&k| f.u.get(k, k).is_none_or(|v| v == 0.0)) {
        return Err(LuError::ZeroDiagonal(k));
    }
    let mut y: Vec<f64> = (0..n).map(|k| b[f.row_perm.at(k)]).collect();
    for i in 0..n {
        let mut s = y[i];
        for &(_, j, v) in f.l.row(i) {
            if j < i {
                s -= v * y[j];
            }
        }
        y[i] = s;
    }
    for i in (0..n).rev() {
        let mut s = y[i];
        let mut diag = 1.0;
        for &(_, j, v) in f.u.row(i) {
            if j > i {
                s -= v * y[j];
            } else if j == i {
                diag = v;
            }
        }
        y[i] = s / diag;
    }
    let mut x = vec![0.0; n];
    for k in 0..n {
        x[f.col_perm.at(k)] = y[k];
    }
    let r = a.mul_vec(&x);
    let resid = r.iter().zip(b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
    let norm = |v: &[f64]| v.iter().map(|t| t.abs()).fold(0.0, f64::max);
    let denom = a.norm_inf() * norm(&x) + norm(b);
    let err = if denom > 0.0 { resid / denom } else { resid };
    Ok((x, err))
}

/// Rank by Gaussian elimination with complete pivoting; pivots below
/// `1e-10` times the first (largest) pivot count as zero. `dense` is row
/// major with `ncols` columns.
pub fn numeric_rank(dense: &[f64], nrows: usize, ncols: usize) -> usize {
    assert_eq!(dense.len(), nrows * ncols);
    let mut a = dense.to_vec();
    let mut rank = 0;
    let mut first = 0.0;
    for k in 0..nrows.min(ncols) {
        let mut best = (k, k, 0.0f64);
        for i in k..nrows {
            for j in k..ncols {
                let v = a[i * ncols + j].abs();
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        if k == 0 {
            first = best.2;
        }
        if best.2 == 0.0 || best.2 <= 1e-10 * first {
            break;
        }
        for j in 0..ncols {
            a.swap(k * ncols + j, best.0 * ncols + j);
        }
        for i in 0..nrows {
            a.swap(i * ncols + k, i * ncols + best.1);
        }
        let p = a[k * ncols + k];
        for i in (k + 1)..nrows {
            let l = a[i * ncols + k] / p;
            for j in k..ncols {
                a[i * ncols + j] -= l * a[k * ncols + j];
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant by elimination with partial pivoting.
pub fn determinant(dense: &[f64], n: usize) -> f64 {
    assert_eq!(dense.len(), n * n);
    let mut a = dense.to_vec();
    let mut det = 1.0;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&x, &y| a[x * n + k].abs().total_cmp(&a[y * n + k].abs()))
            .expect("non-empty range");
        if a[p * n + k] == 0.0 {
            return 0.0;
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            det = -det;
        }
        let pivot = a[k * n + k];
        det *= pivot;
        for i in (k + 1)..n {
            let l = a[i * n + k] / pivot;
            for j in k..n {
                a[i * n + j] -= l * a[k * n + j];
            }
        }
    }
    det
}

/// Block sizes of a `2 x 2` block diagonal matrix with a border of width
/// `d = a - (b + c)`, and the ranks of the two diagonal blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockRanks {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub rank_b: usize,
    pub rank_c: usize,
}

impl BlockRanks {
    pub fn new(a: usize, b: usize, c: usize, rank_b: usize, rank_c: usize) -> Result<Self, LuError> {
        if b + c > a || rank_b > b || rank_c > c {
            return Err(LuError::InconsistentBlocks { a, b, c });
        }
        Ok(BlockRanks {
            a,
            b,
            c,
            d: a - b - c,
            rank_b,
            rank_c,
        })
    }

    /// Ranks of the leading `b x b` block and the following `c x c` block
    /// of `m`.
    pub fn from_matrix(m: &SparseMatrix, b: usize, c: usize) -> Result<Self, LuError> {
        if !m.is_square() {
            return Err(LuError::NotSquare {
                nrows: m.nrows(),
                ncols: m.ncols(),
            });
        }
        let a = m.nrows();
        if b + c > a {
            return Err(LuError::InconsistentBlocks { a, b, c });
        }
        let dense = m.to_dense();
        let block = |r: core::ops::Range<usize>| -> Vec<f64> {
            r.clone()
                .flat_map(|i| r.clone().map(move |j| (i, j)))
                .map(|(i, j)| dense[i * a + j])
                .collect()
        };
        let rank_b = numeric_rank(&block(0..b), b, b);
        let rank_c = numeric_rank(&block(b..b + c), c, c);
        Self::new(a, b, c, rank_b, rank_c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankVerdict {
    /// `b + c - d <= rank(B) + rank(C) <= b + c`; `tight` when the lower
    /// bound is attained.
    Holds {
        tight: bool,
    },
    Violated,
    /// `det(A) = 0`: the bound says nothing.
    Vacuous,
}

pub fn rank_bound_check(blocks: &BlockRanks, det_nonzero: bool) -> RankVerdict {
    if !det_nonzero {
        return RankVerdict::Vacuous;
    }
    let sum = blocks.rank_b + blocks.rank_c;
    let upper = blocks.b + blocks.c;
    let lower = upper.saturating_sub(blocks.d);
    if sum < lower || sum > upper {
        RankVerdict::Violated
    } else {
        RankVerdict::Holds {
            tight: upper >= blocks.d && sum == upper - blocks.d,
        }
    }
}

/// Cut sizes of one split: rows and columns of its separator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitCut {
    pub level: usize,
    pub rows: usize,
    pub cols: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CutMetrics {
    pub per_split: Vec<SplitCut>,
    pub max_rows: usize,
    pub max_cols: usize,
    /// Largest `rows + cols` over all splits.
    pub max_cut: usize,
}

pub fn cut_metrics(tree: &OrderingTree) -> CutMetrics {
    let mut m = CutMetrics::default();
    for node in tree.splits() {
        if let NodeKind::Split { separator, .. } = &node.kind {
            let cut = SplitCut {
                level: node.level,
                rows: separator.rows.len(),
                cols: separator.cols.len(),
            };
            m.max_rows = m.max_rows.max(cut.rows);
            m.max_cols = m.max_cols.max(cut.cols);
            m.max_cut = m.max_cut.max(cut.rows + cut.cols);
            m.per_split.push(cut);
        }
    }
    m
}

/// Positions where the tree allows nonzeros in `P A Q` and its factors.
///
/// Row and column positions are traced down the tree; where their paths
/// first part, the entry is allowed only if one of them goes into a
/// separator. Entries in the same leaf are always allowed. A separator is
/// a Schur complement by the time it is eliminated, so any inner structure
/// it has (from recursive Schur ordering) may fill in. The same holds for
/// the second block in SBD form, which follows a nonempty separator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionMask {
    row_paths: Vec<Vec<Step>>,
    col_paths: Vec<Vec<Step>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Step {
    split: bool,
    slot: usize,
    /// Everything below this step may fill.
    dense: bool,
}

const SECOND_SLOT: usize = 1;
const SEPARATOR_SLOT: usize = 2;

fn trace(root: &OrderNode, form: Form, p: usize, by_cols: bool) -> Vec<Step> {
    let range = |n: &OrderNode| if by_cols { n.cols.clone() } else { n.rows.clone() };
    let mut path = Vec::new();
    let mut cur = root;
    loop {
        match &cur.kind {
            NodeKind::Leaf => return path,
            NodeKind::Components(children) => match children.iter().position(|c| range(c).contains(&p)) {
                Some(i) => {
                    path.push(Step {
                        split: false,
                        slot: i,
                        dense: false,
                    });
                    cur = &children[i];
                }
                None => return path,
            },
            NodeKind::Split {
                first,
                second,
                separator,
                ..
            } => {
                let slots = [first, second, separator];
                match slots.iter().position(|c| range(c).contains(&p)) {
                    Some(i) => {
                        let sep_nonempty = !separator.rows.is_empty() || !separator.cols.is_empty();
                        path.push(Step {
                            split: true,
                            slot: i,
                            dense: i == SEPARATOR_SLOT || (form == Form::Sbd && i == SECOND_SLOT && sep_nonempty),
                        });
                        cur = slots[i];
                    }
                    None => return path,
                }
            }
        }
    }
}

pub fn permitted_region(tree: &OrderingTree) -> RegionMask {
    let n = tree.len();
    RegionMask {
        row_paths: (0..n).map(|p| trace(tree.root(), tree.form(), p, false)).collect(),
        col_paths: (0..n).map(|p| trace(tree.root(), tree.form(), p, true)).collect(),
    }
}

impl RegionMask {
    pub fn allows(&self, i: usize, j: usize) -> bool {
        for (r, c) in self.row_paths[i].iter().zip(&self.col_paths[j]) {
            if r.slot != c.slot {
                return r.split && (r.slot == SEPARATOR_SLOT || c.slot == SEPARATOR_SLOT);
            }
            if r.dense {
                return true;
            }
        }
        true
    }

    /// First entry of `m` outside the region.
    pub fn first_violation(&self, m: &SparseMatrix) -> Option<(usize, usize)> {
        m.entries().iter().find(|e| !self.allows(e.0, e.1)).map(|e| (e.0, e.1))
    }
}
