use alloc::vec;
use alloc::vec::Vec;

use super::{Factors, LuError, PivotEvent, PivotKind, PivotLog};
use crate::sparse::{Permutation, SparseMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PivotMode {
    /// Largest remaining entry in magnitude, first in row-major order on
    /// ties.
    Complete,
    /// Eliminate on the diagonal as given.
    None,
}

/// Dense working copy with a structural mask and the accumulated row and
/// column permutations.
pub(super) struct Work {
    pub n: usize,
    pub a: Vec<f64>,
    pub s: Vec<bool>,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub log: PivotLog,
}

impl Work {
    pub fn new(m: &SparseMatrix) -> Result<Work, LuError> {
        if !m.is_square() {
            return Err(LuError::NotSquare {
                nrows: m.nrows(),
                ncols: m.ncols(),
            });
        }
        let n = m.nrows();
        let mut a = vec![0.0; n * n];
        let mut s = vec![false; n * n];
        for &(i, j, v) in m.entries() {
            a[i * n + j] = v;
            s[i * n + j] = true;
        }
        Ok(Work {
            n,
            a,
            s,
            rows: (0..n).collect(),
            cols: (0..n).collect(),
            log: PivotLog::default(),
        })
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    pub fn swap_rows(&mut self, k: usize, i: usize) {
        if k == i {
            return;
        }
        let n = self.n;
        for j in 0..n {
            self.a.swap(k * n + j, i * n + j);
            self.s.swap(k * n + j, i * n + j);
        }
        self.rows.swap(k, i);
        self.log.events.push(PivotEvent {
            step: k,
            kind: PivotKind::RowSwap,
            with: i,
        });
    }

    pub fn swap_cols(&mut self, k: usize, j: usize) {
        if k == j {
            return;
        }
        let n = self.n;
        for i in 0..n {
            self.a.swap(i * n + k, i * n + j);
            self.s.swap(i * n + k, i * n + j);
        }
        self.cols.swap(k, j);
        self.log.events.push(PivotEvent {
            step: k,
            kind: PivotKind::ColumnSwap,
            with: j,
        });
    }

    /// One elimination step on pivot `(k, k)`; a zero pivot is logged and
    /// skipped.
    pub fn eliminate(&mut self, k: usize) {
        let n = self.n;
        let pivot = self.a[k * n + k];
        self.log.pivots.push(pivot);
        if pivot == 0.0 {
            self.log.events.push(PivotEvent {
                step: k,
                kind: PivotKind::ZeroPivot,
                with: k,
            });
            return;
        }
        let upper: Vec<usize> = ((k + 1)..n).filter(|&j| self.s[k * n + j]).collect();
        for i in (k + 1)..n {
            if !self.s[i * n + k] {
                continue;
            }
            let l = self.a[i * n + k] / pivot;
            self.a[i * n + k] = l;
            for &j in &upper {
                self.a[i * n + j] -= l * self.a[k * n + j];
                self.s[i * n + j] = true;
            }
        }
    }

    pub fn into_factors(self, eliminated: usize) -> Factors {
        let n = self.n;
        let mut lt = Vec::new();
        let mut ut = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let idx = i * n + j;
                if i == j {
                    lt.push((i, i, 1.0));
                }
                let in_l = j < i && j < eliminated;
                let in_u = if i < eliminated { j >= i } else { j >= eliminated };
                if self.s[idx] {
                    if in_l {
                        lt.push((i, j, self.a[idx]));
                    } else if in_u {
                        ut.push((i, j, self.a[idx]));
                    }
                }
            }
        }
        Factors {
            row_perm: Permutation::new(self.rows).expect("row swaps keep a bijection"),
            col_perm: Permutation::new(self.cols).expect("column swaps keep a bijection"),
            l: SparseMatrix::from_triplets(n, n, lt).expect("in range"),
            u: SparseMatrix::from_triplets(n, n, ut).expect("in range"),
            log: self.log,
            eliminated,
        }
    }
}

/// LU factorisation with complete pivoting or none at all.
///
/// `bound = Some(m')` stops after `m'` elimination steps and only pivots
/// inside the leading `m' x m'` block; the rest stays in `U` as the
/// trailing block. Zero pivots are logged and their step skipped.
pub fn lu_complete_pivot(a: &SparseMatrix, mode: PivotMode, bound: Option<usize>) -> Result<Factors, LuError> {
    let mut w = Work::new(a)?;
    let n = w.n;
    let steps = bound.unwrap_or(n).min(n);
    for k in 0..steps {
        if mode == PivotMode::Complete {
            let mut best = (k, k, 0.0f64);
            for i in k..steps {
                for j in k..steps {
                    let v = w.at(i, j).abs();
                    if v > best.2 {
                        best = (i, j, v);
                    }
                }
            }
            w.swap_rows(k, best.0);
            w.swap_cols(k, best.1);
        }
        w.eliminate(k);
    }
    Ok(w.into_factors(steps))
}
