//! Coordinate-format sparse matrices and permutations.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SparseError {
    #[error("entry ({row}, {col}) lies outside a {nrows}x{ncols} matrix")]
    OutOfRange {
        row: usize,
        col: usize,
        nrows: usize,
        ncols: usize,
    },
    #[error("dense buffer has {got} values, expected {expected}")]
    DenseShape { got: usize, expected: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermutationError {
    #[error("index {index} at position {position} is out of range for length {len}")]
    OutOfRange { position: usize, index: usize, len: usize },
    #[error("index {index} appears more than once")]
    Repeated { index: usize },
}

/// A sparse matrix stored as sorted, duplicate-free `(row, col, value)`
/// triplets with a row-pointer index.
///
/// Explicitly stored zeros are kept: they count as structural nonzeros.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    entries: Vec<(usize, usize, f64)>,
    row_ptr: Vec<usize>,
}

impl SparseMatrix {
    /// Builds a matrix from triplets in any order. Duplicate positions are
    /// summed.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        mut triplets: Vec<(usize, usize, f64)>,
    ) -> Result<Self, SparseError> {
        for &(row, col, _) in &triplets {
            if row >= nrows || col >= ncols {
                return Err(SparseError::OutOfRange { row, col, nrows, ncols });
            }
        }
        triplets.sort_by_key(|t| (t.0, t.1));
        let mut entries: Vec<(usize, usize, f64)> = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            match entries.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => entries.push((r, c, v)),
            }
        }
        let row_ptr = build_row_ptr(nrows, &entries);
        Ok(SparseMatrix {
            nrows,
            ncols,
            entries,
            row_ptr,
        })
    }

    /// Keeps every nonzero of a row-major dense buffer.
    pub fn from_dense(nrows: usize, ncols: usize, values: &[f64]) -> Result<Self, SparseError> {
        if values.len() != nrows * ncols {
            return Err(SparseError::DenseShape {
                got: values.len(),
                expected: nrows * ncols,
            });
        }
        let triplets = values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(k, &v)| (k / ncols, k % ncols, v))
            .collect();
        Self::from_triplets(nrows, ncols, triplets)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, n, (0..n).map(|i| (i, i, 1.0)).collect()).expect("diagonal entries are in range")
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    /// Number of stored entries, `nz(A)`.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[(usize, usize, f64)] {
        &self.entries[self.row_ptr[i]..self.row_ptr[i + 1]]
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    /// Stored value at `(i, j)`, `None` for a structural zero.
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        let row = self.row(i);
        row.binary_search_by(|e| e.1.cmp(&j)).ok().map(|k| row[k].2)
    }

    pub fn transpose(&self) -> Self {
        let triplets = self.entries.iter().map(|&(r, c, v)| (c, r, v)).collect();
        Self::from_triplets(self.ncols, self.nrows, triplets).expect("transpose stays in range")
    }

    /// Column lists per row, the bipartite adjacency.
    pub fn row_adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.nrows)
            .map(|i| self.row(i).iter().map(|e| e.1).collect())
            .collect()
    }

    pub fn is_structurally_symmetric(&self) -> bool {
        self.is_square() && self.entries.iter().all(|&(r, c, _)| self.get(c, r).is_some())
    }

    /// `B[k][l] = A[rows.at(k)][cols.at(l)]`.
    pub fn permute(&self, rows: &Permutation, cols: &Permutation) -> Self {
        assert_eq!(rows.len(), self.nrows, "row permutation length");
        assert_eq!(cols.len(), self.ncols, "column permutation length");
        let rpos = rows.positions();
        let cpos = cols.positions();
        let triplets = self.entries.iter().map(|&(r, c, v)| (rpos[r], cpos[c], v)).collect();
        Self::from_triplets(self.nrows, self.ncols, triplets).expect("permutation stays in range")
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.nrows * self.ncols];
        for &(r, c, v) in &self.entries {
            out[r * self.ncols + c] = v;
        }
        out
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols);
        let mut y = vec![0.0; self.nrows];
        for &(r, c, v) in &self.entries {
            y[r] += v * x[c];
        }
        y
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, e| f64::max(m, e.2.abs()))
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.nrows)
            .map(|i| self.row(i).iter().map(|e| e.2.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

fn build_row_ptr(nrows: usize, entries: &[(usize, usize, f64)]) -> Vec<usize> {
    let mut ptr = vec![0usize; nrows + 1];
    for e in entries {
        ptr[e.0 + 1] += 1;
    }
    for i in 0..nrows {
        ptr[i + 1] += ptr[i];
    }
    ptr
}

/// A bijection on `0..n` in gather form: position `k` holds original index
/// `at(k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    order: Vec<usize>,
}

impl Permutation {
    pub fn new(order: Vec<usize>) -> Result<Self, PermutationError> {
        let len = order.len();
        let mut seen = vec![false; len];
        for (position, &index) in order.iter().enumerate() {
            if index >= len {
                return Err(PermutationError::OutOfRange { position, index, len });
            }
            if core::mem::replace(&mut seen[index], true) {
                return Err(PermutationError::Repeated { index });
            }
        }
        Ok(Permutation { order })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            order: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Original index at position `k`.
    pub fn at(&self, k: usize) -> usize {
        self.order[k]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.order
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.order
    }

    /// `positions()[i]` is the position of original index `i`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (k, &i) in self.order.iter().enumerate() {
            pos[i] = k;
        }
        pos
    }

    pub fn inverse(&self) -> Self {
        Permutation {
            order: self.positions(),
        }
    }

    /// `(self ∘ inner).at(k) = inner.at(self.at(k))`: apply `self` to an
    /// already permuted sequence.
    pub fn then_gather(&self, inner: &Permutation) -> Self {
        assert_eq!(self.len(), inner.len());
        Permutation {
            order: self.order.iter().map(|&k| inner.at(k)).collect(),
        }
    }

    /// Parity as `+1.0` or `-1.0`.
    pub fn sign(&self) -> f64 {
        let mut visited = vec![false; self.order.len()];
        let mut transpositions = 0usize;
        for start in 0..self.order.len() {
            let mut len = 0;
            let mut i = start;
            while !visited[i] {
                visited[i] = true;
                i = self.order[i];
                len += 1;
            }
            if len > 0 {
                transpositions += len - 1;
            }
        }
        if transpositions.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

/// Lexicographic total order on points, used for duplicate detection.
pub(crate) fn cmp_points(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}
