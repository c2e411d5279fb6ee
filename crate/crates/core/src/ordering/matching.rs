use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::sparse::SparseMatrix;

const NIL: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("matching needs a square matrix, got {nrows}x{ncols}")]
    NotSquare { nrows: usize, ncols: usize },
    #[error("structurally singular: maximum matching has size {size} of {n}")]
    Deficient {
        size: usize,
        n: usize,
        unmatched_rows: Vec<usize>,
        unmatched_cols: Vec<usize>,
    },
}

/// A perfect row-column matching of a square pattern.
///
/// On the bipartite vertex numbering (rows `0..n`, columns `n..2n`) it is
/// the involution [`Matching::mate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    row_to_col: Vec<usize>,
    col_to_row: Vec<usize>,
}

impl Matching {
    /// From the column matched to each row; must be a bijection.
    pub fn from_row_to_col(row_to_col: Vec<usize>) -> Option<Matching> {
        let n = row_to_col.len();
        let mut col_to_row = vec![NIL; n];
        for (r, &c) in row_to_col.iter().enumerate() {
            if c >= n || col_to_row[c] != NIL {
                return None;
            }
            col_to_row[c] = r;
        }
        Some(Matching { row_to_col, col_to_row })
    }

    pub fn identity(n: usize) -> Matching {
        Matching {
            row_to_col: (0..n).collect(),
            col_to_row: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.row_to_col.len()
    }

    pub fn is_empty(&self) -> bool {
        self.row_to_col.is_empty()
    }

    pub fn col_of(&self, row: usize) -> usize {
        self.row_to_col[row]
    }

    pub fn row_of(&self, col: usize) -> usize {
        self.col_to_row[col]
    }

    pub fn row_to_col(&self) -> &[usize] {
        &self.row_to_col
    }

    /// Partner of bipartite vertex `v`.
    pub fn mate(&self, v: usize) -> usize {
        let n = self.len();
        if v < n {
            n + self.row_to_col[v]
        } else {
            self.col_to_row[v - n]
        }
    }

    /// The involution on all `2n` bipartite vertices.
    pub fn mate_map(&self) -> Vec<usize> {
        (0..2 * self.len()).map(|v| self.mate(v)).collect()
    }

    /// Every matched pair is a stored entry of `m`.
    pub fn is_supported_by(&self, m: &SparseMatrix) -> bool {
        m.nrows() == self.len()
            && m.ncols() == self.len()
            && self.row_to_col.iter().enumerate().all(|(r, &c)| m.get(r, c).is_some())
    }
}

/// Grows `row_match`/`col_match` to a maximum matching by shortest
/// augmenting paths.
fn augment(adj: &[Vec<usize>], row_match: &mut [usize], col_match: &mut [usize]) {
    let nrows = adj.len();
    let mut dist = vec![usize::MAX; nrows];
    let mut it = vec![0usize; nrows];
    let mut stack: Vec<usize> = Vec::new();
    loop {
        let mut queue = VecDeque::new();
        for r in 0..nrows {
            if row_match[r] == NIL {
                dist[r] = 0;
                queue.push_back(r);
            } else {
                dist[r] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(r) = queue.pop_front() {
            for &c in &adj[r] {
                match col_match[c] {
                    NIL => found = true,
                    r2 if dist[r2] == usize::MAX => {
                        dist[r2] = dist[r] + 1;
                        queue.push_back(r2);
                    }
                    _ => {}
                }
            }
        }
        if !found {
            return;
        }

        it.iter_mut().for_each(|i| *i = 0);
        for s in 0..nrows {
            if row_match[s] != NIL {
                continue;
            }
            stack.clear();
            stack.push(s);
            while let Some(&r) = stack.last() {
                if it[r] == adj[r].len() {
                    dist[r] = usize::MAX;
                    stack.pop();
                    continue;
                }
                let c = adj[r][it[r]];
                it[r] += 1;
                let r2 = col_match[c];
                if r2 == NIL {
                    // Flip the path: each row on the stack takes the column
                    // it last tried.
                    for &row in stack.iter() {
                        let col = adj[row][it[row] - 1];
                        row_match[row] = col;
                        col_match[col] = row;
                    }
                    for &row in stack.iter() {
                        dist[row] = usize::MAX;
                    }
                    break;
                } else if dist[r2] != usize::MAX && dist[r2] == dist[r] + 1 {
                    stack.push(r2);
                }
            }
        }
    }
}

fn finish(row_match: Vec<usize>, col_match: Vec<usize>) -> Result<Matching, MatchingError> {
    let n = row_match.len();
    let unmatched_rows: Vec<usize> = (0..n).filter(|&r| row_match[r] == NIL).collect();
    if unmatched_rows.is_empty() {
        return Ok(Matching {
            row_to_col: row_match,
            col_to_row: col_match,
        });
    }
    let unmatched_cols = (0..n).filter(|&c| col_match[c] == NIL).collect();
    Err(MatchingError::Deficient {
        size: n - unmatched_rows.len(),
        n,
        unmatched_rows,
        unmatched_cols,
    })
}

/// Maximum matching of the bipartite graph given by per-row column lists;
/// succeeds only when it is perfect.
pub fn hopcroft_karp(adj: &[Vec<usize>], ncols: usize) -> Result<Matching, MatchingError> {
    if adj.len() != ncols {
        return Err(MatchingError::NotSquare {
            nrows: adj.len(),
            ncols,
        });
    }
    let mut row_match = vec![NIL; adj.len()];
    let mut col_match = vec![NIL; ncols];
    augment(adj, &mut row_match, &mut col_match);
    finish(row_match, col_match)
}

/// Greedy matching on entries by decreasing `|a_ij|` (ties in row-major
/// order), completed to a perfect matching by augmenting paths.
pub fn strengthen_diagonal(m: &SparseMatrix) -> Result<Matching, MatchingError> {
    if !m.is_square() {
        return Err(MatchingError::NotSquare {
            nrows: m.nrows(),
            ncols: m.ncols(),
        });
    }
    let n = m.nrows();
    let mut order: Vec<&(usize, usize, f64)> = m.entries().iter().collect();
    order.sort_by(|a, b| b.2.abs().total_cmp(&a.2.abs()));
    let mut row_match = vec![NIL; n];
    let mut col_match = vec![NIL; n];
    for &&(r, c, _) in &order {
        if row_match[r] == NIL && col_match[c] == NIL {
            row_match[r] = c;
            col_match[c] = r;
        }
    }
    augment(&m.row_adjacency(), &mut row_match, &mut col_match);
    finish(row_match, col_match)
}
