use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use thiserror::Error;

use super::geometry::{bipartite_coordinates, bipartite_layout};
use super::matching::strengthen_diagonal;
use super::separator::{split_once, Part};
use super::twobit::refine_cut_twobit;
use super::{CutStrategy, Form, OrderError, OrderOptions};
use crate::hypergraph::{Hypergraph, Representation};
use crate::layout::Layout;
use crate::sparse::{Permutation, SparseMatrix};

const NONE: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("permutation lengths {rows}/{cols} do not match the {n}x{n} matrix")]
    LengthMismatch { rows: usize, cols: usize, n: usize },
    #[error("malformed block ranges: {0}")]
    BadRanges(&'static str),
    #[error("entry at permuted position ({row}, {col}) couples two diagonal blocks at level {level}")]
    OffDiagonal { level: usize, row: usize, col: usize },
    #[error("permuted diagonal entry {0} is structurally zero")]
    ZeroDiagonal(usize),
}

/// A node of the ordering tree. `rows` and `cols` are position ranges in
/// the permuted matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderNode {
    pub level: usize,
    pub rows: Range<usize>,
    pub cols: Range<usize>,
    pub kind: NodeKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NodeKind {
    /// Not split further.
    Leaf,
    /// Independent blocks laid out one after another; the last child may
    /// hold the empty rows and columns.
    Components(Vec<OrderNode>),
    /// A separator split. The separator is a leaf unless it was ordered
    /// recursively; `refined_levels` counts the two-bit levels applied to
    /// it.
    Split {
        first: Box<OrderNode>,
        second: Box<OrderNode>,
        separator: Box<OrderNode>,
        refined_levels: usize,
    },
}

impl OrderNode {
    pub fn leaf(level: usize, rows: Range<usize>, cols: Range<usize>) -> OrderNode {
        OrderNode {
            level,
            rows,
            cols,
            kind: NodeKind::Leaf,
        }
    }

    pub fn is_split(&self) -> bool {
        matches!(self.kind, NodeKind::Split { .. })
    }

    /// Children in positional order.
    pub fn children(&self, form: Form) -> Vec<&OrderNode> {
        match &self.kind {
            NodeKind::Leaf => Vec::new(),
            NodeKind::Components(c) => c.iter().collect(),
            NodeKind::Split {
                first,
                second,
                separator,
                ..
            } => match form {
                Form::Bbd => vec![first, second, separator],
                Form::Sbd => vec![first, separator, second],
            },
        }
    }

    /// Pre-order walk.
    pub fn walk<'a>(&'a self, form: Form, out: &mut Vec<&'a OrderNode>) {
        out.push(self);
        for c in self.children(form) {
            c.walk(form, out);
        }
    }
}

/// Recursive block structure together with the row and column
/// permutations it induces.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderingTree {
    form: Form,
    cut: CutStrategy,
    root: OrderNode,
    row_perm: Permutation,
    col_perm: Permutation,
    matched: bool,
}

impl OrderingTree {
    /// Assembles a tree, checking that the ranges nest and tile properly.
    pub fn new(
        form: Form,
        cut: CutStrategy,
        root: OrderNode,
        row_perm: Permutation,
        col_perm: Permutation,
        matched: bool,
    ) -> Result<OrderingTree, TreeError> {
        if row_perm.len() != col_perm.len() {
            return Err(TreeError::LengthMismatch {
                rows: row_perm.len(),
                cols: col_perm.len(),
                n: row_perm.len(),
            });
        }
        let n = row_perm.len();
        if root.rows != (0..n) || root.cols != (0..n) {
            return Err(TreeError::BadRanges("root must span the whole matrix"));
        }
        check_ranges(&root, form)?;
        Ok(OrderingTree {
            form,
            cut,
            root,
            row_perm,
            col_perm,
            matched,
        })
    }

    /// One leaf holding the given permutations.
    pub fn flat(row_perm: Permutation, col_perm: Permutation) -> Result<OrderingTree, TreeError> {
        let n = row_perm.len();
        OrderingTree::new(
            Form::Bbd,
            CutStrategy::None,
            OrderNode::leaf(0, 0..n, 0..n),
            row_perm,
            col_perm,
            false,
        )
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn cut_strategy(&self) -> CutStrategy {
        self.cut
    }

    pub fn root(&self) -> &OrderNode {
        &self.root
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut OrderNode, &mut Permutation, &mut Permutation) {
        (&mut self.root, &mut self.row_perm, &mut self.col_perm)
    }

    pub fn row_perm(&self) -> &Permutation {
        &self.row_perm
    }

    pub fn col_perm(&self) -> &Permutation {
        &self.col_perm
    }

    pub fn is_matched(&self) -> bool {
        self.matched
    }

    pub fn len(&self) -> usize {
        self.row_perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.row_perm.is_empty()
    }

    /// All nodes, pre-order.
    pub fn nodes(&self) -> Vec<&OrderNode> {
        let mut out = Vec::new();
        self.root.walk(self.form, &mut out);
        out
    }

    pub fn splits(&self) -> Vec<&OrderNode> {
        self.nodes().into_iter().filter(|n| n.is_split()).collect()
    }

    /// Bipartite vertices (rows `i`, columns `n + j`) covered by a node.
    pub fn vertices(&self, node: &OrderNode) -> Vec<usize> {
        let n = self.len();
        let mut v: Vec<usize> = node.rows.clone().map(|k| self.row_perm.at(k)).collect();
        v.extend(node.cols.clone().map(|k| n + self.col_perm.at(k)));
        v.sort_unstable();
        v
    }

    /// `P A Q` as a new matrix.
    pub fn permuted(&self, m: &SparseMatrix) -> SparseMatrix {
        m.permute(&self.row_perm, &self.col_perm)
    }

    /// Checks the structure against `m`: no entry couples the two diagonal
    /// blocks of any split or two different components, and with a matching
    /// the diagonal is free of structural zeros.
    pub fn verify(&self, m: &SparseMatrix) -> Result<(), TreeError> {
        let n = self.len();
        if m.nrows() != n || m.ncols() != n {
            return Err(TreeError::LengthMismatch {
                rows: m.nrows(),
                cols: m.ncols(),
                n,
            });
        }
        let b = self.permuted(m);
        for node in self.nodes() {
            let blocks: Vec<(&OrderNode, &OrderNode)> = match &node.kind {
                NodeKind::Leaf => continue,
                NodeKind::Split { first, second, .. } => vec![(first, second), (second, first)],
                NodeKind::Components(children) => {
                    for c in children {
                        for i in c.rows.clone() {
                            if let Some(e) = b.row(i).iter().find(|e| !c.cols.contains(&e.1)) {
                                return Err(TreeError::OffDiagonal {
                                    level: node.level,
                                    row: i,
                                    col: e.1,
                                });
                            }
                        }
                    }
                    continue;
                }
            };
            for (from, to) in blocks {
                for i in from.rows.clone() {
                    if let Some(e) = b.row(i).iter().find(|e| to.cols.contains(&e.1)) {
                        return Err(TreeError::OffDiagonal {
                            level: node.level,
                            row: i,
                            col: e.1,
                        });
                    }
                }
            }
        }
        if self.matched {
            if let Some(k) = (0..n).find(|&k| b.get(k, k).is_none()) {
                return Err(TreeError::ZeroDiagonal(k));
            }
        }
        Ok(())
    }
}

fn check_ranges(node: &OrderNode, form: Form) -> Result<(), TreeError> {
    let children = node.children(form);
    if children.is_empty() {
        return Ok(());
    }
    let mut r = node.rows.start;
    let mut c = node.cols.start;
    for child in &children {
        if child.rows.start != r || child.cols.start != c {
            return Err(TreeError::BadRanges("children must tile the parent"));
        }
        if child.rows.end < child.rows.start || child.cols.end < child.cols.start {
            return Err(TreeError::BadRanges("reversed range"));
        }
        r = child.rows.end;
        c = child.cols.end;
        check_ranges(child, form)?;
    }
    if r != node.rows.end || c != node.cols.end {
        return Err(TreeError::BadRanges("children must tile the parent"));
    }
    Ok(())
}

fn mix(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

struct Builder<'a> {
    n: usize,
    row_adj: Vec<Vec<usize>>,
    x: Option<Layout>,
    mate: Option<Vec<usize>>,
    opts: &'a OrderOptions,
    rows_out: Vec<usize>,
    cols_out: Vec<usize>,
    local: Vec<usize>,
}

impl Builder<'_> {
    fn leaf(&mut self, verts: &[usize], level: usize) -> OrderNode {
        let n = self.n;
        let (r0, c0) = (self.rows_out.len(), self.cols_out.len());
        let rows = verts.iter().copied().filter(|&v| v < n);
        match &self.mate {
            Some(mate) => {
                for r in rows {
                    self.rows_out.push(r);
                    self.cols_out.push(mate[r] - n);
                }
            }
            None => {
                self.rows_out.extend(rows);
                self.cols_out.extend(verts.iter().filter(|&&v| v >= n).map(|&v| v - n));
            }
        }
        OrderNode::leaf(level, r0..self.rows_out.len(), c0..self.cols_out.len())
    }

    fn local_graph(&mut self, verts: &[usize]) -> (Hypergraph, Layout, Option<Vec<usize>>) {
        let n = self.n;
        for (i, &v) in verts.iter().enumerate() {
            self.local[v] = i;
        }
        let mut edges = Vec::new();
        for &v in verts.iter().take_while(|&&v| v < n) {
            for &c in &self.row_adj[v] {
                let w = self.local[n + c];
                if w != NONE {
                    edges.push(vec![self.local[v], w]);
                }
            }
        }
        let mate = self
            .mate
            .as_ref()
            .map(|mate| verts.iter().map(|&v| self.local[mate[v]]).collect());
        for &v in verts {
            self.local[v] = NONE;
        }
        let g = Hypergraph::unweighted(verts.len(), edges).expect("local edges are in range");
        let x = self.x.as_ref().expect("layout present").select(verts);
        (g, x, mate)
    }

    fn scope(&mut self, verts: &[usize], level: usize, seed: u64) -> OrderNode {
        let rows = verts.iter().take_while(|&&v| v < self.n).count();
        if rows <= self.opts.min_block || level >= self.opts.max_depth || self.x.is_none() {
            return self.leaf(verts, level);
        }
        let (g, x, mate) = self.local_graph(verts);
        let split = match split_once(&g, &x, mate.as_deref(), self.opts.kmeans_iters, seed) {
            Ok(s) => s,
            Err(_) => return self.leaf(verts, level),
        };
        debug_assert_eq!(split.verify(&g, mate.as_deref()), Ok(()));
        let pick = |p: Part| -> Vec<usize> { split.vertices(p).into_iter().map(|i| verts[i]).collect() };
        let (v1, v2, v3) = (pick(Part::First), pick(Part::Second), pick(Part::Separator));
        if v1.is_empty() || v2.is_empty() {
            return self.leaf(verts, level);
        }
        let (r0, c0) = (self.rows_out.len(), self.cols_out.len());
        let (s1, s2, s3) = (mix(seed, 1), mix(seed, 2), mix(seed, 3));
        let (first, second, separator) = match self.opts.form {
            Form::Bbd => {
                let a = self.scope(&v1, level + 1, s1);
                let b = self.scope(&v2, level + 1, s2);
                let s = self.separator(&v3, level + 1, s3);
                (a, b, s)
            }
            Form::Sbd => {
                let a = self.scope(&v1, level + 1, s1);
                let s = self.separator(&v3, level + 1, s3);
                let b = self.scope(&v2, level + 1, s2);
                (a, b, s)
            }
        };
        OrderNode {
            level,
            rows: r0..self.rows_out.len(),
            cols: c0..self.cols_out.len(),
            kind: NodeKind::Split {
                first: Box::new(first),
                second: Box::new(second),
                separator: Box::new(separator),
                refined_levels: 0,
            },
        }
    }

    fn separator(&mut self, verts: &[usize], level: usize, seed: u64) -> OrderNode {
        match self.opts.cut {
            CutStrategy::Schur => self.scope(verts, level, seed),
            _ => self.leaf(verts, level),
        }
    }
}

/// Recursive BBD or SBD ordering of a square matrix.
///
/// The chosen representation is laid out once per connected component
/// (or taken from `geometry`, given in that representation's vertices) and
/// mapped onto the bipartite graph of rows and columns. Components of the
/// bipartite graph are ordered one after another by their smallest vertex,
/// followed by the empty rows and columns. Inside a component, blocks are
/// split with [`split_once`](super::split_once) until they have at most
/// `min_block` rows, the depth limit is hit or a split leaves one side
/// empty. Rows inside a leaf keep their original relative order; with a
/// matching each row's column follows it, otherwise columns are in
/// original order too.
pub fn recursive_order(
    m: &SparseMatrix,
    opts: &OrderOptions,
    geometry: Option<&Layout>,
) -> Result<OrderingTree, OrderError> {
    if !m.is_square() {
        return Err(OrderError::NotSquare {
            nrows: m.nrows(),
            ncols: m.ncols(),
        });
    }
    if opts.representation == Representation::Symmetric && !m.is_structurally_symmetric() {
        return Err(crate::hypergraph::HypergraphError::NotStructurallySymmetric.into());
    }
    let n = m.nrows();
    let mate = if opts.matching {
        Some(strengthen_diagonal(m)?.mate_map())
    } else {
        None
    };
    let x = match geometry {
        Some(g) => Some(bipartite_coordinates(m, opts.representation, g)?),
        None if n > opts.min_block => Some(bipartite_layout(m, opts.representation, opts.edge_cost, &opts.layout)?),
        None => None,
    };

    let bip = Hypergraph::from_matrix(m, Representation::Bipartite)?;
    let comps = bip.connected_components().components();
    let mut b = Builder {
        n,
        row_adj: m.row_adjacency(),
        x,
        mate,
        opts,
        rows_out: Vec::with_capacity(n),
        cols_out: Vec::with_capacity(n),
        local: vec![NONE; 2 * n],
    };
    let seed = opts.layout.seed;
    let mut children = Vec::new();
    let mut isolated = Vec::new();
    for (i, comp) in comps.iter().enumerate() {
        if comp.len() == 1 {
            isolated.push(comp[0]);
        } else {
            children.push(b.scope(comp, 0, mix(seed, i as u64)));
        }
    }
    if !isolated.is_empty() {
        isolated.sort_unstable();
        children.push(b.leaf(&isolated, 0));
    }
    let root = if children.len() == 1 {
        children.pop().expect("one child")
    } else {
        OrderNode {
            level: 0,
            rows: 0..n,
            cols: 0..n,
            kind: NodeKind::Components(children),
        }
    };
    let row_perm = Permutation::new(b.rows_out).expect("every row placed once");
    let col_perm = Permutation::new(b.cols_out).expect("every column placed once");
    let mut tree = OrderingTree::new(opts.form, opts.cut, root, row_perm, col_perm, opts.matching)
        .expect("builder produces tiled ranges");
    if let CutStrategy::TwoBit(levels) = opts.cut {
        refine_cut_twobit(&mut tree, m, levels);
    }
    Ok(tree)
}
