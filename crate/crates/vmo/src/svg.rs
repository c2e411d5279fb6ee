//! SVG spy plots and layout scatter plots.

use std::fmt::Write as _;

use nalgebra::{DMatrix, SymmetricEigen};
use vmo_core::ordering::{NodeKind, OrderNode};
use vmo_core::{Layout, OrderingTree, SparseMatrix};

const CANVAS: f64 = 600.0;

fn header(s: &mut String, w: f64, h: f64, view: &str) {
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="{view}">"#
    );
}

fn outline(s: &mut String, node: &OrderNode, tree: &OrderingTree) {
    if let NodeKind::Split { separator, .. } = &node.kind {
        let (r, c) = (&separator.rows, &separator.cols);
        let _ = writeln!(
            s,
            r#"<rect class="sep" x="{}" y="{}" width="{}" height="{}"/>"#,
            node.cols.start,
            r.start,
            node.cols.len(),
            r.len()
        );
        let _ = writeln!(
            s,
            r#"<rect class="sep" x="{}" y="{}" width="{}" height="{}"/>"#,
            c.start,
            node.rows.start,
            c.len(),
            node.rows.len()
        );
    }
    for child in node.children(tree.form()) {
        let _ = writeln!(
            s,
            r#"<rect class="block" x="{}" y="{}" width="{}" height="{}"/>"#,
            child.cols.start,
            child.rows.start,
            child.cols.len(),
            child.rows.len()
        );
        outline(s, child, tree);
    }
}

/// One unit square per stored entry. With a tree, the matrix is drawn in
/// the tree's ordering with separator strips shaded and every block
/// outlined.
pub fn spy_plot(m: &SparseMatrix, tree: Option<&OrderingTree>) -> String {
    let shown = match tree {
        Some(t) => t.permuted(m),
        None => m.clone(),
    };
    let (rows, cols) = (shown.nrows().max(1), shown.ncols().max(1));
    let scale = CANVAS / rows.max(cols) as f64;
    let mut s = String::new();
    header(
        &mut s,
        cols as f64 * scale,
        rows as f64 * scale,
        &format!("0 0 {cols} {rows}"),
    );
    s.push_str("<style>.nz{fill:#1f3b73}.sep{fill:#e8b04a;fill-opacity:0.25}.block{fill:none;stroke:#b03030;stroke-width:1;vector-effect:non-scaling-stroke}</style>\n");
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{cols}" height="{rows}" fill="white"/>"#);
    if let Some(t) = tree {
        outline(&mut s, t.root(), t);
    }
    for &(i, j, _) in shown.entries() {
        let _ = writeln!(s, r#"<rect class="nz" x="{j}" y="{i}" width="1" height="1"/>"#);
    }
    s.push_str("</svg>\n");
    s
}

/// Coordinates on the first two principal axes. Each axis is oriented so
/// its largest component is positive; a missing second axis gives zeros.
pub fn pca_2d(x: &Layout) -> Vec<[f64; 2]> {
    let (k, d) = (x.len(), x.dim());
    if k == 0 || d == 0 {
        return vec![[0.0; 2]; k];
    }
    let c = x.centroid();
    let centred = DMatrix::from_fn(k, d, |i, j| x.point(i)[j] - c[j]);
    let cov = centred.transpose() * &centred;
    let eig = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let axis = |t: usize| -> Option<Vec<f64>> {
        let col = eig.eigenvectors.column(*order.get(t)?);
        let big = col
            .iter()
            .copied()
            .max_by(|a, b| a.abs().total_cmp(&b.abs()))
            .unwrap_or(1.0);
        let sign = if big < 0.0 { -1.0 } else { 1.0 };
        Some(col.iter().map(|v| sign * v).collect())
    };
    let (a0, a1) = (axis(0), axis(1));
    let proj = |row: usize, a: &Option<Vec<f64>>| match a {
        Some(a) => (0..d).map(|j| centred[(row, j)] * a[j]).sum(),
        None => 0.0,
    };
    (0..k).map(|i| [proj(i, &a0), proj(i, &a1)]).collect()
}

/// Scatter plot of a layout projected with [`pca_2d`], scaled uniformly so
/// distances in the picture are proportional to projected distances. The
/// first `rows` points are drawn as row vertices, the rest as columns.
pub fn layout_scatter(x: &Layout, rows: usize) -> String {
    let pts = pca_2d(x);
    let margin = 20.0;
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in &pts {
        for a in 0..2 {
            lo[a] = lo[a].min(p[a]);
            hi[a] = hi[a].max(p[a]);
        }
    }
    let extent = (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let scale = if extent > 0.0 {
        (CANVAS - 2.0 * margin) / extent
    } else {
        1.0
    };
    let mut s = String::new();
    header(&mut s, CANVAS, CANVAS, &format!("0 0 {CANVAS} {CANVAS}"));
    s.push_str("<style>.row{fill:#1f3b73}.col{fill:#b03030}</style>\n");
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{CANVAS}" height="{CANVAS}" fill="white"/>"#
    );
    for (i, p) in pts.iter().enumerate() {
        let cx = margin + (p[0] - lo[0]) * scale;
        let cy = margin + (hi[1] - p[1]) * scale;
        let class = if i < rows { "row" } else { "col" };
        let _ = writeln!(s, r#"<circle class="{class}" cx="{cx:.3}" cy="{cy:.3}" r="3"/>"#);
    }
    s.push_str("</svg>\n");
    s
}
