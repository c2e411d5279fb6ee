//! Text form of an ordering tree.
//!
//! ```text
//! # vmo block tree
//! form bbd
//! cut none
//! matched yes
//! n 5
//! 0 0..5 0..5 1 1 split
//!   1 0..2 0..2 0 0 leaf
//!   1 2..4 2..4 0 0 leaf
//!   1 4..5 4..5 0 0 leaf
//! ```
//!
//! Each node line is `level rows cols sep_rows sep_cols kind`, indented two
//! spaces per depth, children in positional order. `sep_rows` and
//! `sep_cols` are the separator sizes of a split and zero otherwise. The
//! kind is `leaf`, `components`, `split`, or `split/b` for a split whose
//! separator was sorted over `b` two-bit levels. `cut` is `none`, `schur` or
//! `twobit b`.

use std::fmt::Write as _;
use std::ops::Range;

use vmo_core::ordering::{NodeKind, OrderNode};
use vmo_core::{CutStrategy, Form, OrderingTree, Permutation};

use crate::matio::ParseError;

const MAGIC: &str = "# vmo block tree";

pub fn form_name(form: Form) -> &'static str {
    match form {
        Form::Bbd => "bbd",
        Form::Sbd => "sbd",
    }
}

fn write_node(s: &mut String, node: &OrderNode, form: Form, depth: usize) {
    let (sr, sc, kind) = match &node.kind {
        NodeKind::Leaf => (0, 0, "leaf".to_string()),
        NodeKind::Components(_) => (0, 0, "components".to_string()),
        NodeKind::Split {
            separator,
            refined_levels,
            ..
        } => {
            let kind = if *refined_levels > 0 {
                format!("split/{refined_levels}")
            } else {
                "split".to_string()
            };
            (separator.rows.len(), separator.cols.len(), kind)
        }
    };
    let _ = writeln!(
        s,
        "{:indent$}{} {}..{} {}..{} {} {} {}",
        "",
        node.level,
        node.rows.start,
        node.rows.end,
        node.cols.start,
        node.cols.end,
        sr,
        sc,
        kind,
        indent = 2 * depth
    );
    for c in node.children(form) {
        write_node(s, c, form, depth + 1);
    }
}

pub fn write_tree(tree: &OrderingTree) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{MAGIC}");
    let _ = writeln!(s, "form {}", form_name(tree.form()));
    match tree.cut_strategy() {
        CutStrategy::None => s.push_str("cut none\n"),
        CutStrategy::Schur => s.push_str("cut schur\n"),
        CutStrategy::TwoBit(b) => {
            let _ = writeln!(s, "cut twobit {b}");
        }
    }
    let _ = writeln!(s, "matched {}", if tree.is_matched() { "yes" } else { "no" });
    let _ = writeln!(s, "n {}", tree.len());
    write_node(&mut s, tree.root(), tree.form(), 0);
    s
}

struct Line {
    no: usize,
    depth: usize,
    level: usize,
    rows: Range<usize>,
    cols: Range<usize>,
    kind: String,
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError { line, msg: msg.into() }
}

fn range(tok: &str, no: usize) -> Result<Range<usize>, ParseError> {
    let (a, b) = tok
        .split_once("..")
        .ok_or_else(|| err(no, format!("bad range '{tok}'")))?;
    let a = a.parse().map_err(|_| err(no, format!("bad range '{tok}'")))?;
    let b = b.parse().map_err(|_| err(no, format!("bad range '{tok}'")))?;
    if a > b {
        return Err(err(no, format!("reversed range '{tok}'")));
    }
    Ok(a..b)
}

fn parse_line(no: usize, l: &str) -> Result<Line, ParseError> {
    let indent = l.len() - l.trim_start_matches(' ').len();
    if !indent.is_multiple_of(2) {
        return Err(err(no, "indentation must be a multiple of two spaces"));
    }
    let toks: Vec<&str> = l.split_whitespace().collect();
    if toks.len() != 6 {
        return Err(err(no, "expected 'level rows cols sep_rows sep_cols kind'"));
    }
    Ok(Line {
        no,
        depth: indent / 2,
        level: toks[0].parse().map_err(|_| err(no, "bad level"))?,
        rows: range(toks[1], no)?,
        cols: range(toks[2], no)?,
        kind: toks[5].to_string(),
    })
}

fn build(lines: &[Line], at: &mut usize, form: Form) -> Result<OrderNode, ParseError> {
    let me = &lines[*at];
    *at += 1;
    let mut children = Vec::new();
    while *at < lines.len() && lines[*at].depth > me.depth {
        if lines[*at].depth != me.depth + 1 {
            return Err(err(lines[*at].no, "indentation skips a level"));
        }
        children.push(build(lines, at, form)?);
    }
    let kind = match me.kind.as_str() {
        "leaf" if children.is_empty() => NodeKind::Leaf,
        "components" if !children.is_empty() => NodeKind::Components(children),
        k if k == "split" || k.starts_with("split/") => {
            let refined_levels = match k.strip_prefix("split/") {
                Some(b) => b.parse().map_err(|_| err(me.no, format!("bad kind '{k}'")))?,
                None => 0,
            };
            let [a, b, c]: [OrderNode; 3] = children
                .try_into()
                .map_err(|_| err(me.no, "a split needs exactly three children"))?;
            let (first, second, separator) = match form {
                Form::Bbd => (a, b, c),
                Form::Sbd => (a, c, b),
            };
            NodeKind::Split {
                first: Box::new(first),
                second: Box::new(second),
                separator: Box::new(separator),
                refined_levels,
            }
        }
        k => return Err(err(me.no, format!("kind '{k}' does not fit its children"))),
    };
    Ok(OrderNode {
        level: me.level,
        rows: me.rows.clone(),
        cols: me.cols.clone(),
        kind,
    })
}

/// Reads a tree written by [`write_tree`] and attaches the permutations.
pub fn parse_tree(text: &str, row_perm: Permutation, col_perm: Permutation) -> Result<OrderingTree, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, l)) if l.trim() == MAGIC => {}
        _ => return Err(err(1, format!("expected '{MAGIC}'"))),
    }
    let mut form = None;
    let mut cut = None;
    let mut matched = None;
    let mut n = None;
    let mut nodes = Vec::new();
    for (no, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks.as_slice() {
            ["form", "bbd"] => form = Some(Form::Bbd),
            ["form", "sbd"] => form = Some(Form::Sbd),
            ["cut", "none"] => cut = Some(CutStrategy::None),
            ["cut", "schur"] => cut = Some(CutStrategy::Schur),
            ["cut", "twobit", b] => {
                cut = Some(CutStrategy::TwoBit(b.parse().map_err(|_| err(no, "bad level count"))?));
            }
            ["matched", "yes"] => matched = Some(true),
            ["matched", "no"] => matched = Some(false),
            ["n", v] => n = Some(v.parse::<usize>().map_err(|_| err(no, "bad size"))?),
            [first, ..] if first.starts_with(|c: char| c.is_ascii_digit()) => nodes.push(parse_line(no, l)?),
            _ => return Err(err(no, format!("unexpected line '{}'", l.trim()))),
        }
    }
    let form = form.ok_or_else(|| err(0, "missing 'form' line"))?;
    let n = n.ok_or_else(|| err(0, "missing 'n' line"))?;
    if nodes.is_empty() || nodes[0].depth != 0 {
        return Err(err(0, "missing root node"));
    }
    if row_perm.len() != n || col_perm.len() != n {
        return Err(err(
            0,
            format!(
                "tree has n = {n} but the permutations have {} and {}",
                row_perm.len(),
                col_perm.len()
            ),
        ));
    }
    let mut at = 0;
    let root = build(&nodes, &mut at, form)?;
    if at != nodes.len() {
        return Err(err(nodes[at].no, "more than one root"));
    }
    OrderingTree::new(
        form,
        cut.unwrap_or_default(),
        root,
        row_perm,
        col_perm,
        matched.unwrap_or(false),
    )
    .map_err(|e| err(0, e.to_string()))
}
