//! Matrix Market coordinate files, coordinate files and permutation files.

use std::fmt::Write as _;

use thiserror::Error;
use vmo_core::{Layout, Permutation, SparseMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    /// 1-based line number, 0 when the problem is not tied to a line.
    pub line: usize,
    pub msg: String,
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError { line, msg: msg.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Real,
    Pattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
}

fn parse_header(line: &str) -> Result<(Field, Symmetry), ParseError> {
    let words: Vec<String> = line.split_whitespace().map(str::to_ascii_lowercase).collect();
    if words.len() != 5 || words[0] != "%%matrixmarket" {
        return Err(err(1, "expected '%%MatrixMarket matrix coordinate <field> <symmetry>'"));
    }
    if words[1] != "matrix" {
        return Err(err(1, format!("unsupported object '{}'", words[1])));
    }
    match words[2].as_str() {
        "coordinate" => {}
        "array" => return Err(err(1, "dense array format is not supported")),
        other => return Err(err(1, format!("unknown format '{other}'"))),
    }
    let field = match words[3].as_str() {
        "real" | "integer" | "double" => Field::Real,
        "pattern" => Field::Pattern,
        other => return Err(err(1, format!("unsupported field '{other}'"))),
    };
    let symmetry = match words[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        other => return Err(err(1, format!("unsupported symmetry '{other}'"))),
    };
    Ok((field, symmetry))
}

fn number<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, ParseError> {
    let tok = tok.ok_or_else(|| err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| err(line, format!("bad {what} '{tok}'")))
}

/// Parses a Matrix Market coordinate file.
///
/// Symmetric files are expanded to both triangles, pattern entries get the
/// value 1, duplicates are summed and explicit zeros are kept as stored
/// entries.
pub fn parse_matrix_market(text: &str) -> Result<SparseMatrix, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, first) = lines.next().ok_or_else(|| err(1, "empty input"))?;
    let (field, symmetry) = parse_header(first)?;
    let mut body = lines.filter(|(_, l)| {
        let t = l.trim_start();
        !t.is_empty() && !t.starts_with('%')
    });

    let (size_line, size) = body.next().ok_or_else(|| err(0, "missing size line"))?;
    let mut toks = size.split_whitespace();
    let nrows: usize = number(toks.next(), size_line, "row count")?;
    let ncols: usize = number(toks.next(), size_line, "column count")?;
    let nnz: usize = number(toks.next(), size_line, "entry count")?;
    if toks.next().is_some() {
        return Err(err(size_line, "size line has extra fields"));
    }
    if symmetry == Symmetry::Symmetric && nrows != ncols {
        return Err(err(size_line, "symmetric matrix must be square"));
    }

    let mut triplets = Vec::with_capacity(if symmetry == Symmetry::Symmetric { 2 * nnz } else { nnz });
    let mut count = 0;
    for (ln, l) in body {
        count += 1;
        if count > nnz {
            return Err(err(ln, format!("more than the {nnz} declared entries")));
        }
        let mut toks = l.split_whitespace();
        let i: usize = number(toks.next(), ln, "row index")?;
        let j: usize = number(toks.next(), ln, "column index")?;
        if i == 0 || i > nrows || j == 0 || j > ncols {
            return Err(err(ln, format!("index ({i}, {j}) outside {nrows}x{ncols}")));
        }
        let v = match field {
            Field::Real => number(toks.next(), ln, "value")?,
            Field::Pattern => 1.0,
        };
        if toks.next().is_some() {
            return Err(err(ln, "entry has extra fields"));
        }
        triplets.push((i - 1, j - 1, v));
        if symmetry == Symmetry::Symmetric && i != j {
            triplets.push((j - 1, i - 1, v));
        }
    }
    if count < nnz {
        return Err(err(0, format!("declared {nnz} entries, found {count}")));
    }
    SparseMatrix::from_triplets(nrows, ncols, triplets).map_err(|e| err(0, e.to_string()))
}

/// Writes `m` as a general real coordinate file. Values use the shortest
/// representation that reads back to the same `f64`.
pub fn write_matrix_market(m: &SparseMatrix) -> String {
    let mut s = String::from("%%MatrixMarket matrix coordinate real general\n");
    let _ = writeln!(s, "{} {} {}", m.nrows(), m.ncols(), m.nnz());
    for &(i, j, v) in m.entries() {
        let _ = writeln!(s, "{} {} {}", i + 1, j + 1, v);
    }
    s
}

/// Parses one point per non-blank line and checks the point count.
pub fn parse_coords(text: &str, expected_count: usize) -> Result<Layout, ParseError> {
    let x = parse_points(text)?;
    if x.len() != expected_count {
        return Err(err(0, format!("expected {expected_count} points, found {}", x.len())));
    }
    Ok(x)
}

/// Parses one point per non-blank line. The dimension is the number of
/// values on the first line; `#` starts a comment line.
pub fn parse_points(text: &str) -> Result<Layout, ParseError> {
    let mut dim = None;
    let mut coords = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let ln = i + 1;
        let t = l.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let row: Vec<f64> = t
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .map_err(|_| err(ln, format!("bad coordinate '{tok}'")))
            })
            .collect::<Result<_, _>>()?;
        if row.iter().any(|v| !v.is_finite()) {
            return Err(err(ln, "coordinates must be finite"));
        }
        match dim {
            None => dim = Some(row.len()),
            Some(d) if d != row.len() => {
                return Err(err(ln, format!("expected {d} coordinates, found {}", row.len())));
            }
            Some(_) => {}
        }
        coords.extend(row);
    }
    let dim = dim.ok_or_else(|| err(0, "no points"))?;
    Ok(Layout::new(dim, coords))
}

pub fn write_coords(x: &Layout) -> String {
    let mut s = String::new();
    for p in x.points() {
        let line: Vec<String> = p.iter().map(|v| v.to_string()).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}

/// Line `i` holds the 0-based index placed at position `i`.
pub fn write_permutation(p: &Permutation) -> String {
    let mut s = String::with_capacity(p.len() * 4);
    for &v in p.as_slice() {
        let _ = writeln!(s, "{v}");
    }
    s
}

pub fn parse_permutation(text: &str) -> Result<Permutation, ParseError> {
    let mut order = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let t = l.trim();
        if t.is_empty() {
            continue;
        }
        order.push(t.parse::<usize>().map_err(|_| err(i + 1, format!("bad index '{t}'")))?);
    }
    Permutation::new(order).map_err(|e| err(0, e.to_string()))
}
