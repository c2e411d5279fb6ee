//! The `vmo` command line.
//!
//! Exit codes: 0 success, 1 unreadable or malformed input, 2 structural
//! singularity (no perfect matching, or a block without an acceptable
//! pivot), 3 invalid flags or inputs that do not fit together.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;
use vmo_core::lu::{
    cut_metrics, fill_in, lu_restricted, solve_and_backward_error, Factors, LuError, Pivoting, DEFAULT_THRESHOLD,
};
use vmo_core::ordering::{bipartite_coordinates, bipartite_layout, recursive_order, OrderError};
use vmo_core::{
    CutStrategy, EdgeCost, Form, Layout, LayoutParams, OrderOptions, OrderingTree, Permutation, Representation,
    SparseMatrix,
};

use crate::matio::{self, ParseError};
use crate::{report, svg};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("{0}")]
    Singular(String),
    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } => 1,
            CliError::Singular(_) => 2,
            CliError::Invalid(_) => 3,
        }
    }
}

impl From<OrderError> for CliError {
    fn from(e: OrderError) -> Self {
        match e {
            OrderError::Matching(m) => CliError::Singular(m.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "vmo", version, about = "Geometric BBD/SBD ordering of sparse matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute row and column permutations and the block tree.
    Order(OrderArgs),
    /// Factor a permuted matrix without and with threshold pivoting.
    Eval(EvalArgs),
    /// Draw a spy plot and a layout scatter plot as SVG.
    Render(RenderArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReprArg {
    Symmetric,
    Bipartite,
    Colnet,
    Rownet,
    Finegrain,
}

impl From<ReprArg> for Representation {
    fn from(r: ReprArg) -> Self {
        match r {
            ReprArg::Symmetric => Representation::Symmetric,
            ReprArg::Bipartite => Representation::Bipartite,
            ReprArg::Colnet => Representation::ColumnNet,
            ReprArg::Rownet => Representation::RowNet,
            ReprArg::Finegrain => Representation::Finegrain,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Bbd,
    Sbd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CutArg {
    None,
    Schur,
    Twobit,
}

#[derive(Debug, Args)]
pub struct LayoutArgs {
    /// Hypergraph representation that is laid out.
    #[arg(long, value_enum, default_value = "bipartite")]
    pub repr: ReprArg,
    /// Layout dimension (at least 3).
    #[arg(long, default_value_t = 4)]
    pub dim: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Use |a_ij| as hyperedge costs instead of unit costs.
    #[arg(long)]
    pub magnitude_costs: bool,
    /// Coordinates for the vertices of the chosen representation, one
    /// point per line; skips the layout.
    #[arg(long, value_name = "FILE")]
    pub geometry: Option<PathBuf>,
}

impl LayoutArgs {
    fn params(&self) -> LayoutParams {
        LayoutParams {
            dim: self.dim,
            seed: self.seed,
            ..LayoutParams::default()
        }
    }

    fn edge_cost(&self) -> EdgeCost {
        if self.magnitude_costs {
            EdgeCost::Magnitude
        } else {
            EdgeCost::Unit
        }
    }
}

#[derive(Debug, Args)]
pub struct OrderArgs {
    /// Matrix Market input.
    pub matrix: PathBuf,
    #[command(flatten)]
    pub layout: LayoutArgs,
    #[arg(long, value_enum, default_value = "bbd")]
    pub form: FormArg,
    #[arg(long, value_enum, default_value = "none")]
    pub cut: CutArg,
    /// Levels sorted by the two-bit cut refinement.
    #[arg(long, default_value_t = 1)]
    pub levels: usize,
    /// Blocks with at most this many rows are not split.
    #[arg(long, default_value_t = 32)]
    pub min_block: usize,
    #[arg(long, default_value_t = 64)]
    pub max_depth: usize,
    /// Do not keep a strengthened diagonal on the diagonal.
    #[arg(long)]
    pub no_matching: bool,
    /// Output files are PREFIX.rows, PREFIX.cols and PREFIX.tree; defaults
    /// to the input path without its extension.
    #[arg(long, value_name = "PATH")]
    pub out_prefix: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OrderingInput {
    /// Read PREFIX.rows, PREFIX.cols and PREFIX.tree as written by `order`.
    #[arg(long, value_name = "PREFIX", conflicts_with_all = ["rows", "cols", "tree"])]
    pub order: Option<PathBuf>,
    #[arg(long, value_name = "FILE", requires = "cols")]
    pub rows: Option<PathBuf>,
    #[arg(long, value_name = "FILE", requires = "rows")]
    pub cols: Option<PathBuf>,
    /// Block tree; without it the whole matrix is one pivoting block.
    #[arg(long, value_name = "FILE")]
    pub tree: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    pub matrix: PathBuf,
    #[command(flatten)]
    pub ordering: OrderingInput,
    /// Pivot threshold u for the second run.
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    pub threshold: f64,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    pub matrix: PathBuf,
    #[command(flatten)]
    pub ordering: OrderingInput,
    #[command(flatten)]
    pub layout: LayoutArgs,
    /// Only draw the spy plot.
    #[arg(long)]
    pub no_layout: bool,
    /// Output files are PREFIX.spy.svg and PREFIX.layout.svg.
    #[arg(long, value_name = "PATH")]
    pub out_prefix: Option<PathBuf>,
}

/// Parses `args` (program name first) and runs the command, writing the
/// report to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                3
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let result = match &cli.command {
        Command::Order(a) => cmd_order(a, out),
        Command::Eval(a) => cmd_eval(a, out),
        Command::Render(a) => cmd_render(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "vmo: {e}");
            e.exit_code()
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parsed<T>(path: &Path, r: Result<T, ParseError>) -> Result<T, CliError> {
    r.map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn read_matrix(path: &Path) -> Result<SparseMatrix, CliError> {
    let text = read(path)?;
    parsed(path, matio::parse_matrix_market(&text))
}

fn read_geometry(path: Option<&Path>) -> Result<Option<Layout>, CliError> {
    match path {
        Some(p) => {
            let text = read(p)?;
            Ok(Some(parsed(p, matio::parse_points(&text))?))
        }
        None => Ok(None),
    }
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn default_prefix(matrix: &Path, given: Option<&PathBuf>) -> PathBuf {
    given.cloned().unwrap_or_else(|| matrix.with_extension(""))
}

fn require_square(m: &SparseMatrix) -> Result<(), CliError> {
    if m.is_square() {
        Ok(())
    } else {
        Err(CliError::Invalid(format!(
            "matrix is {}x{}, expected square",
            m.nrows(),
            m.ncols()
        )))
    }
}

pub fn cmd_order(a: &OrderArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let m = read_matrix(&a.matrix)?;
    require_square(&m)?;
    let geometry = read_geometry(a.layout.geometry.as_deref())?;
    if a.min_block == 0 {
        return Err(CliError::Invalid("--min-block must be at least 1".into()));
    }
    let params = a.layout.params();
    if geometry.is_none() {
        params.validate().map_err(|e| CliError::Invalid(e.to_string()))?;
    }
    let cut = match a.cut {
        CutArg::None => CutStrategy::None,
        CutArg::Schur => CutStrategy::Schur,
        CutArg::Twobit if a.levels == 0 => {
            return Err(CliError::Invalid(
                "--levels must be at least 1 with --cut twobit".into(),
            ));
        }
        CutArg::Twobit => CutStrategy::TwoBit(a.levels),
    };
    let opts = OrderOptions {
        representation: a.layout.repr.into(),
        edge_cost: a.layout.edge_cost(),
        form: match a.form {
            FormArg::Bbd => Form::Bbd,
            FormArg::Sbd => Form::Sbd,
        },
        cut,
        min_block: a.min_block,
        max_depth: a.max_depth,
        matching: !a.no_matching,
        layout: params,
        ..OrderOptions::default()
    };
    let tree = recursive_order(&m, &opts, geometry.as_ref())?;

    let prefix = default_prefix(&a.matrix, a.out_prefix.as_ref());
    let files = [
        (with_suffix(&prefix, ".rows"), matio::write_permutation(tree.row_perm())),
        (with_suffix(&prefix, ".cols"), matio::write_permutation(tree.col_perm())),
        (with_suffix(&prefix, ".tree"), report::write_tree(&tree)),
    ];
    for (path, text) in &files {
        write(path, text)?;
    }

    let cuts = cut_metrics(&tree);
    let _ = writeln!(out, "n {} nnz {}", m.nrows(), m.nnz());
    let _ = writeln!(
        out,
        "form {} splits {}",
        report::form_name(tree.form()),
        cuts.per_split.len()
    );
    for c in &cuts.per_split {
        let _ = writeln!(out, "split level {} cut rows {} cut cols {}", c.level, c.rows, c.cols);
    }
    let _ = writeln!(
        out,
        "max cut {} (rows {}, cols {})",
        cuts.max_cut, cuts.max_rows, cuts.max_cols
    );
    for (path, _) in &files {
        let _ = writeln!(out, "wrote {}", path.display());
    }
    Ok(())
}

fn read_ordering(input: &OrderingInput, n: usize) -> Result<Option<OrderingTree>, CliError> {
    let (rows, cols, tree) = match &input.order {
        Some(prefix) => (
            Some(with_suffix(prefix, ".rows")),
            Some(with_suffix(prefix, ".cols")),
            Some(with_suffix(prefix, ".tree")),
        ),
        None => (input.rows.clone(), input.cols.clone(), input.tree.clone()),
    };
    if rows.is_none() && tree.is_none() {
        return Ok(None);
    }
    let perm = |p: Option<PathBuf>| -> Result<Permutation, CliError> {
        match p {
            Some(p) => {
                let text = read(&p)?;
                let perm = parsed(&p, matio::parse_permutation(&text))?;
                if perm.len() != n {
                    return Err(CliError::Invalid(format!(
                        "{}: permutation has length {}, matrix has {n} rows",
                        p.display(),
                        perm.len()
                    )));
                }
                Ok(perm)
            }
            None => Ok(Permutation::identity(n)),
        }
    };
    let (rp, cp) = (perm(rows)?, perm(cols)?);
    let tree = match tree {
        Some(p) => {
            let text = read(&p)?;
            let t = parsed(&p, report::parse_tree(&text, rp, cp)).map_err(|e| match e {
                // A well-formed tree for another size is a mismatch, not a
                // parse failure.
                CliError::Parse { path, source } if source.msg.starts_with("tree has n") => {
                    CliError::Invalid(format!("{}: {}", path.display(), source.msg))
                }
                other => other,
            })?;
            t
        }
        None => OrderingTree::flat(rp, cp).map_err(|e| CliError::Invalid(e.to_string()))?,
    };
    Ok(Some(tree))
}

fn describe(f: &Factors, a: &SparseMatrix) -> Result<String, LuError> {
    use vmo_core::lu::PivotKind;
    let b = a.mul_vec(&vec![1.0; a.nrows()]);
    let (_, berr) = solve_and_backward_error(a, f, &b)?;
    Ok(format!(
        "fill_in {:.6} row_swaps {} col_swaps {} zero_pivots {} backward_error {:.3e}",
        fill_in(a, f),
        f.log.count(PivotKind::RowSwap),
        f.log.count(PivotKind::ColumnSwap),
        f.log.count(PivotKind::ZeroPivot),
        berr
    ))
}

pub fn cmd_eval(a: &EvalArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let m = read_matrix(&a.matrix)?;
    require_square(&m)?;
    if !(0.0..=1.0).contains(&a.threshold) {
        return Err(CliError::Invalid("--threshold must lie in [0, 1]".into()));
    }
    let n = m.nrows();
    let tree = match read_ordering(&a.ordering, n)? {
        Some(t) => t,
        None => OrderingTree::flat(Permutation::identity(n), Permutation::identity(n))
            .map_err(|e| CliError::Invalid(e.to_string()))?,
    };
    let pa = tree.permuted(&m);
    let cuts = cut_metrics(&tree);
    let _ = writeln!(out, "n {} nnz {}", n, m.nnz());
    let _ = writeln!(
        out,
        "max cut {} (rows {}, cols {})",
        cuts.max_cut, cuts.max_rows, cuts.max_cols
    );

    let runs = [
        ("nopivot".to_string(), Pivoting::None),
        (
            format!("threshold u {:e}", a.threshold),
            Pivoting::Threshold(a.threshold),
        ),
    ];
    let mut last = Ok(());
    for (name, piv) in runs {
        last = match lu_restricted(&pa, &tree, piv).and_then(|f| describe(&f, &pa)) {
            Ok(line) => {
                let _ = writeln!(out, "{name} {line}");
                Ok(())
            }
            Err(e) => {
                let _ = writeln!(out, "{name} failed: {e}");
                Err(e)
            }
        };
    }
    // The no-pivot run may fail where threshold pivoting recovers; only a
    // failure of the pivoting run is fatal.
    last.map_err(|e| CliError::Singular(e.to_string()))
}

pub fn cmd_render(a: &RenderArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let m = read_matrix(&a.matrix)?;
    let tree = if m.is_square() {
        read_ordering(&a.ordering, m.nrows())?
    } else if a.ordering.order.is_some() || a.ordering.rows.is_some() || a.ordering.tree.is_some() {
        return Err(CliError::Invalid("orderings need a square matrix".into()));
    } else {
        None
    };
    let prefix = default_prefix(&a.matrix, a.out_prefix.as_ref());
    let spy = with_suffix(&prefix, ".spy.svg");
    write(&spy, &svg::spy_plot(&m, tree.as_ref()))?;
    let _ = writeln!(out, "wrote {}", spy.display());
    if a.no_layout {
        return Ok(());
    }
    let repr: Representation = a.layout.repr.into();
    let x = match read_geometry(a.layout.geometry.as_deref())? {
        Some(g) => bipartite_coordinates(&m, repr, &g)?,
        None => {
            let params = a.layout.params();
            params.validate().map_err(|e| CliError::Invalid(e.to_string()))?;
            bipartite_layout(&m, repr, a.layout.edge_cost(), &params)?
        }
    };
    let path = with_suffix(&prefix, ".layout.svg");
    write(&path, &svg::layout_scatter(&x, m.nrows()))?;
    let _ = writeln!(out, "wrote {}", path.display());
    Ok(())
}
