//! Graph files: comma-separated edge lists and dense whitespace matrices.
//!
//! Edge lists hold one `i,j,weight` row per edge with zero-based `i < j`.
//! Unlisted pairs have weight 0. An optional `# n = N` line fixes the vertex
//! count; otherwise it is one more than the largest index. A non-numeric
//! first row is treated as a header.
//!
//! Dense files hold `n` rows of `n` reals. Values are written with 17
//! significant digits so that a write/read cycle is bit-exact.

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::SymmetricMatrix;

/// Absolute tolerance for asymmetry in dense inputs.
pub const SYMMETRY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFileFormat {
    EdgeListCsv,
    DenseMatrixTsv,
}

impl FromStr for GraphFileFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edgelist" => Ok(GraphFileFormat::EdgeListCsv),
            "dense" => Ok(GraphFileFormat::DenseMatrixTsv),
            other => Err(Error::input(format!("unknown graph format '{other}'"))),
        }
    }
}

impl fmt::Display for GraphFileFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphFileFormat::EdgeListCsv => "edgelist",
            GraphFileFormat::DenseMatrixTsv => "dense",
        })
    }
}

fn fmt_err(path: &Path, line: Option<usize>, message: impl Into<String>) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn parse_declared_n(body: &str) -> Option<usize> {
    let rest = body.trim_start_matches('#').trim();
    let (key, value) = rest.split_once('=')?;
    if key.trim() != "n" {
        return None;
    }
    value.trim().parse().ok()
}

/// Reads an edge list. `path` is only used in error messages.
pub fn read_edge_list(reader: impl Read, path: &Path) -> Result<SymmetricMatrix> {
    let mut declared_n = None;
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut seen = HashSet::new();
    let mut first_data = true;
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        let row = idx + 1;
        let body = line.trim();
        if body.is_empty() {
            continue;
        }
        if body.starts_with('#') {
            if let Some(n) = parse_declared_n(body) {
                declared_n = Some(n);
            }
            continue;
        }
        let fields: Vec<&str> = body.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(fmt_err(path, Some(row), "expected 'i,j,weight'"));
        }
        let parsed = (
            fields[0].parse::<usize>(),
            fields[1].parse::<usize>(),
            fields[2].parse::<f64>(),
        );
        let (i, j, w) = match parsed {
            (Ok(i), Ok(j), Ok(w)) => (i, j, w),
            _ if first_data => {
                first_data = false;
                continue;
            }
            _ => return Err(fmt_err(path, Some(row), format!("cannot parse '{body}'"))),
        };
        first_data = false;
        if i == j {
            return Err(fmt_err(path, Some(row), format!("self-loop at vertex {i}")));
        }
        if i > j {
            return Err(fmt_err(path, Some(row), format!("expected i < j, got {i},{j}")));
        }
        if !(w.is_finite() && w >= 0.0) {
            return Err(fmt_err(path, Some(row), format!("weight {w} must be finite and nonnegative")));
        }
        if let Some(n) = declared_n {
            if j >= n {
                return Err(fmt_err(path, Some(row), format!("vertex {j} out of range for n = {n}")));
            }
        }
        if !seen.insert((i, j)) {
            return Err(fmt_err(path, Some(row), format!("duplicate edge ({i}, {j})")));
        }
        edges.push((i, j, w));
    }
    let inferred = edges.iter().map(|e| e.1 + 1).max().unwrap_or(0);
    let n = declared_n.unwrap_or(inferred);
    if n < 2 {
        return Err(fmt_err(path, None, "graph needs at least 2 vertices"));
    }
    let mut a = SymmetricMatrix::zeros(n)?;
    for (i, j, w) in edges {
        a.set(i, j, w);
    }
    Ok(a)
}

/// Reads a dense matrix, accepting asymmetry up to [`SYMMETRY_TOL`].
pub fn read_dense(reader: impl Read, path: &Path) -> Result<SymmetricMatrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut row_lines = Vec::new();
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        let body = line.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let row: Vec<f64> = body
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| fmt_err(path, Some(idx + 1), format!("cannot parse '{t}'")))
            })
            .collect::<Result<_>>()?;
        rows.push(row);
        row_lines.push(idx + 1);
    }
    let n = rows.len();
    if n < 2 {
        return Err(fmt_err(path, None, "matrix needs at least 2 rows"));
    }
    for (row, &line) in rows.iter().zip(&row_lines) {
        if row.len() != n {
            return Err(fmt_err(
                path,
                Some(line),
                format!("row has {} values, expected {n}", row.len()),
            ));
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(fmt_err(path, Some(line), "non-finite value"));
        }
    }
    SymmetricMatrix::from_rows_tol(&rows, SYMMETRY_TOL).map_err(|e| fmt_err(path, None, e.to_string()))
}

/// Writes `n` tab-separated rows with 17 significant digits.
pub fn write_dense(mut w: impl Write, m: &SymmetricMatrix) -> Result<()> {
    for i in 0..m.n() {
        let line: Vec<String> = m.row(i).iter().map(|v| format!("{v:.16e}")).collect();
        writeln!(w, "{}", line.join("\t"))?;
    }
    Ok(())
}

pub fn write_dense_file(path: &Path, m: &SymmetricMatrix) -> Result<()> {
    let mut buf = Vec::new();
    write_dense(&mut buf, m)?;
    fs::write(path, buf)?;
    Ok(())
}

/// Writes an edge list with an `n` declaration, skipping zero weights.
pub fn write_edge_list(mut w: impl Write, m: &SymmetricMatrix) -> Result<()> {
    writeln!(w, "# n = {}", m.n())?;
    writeln!(w, "i,j,weight")?;
    for (i, j, v) in m.upper_entries() {
        if v != 0.0 {
            writeln!(w, "{i},{j},{v:.16e}")?;
        }
    }
    Ok(())
}

/// Reads one graph file, which must be hollow and nonnegative.
pub fn read_graph(path: &Path, format: GraphFileFormat) -> Result<SymmetricMatrix> {
    let file = fs::File::open(path).map_err(|e| fmt_err(path, None, e.to_string()))?;
    let g = match format {
        GraphFileFormat::EdgeListCsv => read_edge_list(file, path)?,
        GraphFileFormat::DenseMatrixTsv => read_dense(file, path)?,
    };
    if !g.is_hollow() {
        return Err(fmt_err(path, None, "graph diagonal must be zero"));
    }
    if g.min_value() < 0.0 {
        return Err(fmt_err(path, None, "graph weights must be nonnegative"));
    }
    Ok(g)
}

/// All non-hidden regular files in `dir`, sorted by name.
pub fn list_graph_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| fmt_err(dir, None, e.to_string()))? {
        let entry = entry?;
        let hidden = entry.file_name().to_string_lossy().starts_with('.');
        if !hidden && entry.file_type()?.is_file() {
            files.push(entry.path());
        }
    }
    files.sort();
    Ok(files)
}

/// Reads every graph in `dir` and checks that they share one vertex count.
pub fn read_graph_dir(dir: &Path, format: GraphFileFormat) -> Result<Vec<SymmetricMatrix>> {
    let files = list_graph_files(dir)?;
    if files.is_empty() {
        return Err(fmt_err(dir, None, "no graph files found"));
    }
    let graphs: Vec<SymmetricMatrix> = files
        .par_iter()
        .map(|p| read_graph(p, format))
        .collect::<Result<_>>()?;
    let n = graphs[0].n();
    for (g, p) in graphs.iter().zip(&files) {
        if g.n() != n {
            return Err(fmt_err(
                p,
                None,
                format!("has {} vertices but {} has {n}", g.n(), files[0].display()),
            ));
        }
    }
    Ok(graphs)
}
