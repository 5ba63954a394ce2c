//! Plain-text matrix dumps.
//!
//! A header line `# rows cols` is followed by one line per row, entries separated
//! by a single space in `{:.17e}` form so values round-trip exactly.

use std::fmt::Write as _;

use nalgebra::{DMatrix, Dim, Matrix, RawStorage};

use crate::error::{Error, Result};

pub fn write_matrix<R: Dim, C: Dim, S: RawStorage<f64, R, C>>(m: &Matrix<f64, R, C, S>) -> String {
    let mut out = format!("# {} {}\n", m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if j > 0 {
                out.push(' ');
            }
            write!(out, "{:.17e}", m[(i, j)]).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn parse_matrix(text: &str) -> Result<DMatrix<f64>> {
    let mut shape: Option<(usize, usize)> = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let dims: Vec<usize> = rest.split_whitespace().filter_map(|s| s.parse().ok()).collect();
            if let [r, c] = dims[..] {
                shape = Some((r, c));
            }
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|s| s.parse::<f64>().map_err(|e| Error::InvalidParameter(format!("bad matrix entry {s:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::InvalidParameter("ragged matrix rows".into()));
    }
    if let Some((r, c)) = shape {
        if (r, c) != (rows.len(), ncols) {
            return Err(Error::InvalidParameter(format!(
                "header says {r}x{c}, found {}x{ncols}",
                rows.len()
            )));
        }
    }
    Ok(DMatrix::from_row_iterator(rows.len(), ncols, rows.into_iter().flatten()))
}
