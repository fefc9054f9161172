use std::fmt::Write as _;
use std::path::Path;

use bridge_corrnet::Vector;

use super::{fmt_f64, read_lines};
use crate::error::{at, Result};

/// Rows of a dense feature file with their ids.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTable {
    /// Leading id column, or the 0-based record index when the file has none.
    pub ids: Vec<String>,
    pub rows: Vec<Vector>,
}

impl DenseTable {
    pub fn dim(&self) -> Option<usize> {
        self.rows.first().map(Vector::dim)
    }
}

/// Reads tab-separated floats, one record per line.
///
/// With `expected_dim` the id column is present exactly when a record has
/// `dim + 1` fields. Without it, the first field of the first record decides:
/// if it does not parse as a number the file has ids. Either way all records
/// must agree. Blank lines are not allowed.
pub fn read_dense(path: &Path, expected_dim: Option<usize>) -> Result<DenseTable> {
    let lines = read_lines(path)?;
    let mut ids = Vec::with_capacity(lines.len());
    let mut rows = Vec::with_capacity(lines.len());
    let mut layout: Option<(bool, usize)> = None;
    for (i, line) in lines.iter().enumerate() {
        let fields: Vec<&str> = line.split('\t').collect();
        let (has_id, dim) = match layout {
            Some(l) => l,
            None => {
                let l = match expected_dim {
                    Some(d) if fields.len() == d + 1 => (true, d),
                    Some(d) => (false, d),
                    None if fields[0].trim().parse::<f64>().is_err() => (true, fields.len() - 1),
                    None => (false, fields.len()),
                };
                layout = Some(l);
                l
            }
        };
        let found = fields.len() - usize::from(has_id);
        if found != dim || dim == 0 {
            return Err(at(path, format_args!("record {} (line {}): expected {dim} values, found {found}", i, i + 1)));
        }
        let (id, values) = if has_id { (fields[0].to_owned(), &fields[1..]) } else { (i.to_string(), &fields[..]) };
        let row = values
            .iter()
            .enumerate()
            .map(|(c, v)| match v.trim().parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(x),
                _ => Err(at(
                    path,
                    format_args!("record {} (line {}), column {}: not a finite number: {v:?}", i, i + 1, c + 1),
                )),
            })
            .collect::<Result<Vec<f64>>>()?;
        ids.push(id);
        rows.push(Vector::from(row));
    }
    Ok(DenseTable { ids, rows })
}

/// Dense vectors of exactly `expected_dim` values each.
pub fn load_dense(path: &Path, expected_dim: usize) -> Result<Vec<Vector>> {
    Ok(read_dense(path, Some(expected_dim))?.rows)
}

/// Writes rows with an optional id column. Floats use the shortest text that
/// reads back bit-exactly.
pub fn write_dense<R: AsRef<[f64]>>(path: Option<&Path>, ids: Option<&[String]>, rows: &[R]) -> Result<()> {
    let mut out = String::new();
    for (i, r) in rows.iter().enumerate() {
        if let Some(ids) = ids {
            out.push_str(&ids[i]);
            out.push('\t');
        }
        let cells: Vec<String> = r.as_ref().iter().map(|&v| fmt_f64(v)).collect();
        let _ = writeln!(out, "{}", cells.join("\t"));
    }
    super::emit(path, &out)
}
