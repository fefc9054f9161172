use std::fmt::Write as _;
use std::path::Path;

use bridge_corrnet::data::Vocabulary;
use bridge_corrnet::SparseVector;

use super::{emit, fmt_f64, read_lines};
use crate::error::{at, Result};

/// `token<TAB>count` per line, in vocabulary order.
pub fn write_vocab(path: Option<&Path>, vocab: &Vocabulary) -> Result<()> {
    let mut out = String::new();
    for (t, c) in vocab.iter() {
        let _ = writeln!(out, "{t}\t{c}");
    }
    emit(path, &out)
}

/// Reads a vocabulary file. The file does not record the frequency cutoff it
/// was built with, so the caller supplies it.
pub fn read_vocab(path: &Path, min_count: u64) -> Result<Vocabulary> {
    let mut entries = Vec::new();
    for (i, line) in read_lines(path)?.iter().enumerate() {
        let bad = |why: &str| at(path, format_args!("line {}: {why}", i + 1));
        let (tok, count) = line.split_once('\t').ok_or_else(|| bad("expected token<TAB>count"))?;
        if tok.is_empty() {
            return Err(bad("empty token"));
        }
        let count = count.trim().parse::<u64>().map_err(|_| bad("count is not a non-negative integer"))?;
        entries.push((tok.to_owned(), count));
    }
    Vocabulary::from_entries(entries, min_count).map_err(|e| at(path, e))
}

/// One sparse vector per line as space-separated `index:value` entries.
pub fn write_sparse(path: Option<&Path>, vectors: &[SparseVector]) -> Result<()> {
    let mut out = String::new();
    for v in vectors {
        let cells: Vec<String> = v.entries().iter().map(|&(i, x)| format!("{i}:{}", fmt_f64(x))).collect();
        let _ = writeln!(out, "{}", cells.join(" "));
    }
    emit(path, &out)
}

/// Reads sparse vectors of dimension `dim`. Empty lines are empty vectors.
pub fn read_sparse(path: &Path, dim: usize) -> Result<Vec<SparseVector>> {
    read_lines(path)?
        .iter()
        .enumerate()
        .map(|(i, line)| {
            let bad = |why: String| at(path, format_args!("line {}: {why}", i + 1));
            let entries = line
                .split_whitespace()
                .map(|cell| {
                    let (idx, val) =
                        cell.split_once(':').ok_or_else(|| bad(format!("expected index:value, got {cell:?}")))?;
                    let idx = idx.parse::<usize>().map_err(|_| bad(format!("bad index in {cell:?}")))?;
                    let val = val.parse::<f64>().map_err(|_| bad(format!("bad value in {cell:?}")))?;
                    Ok((idx, val))
                })
                .collect::<Result<Vec<_>>>()?;
            SparseVector::new(dim, entries).map_err(|e| bad(e.to_string()))
        })
        .collect()
}
