//! Plain-text file formats.
//!
//! Every reader decodes the whole file as UTF-8 up front so that a bad byte
//! is reported by offset, then works line by line. Record numbers in error
//! messages are 1-based line numbers.

mod dense;
mod text;
mod vocab;

use std::fs;
use std::path::Path;

use crate::error::{at, Result};

pub use dense::{load_dense, read_dense, write_dense, DenseTable};
pub use text::{
    load_parallel, read_documents, read_labeled, read_relevance, write_documents, LabeledLine, ParallelSource, Side,
};
pub use vocab::{read_sparse, read_vocab, write_sparse, write_vocab};

/// Reads `path` as UTF-8 text.
pub fn read_text(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| at(path, e))?;
    String::from_utf8(bytes).map_err(|e| {
        let offset = e.utf8_error().valid_up_to();
        at(path, format_args!("invalid UTF-8 at byte offset {offset}"))
    })
}

/// Lines of `path` without terminators. A trailing newline does not add an
/// empty final line.
pub fn read_lines(path: &Path) -> Result<Vec<String>> {
    Ok(read_text(path)?.lines().map(str::to_owned).collect())
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| at(path, e))
}

/// Shortest text that parses back to the same `f64`.
pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

/// Writes `text` to `out`, or to stdout when no path is given.
pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write_text(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
