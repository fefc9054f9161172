use std::collections::HashMap;
use std::path::{Path, PathBuf};

use bridge_corrnet::data::{tokenize, Document, ParallelCorpus};

use super::{emit, load_dense, read_dense, read_lines};
use crate::error::{at, CliError, Result};

/// Where the records of one `(view, pivot)` pairing come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParallelSource {
    /// Two files aligned by line: record `i` of one matches record `i` of the other.
    Aligned { view: PathBuf, pivot: PathBuf },
    /// One text file with two tab-separated columns: pivot document, then
    /// view document.
    Tsv(PathBuf),
}

/// Representation of one side of a parallel source.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Text,
    /// Dense features of the given dim, or inferred from the file.
    Dense(Option<usize>),
}

/// One document per line, tokenized. Empty documents are kept.
pub fn read_documents(path: &Path, lowercase: bool) -> Result<Vec<Vec<String>>> {
    Ok(read_lines(path)?.iter().map(|l| tokenize(l, lowercase)).collect())
}

/// One document per line, tokens joined by single spaces.
pub fn write_documents<D: AsRef<[String]>>(path: Option<&Path>, docs: &[D]) -> Result<()> {
    let text: String = docs.iter().map(|d| d.as_ref().join(" ") + "\n").collect();
    emit(path, &text)
}

fn text_side(path: &Path, lines: &[&str], lowercase: bool) -> Result<Vec<Document>> {
    lines
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let toks = tokenize(l, lowercase);
            if toks.is_empty() {
                Err(at(path, format_args!("line {}: empty document after tokenization", i + 1)))
            } else {
                Ok(Document::Tokens(toks))
            }
        })
        .collect()
}

fn load_side(path: &Path, side: Side, lowercase: bool) -> Result<Vec<Document>> {
    match side {
        Side::Text => {
            let lines = read_lines(path)?;
            let refs: Vec<&str> = lines.iter().map(String::as_str).collect();
            text_side(path, &refs, lowercase)
        }
        Side::Dense(dim) => {
            let rows = match dim {
                Some(d) => load_dense(path, d)?,
                None => read_dense(path, None)?.rows,
            };
            Ok(rows.into_iter().map(Document::Features).collect())
        }
    }
}

/// Loads positionally aligned records between `view` and `pivot`.
///
/// Text is tokenized with [`tokenize`]; a text record with no tokens left is
/// an error since it would contribute a zero input.
pub fn load_parallel(
    source: &ParallelSource,
    view: &str,
    pivot: &str,
    sides: (Side, Side),
    lowercase: bool,
) -> Result<ParallelCorpus> {
    let (vdocs, pdocs) = match source {
        ParallelSource::Aligned { view: vp, pivot: pp } => {
            let v = load_side(vp, sides.0, lowercase)?;
            let p = load_side(pp, sides.1, lowercase)?;
            if v.len() != p.len() {
                return Err(CliError::data(format!(
                    "alignment: {} has {} records but {} has {}",
                    vp.display(),
                    v.len(),
                    pp.display(),
                    p.len()
                )));
            }
            (v, p)
        }
        ParallelSource::Tsv(path) => {
            if sides != (Side::Text, Side::Text) {
                return Err(at(path, "a two-column TSV holds text only; give dense views as two aligned files"));
            }
            let lines = read_lines(path)?;
            let mut pcol = Vec::with_capacity(lines.len());
            let mut vcol = Vec::with_capacity(lines.len());
            for (i, l) in lines.iter().enumerate() {
                match l.split_once('\t') {
                    Some((p, v)) if !v.contains('\t') => {
                        pcol.push(p);
                        vcol.push(v);
                    }
                    _ => {
                        return Err(at(path, format_args!("line {}: expected exactly 2 tab-separated columns", i + 1)))
                    }
                }
            }
            (text_side(path, &vcol, lowercase)?, text_side(path, &pcol, lowercase)?)
        }
    };
    if vdocs.is_empty() {
        return Err(CliError::data(format!("no records for pairing {view}={pivot}")));
    }
    Ok(ParallelCorpus {
        view: view.to_owned(),
        pivot: pivot.to_owned(),
        records: vdocs.into_iter().zip(pdocs).collect(),
    })
}

/// A labeled record: comma-separated class indices, a tab, then the content.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledLine {
    pub labels: Vec<usize>,
    pub content: String,
}

/// Reads `labels<TAB>content` lines. The label field may be empty.
pub fn read_labeled(path: &Path) -> Result<Vec<LabeledLine>> {
    read_lines(path)?
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let bad = |why: &str| at(path, format_args!("line {}: {why}", i + 1));
            let (labels, content) = l.split_once('\t').ok_or_else(|| bad("expected labels<TAB>content"))?;
            let labels = labels
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().map_err(|_| bad("labels must be comma-separated class indices")))
                .collect::<Result<Vec<_>>>()?;
            Ok(LabeledLine { labels, content: content.to_owned() })
        })
        .collect()
}

fn index_of(ids: &[String]) -> HashMap<&str, usize> {
    let mut m = HashMap::with_capacity(ids.len());
    for (i, id) in ids.iter().enumerate() {
        m.entry(id.as_str()).or_insert(i);
    }
    m
}

/// Relevant documents per query from `query_id<TAB>doc_id` lines.
///
/// Ids are resolved against `query_ids` and `doc_ids`; an unknown id is an
/// error. Queries without any line get an empty list.
pub fn read_relevance(path: &Path, query_ids: &[String], doc_ids: &[String]) -> Result<Vec<Vec<usize>>> {
    let (qi, di) = (index_of(query_ids), index_of(doc_ids));
    let mut rel = vec![Vec::new(); query_ids.len()];
    for (n, l) in read_lines(path)?.iter().enumerate() {
        let bad = |why: String| at(path, format_args!("line {}: {why}", n + 1));
        let (q, d) = l.split_once('\t').ok_or_else(|| bad("expected query_id<TAB>doc_id".into()))?;
        let q = *qi.get(q.trim()).ok_or_else(|| bad(format!("unknown query id {q:?}")))?;
        let d = *di.get(d.trim()).ok_or_else(|| bad(format!("unknown document id {d:?}")))?;
        if !rel[q].contains(&d) {
            rel[q].push(d);
        }
    }
    Ok(rel)
}
