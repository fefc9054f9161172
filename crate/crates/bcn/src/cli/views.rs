//! Reading inputs for a named model view.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use bridge_corrnet::data::{tokenize, vectorize, BowMode, Vocabulary, DEFAULT_MIN_COUNT};
use bridge_corrnet::{Input, ModelParams, Vector, ViewKind};

use super::{usage, TextArgs};
use crate::error::{at, CliError, Result};
use crate::formats::{read_dense, read_lines, read_vocab};

/// Vocabularies and text settings resolved from [`TextArgs`].
pub(crate) struct TextSetup {
    pub vocab_paths: HashMap<String, PathBuf>,
    pub bow: BowMode,
    pub lowercase: bool,
}

impl TextSetup {
    pub fn new(a: &TextArgs) -> Result<Self> {
        let bow = a.bow.parse().map_err(|e| CliError::usage(format!("--bow: {e}")))?;
        let mut vocab_paths = HashMap::new();
        for (name, path) in &a.vocab {
            if vocab_paths.insert(name.clone(), path.clone()).is_some() {
                return usage(format!("--vocab {name} given twice"));
            }
        }
        Ok(TextSetup { vocab_paths, bow, lowercase: !a.no_lowercase })
    }

    pub fn vocab(&self, view: &str) -> Result<Vocabulary> {
        match self.vocab_paths.get(view) {
            Some(p) => read_vocab(p, DEFAULT_MIN_COUNT),
            None => usage(format!("text view {view} needs --vocab {view}=FILE")),
        }
    }

    pub fn to_input(&self, vocab: &Vocabulary, text: &str) -> Input {
        Input::Sparse(vectorize(vocab, &tokenize(text, self.lowercase), self.bow))
    }
}

pub(crate) fn view_index(model: &ModelParams, name: &str, flag: &str) -> Result<usize> {
    model.view_index(name).ok_or_else(|| {
        let known: Vec<&str> = model.views.iter().map(|v| v.name.as_str()).collect();
        CliError::usage(format!("{flag}: model has no view {name:?} (views: {})", known.join(", ")))
    })
}

/// Inputs of `view` from `path` with their ids.
///
/// Text views read one document per line (ids are 0-based line numbers);
/// dense views read a feature TSV of the view's dim.
pub(crate) fn load_view_inputs(
    model: &ModelParams,
    view: usize,
    path: &Path,
    text: &TextSetup,
) -> Result<(Vec<String>, Vec<Input>)> {
    let spec = &model.views[view];
    match spec.kind {
        ViewKind::DenseFeatures => {
            let t = read_dense(path, Some(spec.dim))?;
            Ok((t.ids, t.rows.into_iter().map(Input::Dense).collect()))
        }
        ViewKind::SparseBow => {
            let vocab = checked_vocab(model, view, text)?;
            let lines = read_lines(path)?;
            let ids = (0..lines.len()).map(|i| i.to_string()).collect();
            Ok((ids, lines.iter().map(|l| text.to_input(&vocab, l)).collect()))
        }
    }
}

pub(crate) fn checked_vocab(model: &ModelParams, view: usize, text: &TextSetup) -> Result<Vocabulary> {
    let spec = &model.views[view];
    let vocab = text.vocab(&spec.name)?;
    if vocab.len() != spec.dim {
        return Err(CliError::data(format!(
            "vocabulary for view {} has {} tokens but the model expects {}",
            spec.name,
            vocab.len(),
            spec.dim
        )));
    }
    Ok(vocab)
}

/// Either inputs of a model view, or precomputed embeddings of dim `k`.
pub(crate) fn load_embedded(
    model: &ModelParams,
    view: Option<&str>,
    flag: &str,
    path: &Path,
    text: &TextSetup,
) -> Result<(Vec<String>, Vec<Vector>)> {
    match view {
        Some(name) => {
            let v = view_index(model, name, flag)?;
            let (ids, inputs) = load_view_inputs(model, v, path, text)?;
            let emb = bridge_corrnet::eval::embed_all(model, v, &inputs).map_err(|e| at(path, e))?;
            Ok((ids, emb))
        }
        None => {
            let t = read_dense(path, Some(model.k))?;
            Ok((t.ids, t.rows))
        }
    }
}

pub(crate) fn read_model(path: &Path) -> Result<ModelParams> {
    let bytes = std::fs::read(path).map_err(|e| at(path, e))?;
    ModelParams::load(&bytes).map_err(|e| at(path, e))
}

pub(crate) fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| at(path, e))
}
