use std::fs;
use std::path::PathBuf;

use bridge_corrnet::data::{
    synth_multiview, vectorize as bow, BowMode, Mixing, SynthConfig, Vocabulary, DEFAULT_MIN_COUNT,
};
use bridge_corrnet::{Rng, SparseVector};
use clap::Args;
use serde::Serialize;
use serde_json::json;

use super::usage;
use crate::error::{at, CliError, Result};
use crate::formats::{read_documents, read_vocab, write_dense, write_sparse, write_text, write_vocab};

#[derive(Debug, Args, Serialize)]
pub(crate) struct BuildVocabArgs {
    /// Text file with one document per line (repeatable).
    #[arg(long, required = true)]
    input: Vec<PathBuf>,
    /// Keep tokens seen strictly more than this many times.
    #[arg(long, default_value_t = DEFAULT_MIN_COUNT)]
    min_count: u64,
    #[arg(long)]
    no_lowercase: bool,
    /// Vocabulary file to write; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub(crate) fn build_vocab(a: BuildVocabArgs) -> Result<()> {
    let mut docs = Vec::new();
    for p in &a.input {
        docs.extend(read_documents(p, !a.no_lowercase)?);
    }
    let vocab = Vocabulary::build(&docs, a.min_count)?;
    eprintln!("{} documents, {} tokens kept", docs.len(), vocab.len());
    write_vocab(a.out.as_deref(), &vocab)
}

#[derive(Debug, Args, Serialize)]
pub(crate) struct VectorizeArgs {
    #[arg(long)]
    vocab: PathBuf,
    /// Text file with one document per line.
    #[arg(long)]
    input: PathBuf,
    /// count, binary or l2.
    #[arg(long, default_value = "count")]
    bow: String,
    #[arg(long)]
    no_lowercase: bool,
    /// Sparse `index:value` file to write; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub(crate) fn vectorize(a: VectorizeArgs) -> Result<()> {
    let mode: BowMode = a.bow.parse().map_err(|e| CliError::usage(format!("--bow: {e}")))?;
    let vocab = read_vocab(&a.vocab, DEFAULT_MIN_COUNT)?;
    let vecs: Vec<SparseVector> =
        read_documents(&a.input, !a.no_lowercase)?.iter().map(|d| bow(&vocab, d, mode)).collect();
    write_sparse(a.out.as_deref(), &vecs)
}

#[derive(Debug, Args, Serialize)]
pub(crate) struct SynthArgs {
    /// Number of views; the last one is the pivot.
    #[arg(long, default_value_t = 3)]
    views: usize,
    #[arg(long, default_value_t = 4)]
    latent_dim: usize,
    /// Comma-separated dim per view.
    #[arg(long, value_delimiter = ',', default_value = "20,20,20")]
    view_dims: Vec<usize>,
    #[arg(long, default_value_t = 2000)]
    n_per_pair: usize,
    #[arg(long, default_value_t = 200)]
    n_valid: usize,
    #[arg(long, default_value_t = 200)]
    n_test: usize,
    #[arg(long, default_value_t = 0.1)]
    noise: f64,
    /// random or identity.
    #[arg(long, default_value = "random")]
    mixing: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory to write the dataset into; created if missing.
    #[arg(long)]
    out_dir: PathBuf,
}

/// Files, relative to the output directory:
///
/// * `train_vJ.tsv` / `train_vJ_pivot.tsv`: aligned training pairs of view J,
///   ids `eN` naming the entity.
/// * `valid_vJ.tsv` / `valid_vJ_pivot.tsv`: held-out pairs, same layout.
/// * `test_vJ.tsv` for every view, ids `tN`, plus `test_relevance.tsv`
///   relating each test entity to itself.
/// * `manifest.json` describing all of the above.
pub(crate) fn synth(a: SynthArgs) -> Result<()> {
    let mixing = match a.mixing.as_str() {
        "random" => Mixing::Random,
        "identity" => Mixing::Identity,
        other => return usage(format!("--mixing: expected random or identity, got {other:?}")),
    };
    let cfg = SynthConfig {
        views: a.views,
        latent_dim: a.latent_dim,
        view_dims: a.view_dims.clone(),
        n_per_pair: a.n_per_pair,
        n_valid_per_pair: a.n_valid,
        n_test: a.n_test,
        noise_sigma: a.noise,
        mixing,
    };
    if !(a.noise >= 0.0 && a.noise.is_finite()) {
        return usage(format!("--noise must be >= 0, got {}", a.noise));
    }
    let data = synth_multiview(&mut Rng::new(a.seed), &cfg).map_err(|e| CliError::usage(e.to_string()))?;
    fs::create_dir_all(&a.out_dir).map_err(|e| at(&a.out_dir, e))?;
    let pivot = data.pivot();
    let file = |name: String| a.out_dir.join(name);
    let mut pairs = Vec::new();
    for (j, set) in data.sets.iter().enumerate() {
        let ids: Vec<String> = data.set_entities[j].iter().map(|e| format!("e{e}")).collect();
        let left: Vec<_> = set.pairs.iter().map(|p| p.left.to_dense()).collect();
        let right: Vec<_> = set.pairs.iter().map(|p| p.right.to_dense()).collect();
        write_dense(Some(&file(format!("train_v{j}.tsv"))), Some(&ids), &left)?;
        write_dense(Some(&file(format!("train_v{j}_pivot.tsv"))), Some(&ids), &right)?;
        let valid = &data.validation[j];
        let vids: Vec<String> = (0..valid.len()).map(|i| format!("v{j}_{i}")).collect();
        let vl: Vec<_> = valid.pairs.iter().map(|p| p.left.to_dense()).collect();
        let vr: Vec<_> = valid.pairs.iter().map(|p| p.right.to_dense()).collect();
        write_dense(Some(&file(format!("valid_v{j}.tsv"))), Some(&vids), &vl)?;
        write_dense(Some(&file(format!("valid_v{j}_pivot.tsv"))), Some(&vids), &vr)?;
        pairs.push(json!({
            "view": format!("v{j}"),
            "train": [format!("train_v{j}_pivot.tsv"), format!("train_v{j}.tsv")],
            "valid": [format!("valid_v{j}_pivot.tsv"), format!("valid_v{j}.tsv")],
            "n_train": set.len(),
            "n_valid": valid.len(),
        }));
    }
    let tids: Vec<String> = (0..data.test.len()).map(|i| format!("t{i}")).collect();
    for v in 0..cfg.views {
        let rows: Vec<_> = data.test.iter().map(|e| e.views[v].clone()).collect();
        write_dense(Some(&file(format!("test_v{v}.tsv"))), Some(&tids), &rows)?;
    }
    let rel: String = tids.iter().map(|t| format!("{t}\t{t}\n")).collect();
    write_text(&file("test_relevance.tsv".into()), &rel)?;
    let manifest = json!({
        "seed": a.seed,
        "views": (0..cfg.views).map(|v| json!({"name": format!("v{v}"), "dim": cfg.view_dims[v]})).collect::<Vec<_>>(),
        "pivot": format!("v{pivot}"),
        "latent_dim": cfg.latent_dim,
        "noise": cfg.noise_sigma,
        "mixing": a.mixing,
        "pairs": pairs,
        "test": (0..cfg.views).map(|v| format!("test_v{v}.tsv")).collect::<Vec<_>>(),
        "test_relevance": "test_relevance.tsv",
        "n_test": data.test.len(),
    });
    let text = serde_json::to_string_pretty(&manifest).expect("plain data") + "\n";
    write_text(&file("manifest.json".into()), &text)
}
