use std::path::PathBuf;

use bridge_corrnet::data::DEFAULT_MIN_COUNT;
use bridge_corrnet::eval::{cross_view_transfer, nearest_words, pipeline_retrieve, retrieve, LabeledDoc, Pipeline};
use bridge_corrnet::{Input, ModelParams, Rng, ViewKind};
use clap::Args;
use serde::Serialize;

use super::views::{checked_vocab, load_embedded, load_view_inputs, read_model, view_index, TextSetup};
use super::{usage, TextArgs};
use crate::error::{at, Result};
use crate::formats::{emit, read_labeled, read_relevance, read_vocab, write_dense};
use crate::report::{f1_records, retrieval_records, to_json, Record};

#[derive(Debug, Args, Serialize)]
pub(crate) struct EncodeArgs {
    #[arg(long)]
    model: PathBuf,
    /// View the inputs belong to.
    #[arg(long)]
    view: String,
    /// Text documents (one per line) or dense features, matching the view.
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    text: TextArgs,
    /// Embedding TSV to write (id column first); stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub(crate) fn encode(a: EncodeArgs) -> Result<()> {
    let text = TextSetup::new(&a.text)?;
    let model = read_model(&a.model)?;
    let (ids, emb) = load_embedded(&model, Some(&a.view), "--view", &a.input, &text)?;
    write_dense(a.out.as_deref(), Some(&ids), &emb)
}

#[derive(Debug, Args, Serialize)]
pub(crate) struct NnArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    query_view: String,
    #[arg(long)]
    query_vocab: PathBuf,
    #[arg(long)]
    token: String,
    #[arg(long)]
    target_view: String,
    #[arg(long)]
    target_vocab: PathBuf,
    #[arg(long, default_value_t = 10)]
    top: usize,
    /// Report file; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub(crate) fn nn(a: NnArgs) -> Result<()> {
    let model = read_model(&a.model)?;
    let qv = view_index(&model, &a.query_view, "--query-view")?;
    let tv = view_index(&model, &a.target_view, "--target-view")?;
    let qvocab = read_vocab(&a.query_vocab, DEFAULT_MIN_COUNT)?;
    let tvocab = read_vocab(&a.target_vocab, DEFAULT_MIN_COUNT)?;
    let hits = nearest_words(&model, qv, &qvocab, &a.token, tv, &tvocab, a.top)?;
    let records: Vec<Record> = hits
        .into_iter()
        .enumerate()
        .map(|(rank, (tok, d))| Record::new("euclidean_distance", d).count("rank", rank + 1).count("token", tok))
        .collect();
    emit(a.out.as_deref(), &to_json(&records))
}

#[derive(Debug, Args, Serialize)]
pub(crate) struct RetrieveArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    queries: PathBuf,
    #[arg(long)]
    docs: PathBuf,
    /// `query_id<TAB>doc_id` lines.
    #[arg(long)]
    relevance: PathBuf,
    /// Comma-separated recall cutoffs.
    #[arg(long, value_delimiter = ',', default_value = "1,5,10")]
    k: Vec<usize>,
    /// View of the query file; without it the file holds embeddings.
    #[arg(long)]
    query_view: Option<String>,
    /// View of the document file; without it the file holds embeddings.
    #[arg(long)]
    doc_view: Option<String>,
    #[command(flatten)]
    text: TextArgs,
    /// Report file; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub(crate) fn retrieval(a: RetrieveArgs) -> Result<()> {
    let text = TextSetup::new(&a.text)?;
    let model = read_model(&a.model)?;
    let (qids, q) = load_embedded(&model, a.query_view.as_deref(), "--query-view", &a.queries, &text)?;
    let (dids, d) = load_embedded(&model, a.doc_view.as_deref(), "--doc-view", &a.docs, &text)?;
    let rel = read_relevance(&a.relevance, &qids, &dids)?;
    let report = retrieve(&q, &d, &rel, &a.k)?;
    emit(a.out.as_deref(), &to_json(&retrieval_records(&report)))
}

#[derive(Debug, Args, Serialize)]
pub(crate) struct PipelineArgs {
    /// Model relating the query view and the bridge view.
    #[arg(long)]
    first: PathBuf,
    /// Model relating the bridge view and the document view.
    #[arg(long)]
    second: PathBuf,
    #[arg(long)]
    query_view: String,
    /// View present in both models.
    #[arg(long)]
    bridge_view: String,
    #[arg(long)]
    doc_view: String,
    #[arg(long)]
    queries: PathBuf,
    /// Bridge-view documents used to route each query.
    #[arg(long)]
    bridge: PathBuf,
    #[arg(long)]
    docs: PathBuf,
    #[arg(long)]
    relevance: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "1,5,10")]
    k: Vec<usize>,
    #[command(flatten)]
    text: TextArgs,
    /// Report file; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub(crate) fn pipeline(a: PipelineArgs) -> Result<()> {
    let text = TextSetup::new(&a.text)?;
    let first = read_model(&a.first)?;
    let second = read_model(&a.second)?;
    let pipe = Pipeline {
        first: &first,
        first_query_view: view_index(&first, &a.query_view, "--query-view")?,
        first_bridge_view: view_index(&first, &a.bridge_view, "--bridge-view")?,
        second: &second,
        second_bridge_view: view_index(&second, &a.bridge_view, "--bridge-view")?,
        second_doc_view: view_index(&second, &a.doc_view, "--doc-view")?,
    };
    if first.views[pipe.first_bridge_view] != second.views[pipe.second_bridge_view] {
        return usage(format!("--bridge-view {}: the two models disagree on its shape", a.bridge_view));
    }
    let (qids, q) = load_view_inputs(&first, pipe.first_query_view, &a.queries, &text)?;
    let (_, b) = load_view_inputs(&first, pipe.first_bridge_view, &a.bridge, &text)?;
    let (dids, d) = load_view_inputs(&second, pipe.second_doc_view, &a.docs, &text)?;
    let rel = read_relevance(&a.relevance, &qids, &dids)?;
    let report = pipeline_retrieve(&pipe, &q, &b, &d, &rel, &a.k)?;
    emit(a.out.as_deref(), &to_json(&retrieval_records(&report)))
}

#[derive(Debug, Args, Serialize)]
pub(crate) struct ClassifyArgs {
    #[arg(long)]
    model: PathBuf,
    /// View of the labeled training documents.
    #[arg(long)]
    source_view: String,
    /// `labels<TAB>content` lines, labels comma-separated.
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    target_view: String,
    /// Test documents, same layout as --train.
    #[arg(long)]
    test: PathBuf,
    /// Number of classes; labels are 0-based indices below it.
    #[arg(long)]
    classes: usize,
    /// Perceptron epochs.
    #[arg(long, default_value_t = bridge_corrnet::eval::PERCEPTRON_EPOCHS)]
    epochs: usize,
    /// Seeds the perceptron's example order.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    text: TextArgs,
    /// Report file; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Labeled documents of `view`; dense content is tab-separated floats.
fn labeled_docs(model: &ModelParams, view: usize, path: &std::path::Path, text: &TextSetup) -> Result<Vec<LabeledDoc>> {
    let spec = &model.views[view];
    let vocab = match spec.kind {
        ViewKind::SparseBow => Some(checked_vocab(model, view, text)?),
        ViewKind::DenseFeatures => None,
    };
    read_labeled(path)?
        .into_iter()
        .enumerate()
        .map(|(i, l)| {
            let input = match &vocab {
                Some(v) => text.to_input(v, &l.content),
                None => {
                    let row = l
                        .content
                        .split('\t')
                        .map(|x| x.trim().parse::<f64>().ok().filter(|v| v.is_finite()))
                        .collect::<Option<Vec<f64>>>()
                        .filter(|r| r.len() == spec.dim)
                        .ok_or_else(|| at(path, format_args!("line {}: expected {} finite values", i + 1, spec.dim)))?;
                    Input::Dense(row.into())
                }
            };
            Ok(LabeledDoc { input, labels: l.labels })
        })
        .collect()
}

pub(crate) fn classify(a: ClassifyArgs) -> Result<()> {
    let text = TextSetup::new(&a.text)?;
    let model = read_model(&a.model)?;
    let sv = view_index(&model, &a.source_view, "--source-view")?;
    let tv = view_index(&model, &a.target_view, "--target-view")?;
    if a.classes == 0 || a.epochs == 0 {
        return usage("--classes and --epochs must be >= 1");
    }
    let source = labeled_docs(&model, sv, &a.train, &text)?;
    let target = labeled_docs(&model, tv, &a.test, &text)?;
    let report = cross_view_transfer(&model, sv, &source, tv, &target, a.classes, a.epochs, &mut Rng::new(a.seed))?;
    eprintln!("{} training and {} test documents", source.len(), target.len());
    emit(a.out.as_deref(), &to_json(&f1_records(&report)))
}
