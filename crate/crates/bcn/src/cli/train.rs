use std::collections::HashMap;
use std::path::{Path, PathBuf};

use bridge_corrnet::data::{vectorize, Document, Vocabulary};
use bridge_corrnet::eval::{embed_all, retrieve};
use bridge_corrnet::model::dense_views;
use bridge_corrnet::objective::{grad_check, Minibatch};
use bridge_corrnet::trainer::{train_with, tune_lambda, EpochTrace};
use bridge_corrnet::{Activation, Input, LossKind, ModelParams, Pair, PairSet, Rng, TrainConfig, ViewKind, ViewSpec};
use clap::Args;
use serde::Serialize;
use serde_json::{json, Value};

use super::views::{write_bytes, TextSetup};
use super::{usage, TextArgs};
use crate::config::{config_json, read_config, resolve, Overrides};
use crate::error::{at, CliError, Result};
use crate::formats::{emit, load_parallel, write_text, ParallelSource, Side};
use crate::report::{to_json, Record};

/// `NAME=TSV` or `NAME=PIVOT_FILE,VIEW_FILE`.
#[derive(Debug, Clone, Serialize)]
pub(crate) struct PairBinding {
    view: String,
    files: Vec<PathBuf>,
}

impl PairBinding {
    fn source(&self) -> ParallelSource {
        match self.files.as_slice() {
            [tsv] => ParallelSource::Tsv(tsv.clone()),
            [pivot, view] => ParallelSource::Aligned { view: view.clone(), pivot: pivot.clone() },
            _ => unreachable!("checked by the parser"),
        }
    }
}

fn parse_pair(s: &str) -> std::result::Result<PairBinding, String> {
    let (view, rest) = s
        .split_once('=')
        .filter(|(v, r)| !v.is_empty() && !r.is_empty())
        .ok_or_else(|| format!("expected NAME=FILE or NAME=PIVOT_FILE,VIEW_FILE, got {s:?}"))?;
    let files: Vec<PathBuf> = rest.split(',').map(PathBuf::from).collect();
    if files.len() > 2 || files.iter().any(|f| f.as_os_str().is_empty()) {
        return Err(format!("expected one TSV or two comma-separated files, got {rest:?}"));
    }
    Ok(PairBinding { view: view.to_owned(), files })
}

#[derive(Debug, Clone, Args, Serialize)]
pub(crate) struct PairArgs {
    /// Training pairs of view NAME with the pivot: a two-column TSV (pivot
    /// text, view text) or two aligned files PIVOT_FILE,VIEW_FILE. Repeatable.
    #[arg(long = "pairs", required = true, value_name = "NAME=FILES", value_parser = parse_pair)]
    pairs: Vec<PairBinding>,
    /// Name of the pivot view.
    #[arg(long)]
    pivot: String,
    /// View whose files hold dense feature rows instead of text (repeatable).
    #[arg(long = "dense", value_name = "NAME")]
    dense: Vec<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub(crate) struct TrainFlags {
    /// JSON config; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    k: Option<usize>,
    /// Encoder activation: sigmoid, tanh, identity or relu.
    #[arg(long)]
    f: Option<String>,
    /// Decoder activation.
    #[arg(long)]
    p: Option<String>,
    /// squared-error or binary-cross-entropy.
    #[arg(long)]
    loss: Option<String>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    batch_size: Option<usize>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    learning_rate: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Visit minibatches in the same order every epoch.
    #[arg(long)]
    no_shuffle: bool,
    #[arg(long)]
    momentum: Option<f64>,
}

impl TrainFlags {
    fn resolve(&self) -> Result<TrainConfig> {
        let file = self.config.as_deref().map(read_config).transpose()?;
        let cli = Overrides {
            k: self.k,
            f: self.f.clone(),
            p: self.p.clone(),
            loss: self.loss.clone(),
            lambda: self.lambda,
            batch_size: self.batch_size,
            epochs: self.epochs,
            learning_rate: self.learning_rate,
            seed: self.seed,
            no_shuffle: self.no_shuffle,
            momentum: self.momentum,
        };
        resolve(file.as_ref(), &cli)
    }
}

/// Views in first-appearance order with the pivot last, plus their pair sets.
struct Dataset {
    views: Vec<ViewSpec>,
    sets: Vec<PairSet>,
}

struct Loader<'a> {
    text: &'a TextSetup,
    dense: &'a [String],
    pivot: &'a str,
    vocabs: HashMap<String, Vocabulary>,
    dims: HashMap<String, usize>,
}

impl Loader<'_> {
    fn side(&mut self, view: &str) -> Result<Side> {
        if self.dense.iter().any(|d| d == view) {
            return Ok(Side::Dense(self.dims.get(view).copied()));
        }
        if !self.vocabs.contains_key(view) {
            let v = self.text.vocab(view)?;
            self.dims.insert(view.to_owned(), v.len());
            self.vocabs.insert(view.to_owned(), v);
        }
        Ok(Side::Text)
    }

    fn input(&mut self, view: &str, doc: Document) -> Input {
        match doc {
            Document::Tokens(t) => Input::Sparse(vectorize(&self.vocabs[view], &t, self.text.bow)),
            Document::Features(f) => {
                self.dims.entry(view.to_owned()).or_insert(f.dim());
                Input::Dense(f)
            }
        }
    }

    fn load(&mut self, bindings: &[PairBinding], order: &[String]) -> Result<Vec<PairSet>> {
        let mut sets = Vec::with_capacity(bindings.len());
        for b in bindings {
            let sides = (self.side(&b.view)?, self.side(self.pivot)?);
            let corpus = load_parallel(&b.source(), &b.view, self.pivot, sides, self.text.lowercase)?;
            let left = order.iter().position(|v| *v == b.view).expect("view listed");
            let pivot = self.pivot.to_owned();
            let pairs = corpus
                .records
                .into_iter()
                .map(|(v, p)| {
                    let x = self.input(&b.view, v);
                    let y = self.input(&pivot, p);
                    Pair::new(x, y)
                })
                .collect();
            sets.push(PairSet::new(left, order.len() - 1, pairs));
        }
        Ok(sets)
    }
}

fn view_order(p: &PairArgs) -> Result<Vec<String>> {
    let mut order: Vec<String> = Vec::new();
    for b in &p.pairs {
        if b.view == p.pivot {
            return usage(format!("--pairs {}: a view cannot pair with itself as pivot", b.view));
        }
        if !order.contains(&b.view) {
            order.push(b.view.clone());
        }
    }
    order.push(p.pivot.clone());
    for d in &p.dense {
        if !order.contains(d) {
            return usage(format!("--dense {d}: not a view named in --pairs or --pivot"));
        }
    }
    Ok(order)
}

fn check_vocab_names(text: &TextSetup, order: &[String], dense: &[String]) -> Result<()> {
    for name in text.vocab_paths.keys() {
        if !order.contains(name) || dense.contains(name) {
            return usage(format!("--vocab {name}: not a text view of this model"));
        }
    }
    Ok(())
}

fn load_training(p: &PairArgs, text: &TextSetup, valid: &[PairBinding]) -> Result<(Dataset, Vec<PairSet>)> {
    let order = view_order(p)?;
    check_vocab_names(text, &order, &p.dense)?;
    for v in valid {
        if !order.contains(&v.view) || v.view == p.pivot {
            return usage(format!("--valid {}: not a non-pivot view named in --pairs", v.view));
        }
    }
    let mut loader = Loader { text, dense: &p.dense, pivot: &p.pivot, vocabs: HashMap::new(), dims: HashMap::new() };
    let sets = loader.load(&p.pairs, &order)?;
    let valid = loader.load(valid, &order)?;
    let views = order
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let kind = if p.dense.contains(name) { ViewKind::DenseFeatures } else { ViewKind::SparseBow };
            let spec = ViewSpec::new(name.clone(), loader.dims[name], kind);
            if i + 1 == order.len() {
                spec.pivot()
            } else {
                spec
            }
        })
        .collect();
    Ok((Dataset { views, sets }, valid))
}

fn trace_json(t: &EpochTrace) -> Value {
    json!({
        "epoch": t.epoch,
        "mean_objective": t.mean_objective(),
        "mean_correlation": t.mean_correlation(),
        "objectives": t.objectives,
        "correlations": t.correlations,
    })
}

fn describe(views: &[ViewSpec], sets: &[PairSet], cfg: &TrainConfig) -> Value {
    json!({
        "resolved_config": config_json(cfg),
        "views": views.iter().map(|v| json!({
            "name": v.name,
            "dim": v.dim,
            "kind": match v.kind { ViewKind::SparseBow => "text", ViewKind::DenseFeatures => "dense" },
            "pivot": v.pivot,
        })).collect::<Vec<_>>(),
        "pairs": sets.iter().map(|s| json!({"view": views[s.left].name, "records": s.len()})).collect::<Vec<_>>(),
    })
}

#[derive(Debug, Args, Serialize)]
pub(crate) struct TrainArgs {
    #[command(flatten)]
    pairs: PairArgs,
    #[command(flatten)]
    text: TextArgs,
    #[command(flatten)]
    train: TrainFlags,
    /// Model file to write.
    #[arg(long)]
    out: PathBuf,
    /// Write `epoch-NNN.bcn` and `epoch-NNN.trace.json` here after every epoch.
    #[arg(long)]
    checkpoint_dir: Option<PathBuf>,
    /// Write the per-minibatch objective and correlation of every epoch as JSON.
    #[arg(long)]
    trace: Option<PathBuf>,
}

fn log_epoch(t: &EpochTrace, epochs: usize) {
    eprintln!(
        "epoch {}/{}: objective {:.6} correlation {:.6}",
        t.epoch + 1,
        epochs,
        t.mean_objective(),
        t.mean_correlation()
    );
}

fn write_checkpoint(dir: &Path, epoch: usize, bytes: &[u8], trace: &EpochTrace) -> Result<()> {
    write_bytes(&dir.join(format!("epoch-{epoch:03}.bcn")), bytes)?;
    let text = serde_json::to_string_pretty(&trace_json(trace)).expect("plain data") + "\n";
    write_text(&dir.join(format!("epoch-{epoch:03}.trace.json")), &text)
}

pub(crate) fn train(a: TrainArgs) -> Result<()> {
    let text = TextSetup::new(&a.text)?;
    let cfg = a.train.resolve()?;
    let (ds, _) = load_training(&a.pairs, &text, &[])?;
    eprintln!("{}", describe(&ds.views, &ds.sets, &cfg));
    if let Some(dir) = &a.checkpoint_dir {
        std::fs::create_dir_all(dir).map_err(|e| at(dir, e))?;
    }
    let mut failed: Option<CliError> = None;
    let outcome = train_with(ds.views, &ds.sets, &cfg, |cp| {
        log_epoch(cp.trace, cfg.epochs);
        if let (Some(dir), None) = (&a.checkpoint_dir, &failed) {
            failed = write_checkpoint(dir, cp.epoch, &cp.model_bytes(), cp.trace).err();
        }
    })?;
    if let Some(e) = failed {
        return Err(e);
    }
    write_bytes(&a.out, &outcome.params.save())?;
    if let Some(p) = &a.trace {
        let all: Vec<Value> = outcome.traces.iter().map(trace_json).collect();
        write_text(p, &(serde_json::to_string_pretty(&all).expect("plain data") + "\n"))?;
    }
    Ok(())
}

#[derive(Debug, Args, Serialize)]
pub(crate) struct TuneArgs {
    #[command(flatten)]
    pairs: PairArgs,
    #[command(flatten)]
    text: TextArgs,
    #[command(flatten)]
    train: TrainFlags,
    /// Validation pairs, same syntax as --pairs (repeatable).
    #[arg(long = "valid", required = true, value_name = "NAME=FILES", value_parser = parse_pair)]
    valid: Vec<PairBinding>,
    /// Comma-separated lambda values to try.
    #[arg(long, value_delimiter = ',', default_value = "0,2,5")]
    grid: Vec<f64>,
    /// Model file to write (the best one).
    #[arg(long)]
    out: PathBuf,
    /// Report file; stdout if absent.
    #[arg(long)]
    report: Option<PathBuf>,
}

/// Mean recall@1 of retrieving the pivot side of each validation pair from
/// its view side.
fn validation_recall(model: &ModelParams, valid: &[PairSet]) -> bridge_corrnet::Result<f64> {
    let mut total = 0.0;
    for set in valid {
        let left: Vec<Input> = set.pairs.iter().map(|p| p.left.clone()).collect();
        let right: Vec<Input> = set.pairs.iter().map(|p| p.right.clone()).collect();
        let q = embed_all(model, set.left, &left)?;
        let d = embed_all(model, set.right, &right)?;
        let rel: Vec<[usize; 1]> = (0..set.len()).map(|i| [i]).collect();
        total += retrieve(&q, &d, &rel, &[1])?.recall[0];
    }
    Ok(total / valid.len() as f64)
}

pub(crate) fn tune(a: TuneArgs) -> Result<()> {
    let text = TextSetup::new(&a.text)?;
    let cfg = a.train.resolve()?;
    if a.grid.iter().any(|l| !(*l >= 0.0 && l.is_finite())) {
        return usage(format!("--grid: lambda values must be >= 0, got {:?}", a.grid));
    }
    let (ds, valid) = load_training(&a.pairs, &text, &a.valid)?;
    eprintln!("{}", describe(&ds.views, &ds.sets, &cfg));
    let out = tune_lambda(&ds.views, &ds.sets, &cfg, &a.grid, |m| {
        let s = validation_recall(m, &valid)?;
        eprintln!("validation recall@1 {s:.6}");
        Ok(s)
    })?;
    write_bytes(&a.out, &out.best.params.save())?;
    let queries: usize = valid.iter().map(PairSet::len).sum();
    let mut records: Vec<Record> = out
        .scores
        .iter()
        .map(|&(l, s)| Record::new("validation_recall", s).at_k(1).count("lambda", l).count("queries", queries))
        .collect();
    records.push(Record::new("best_lambda", out.best_lambda));
    emit(a.report.as_deref(), &to_json(&records))
}

#[derive(Debug, Args, Serialize)]
pub(crate) struct GradcheckArgs {
    #[arg(long, default_value_t = 4)]
    k: usize,
    /// Comma-separated view dims; the last view is the pivot.
    #[arg(long, value_delimiter = ',', default_value = "5,6,7")]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 2.0)]
    lambda: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Pairs per checked minibatch.
    #[arg(long, default_value_t = 5)]
    batch: usize,
    #[arg(long, default_value = "sigmoid")]
    f: String,
    #[arg(long, default_value = "sigmoid")]
    p: String,
    #[arg(long, default_value = "squared-error")]
    loss: String,
    /// Central-difference step.
    #[arg(long, default_value_t = 1e-6)]
    eps: f64,
    /// Report file; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Random parameters (biases included) and one random minibatch per
/// non-pivot view; reports the worst coordinate over all of them.
pub(crate) fn gradcheck(a: GradcheckArgs) -> Result<()> {
    let parse_act =
        |flag: &str, s: &str| -> Result<Activation> { s.parse().map_err(|e| CliError::usage(format!("{flag}: {e}"))) };
    let f = parse_act("--f", &a.f)?;
    let p = parse_act("--p", &a.p)?;
    let loss: LossKind = a.loss.parse().map_err(|e| CliError::usage(format!("--loss: {e}")))?;
    if a.dims.len() < 2 || a.batch < 2 || a.k == 0 {
        return usage("need at least 2 --dims, --batch >= 2 and --k >= 1");
    }
    if loss == LossKind::BinaryCrossEntropy && p != Activation::Sigmoid {
        return usage("--loss binary-cross-entropy requires --p sigmoid");
    }
    let mut rng = Rng::new(a.seed);
    let mut params =
        ModelParams::init(dense_views(&a.dims), a.k, f, p, &mut rng).map_err(|e| CliError::usage(e.to_string()))?;
    for v in params.bias.iter_mut() {
        *v = rng.uniform_range(-0.5, 0.5);
    }
    for c in params.dec_bias.iter_mut() {
        for v in c.iter_mut() {
            *v = rng.uniform_range(-0.5, 0.5);
        }
    }
    let pivot = params.pivot();
    let mut draw = |d: usize| -> Vec<f64> {
        (0..d)
            .map(|_| match loss {
                LossKind::BinaryCrossEntropy => rng.uniform(),
                LossKind::SquaredError => rng.normal(),
            })
            .collect()
    };
    let (mut worst, mut worst_at, mut coords) = (0.0f64, String::new(), 0usize);
    for j in 0..a.dims.len() - 1 {
        let pairs: Vec<Pair> = (0..a.batch).map(|_| Pair::new(draw(a.dims[j]), draw(a.dims[pivot]))).collect();
        let batch = Minibatch::new(j, pivot, pairs.iter().collect());
        let r = grad_check(&params, &batch, a.lambda, loss, a.eps).map_err(|e| CliError::usage(e.to_string()))?;
        coords += r.coordinates;
        if r.max_rel_error >= worst {
            worst = r.max_rel_error;
            worst_at = r.worst.map(|(t, i)| format!("{t}[{i}] with view {j}")).unwrap_or_default();
        }
    }
    let rec = Record::new("max_relative_error", worst)
        .count("coordinates", coords)
        .count("pairings", a.dims.len() - 1)
        .count("worst", worst_at);
    emit(a.out.as_deref(), &to_json(&[rec]))
}
