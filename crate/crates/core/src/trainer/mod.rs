//! Minibatch scheduling, SGD updates and the epoch loop.
//!
//! Every minibatch is drawn from a single pair set, so the objective applied
//! to it always pairs the same two views. Batches from all sets are pooled
//! and shuffled once per epoch.

mod schedule;

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{Input, ModelParams, ViewSpec};
use crate::numerics::{Activation, Rng};
use crate::objective::{batch_evaluate, Gradients, LossKind, Minibatch};

pub use schedule::{make_schedule, partition, ScheduledBatch};

/// One paired observation: the same entity seen in two views.
#[derive(Debug, Clone, PartialEq)]
pub struct Pair {
    pub left: Input,
    pub right: Input,
}

impl Pair {
    pub fn new(left: impl Into<Input>, right: impl Into<Input>) -> Self {
        Pair { left: left.into(), right: right.into() }
    }
}

/// Parallel data between view `left` and view `right` (normally the pivot).
///
/// Pair sets between two non-pivot views are accepted as well; this is an
/// experimental extension and none of the reference setups use it.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSet {
    pub left: usize,
    pub right: usize,
    pub pairs: Vec<Pair>,
}

impl PairSet {
    pub fn new(left: usize, right: usize, pairs: Vec<Pair>) -> Self {
        PairSet { left, right, pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub k: usize,
    pub f: Activation,
    pub p: Activation,
    pub loss: LossKind,
    pub lambda: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
    pub shuffle: bool,
    /// Classical momentum coefficient; 0 gives plain SGD.
    pub momentum: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            k: 128,
            f: Activation::Sigmoid,
            p: Activation::Sigmoid,
            loss: LossKind::SquaredError,
            lambda: 2.0,
            batch_size: 20,
            epochs: 10,
            learning_rate: 0.01,
            seed: 0,
            shuffle: true,
            momentum: 0.0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: alloc::string::String| Err(Error::Config(msg));
        if self.k == 0 {
            return bad("k must be >= 1".into());
        }
        if self.batch_size < 2 {
            return bad(format!("batch_size must be >= 2 for the correlation term, got {}", self.batch_size));
        }
        if self.epochs == 0 {
            return bad("epochs must be >= 1".into());
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad(format!("learning_rate must be > 0, got {}", self.learning_rate));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return bad(format!("lambda must be >= 0, got {}", self.lambda));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return bad(format!("momentum must be in [0, 1), got {}", self.momentum));
        }
        if self.loss == LossKind::BinaryCrossEntropy && self.p != Activation::Sigmoid {
            return bad("binary cross-entropy requires p = sigmoid".into());
        }
        Ok(())
    }
}

/// Gradient-descent state: learning rate plus optional momentum buffers.
#[derive(Debug, Clone)]
pub struct Sgd {
    pub learning_rate: f64,
    pub momentum: f64,
    velocity: Option<Gradients>,
}

/// What one update saw before it changed the parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepStats {
    pub objective: f64,
    pub correlation: f64,
}

impl Sgd {
    pub fn new(learning_rate: f64, momentum: f64) -> Self {
        Sgd { learning_rate, momentum, velocity: None }
    }

    /// One update `theta -= lr * grad` on a minibatch. Returns the
    /// pre-update objective. Parameters are untouched if any gradient is
    /// non-finite.
    pub fn step(
        &mut self,
        params: &mut ModelParams,
        batch: &Minibatch<'_>,
        lambda: f64,
        loss: LossKind,
    ) -> Result<StepStats> {
        let eval = batch_evaluate(params, batch, lambda, loss)?;
        let grads = eval.gradients;
        if let Some(tensor) = grads.first_non_finite() {
            return Err(Error::NonFinite { tensor });
        }
        let lr = self.learning_rate;
        if self.momentum == 0.0 {
            apply(params, &grads, lr);
        } else {
            let mu = self.momentum;
            let v = self.velocity.get_or_insert_with(|| Gradients::zeros_like(params));
            for (vt, (_, gt)) in v.tensors_mut().into_iter().zip(grads.tensors()) {
                for (a, g) in vt.iter_mut().zip(gt) {
                    *a = mu * *a + g;
                }
            }
            let v = self.velocity.as_ref().expect("just set");
            apply(params, v, lr);
        }
        Ok(StepStats { objective: eval.objective, correlation: eval.correlation })
    }
}

fn apply(params: &mut ModelParams, grads: &Gradients, lr: f64) {
    for (pt, (_, gt)) in params.tensors_mut().into_iter().zip(grads.tensors()) {
        for (p, g) in pt.iter_mut().zip(gt) {
            *p -= lr * g;
        }
    }
}

/// Plain SGD step using the learning rate, `lambda` and loss in `config`.
pub fn sgd_step(params: &mut ModelParams, batch: &Minibatch<'_>, config: &TrainConfig) -> Result<f64> {
    Sgd::new(config.learning_rate, 0.0).step(params, batch, config.lambda, config.loss).map(|s| s.objective)
}

/// Per-epoch record of what each minibatch saw before its update.
#[derive(Debug, Clone, PartialEq)]
pub struct EpochTrace {
    pub epoch: usize,
    pub objectives: Vec<f64>,
    pub correlations: Vec<f64>,
}

impl EpochTrace {
    pub fn mean_objective(&self) -> f64 {
        mean(&self.objectives)
    }

    pub fn mean_correlation(&self) -> f64 {
        mean(&self.correlations)
    }
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

/// State handed to the checkpoint callback at the end of each epoch.
pub struct Checkpoint<'a> {
    pub epoch: usize,
    pub params: &'a ModelParams,
    pub trace: &'a EpochTrace,
}

impl Checkpoint<'_> {
    /// Serialized model in the binary container format.
    pub fn model_bytes(&self) -> Vec<u8> {
        self.params.save()
    }
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub params: ModelParams,
    pub traces: Vec<EpochTrace>,
}

/// Trains from scratch. Deterministic in `(views, sets, config)`.
pub fn train(views: Vec<ViewSpec>, sets: &[PairSet], config: &TrainConfig) -> Result<TrainOutcome> {
    train_with(views, sets, config, |_| {})
}

/// [`train`] with a callback after every epoch.
pub fn train_with(
    views: Vec<ViewSpec>,
    sets: &[PairSet],
    config: &TrainConfig,
    mut on_epoch: impl FnMut(&Checkpoint<'_>),
) -> Result<TrainOutcome> {
    config.validate()?;
    let mut rng = Rng::new(config.seed);
    let mut params = ModelParams::init(views, config.k, config.f, config.p, &mut rng)?;
    validate_sets(&params, sets, config.batch_size)?;
    let mut sgd = Sgd::new(config.learning_rate, config.momentum);
    let mut traces = Vec::with_capacity(config.epochs);
    for epoch in 0..config.epochs {
        let plan = if config.shuffle {
            make_schedule(&mut rng, sets, config.batch_size)?
        } else {
            partition(sets, config.batch_size)?
        };
        let mut trace = EpochTrace {
            epoch,
            objectives: Vec::with_capacity(plan.len()),
            correlations: Vec::with_capacity(plan.len()),
        };
        for sb in &plan {
            let batch = sb.minibatch(sets);
            let stats = sgd.step(&mut params, &batch, config.lambda, config.loss)?;
            trace.objectives.push(stats.objective);
            trace.correlations.push(stats.correlation);
        }
        on_epoch(&Checkpoint { epoch, params: &params, trace: &trace });
        traces.push(trace);
    }
    Ok(TrainOutcome { params, traces })
}

fn validate_sets(params: &ModelParams, sets: &[PairSet], batch_size: usize) -> Result<()> {
    if sets.is_empty() {
        return Err(Error::Config("no pair sets to train on".into()));
    }
    for (s, set) in sets.iter().enumerate() {
        if set.left == set.right {
            return Err(Error::Config(format!("pair set {s} pairs view {} with itself", set.left)));
        }
        for pair in &set.pairs {
            params.check_input(set.left, &pair.left)?;
            params.check_input(set.right, &pair.right)?;
        }
    }
    partition(sets, batch_size).map(|_| ())
}

#[derive(Debug, Clone)]
pub struct TuneOutcome {
    pub best_lambda: f64,
    /// `(lambda, score)` in grid order.
    pub scores: Vec<(f64, f64)>,
    pub best: TrainOutcome,
}

/// Trains one model per `lambda` (same seed) and keeps the best-scoring one.
///
/// Ties go to the smaller `lambda`; a NaN score never wins.
pub fn tune_lambda(
    views: &[ViewSpec],
    sets: &[PairSet],
    config: &TrainConfig,
    grid: &[f64],
    mut score: impl FnMut(&ModelParams) -> Result<f64>,
) -> Result<TuneOutcome> {
    if grid.is_empty() {
        return Err(Error::Empty("lambda grid"));
    }
    let mut scores = Vec::with_capacity(grid.len());
    let mut best: Option<(f64, f64, TrainOutcome)> = None;
    for &lambda in grid {
        let cfg = TrainConfig { lambda, ..config.clone() };
        let outcome = train(views.to_vec(), sets, &cfg)?;
        let s = score(&outcome.params)?;
        scores.push((lambda, s));
        let better = match &best {
            None => true,
            Some((bl, bs, _)) => {
                let s = if s.is_nan() { f64::NEG_INFINITY } else { s };
                s > *bs || (s == *bs && lambda < *bl)
            }
        };
        if better {
            let s = if s.is_nan() { f64::NEG_INFINITY } else { s };
            best = Some((lambda, s, outcome));
        }
    }
    let (best_lambda, _, best) = best.expect("grid is non-empty");
    Ok(TuneOutcome { best_lambda, scores, best })
}

#[cfg(test)]
mod tests;
