//! Training objective for one homogeneous minibatch and its exact gradient.
//!
//! For a batch of pairs `(x_i, y_i)` drawn from one pair set (views `l` and
//! `r`, `r` normally the pivot):
//!
//! ```text
//! J = sum_i [ L(z_i, g(h(x_i, y_i))) + L(z_i, g(h(x_i))) + L(z_i, g(h(y_i))) ]
//!     - lambda * corr(h(X), h(Y))
//! ```
//!
//! where `g(h) = [g_l(h), g_r(h)]`, `z_i = [x_i, y_i]` and `corr` sums the
//! per-dimension Pearson correlations of the two batches of encodings.
//!
//! Gradients flow through the batch means and variances of `corr`; nothing
//! is treated as a constant.

mod correlation;
mod gradcheck;

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{check_dim, Error, Result};
use crate::model::{tensor_list, ModelParams};
use crate::numerics::{Activation, Matrix, Vector};
use crate::trainer::Pair;

pub use correlation::{correlation, correlation_with_grad, CORR_EPS};
pub use gradcheck::{grad_check, GradCheckReport};

/// Lower/upper clamp applied to predictions inside binary cross-entropy.
pub const BCE_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum LossKind {
    #[default]
    SquaredError,
    BinaryCrossEntropy,
}

impl LossKind {
    pub fn name(self) -> &'static str {
        match self {
            LossKind::SquaredError => "squared-error",
            LossKind::BinaryCrossEntropy => "binary-cross-entropy",
        }
    }
}

impl fmt::Display for LossKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LossKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "squared-error" | "se" | "mse" => Ok(LossKind::SquaredError),
            "binary-cross-entropy" | "bce" => Ok(LossKind::BinaryCrossEntropy),
            _ => Err(Error::InvalidArgument(format!("unknown loss {s:?}"))),
        }
    }
}

/// Reconstruction loss between a target and a prediction.
pub fn recon_loss(kind: LossKind, target: &[f64], predicted: &[f64]) -> Result<f64> {
    check_dim("reconstruction", target.len(), predicted.len())?;
    if kind == LossKind::BinaryCrossEntropy {
        check_unit_targets(target)?;
    }
    Ok(loss_value(kind, target, predicted))
}

fn check_unit_targets(target: &[f64]) -> Result<()> {
    match target.iter().position(|t| !(0.0..=1.0).contains(t)) {
        Some(i) => {
            Err(Error::InvalidArgument(format!("binary cross-entropy target {} at {i} is outside [0, 1]", target[i])))
        }
        None => Ok(()),
    }
}

fn loss_value(kind: LossKind, t: &[f64], y: &[f64]) -> f64 {
    match kind {
        LossKind::SquaredError => t.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum(),
        LossKind::BinaryCrossEntropy => t
            .iter()
            .zip(y)
            .map(|(&t, &y)| {
                let y = y.clamp(BCE_CLAMP, 1.0 - BCE_CLAMP);
                -(t * libm::log(y) + (1.0 - t) * libm::log(1.0 - y))
            })
            .sum(),
    }
}

/// Largest decoder pre-activation whose sigmoid stays inside the clamp,
/// `ln((1 - c) / c)` for `c = BCE_CLAMP`.
fn bce_logit_bound() -> f64 {
    libm::log((1.0 - BCE_CLAMP) / BCE_CLAMP)
}

/// Loss of `p(o)` against `t` and its gradient with respect to `o`.
///
/// Binary cross-entropy (always paired with a sigmoid decoder) is computed
/// from the logit as `softplus(o) - t * o`, which equals the clamped
/// probability form but keeps full precision when `p(o)` is close to 0 or 1.
fn decoder_loss(kind: LossKind, p: Activation, t: &[f64], o: &[f64]) -> (f64, Vec<f64>) {
    let mut total = 0.0;
    let mut delta = Vec::with_capacity(o.len());
    match kind {
        LossKind::SquaredError => {
            for (&t, &o) in t.iter().zip(o) {
                let y = p.apply(o);
                total += (t - y) * (t - y);
                delta.push(2.0 * (y - t) * p.derivative(o));
            }
        }
        LossKind::BinaryCrossEntropy => {
            debug_assert_eq!(p, Activation::Sigmoid);
            let bound = bce_logit_bound();
            for (&t, &o) in t.iter().zip(o) {
                let oc = o.clamp(-bound, bound);
                let softplus = oc.max(0.0) + libm::log1p(libm::exp(-oc.abs()));
                total += softplus - t * oc;
                delta.push(if o.abs() < bound { p.apply(o) - t } else { 0.0 });
            }
        }
    }
    (total, delta)
}

/// Pairs from a single pair set, evaluated together.
#[derive(Debug, Clone)]
pub struct Minibatch<'a> {
    /// Non-pivot view of every pair.
    pub left: usize,
    /// Pivot view of every pair.
    pub right: usize,
    pub pairs: Vec<&'a Pair>,
}

impl<'a> Minibatch<'a> {
    pub fn new(left: usize, right: usize, pairs: Vec<&'a Pair>) -> Self {
        Minibatch { left, right, pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    fn validate(&self, params: &ModelParams, kind: LossKind) -> Result<()> {
        if self.pairs.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "minibatch needs at least 2 pairs for the correlation term, got {}",
                self.pairs.len()
            )));
        }
        if self.left == self.right {
            return Err(Error::InvalidArgument(format!("minibatch pairs view {} with itself", self.left)));
        }
        if kind == LossKind::BinaryCrossEntropy && params.p != Activation::Sigmoid {
            return Err(Error::Config("binary cross-entropy requires a sigmoid decoder activation".into()));
        }
        for pair in &self.pairs {
            params.check_input(self.left, &pair.left)?;
            params.check_input(self.right, &pair.right)?;
            if kind == LossKind::BinaryCrossEntropy {
                check_unit_targets(&pair.left.to_dense())?;
                check_unit_targets(&pair.right.to_dense())?;
            }
        }
        Ok(())
    }
}

/// Gradient of the objective with respect to every parameter tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub enc: Vec<Matrix>,
    pub bias: Vector,
    pub dec: Vec<Matrix>,
    pub dec_bias: Vec<Vector>,
}

impl Gradients {
    pub fn zeros_like(params: &ModelParams) -> Self {
        Gradients {
            enc: params.enc.iter().map(|m| Matrix::zeros(m.rows(), m.cols())).collect(),
            bias: Vector::zeros(params.k),
            dec: params.dec.iter().map(|m| Matrix::zeros(m.rows(), m.cols())).collect(),
            dec_bias: params.dec_bias.iter().map(|v| Vector::zeros(v.dim())).collect(),
        }
    }

    /// Named tensors in the same order as [`ModelParams::tensors`].
    pub fn tensors(&self) -> Vec<(String, &[f64])> {
        tensor_list(&self.enc, &self.bias, &self.dec, &self.dec_bias)
    }

    pub fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        let mut out: Vec<&mut [f64]> = Vec::new();
        out.extend(self.enc.iter_mut().map(|m| m.as_mut_slice()));
        out.push(&mut self.bias);
        out.extend(self.dec.iter_mut().map(|m| m.as_mut_slice()));
        out.extend(self.dec_bias.iter_mut().map(|v| &mut v[..]));
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.tensors().iter().flat_map(|(_, t)| t.iter()).fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Name of the first tensor holding a NaN or infinity, if any.
    pub fn first_non_finite(&self) -> Option<String> {
        self.tensors().into_iter().find(|(_, t)| t.iter().any(|x| !x.is_finite())).map(|(n, _)| n)
    }
}

/// Objective value of one minibatch.
pub fn batch_objective(params: &ModelParams, batch: &Minibatch<'_>, lambda: f64, kind: LossKind) -> Result<f64> {
    check_lambda(lambda)?;
    batch.validate(params, kind)?;
    let (l, r) = (batch.left, batch.right);
    let f = params.f;
    let mut total = 0.0;
    let mut hxs = Vec::with_capacity(batch.len());
    let mut hys = Vec::with_capacity(batch.len());
    for pair in &batch.pairs {
        let (tx, ty) = (pair.left.to_dense(), pair.right.to_dense());
        let ax = params.pre_activation(&[(l, &pair.left)]);
        let mut az = ax.clone();
        pair.right.project_acc(&params.enc[r], &mut az);
        let ay = params.pre_activation(&[(r, &pair.right)]);
        let hz = f.activate(&az);
        let hx = f.activate(&ax);
        let hy = f.activate(&ay);
        for h in [&hz, &hx, &hy] {
            total += decoder_loss(kind, params.p, &tx, &params.decode_pre(h, l)).0;
            total += decoder_loss(kind, params.p, &ty, &params.decode_pre(h, r)).0;
        }
        hxs.push(hx);
        hys.push(hy);
    }
    Ok(total - lambda * correlation(&hxs, &hys)?)
}

/// Objective value and exact gradients for one minibatch.
pub fn batch_gradients(
    params: &ModelParams,
    batch: &Minibatch<'_>,
    lambda: f64,
    kind: LossKind,
) -> Result<(f64, Gradients)> {
    batch_evaluate(params, batch, lambda, kind).map(|e| (e.objective, e.gradients))
}

/// Everything one forward/backward pass over a minibatch produces.
#[derive(Debug, Clone)]
pub struct BatchEval {
    pub objective: f64,
    /// The unscaled correlation term between the two single-view encodings.
    pub correlation: f64,
    pub gradients: Gradients,
}

/// [`batch_gradients`] plus the correlation term on its own.
pub fn batch_evaluate(params: &ModelParams, batch: &Minibatch<'_>, lambda: f64, kind: LossKind) -> Result<BatchEval> {
    check_lambda(lambda)?;
    batch.validate(params, kind)?;
    let (l, r) = (batch.left, batch.right);
    let (f, p) = (params.f, params.p);
    let k = params.k;
    let n = batch.len();
    let mut g = Gradients::zeros_like(params);
    let mut total = 0.0;

    let mut ax_all = Vec::with_capacity(n);
    let mut ay_all = Vec::with_capacity(n);
    let mut hx_all = Vec::with_capacity(n);
    let mut hy_all = Vec::with_capacity(n);
    let mut dhx_all = Vec::with_capacity(n);
    let mut dhy_all = Vec::with_capacity(n);

    for pair in &batch.pairs {
        let (tx, ty) = (pair.left.to_dense(), pair.right.to_dense());
        let ax = params.pre_activation(&[(l, &pair.left)]);
        let mut az = ax.clone();
        pair.right.project_acc(&params.enc[r], &mut az);
        let ay = params.pre_activation(&[(r, &pair.right)]);

        let mut dh_by_source: [Vec<f64>; 3] = [vec![0.0; k], vec![0.0; k], vec![0.0; k]];
        let hs = [f.activate(&az), f.activate(&ax), f.activate(&ay)];
        for (h, dh) in hs.iter().zip(dh_by_source.iter_mut()) {
            for (view, target) in [(l, &tx), (r, &ty)] {
                let (loss, delta) = decoder_loss(kind, p, target, &params.decode_pre(h, view));
                total += loss;
                g.dec[view].add_outer(&delta, h);
                for (gb, d) in g.dec_bias[view].iter_mut().zip(&delta) {
                    *gb += d;
                }
                params.dec[view].matvec_t_acc(&delta, dh);
            }
        }
        let [dhz, dhx, dhy] = dh_by_source;
        let [_, hx, hy] = hs;

        // The joint encoding does not enter the correlation term; finish it now.
        let da: Vec<f64> = dhz.iter().zip(&az).map(|(d, &a)| d * f.derivative(a)).collect();
        pair.left.outer_acc(&da, &mut g.enc[l]);
        pair.right.outer_acc(&da, &mut g.enc[r]);
        for (gb, d) in g.bias.iter_mut().zip(&da) {
            *gb += d;
        }

        ax_all.push(ax);
        ay_all.push(ay);
        hx_all.push(hx);
        hy_all.push(hy);
        dhx_all.push(dhx);
        dhy_all.push(dhy);
    }

    let (corr, dcx, dcy) = correlation_with_grad(&hx_all, &hy_all)?;
    total -= lambda * corr;

    for (i, pair) in batch.pairs.iter().enumerate() {
        for (view, input, a, dh, dc) in
            [(l, &pair.left, &ax_all[i], &dhx_all[i], &dcx[i]), (r, &pair.right, &ay_all[i], &dhy_all[i], &dcy[i])]
        {
            let da: Vec<f64> =
                dh.iter().zip(dc).zip(a).map(|((d, c), &a)| (d - lambda * c) * f.derivative(a)).collect();
            input.outer_acc(&da, &mut g.enc[view]);
            for (gb, d) in g.bias.iter_mut().zip(&da) {
                *gb += d;
            }
        }
    }
    Ok(BatchEval { objective: total, correlation: corr, gradients: g })
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda >= 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("lambda must be finite and >= 0, got {lambda}")))
    }
}

#[cfg(test)]
mod tests;
