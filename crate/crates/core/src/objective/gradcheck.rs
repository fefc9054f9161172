use alloc::format;
use alloc::string::String;

use super::{batch_gradients, batch_objective, LossKind, Minibatch};
use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Outcome of comparing analytic gradients with central differences.
///
/// The per-coordinate error is `|a - n| / max(1, |a|, |n|)`: relative for
/// gradients of magnitude above one, absolute below it, so coordinates whose
/// true gradient is zero do not divide by rounding noise.
#[derive(Debug, Clone, PartialEq)]
pub struct GradCheckReport {
    pub max_rel_error: f64,
    /// Tensor name and flat index of the worst coordinate.
    pub worst: Option<(String, usize)>,
    pub analytic: f64,
    pub numeric: f64,
    pub coordinates: usize,
}

pub fn rel_error(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1.0)
}

/// Checks every coordinate of every tensor with step `eps`.
pub fn grad_check(
    params: &ModelParams,
    batch: &Minibatch<'_>,
    lambda: f64,
    kind: LossKind,
    eps: f64,
) -> Result<GradCheckReport> {
    if !(eps > 0.0 && eps <= 1e-3) {
        return Err(Error::InvalidArgument(format!("eps must be in (0, 1e-3], got {eps}")));
    }
    let (_, grads) = batch_gradients(params, batch, lambda, kind)?;
    let analytic: alloc::vec::Vec<(String, alloc::vec::Vec<f64>)> =
        grads.tensors().into_iter().map(|(n, t)| (n, t.to_vec())).collect();
    let mut probe = params.clone();
    let mut report = GradCheckReport { max_rel_error: 0.0, worst: None, analytic: 0.0, numeric: 0.0, coordinates: 0 };
    for (t, (name, grad)) in analytic.iter().enumerate() {
        for (i, &a) in grad.iter().enumerate() {
            let orig = probe.tensors_mut()[t][i];
            probe.tensors_mut()[t][i] = orig + eps;
            let plus = batch_objective(&probe, batch, lambda, kind)?;
            probe.tensors_mut()[t][i] = orig - eps;
            let minus = batch_objective(&probe, batch, lambda, kind)?;
            probe.tensors_mut()[t][i] = orig;
            let numeric = (plus - minus) / (2.0 * eps);
            let err = rel_error(a, numeric);
            report.coordinates += 1;
            if err > report.max_rel_error || report.worst.is_none() {
                report.max_rel_error = err;
                report.worst = Some((name.clone(), i));
                report.analytic = a;
                report.numeric = numeric;
            }
        }
    }
    Ok(report)
}
