use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{check_dim, Error, Result};

/// Smoothing constant of the per-dimension Pearson denominator.
///
/// Each dimension uses `sum(xc*yc) / sqrt(sum(xc^2) * sum(yc^2) + CORR_EPS^2)`,
/// so a zero-variance dimension contributes 0 and the term stays
/// differentiable. Squaring keeps the bias on well-conditioned dimensions
/// below `1e-15` relative.
pub const CORR_EPS: f64 = 1e-8;

/// Sum over hidden dimensions of the Pearson correlation between paired rows.
///
/// `hx[i]` and `hy[i]` are the encodings of the two views of sample `i`.
pub fn correlation<A: AsRef<[f64]>, B: AsRef<[f64]>>(hx: &[A], hy: &[B]) -> Result<f64> {
    let stats = Stats::new(hx, hy)?;
    Ok(stats.dims.iter().map(|d| d.corr).sum())
}

/// Correlation value and its gradient with respect to every entry of `hx`
/// and `hy`.
#[allow(clippy::type_complexity)]
pub fn correlation_with_grad<A: AsRef<[f64]>, B: AsRef<[f64]>>(
    hx: &[A],
    hy: &[B],
) -> Result<(f64, Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let stats = Stats::new(hx, hy)?;
    let n = hx.len();
    let k = stats.dims.len();
    let mut gx = vec![vec![0.0; k]; n];
    let mut gy = vec![vec![0.0; k]; n];
    for (d, s) in stats.dims.iter().enumerate() {
        let inv = 1.0 / s.denom;
        let inv3 = inv * inv * inv;
        for i in 0..n {
            let xc = hx[i].as_ref()[d] - s.mean_x;
            let yc = hy[i].as_ref()[d] - s.mean_y;
            gx[i][d] = yc * inv - s.cross * s.ss_y * xc * inv3;
            gy[i][d] = xc * inv - s.cross * s.ss_x * yc * inv3;
        }
    }
    Ok((stats.dims.iter().map(|d| d.corr).sum(), gx, gy))
}

struct DimStats {
    mean_x: f64,
    mean_y: f64,
    cross: f64,
    ss_x: f64,
    ss_y: f64,
    denom: f64,
    corr: f64,
}

struct Stats {
    dims: Vec<DimStats>,
}

impl Stats {
    fn new<A: AsRef<[f64]>, B: AsRef<[f64]>>(hx: &[A], hy: &[B]) -> Result<Self> {
        let n = hx.len();
        check_dim("correlation sample count", n, hy.len())?;
        if n < 2 {
            return Err(Error::InvalidArgument(format!("correlation needs at least 2 samples, got {n}")));
        }
        let k = hx[0].as_ref().len();
        for (x, y) in hx.iter().zip(hy) {
            check_dim("correlation row (x)", k, x.as_ref().len())?;
            check_dim("correlation row (y)", k, y.as_ref().len())?;
        }
        let nf = n as f64;
        let dims = (0..k)
            .map(|d| {
                let mean_x = hx.iter().map(|r| r.as_ref()[d]).sum::<f64>() / nf;
                let mean_y = hy.iter().map(|r| r.as_ref()[d]).sum::<f64>() / nf;
                let (mut cross, mut ss_x, mut ss_y) = (0.0, 0.0, 0.0);
                for (x, y) in hx.iter().zip(hy) {
                    let xc = x.as_ref()[d] - mean_x;
                    let yc = y.as_ref()[d] - mean_y;
                    cross += xc * yc;
                    ss_x += xc * xc;
                    ss_y += yc * yc;
                }
                let denom = libm::sqrt(ss_x * ss_y + CORR_EPS * CORR_EPS);
                DimStats { mean_x, mean_y, cross, ss_x, ss_y, denom, corr: cross / denom }
            })
            .collect();
        Ok(Stats { dims })
    }
}
