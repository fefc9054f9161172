use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{check_dim, Error, Result};
use crate::numerics::{Rng, Vector};

/// A vector with zero or more class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledEmbedding {
    pub embedding: Vector,
    /// Sorted, deduplicated class indices.
    pub labels: Vec<usize>,
}

impl LabeledEmbedding {
    pub fn new(embedding: impl Into<Vector>, labels: impl IntoIterator<Item = usize>) -> Self {
        let mut labels: Vec<usize> = labels.into_iter().collect();
        labels.sort_unstable();
        labels.dedup();
        LabeledEmbedding { embedding: embedding.into(), labels }
    }
}

/// One-vs-rest averaged perceptron.
#[derive(Debug, Clone, PartialEq)]
pub struct PerceptronModel {
    pub classes: usize,
    pub dim: usize,
    /// Averaged weight vector per class.
    pub weights: Vec<Vector>,
    pub bias: Vec<f64>,
    pub epochs: usize,
}

/// Trains one binary averaged perceptron per class.
///
/// Examples are visited in an order reshuffled by `rng` every epoch. A class
/// is updated when `y * (w.x + b) <= 0` with `y = +1` for members and `-1`
/// otherwise. Averaging uses the usual trick: with `c` the example counter
/// (starting at 1), the returned weights are `w - u / c` where `u`
/// accumulates `c * y * x` at every update.
pub fn train_perceptron(
    train: &[LabeledEmbedding],
    classes: usize,
    epochs: usize,
    rng: &mut Rng,
) -> Result<PerceptronModel> {
    let first = train.first().ok_or(Error::Empty("perceptron training set"))?;
    let dim = first.embedding.dim();
    for ex in train {
        check_dim("perceptron example", dim, ex.embedding.dim())?;
        if let Some(&bad) = ex.labels.iter().find(|&&l| l >= classes) {
            return Err(Error::InvalidArgument(format!("label {bad} out of range for {classes} classes")));
        }
    }
    let mut w = vec![vec![0.0; dim]; classes];
    let mut b = vec![0.0; classes];
    let mut u = vec![vec![0.0; dim]; classes];
    let mut ub = vec![0.0; classes];
    let mut c = 1.0f64;
    let mut order: Vec<usize> = (0..train.len()).collect();
    for _ in 0..epochs {
        rng.shuffle(&mut order);
        for &i in &order {
            let ex = &train[i];
            let x = &ex.embedding;
            for cls in 0..classes {
                let y = if ex.labels.binary_search(&cls).is_ok() { 1.0 } else { -1.0 };
                let s = dot(&w[cls], x) + b[cls];
                if y * s <= 0.0 {
                    for ((wi, ui), xi) in w[cls].iter_mut().zip(u[cls].iter_mut()).zip(x.iter()) {
                        *wi += y * xi;
                        *ui += c * y * xi;
                    }
                    b[cls] += y;
                    ub[cls] += c * y;
                }
            }
            c += 1.0;
        }
    }
    let weights =
        w.iter().zip(&u).map(|(w, u)| w.iter().zip(u).map(|(w, u)| w - u / c).collect::<Vec<_>>().into()).collect();
    let bias = b.iter().zip(&ub).map(|(b, u)| b - u / c).collect();
    Ok(PerceptronModel { classes, dim, weights, bias, epochs })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl PerceptronModel {
    pub fn scores(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim("perceptron input", self.dim, x.len())?;
        Ok(self.weights.iter().zip(&self.bias).map(|(w, b)| dot(w, x) + b).collect())
    }

    /// Classes whose averaged score is strictly positive, ascending.
    pub fn classify(&self, x: &[f64]) -> Result<Vec<usize>> {
        Ok(self.scores(x)?.iter().enumerate().filter(|(_, &s)| s > 0.0).map(|(c, _)| c).collect())
    }
}
