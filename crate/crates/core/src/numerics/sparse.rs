use alloc::format;
use alloc::vec::Vec;

use super::Matrix;
use crate::error::{Error, Result};

/// Sparse vector with strictly increasing positions and non-zero values.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseVector {
    dim: usize,
    entries: Vec<(usize, f64)>,
}

impl SparseVector {
    pub fn empty(dim: usize) -> Self {
        SparseVector { dim, entries: Vec::new() }
    }

    /// Validates ordering, bounds and finiteness. Zero values are dropped.
    pub fn new(dim: usize, entries: Vec<(usize, f64)>) -> Result<Self> {
        let mut prev: Option<usize> = None;
        for &(pos, val) in &entries {
            if pos >= dim {
                return Err(Error::InvalidArgument(format!("sparse position {pos} out of range for dim {dim}")));
            }
            if prev.is_some_and(|p| p >= pos) {
                return Err(Error::InvalidArgument(format!("sparse positions must be strictly increasing (at {pos})")));
            }
            if !val.is_finite() {
                return Err(Error::InvalidArgument(format!("non-finite sparse value at {pos}")));
            }
            prev = Some(pos);
        }
        let entries = entries.into_iter().filter(|&(_, v)| v != 0.0).collect();
        Ok(SparseVector { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = alloc::vec![0.0; self.dim];
        for &(p, v) in &self.entries {
            out[p] = v;
        }
        out
    }

    pub fn norm_sq(&self) -> f64 {
        self.entries.iter().map(|(_, v)| v * v).sum()
    }

    /// `out += m * self`, reading only the columns of the non-zeros.
    pub(crate) fn matvec_acc(&self, m: &Matrix, out: &mut [f64]) {
        debug_assert_eq!(m.cols(), self.dim);
        let cols = m.cols();
        let data = m.as_slice();
        for (r, o) in out.iter_mut().enumerate() {
            let row = &data[r * cols..(r + 1) * cols];
            *o += self.entries.iter().map(|&(p, v)| row[p] * v).sum::<f64>();
        }
    }

    /// `m += a * self^T`.
    pub(crate) fn add_outer_into(&self, a: &[f64], m: &mut Matrix) {
        let cols = m.cols();
        let data = m.as_mut_slice();
        for (r, &ar) in a.iter().enumerate() {
            if ar == 0.0 {
                continue;
            }
            let row = &mut data[r * cols..(r + 1) * cols];
            for &(p, v) in &self.entries {
                row[p] += ar * v;
            }
        }
    }
}
