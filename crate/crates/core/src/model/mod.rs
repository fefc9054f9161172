//! Model parameters and the encode/decode maps.
//!
//! Each view `j` owns an encoder matrix `W_j` (`k x d_j`), a decoder matrix
//! `W'_j` (`d_j x k`) and a decoder bias `c_j`. The encoder bias `b` is shared
//! by every view, which is what makes a joint encoding of several views a
//! plain sum of per-view projections:
//!
//! ```text
//! h(x_j)        = f(W_j x_j + b)
//! h(x_j, x_m)   = f(W_j x_j + W_m x_m + b)
//! g_j(h)        = p(W'_j h + c_j)
//! ```

mod format;

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{check_dim, Error, Result};
use crate::numerics::{init_params, Activation, InitScheme, Matrix, Rng, SparseVector, Vector};

pub use format::{FORMAT_VERSION, MAGIC};

/// How a view's inputs are represented.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViewKind {
    SparseBow,
    DenseFeatures,
}

impl ViewKind {
    pub fn code(self) -> u8 {
        match self {
            ViewKind::SparseBow => 0,
            ViewKind::DenseFeatures => 1,
        }
    }

    pub fn from_code(c: u8) -> Option<Self> {
        match c {
            0 => Some(ViewKind::SparseBow),
            1 => Some(ViewKind::DenseFeatures),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViewSpec {
    pub name: String,
    pub dim: usize,
    pub kind: ViewKind,
    pub pivot: bool,
}

impl ViewSpec {
    pub fn new(name: impl Into<String>, dim: usize, kind: ViewKind) -> Self {
        ViewSpec { name: name.into(), dim, kind, pivot: false }
    }

    pub fn pivot(mut self) -> Self {
        self.pivot = true;
        self
    }
}

/// A single view observation: bag-of-words or dense features.
#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Sparse(SparseVector),
    Dense(Vector),
}

impl Input {
    pub fn dim(&self) -> usize {
        match self {
            Input::Sparse(s) => s.dim(),
            Input::Dense(d) => d.dim(),
        }
    }

    pub fn to_dense(&self) -> Vec<f64> {
        match self {
            Input::Sparse(s) => s.to_dense(),
            Input::Dense(d) => d.to_vec(),
        }
    }

    pub fn norm_sq(&self) -> f64 {
        match self {
            Input::Sparse(s) => s.norm_sq(),
            Input::Dense(d) => d.iter().map(|x| x * x).sum(),
        }
    }

    /// `out += m * self`.
    pub(crate) fn project_acc(&self, m: &Matrix, out: &mut [f64]) {
        match self {
            Input::Sparse(s) => s.matvec_acc(m, out),
            Input::Dense(d) => m.matvec_acc(d, out),
        }
    }

    /// `m += a * self^T`.
    pub(crate) fn outer_acc(&self, a: &[f64], m: &mut Matrix) {
        match self {
            Input::Sparse(s) => s.add_outer_into(a, m),
            Input::Dense(d) => m.add_outer(a, d),
        }
    }
}

impl From<Vector> for Input {
    fn from(v: Vector) -> Self {
        Input::Dense(v)
    }
}

impl From<Vec<f64>> for Input {
    fn from(v: Vec<f64>) -> Self {
        Input::Dense(Vector::from(v))
    }
}

impl From<SparseVector> for Input {
    fn from(v: SparseVector) -> Self {
        Input::Sparse(v)
    }
}

/// All learnable tensors plus the architecture they belong to.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub k: usize,
    pub views: Vec<ViewSpec>,
    /// Encoder matrices, `k x d_j`.
    pub enc: Vec<Matrix>,
    /// Shared encoder bias.
    pub bias: Vector,
    /// Decoder matrices, `d_j x k`.
    pub dec: Vec<Matrix>,
    pub dec_bias: Vec<Vector>,
    pub f: Activation,
    pub p: Activation,
}

impl ModelParams {
    /// All-zero parameters for the given architecture.
    pub fn zeros(views: Vec<ViewSpec>, k: usize, f: Activation, p: Activation) -> Result<Self> {
        validate_views(&views, k)?;
        Ok(ModelParams {
            k,
            enc: views.iter().map(|v| Matrix::zeros(k, v.dim)).collect(),
            bias: Vector::zeros(k),
            dec: views.iter().map(|v| Matrix::zeros(v.dim, k)).collect(),
            dec_bias: views.iter().map(|v| Vector::zeros(v.dim)).collect(),
            views,
            f,
            p,
        })
    }

    /// Random initialization: fan-scaled uniform weights, zero biases.
    ///
    /// Draw order is `W_0 .. W_{M-1}` then `W'_0 .. W'_{M-1}`.
    pub fn init(views: Vec<ViewSpec>, k: usize, f: Activation, p: Activation, rng: &mut Rng) -> Result<Self> {
        let mut m = ModelParams::zeros(views, k, f, p)?;
        for (w, v) in m.enc.iter_mut().zip(&m.views) {
            *w = init_params(rng, v.dim, k, InitScheme::UniformScaled);
        }
        for (w, v) in m.dec.iter_mut().zip(&m.views) {
            *w = init_params(rng, k, v.dim, InitScheme::UniformScaled);
        }
        Ok(m)
    }

    pub fn num_views(&self) -> usize {
        self.views.len()
    }

    pub fn pivot(&self) -> usize {
        self.views.iter().position(|v| v.pivot).expect("validated: exactly one pivot")
    }

    pub fn view_index(&self, name: &str) -> Option<usize> {
        self.views.iter().position(|v| v.name == name)
    }

    pub fn validate(&self) -> Result<()> {
        validate_views(&self.views, self.k)?;
        let m = self.views.len();
        check_dim("encoder count", m, self.enc.len())?;
        check_dim("decoder count", m, self.dec.len())?;
        check_dim("decoder bias count", m, self.dec_bias.len())?;
        check_dim("shared bias", self.k, self.bias.dim())?;
        for (j, v) in self.views.iter().enumerate() {
            check_dim("encoder rows", self.k, self.enc[j].rows())?;
            check_dim("encoder cols", v.dim, self.enc[j].cols())?;
            check_dim("decoder rows", v.dim, self.dec[j].rows())?;
            check_dim("decoder cols", self.k, self.dec[j].cols())?;
            check_dim("decoder bias", v.dim, self.dec_bias[j].dim())?;
        }
        Ok(())
    }

    pub(crate) fn check_input(&self, view: usize, x: &Input) -> Result<()> {
        let spec = self.views.get(view).ok_or(Error::UnknownView(view))?;
        check_dim("view input", spec.dim, x.dim())
    }

    /// `sum_j W_j x_j + b` without the activation.
    pub(crate) fn pre_activation(&self, xs: &[(usize, &Input)]) -> Vec<f64> {
        let mut a = self.bias.to_vec();
        for &(j, x) in xs {
            x.project_acc(&self.enc[j], &mut a);
        }
        a
    }

    pub(crate) fn decode_pre(&self, h: &[f64], view: usize) -> Vec<f64> {
        let mut o = self.dec_bias[view].to_vec();
        self.dec[view].matvec_acc(h, &mut o);
        o
    }

    /// Encodes a single view into the common space.
    pub fn encode_view(&self, view: usize, x: &Input) -> Result<Vector> {
        self.check_input(view, x)?;
        Ok(self.f.activate(&self.pre_activation(&[(view, x)])).into())
    }

    /// Encodes several distinct views jointly.
    pub fn encode_joint(&self, xs: &[(usize, &Input)]) -> Result<Vector> {
        if xs.is_empty() {
            return Err(Error::Empty("joint encoding input"));
        }
        let mut seen = BTreeSet::new();
        for &(j, x) in xs {
            if !seen.insert(j) {
                return Err(Error::DuplicateView(j));
            }
            self.check_input(j, x)?;
        }
        // Sum in view order so the result does not depend on argument order.
        let mut sorted: Vec<(usize, &Input)> = xs.to_vec();
        sorted.sort_by_key(|&(j, _)| j);
        Ok(self.f.activate(&self.pre_activation(&sorted)).into())
    }

    pub fn decode_view(&self, h: &[f64], view: usize) -> Result<Vector> {
        if view >= self.views.len() {
            return Err(Error::UnknownView(view));
        }
        check_dim("hidden vector", self.k, h.len())?;
        Ok(self.p.activate(&self.decode_pre(h, view)).into())
    }

    /// Reconstructs view `j` and the pivot from one hidden vector.
    pub fn decode_pair(&self, h: &[f64], j: usize) -> Result<(Vector, Vector)> {
        Ok((self.decode_view(h, j)?, self.decode_view(h, self.pivot())?))
    }

    /// Named views over every tensor, in container order.
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

    pub fn save(&self) -> Vec<u8> {
        format::encode(self)
    }

    pub fn load(bytes: &[u8]) -> Result<Self> {
        format::decode(bytes)
    }
}

pub(crate) fn tensor_list<'a>(
    enc: &'a [Matrix],
    bias: &'a Vector,
    dec: &'a [Matrix],
    dec_bias: &'a [Vector],
) -> Vec<(String, &'a [f64])> {
    let mut out = Vec::new();
    for (j, m) in enc.iter().enumerate() {
        out.push((format!("W[{j}]"), m.as_slice()));
    }
    out.push((String::from("b"), &bias[..]));
    for (j, m) in dec.iter().enumerate() {
        out.push((format!("W'[{j}]"), m.as_slice()));
    }
    for (j, v) in dec_bias.iter().enumerate() {
        out.push((format!("c[{j}]"), &v[..]));
    }
    out
}

fn validate_views(views: &[ViewSpec], k: usize) -> Result<()> {
    if views.len() < 2 {
        return Err(Error::Config(format!("need at least 2 views, got {}", views.len())));
    }
    if k == 0 {
        return Err(Error::Config("hidden size k must be >= 1".into()));
    }
    let pivots = views.iter().filter(|v| v.pivot).count();
    if pivots != 1 {
        return Err(Error::Config(format!("exactly one view must be the pivot, found {pivots}")));
    }
    let mut names = BTreeSet::new();
    for v in views {
        if v.dim == 0 {
            return Err(Error::Config(format!("view {:?} has dim 0", v.name)));
        }
        if !names.insert(v.name.as_str()) {
            return Err(Error::Config(format!("duplicate view name {:?}", v.name)));
        }
    }
    Ok(())
}

/// Dense views named `v0, v1, ...` with the last one as pivot.
#[doc(hidden)]
pub fn dense_views(dims: &[usize]) -> Vec<ViewSpec> {
    let last = dims.len().saturating_sub(1);
    dims.iter()
        .enumerate()
        .map(|(j, &d)| {
            let v = ViewSpec::new(format!("v{j}"), d, ViewKind::DenseFeatures);
            if j == last {
                v.pivot()
            } else {
                v
            }
        })
        .collect()
}
