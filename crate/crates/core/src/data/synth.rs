use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{dense_views, ViewSpec};
use crate::numerics::{matvec, Matrix, Rng, Vector};
use crate::trainer::{Pair, PairSet};

/// How each view is generated from the shared latent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mixing {
    /// `A_j` has i.i.d. `N(0, 1/latent_dim)` entries.
    #[default]
    Random,
    /// `A_j = I`; every view dim must equal `latent_dim`.
    Identity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    /// Number of views `M`; the last one is the pivot.
    pub views: usize,
    pub latent_dim: usize,
    pub view_dims: Vec<usize>,
    /// Training pairs per non-pivot view.
    pub n_per_pair: usize,
    /// Held-out validation pairs per non-pivot view.
    pub n_valid_per_pair: usize,
    /// Held-out entities observed in every view.
    pub n_test: usize,
    pub noise_sigma: f64,
    pub mixing: Mixing,
}

/// A held-out entity observed in every view.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthEntity {
    pub latent: Vector,
    pub views: Vec<Vector>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthData {
    pub mixing: Vec<Matrix>,
    /// Pair set `j` pairs view `j` with the pivot.
    pub sets: Vec<PairSet>,
    /// Latents of the entities behind `sets[j].pairs[i]`.
    pub set_latents: Vec<Vec<Vector>>,
    /// Entity ids behind `sets[j].pairs[i]`; ids are never reused.
    pub set_entities: Vec<Vec<usize>>,
    pub validation: Vec<PairSet>,
    pub test: Vec<SynthEntity>,
}

impl SynthData {
    pub fn pivot(&self) -> usize {
        self.mixing.len() - 1
    }

    pub fn view_specs(&self) -> Vec<ViewSpec> {
        dense_views(&self.mixing.iter().map(|m| m.rows()).collect::<Vec<_>>())
    }

    /// Test entities as a pair set between two views.
    pub fn test_pairs(&self, left: usize, right: usize) -> PairSet {
        let pairs = self.test.iter().map(|e| Pair::new(e.views[left].clone(), e.views[right].clone())).collect();
        PairSet::new(left, right, pairs)
    }
}

/// Draws a multi-view dataset from a shared Gaussian latent.
///
/// Every entity has `s ~ N(0, I)` and view `j` observes `A_j s + sigma * e`
/// with `e ~ N(0, I)`. Draw order: the mixing matrices `A_0 .. A_{M-1}`
/// (row-major), then for each non-pivot `j` its training pairs, then for each
/// `j` its validation pairs, then the test entities. Each pair draws the
/// latent, then view `j`, then the pivot. Entities are never shared between
/// pair sets.
pub fn synth_multiview(rng: &mut Rng, cfg: &SynthConfig) -> Result<SynthData> {
    let m = cfg.views;
    if m < 2 {
        return Err(Error::Config(format!("need at least 2 views, got {m}")));
    }
    if cfg.view_dims.len() != m {
        return Err(Error::Config(format!("{} view dims given for {m} views", cfg.view_dims.len())));
    }
    if cfg.latent_dim == 0 || cfg.view_dims.contains(&0) {
        return Err(Error::Config("dimensions must be >= 1".into()));
    }
    let scale = 1.0 / libm::sqrt(cfg.latent_dim as f64);
    let mut mixing = Vec::with_capacity(m);
    for &d in &cfg.view_dims {
        mixing.push(match cfg.mixing {
            Mixing::Identity => {
                if d != cfg.latent_dim {
                    return Err(Error::Config(format!(
                        "identity mixing needs view dim {d} == latent dim {}",
                        cfg.latent_dim
                    )));
                }
                Matrix::identity(d)
            }
            Mixing::Random => {
                let data = (0..d * cfg.latent_dim).map(|_| scale * rng.normal()).collect();
                Matrix::from_vec(d, cfg.latent_dim, data)?
            }
        });
    }
    let pivot = m - 1;
    let mut next_entity = 0usize;
    let observe = |rng: &mut Rng, s: &Vector, view: usize| -> Vector {
        let mut x = matvec(&mixing[view], s).expect("shapes fixed above");
        for v in x.iter_mut() {
            *v += cfg.noise_sigma * rng.normal();
        }
        x
    };
    let latent = |rng: &mut Rng| -> Vector { (0..cfg.latent_dim).map(|_| rng.normal()).collect::<Vec<_>>().into() };

    let mut sets = Vec::with_capacity(pivot);
    let mut set_latents = Vec::with_capacity(pivot);
    let mut set_entities = Vec::with_capacity(pivot);
    for j in 0..pivot {
        let mut pairs = Vec::with_capacity(cfg.n_per_pair);
        let mut lats = Vec::with_capacity(cfg.n_per_pair);
        let mut ids = Vec::with_capacity(cfg.n_per_pair);
        for _ in 0..cfg.n_per_pair {
            let s = latent(rng);
            let x = observe(rng, &s, j);
            let y = observe(rng, &s, pivot);
            pairs.push(Pair::new(x, y));
            lats.push(s);
            ids.push(next_entity);
            next_entity += 1;
        }
        sets.push(PairSet::new(j, pivot, pairs));
        set_latents.push(lats);
        set_entities.push(ids);
    }
    let mut validation = Vec::with_capacity(pivot);
    for j in 0..pivot {
        let pairs = (0..cfg.n_valid_per_pair)
            .map(|_| {
                let s = latent(rng);
                let x = observe(rng, &s, j);
                Pair::new(x, observe(rng, &s, pivot))
            })
            .collect();
        validation.push(PairSet::new(j, pivot, pairs));
    }
    let test = (0..cfg.n_test)
        .map(|_| {
            let s = latent(rng);
            let views = (0..m).map(|v| observe(rng, &s, v)).collect();
            SynthEntity { latent: s, views }
        })
        .collect();
    Ok(SynthData { mixing, sets, set_latents, set_entities, validation, test })
}
