use super::*;
use crate::data::{synth_multiview, Mixing, SynthConfig};
use crate::model::dense_views;
use crate::objective::batch_objective;
use alloc::vec;

fn small_sets(rng: &mut Rng, n: usize) -> Vec<PairSet> {
    let cfg = SynthConfig {
        views: 3,
        latent_dim: 2,
        view_dims: vec![4, 3, 5],
        n_per_pair: n,
        n_valid_per_pair: 0,
        n_test: 0,
        noise_sigma: 0.1,
        mixing: Mixing::Random,
    };
    synth_multiview(rng, &cfg).unwrap().sets
}

fn config(k: usize) -> TrainConfig {
    TrainConfig {
        k,
        f: Activation::Tanh,
        p: Activation::Identity,
        batch_size: 5,
        epochs: 3,
        learning_rate: 0.01,
        ..TrainConfig::default()
    }
}

fn full_objective(params: &ModelParams, sets: &[PairSet], cfg: &TrainConfig) -> f64 {
    partition(sets, cfg.batch_size)
        .unwrap()
        .iter()
        .map(|b| batch_objective(params, &b.minibatch(sets), cfg.lambda, cfg.loss).unwrap())
        .sum()
}

#[test]
fn default_config_values() {
    let c = TrainConfig::default();
    assert_eq!((c.k, c.batch_size, c.epochs), (128, 20, 10));
    assert!(c.shuffle);
    assert_eq!(c.momentum, 0.0);
    c.validate().unwrap();
}

#[test]
fn config_validation() {
    let ok = config(2);
    let cases = [
        TrainConfig { k: 0, ..ok.clone() },
        TrainConfig { batch_size: 1, ..ok.clone() },
        TrainConfig { epochs: 0, ..ok.clone() },
        TrainConfig { learning_rate: 0.0, ..ok.clone() },
        TrainConfig { learning_rate: f64::INFINITY, ..ok.clone() },
        TrainConfig { lambda: -0.5, ..ok.clone() },
        TrainConfig { momentum: 1.0, ..ok.clone() },
        TrainConfig { loss: LossKind::BinaryCrossEntropy, p: Activation::Identity, ..ok.clone() },
    ];
    for c in cases {
        assert!(matches!(c.validate(), Err(Error::Config(_))), "{c:?}");
    }
}

#[test]
fn zero_learning_rate_leaves_params_bitwise() {
    let mut rng = Rng::new(1);
    let sets = small_sets(&mut rng, 6);
    let mut params =
        ModelParams::init(dense_views(&[4, 3, 5]), 3, Activation::Sigmoid, Activation::Sigmoid, &mut rng).unwrap();
    let before = params.save();
    let cfg = TrainConfig { learning_rate: 0.0, ..config(3) };
    let batch = Minibatch::new(0, 2, sets[0].pairs.iter().collect());
    let obj = sgd_step(&mut params, &batch, &cfg).unwrap();
    assert!(obj.is_finite());
    assert_eq!(params.save(), before);
}

#[test]
fn single_parameter_quadratic_step() {
    // Everything zero except the decoder biases: each reconstruction is the
    // constant c_j, so J(c) = 3 * sum_i (c - x_i)^2 per view and
    // dJ/dc = 6 * sum_i (c - x_i). With x = {1, 3}, c = 0, lr = 0.1 the step
    // is c' = 0 - 0.1 * 6 * (-4) = 2.4; for y = {-2, 0.5} it is -0.9.
    let mut params = ModelParams::zeros(dense_views(&[1, 1]), 1, Activation::Identity, Activation::Identity).unwrap();
    let pairs = [Pair::new(vec![1.0], vec![-2.0]), Pair::new(vec![3.0], vec![0.5])];
    let batch = Minibatch::new(0, 1, pairs.iter().collect());
    let cfg = TrainConfig { learning_rate: 0.1, lambda: 0.0, ..config(1) };
    let obj = sgd_step(&mut params, &batch, &cfg).unwrap();
    assert!((obj - 3.0 * (1.0 + 9.0 + 4.0 + 0.25)).abs() < 1e-12);
    assert!((params.dec_bias[0][0] - 2.4).abs() < 1e-12);
    assert!((params.dec_bias[1][0] + 0.9).abs() < 1e-12);
    assert_eq!(params.enc[0].max_abs() + params.dec[0].max_abs() + params.bias[0].abs(), 0.0);
}

#[test]
fn fifty_steps_reduce_the_objective() {
    let mut rng = Rng::new(9);
    let sets = small_sets(&mut rng, 8);
    let mut params =
        ModelParams::init(dense_views(&[4, 3, 5]), 3, Activation::Tanh, Activation::Identity, &mut rng).unwrap();
    let cfg = TrainConfig { learning_rate: 0.01, lambda: 2.0, ..config(3) };
    let batch = Minibatch::new(0, 2, sets[0].pairs.iter().collect());
    let start = batch_objective(&params, &batch, cfg.lambda, cfg.loss).unwrap();
    for _ in 0..50 {
        sgd_step(&mut params, &batch, &cfg).unwrap();
    }
    let end = batch_objective(&params, &batch, cfg.lambda, cfg.loss).unwrap();
    assert!(end < start, "{end} !< {start}");
}

#[test]
fn momentum_first_step_is_plain_sgd() {
    let mut rng = Rng::new(4);
    let sets = small_sets(&mut rng, 6);
    let init =
        ModelParams::init(dense_views(&[4, 3, 5]), 2, Activation::Sigmoid, Activation::Identity, &mut rng).unwrap();
    let batch = Minibatch::new(1, 2, sets[1].pairs.iter().collect());
    let (mut a, mut b) = (init.clone(), init);
    Sgd::new(0.05, 0.0).step(&mut a, &batch, 2.0, LossKind::SquaredError).unwrap();
    let mut heavy = Sgd::new(0.05, 0.9);
    heavy.step(&mut b, &batch, 2.0, LossKind::SquaredError).unwrap();
    assert_eq!(a, b);
    // the second step carries velocity, so it differs from a plain step
    let mut c = b.clone();
    heavy.step(&mut b, &batch, 2.0, LossKind::SquaredError).unwrap();
    Sgd::new(0.05, 0.0).step(&mut c, &batch, 2.0, LossKind::SquaredError).unwrap();
    assert_ne!(b, c);
}

#[test]
fn non_finite_gradient_is_reported_and_params_kept() {
    let mut params = ModelParams::zeros(dense_views(&[2, 2]), 2, Activation::Identity, Activation::Identity).unwrap();
    params.enc[0].set(0, 0, 1e300);
    params.dec[0].set(0, 0, 1e300);
    let pairs = [Pair::new(vec![1e10, 0.0], vec![1.0, 0.0]), Pair::new(vec![-1e10, 1.0], vec![0.0, 1.0])];
    let batch = Minibatch::new(0, 1, pairs.iter().collect());
    let before = params.clone();
    let err = sgd_step(&mut params, &batch, &config(2)).unwrap_err();
    assert!(matches!(err, Error::NonFinite { .. }), "{err:?}");
    assert_eq!(params, before);
}

#[test]
fn training_is_deterministic() {
    let mut rng = Rng::new(2);
    let sets = small_sets(&mut rng, 12);
    let cfg = TrainConfig { seed: 17, ..config(3) };
    let a = train(dense_views(&[4, 3, 5]), &sets, &cfg).unwrap();
    let b = train(dense_views(&[4, 3, 5]), &sets, &cfg).unwrap();
    assert_eq!(a.params.save(), b.params.save());
    assert_eq!(a.traces, b.traces);
    let c = train(dense_views(&[4, 3, 5]), &sets, &TrainConfig { seed: 18, ..cfg }).unwrap();
    assert_ne!(a.params.save(), c.params.save());
}

#[test]
fn checkpoints_every_epoch() {
    let mut rng = Rng::new(3);
    let sets = small_sets(&mut rng, 10);
    let cfg = config(2);
    let mut seen = Vec::new();
    let out = train_with(dense_views(&[4, 3, 5]), &sets, &cfg, |cp| {
        let reloaded = ModelParams::load(&cp.model_bytes()).unwrap();
        assert_eq!(&reloaded, cp.params);
        // 10 pairs per set, batch 5: two batches per set
        assert_eq!(cp.trace.objectives.len(), 4);
        seen.push(cp.epoch);
    })
    .unwrap();
    assert_eq!(seen, [0, 1, 2]);
    assert_eq!(out.traces.len(), 3);
}

#[test]
fn training_without_correlation_descends() {
    let mut rng = Rng::new(6);
    let cfg = SynthConfig {
        views: 2,
        latent_dim: 2,
        view_dims: vec![3, 3],
        n_per_pair: 20,
        n_valid_per_pair: 0,
        n_test: 0,
        noise_sigma: 0.1,
        mixing: Mixing::Random,
    };
    let sets = synth_multiview(&mut rng, &cfg).unwrap().sets;
    let tc = TrainConfig { lambda: 0.0, epochs: 20, learning_rate: 0.01, ..config(2) };
    let views = dense_views(&[3, 3]);
    let init = ModelParams::init(views.clone(), tc.k, tc.f, tc.p, &mut Rng::new(tc.seed)).unwrap();
    let out = train(views, &sets, &tc).unwrap();
    let before = full_objective(&init, &sets, &tc);
    let after = full_objective(&out.params, &sets, &tc);
    assert!(after <= before, "{after} > {before}");
}

#[test]
fn correlation_rises_on_synthetic_views() {
    let mut rng = Rng::new(11);
    let sets = small_sets(&mut rng, 200);
    let cfg = TrainConfig { k: 4, epochs: 15, batch_size: 20, learning_rate: 0.01, lambda: 2.0, ..config(4) };
    let out = train(dense_views(&[4, 3, 5]), &sets, &cfg).unwrap();
    let first = out.traces[0].mean_correlation();
    let last = out.traces.last().unwrap().mean_correlation();
    assert!(last > first, "{last} <= {first}");
}

#[test]
fn rejects_inconsistent_sets() {
    let mut rng = Rng::new(5);
    let sets = small_sets(&mut rng, 6);
    let cfg = config(2);
    assert!(train(dense_views(&[4, 3, 5]), &[], &cfg).is_err());
    // dims do not match the declared views
    assert!(train(dense_views(&[4, 4, 5]), &sets, &cfg).is_err());
    let tiny = PairSet::new(0, 2, sets[0].pairs[..1].to_vec());
    assert!(matches!(train(dense_views(&[4, 3, 5]), &[tiny], &cfg), Err(Error::Config(_))));
    let selfpair = PairSet::new(2, 2, vec![sets[0].pairs[0].clone(); 3]);
    assert!(train(dense_views(&[4, 3, 5]), &[selfpair], &cfg).is_err());
}

#[test]
fn tune_single_element_grid() {
    let mut rng = Rng::new(7);
    let sets = small_sets(&mut rng, 6);
    let out = tune_lambda(&dense_views(&[4, 3, 5]), &sets, &config(2), &[3.5], |_| Ok(0.25)).unwrap();
    assert_eq!(out.best_lambda, 3.5);
    assert_eq!(out.scores, [(3.5, 0.25)]);
}

#[test]
fn tune_ties_pick_smallest_lambda() {
    let mut rng = Rng::new(7);
    let sets = small_sets(&mut rng, 6);
    let views = dense_views(&[4, 3, 5]);
    let out = tune_lambda(&views, &sets, &config(2), &[5.0, 0.5, 2.0], |_| Ok(1.0)).unwrap();
    assert_eq!(out.best_lambda, 0.5);
    assert_eq!(out.scores.len(), 3);

    let mut calls = 0;
    let out = tune_lambda(&views, &sets, &config(2), &[0.0, 2.0, 5.0], |_| {
        calls += 1;
        Ok(if calls == 1 { f64::NAN } else { calls as f64 })
    })
    .unwrap();
    assert_eq!(out.best_lambda, 5.0);
    // the retained model is the one trained with the winning lambda
    let direct = train(views.clone(), &sets, &TrainConfig { lambda: 5.0, ..config(2) }).unwrap();
    assert_eq!(out.best.params, direct.params);

    assert!(tune_lambda(&views, &sets, &config(2), &[], |_| Ok(0.0)).is_err());
}
