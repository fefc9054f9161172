// The oracles below spell out every index on purpose.
#![allow(clippy::needless_range_loop)]

use super::*;
use crate::model::dense_views;
use crate::numerics::{matvec, Activation, Rng, SparseVector};
use crate::trainer::Pair;

fn random_params(rng: &mut Rng, dims: &[usize], k: usize, f: Activation, p: Activation) -> ModelParams {
    let mut m = ModelParams::zeros(dense_views(dims), k, f, p).unwrap();
    for t in m.tensors_mut() {
        for x in t.iter_mut() {
            *x = rng.uniform_range(-0.6, 0.6);
        }
    }
    m
}

fn random_vec(rng: &mut Rng, d: usize, unit: bool) -> Vec<f64> {
    (0..d).map(|_| if unit { rng.uniform() } else { rng.uniform_range(-1.5, 1.5) }).collect()
}

fn random_pairs(rng: &mut Rng, n: usize, dl: usize, dr: usize, unit: bool) -> Vec<Pair> {
    (0..n).map(|_| Pair::new(random_vec(rng, dl, unit), random_vec(rng, dr, unit))).collect()
}

fn batch(l: usize, r: usize, pairs: &[Pair]) -> Minibatch<'_> {
    Minibatch::new(l, r, pairs.iter().collect())
}

#[test]
fn recon_loss_examples() {
    let se = LossKind::SquaredError;
    let bce = LossKind::BinaryCrossEntropy;
    assert_eq!(recon_loss(se, &[0.2, -1.0], &[0.2, -1.0]).unwrap(), 0.0);
    assert_eq!(recon_loss(se, &[1.0, 0.0], &[0.0, 0.0]).unwrap(), 1.0);
    let v = recon_loss(bce, &[1.0], &[0.5]).unwrap();
    assert!((v - core::f64::consts::LN_2).abs() < 1e-15);
    // clamped rather than infinite
    assert!(recon_loss(bce, &[1.0], &[0.0]).unwrap().is_finite());
    assert!(recon_loss(se, &[1.0], &[1.0, 2.0]).is_err());
    assert!(recon_loss(bce, &[1.5], &[0.5]).is_err());
}

#[test]
fn loss_kind_parsing() {
    for k in [LossKind::SquaredError, LossKind::BinaryCrossEntropy] {
        assert_eq!(k.name().parse::<LossKind>().unwrap(), k);
    }
    assert_eq!("bce".parse::<LossKind>().unwrap(), LossKind::BinaryCrossEntropy);
    assert!("hinge".parse::<LossKind>().is_err());
}

#[test]
fn zero_params_identity_objective() {
    let m = ModelParams::zeros(dense_views(&[3, 2]), 4, Activation::Identity, Activation::Identity).unwrap();
    let pairs = [
        Pair::new(vec![1.0, -2.0, 0.5], vec![3.0, 0.0]),
        Pair::new(vec![0.0, 1.0, 1.0], vec![-1.0, 2.0]),
        Pair::new(vec![2.0, 2.0, 2.0], vec![0.5, 0.5]),
    ];
    let expected: f64 = pairs.iter().map(|p| 3.0 * (p.left.norm_sq() + p.right.norm_sq())).sum();
    let got = batch_objective(&m, &batch(0, 1, &pairs), 0.0, LossKind::SquaredError).unwrap();
    assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");
}

#[test]
fn rejects_bad_batches() {
    let mut rng = Rng::new(3);
    let m = random_params(&mut rng, &[2, 2], 2, Activation::Sigmoid, Activation::Identity);
    let pairs = random_pairs(&mut rng, 3, 2, 2, false);
    let se = LossKind::SquaredError;
    assert!(batch_objective(&m, &batch(0, 1, &pairs[..1]), 0.0, se).is_err());
    assert!(batch_objective(&m, &batch(1, 1, &pairs), 0.0, se).is_err());
    assert!(batch_objective(&m, &batch(0, 1, &pairs), -1.0, se).is_err());
    assert!(batch_objective(&m, &batch(0, 1, &pairs), f64::NAN, se).is_err());
    // BCE needs a sigmoid decoder
    assert!(matches!(
        batch_objective(&m, &batch(0, 1, &pairs), 0.0, LossKind::BinaryCrossEntropy),
        Err(Error::Config(_))
    ));
    let wrong_dim = [Pair::new(vec![1.0], vec![1.0, 1.0]), Pair::new(vec![1.0], vec![1.0, 1.0])];
    assert!(batch_objective(&m, &batch(0, 1, &wrong_dim), 0.0, se).is_err());
}

// ---- straight-line oracle ------------------------------------------------

fn act(f: Activation, x: f64) -> f64 {
    match f {
        Activation::Sigmoid => 1.0 / (1.0 + (-x).exp()),
        Activation::Tanh => x.tanh(),
        Activation::Identity => x,
        Activation::Relu => x.max(0.0),
    }
}

fn rows(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

/// `f(sum_j W_j x_j + b)` written with index loops.
fn oracle_encode(m: &ModelParams, xs: &[(usize, &[f64])]) -> Vec<f64> {
    let mut h = Vec::new();
    for u in 0..m.k {
        let mut s = m.bias[u];
        for &(j, x) in xs {
            let w = rows(&m.enc[j]);
            for (i, xi) in x.iter().enumerate() {
                s += w[u][i] * xi;
            }
        }
        h.push(act(m.f, s));
    }
    h
}

fn oracle_decode(m: &ModelParams, h: &[f64], j: usize) -> Vec<f64> {
    let w = rows(&m.dec[j]);
    (0..w.len()).map(|i| act(m.p, m.dec_bias[j][i] + (0..m.k).map(|u| w[i][u] * h[u]).sum::<f64>())).collect()
}

fn oracle_loss(kind: LossKind, t: &[f64], y: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..t.len() {
        s += match kind {
            LossKind::SquaredError => (t[i] - y[i]).powi(2),
            LossKind::BinaryCrossEntropy => {
                let q = y[i].clamp(1e-12, 1.0 - 1e-12);
                -(t[i] * q.ln() + (1.0 - t[i]) * (1.0 - q).ln())
            }
        };
    }
    s
}

fn oracle_pearson_sum(hx: &[Vec<f64>], hy: &[Vec<f64>]) -> f64 {
    let n = hx.len() as f64;
    let k = hx[0].len();
    let mut total = 0.0;
    for d in 0..k {
        let mx = hx.iter().map(|h| h[d]).sum::<f64>() / n;
        let my = hy.iter().map(|h| h[d]).sum::<f64>() / n;
        let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
        for i in 0..hx.len() {
            let (a, b) = (hx[i][d] - mx, hy[i][d] - my);
            sxy += a * b;
            sxx += a * a;
            syy += b * b;
        }
        total += sxy / (sxx * syy + CORR_EPS * CORR_EPS).sqrt();
    }
    total
}

fn oracle_objective(m: &ModelParams, l: usize, r: usize, pairs: &[Pair], lambda: f64, kind: LossKind) -> f64 {
    let mut total = 0.0;
    let mut hxs = Vec::new();
    let mut hys = Vec::new();
    for p in pairs {
        let (x, y) = (p.left.to_dense(), p.right.to_dense());
        let hz = oracle_encode(m, &[(l, &x), (r, &y)]);
        let hx = oracle_encode(m, &[(l, &x)]);
        let hy = oracle_encode(m, &[(r, &y)]);
        for h in [&hz, &hx, &hy] {
            total += oracle_loss(kind, &x, &oracle_decode(m, h, l));
            total += oracle_loss(kind, &y, &oracle_decode(m, h, r));
        }
        hxs.push(hx);
        hys.push(hy);
    }
    total - lambda * oracle_pearson_sum(&hxs, &hys)
}

#[test]
fn objective_matches_straight_line_oracle() {
    let mut rng = Rng::new(0x0b1e);
    for &(f, p, kind) in &[
        (Activation::Sigmoid, Activation::Sigmoid, LossKind::SquaredError),
        (Activation::Tanh, Activation::Identity, LossKind::SquaredError),
        (Activation::Relu, Activation::Sigmoid, LossKind::BinaryCrossEntropy),
    ] {
        let m = random_params(&mut rng, &[4, 4, 4], 3, f, p);
        let unit = kind == LossKind::BinaryCrossEntropy;
        let pairs = random_pairs(&mut rng, 5, 4, 4, unit);
        for lambda in [0.0, 2.0, 5.0] {
            for l in [0, 1] {
                let got = batch_objective(&m, &batch(l, 2, &pairs), lambda, kind).unwrap();
                let want = oracle_objective(&m, l, 2, &pairs, lambda, kind);
                assert!((got - want).abs() < 1e-10 * want.abs().max(1.0), "{got} vs {want}");
            }
        }
    }
}

#[test]
fn evaluate_agrees_with_objective() {
    let mut rng = Rng::new(12);
    let m = random_params(&mut rng, &[3, 5], 4, Activation::Tanh, Activation::Sigmoid);
    let pairs = random_pairs(&mut rng, 6, 3, 5, false);
    let b = batch(0, 1, &pairs);
    let e = batch_evaluate(&m, &b, 2.0, LossKind::SquaredError).unwrap();
    let obj = batch_objective(&m, &b, 2.0, LossKind::SquaredError).unwrap();
    assert_eq!(e.objective.to_bits(), obj.to_bits());
    let hx: Vec<Vector> = pairs.iter().map(|p| m.encode_view(0, &p.left).unwrap()).collect();
    let hy: Vec<Vector> = pairs.iter().map(|p| m.encode_view(1, &p.right).unwrap()).collect();
    assert!((e.correlation - correlation(&hx, &hy).unwrap()).abs() < 1e-14);
}

// ---- gradients -----------------------------------------------------------

#[test]
fn gradients_match_finite_differences() {
    let mut rng = Rng::new(77);
    let mut configs = 0;
    for f in Activation::ALL {
        for p in Activation::ALL {
            for kind in [LossKind::SquaredError, LossKind::BinaryCrossEntropy] {
                if kind == LossKind::BinaryCrossEntropy && p != Activation::Sigmoid {
                    continue;
                }
                for lambda in [0.0, 2.0, 5.0] {
                    let m = random_params(&mut rng, &[3, 4, 2], 3, f, p);
                    let pairs = random_pairs(&mut rng, 4, 3, 2, kind == LossKind::BinaryCrossEntropy);
                    let r = grad_check(&m, &batch(0, 2, &pairs), lambda, kind, 1e-6).unwrap();
                    assert!(r.max_rel_error < 1e-6, "{f}/{p}/{kind} lambda={lambda}: {:?}", r);
                    configs += 1;
                }
            }
        }
    }
    assert_eq!(configs, 4 * 4 * 3 + 4 * 3);
}

#[test]
fn sparse_inputs_give_same_gradients_as_dense() {
    let mut rng = Rng::new(5);
    let m = random_params(&mut rng, &[6, 3], 4, Activation::Sigmoid, Activation::Sigmoid);
    let sparse: Vec<Pair> = (0..4)
        .map(|i| {
            let x = SparseVector::new(6, vec![(i, 1.0), ((i + 2) % 6, 2.0)]).unwrap();
            Pair::new(x, random_vec(&mut rng, 3, false))
        })
        .collect();
    let dense: Vec<Pair> = sparse.iter().map(|p| Pair::new(p.left.to_dense(), p.right.clone())).collect();
    let (os, gs) = batch_gradients(&m, &batch(0, 1, &sparse), 2.0, LossKind::SquaredError).unwrap();
    let (od, gd) = batch_gradients(&m, &batch(0, 1, &dense), 2.0, LossKind::SquaredError).unwrap();
    assert!((os - od).abs() < 1e-12);
    for ((_, a), (_, b)) in gs.tensors().iter().zip(gd.tensors().iter()) {
        for (x, y) in a.iter().zip(b.iter()) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}

#[test]
fn unused_view_gets_zero_gradient() {
    let mut rng = Rng::new(8);
    let m = random_params(&mut rng, &[3, 4, 2], 3, Activation::Tanh, Activation::Identity);
    let pairs = random_pairs(&mut rng, 5, 3, 2, false);
    for lambda in [0.0, 5.0] {
        let (_, g) = batch_gradients(&m, &batch(0, 2, &pairs), lambda, LossKind::SquaredError).unwrap();
        assert_eq!(g.enc[1].max_abs(), 0.0);
        assert_eq!(g.dec[1].max_abs(), 0.0);
        assert!(g.dec_bias[1].iter().all(|&x| x == 0.0));
        assert!(g.enc[0].max_abs() > 0.0 && g.enc[2].max_abs() > 0.0);
    }

    // identical pairs: zero-variance encodings, correlation term inert
    let same = vec![pairs[0].clone(); 3];
    let (_, g) = batch_gradients(&m, &batch(0, 2, &same), 0.0, LossKind::SquaredError).unwrap();
    assert_eq!(g.enc[1].max_abs(), 0.0);
    let r = grad_check(&m, &batch(0, 2, &same), 0.0, LossKind::SquaredError, 1e-6).unwrap();
    assert!(r.max_rel_error < 1e-6, "{r:?}");
}

/// Rows of `w` made orthogonal to every vector in `span`.
fn project_out(w: &mut Matrix, span: &[Vec<f64>]) {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in span {
        let mut u = v.clone();
        for b in &basis {
            let c: f64 = u.iter().zip(b).map(|(a, b)| a * b).sum();
            u.iter_mut().zip(b).for_each(|(a, b)| *a -= c * b);
        }
        let n = u.iter().map(|a| a * a).sum::<f64>().sqrt();
        u.iter_mut().for_each(|a| *a /= n);
        basis.push(u);
    }
    for r in 0..w.rows() {
        let row = w.row_mut(r);
        for b in &basis {
            let c: f64 = row.iter().zip(b).map(|(a, b)| a * b).sum();
            row.iter_mut().zip(b).for_each(|(a, b)| *a -= c * b);
        }
    }
}

#[test]
fn exact_autoencoder_is_stationary() {
    // With identity activations the joint encoding is the sum of the two
    // single-view ones, so an exact reconstruction of all three needs a batch
    // of one repeated pair. Decoders are chosen to ignore the directions the
    // encoders write into, and the decoder biases carry the targets.
    let mut rng = Rng::new(31);
    let mut m = random_params(&mut rng, &[3, 2, 4], 5, Activation::Identity, Activation::Identity);
    let x = vec![0.3, -0.7, 1.1];
    let y = vec![2.0, 0.5, -0.25, 0.8];
    let u = matvec(&m.enc[0], &x).unwrap().into_inner();
    let v = matvec(&m.enc[2], &y).unwrap().into_inner();
    for (j, target) in [(0, &x), (2, &y)] {
        project_out(&mut m.dec[j], &[u.clone(), v.clone()]);
        let wb = matvec(&m.dec[j], &m.bias).unwrap();
        m.dec_bias[j] = target.iter().zip(wb.iter()).map(|(t, w)| t - w).collect::<Vec<_>>().into();
    }
    let pairs = vec![Pair::new(x, y); 3];
    let b = batch(0, 2, &pairs);
    let (obj, g) = batch_gradients(&m, &b, 0.0, LossKind::SquaredError).unwrap();
    assert!(obj < 1e-20, "{obj}");
    assert!(g.max_abs() < 1e-10, "{}", g.max_abs());
    let r = grad_check(&m, &b, 0.0, LossKind::SquaredError, 1e-6).unwrap();
    assert!(r.max_rel_error < 1e-6);
}

#[test]
fn grad_check_report_is_deterministic_and_validates_eps() {
    let mut rng = Rng::new(2);
    let m = random_params(&mut rng, &[2, 2], 2, Activation::Sigmoid, Activation::Sigmoid);
    let pairs = random_pairs(&mut rng, 3, 2, 2, true);
    let b = batch(0, 1, &pairs);
    let a = grad_check(&m, &b, 2.0, LossKind::BinaryCrossEntropy, 1e-6).unwrap();
    let c = grad_check(&m, &b, 2.0, LossKind::BinaryCrossEntropy, 1e-6).unwrap();
    assert_eq!(a, c);
    let total: usize = m.tensors().iter().map(|(_, t)| t.len()).sum();
    assert_eq!(a.coordinates, total);
    assert!(a.worst.is_some());
    for eps in [0.0, -1e-6, 1e-2, f64::NAN] {
        assert!(grad_check(&m, &b, 2.0, LossKind::SquaredError, eps).is_err());
    }
}

#[test]
fn rel_error_floor() {
    assert_eq!(gradcheck::rel_error(1e-9, 0.0), 1e-9);
    assert_eq!(gradcheck::rel_error(10.0, 11.0), 1.0 / 11.0);
}

// ---- two-view reduction -----------------------------------------------------

/// Classic two-view correlational autoencoder on the concatenated input
/// `z = [x, y]`: one encoder `W` (`k x (dx+dy)`), one decoder `V`
/// (`(dx+dy) x k`), single-view inputs are `z` with the other half zeroed.
struct TwoView {
    dx: usize,
    w: Vec<Vec<f64>>,
    b: Vec<f64>,
    v: Vec<Vec<f64>>,
    c: Vec<f64>,
    f: Activation,
    p: Activation,
}

struct TwoViewGrad {
    w: Vec<Vec<f64>>,
    b: Vec<f64>,
    v: Vec<Vec<f64>>,
    c: Vec<f64>,
}

fn dact(f: Activation, a: f64) -> f64 {
    match f {
        Activation::Sigmoid => {
            let s = 1.0 / (1.0 + (-a).exp());
            s * (1.0 - s)
        }
        Activation::Tanh => 1.0 - a.tanh().powi(2),
        Activation::Identity => 1.0,
        Activation::Relu => {
            if a > 0.0 {
                1.0
            } else {
                0.0
            }
        }
    }
}

impl TwoView {
    fn from_bridge(m: &ModelParams) -> Self {
        let dx = m.views[0].dim;
        let dy = m.views[1].dim;
        let w = (0..m.k).map(|u| m.enc[0].row(u).iter().chain(m.enc[1].row(u)).copied().collect()).collect();
        let v = (0..dx).map(|i| m.dec[0].row(i).to_vec()).chain((0..dy).map(|i| m.dec[1].row(i).to_vec())).collect();
        let c = m.dec_bias[0].iter().chain(m.dec_bias[1].iter()).copied().collect();
        TwoView { dx, w, b: m.bias.to_vec(), v, c, f: m.f, p: m.p }
    }

    /// Objective and gradient for squared error.
    fn eval(&self, data: &[(Vec<f64>, Vec<f64>)], lambda: f64) -> (f64, TwoViewGrad) {
        let k = self.b.len();
        let dz = self.c.len();
        let mut g =
            TwoViewGrad { w: vec![vec![0.0; dz]; k], b: vec![0.0; k], v: vec![vec![0.0; k]; dz], c: vec![0.0; dz] };
        let mut total = 0.0;
        let mut single = Vec::new(); // (zx, ax, hx, dhx, zy, ay, hy, dhy)
        for (x, y) in data {
            let z: Vec<f64> = x.iter().chain(y).copied().collect();
            let mut zx = z.clone();
            zx[self.dx..].iter_mut().for_each(|e| *e = 0.0);
            let mut zy = z.clone();
            zy[..self.dx].iter_mut().for_each(|e| *e = 0.0);
            let mut per_input = Vec::new();
            for input in [&z, &zx, &zy] {
                let a: Vec<f64> =
                    (0..k).map(|u| self.b[u] + (0..dz).map(|i| self.w[u][i] * input[i]).sum::<f64>()).collect();
                let h: Vec<f64> = a.iter().map(|&a| act(self.f, a)).collect();
                let o: Vec<f64> =
                    (0..dz).map(|i| self.c[i] + (0..k).map(|u| self.v[i][u] * h[u]).sum::<f64>()).collect();
                let out: Vec<f64> = o.iter().map(|&o| act(self.p, o)).collect();
                let mut dh = vec![0.0; k];
                for i in 0..dz {
                    total += (z[i] - out[i]).powi(2);
                    let delta = 2.0 * (out[i] - z[i]) * dact(self.p, o[i]);
                    g.c[i] += delta;
                    for u in 0..k {
                        g.v[i][u] += delta * h[u];
                        dh[u] += self.v[i][u] * delta;
                    }
                }
                per_input.push((input.clone(), a, h, dh));
            }
            let (zi, a, _, dh) = &per_input[0];
            for u in 0..k {
                let da = dh[u] * dact(self.f, a[u]);
                g.b[u] += da;
                for i in 0..dz {
                    g.w[u][i] += da * zi[i];
                }
            }
            single.push((per_input[1].clone(), per_input[2].clone()));
        }
        // correlation per hidden unit, differentiated with the quotient rule
        let n = data.len() as f64;
        for u in 0..k {
            let mx = single.iter().map(|s| s.0 .2[u]).sum::<f64>() / n;
            let my = single.iter().map(|s| s.1 .2[u]).sum::<f64>() / n;
            let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
            for s in &single {
                let (a, b) = (s.0 .2[u] - mx, s.1 .2[u] - my);
                sxy += a * b;
                sxx += a * a;
                syy += b * b;
            }
            let den = (sxx * syy + CORR_EPS * CORR_EPS).sqrt();
            total -= lambda * sxy / den;
            for s in &single {
                let (a, b) = (s.0 .2[u] - mx, s.1 .2[u] - my);
                // d/dhx of sxy/den, with d(den)/d(sxx) = syy / (2 den)
                let gx = b / den - sxy * syy * a / den.powi(3);
                let gy = a / den - sxy * sxx * b / den.powi(3);
                for ((zi, av, _, dh), gc) in [(&s.0, gx), (&s.1, gy)] {
                    let da = (dh[u] - lambda * gc) * dact(self.f, av[u]);
                    g.b[u] += da;
                    for i in 0..dz {
                        g.w[u][i] += da * zi[i];
                    }
                }
            }
        }
        (total, g)
    }
}

#[test]
fn two_view_reduction_matches_classic_formulation() {
    let mut rng = Rng::new(0x2c0);
    for inst in 0..20 {
        let f = Activation::ALL[inst % 4];
        let p = Activation::ALL[(inst / 4) % 4];
        let dx = 2 + rng.below(4);
        let dy = 2 + rng.below(4);
        let k = 1 + rng.below(5);
        let n = 2 + rng.below(5);
        let lambda = [0.0, 2.0, 5.0][inst % 3];
        let m = random_params(&mut rng, &[dx, dy], k, f, p);
        let pairs = random_pairs(&mut rng, n, dx, dy, false);
        let (obj, g) = batch_gradients(&m, &batch(0, 1, &pairs), lambda, LossKind::SquaredError).unwrap();

        let tv = TwoView::from_bridge(&m);
        let data: Vec<_> = pairs.iter().map(|p| (p.left.to_dense(), p.right.to_dense())).collect();
        let (tobj, tg) = tv.eval(&data, lambda);
        assert!((obj - tobj).abs() < 1e-10, "instance {inst}: {obj} vs {tobj}");

        let close = |a: f64, b: f64| assert!((a - b).abs() < 1e-10, "instance {inst}: {a} vs {b}");
        for u in 0..k {
            close(g.bias[u], tg.b[u]);
            for i in 0..dx {
                close(g.enc[0].get(u, i), tg.w[u][i]);
            }
            for i in 0..dy {
                close(g.enc[1].get(u, i), tg.w[u][dx + i]);
            }
        }
        for i in 0..dx + dy {
            let (j, r) = if i < dx { (0, i) } else { (1, i - dx) };
            close(g.dec_bias[j][r], tg.c[i]);
            for u in 0..k {
                close(g.dec[j].get(r, u), tg.v[i][u]);
            }
        }
    }
}

mod props {
    use super::*;
    use proptest::prelude::{any, prop_assert, proptest, ProptestConfig};

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn objective_without_correlation_is_nonnegative(seed in any::<u64>(), f in 0usize..4, p in 0usize..4) {
            let mut rng = Rng::new(seed);
            let m = random_params(&mut rng, &[3, 2], 3, Activation::ALL[f], Activation::ALL[p]);
            let pairs = random_pairs(&mut rng, 4, 3, 2, false);
            let v = batch_objective(&m, &batch(0, 1, &pairs), 0.0, LossKind::SquaredError).unwrap();
            prop_assert!(v >= 0.0);
        }

        #[test]
        fn lambda_shifts_objective_by_correlation(seed in any::<u64>(), lambda in 0.0f64..10.0) {
            let mut rng = Rng::new(seed);
            let m = random_params(&mut rng, &[3, 2], 3, Activation::Tanh, Activation::Identity);
            let pairs = random_pairs(&mut rng, 4, 3, 2, false);
            let b = batch(0, 1, &pairs);
            let e = batch_evaluate(&m, &b, lambda, LossKind::SquaredError).unwrap();
            let base = batch_objective(&m, &b, 0.0, LossKind::SquaredError).unwrap();
            prop_assert!((e.objective - (base - lambda * e.correlation)).abs() < 1e-9);
        }
    }
}
