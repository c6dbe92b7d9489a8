//! Approximate empirical risk minimization by full-batch gradient descent on
//! the logistic surrogate `ln(1 + exp(-y net(x)))`.
//!
//! The exact 0-1 loss is recorded for every iterate of every restart and the
//! best one is returned, so the result is never worse on the sample than any
//! starting point, in particular the injected warm start.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::LabeledSample;
use crate::error::{Error, Result};
use crate::nn::{GradScratch, Layer, NetworkGradient, NeuralNetwork, Scratch};
use crate::par;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErmConfig {
    pub restarts: usize,
    pub steps: usize,
    pub initial_step: f64,
    /// Step size at iteration `t` is `initial_step / (1 + decay t)`.
    pub decay: f64,
    pub seed: u64,
}

impl Default for ErmConfig {
    fn default() -> Self {
        Self { restarts: 8, steps: 5000, initial_step: 0.1, decay: 1e-3, seed: 0 }
    }
}

/// Best iterate found and where it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct ErmResult {
    pub network: NeuralNetwork,
    /// Exact empirical 0-1 loss of `network`.
    pub empirical01: f64,
    pub restart: usize,
    pub step: usize,
}

/// Fraction of sample points with `sign(net(x)) != y`, where `sign(0) = +1`.
pub fn zero_one_loss(net: &NeuralNetwork, sample: &LabeledSample) -> f64 {
    if sample.is_empty() {
        return 0.0;
    }
    let mut scratch = Scratch::default();
    let wrong = sample
        .points
        .iter()
        .zip(&sample.labels)
        .filter(|(x, &y)| predicted(net.evaluate_scalar(x, &mut scratch)) != y)
        .count();
    wrong as f64 / sample.len() as f64
}

fn predicted(out: f64) -> i8 {
    if out >= 0.0 {
        1
    } else {
        -1
    }
}

/// Maps a `[0, 1]`-valued network to `2 net - 1` by rescaling its last layer.
pub fn to_signed_output(net: &NeuralNetwork) -> NeuralNetwork {
    let mut out = net.clone();
    let last = out.layers_mut().last_mut().expect("non-empty network");
    let (w, b) = last.params_mut();
    w.iter_mut().for_each(|v| *v *= 2.0);
    b.iter_mut().for_each(|v| *v = 2.0 * *v - 1.0);
    out
}

fn random_network<R: Rng>(arch: &[usize], rng: &mut R) -> NeuralNetwork {
    let layers = arch
        .windows(2)
        .map(|w| {
            let (cols, rows) = (w[0], w[1]);
            let scale = 1.0 / (cols as f64).sqrt();
            let weights = (0..rows * cols).map(|_| rng.gen_range(-scale..scale)).collect();
            let bias = (0..rows).map(|_| rng.gen_range(-0.1..0.1)).collect();
            Layer::new(rows, cols, weights, bias).expect("consistent shapes")
        })
        .collect();
    NeuralNetwork::new(arch[0], layers).expect("consistent shapes")
}

/// Accepts `(d, M(N + 2d + 2), M(4d + 2), M, 1)` with `M, N >= 1`.
fn check_architecture(arch: &[usize], d: usize) -> Result<()> {
    let bad = || Err(Error::Shape(format!("architecture {arch:?} is not of the classifier form for d = {d}")));
    if arch.len() != 5 || arch[0] != d || arch[4] != 1 || arch[3] == 0 {
        return bad();
    }
    let m = arch[3];
    if arch[2] != m * (4 * d + 2) || !arch[1].is_multiple_of(m) || arch[1] / m <= 2 * d + 2 {
        return bad();
    }
    Ok(())
}

/// Loss on the sample and descent from `start`, tracking the best iterate.
fn descend(
    start: NeuralNetwork,
    sample: &LabeledSample,
    config: &ErmConfig,
) -> (NeuralNetwork, usize, usize) {
    let m = sample.len();
    let mut net = start;
    let mut grad = NetworkGradient::zeros_like(&net);
    let mut scratch = GradScratch::default();
    let mut best = (usize::MAX, 0usize, net.clone());
    for step in 0..=config.steps {
        grad.fill_zero();
        let mut wrong = 0;
        for (x, &y) in sample.points.iter().zip(&sample.labels) {
            let out = net.forward_cached(x, &mut scratch)[0];
            if predicted(out) != y {
                wrong += 1;
            }
            if step < config.steps {
                // d/dout ln(1 + e^{-y out}) = -y / (1 + e^{y out})
                let yf = f64::from(y);
                let upstream = -yf / (1.0 + (yf * out).exp()) / m as f64;
                net.backward_cached(&[upstream], &mut grad, &mut scratch);
            }
        }
        if wrong < best.0 {
            best = (wrong, step, net.clone());
        }
        if wrong == 0 || step == config.steps {
            break;
        }
        let lr = config.initial_step / (1.0 + config.decay * step as f64);
        let mut finite = true;
        for (layer, (gw, gb)) in net.layers_mut().iter_mut().zip(grad.weights.iter().zip(&grad.bias)) {
            let (w, b) = layer.params_mut();
            for (p, g) in w.iter_mut().zip(gw).chain(b.iter_mut().zip(gb)) {
                *p -= lr * g;
                finite &= p.is_finite();
            }
        }
        if !finite {
            break;
        }
    }
    (best.2, best.0, best.1)
}

/// Runs `restarts` descents on the logistic surrogate and returns the iterate
/// with the smallest exact empirical 0-1 loss. Ties go to the lower restart
/// index, then the earlier step.
///
/// Restart `r` starts from a small random network drawn from stream
/// `mix(seed, r)`, except that restart 0 starts from `warm_start` when given.
pub fn approximate_erm(
    sample: &LabeledSample,
    architecture: &[usize],
    config: &ErmConfig,
    warm_start: Option<&NeuralNetwork>,
) -> Result<ErmResult> {
    if config.restarts == 0 || config.steps == 0 {
        return Err(Error::InvalidConfig("restarts and steps must be at least 1".into()));
    }
    if !(config.initial_step > 0.0 && config.decay >= 0.0) {
        return Err(Error::InvalidConfig("step size must be positive and decay nonnegative".into()));
    }
    if sample.is_empty() {
        return Err(Error::InvalidConfig("sample is empty".into()));
    }
    let d = sample.points[0].len();
    if sample.points.iter().any(|x| x.len() != d) {
        return Err(Error::Shape("sample points have different dimensions".into()));
    }
    check_architecture(architecture, d)?;
    if let Some(w) = warm_start {
        if w.architecture() != architecture {
            return Err(Error::Shape("warm start does not have the requested architecture".into()));
        }
    }
    let runs = par::map_indices(config.restarts, |r| {
        let start = match (r, warm_start) {
            (0, Some(w)) => w.clone(),
            _ => random_network(architecture, &mut par::stream_rng(config.seed, r as u64)),
        };
        descend(start, sample, config)
    });
    let (restart, (network, wrong, step)) = runs
        .into_iter()
        .enumerate()
        .min_by_key(|(r, (_, wrong, step))| (*wrong, *r, *step))
        .expect("at least one restart");
    Ok(ErmResult { network, empirical01: wrong as f64 / sample.len() as f64, restart, step })
}
