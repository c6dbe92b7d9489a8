//! The estimation experiment: pick the network width from the sample size,
//! fit a fixed architecture to labelled data by approximate empirical risk
//! minimization and measure the misclassification risk.

mod shatter;
mod train;
mod width;

use serde::{Deserialize, Serialize};

use crate::classifier::{indicator_eval, synthesize_classifier, BarronBoundarySet};
use crate::error::{Error, Result};
use crate::measure::{disagreement_probability, Estimate, MeasureSpec};
use crate::nn::NeuralNetwork;
use crate::par;

pub use shatter::{shattering_demo, shattering_labels, ShatteringReport, MAX_POINTS};
pub use train::{approximate_erm, to_signed_output, zero_one_loss, ErmConfig, ErmResult};
pub use width::{bound_rhs, choose_width};

/// Points with labels `+1` inside the set and `-1` outside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledSample {
    pub points: Vec<Vec<f64>>,
    pub labels: Vec<i8>,
}

impl LabeledSample {
    pub fn new(points: Vec<Vec<f64>>, labels: Vec<i8>) -> Result<Self> {
        if points.len() != labels.len() {
            return Err(Error::Shape(format!("{} points but {} labels", points.len(), labels.len())));
        }
        if labels.iter().any(|&y| y != 1 && y != -1) {
            return Err(Error::Validation("labels must be +1 or -1".into()));
        }
        Ok(Self { points, labels })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `m` draws of `mu` labelled by membership in `omega`.
pub fn generate_dataset(omega: &BarronBoundarySet, mu: &MeasureSpec, m: usize, seed: u64) -> Result<LabeledSample> {
    if mu.dim() != omega.ambient_dim {
        return Err(Error::Shape("measure and set dimensions differ".into()));
    }
    let points = mu.sample(m, seed)?;
    let labels = points.iter().map(|x| if indicator_eval(omega, x) == 1 { 1 } else { -1 }).collect();
    LabeledSample::new(points, labels)
}

/// `P(sign(net(X)) != label(X))` with `sign(0) = +1`.
pub fn risk_estimate(
    net: &NeuralNetwork,
    omega: &BarronBoundarySet,
    mu: &MeasureSpec,
    n_mc: usize,
    seed: u64,
) -> Result<Estimate> {
    disagreement_probability(net, omega, mu, 0.0, n_mc, seed)
}

/// One row of an estimation sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErmRow {
    pub m: usize,
    pub n: usize,
    pub seed: u64,
    pub empirical01: f64,
    /// Empirical 0-1 loss of the constructive classifier used as warm start.
    pub warm_start01: f64,
    pub risk_estimate: f64,
    pub risk_half_width: f64,
    pub bound_rhs: f64,
}

/// Full estimation run for one `(m, seed)`: width from [`choose_width`], data,
/// constructive warm start, approximate ERM and a Monte-Carlo risk estimate.
///
/// Sub-seeds: the dataset uses `mix(seed, 0)`, the constructive classifier
/// `mix(seed, 1)`, the optimizer `mix(seed, 2)` and the risk estimate
/// `mix(seed, 3)`.
pub fn erm_experiment(
    omega: &BarronBoundarySet,
    mu: &MeasureSpec,
    m: usize,
    seed: u64,
    config: &ErmConfig,
    n_mc: usize,
) -> Result<ErmRow> {
    let cert = mu
        .certificate()
        .ok_or_else(|| Error::InvalidConfig("measure has no tube certificate".into()))?;
    let (b, c) = (omega.max_b().max(1.0), cert.constant.max(1.0));
    let (big_m, d) = (omega.len(), omega.ambient_dim);
    let n = choose_width(b, c, big_m, d, m as u64, cert.alpha)?;
    let sample = generate_dataset(omega, mu, m, par::mix(seed, 0))?;
    let (classifier, _) = synthesize_classifier(omega, n, crate::barron::DEFAULT_CANDIDATES, par::mix(seed, 1))?;
    let warm = to_signed_output(&classifier);
    let cfg = ErmConfig { seed: par::mix(seed, 2), ..config.clone() };
    let fit = approximate_erm(&sample, &classifier.architecture(), &cfg, Some(&warm))?;
    let risk = risk_estimate(&fit.network, omega, mu, n_mc, par::mix(seed, 3))?;
    Ok(ErmRow {
        m,
        n,
        seed,
        empirical01: fit.empirical01,
        warm_start01: zero_one_loss(&warm, &sample),
        risk_estimate: risk.estimate,
        risk_half_width: risk.half_width,
        bound_rhs: bound_rhs(b, c, big_m, d, m as u64, cert.alpha),
    })
}
