//! Monte-Carlo estimators over a [`MeasureSpec`].
//!
//! Draws are split into chunks of [`par::CHUNK`] points; chunk `j` uses RNG
//! stream `mix(seed, j)` and partial sums are added in chunk order, so the
//! estimates do not depend on how many workers ran.

use serde::Serialize;

use super::MeasureSpec;
use crate::classifier::{indicator_eval, BarronBoundarySet};
use crate::error::{Error, Result};
use crate::nn::{NeuralNetwork, Scratch};
use crate::par;

/// Normal quantile for a two-sided 95% interval.
const Z95: f64 = 1.959_963_984_540_054;

/// A point estimate with the half-width of a 95% interval around it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub estimate: f64,
    pub half_width: f64,
}

/// Wilson score interval `(lower, upper)` for `successes` out of `n`.
pub fn wilson_interval(successes: u64, n: u64) -> (f64, f64) {
    let n = n as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let spread = Z95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre - spread).max(0.0), (centre + spread).min(1.0))
}

/// Proportion estimate whose symmetric half-width covers the Wilson interval.
fn bernoulli_estimate(successes: u64, n: u64) -> Estimate {
    let p = successes as f64 / n as f64;
    let (lo, hi) = wilson_interval(successes, n);
    Estimate { estimate: p, half_width: (p - lo).max(hi - p) }
}

/// Sum of `f` over `n` draws of `mu`, chunked by RNG stream.
fn chunked_sum<T, F>(mu: &MeasureSpec, n: usize, seed: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&[Vec<f64>]) -> T + Sync + Send,
{
    mu.validate()?;
    if n == 0 {
        return Err(Error::InvalidConfig("sample size must be positive".into()));
    }
    par::map_chunks(n, |j, range| {
        let mut rng = par::stream_rng(seed, j as u64);
        let mut pts = Vec::with_capacity(range.len());
        mu.draw_into(&mut rng, range.len(), &mut pts)?;
        Ok(f(&pts))
    })
    .into_iter()
    .collect()
}

fn count<F>(mu: &MeasureSpec, n: usize, seed: u64, hit: F) -> Result<Estimate>
where
    F: Fn(&[f64], &mut Scratch) -> bool + Sync + Send,
{
    let parts = chunked_sum(mu, n, seed, |pts| {
        let mut scratch = Scratch::default();
        pts.iter().filter(|x| hit(x, &mut scratch)).count() as u64
    })?;
    Ok(bernoulli_estimate(parts.into_iter().sum(), n as u64))
}

/// `mu{x : |x_axis - f(x without axis)| <= eps}` with a 95% interval; `axis`
/// is 1-based.
pub fn tube_mass_estimate(
    mu: &MeasureSpec,
    f: &(dyn Fn(&[f64]) -> f64 + Sync),
    axis: usize,
    eps: f64,
    n: usize,
    seed: u64,
) -> Result<Estimate> {
    let d = mu.dim();
    if axis == 0 || axis > d {
        return Err(Error::InvalidConfig(format!("axis {axis} outside 1..={d}")));
    }
    let i = axis - 1;
    count(mu, n, seed, |x, _| {
        let face: Vec<f64> = x.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, v)| *v).collect();
        (x[i] - f(&face)).abs() <= eps
    })
}

fn check_dims(net: &NeuralNetwork, omega: &BarronBoundarySet, mu: &MeasureSpec) -> Result<()> {
    if net.input_dim() != omega.ambient_dim || mu.dim() != omega.ambient_dim || net.output_dim() != 1 {
        return Err(Error::Shape(format!(
            "network {}->{}, set dimension {}, measure dimension {} do not match",
            net.input_dim(),
            net.output_dim(),
            omega.ambient_dim,
            mu.dim()
        )));
    }
    Ok(())
}

/// `mu{x : 1_Omega(x) != [net(x) >= threshold]}` with a 95% interval.
pub fn disagreement_probability(
    net: &NeuralNetwork,
    omega: &BarronBoundarySet,
    mu: &MeasureSpec,
    threshold: f64,
    n: usize,
    seed: u64,
) -> Result<Estimate> {
    check_dims(net, omega, mu)?;
    count(mu, n, seed, |x, scratch| {
        let predicted = net.evaluate_scalar(x, scratch) >= threshold;
        predicted != (indicator_eval(omega, x) == 1)
    })
}

/// `(∫ |1_Omega - net|^p dmu)^(1/p)` with a delta-method 95% interval.
pub fn lp_error(
    net: &NeuralNetwork,
    omega: &BarronBoundarySet,
    mu: &MeasureSpec,
    p: f64,
    n: usize,
    seed: u64,
) -> Result<Estimate> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::InvalidConfig(format!("p must be >= 1, got {p}")));
    }
    check_dims(net, omega, mu)?;
    let parts = chunked_sum(mu, n, seed, |pts| {
        let mut scratch = Scratch::default();
        pts.iter().fold((0.0, 0.0), |(s, s2), x| {
            let v = (f64::from(indicator_eval(omega, x)) - net.evaluate_scalar(x, &mut scratch)).abs().powf(p);
            (s + v, s2 + v * v)
        })
    })?;
    let (s, s2) = parts.into_iter().fold((0.0, 0.0), |(a, b), (c, d)| (a + c, b + d));
    let nf = n as f64;
    let mean = s / nf;
    let var = if n > 1 { ((s2 - nf * mean * mean) / (nf - 1.0)).max(0.0) } else { 0.0 };
    let se = (var / nf).sqrt();
    let estimate = mean.powf(1.0 / p);
    let half_width = if mean > 0.0 {
        Z95 * se * mean.powf(1.0 / p - 1.0) / p
    } else {
        (Z95 * se).powf(1.0 / p)
    };
    Ok(Estimate { estimate, half_width })
}
