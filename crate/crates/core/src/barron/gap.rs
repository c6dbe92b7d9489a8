//! Numerics showing that Fourier-type Barron norms with smoothness index one do
//! not control second derivatives.
//!
//! The family is `f_n(x) = gamma(x) cos(n pi x_1 / eps)` with a cutoff `gamma`.
//! Near the base point the cutoff is inactive, and the `L^1` norm of the second
//! derivative along the first axis over `[-2 eps, 2 eps]` grows like `n^2`,
//! while the spectral norm `∫ (1 + |xi|) |f_n^(xi)| d xi` grows only like `n`.
//! The norm is evaluated in one dimension with the Gaussian cutoff
//! `gamma(t) = exp(-t^2 / (2 s^2))`, `s = eps`, whose transform is
//! `gamma^(xi) = s / sqrt(2 pi) exp(-s^2 xi^2 / 2)` in the convention
//! `f(x) = ∫ f^(xi) e^{i x xi} d xi`.

use std::f64::consts::PI;

use serde::Serialize;

/// One row of the gap table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapRow {
    pub n: u32,
    pub second_derivative_l1: f64,
    pub fourier_norm_estimate: f64,
}

impl GapRow {
    pub fn second_derivative_over_n2(&self) -> f64 {
        self.second_derivative_l1 / (self.n as f64).powi(2)
    }

    pub fn fourier_norm_over_n(&self) -> f64 {
        self.fourier_norm_estimate / self.n as f64
    }
}

/// Nodes and weights of the `m`-point Gauss-Legendre rule on `[-1, 1]`.
pub(crate) fn gauss_legendre(m: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut deriv = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            deriv = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / deriv;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * deriv * deriv)));
    }
    out
}

/// Composite Gauss-Legendre quadrature of `f` over consecutive `breaks`.
fn integrate(f: impl Fn(f64) -> f64, breaks: &[f64], rule: &[(f64, f64)]) -> f64 {
    breaks
        .windows(2)
        .map(|w| {
            let (mid, half) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
            rule.iter().map(|&(x, wt)| wt * f(mid + half * x)).sum::<f64>() * half
        })
        .sum()
}

/// `∫_{-2 eps}^{2 eps} (n pi / eps)^2 |cos(n pi t / eps)| dt`, split at the
/// zeros of the cosine so each piece is smooth.
fn second_derivative_l1(n: u32, eps: f64) -> f64 {
    let omega = n as f64 * PI / eps;
    let rule = gauss_legendre(20);
    // zeros at t = (k + 1/2) eps / n
    let mut breaks = vec![-2.0 * eps];
    let kmax = 2 * n as i64;
    for k in -kmax - 1..=kmax {
        let t = (k as f64 + 0.5) * eps / n as f64;
        if t > -2.0 * eps && t < 2.0 * eps {
            breaks.push(t);
        }
    }
    breaks.push(2.0 * eps);
    integrate(|t| omega * omega * (omega * t).cos().abs(), &breaks, &rule)
}

/// `∫ (1 + |eta + omega|) gamma^(eta) d eta` for the Gaussian cutoff with width
/// `s`, truncated at 40 standard deviations and split at the kink.
fn fourier_norm(n: u32, eps: f64) -> f64 {
    let s = eps;
    let omega = n as f64 * PI / eps;
    let sigma = 1.0 / s;
    let density = |eta: f64| s / (2.0 * PI).sqrt() * (-0.5 * s * s * eta * eta).exp();
    let rule = gauss_legendre(32);
    let lo = -40.0 * sigma;
    let hi = 40.0 * sigma;
    let mut breaks: Vec<f64> = (0..=160).map(|i| lo + (hi - lo) * i as f64 / 160.0).collect();
    breaks.push(-omega);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    integrate(|eta| (1.0 + (eta + omega).abs()) * density(eta), &breaks, &rule)
}

/// Gap table for each `n` in `ns` at cutoff scale `eps`.
pub fn fourier_gap_demo(ns: &[u32], eps: f64) -> Vec<GapRow> {
    ns.iter()
        .map(|&n| GapRow {
            n,
            second_derivative_l1: second_derivative_l1(n, eps),
            fourier_norm_estimate: fourier_norm(n, eps),
        })
        .collect()
}
