//! Shattering by horizon sets whose boundaries are sums of Gaussian bumps.
//!
//! For `n` points `p_k = (c_k, 0, ..., 0)` with `c_k = (k - 1) / n + 1 / (2n)`
//! and any label vector `theta`, the boundary
//! `f(x') = tau sum_k (2 theta_k - 1) g_k(x')` with `g_k` a Gaussian of width
//! `sigma = 1 / (4n)` centred at `(c_k, 0, ..., 0)` puts `p_k` below the graph
//! exactly when `theta_k = 1`: at a centre the other bumps contribute at most
//! `2 sum_j e^{-8 j^2} < 1e-3`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest `n` accepted (all `2^n` labelings are enumerated).
pub const MAX_POINTS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShatteringReport {
    pub n: usize,
    pub d: usize,
    pub labelings_realized: usize,
    pub labelings_total: usize,
    /// Largest certified Barron constant over all boundaries used, on
    /// `[-1, 1]^{d-1}` with base point 0.
    pub max_barron_constant: f64,
}

/// Bump amplitude.
const TAU: f64 = 1.0;

fn centre(k: usize, n: usize) -> f64 {
    (k as f64 + 0.5) / n as f64
}

/// `f(x')` for the labeling `bits` (bit `k` is `theta_k`).
fn boundary(bits: u32, n: usize, face: &[f64]) -> f64 {
    let sigma = 0.25 / n as f64;
    (0..n)
        .map(|k| {
            let s = if bits >> k & 1 == 1 { 1.0 } else { -1.0 };
            let r2: f64 = face
                .iter()
                .enumerate()
                .map(|(i, v)| if i == 0 { (v - centre(k, n)).powi(2) } else { v * v })
                .sum();
            s * (-r2 / (2.0 * sigma * sigma)).exp()
        })
        .sum::<f64>()
        * TAU
}

/// Barron constant of one boundary with `face_dim` face coordinates.
///
/// A Gaussian bump has a positive Gaussian spectrum of total mass 1 and
/// covariance `sigma^{-2} I`, so its first moment in `|.|_{[-1,1]^D, 0} = ||.||_1`
/// is `D sqrt(2/pi) / sigma`. The constant term is `f(0)`.
fn barron_constant(bits: u32, n: usize, face_dim: usize) -> f64 {
    let sigma = 0.25 / n as f64;
    let moment = TAU * n as f64 * face_dim as f64 * (2.0 / std::f64::consts::PI).sqrt() / sigma;
    moment.max(boundary(bits, n, &vec![0.0; face_dim]).abs())
}

/// Counts the distinct label vectors produced on the `n` test points by the
/// `2^n` bump boundaries in dimension `d`.
pub fn shattering_demo(n: usize, d: usize) -> Result<ShatteringReport> {
    if n == 0 || n > MAX_POINTS {
        return Err(Error::InvalidConfig(format!("n must lie in 1..={MAX_POINTS}")));
    }
    if d < 2 {
        return Err(Error::InvalidConfig("d must be at least 2".into()));
    }
    let face_dim = d - 1;
    let mut realized = BTreeSet::new();
    let mut max_c = 0.0f64;
    for bits in 0..(1u32 << n) {
        let labels: Vec<u8> = (0..n)
            .map(|k| {
                let mut face = vec![0.0; face_dim];
                face[0] = centre(k, n);
                // test point has last coordinate 0: inside iff 0 <= f(face)
                u8::from(0.0 <= boundary(bits, n, &face))
            })
            .collect();
        realized.insert(labels);
        max_c = max_c.max(barron_constant(bits, n, face_dim));
    }
    Ok(ShatteringReport {
        n,
        d,
        labelings_realized: realized.len(),
        labelings_total: 1 << n,
        max_barron_constant: max_c,
    })
}

/// Labels of the test points for one labeling, exposed for spot checks.
pub fn shattering_labels(bits: u32, n: usize, d: usize) -> Vec<u8> {
    (0..n)
        .map(|k| {
            let mut face = vec![0.0; d - 1];
            face[0] = centre(k, n);
            u8::from(0.0 <= boundary(bits, n, &face))
        })
        .collect()
}
