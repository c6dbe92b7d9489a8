//! Assembly of the three-hidden-layer classifier.
//!
//! Every patch owns a contiguous block in each hidden layer:
//!
//! * layer 1 (`N + 2d + 2` rows): `rho(x_i)`, `rho(-x_i)` for every axis, then
//!   `N` neurons of the shallow boundary approximant (zero padded), then
//!   `rho(sign x_axis)` and `rho(-sign x_axis)`;
//! * layer 2 (`4d + 2` rows): four ramp neurons per axis reading `x_i` back from
//!   the pass-through pair, then `psi_1 = rho(g)` and `psi_2 = rho(g - delta)`
//!   where `g = f_approx(x') - sign x_axis`;
//! * layer 3 (one row): `rho(sum ramps / eps + (psi_1 - psi_2) / delta - d)`.
//!
//! The output neuron sums the patch neurons.

use serde::{Deserialize, Serialize};

use super::gadgets::{check_localization, ramp_offsets};
use super::{BarronBoundarySet, HorizonPatch};
use crate::barron::{default_validation_grid, synthesize_shallow, ShallowSynthesis};
use crate::error::{Error, Result};
use crate::nn::{Layer, NeuralNetwork};
use crate::par;

/// Actual size of a built classifier next to the guaranteed bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierBuildReport {
    pub architecture: Vec<usize>,
    pub num_neurons: usize,
    pub num_nonzero_weights: usize,
    pub max_abs_weight: f64,
    pub bound_architecture: Vec<usize>,
    pub bound_neurons: usize,
    pub bound_weights: usize,
    pub bound_magnitude: f64,
    pub small_rectangle_flags: Vec<bool>,
}

struct PatchPlan {
    small: bool,
    inner: Option<ShallowSynthesis>,
    eps: f64,
}

fn plan_patch(patch: &HorizonPatch, d: usize, n: usize, k: usize, seed: u64) -> Result<PatchPlan> {
    let gamma = patch.constant_b * ((d - 1) as f64).sqrt();
    let eps = gamma / (n as f64).sqrt();
    if patch.rectangle.min_side() < 2.0 * eps {
        return Ok(PatchPlan { small: true, inner: None, eps });
    }
    check_localization(&patch.rectangle, eps)?;
    let spec = &patch.boundary_fn;
    let trivial = spec.atoms.iter().all(|a| a.modulus == 0.0);
    let inner = if trivial {
        None
    } else {
        let samples = n / 8;
        if samples == 0 {
            return Err(Error::InvalidConfig(format!(
                "N = {n} leaves no room for the boundary approximant (need N >= 8)"
            )));
        }
        let grid = default_validation_grid(&spec.domain, seed);
        Some(synthesize_shallow(spec, samples, k, seed, &grid)?)
    };
    Ok(PatchPlan { small: false, inner, eps })
}

/// Builds the classifier for `omega` with width parameter `N`.
///
/// Patch `m` draws its boundary approximant from seed `mix(seed, m)`. A patch
/// with a side shorter than `2 B sqrt(d - 1) / sqrt(N)` contributes a zero
/// block. `N < 8` is accepted only when no boundary needs a nontrivial
/// approximant.
pub fn synthesize_classifier(
    omega: &BarronBoundarySet,
    n: usize,
    k: usize,
    seed: u64,
) -> Result<(NeuralNetwork, ClassifierBuildReport)> {
    omega.validate()?;
    if n == 0 {
        return Err(Error::InvalidConfig("N must be positive".into()));
    }
    if k == 0 {
        return Err(Error::InvalidConfig("K must be at least 1".into()));
    }
    let d = omega.ambient_dim;
    let m_count = omega.len();
    // the rectangles already lie in [-R, R]^d with R the largest corner coordinate
    let radius = omega.radius();
    let plans = par::map_indices(m_count, |m| {
        plan_patch(&omega.patches[m], d, n, k, par::mix(seed, m as u64))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let w1 = n + 2 * d + 2;
    let w2 = 4 * d + 2;
    let mut l1 = Layer::zeros(m_count * w1, d);
    let mut l2 = Layer::zeros(m_count * w2, m_count * w1);
    let mut l3 = Layer::zeros(m_count, m_count * w2);
    let mut out = Layer::zeros(1, m_count);
    for (m, (patch, plan)) in omega.patches.iter().zip(&plans).enumerate() {
        out.set(0, m, 1.0);
        if plan.small {
            continue;
        }
        let (o1, o2) = (m * w1, m * w2);
        let axis = patch.axis_index();
        let sign = patch.sign_f64();
        let (eps, delta) = (plan.eps, plan.eps);

        for i in 0..d {
            l1.set(o1 + 2 * i, i, 1.0);
            l1.set(o1 + 2 * i + 1, i, -1.0);
        }
        let theta_row = o1 + 2 * d + n;
        l1.set(theta_row, axis, sign);
        l1.set(theta_row + 1, axis, -sign);

        let (psi1, psi2) = (o2 + 4 * d, o2 + 4 * d + 1);
        let offset = match &plan.inner {
            Some(s) => s.network.layers()[1].bias()[0],
            None => patch.boundary_fn.constant,
        };
        if let Some(s) = &plan.inner {
            let (hidden, outer) = (&s.network.layers()[0], &s.network.layers()[1]);
            for r in 0..hidden.rows() {
                let row = o1 + 2 * d + r;
                // face coordinates skip the patch axis
                for (c, &w) in hidden.row(r).iter().enumerate() {
                    let col = if c < axis { c } else { c + 1 };
                    l1.set(row, col, w);
                }
                l1.set_bias(row, hidden.bias()[r]);
                let w = outer.weight(0, r);
                l2.set(psi1, row, w);
                l2.set(psi2, row, w);
            }
        }
        for psi in [psi1, psi2] {
            l2.set(psi, theta_row, -1.0);
            l2.set(psi, theta_row + 1, 1.0);
        }
        l2.set_bias(psi1, offset);
        l2.set_bias(psi2, offset - delta);

        let rect = &patch.rectangle;
        for i in 0..d {
            for (j, (bias, s)) in ramp_offsets(rect.lower[i], rect.upper[i], eps).into_iter().enumerate() {
                let row = o2 + 4 * i + j;
                l2.set(row, o1 + 2 * i, 1.0);
                l2.set(row, o1 + 2 * i + 1, -1.0);
                l2.set_bias(row, bias);
                l3.set(m, row, s / eps);
            }
        }
        l3.set(m, psi1, 1.0 / delta);
        l3.set(m, psi2, -1.0 / delta);
        l3.set_bias(m, -(d as f64));
    }
    let net = NeuralNetwork::new(d, vec![l1, l2, l3, out])?;

    let b = omega.max_b();
    let stats = net.stats();
    let report = ClassifierBuildReport {
        architecture: net.architecture(),
        num_neurons: stats.num_neurons,
        num_nonzero_weights: stats.num_nonzero_weights,
        max_abs_weight: stats.max_abs_weight,
        bound_architecture: vec![d, m_count * w1, m_count * w2, m_count, 1],
        bound_neurons: 7 * m_count * (n + d),
        bound_weights: 54 * d * d * m_count * n,
        bound_magnitude: d as f64 * (4.0 + radius) * (1.0 + b)
            + (n as f64).sqrt() * (1.0 / b + 1.0 / b.sqrt()),
        small_rectangle_flags: plans.iter().map(|p| p.small).collect(),
    };
    Ok((net, report))
}

/// Recomputes the statistics of `net` and checks them against the bounds of
/// `report`.
pub fn verify_architecture(net: &NeuralNetwork, report: &ClassifierBuildReport) -> bool {
    let stats = net.stats();
    net.architecture() == report.bound_architecture
        && stats.num_neurons <= report.bound_neurons
        && stats.num_nonzero_weights <= report.bound_weights
        && stats.max_abs_weight <= report.bound_magnitude
}
