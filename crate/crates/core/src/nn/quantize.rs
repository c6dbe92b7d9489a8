use super::NeuralNetwork;
use crate::error::{Error, Result};

/// The admissible set `[-eps^-tau, eps^-tau] ∩ 2^(-tau*ceil(log2(1/eps))) Z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantizationGrid {
    /// Grid spacing, an exact power of two.
    pub step: f64,
    /// `eps^-tau`.
    pub bound: f64,
    /// Largest integer `k` with `k * step <= bound`.
    pub max_index: f64,
}

impl QuantizationGrid {
    /// Nearest grid point; ties round toward zero.
    pub fn round(&self, w: f64) -> f64 {
        let q = w / self.step;
        let floor = q.floor();
        let frac = q - floor;
        let k = if frac > 0.5 || (frac == 0.5 && floor < 0.0) {
            floor + 1.0
        } else {
            floor
        };
        k.clamp(-self.max_index, self.max_index) * self.step
    }

    pub fn contains(&self, w: f64) -> bool {
        let q = w / self.step;
        w.abs() <= self.bound && q.fract() == 0.0
    }
}

pub fn quantization_grid(tau: u32, eps: f64) -> Result<QuantizationGrid> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::Domain(format!("eps must lie in (0, 1/2), got {eps}")));
    }
    if tau == 0 {
        return Err(Error::Domain("tau must be a positive integer".into()));
    }
    // ceil(log2(1/eps)) without trusting log2 rounding at exact powers of two
    let inv = 1.0 / eps;
    let mut bits: i32 = 0;
    while 2f64.powi(bits) < inv {
        bits += 1;
    }
    let step = 2f64.powi(-(tau as i32) * bits);
    let bound = eps.powi(-(tau as i32));
    let max_index = (bound / step).floor();
    Ok(QuantizationGrid { step, bound, max_index })
}

/// Replaces every weight and bias by its nearest point of the `(tau, eps)` grid.
pub fn quantize(net: &NeuralNetwork, tau: u32, eps: f64) -> Result<NeuralNetwork> {
    let grid = quantization_grid(tau, eps)?;
    let mut out = net.clone();
    for layer in out.layers_mut() {
        let (w, b) = layer.params_mut();
        w.iter_mut().chain(b.iter_mut()).for_each(|v| *v = grid.round(*v));
    }
    Ok(out)
}

/// Exact membership check of every parameter in the `(tau, eps)` grid.
pub fn is_quantized(net: &NeuralNetwork, tau: u32, eps: f64) -> Result<bool> {
    let grid = quantization_grid(tau, eps)?;
    Ok(net.parameters().all(|v| grid.contains(v)))
}
