//! Small fixed-size building blocks of the classifier.

use crate::barron::DomainBox;
use crate::error::{Error, Result};
use crate::nn::{Layer, NeuralNetwork};

/// `H_delta(x) = (rho(x) - rho(x - delta)) / delta`: 0 below 0, 1 above `delta`,
/// linear in between.
pub fn approx_heaviside_gadget(delta: f64) -> Result<NeuralNetwork> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::InvalidConfig(format!("delta must be positive, got {delta}")));
    }
    let hidden = Layer::new(2, 1, vec![1.0, 1.0], vec![0.0, -delta])?;
    let out = Layer::new(1, 2, vec![1.0 / delta, -1.0 / delta], vec![0.0])?;
    NeuralNetwork::new(1, vec![hidden, out])
}

/// The four ramp neurons for one coordinate: `rho(x - a)`, `rho(x - a - eps)`,
/// `rho(x - b + eps)`, `rho(x - b)` as `(offset, combination sign)` pairs. Their
/// signed sum divided by `eps` is a trapezoid equal to 1 on `[a + eps, b - eps]`
/// and 0 outside `(a, b)`.
pub(crate) fn ramp_offsets(a: f64, b: f64, eps: f64) -> [(f64, f64); 4] {
    [(-a, 1.0), (-a - eps, -1.0), (-b + eps, -1.0), (-b, 1.0)]
}

pub(crate) fn check_localization(rect: &DomainBox, eps: f64) -> Result<()> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::InvalidConfig(format!("eps must be positive, got {eps}")));
    }
    if 2.0 * eps > rect.min_side() {
        return Err(Error::InvalidConfig(format!(
            "eps = {eps} exceeds half the smallest side {}",
            rect.min_side()
        )));
    }
    Ok(())
}

/// `eta(x, y) = rho(sum_i ramp_i(x_i) + rho(y) - d)` on inputs `(x, y)` of
/// dimension `d + 1`.
///
/// For `y` in `[0, 1]` this equals `y` on the rectangle shrunk by `eps`,
/// vanishes outside the rectangle and stays in `[0, 1]`.
pub fn localize_gadget(rect: &DomainBox, eps: f64) -> Result<NeuralNetwork> {
    rect.validate()?;
    check_localization(rect, eps)?;
    let d = rect.dim();
    let mut first = Layer::zeros(4 * d + 1, d + 1);
    let mut second = Layer::zeros(1, 4 * d + 1);
    for i in 0..d {
        for (k, (offset, sign)) in ramp_offsets(rect.lower[i], rect.upper[i], eps).into_iter().enumerate() {
            let r = 4 * i + k;
            first.set(r, i, 1.0);
            first.set_bias(r, offset);
            second.set(0, r, sign / eps);
        }
    }
    first.set(4 * d, d, 1.0);
    second.set(0, 4 * d, 1.0);
    second.set_bias(0, -(d as f64));
    let out = Layer::new(1, 1, vec![1.0], vec![0.0])?;
    NeuralNetwork::new(d + 1, vec![first, second, out])
}
