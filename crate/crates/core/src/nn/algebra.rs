use super::{Layer, NeuralNetwork};
use crate::error::{Error, Result};

/// Network realizing `R(phi2) ∘ R(phi1)`.
///
/// The last affine layer of `phi1` is folded into the first layer of `phi2`,
/// giving architecture `(d1, N_1, ..., N_{L1-1}, M_1, ..., M_{L2})` and
/// `L1 + L2 - 1` layers.
pub fn compose(phi1: &NeuralNetwork, phi2: &NeuralNetwork) -> Result<NeuralNetwork> {
    if phi1.output_dim() != phi2.input_dim() {
        return Err(Error::Shape(format!(
            "cannot compose: inner output dimension {} != outer input dimension {}",
            phi1.output_dim(),
            phi2.input_dim()
        )));
    }
    let (inner_last, inner_rest) = phi1.layers().split_last().expect("non-empty network");
    let (outer_first, outer_rest) = phi2.layers().split_first().expect("non-empty network");

    // B (A x + b) + c
    let rows = outer_first.rows();
    let cols = inner_last.cols();
    let mut merged = Layer::zeros(rows, cols);
    for r in 0..rows {
        let outer_row = outer_first.row(r);
        for c in 0..cols {
            let v: f64 = outer_row
                .iter()
                .enumerate()
                .map(|(k, w)| w * inner_last.weight(k, c))
                .sum();
            merged.set(r, c, v);
        }
        let b: f64 = outer_row
            .iter()
            .zip(inner_last.bias())
            .fold(outer_first.bias()[r], |acc, (w, b)| acc + w * b);
        merged.set_bias(r, b);
    }

    let layers = inner_rest
        .iter()
        .cloned()
        .chain(std::iter::once(merged))
        .chain(outer_rest.iter().cloned())
        .collect();
    NeuralNetwork::new(phi1.input_dim(), layers)
}

/// Network realizing `a R(phi1) + b R(phi2)` by running both side by side.
///
/// Hidden widths add; depth and output dimension are unchanged.
pub fn sum_scaled(
    phi1: &NeuralNetwork,
    phi2: &NeuralNetwork,
    a: f64,
    b: f64,
) -> Result<NeuralNetwork> {
    if phi1.depth() != phi2.depth() {
        return Err(Error::Shape(format!(
            "depth mismatch: {} vs {}",
            phi1.depth(),
            phi2.depth()
        )));
    }
    if phi1.input_dim() != phi2.input_dim() || phi1.output_dim() != phi2.output_dim() {
        return Err(Error::Shape("input or output dimension mismatch".into()));
    }
    let depth = phi1.depth();
    let mut layers = Vec::with_capacity(depth);
    for (l, (p, q)) in phi1.layers().iter().zip(phi2.layers()).enumerate() {
        let first = l == 0;
        let last = l + 1 == depth;
        let layer = match (first, last) {
            // single affine layer
            (true, true) => {
                let w = p.weights().iter().zip(q.weights()).map(|(x, y)| a * x + b * y);
                let bias = p.bias().iter().zip(q.bias()).map(|(x, y)| a * x + b * y);
                Layer::new(p.rows(), p.cols(), w.collect(), bias.collect())?
            }
            // stack rows: [A1; A2]
            (true, false) => Layer::new(
                p.rows() + q.rows(),
                p.cols(),
                [p.weights(), q.weights()].concat(),
                [p.bias(), q.bias()].concat(),
            )?,
            // block diagonal
            (false, false) => {
                let mut layer = Layer::zeros(p.rows() + q.rows(), p.cols() + q.cols());
                for r in 0..p.rows() {
                    for c in 0..p.cols() {
                        layer.set(r, c, p.weight(r, c));
                    }
                    layer.set_bias(r, p.bias()[r]);
                }
                for r in 0..q.rows() {
                    for c in 0..q.cols() {
                        layer.set(p.rows() + r, p.cols() + c, q.weight(r, c));
                    }
                    layer.set_bias(p.rows() + r, q.bias()[r]);
                }
                layer
            }
            // side by side, scaled: [a A1, b A2]
            (false, true) => {
                let mut layer = Layer::zeros(p.rows(), p.cols() + q.cols());
                for r in 0..p.rows() {
                    for c in 0..p.cols() {
                        layer.set(r, c, a * p.weight(r, c));
                    }
                    for c in 0..q.cols() {
                        layer.set(r, p.cols() + c, b * q.weight(r, c));
                    }
                    layer.set_bias(r, a * p.bias()[r] + b * q.bias()[r]);
                }
                layer
            }
        };
        layers.push(layer);
    }
    NeuralNetwork::new(phi1.input_dim(), layers)
}

/// Two-layer network realizing the identity on `R^dim` via `rho(x) - rho(-x)`.
pub fn identity_gadget(dim: usize) -> NeuralNetwork {
    let mut hidden = Layer::zeros(2 * dim, dim);
    let mut out = Layer::zeros(dim, 2 * dim);
    for i in 0..dim {
        hidden.set(2 * i, i, 1.0);
        hidden.set(2 * i + 1, i, -1.0);
        out.set(i, 2 * i, 1.0);
        out.set(i, 2 * i + 1, -1.0);
    }
    NeuralNetwork::new(dim, vec![hidden, out]).expect("consistent shapes")
}
