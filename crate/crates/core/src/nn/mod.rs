//! Feed-forward ReLU networks: representation, realization, size accounting,
//! network calculus, parameter gradients and weight quantization.
//!
//! A network is a list of affine layers `(A_l, b_l)`. Every layer but the last
//! is followed by the ReLU `max(0, t)`; the last one is affine.

mod algebra;
mod grad;
mod io;
mod quantize;

pub use algebra::{compose, identity_gadget, sum_scaled};
pub use grad::NetworkGradient;
pub(crate) use grad::GradScratch;
pub use io::{read_network, write_network, NetworkFile};
pub use quantize::{is_quantized, quantization_grid, quantize, QuantizationGrid};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[inline]
pub fn relu(t: f64) -> f64 {
    if t > 0.0 {
        t
    } else {
        0.0
    }
}

/// One affine map `x -> A x + b` with `A` stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    rows: usize,
    cols: usize,
    weights: Vec<f64>,
    bias: Vec<f64>,
}

impl Layer {
    /// Builds a layer from a row-major weight buffer of length `rows * cols`.
    pub fn new(rows: usize, cols: usize, weights: Vec<f64>, bias: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape("layer dimensions must be positive".into()));
        }
        if weights.len() != rows * cols {
            return Err(Error::Shape(format!(
                "weight buffer has {} entries, expected {rows}x{cols}",
                weights.len()
            )));
        }
        if bias.len() != rows {
            return Err(Error::Shape(format!(
                "bias has {} entries, expected {rows}",
                bias.len()
            )));
        }
        if weights.iter().chain(&bias).any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("non-finite weight or bias".into()));
        }
        Ok(Self { rows, cols, weights, bias })
    }

    /// All-zero layer.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            weights: vec![0.0; rows * cols],
            bias: vec![0.0; rows],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>], bias: Vec<f64>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged weight matrix".into()));
        }
        Self::new(rows.len(), cols, rows.concat(), bias)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    pub fn weight(&self, r: usize, c: usize) -> f64 {
        self.weights[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.weights[r * self.cols..(r + 1) * self.cols]
    }

    pub(crate) fn set(&mut self, r: usize, c: usize, v: f64) {
        self.weights[r * self.cols + c] = v;
    }

    pub(crate) fn set_bias(&mut self, r: usize, v: f64) {
        self.bias[r] = v;
    }

    pub(crate) fn params_mut(&mut self) -> (&mut [f64], &mut [f64]) {
        (&mut self.weights, &mut self.bias)
    }

    /// `out = A x + b`.
    #[inline]
    pub fn affine_into(&self, x: &[f64], out: &mut Vec<f64>) {
        out.clear();
        out.extend(self.weights.chunks_exact(self.cols).zip(&self.bias).map(|(row, b)| {
            row.iter().zip(x).fold(*b, |acc, (w, xi)| acc + w * xi)
        }));
    }
}

/// A ReLU network `((A_1, b_1), ..., (A_L, b_L))` with input dimension `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct NeuralNetwork {
    input_dim: usize,
    layers: Vec<Layer>,
}

/// Size figures of a network: neurons `d + sum N_l`, layers `L`,
/// non-zero weights `W` and the largest parameter magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkStats {
    pub num_neurons: usize,
    pub num_layers: usize,
    pub num_nonzero_weights: usize,
    pub max_abs_weight: f64,
}

impl NeuralNetwork {
    pub fn new(input_dim: usize, layers: Vec<Layer>) -> Result<Self> {
        if input_dim == 0 {
            return Err(Error::Shape("input dimension must be positive".into()));
        }
        if layers.is_empty() {
            return Err(Error::Shape("a network needs at least one layer".into()));
        }
        let mut width = input_dim;
        for (l, layer) in layers.iter().enumerate() {
            if layer.cols != width {
                return Err(Error::Shape(format!(
                    "layer {} expects {} inputs but previous width is {width}",
                    l + 1,
                    layer.cols
                )));
            }
            width = layer.rows;
        }
        Ok(Self { input_dim, layers })
    }

    /// Constant network `x -> value` with a single affine layer.
    pub fn constant(input_dim: usize, value: f64) -> Self {
        Self {
            input_dim,
            layers: vec![Layer {
                rows: 1,
                cols: input_dim,
                weights: vec![0.0; input_dim],
                bias: vec![value],
            }],
        }
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().map_or(0, |l| l.rows)
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub(crate) fn layers_mut(&mut self) -> &mut [Layer] {
        &mut self.layers
    }

    /// `(d, N_1, ..., N_L)`.
    pub fn architecture(&self) -> Vec<usize> {
        std::iter::once(self.input_dim)
            .chain(self.layers.iter().map(|l| l.rows))
            .collect()
    }

    /// Realization `R_rho(Phi)(x)`.
    pub fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_input(x)?;
        let mut scratch = Scratch::default();
        Ok(self.forward(x, &mut scratch).to_vec())
    }

    /// Realization of a network with one output, reusing `scratch`.
    ///
    /// Panics if the input length or output dimension is wrong; callers in
    /// the estimators validate shapes once up front.
    pub fn evaluate_scalar(&self, x: &[f64], scratch: &mut Scratch) -> f64 {
        assert_eq!(x.len(), self.input_dim, "input dimension mismatch");
        assert_eq!(self.output_dim(), 1, "network has more than one output");
        self.forward(x, scratch)[0]
    }

    pub(crate) fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.input_dim {
            return Err(Error::Shape(format!(
                "input has length {}, network expects {}",
                x.len(),
                self.input_dim
            )));
        }
        Ok(())
    }

    fn forward<'s>(&self, x: &[f64], scratch: &'s mut Scratch) -> &'s [f64] {
        let Scratch { a, b } = scratch;
        a.clear();
        a.extend_from_slice(x);
        let last = self.layers.len() - 1;
        for (l, layer) in self.layers.iter().enumerate() {
            layer.affine_into(a, b);
            if l < last {
                b.iter_mut().for_each(|v| *v = relu(*v));
            }
            std::mem::swap(a, b);
        }
        a
    }

    pub fn stats(&self) -> NetworkStats {
        let mut nonzero = 0;
        let mut max_abs = 0.0f64;
        for layer in &self.layers {
            for v in layer.weights.iter().chain(&layer.bias) {
                if *v != 0.0 {
                    nonzero += 1;
                }
                max_abs = max_abs.max(v.abs());
            }
        }
        NetworkStats {
            num_neurons: self.input_dim + self.layers.iter().map(|l| l.rows).sum::<usize>(),
            num_layers: self.layers.len(),
            num_nonzero_weights: nonzero,
            max_abs_weight: max_abs,
        }
    }

    /// Iterator over every weight and bias.
    pub fn parameters(&self) -> impl Iterator<Item = f64> + '_ {
        self.layers
            .iter()
            .flat_map(|l| l.weights.iter().chain(&l.bias).copied())
    }
}

/// Reusable activation buffers for repeated evaluation.
#[derive(Debug, Default, Clone)]
pub struct Scratch {
    a: Vec<f64>,
    b: Vec<f64>,
}
