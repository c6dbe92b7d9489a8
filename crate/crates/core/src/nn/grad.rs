use super::{relu, NeuralNetwork};
use crate::error::{Error, Result};

/// Derivatives of a scalar objective with respect to every weight and bias,
/// laid out like the network's own parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkGradient {
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<Vec<f64>>,
}

impl NetworkGradient {
    pub fn zeros_like(net: &NeuralNetwork) -> Self {
        Self {
            weights: net.layers().iter().map(|l| vec![0.0; l.weights().len()]).collect(),
            bias: net.layers().iter().map(|l| vec![0.0; l.bias().len()]).collect(),
        }
    }

    pub fn fill_zero(&mut self) {
        self.weights.iter_mut().chain(&mut self.bias).for_each(|v| v.fill(0.0));
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (a, b) in self.weights.iter_mut().zip(&other.weights) {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        }
        for (a, b) in self.bias.iter_mut().zip(&other.bias) {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        }
    }
}

/// Buffers for forward activations and backward deltas.
#[derive(Debug, Default, Clone)]
pub struct GradScratch {
    activations: Vec<Vec<f64>>,
    pre: Vec<Vec<f64>>,
    delta: Vec<f64>,
    next: Vec<f64>,
}

impl NeuralNetwork {
    /// Gradient of `upstream · R(net)(x)` with respect to all parameters.
    /// The ReLU derivative at 0 is taken to be 0.
    pub fn gradient(&self, x: &[f64], upstream: &[f64]) -> Result<NetworkGradient> {
        self.check_input(x)?;
        if upstream.len() != self.output_dim() {
            return Err(Error::Shape(format!(
                "upstream has length {}, output dimension is {}",
                upstream.len(),
                self.output_dim()
            )));
        }
        let mut grad = NetworkGradient::zeros_like(self);
        let mut scratch = GradScratch::default();
        self.forward_cached(x, &mut scratch);
        self.backward_cached(upstream, &mut grad, &mut scratch);
        Ok(grad)
    }

    /// Forward pass keeping every activation in `scratch`; returns the output.
    /// Shapes are the caller's responsibility.
    pub(crate) fn forward_cached<'s>(&self, x: &[f64], scratch: &'s mut GradScratch) -> &'s [f64] {
        let layers = self.layers();
        let depth = layers.len();
        scratch.activations.resize_with(depth + 1, Vec::new);
        scratch.pre.resize_with(depth, Vec::new);

        scratch.activations[0].clear();
        scratch.activations[0].extend_from_slice(x);
        for (l, layer) in layers.iter().enumerate() {
            let (head, tail) = scratch.activations.split_at_mut(l + 1);
            layer.affine_into(&head[l], &mut scratch.pre[l]);
            let out = &mut tail[0];
            out.clear();
            if l + 1 < depth {
                out.extend(scratch.pre[l].iter().map(|&v| relu(v)));
            } else {
                out.extend_from_slice(&scratch.pre[l]);
            }
        }
        &scratch.activations[depth]
    }

    /// Adds the gradient of `upstream · output` for the input of the last
    /// [`forward_cached`](Self::forward_cached) call to `grad`.
    pub(crate) fn backward_cached(&self, upstream: &[f64], grad: &mut NetworkGradient, scratch: &mut GradScratch) {
        let layers = self.layers();
        let depth = layers.len();

        scratch.delta.clear();
        scratch.delta.extend_from_slice(upstream);
        for l in (0..depth).rev() {
            let layer = &layers[l];
            if l + 1 < depth {
                for (d, z) in scratch.delta.iter_mut().zip(&scratch.pre[l]) {
                    if *z <= 0.0 {
                        *d = 0.0;
                    }
                }
            }
            let input = &scratch.activations[l];
            let gw = &mut grad.weights[l];
            let gb = &mut grad.bias[l];
            let cols = layer.cols();
            for (r, &d) in scratch.delta.iter().enumerate() {
                if d == 0.0 {
                    continue;
                }
                gb[r] += d;
                for (g, a) in gw[r * cols..(r + 1) * cols].iter_mut().zip(input) {
                    *g += d * a;
                }
            }
            if l > 0 {
                scratch.next.clear();
                scratch.next.resize(cols, 0.0);
                for (r, &d) in scratch.delta.iter().enumerate() {
                    if d == 0.0 {
                        continue;
                    }
                    for (n, w) in scratch.next.iter_mut().zip(layer.row(r)) {
                        *n += d * w;
                    }
                }
                std::mem::swap(&mut scratch.delta, &mut scratch.next);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::Layer;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn neuron(w: f64, b: f64) -> NeuralNetwork {
        NeuralNetwork::new(
            1,
            vec![
                Layer::new(1, 1, vec![w], vec![b]).unwrap(),
                Layer::new(1, 1, vec![1.0], vec![0.0]).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn active_unit() {
        let g = neuron(1.0, 1.0).gradient(&[2.0], &[1.0]).unwrap();
        assert_eq!(g.weights[0], vec![2.0]);
        assert_eq!(g.bias[0], vec![1.0]);
        // output layer: d/dv = rho(3) = 3, d/dc = 1
        assert_eq!(g.weights[1], vec![3.0]);
        assert_eq!(g.bias[1], vec![1.0]);
    }

    #[test]
    fn inactive_unit() {
        let g = neuron(1.0, -5.0).gradient(&[2.0], &[1.0]).unwrap();
        assert_eq!(g.weights[0], vec![0.0]);
        assert_eq!(g.bias[0], vec![0.0]);
        assert_eq!(g.weights[1], vec![0.0]);
    }

    #[test]
    fn upstream_shape_error() {
        assert!(neuron(1.0, 0.0).gradient(&[1.0], &[1.0, 2.0]).is_err());
    }

    fn objective(net: &NeuralNetwork, x: &[f64], up: &[f64]) -> f64 {
        net.evaluate(x).unwrap().iter().zip(up).map(|(a, b)| a * b).sum()
    }

    fn perturbed(net: &NeuralNetwork, l: usize, idx: usize, is_bias: bool, h: f64) -> NeuralNetwork {
        let mut n = net.clone();
        let (w, b) = n.layers_mut()[l].params_mut();
        if is_bias {
            b[idx] += h;
        } else {
            w[idx] += h;
        }
        n
    }

    #[test]
    fn matches_central_differences() {
        let h = 1e-5;
        for seed in 0..100u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let layers = vec![
                Layer::new(5, 3, (0..15).map(|_| rng.gen_range(-1.0..1.0)).collect(),
                    (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap(),
                Layer::new(2, 5, (0..10).map(|_| rng.gen_range(-1.0..1.0)).collect(),
                    (0..2).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap(),
            ];
            let net = NeuralNetwork::new(3, layers).unwrap();
            let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let up: Vec<f64> = (0..2).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let g = net.gradient(&x, &up).unwrap();
            for l in 0..2 {
                for (is_bias, n) in [(false, g.weights[l].len()), (true, g.bias[l].len())] {
                    for idx in 0..n {
                        let plus = objective(&perturbed(&net, l, idx, is_bias, h), &x, &up);
                        let minus = objective(&perturbed(&net, l, idx, is_bias, -h), &x, &up);
                        let fd = (plus - minus) / (2.0 * h);
                        let an = if is_bias { g.bias[l][idx] } else { g.weights[l][idx] };
                        // piecewise-linear objective: a kink inside [-h, h] spoils the difference
                        let kinked = net.layers()[0].bias().iter().enumerate().any(|(r, b)| {
                            let z: f64 = net.layers()[0].row(r).iter().zip(&x).map(|(w, xi)| w * xi).sum::<f64>() + b;
                            z.abs() < 10.0 * h
                        });
                        if !kinked {
                            assert!((fd - an).abs() <= 1e-5 * (1.0 + an.abs()), "seed {seed}: {fd} vs {an}");
                        }
                    }
                }
            }
        }
    }
}
