//! Shallow ReLU approximation of a Barron function by Monte-Carlo sampling of
//! its half-space representation.
//!
//! With `f_0(x) = f(x + x0) - c` and `F_0(xi) = e^{i<x0,xi>} F(xi)`, every atom
//! `(xi, theta)` of the spectral measure satisfies, for `y = <xi*, x>` with
//! `xi* = xi / |xi|_X` and `a = |xi|_X`,
//!
//! ```text
//! |F| (cos(a y + theta) - cos theta)
//!   = -|F| a ∫_0^1 [ 1(<xi*, x> > t) sin(a t + theta) + 1(<-xi*, x> > t) sin(a t - theta) ] dt
//! ```
//!
//! so `f_0` is an expectation of half-space indicators over "directed atoms"
//! `(±xi, ±theta)` and `t ∈ [0, 1]`. The density is proportional to
//! `|F| a |sin(a t + phi)|` and the sign of the sine splits it into two
//! probability measures `mu_+` and `mu_-` with masses `V_+`, `V_-` and total
//! `v`. Drawing samples from each and replacing the indicator by the ramp
//! `H_eps(s) = (rho(s) - rho(s - eps)) / eps` with `eps = N^{-1/2} / 4` gives a
//! network with `8N` hidden neurons. Weights are balanced by `sqrt(C)` so that
//! every parameter stays below `(5 + vartheta) (1 + ||x0||_1) sqrt(C)`.

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use super::domain::{seminorm_unchecked, vartheta};
use super::spec::{barron_constant, dot, BarronFunctionSpec};
use super::DomainBox;
use crate::error::{Error, Result};
use crate::nn::{Layer, NeuralNetwork, Scratch};
use crate::par;

/// Knots of the tabulated conditional CDF of `t`.
pub const CDF_POINTS: usize = 4096;

/// Default number of independent draws in best-of-K selection.
pub const DEFAULT_CANDIDATES: usize = 8;

/// Output of [`synthesize_shallow`].
#[derive(Debug, Clone)]
pub struct ShallowSynthesis {
    pub network: NeuralNetwork,
    /// Largest `|f - R(net)|` over the validation grid for the chosen draw.
    pub sup_error: f64,
    /// Index of the winning candidate draw.
    pub candidate: usize,
    /// `(5 + vartheta(X, x0)) (1 + ||x0||_1) sqrt(C)`.
    pub weight_bound: f64,
    pub max_abs_weight: f64,
    pub barron_constant: f64,
}

impl ShallowSynthesis {
    pub fn weight_bound_holds(&self) -> bool {
        self.max_abs_weight <= self.weight_bound
    }
}

/// Directed atom `(eta, phi)` with its seminorm and normalized weight `|F~| a`.
#[derive(Debug, Clone)]
struct DirectedAtom {
    direction: Vec<f64>,
    scale: f64,
    phase: f64,
    weight: f64,
}

/// `∫_{t0}^{t1} sin(a s + phi) ds`, written to avoid cancellation for small `a`.
fn sin_integral(a: f64, phi: f64, t0: f64, t1: f64) -> f64 {
    let half = 0.5 * (t1 - t0);
    if a * half == 0.0 {
        return (t1 - t0) * (a * t0 + phi).sin();
    }
    2.0 * (a * 0.5 * (t0 + t1) + phi).sin() * (a * half).sin() / a
}

/// `∫_{t0}^{t1} max(sin(a s + phi), 0) ds`, integrating exactly between the
/// zero crossings `s = (k pi - phi) / a`.
pub(crate) fn positive_sin_integral(a: f64, phi: f64, t0: f64, t1: f64) -> f64 {
    use std::f64::consts::PI;
    let mut cuts = vec![t0];
    if a > 0.0 {
        let k_lo = ((a * t0 + phi) / PI).floor() as i64 + 1;
        let k_hi = ((a * t1 + phi) / PI).ceil() as i64 - 1;
        for k in k_lo..=k_hi {
            let s = (k as f64 * PI - phi) / a;
            if s > t0 && s < t1 {
                cuts.push(s);
            }
        }
    }
    cuts.push(t1);
    cuts.windows(2)
        .map(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            if (a * mid + phi).sin() > 0.0 {
                sin_integral(a, phi, w[0], w[1])
            } else {
                0.0
            }
        })
        .sum()
}

/// Tabulated CDF of the density `∝ max(sin(a t + phi), 0)` on `[0, 1]`.
#[derive(Debug, Clone)]
struct TCdf {
    cumulative: Vec<f64>,
}

impl TCdf {
    fn new(a: f64, phi: f64) -> Self {
        let h = 1.0 / CDF_POINTS as f64;
        let mut cumulative = Vec::with_capacity(CDF_POINTS + 1);
        cumulative.push(0.0);
        let mut acc = 0.0;
        for j in 0..CDF_POINTS {
            acc += positive_sin_integral(a, phi, j as f64 * h, (j + 1) as f64 * h);
            cumulative.push(acc);
        }
        Self { cumulative }
    }

    fn mass(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    /// Linear-interpolation inverse of the CDF at `u * mass`.
    fn invert(&self, u: f64) -> f64 {
        let target = u * self.mass();
        let j = self.cumulative.partition_point(|&c| c < target).clamp(1, CDF_POINTS);
        let (lo, hi) = (self.cumulative[j - 1], self.cumulative[j]);
        let frac = if hi > lo { (target - lo) / (hi - lo) } else { 0.5 };
        ((j - 1) as f64 + frac) / CDF_POINTS as f64
    }
}

/// One sign part `mu_±`: categorical weights over directed atoms and their
/// conditional `t` tables.
#[derive(Debug, Clone)]
struct SignPart {
    atoms: Vec<usize>,
    tables: Vec<TCdf>,
    chooser: Option<WeightedIndex<f64>>,
    mass: f64,
}

impl SignPart {
    fn new(directed: &[DirectedAtom], sign_shift: f64) -> Self {
        let mut atoms = vec![];
        let mut tables = vec![];
        let mut weights = vec![];
        for (k, atom) in directed.iter().enumerate() {
            let table = TCdf::new(atom.scale, atom.phase + sign_shift);
            let w = atom.weight * table.mass();
            if w > 0.0 {
                atoms.push(k);
                tables.push(table);
                weights.push(w);
            }
        }
        let mass = weights.iter().sum();
        let chooser = (mass > 0.0).then(|| WeightedIndex::new(&weights).expect("positive weights"));
        Self { atoms, tables, chooser, mass }
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> (usize, f64) {
        let i = self.chooser.as_ref().expect("non-empty part").sample(rng);
        (self.atoms[i], self.tables[i].invert(rng.gen::<f64>()))
    }
}

/// Everything about the spectral measure that does not depend on the draw.
struct Sampler {
    directed: Vec<DirectedAtom>,
    plus: SignPart,
    minus: SignPart,
    /// `c / C`.
    constant: f64,
    scale: f64,
}

impl Sampler {
    fn new(spec: &BarronFunctionSpec, c_total: f64) -> Self {
        let mut directed = vec![];
        for atom in &spec.atoms {
            let a = seminorm_unchecked(&atom.frequency, &spec.domain, &spec.base_point);
            if atom.modulus == 0.0 || a == 0.0 {
                continue;
            }
            let theta0 = atom.phase + dot(&spec.base_point, &atom.frequency);
            let weight = atom.modulus / c_total * a;
            let star: Vec<f64> = atom.frequency.iter().map(|v| v / a).collect();
            let neg: Vec<f64> = star.iter().map(|v| -v).collect();
            directed.push(DirectedAtom { direction: star, scale: a, phase: theta0, weight });
            directed.push(DirectedAtom { direction: neg, scale: a, phase: -theta0, weight });
        }
        let plus = SignPart::new(&directed, 0.0);
        let minus = SignPart::new(&directed, std::f64::consts::PI);
        Self { directed, plus, minus, constant: spec.constant / c_total, scale: c_total.sqrt() }
    }

    /// One candidate network: `2N` samples per sign part, two ReLUs each.
    fn draw<R: Rng>(&self, spec: &BarronFunctionSpec, n: usize, rng: &mut R) -> NeuralNetwork {
        let d = spec.dim();
        let width = 8 * n;
        let samples = 2 * n;
        let eps = 0.25 / (n as f64).sqrt();
        let s = self.scale;
        let mut hidden = Layer::zeros(width, d);
        let mut out = Layer::zeros(1, width);

        // f~ = c~ - v V_+ E_+[1] + v V_- E_-[1], and v V_± is the part's mass
        for (part, sign, offset) in [(&self.plus, -1.0, 0), (&self.minus, 1.0, 4 * n)] {
            if part.chooser.is_none() {
                continue;
            }
            let coef = sign * part.mass / samples as f64 / eps;
            for i in 0..samples {
                let (k, t) = part.draw(rng);
                let atom = &self.directed[k];
                let shift = dot(&atom.direction, &spec.base_point);
                let r0 = offset + 2 * i;
                for c in 0..d {
                    hidden.set(r0, c, s * atom.direction[c]);
                    hidden.set(r0 + 1, c, s * atom.direction[c]);
                }
                hidden.set_bias(r0, s * (-shift - t));
                hidden.set_bias(r0 + 1, s * (-shift - t - eps));
                out.set(0, r0, s * coef);
                out.set(0, r0 + 1, -s * coef);
            }
        }
        out.set_bias(0, self.constant * s * s);
        NeuralNetwork::new(d, vec![hidden, out]).expect("consistent shapes")
    }
}

/// Sup-norm distance between `target` values and `net` on `grid`.
pub fn grid_sup_error(net: &NeuralNetwork, grid: &[Vec<f64>], target: &[f64]) -> f64 {
    par::map_chunks(grid.len(), |_, range| {
        let mut scratch = Scratch::default();
        range
            .map(|i| (net.evaluate_scalar(&grid[i], &mut scratch) - target[i]).abs())
            .fold(0.0f64, f64::max)
    })
    .into_iter()
    .fold(0.0, f64::max)
}

/// Builds a shallow ReLU network with exactly `8N` hidden neurons approximating
/// `spec` uniformly on its domain.
///
/// `candidates` independent draws are made (draw `k` uses RNG stream
/// `mix(seed, k)`) and the one with the smallest sup-error on
/// `validation_grid` is returned.
pub fn synthesize_shallow(
    spec: &BarronFunctionSpec,
    n: usize,
    candidates: usize,
    seed: u64,
    validation_grid: &[Vec<f64>],
) -> Result<ShallowSynthesis> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::InvalidConfig("N must be positive".into()));
    }
    if candidates == 0 {
        return Err(Error::InvalidConfig("K must be at least 1".into()));
    }
    if validation_grid.is_empty() {
        return Err(Error::InvalidConfig("validation grid is empty".into()));
    }
    if validation_grid.iter().any(|x| x.len() != spec.dim()) {
        return Err(Error::Shape("validation point has wrong dimension".into()));
    }
    let theta = vartheta(&spec.domain, &spec.base_point)?;
    let c_total = barron_constant(spec);
    let x0_l1: f64 = spec.base_point.iter().map(|v| v.abs()).sum();
    let weight_bound = (5.0 + theta) * (1.0 + x0_l1) * c_total.sqrt();
    let target: Vec<f64> = validation_grid.iter().map(|x| spec.eval(x)).collect();

    let (network, sup_error, candidate) = if c_total == 0.0 {
        let net = zero_shallow(spec.dim(), n, spec.constant);
        let err = grid_sup_error(&net, validation_grid, &target);
        (net, err, 0)
    } else {
        let sampler = Sampler::new(spec, c_total);
        if sampler.plus.chooser.is_none() && sampler.minus.chooser.is_none() {
            let net = zero_shallow(spec.dim(), n, spec.constant);
            let err = grid_sup_error(&net, validation_grid, &target);
            (net, err, 0)
        } else {
            // candidates in sequence; the grid evaluation inside is parallel
            let mut best: Option<(NeuralNetwork, f64, usize)> = None;
            for k in 0..candidates {
                let mut rng = par::stream_rng(seed, k as u64);
                let net = sampler.draw(spec, n, &mut rng);
                let err = grid_sup_error(&net, validation_grid, &target);
                if best.as_ref().is_none_or(|(_, e, _)| err < *e) {
                    best = Some((net, err, k));
                }
            }
            best.expect("at least one candidate")
        }
    };
    let max_abs_weight = network.stats().max_abs_weight;
    Ok(ShallowSynthesis {
        network,
        sup_error,
        candidate,
        weight_bound,
        max_abs_weight,
        barron_constant: c_total,
    })
}

/// Width-`8N` shallow network with all hidden weights zero and output bias `c`.
fn zero_shallow(d: usize, n: usize, c: f64) -> NeuralNetwork {
    let mut out = Layer::zeros(1, 8 * n);
    out.set_bias(0, c);
    NeuralNetwork::new(d, vec![Layer::zeros(8 * n, d), out]).expect("consistent shapes")
}

/// Default validation set: a `101^d` tensor grid for `d <= 2`; for `d > 2` a
/// `101 x 101` grid over the first two axes (others at the box centre) plus
/// `10^4` uniform points drawn with `seed`.
pub fn default_validation_grid(domain: &DomainBox, seed: u64) -> Vec<Vec<f64>> {
    const SIDE: usize = 101;
    const RANDOM: usize = 10_000;
    let d = domain.dim();
    let axis = |i: usize, j: usize| {
        domain.lower[i] + domain.side(i) * j as f64 / (SIDE - 1) as f64
    };
    let mut grid = vec![];
    match d {
        1 => grid.extend((0..SIDE).map(|j| vec![axis(0, j)])),
        _ => {
            let centre = domain.center();
            for j0 in 0..SIDE {
                for j1 in 0..SIDE {
                    let mut p = centre.clone();
                    p[0] = axis(0, j0);
                    p[1] = axis(1, j1);
                    grid.push(p);
                }
            }
        }
    }
    if d > 2 {
        let mut rng = par::stream_rng(seed, u64::MAX);
        for _ in 0..RANDOM {
            grid.push(
                (0..d)
                    .map(|i| domain.lower[i] + domain.side(i) * rng.gen::<f64>())
                    .collect(),
            );
        }
    }
    grid
}
