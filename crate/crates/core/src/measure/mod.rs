//! Probability measures that put at most `C eps^alpha` mass on any tube of
//! width `eps` around a graph, together with samplers and Monte-Carlo
//! estimators.

mod estimate;

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::barron::DomainBox;
use crate::error::{Error, Result};
use crate::par;

pub use estimate::{
    disagreement_probability, lp_error, tube_mass_estimate, wilson_interval, Estimate,
};

/// Below this acceptance rate rejection sampling gives up with a numerical error.
pub const MIN_ACCEPTANCE: f64 = 1e-4;

/// Shared unnormalized density closure.
pub type DensityFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Piecewise-linear CDF of one coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginalTable {
    pub knots: Vec<f64>,
    pub cdf: Vec<f64>,
    /// Hölder exponent used for the certificate.
    #[serde(default = "one")]
    pub alpha: f64,
}

fn one() -> f64 {
    1.0
}

impl MarginalTable {
    pub fn new(knots: Vec<f64>, cdf: Vec<f64>, alpha: f64) -> Result<Self> {
        let t = Self { knots, cdf, alpha };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Validation(format!("marginal table: {m}")));
        if self.knots.len() < 2 || self.knots.len() != self.cdf.len() {
            return bad("need at least two knots and one CDF value per knot");
        }
        if self.knots.iter().chain(&self.cdf).any(|v| !v.is_finite()) {
            return bad("non-finite entry");
        }
        if self.knots.windows(2).any(|w| w[0] >= w[1]) {
            return bad("knots must be strictly increasing");
        }
        if self.cdf.windows(2).any(|w| w[0] > w[1]) {
            return bad("CDF values must be nondecreasing");
        }
        if self.cdf[0] != 0.0 || *self.cdf.last().unwrap() != 1.0 {
            return bad("CDF must start at 0 and end at 1");
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return bad("alpha must lie in (0, 1]");
        }
        Ok(())
    }

    /// `max_{j<k} (F_k - F_j) / (x_k - x_j)^alpha`. For a piecewise-linear CDF the
    /// supremum over all pairs is attained at knots.
    pub fn holder_constant(&self) -> f64 {
        let n = self.knots.len();
        let mut best = 0.0f64;
        for j in 0..n {
            for k in j + 1..n {
                let r = (self.cdf[k] - self.cdf[j]) / (self.knots[k] - self.knots[j]).powf(self.alpha);
                best = best.max(r);
            }
        }
        best
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (xs, fs) = (&self.knots, &self.cdf);
        if x <= xs[0] {
            return 0.0;
        }
        if x >= xs[xs.len() - 1] {
            return 1.0;
        }
        let j = xs.partition_point(|&k| k <= x);
        let t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
        fs[j - 1] + t * (fs[j] - fs[j - 1])
    }

    /// Smallest `x` with `F(x) >= u` along the linear interpolation.
    pub fn inverse(&self, u: f64) -> f64 {
        let (xs, fs) = (&self.knots, &self.cdf);
        let j = fs.partition_point(|&f| f < u).clamp(1, fs.len() - 1);
        let (f0, f1) = (fs[j - 1], fs[j]);
        if f1 <= f0 {
            return xs[j];
        }
        xs[j - 1] + (u - f0) / (f1 - f0) * (xs[j] - xs[j - 1])
    }

    pub fn mean(&self) -> f64 {
        self.knots
            .windows(2)
            .zip(self.cdf.windows(2))
            .map(|(x, f)| (f[1] - f[0]) * 0.5 * (x[0] + x[1]))
            .sum()
    }

    pub fn support(&self) -> (f64, f64) {
        (self.knots[0], self.knots[self.knots.len() - 1])
    }
}

/// A density with respect to the base measure, given by a Rust closure.
#[derive(Clone)]
pub struct CustomDensity {
    pub density: DensityFn,
    /// Upper bound on the density; rejection sampling relies on it.
    pub sup: f64,
}

impl fmt::Debug for CustomDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomDensity").field("sup", &self.sup).finish_non_exhaustive()
    }
}

/// Density relative to the base measure.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Density {
    /// `1 + sum_i slope_i (x_i - mean_i) / h_i`, with `mean_i` the base mean and
    /// `h_i` the largest distance from it to the support edge. Integrates to 1
    /// against the base and is nonnegative when `sum |slope_i| <= 1`.
    Tilt { slopes: Vec<f64> },
    #[serde(skip)]
    Custom(CustomDensity),
}

/// A probability measure on `R^d` with a computable tube certificate.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeasureSpec {
    UniformBox {
        #[serde(rename = "box")]
        domain: DomainBox,
    },
    ProductMarginals { marginals: Vec<MarginalTable> },
    DensityWeighted { base: Box<MeasureSpec>, density: Density },
}

/// `mu(tube of width eps) <= constant * eps^alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TubeCertificate {
    pub alpha: f64,
    pub constant: f64,
}

impl TubeCertificate {
    pub fn bound(&self, eps: f64) -> f64 {
        self.constant * eps.powf(self.alpha)
    }
}

impl MeasureSpec {
    pub fn uniform(domain: DomainBox) -> Self {
        Self::UniformBox { domain }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::UniformBox { domain } => domain.validate(),
            Self::ProductMarginals { marginals } => {
                if marginals.is_empty() {
                    return Err(Error::Validation("product measure needs at least one marginal".into()));
                }
                marginals.iter().try_for_each(MarginalTable::validate)
            }
            Self::DensityWeighted { base, density } => {
                if matches!(**base, Self::DensityWeighted { .. }) {
                    return Err(Error::Validation("density base must be a box or product measure".into()));
                }
                base.validate()?;
                match density {
                    Density::Tilt { slopes } => {
                        if slopes.len() != base.dim() {
                            return Err(Error::Shape("tilt needs one slope per axis".into()));
                        }
                        if slopes.iter().any(|s| !s.is_finite()) || slopes.iter().map(|s| s.abs()).sum::<f64>() > 1.0 {
                            return Err(Error::Validation("tilt slopes must satisfy sum |slope| <= 1".into()));
                        }
                        Ok(())
                    }
                    Density::Custom(c) => {
                        if c.sup.is_finite() && c.sup > 0.0 {
                            Ok(())
                        } else {
                            Err(Error::Validation("density sup bound must be positive".into()))
                        }
                    }
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::UniformBox { domain } => domain.dim(),
            Self::ProductMarginals { marginals } => marginals.len(),
            Self::DensityWeighted { base, .. } => base.dim(),
        }
    }

    /// Mean and half-range of each coordinate under a box or product measure.
    fn axis_moments(&self) -> Vec<(f64, f64)> {
        match self {
            Self::UniformBox { domain } => (0..domain.dim())
                .map(|i| (0.5 * (domain.lower[i] + domain.upper[i]), 0.5 * domain.side(i)))
                .collect(),
            Self::ProductMarginals { marginals } => marginals
                .iter()
                .map(|t| {
                    let m = t.mean();
                    let (lo, hi) = t.support();
                    (m, (hi - m).max(m - lo))
                })
                .collect(),
            Self::DensityWeighted { base, .. } => base.axis_moments(),
        }
    }

    /// Density of a weighted measure at `x`, and its sup bound.
    fn weight(&self, density: &Density, x: &[f64]) -> f64 {
        match density {
            Density::Tilt { slopes } => {
                let moments = self.axis_moments();
                1.0 + slopes
                    .iter()
                    .zip(&moments)
                    .zip(x)
                    .map(|((s, (m, h)), v)| if *h > 0.0 { s * (v - m) / h } else { 0.0 })
                    .sum::<f64>()
            }
            Density::Custom(c) => (c.density)(x),
        }
    }

    fn density_sup(density: &Density) -> f64 {
        match density {
            Density::Tilt { slopes } => 1.0 + slopes.iter().map(|s| s.abs()).sum::<f64>(),
            Density::Custom(c) => c.sup,
        }
    }

    /// Tube certificate; `None` when no finite constant can be certified
    /// (a degenerate box or a marginal with an atom).
    pub fn certificate(&self) -> Option<TubeCertificate> {
        match self {
            Self::UniformBox { domain } => domain.has_interior().then(|| TubeCertificate {
                alpha: 1.0,
                constant: (0..domain.dim()).map(|i| 2.0 / domain.side(i)).fold(0.0, f64::max),
            }),
            Self::ProductMarginals { marginals } => {
                let alpha = marginals.iter().map(|t| t.alpha).fold(1.0, f64::min);
                let l = marginals.iter().map(MarginalTable::holder_constant).fold(0.0, f64::max);
                l.is_finite().then(|| TubeCertificate { alpha, constant: 2f64.powf(alpha) * l })
            }
            Self::DensityWeighted { base, density } => base.certificate().map(|c| TubeCertificate {
                alpha: c.alpha,
                constant: c.constant * Self::density_sup(density),
            }),
        }
    }

    fn draw_base<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        match self {
            Self::UniformBox { domain } => (0..domain.dim())
                .map(|i| {
                    let u: f64 = rng.gen();
                    domain.lower[i] + u * domain.side(i)
                })
                .collect(),
            Self::ProductMarginals { marginals } => {
                marginals.iter().map(|t| t.inverse(rng.gen::<f64>())).collect()
            }
            Self::DensityWeighted { .. } => unreachable!("weighted measures are not used as bases"),
        }
    }

    /// Draws `n` points into `out` from `rng`.
    pub(crate) fn draw_into<R: Rng>(&self, rng: &mut R, n: usize, out: &mut Vec<Vec<f64>>) -> Result<()> {
        match self {
            Self::DensityWeighted { base, density } => {
                let sup = Self::density_sup(density);
                let mut trials = 0usize;
                let mut accepted = 0usize;
                while accepted < n {
                    let x = base.draw_base(rng);
                    trials += 1;
                    if rng.gen::<f64>() * sup < base.weight(density, &x) {
                        out.push(x);
                        accepted += 1;
                    }
                    if trials >= 100_000 && (accepted as f64) < MIN_ACCEPTANCE * trials as f64 {
                        return Err(Error::Numerical(format!(
                            "rejection sampling accepted {accepted} of {trials} proposals"
                        )));
                    }
                }
                Ok(())
            }
            _ => {
                out.extend((0..n).map(|_| self.draw_base(rng)));
                Ok(())
            }
        }
    }

    /// `n` i.i.d. draws; chunk `j` of 4096 points uses RNG stream `mix(seed, j)`.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
        self.validate()?;
        let chunks = par::map_chunks(n, |j, range| {
            let mut rng = par::stream_rng(seed, j as u64);
            let mut out = Vec::with_capacity(range.len());
            self.draw_into(&mut rng, range.len(), &mut out).map(|_| out)
        });
        let mut all = Vec::with_capacity(n);
        for c in chunks {
            all.extend(c?);
        }
        Ok(all)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: Self = serde_json::from_str(text)?;
        m.validate()?;
        Ok(m)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Measures shipped with the library, all on `[-1, 1]^2`.
pub fn presets() -> Vec<(&'static str, MeasureSpec)> {
    let square = DomainBox::cube(2, -1.0, 1.0);
    // a tent-shaped marginal and a skewed three-piece marginal
    let tent = MarginalTable::new(vec![-1.0, 0.0, 1.0], vec![0.0, 0.5, 1.0], 1.0).unwrap();
    let skew = MarginalTable::new(vec![-1.0, -0.5, 0.5, 1.0], vec![0.0, 0.05, 0.6, 1.0], 1.0).unwrap();
    vec![
        ("uniform", MeasureSpec::uniform(square.clone())),
        ("product", MeasureSpec::ProductMarginals { marginals: vec![tent, skew] }),
        (
            "tilted",
            MeasureSpec::DensityWeighted {
                base: Box::new(MeasureSpec::uniform(square)),
                density: Density::Tilt { slopes: vec![0.5, -0.3] },
            },
        ),
    ]
}

/// Looks up a preset by name.
pub fn preset(name: &str) -> Option<MeasureSpec> {
    presets().into_iter().find(|(n, _)| *n == name).map(|(_, m)| m)
}
