//! Sets whose boundary is locally the graph of a Barron function, and the
//! explicit three-hidden-layer ReLU classifier approximating their indicator.

mod build;
mod gadgets;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::barron::{barron_constant, BarronFunctionSpec, DomainBox};
use crate::error::{Error, Result};

pub use build::{synthesize_classifier, verify_architecture, ClassifierBuildReport};
pub use gadgets::{approx_heaviside_gadget, localize_gadget};

/// On `rect`, the set `{x : sign * x_axis <= boundary(x without axis)}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorizonPatch {
    #[serde(rename = "rect")]
    pub rectangle: DomainBox,
    /// 1-based axis along which the boundary is a graph.
    pub axis: usize,
    pub sign: i8,
    #[serde(rename = "B")]
    pub constant_b: f64,
    #[serde(rename = "boundary")]
    pub boundary_fn: BarronFunctionSpec,
}

impl HorizonPatch {
    /// 0-based axis index.
    pub fn axis_index(&self) -> usize {
        self.axis - 1
    }

    pub fn sign_f64(&self) -> f64 {
        f64::from(self.sign)
    }

    /// `x` with the patch axis removed.
    pub fn face_point(&self, x: &[f64]) -> Vec<f64> {
        let i = self.axis_index();
        x.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, v)| *v).collect()
    }

    /// `sign * x_axis <= f(face point)`, ignoring the rectangle.
    pub fn below_boundary(&self, x: &[f64]) -> bool {
        self.sign_f64() * x[self.axis_index()] <= self.boundary_fn.eval(&self.face_point(x))
    }

    fn validate(&self, d: usize, m: usize) -> Result<()> {
        let ctx = |msg: String| Error::Validation(format!("patch {m}: {msg}"));
        self.rectangle.validate()?;
        if self.rectangle.dim() != d {
            return Err(Error::Shape(format!("patch {m}: rectangle dimension differs from {d}")));
        }
        if self.axis == 0 || self.axis > d {
            return Err(ctx(format!("axis {} outside 1..={d}", self.axis)));
        }
        if self.sign != 1 && self.sign != -1 {
            return Err(ctx("sign must be +1 or -1".into()));
        }
        if !(self.constant_b.is_finite() && self.constant_b > 0.0) {
            return Err(ctx("B must be positive".into()));
        }
        self.boundary_fn.validate()?;
        if self.boundary_fn.domain != self.rectangle.drop_axis(self.axis_index()) {
            return Err(ctx("boundary domain must equal the rectangle with the axis removed".into()));
        }
        let c = barron_constant(&self.boundary_fn);
        if c > self.constant_b * (1.0 + 1e-12) {
            return Err(ctx(format!("boundary has Barron constant {c} > B = {}", self.constant_b)));
        }
        Ok(())
    }
}

/// A union of horizon patches over rectangles with disjoint interiors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarronBoundarySet {
    #[serde(rename = "dim")]
    pub ambient_dim: usize,
    pub patches: Vec<HorizonPatch>,
}

impl BarronBoundarySet {
    pub fn new(ambient_dim: usize, patches: Vec<HorizonPatch>) -> Result<Self> {
        let s = Self { ambient_dim, patches };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ambient_dim < 2 {
            return Err(Error::Validation("ambient dimension must be at least 2".into()));
        }
        if self.patches.is_empty() {
            return Err(Error::Validation("at least one patch is required".into()));
        }
        for (m, p) in self.patches.iter().enumerate() {
            p.validate(self.ambient_dim, m)?;
        }
        let mut clashes = vec![];
        for j in 0..self.patches.len() {
            for k in j + 1..self.patches.len() {
                if self.patches[j].rectangle.interiors_overlap(&self.patches[k].rectangle) {
                    clashes.push(format!("({j}, {k})"));
                }
            }
        }
        if !clashes.is_empty() {
            return Err(Error::Validation(format!(
                "rectangle interiors overlap for patch pairs {}",
                clashes.join(", ")
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.patches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patches.is_empty()
    }

    /// `max |corner coordinate|` over all rectangles.
    pub fn radius(&self) -> f64 {
        self.patches.iter().map(|p| p.rectangle.max_abs_coordinate()).fold(0.0, f64::max)
    }

    /// Largest patch constant `B`.
    pub fn max_b(&self) -> f64 {
        self.patches.iter().map(|p| p.constant_b).fold(0.0, f64::max)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: Self = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Indicator of the set; a point on a shared face belongs to the lowest-index
/// rectangle that contains it.
pub fn indicator_eval(omega: &BarronBoundarySet, x: &[f64]) -> u8 {
    omega
        .patches
        .iter()
        .find(|p| p.rectangle.contains(x))
        .map_or(0, |p| u8::from(p.below_boundary(x)))
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// `{x_2 <= 0}` on `[-1, 1]^2`.
    pub fn flat_horizon() -> BarronBoundarySet {
        let rect = DomainBox::cube(2, -1.0, 1.0);
        let face = rect.drop_axis(1);
        BarronBoundarySet::new(
            2,
            vec![HorizonPatch {
                rectangle: rect,
                axis: 2,
                sign: 1,
                constant_b: 1.0,
                boundary_fn: BarronFunctionSpec::constant_fn(face, vec![0.0], 0.0),
            }],
        )
        .unwrap()
    }

    /// `{x_2 <= 0.4 cos(2 x_1)}` on `[-1, 1]^2`.
    pub fn cosine_horizon() -> BarronBoundarySet {
        let rect = DomainBox::cube(2, -1.0, 1.0);
        let face = rect.drop_axis(1);
        BarronBoundarySet::new(
            2,
            vec![HorizonPatch {
                rectangle: rect,
                axis: 2,
                sign: 1,
                constant_b: 1.0,
                boundary_fn: BarronFunctionSpec::cosine(face, vec![2.0], 0.4),
            }],
        )
        .unwrap()
    }
}
