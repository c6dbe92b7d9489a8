use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned box `[lower, upper]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl DomainBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let b = Self { lower, upper };
        b.validate()?;
        Ok(b)
    }

    /// `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Self {
        Self {
            lower: vec![lo; dim],
            upper: vec![hi; dim],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.lower.len() != self.upper.len() || self.lower.is_empty() {
            return Err(Error::Shape("box bounds must be non-empty and of equal length".into()));
        }
        for (i, (a, b)) in self.lower.iter().zip(&self.upper).enumerate() {
            if !(a.is_finite() && b.is_finite()) || a > b {
                return Err(Error::Validation(format!("box axis {i}: [{a}, {b}] is not an interval")));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter().zip(&self.lower).zip(&self.upper).all(|((v, a), b)| a <= v && v <= b)
    }

    pub fn side(&self, i: usize) -> f64 {
        self.upper[i] - self.lower[i]
    }

    pub fn min_side(&self) -> f64 {
        (0..self.dim()).map(|i| self.side(i)).fold(f64::INFINITY, f64::min)
    }

    pub fn has_interior(&self) -> bool {
        self.min_side() > 0.0
    }

    pub fn center(&self) -> Vec<f64> {
        self.lower.iter().zip(&self.upper).map(|(a, b)| 0.5 * (a + b)).collect()
    }

    /// The `dim - 1` dimensional face box with coordinate `axis` removed.
    pub fn drop_axis(&self, axis: usize) -> Self {
        let keep = |v: &Vec<f64>| {
            v.iter().enumerate().filter(|(i, _)| *i != axis).map(|(_, x)| *x).collect()
        };
        Self {
            lower: keep(&self.lower),
            upper: keep(&self.upper),
        }
    }

    /// Intersection with `[-r, r]^d`; `None` when empty.
    pub fn clip(&self, r: f64) -> Option<Self> {
        let lower: Vec<f64> = self.lower.iter().map(|a| a.max(-r)).collect();
        let upper: Vec<f64> = self.upper.iter().map(|b| b.min(r)).collect();
        lower.iter().zip(&upper).all(|(a, b)| a <= b).then_some(Self { lower, upper })
    }

    /// True if the open interiors intersect.
    pub fn interiors_overlap(&self, other: &Self) -> bool {
        (0..self.dim()).all(|i| {
            self.lower[i].max(other.lower[i]) < self.upper[i].min(other.upper[i])
        })
    }

    /// `max over corners of ||x||_inf`.
    pub fn max_abs_coordinate(&self) -> f64 {
        self.lower
            .iter()
            .chain(&self.upper)
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

fn check_base_point(x: &DomainBox, x0: &[f64]) -> Result<()> {
    if x0.len() != x.dim() {
        return Err(Error::Shape(format!(
            "base point has length {}, domain dimension is {}",
            x0.len(),
            x.dim()
        )));
    }
    if !x.contains(x0) {
        return Err(Error::Domain("base point lies outside the domain box".into()));
    }
    Ok(())
}

/// `|xi|_{X,x0} = sup_{x in X} |<xi, x - x0>|`, attained at a corner of the box.
pub fn seminorm_xi(xi: &[f64], x: &DomainBox, x0: &[f64]) -> Result<f64> {
    check_base_point(x, x0)?;
    if xi.len() != x.dim() {
        return Err(Error::Shape("frequency and domain dimensions differ".into()));
    }
    Ok(seminorm_unchecked(xi, x, x0))
}

pub(crate) fn seminorm_unchecked(xi: &[f64], x: &DomainBox, x0: &[f64]) -> f64 {
    let (mut hi, mut lo) = (0.0, 0.0);
    for i in 0..xi.len() {
        let p = xi[i] * (x.upper[i] - x0[i]);
        let q = xi[i] * (x.lower[i] - x0[i]);
        hi += p.max(q);
        lo += p.min(q);
    }
    f64::max(hi, -lo)
}

/// `sup_{xi != 0} ||xi||_inf / |xi|_{X,x0}`. For a box the supremum is
/// reached on a basis vector, giving `max_i 1 / max(b_i - x0_i, x0_i - a_i)`.
pub fn vartheta(x: &DomainBox, x0: &[f64]) -> Result<f64> {
    check_base_point(x, x0)?;
    if !x.has_interior() {
        return Err(Error::Domain("box has empty interior".into()));
    }
    Ok((0..x.dim())
        .map(|i| 1.0 / (x.upper[i] - x0[i]).max(x0[i] - x.lower[i]))
        .fold(0.0, f64::max))
}
