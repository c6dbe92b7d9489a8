//! Discrete conversion of a ReLU integral representation into a Heaviside one.
//!
//! For `|y| <= C` we have `rho(y) = ∫_0^C H(y - t) dt`. A ReLU atom
//! `a rho(<w, x> + c)` is first normalized by `theta = |w|_2 + |c|`, so the
//! argument stays inside `[-C, C]` for `|x| <= R` and `C = 1 + R`, and the
//! `t`-integral is replaced by the midpoint rule with `Q` nodes.

use serde::{Deserialize, Serialize};

use super::dot;
use crate::error::{Error, Result};
use crate::nn::relu;

/// One atom `a rho(<w, x> + c)` of a ReLU representation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReluAtom {
    pub outer: f64,
    pub direction: Vec<f64>,
    pub offset: f64,
}

/// One atom `a H(<w, x> + c)` of a Heaviside representation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeavisideAtom {
    pub outer: f64,
    pub direction: Vec<f64>,
    pub offset: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct HeavisideRepresentation {
    pub atoms: Vec<HeavisideAtom>,
}

/// Step function with `H(0) = 1`.
pub fn heaviside(y: f64) -> f64 {
    if y >= 0.0 {
        1.0
    } else {
        0.0
    }
}

impl HeavisideRepresentation {
    /// `sum |a|`, accumulated with Neumaier compensation because a
    /// conversion produces many equal small weights.
    pub fn norm(&self) -> f64 {
        let (mut sum, mut carry) = (0.0f64, 0.0f64);
        for a in &self.atoms {
            let v = a.outer.abs();
            let t = sum + v;
            carry += if sum.abs() >= v { (sum - t) + v } else { (v - t) + sum };
            sum = t;
        }
        sum + carry
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.atoms
            .iter()
            .map(|a| a.outer * heaviside(dot(&a.direction, x) + a.offset))
            .sum()
    }
}

/// `sum |a| (|w|_2 + |c|)`.
pub fn relu_norm(atoms: &[ReluAtom]) -> f64 {
    atoms.iter().map(|a| a.outer.abs() * (l2(&a.direction) + a.offset.abs())).sum()
}

pub fn eval_relu_representation(atoms: &[ReluAtom], x: &[f64]) -> f64 {
    atoms.iter().map(|a| a.outer * relu(dot(&a.direction, x) + a.offset)).sum()
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|t| t * t).sum::<f64>().sqrt()
}

/// Converts ReLU atoms into `Q` Heaviside atoms each, exact on `|x|_2 <= R`
/// up to midpoint-rule error. Atoms with `w = 0` and `c = 0` are dropped.
pub fn relu_to_heaviside(atoms: &[ReluAtom], radius: f64, nodes: usize) -> Result<HeavisideRepresentation> {
    if nodes == 0 {
        return Err(Error::InvalidConfig("Q must be at least 1".into()));
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidConfig("R must be positive".into()));
    }
    let cap = 1.0 + radius;
    let step = cap / nodes as f64;
    let mut out = Vec::with_capacity(atoms.len() * nodes);
    for atom in atoms {
        let theta = l2(&atom.direction) + atom.offset.abs();
        if theta == 0.0 {
            continue;
        }
        let direction: Vec<f64> = atom.direction.iter().map(|w| w / theta).collect();
        let outer = atom.outer * theta * step;
        for q in 0..nodes {
            let t = (q as f64 + 0.5) * step;
            out.push(HeavisideAtom { outer, direction: direction.clone(), offset: atom.offset / theta - t });
        }
    }
    Ok(HeavisideRepresentation { atoms: out })
}

/// Largest `|mu_rho(x) - nu_H(x)|` over `points`.
pub fn max_deviation(atoms: &[ReluAtom], nu: &HeavisideRepresentation, points: &[Vec<f64>]) -> f64 {
    points
        .iter()
        .map(|x| (eval_relu_representation(atoms, x) - nu.eval(x)).abs())
        .fold(0.0, f64::max)
}
