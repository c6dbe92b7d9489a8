use std::path::Path;

use serde::{Deserialize, Serialize};

use super::domain::{seminorm_unchecked, DomainBox};
use crate::error::{Error, Result};

/// One point mass `F_k = |F_k| e^{i theta_k}` of a discrete spectral measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralAtom {
    #[serde(rename = "freq")]
    pub frequency: Vec<f64>,
    pub modulus: f64,
    pub phase: f64,
}

/// A Barron function `f(x) = c + sum_k Re[(e^{i<x,xi_k>} - e^{i<x0,xi_k>}) F_k]`
/// on a box domain.
///
/// Taking the real part is the same as adding the mirrored atom `(-xi, conj F)`
/// with half the weight, so any atom list yields a real function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarronFunctionSpec {
    pub domain: DomainBox,
    pub base_point: Vec<f64>,
    pub constant: f64,
    #[serde(default)]
    pub atoms: Vec<SpectralAtom>,
}

impl BarronFunctionSpec {
    pub fn validate(&self) -> Result<()> {
        self.domain.validate()?;
        let d = self.domain.dim();
        if self.base_point.len() != d {
            return Err(Error::Shape(format!(
                "base point has length {}, domain dimension is {d}",
                self.base_point.len()
            )));
        }
        if !self.domain.contains(&self.base_point) {
            return Err(Error::Domain("base point lies outside the domain box".into()));
        }
        if !self.constant.is_finite() {
            return Err(Error::Validation("constant must be finite".into()));
        }
        for (k, atom) in self.atoms.iter().enumerate() {
            if atom.frequency.len() != d {
                return Err(Error::Shape(format!("atom {k}: frequency has wrong dimension")));
            }
            if !(atom.modulus.is_finite() && atom.modulus >= 0.0) {
                return Err(Error::Validation(format!("atom {k}: modulus must be finite and >= 0")));
            }
            if !atom.phase.is_finite() || atom.frequency.iter().any(|v| !v.is_finite()) {
                return Err(Error::Validation(format!("atom {k}: non-finite frequency or phase")));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    /// `f = c` on the whole domain.
    pub fn constant_fn(domain: DomainBox, base_point: Vec<f64>, c: f64) -> Self {
        Self { domain, base_point, constant: c, atoms: vec![] }
    }

    /// `x -> amplitude * cos(<omega, x>)` with base point 0, written as the mirrored
    /// pair of atoms `±omega` with modulus `amplitude / 2`.
    pub fn cosine(domain: DomainBox, omega: Vec<f64>, amplitude: f64) -> Self {
        let d = domain.dim();
        let neg: Vec<f64> = omega.iter().map(|v| -v).collect();
        Self {
            domain,
            base_point: vec![0.0; d],
            constant: amplitude,
            atoms: vec![
                SpectralAtom { frequency: omega, modulus: 0.5 * amplitude.abs(), phase: phase_of(amplitude) },
                SpectralAtom { frequency: neg, modulus: 0.5 * amplitude.abs(), phase: phase_of(amplitude) },
            ],
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut acc = self.constant;
        for atom in &self.atoms {
            let at_x: f64 = dot(&atom.frequency, x);
            let at_x0: f64 = dot(&atom.frequency, &self.base_point);
            acc += atom.modulus * ((at_x + atom.phase).cos() - (at_x0 + atom.phase).cos());
        }
        acc
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

fn phase_of(amplitude: f64) -> f64 {
    if amplitude < 0.0 {
        std::f64::consts::PI
    } else {
        0.0
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Smallest `C` with `f in B_C(X, x0)` for the discrete measure:
/// `max(|c|, sum_k |xi_k|_{X,x0} |F_k|)`.
pub fn barron_constant(spec: &BarronFunctionSpec) -> f64 {
    let moment: f64 = spec
        .atoms
        .iter()
        .map(|a| seminorm_unchecked(&a.frequency, &spec.domain, &spec.base_point) * a.modulus)
        .sum();
    spec.constant.abs().max(moment)
}

pub fn eval_barron(spec: &BarronFunctionSpec, x: &[f64]) -> f64 {
    spec.eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn square() -> DomainBox {
        DomainBox::cube(2, -1.0, 1.0)
    }

    #[test]
    fn constant_only() {
        let s = BarronFunctionSpec::constant_fn(square(), vec![0.0, 0.0], 0.7);
        assert_eq!(barron_constant(&s), 0.7);
        assert_eq!(s.eval(&[0.3, -0.9]), 0.7);
    }

    #[test]
    fn single_atom_constant() {
        let mut s = BarronFunctionSpec::constant_fn(square(), vec![0.0, 0.0], 0.0);
        s.atoms.push(SpectralAtom { frequency: vec![3.0, 0.0], modulus: 1.0, phase: 0.0 });
        assert_eq!(barron_constant(&s), 3.0);
    }

    #[test]
    fn mirrored_pair_constant() {
        let s = BarronFunctionSpec::cosine(square(), vec![1.5, -0.5], 1.0);
        assert_eq!(barron_constant(&s), 2.0);
    }

    #[test]
    fn value_at_base_point() {
        let mut s = BarronFunctionSpec::cosine(square(), vec![3.0, 2.0], 1.0);
        s.base_point = vec![0.25, -0.5];
        s.atoms.push(SpectralAtom { frequency: vec![-1.0, 4.0], modulus: 0.3, phase: 1.1 });
        assert_eq!(s.eval(&s.base_point.clone()), s.constant);
    }

    #[test]
    fn cosine_matches_trigonometry() {
        let omega = vec![3.0, 2.0];
        let s = BarronFunctionSpec::cosine(square(), omega.clone(), 1.0);
        let x = [std::f64::consts::PI / 3.0, 0.0];
        assert!((s.eval(&x) + 1.0).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let x = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            assert!((s.eval(&x) - dot(&omega, &x).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn json_format() {
        let text = r#"{"domain":{"lower":[-1,-1],"upper":[1,1]},"base_point":[0,0],"constant":1.0,
            "atoms":[{"freq":[3,2],"modulus":0.5,"phase":0},{"freq":[-3,-2],"modulus":0.5,"phase":0}]}"#;
        let s = BarronFunctionSpec::from_json(text).unwrap();
        assert_eq!(s, BarronFunctionSpec::cosine(square(), vec![3.0, 2.0], 1.0));
        let bad = r#"{"domain":{"lower":[-1],"upper":[1]},"base_point":[5],"constant":0}"#;
        assert!(BarronFunctionSpec::from_json(bad).is_err());
    }
}
