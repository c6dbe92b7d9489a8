use astro_float::{BigFloat, Consts, RoundingMode};

use crate::error::{Error, Result};

/// Working precision (bits) for deciding a ceiling that lands near an integer.
const PRECISION: usize = 256;

fn check(b: f64, c: f64, big_m: usize, d: usize, m: u64, alpha: f64) -> Result<f64> {
    if !(b.is_finite() && b > 0.0 && c.is_finite() && c > 0.0) {
        return Err(Error::Domain("B and C must be positive".into()));
    }
    if big_m == 0 || d < 2 || m == 0 {
        return Err(Error::Domain("need M >= 1, d >= 2 and m >= 1".into()));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Domain("alpha must lie in (0, 1]".into()));
    }
    let prod = b * c * big_m as f64 * d as f64 * m as f64;
    if prod <= 1.0 {
        return Err(Error::Domain(format!("B C M d m = {prod} must exceed 1")));
    }
    Ok(prod)
}

/// `ceil(((B C)^2 d m / ln(B C M d m))^(1 / (1 + alpha)))`.
///
/// The value is computed in `f64`; when it falls within `1e-9` (relative) of
/// an integer the ceiling is decided again in 256-bit arithmetic.
pub fn choose_width(b: f64, c: f64, big_m: usize, d: usize, m: u64, alpha: f64) -> Result<usize> {
    let prod = check(b, c, big_m, d, m, alpha)?;
    let ratio = (b * c).powi(2) * d as f64 * m as f64 / prod.ln();
    let value = ratio.powf(1.0 / (1.0 + alpha));
    let nearest = value.round();
    if (value - nearest).abs() > 1e-9 * value.max(1.0) {
        return Ok(value.ceil() as usize);
    }
    let rm = RoundingMode::ToEven;
    let mut cc = Consts::new().map_err(|e| Error::Numerical(format!("{e:?}")))?;
    let big = |v: f64| BigFloat::from_f64(v, PRECISION);
    let bc = big(b).mul(&big(c), PRECISION, rm);
    let dm = big(d as f64).mul(&BigFloat::from_u64(m, PRECISION), PRECISION, rm);
    let numerator = bc.mul(&bc, PRECISION, rm).mul(&dm, PRECISION, rm);
    let log = bc.mul(&big(big_m as f64), PRECISION, rm).mul(&dm, PRECISION, rm).ln(PRECISION, rm, &mut cc);
    let exponent = big(1.0).div(&big(1.0).add(&big(alpha), PRECISION, rm), PRECISION, rm);
    let exact = numerator.div(&log, PRECISION, rm).pow(&exponent, PRECISION, rm, &mut cc);
    let k = nearest as u64;
    Ok(if exact <= BigFloat::from_u64(k, PRECISION) { k as usize } else { k as usize + 1 })
}

/// First summand of the generalization bound with unit absolute constant:
/// `B C M d^{3/2} (ln(B C M d m) / ((B C)^2 d m))^{gamma / 2}`, `gamma = alpha / (1 + alpha)`.
pub fn bound_rhs(b: f64, c: f64, big_m: usize, d: usize, m: u64, alpha: f64) -> f64 {
    let prod = b * c * big_m as f64 * d as f64 * m as f64;
    let gamma = alpha / (1.0 + alpha);
    b * c * big_m as f64 * (d as f64).powf(1.5)
        * (prod.ln() / ((b * c).powi(2) * d as f64 * m as f64)).powf(gamma / 2.0)
}
