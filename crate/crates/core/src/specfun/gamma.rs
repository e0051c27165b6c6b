use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Arguments closer than this to a non-positive integer are treated as poles.
pub const POLE_TOLERANCE: f64 = 1e-12;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

// B_{2k} / (2k (2k - 1)), k = 1..8
const STIRLING_COEF: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

// B_{2k} / (2k), k = 1..7
const DIGAMMA_COEF: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
];

// Asymptotic expansions are used once the shifted argument satisfies
// |w| >= ASYMPTOTIC_RADIUS and Re w >= ASYMPTOTIC_MIN_RE.
const ASYMPTOTIC_RADIUS: f64 = 15.0;
const ASYMPTOTIC_MIN_RE: f64 = 10.0;

pub(crate) fn ensure_finite(z: Complex64, what: &'static str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// True when `z` is within `tol` of one of 0, -1, -2, ...
pub fn is_nonpositive_integer(z: Complex64, tol: f64) -> bool {
    z.im.abs() <= tol && z.re <= tol && (z.re - z.re.round()).abs() <= tol
}

/// True when `z` is within `tol` of any integer.
pub(crate) fn is_integer(z: Complex64, tol: f64) -> bool {
    z.im.abs() <= tol && (z.re - z.re.round()).abs() <= tol
}

fn parity_sign(n: f64) -> f64 {
    if n.rem_euclid(2.0) == 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// `sin(pi z)` with the real part reduced first, so zeros at integers are exact.
pub(crate) fn sin_pi(z: Complex64) -> Complex64 {
    let n = z.re.round();
    let w = Complex64::new(z.re - n, z.im);
    (w * PI).sin() * parity_sign(n)
}

pub(crate) fn cos_pi(z: Complex64) -> Complex64 {
    let n = z.re.round();
    let w = Complex64::new(z.re - n, z.im);
    (w * PI).cos() * parity_sign(n)
}

/// Lanczos pieces for Re z >= 1/2: returns (log prefactor, rational sum) with
/// `Gamma(z) = exp(log_prefactor) * sum`.
fn lanczos_parts(z: Complex64) -> (Complex64, Complex64) {
    let zm1 = z - 1.0;
    let mut sum = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        sum += c / (zm1 + i as f64);
    }
    let t = zm1 + LANCZOS_G + 0.5;
    let log_prefactor = (zm1 + 0.5) * t.ln() - t + LN_SQRT_2PI;
    (log_prefactor, sum)
}

/// Complex Gamma function.
///
/// Lanczos approximation on Re z >= 1/2 and the reflection formula elsewhere.
pub fn cgamma(z: Complex64) -> Result<Complex64> {
    ensure_finite(z, "cgamma")?;
    if is_nonpositive_integer(z, POLE_TOLERANCE) {
        return Err(Error::Pole(z));
    }
    if z.re < 0.5 {
        let s = sin_pi(z);
        let value = match cgamma(1.0 - z) {
            Ok(g) => PI / (s * g),
            // Gamma(1 - z) is huge, so Gamma(z) is tiny.
            Err(Error::Overflow(_)) => clgamma(z)?.exp(),
            Err(e) => return Err(e),
        };
        ensure_finite(value, "cgamma").map_err(|_| Error::Overflow(z))?;
        return Ok(value);
    }
    let (log_prefactor, sum) = lanczos_parts(z);
    if (log_prefactor + sum.ln()).re > 709.0 {
        return Err(Error::Overflow(z));
    }
    Ok(log_prefactor.exp() * sum)
}

/// Reciprocal Gamma function `1 / Gamma(z)`, an entire function.
///
/// Returns exactly zero at the poles of Gamma.
pub fn crgamma(z: Complex64) -> Result<Complex64> {
    ensure_finite(z, "crgamma")?;
    if z.re < 0.5 {
        let s = sin_pi(z);
        if s == Complex64::new(0.0, 0.0) {
            return Ok(s);
        }
        if is_nonpositive_integer(z, POLE_TOLERANCE) {
            // Within rounding of a pole: the sine carries the small factor.
            let g = cgamma(1.0 - z)?;
            return Ok(s * g / PI);
        }
        let g = cgamma(1.0 - z)?;
        let value = s * g / PI;
        ensure_finite(value, "crgamma").map_err(|_| Error::Overflow(z))?;
        return Ok(value);
    }
    let (log_prefactor, sum) = lanczos_parts(z);
    if -(log_prefactor + sum.ln()).re > 709.0 {
        return Err(Error::Overflow(z));
    }
    Ok((-log_prefactor).exp() / sum)
}

/// Principal branch of `ln Gamma(z)`, analytic off the negative real axis.
///
/// Computed independently of [`cgamma`]: upward recurrence
/// `ln Gamma(z) = ln Gamma(z + n) - sum ln(z + k)` followed by Stirling's series.
/// The recurrence with principal logarithms selects the principal branch.
pub fn clgamma(z: Complex64) -> Result<Complex64> {
    ensure_finite(z, "clgamma")?;
    if is_nonpositive_integer(z, POLE_TOLERANCE) {
        return Err(Error::Pole(z));
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.re < ASYMPTOTIC_MIN_RE || w.norm() < ASYMPTOTIC_RADIUS {
        shift += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut power = inv;
    for &c in &STIRLING_COEF {
        series += c * power;
        power *= inv2;
    }
    Ok((w - 0.5) * w.ln() - w + LN_SQRT_2PI + series - shift)
}

/// Digamma function `psi(z) = Gamma'(z) / Gamma(z)`.
pub fn cdigamma(z: Complex64) -> Result<Complex64> {
    ensure_finite(z, "cdigamma")?;
    if is_nonpositive_integer(z, POLE_TOLERANCE) {
        return Err(Error::Pole(z));
    }
    if z.re < 0.5 {
        let cot = cos_pi(z) / sin_pi(z);
        return Ok(cdigamma(1.0 - z)? - PI * cot);
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.norm() < ASYMPTOTIC_RADIUS {
        shift += w.inv();
        w += 1.0;
    }
    let inv2 = (w * w).inv();
    let mut series = Complex64::new(0.0, 0.0);
    let mut power = inv2;
    for &c in &DIGAMMA_COEF {
        series += c * power;
        power *= inv2;
    }
    Ok(w.ln() - 0.5 / w - series - shift)
}
