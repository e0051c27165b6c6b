//! Absorbing square quantum well: depth `U` for `r < L`, with the short-range
//! boundary condition `A + eta B = 0` on the inner solution
//! `u(r) = A e^{ikr} + B e^{-ikr}`. `|eta| <= 1`; `eta = 1` is the
//! nonabsorbing well, `eta = 0` full absorption.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WellSpec {
    pub depth: f64,
    pub range: f64,
    pub eta: Complex64,
}

impl WellSpec {
    pub fn new(depth: f64, range: f64, eta: Complex64) -> Result<Self> {
        if !(depth > 0.0 && depth.is_finite()) {
            return Err(Error::invalid("well depth must be positive"));
        }
        if !(range > 0.0 && range.is_finite()) {
            return Err(Error::invalid("well range must be positive"));
        }
        if !(eta.norm() <= 1.0 + 1e-15) {
            return Err(Error::invalid(format!("|eta| = {} exceeds 1", eta.norm())));
        }
        Ok(Self { depth, range, eta })
    }

    /// Well with the depth chosen so that `sqrt(2U) L = alpha`.
    pub fn from_alpha(alpha: f64, range: f64, eta: Complex64) -> Result<Self> {
        Self::new(alpha * alpha / (2.0 * range * range), range, eta)
    }

    /// `alpha = sqrt(2U) L`.
    pub fn alpha(&self) -> f64 {
        (2.0 * self.depth).sqrt() * self.range
    }

    pub fn with_depth(&self, depth: f64) -> Result<Self> {
        Self::new(depth, self.range, self.eta)
    }
}

/// `eta` from modulus and phase in units of pi.
pub fn eta_from_polar(modulus: f64, phase_over_pi: f64) -> Complex64 {
    Complex64::from_polar(modulus, PI * phase_over_pi)
}

/// `A`, `B`, `C` of the scattering solution divided by the incoming amplitude `D`
/// of the outer solution `u(r) = C e^{i kappa r} + D e^{-i kappa r}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AqwCoefficients {
    pub a_tilde: Complex64,
    pub b_tilde: Complex64,
    pub c_tilde: Complex64,
}

struct Matching {
    kappa: Complex64,
    k: Complex64,
    p: Complex64,
    q: Complex64,
}

fn matching(kappa: Complex64, well: &WellSpec) -> Matching {
    let k = (kappa * kappa + 2.0 * well.depth).sqrt();
    let l = well.range;
    let plus = (I * k * l).exp();
    let minus = (-I * k * l).exp();
    Matching {
        kappa,
        k,
        p: well.eta * plus - minus,
        q: well.eta * plus + minus,
    }
}

/// Scattering coefficients at real energy `E > 0`.
pub fn coefficients(energy: f64, well: &WellSpec) -> Result<AqwCoefficients> {
    if !(energy > 0.0 && energy.is_finite()) {
        return Err(Error::invalid("energy must be positive"));
    }
    let m = matching(c64((2.0 * energy).sqrt(), 0.0), well);
    let denom = m.kappa * m.p - m.k * m.q;
    if denom.norm() <= 1e-14 * (m.kappa.norm() * m.p.norm() + m.k.norm() * m.q.norm()) {
        return Err(Error::DegenerateWell(energy));
    }
    let phase = (-I * m.kappa * well.range).exp();
    Ok(AqwCoefficients {
        a_tilde: 2.0 * m.kappa * well.eta * phase / denom,
        b_tilde: -2.0 * m.kappa * phase / denom,
        c_tilde: phase * phase * (m.kappa * m.p + m.k * m.q) / denom,
    })
}

/// `tan(delta) = (C + 1) / (i (C - 1))`, from the outer amplitude ratio.
pub fn tan_phase_shift(coeffs: &AqwCoefficients) -> Complex64 {
    (coeffs.c_tilde + 1.0) / (I * (coeffs.c_tilde - 1.0))
}

/// `a = -tan(delta)/kappa` via [`coefficients`]; real `E > 0` only.
pub fn scattering_length_from_coefficients(energy: f64, well: &WellSpec) -> Result<Complex64> {
    let kappa = (2.0 * energy).sqrt();
    Ok(-tan_phase_shift(&coefficients(energy, well)?) / kappa)
}

/// True when `kappa` lies outside the region where the energy-dependent
/// scattering length has been validated (`Im kappa < 0` and `|Im kappa| > |Re kappa|`).
pub fn kappa_branch_warning(kappa: Complex64) -> bool {
    kappa.im < 0.0 && kappa.im.abs() > kappa.re.abs()
}

/// Energy-dependent scattering length for complex `kappa`:
/// `a = (i/kappa) [1 + 2 (kappa P - k Q) / (kappa P (e - 1) + k Q (e + 1))]`,
/// `e = exp(-2 i kappa L)`, `k = sqrt(kappa^2 + 2U)` (principal root).
///
/// `a(kappa)` is even in `kappa`, so the branch of `kappa` does not matter.
pub fn energy_dependent_a(kappa: Complex64, well: &WellSpec) -> Result<Complex64> {
    if kappa == c64(0.0, 0.0) {
        return Err(Error::ZeroKappa);
    }
    let m = matching(kappa, well);
    let e = (-2.0 * I * kappa * well.range).exp();
    let denom = m.kappa * m.p * (e - 1.0) + m.k * m.q * (e + 1.0);
    if denom == c64(0.0, 0.0) {
        return Err(Error::Pole(kappa));
    }
    let value = I / kappa * (1.0 + 2.0 * (m.kappa * m.p - m.k * m.q) / denom);
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::NonFinite("energy_dependent_a"));
    }
    Ok(value)
}

/// Zero-energy scattering length
/// `a = L [1 + i (eta e^{i alpha} - e^{-i alpha}) / (alpha (eta e^{i alpha} + e^{-i alpha}))]`.
pub fn zero_energy_a(well: &WellSpec) -> Result<Complex64> {
    let alpha = well.alpha();
    let plus = well.eta * (I * alpha).exp();
    let minus = (-I * alpha).exp();
    let denom = plus + minus;
    if denom.norm() <= 1e-12 {
        let poles = resonance_poles(well.eta, alpha - 1e-6, alpha + 1e-6);
        let pole = poles.first().copied().unwrap_or(alpha);
        return Err(Error::ResonancePole {
            alpha: pole,
            lo: pole - 1e-9,
            hi: pole + 1e-9,
        });
    }
    Ok(well.range * (1.0 + I * (plus - minus) / (alpha * denom)))
}

/// Values of `alpha` in `[lo, hi]` where `eta e^{i alpha} + e^{-i alpha} = 0`:
/// only for `|eta| = 1`, at `2 alpha + arg(eta) = pi (mod 2 pi)`.
pub fn resonance_poles(eta: Complex64, lo: f64, hi: f64) -> Vec<f64> {
    if (eta.norm() - 1.0).abs() > 1e-12 {
        return Vec::new();
    }
    let phi = eta.arg();
    let first = (PI - phi) / 2.0;
    let k0 = ((lo - first) / PI).ceil() as i64;
    let mut poles = Vec::new();
    let mut k = k0;
    loop {
        let alpha = first + k as f64 * PI;
        if alpha > hi {
            break;
        }
        if alpha >= lo {
            poles.push(alpha);
        }
        k += 1;
    }
    poles
}
