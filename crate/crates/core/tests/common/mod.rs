//! Shared oracles and identity checks for the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use trapreact::specfun::{cgamma, kummer_m, kummer_m_derivative, tricomi_u, tricomi_u_connection, tricomi_u_derivative};
use trapreact::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rel(x: Complex64, y: Complex64) -> f64 {
    (x - y).norm() / y.norm().max(f64::MIN_POSITIVE)
}

/// `|Gamma(z + 1) / (z Gamma(z)) - 1|`.
pub fn gamma_recurrence_error(z: Complex64) -> f64 {
    rel(cgamma(z + 1.0).unwrap(), z * cgamma(z).unwrap())
}

/// `|Gamma(z) Gamma(1 - z) sin(pi z) / pi - 1|`.
pub fn gamma_reflection_error(z: Complex64) -> f64 {
    let lhs = cgamma(z).unwrap() * cgamma(1.0 - z).unwrap() * (PI * z).sin() / PI;
    (lhs - 1.0).norm()
}

/// `|M(a,b,z) - e^z M(b-a,b,-z)|` relative to `M(a,b,z)`.
pub fn kummer_transformation_error(a: Complex64, b: Complex64, z: Complex64) -> f64 {
    let direct = kummer_m(a, b, z).unwrap();
    let transformed = z.exp() * kummer_m(b - a, b, -z).unwrap();
    rel(transformed, direct)
}

/// Reference values `(a, b, z, M(a, b, z))` from a 40-digit evaluation,
/// `a` and `Im b` uniform in [-5, 5] and [-3, 3], `Re b` in [0.5, 5], `|z| <= 20`.
pub fn kummer_reference() -> [(Complex64, Complex64, Complex64, Complex64); 1000] {
    include!("../data/kummer_random.in")
}

/// Connection formula against `tricomi_u`.
pub fn connection_error(a: Complex64, z: Complex64) -> f64 {
    let b = c(1.5, 0.0);
    rel(tricomi_u_connection(a, b, z).unwrap(), tricomi_u(a, b, z).unwrap())
}

/// `M U' - M' U` against `-Gamma(b)/Gamma(a) z^{-b} e^z`.
pub fn wronskian_error(a: Complex64, b: Complex64, z: Complex64) -> f64 {
    let m = kummer_m(a, b, z).unwrap();
    let dm = kummer_m_derivative(a, b, z).unwrap();
    let u = tricomi_u(a, b, z).unwrap();
    let du = tricomi_u_derivative(a, b, z).unwrap();
    let expected = -cgamma(b).unwrap() / cgamma(a).unwrap() * z.powc(-b) * z.exp();
    rel(m * du - dm * u, expected)
}

/// Distance from `z` to the nearest non-positive integer.
pub fn pole_distance(z: Complex64) -> f64 {
    if z.re > 0.0 {
        return z.norm();
    }
    let n = z.re.round().min(0.0);
    (z - n).norm()
}

/// Sampling domains for the identity checks, shared by the property tests and
/// the acceptance report.
pub mod domain {
    use super::{c, pole_distance};
    use rand::Rng;
    use trapreact::Complex64;

    /// Uniform in the disk `|z| <= radius` (or the half-disk `Re z >= 0`).
    pub fn disk(rng: &mut impl Rng, radius: f64, right_half: bool) -> Complex64 {
        let r = radius * rng.random::<f64>().sqrt();
        let half = std::f64::consts::FRAC_PI_2;
        let theta = if right_half {
            rng.random_range(-half..=half)
        } else {
            rng.random_range(-2.0 * half..2.0 * half)
        };
        Complex64::from_polar(r, theta)
    }

    /// `|z| <= 20`, at least 0.1 from the poles of Gamma.
    pub fn gamma_argument(rng: &mut impl Rng) -> Complex64 {
        loop {
            let z = disk(rng, 20.0, false);
            if pole_distance(z) >= 0.1 {
                return z;
            }
        }
    }

    pub fn kummer_arguments(rng: &mut impl Rng) -> (Complex64, Complex64, Complex64) {
        let a = c(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
        let b = c(rng.random_range(0.5..5.0), rng.random_range(-3.0..3.0));
        (a, b, disk(rng, 20.0, false))
    }

    /// `b = 3/2`, `Re z > 0`, `0.05 <= |z| <= 2`: beyond that the two terms of
    /// the connection formula cancel by more digits than the tolerance allows.
    pub fn connection_arguments(rng: &mut impl Rng) -> (Complex64, Complex64) {
        let a = c(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        loop {
            let z = disk(rng, 2.0, true);
            if z.norm() >= 0.05 && z.re > 0.0 {
                return (a, z);
            }
        }
    }

    /// `a` away from the poles of Gamma, real `b` in [0.5, 3.5] at least 0.05
    /// from an integer, `Re z >= 0`, `0.1 <= |z| <= 10`.
    pub fn wronskian_arguments(rng: &mut impl Rng) -> (Complex64, Complex64, Complex64) {
        let a = loop {
            let a = c(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            if pole_distance(a) >= 0.1 {
                break a;
            }
        };
        let b = loop {
            let b: f64 = rng.random_range(0.5..3.5);
            if (b - b.round()).abs() >= 0.05 {
                break c(b, 0.0);
            }
        };
        loop {
            let z = disk(rng, 10.0, true);
            if z.norm() >= 0.1 {
                return (a, b, z);
            }
        }
    }
}
