use num_complex::Complex64;

use super::dd::Cdd;
use super::gamma::{cgamma, crgamma, ensure_finite, is_integer, is_nonpositive_integer};
use crate::error::{Error, Result};

const MAX_SERIES_TERMS: usize = 500;
const SERIES_EPS: f64 = 1e-16;
const INTEGER_TOL: f64 = 1e-12;
/// Largest term over the sum beyond which the f64 series is redone in double-double.
const CANCELLATION_LIMIT: f64 = 10.0;
const DD_SERIES_EPS: f64 = 1e-32;

/// Radius within which the two-M connection formula is used.
const CONNECTION_RADIUS: f64 = 1.0;
/// Smallest radius at which the asymptotic series of U is attempted.
const ASYMPTOTIC_MIN_RADIUS: f64 = 20.0;
const ASYMPTOTIC_MAX_RADIUS: f64 = 5.0e3;
const ASYMPTOTIC_EPS: f64 = 1e-17;
const MAX_TAYLOR_TERMS: usize = 600;
/// Taylor terms peak near `e^|h|` before converging, so long steps cost digits.
const MAX_TAYLOR_STEP: f64 = 2.0;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Kummer's confluent hypergeometric function `M(a, b, z) = 1F1(a; b; z)`.
///
/// Power series for Re z >= 0; for Re z < 0 the Kummer transformation
/// `M(a, b, z) = e^z M(b - a, b, -z)` removes the alternating signs. Where
/// the terms still cancel by more than a digit (mostly large |Im z|)
/// the series is summed in double-double. Accurate to ~1e-10 relative for
/// |z| <= 50; larger |z| works while the series converges within 500 terms,
/// but is not validated.
pub fn kummer_m(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    ensure_finite(a, "kummer_m")?;
    ensure_finite(b, "kummer_m")?;
    ensure_finite(z, "kummer_m")?;
    if is_nonpositive_integer(b, INTEGER_TOL) {
        return Err(Error::ParameterPole(b));
    }
    if a == zero() || z == zero() {
        return Ok(one());
    }
    if z.re < 0.0 {
        Ok(z.exp() * m_series(b - a, b, -z)?)
    } else {
        m_series(a, b, z)
    }
}

/// `dM/dz = (a / b) M(a + 1, b + 1, z)`.
pub fn kummer_m_derivative(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    if a == zero() {
        return Ok(zero());
    }
    Ok(a / b * kummer_m(a + 1.0, b + 1.0, z)?)
}

pub(crate) fn m_series(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    let mut term = one();
    let mut sum = one();
    let mut largest: f64 = 1.0;
    for n in 0..MAX_SERIES_TERMS {
        let nf = n as f64;
        let ratio = (a + nf) / (b + nf) * z / (nf + 1.0);
        term *= ratio;
        sum += term;
        largest = largest.max(term.norm());
        if term == zero() || (term.norm() <= SERIES_EPS * sum.norm() && ratio.norm() < 1.0) {
            if largest > CANCELLATION_LIMIT * sum.norm() {
                return m_series_dd(a, b, z);
            }
            return Ok(sum);
        }
    }
    Err(Error::Convergence {
        function: "kummer_m",
        terms: MAX_SERIES_TERMS,
    })
}

/// The same series summed in double-double, for arguments where the terms
/// cancel (large |Im z|, or `a` with a large negative real part).
fn m_series_dd(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    let (a, b, z) = (Cdd::new(a), Cdd::new(b), Cdd::new(z));
    let mut term = Cdd::new(one());
    let mut sum = term;
    for n in 0..MAX_SERIES_TERMS {
        let nf = Cdd::new(Complex64::new(n as f64, 0.0));
        let ratio = a
            .add(nf)
            .div(b.add(nf))
            .mul(z)
            .div(Cdd::new(Complex64::new(n as f64 + 1.0, 0.0)));
        term = term.mul(ratio);
        sum = sum.add(term);
        if term.norm() == 0.0 || (term.norm() <= DD_SERIES_EPS * sum.norm() && ratio.norm() < 1.0) {
            return Ok(sum.to_c64());
        }
    }
    Err(Error::Convergence {
        function: "kummer_m",
        terms: MAX_SERIES_TERMS,
    })
}

/// Tricomi's confluent hypergeometric function `U(a, b, z)`, principal branch
/// with the cut along the negative real axis.
///
/// Evaluation routes:
/// * `a` or `a - b + 1` a non-positive integer: the terminating expansion (exact, any `b`);
/// * `|z| >= 20` where the asymptotic series converges to full precision: that series;
/// * `|z| <= 1`: the two-M connection formula (requires non-integer `b`);
/// * otherwise: the asymptotic series far to the right of `z`, carried to `z`
///   by Taylor steps of the confluent hypergeometric equation.
pub fn tricomi_u(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    Ok(tricomi_u_with_derivative(a, b, z)?.0)
}

/// `dU/dz = -a U(a + 1, b + 1, z)`.
pub fn tricomi_u_derivative(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    if a == zero() {
        return Ok(zero());
    }
    Ok(-a * tricomi_u(a + 1.0, b + 1.0, z)?)
}

fn check_u_arguments(a: Complex64, b: Complex64, z: Complex64) -> Result<()> {
    ensure_finite(a, "tricomi_u")?;
    ensure_finite(b, "tricomi_u")?;
    ensure_finite(z, "tricomi_u")?;
    if z == zero() || (z.im == 0.0 && z.re < 0.0) {
        return Err(Error::Branch(z));
    }
    Ok(())
}

fn tricomi_u_with_derivative(
    a: Complex64,
    b: Complex64,
    z: Complex64,
) -> Result<(Complex64, Complex64)> {
    check_u_arguments(a, b, z)?;
    if let Some(u) = terminating_u(a, b, z) {
        let du = if a == zero() {
            zero()
        } else {
            -a * terminating_u(a + 1.0, b + 1.0, z).expect("shifted parameters still terminate")
        };
        return Ok((u, du));
    }
    if is_integer(b, INTEGER_TOL) {
        return Err(Error::ParameterPole(b));
    }
    if z.norm() >= ASYMPTOTIC_MIN_RADIUS {
        if let Some(values) = asymptotic_with_derivative(a, b, z) {
            return Ok(values);
        }
    }
    if connection_is_accurate(z) {
        let u = tricomi_u_connection(a, b, z)?;
        let du = -a * tricomi_u_connection(a + 1.0, b + 1.0, z)?;
        return Ok((u, du));
    }
    far_field(a, b, z)
}

/// `U` through two Kummer functions (non-integer `b`):
/// `U = Gamma(1-b)/Gamma(a-b+1) M(a,b,z) + Gamma(b-1)/Gamma(a) z^(1-b) M(a-b+1, 2-b, z)`.
pub fn tricomi_u_connection(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    check_u_arguments(a, b, z)?;
    if is_integer(b, INTEGER_TOL) {
        return Err(Error::ParameterPole(b));
    }
    let first = cgamma(1.0 - b)? * crgamma(a - b + 1.0)? * kummer_m(a, b, z)?;
    let second = cgamma(b - 1.0)?
        * crgamma(a)?
        * z.powc(1.0 - b)
        * kummer_m(a - b + 1.0, 2.0 - b, z)?;
    Ok(first + second)
}

/// Asymptotic series `U ~ z^-a sum (a)_n (a-b+1)_n / n! (-z)^-n`, optimally
/// truncated. Returns an error when the smallest term is not below 1e-17 of
/// the sum, i.e. when `|z|` is too small for full precision.
pub fn tricomi_u_asymptotic(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    check_u_arguments(a, b, z)?;
    asymptotic_sum(a, b, z)
        .map(|s| s * z.powc(-a))
        .ok_or(Error::Convergence {
            function: "tricomi_u asymptotic series",
            terms: 0,
        })
}

/// Sum of the asymptotic series without the `z^-a` prefactor.
fn asymptotic_sum(a: Complex64, b: Complex64, z: Complex64) -> Option<Complex64> {
    let c = a - b + 1.0;
    let inv = -z.inv();
    let transient = a.norm() + c.norm();
    let mut term = one();
    let mut sum = one();
    let mut previous = f64::INFINITY;
    for n in 0..MAX_SERIES_TERMS {
        let nf = n as f64;
        term *= (a + nf) * (c + nf) / (nf + 1.0) * inv;
        if term == zero() {
            return Some(sum);
        }
        let size = term.norm();
        // Terms may dip and recover while n is below |a| or |c| (nearly
        // terminating series); past that, growth means optimal truncation.
        if size > previous && nf > transient {
            return None;
        }
        sum += term;
        if size <= ASYMPTOTIC_EPS * sum.norm() {
            return Some(sum);
        }
        previous = size;
    }
    None
}

fn terminating_u(a: Complex64, b: Complex64, z: Complex64) -> Option<Complex64> {
    let c = a - b + 1.0;
    let (a, c, degree) = if is_nonpositive_integer(a, INTEGER_TOL) {
        let a_int = Complex64::new(a.re.round(), 0.0);
        (a_int, a_int - b + 1.0, (-a.re.round()) as usize)
    } else if is_nonpositive_integer(c, INTEGER_TOL) {
        (a, Complex64::new(c.re.round(), 0.0), (-c.re.round()) as usize)
    } else {
        return None;
    };
    let inv = -z.inv();
    let mut term = one();
    let mut sum = one();
    for n in 0..degree {
        let nf = n as f64;
        term *= (a + nf) * (c + nf) / (nf + 1.0) * inv;
        sum += term;
    }
    let prefactor = if a.im == 0.0 && a.re == a.re.round() && a.re <= 0.0 {
        z.powi((-a.re) as i32)
    } else {
        z.powc(-a)
    };
    Some(prefactor * sum)
}

fn asymptotic_with_derivative(
    a: Complex64,
    b: Complex64,
    z: Complex64,
) -> Option<(Complex64, Complex64)> {
    let u = asymptotic_sum(a, b, z)? * z.powc(-a);
    let du = -a * asymptotic_sum(a + 1.0, b + 1.0, z)? * z.powc(-a - 1.0);
    Some((u, du))
}

fn connection_is_accurate(z: Complex64) -> bool {
    z.norm() <= CONNECTION_RADIUS
}

fn far_field(a: Complex64, b: Complex64, z: Complex64) -> Result<(Complex64, Complex64)> {
    // Start the asymptotic series to the right of z and walk left along a
    // horizontal line at least CONNECTION_RADIUS from the real axis, then
    // vertically onto z. The companion solution ~e^z shrinks along the
    // horizontal leg, so errors in U are damped; the path never meets the cut.
    let side = if z.im >= 0.0 { 1.0 } else { -1.0 };
    let corner = Complex64::new(z.re, side * z.im.abs().max(CONNECTION_RADIUS));
    let mut shift = (ASYMPTOTIC_MIN_RADIUS - z.re).max(ASYMPTOTIC_MIN_RADIUS);
    let (mut u, mut du) = loop {
        if let Some(values) = asymptotic_with_derivative(a, b, corner + shift) {
            break values;
        }
        shift *= 1.5;
        if shift > ASYMPTOTIC_MAX_RADIUS {
            return Err(Error::Convergence {
                function: "tricomi_u asymptotic series",
                terms: MAX_SERIES_TERMS,
            });
        }
    };
    let mut from = corner + shift;
    for target in [corner, z] {
        while from != target {
            let gap = (target - from).norm();
            let step = gap.min(MAX_TAYLOR_STEP).min(0.5 * from.norm());
            let to = if step >= gap {
                target
            } else {
                from + (target - from) * (step / gap)
            };
            (u, du) = taylor_step(a, b, from, to, u, du)?;
            from = to;
        }
    }
    Ok((u, du))
}

/// Advance a solution of `z w'' + (b - z) w' - a w = 0` from `from` to `to`
/// with its Taylor series about `from`; `|to - from|` must be below `|from|`.
fn taylor_step(
    a: Complex64,
    b: Complex64,
    from: Complex64,
    to: Complex64,
    value: Complex64,
    slope: Complex64,
) -> Result<(Complex64, Complex64)> {
    let h = to - from;
    let mut c_prev = value;
    let mut c_curr = slope;
    let mut h_pow = h;
    let mut sum = value + slope * h;
    let mut dsum = slope;
    let mut small_run = 0;
    for n in 0..MAX_TAYLOR_TERMS {
        let nf = n as f64;
        let c_next = ((a + nf) * c_prev - (nf + 1.0) * (b + nf - from) * c_curr)
            / (from * ((nf + 2.0) * (nf + 1.0)));
        let term_d = (nf + 2.0) * c_next * h_pow;
        h_pow *= h;
        let term = c_next * h_pow;
        sum += term;
        dsum += term_d;
        if term.norm() <= 1e-18 * sum.norm() && term_d.norm() <= 1e-18 * dsum.norm() {
            small_run += 1;
            if small_run >= 3 {
                return Ok((sum, dsum));
            }
        } else {
            small_run = 0;
        }
        c_prev = c_curr;
        c_curr = c_next;
    }
    Err(Error::Convergence {
        function: "tricomi_u Taylor continuation",
        terms: MAX_TAYLOR_TERMS,
    })
}
