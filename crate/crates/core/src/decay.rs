//! Non-Hermitian dynamics in the trap eigenbasis: coefficient evolution of
//! `rho(t) = sum_ij c_ij(t) |psi_i><psi_j|`, lifetimes and decay-rate fits.
//!
//! Oscillator units throughout: eigenvalues in units of hbar omega, time in 1/omega.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::contact::TrapLevel;
use crate::error::{Error, Result};

/// Largest `Im lambda` accepted as roundoff rather than gain.
pub const GAIN_TOLERANCE: f64 = 1e-12;

const MIN_FIT_SAMPLES: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionState {
    pub eigenvalues: Vec<Complex64>,
    pub coefficients: DMatrix<Complex64>,
    pub time: f64,
}

impl EvolutionState {
    /// State at `t = 0` representing a physical density matrix: the
    /// coefficient matrix must be Hermitian and positive semidefinite.
    pub fn new(eigenvalues: Vec<Complex64>, coefficients: DMatrix<Complex64>) -> Result<Self> {
        let state = Self::unchecked(eigenvalues, coefficients, 0.0)?;
        state.check_physical()?;
        Ok(state)
    }

    /// Any square coefficient matrix, e.g. a single off-diagonal coherence.
    pub fn unchecked(eigenvalues: Vec<Complex64>, coefficients: DMatrix<Complex64>, time: f64) -> Result<Self> {
        let n = eigenvalues.len();
        if coefficients.nrows() != n || coefficients.ncols() != n {
            return Err(Error::invalid(format!(
                "coefficient matrix is {}x{} for {n} eigenvalues",
                coefficients.nrows(),
                coefficients.ncols()
            )));
        }
        if let Some(&l) = eigenvalues.iter().find(|l| l.im > GAIN_TOLERANCE) {
            return Err(Error::Gain(l));
        }
        Ok(Self {
            eigenvalues,
            coefficients,
            time,
        })
    }

    /// Diagonal populations with all coefficients on a single level.
    pub fn pure(eigenvalues: Vec<Complex64>, level: usize) -> Result<Self> {
        let n = eigenvalues.len();
        if level >= n {
            return Err(Error::invalid(format!("level {level} out of range for {n} eigenvalues")));
        }
        let mut c = DMatrix::zeros(n, n);
        c[(level, level)] = Complex64::new(1.0, 0.0);
        Self::new(eigenvalues, c)
    }

    fn check_physical(&self) -> Result<()> {
        let c = &self.coefficients;
        let scale = c.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        if (c - c.adjoint()).iter().any(|z| z.norm() > 1e-12 * scale) {
            return Err(Error::invalid("coefficient matrix is not Hermitian"));
        }
        let min = c.clone().symmetric_eigenvalues().min();
        if min < -1e-12 * scale {
            return Err(Error::invalid(format!("coefficient matrix has a negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// `c_ii` (real parts; the diagonal of a physical state stays real).
    pub fn populations(&self) -> Vec<f64> {
        self.coefficients.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn trace(&self) -> f64 {
        self.populations().iter().sum()
    }
}

/// `c_ij(t) = c_ij(0) exp(-i (lambda_i - conj(lambda_j)) t)`.
pub fn evolve(state: &EvolutionState, t: f64) -> Result<EvolutionState> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::invalid("evolution time must be non-negative"));
    }
    let l = &state.eigenvalues;
    if let Some(&g) = l.iter().find(|z| z.im > GAIN_TOLERANCE) {
        return Err(Error::Gain(g));
    }
    let minus_i = Complex64::new(0.0, -1.0);
    let coefficients = DMatrix::from_fn(l.len(), l.len(), |i, j| {
        state.coefficients[(i, j)] * (minus_i * (l[i] - l[j].conj()) * t).exp()
    });
    Ok(EvolutionState {
        eigenvalues: l.clone(),
        coefficients,
        time: state.time + t,
    })
}

/// `tau = 1 / (2 |Im E| omega)` in seconds for `E` in units of hbar omega and
/// `omega` in rad/s. Infinite for `Im E = 0`.
pub fn lifetime_from_energy(energy: Complex64, omega: f64) -> Result<f64> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::invalid("angular frequency must be positive"));
    }
    if energy.im > GAIN_TOLERANCE {
        return Err(Error::Gain(energy));
    }
    if energy.im >= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(1.0 / (2.0 * energy.im.abs() * omega))
}

pub fn lifetime(level: &TrapLevel, omega: f64) -> Result<f64> {
    lifetime_from_energy(level.energy, omega)
}

/// Least-squares slope of `ln(population)` against time: `2 Im lambda` for a
/// single decaying level.
///
/// Needs at least 8 samples, strictly increasing times and positive,
/// non-increasing populations.
pub fn fit_decay_rate(times: &[f64], populations: &[f64]) -> Result<f64> {
    validate_fit_input(times, populations)?;
    if let Some(w) = populations.windows(2).find(|w| w[1] > w[0] * (1.0 + 1e-12)) {
        return Err(Error::Fit(format!("populations increase from {} to {}", w[0], w[1])));
    }
    Ok(log_linear_fit(times, populations).rate)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayFit {
    /// Slope of `ln(population)` in 1/time.
    pub rate: f64,
    /// One-sigma standard error of `rate` from the fit residuals.
    pub std_error: f64,
}

/// [`fit_decay_rate`] for noisy data: monotonicity is not required, and the
/// standard error of the slope is returned with it.
pub fn fit_decay_rate_with_error(times: &[f64], populations: &[f64]) -> Result<DecayFit> {
    validate_fit_input(times, populations)?;
    Ok(log_linear_fit(times, populations))
}

fn validate_fit_input(times: &[f64], populations: &[f64]) -> Result<()> {
    if times.len() != populations.len() {
        return Err(Error::Fit(format!(
            "{} times but {} populations",
            times.len(),
            populations.len()
        )));
    }
    if times.len() < MIN_FIT_SAMPLES {
        return Err(Error::Fit(format!(
            "need at least {MIN_FIT_SAMPLES} samples, got {}",
            times.len()
        )));
    }
    if times.iter().any(|t| !t.is_finite()) || !times.windows(2).all(|w| w[1] > w[0]) {
        return Err(Error::Fit("times must be finite and strictly increasing".into()));
    }
    if let Some(p) = populations.iter().find(|p| !(**p > 0.0 && p.is_finite())) {
        return Err(Error::Fit(format!("population {p} is not positive")));
    }
    Ok(())
}

fn log_linear_fit(times: &[f64], populations: &[f64]) -> DecayFit {
    let n = times.len() as f64;
    let y: Vec<f64> = populations.iter().map(|p| p.ln()).collect();
    let tm = times.iter().sum::<f64>() / n;
    let ym = y.iter().sum::<f64>() / n;
    let sxx: f64 = times.iter().map(|t| (t - tm).powi(2)).sum();
    let sxy: f64 = times.iter().zip(&y).map(|(t, y)| (t - tm) * (y - ym)).sum();
    let rate = sxy / sxx;
    let intercept = ym - rate * tm;
    let sse: f64 = times
        .iter()
        .zip(&y)
        .map(|(t, y)| (y - intercept - rate * t).powi(2))
        .sum();
    DecayFit {
        rate,
        std_error: (sse / (n - 2.0) / sxx).sqrt(),
    }
}
