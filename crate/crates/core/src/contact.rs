//! Contact pseudopotential with a complex scattering length `a = alpha - i beta`
//! in an isotropic harmonic trap.
//!
//! The s-wave eigenvalue condition is
//! `2 Gamma(-E/2 + 3/4) / Gamma(-E/2 + 1/4) = 1/a` (energies in units of hbar omega,
//! lengths in oscillator lengths).

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::croots::{self, BranchTrack, RootFamily, TrackOptions};
use crate::error::{Error, Result};
use crate::quadrature::CompositeRule;
use crate::specfun::{cdigamma, cgamma, clgamma, crgamma, is_nonpositive_integer, tricomi_u};

/// Tolerance on the scaled residual `|busch_lhs(E) - 1/a| / max(1, |1/a|)`.
pub const LEVEL_TOLERANCE: f64 = 1e-10;

/// Below this Re a (and above zero) the molecular level is too deep to be
/// followed from the real axis; it is solved directly from its asymptote.
const DEEP_MOLECULE_ALPHA: f64 = 0.01;

/// Near-pole window in which the ratio of Gamma functions is formed with the
/// reciprocal Gamma function instead of log-Gamma differences.
const NEAR_POLE: f64 = 0.1;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Complex scattering length `a = alpha - i beta` with `beta >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexScatteringLength {
    pub alpha: f64,
    pub beta: f64,
}

impl ComplexScatteringLength {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::invalid("scattering length must be finite"));
        }
        if beta < 0.0 {
            return Err(Error::invalid(format!(
                "beta = {beta} < 0 would describe gain, not loss"
            )));
        }
        Ok(Self { alpha, beta })
    }

    /// `a = abar - i abar`.
    pub fn universal(abar: f64) -> Result<Self> {
        Self::new(abar, abar)
    }

    pub fn value(&self) -> Complex64 {
        c64(self.alpha, -self.beta)
    }

    pub fn coupling(&self) -> Coupling {
        Coupling::from_scattering_length(self.value())
    }
}

/// Interaction strength expressed through the inverse scattering length, so
/// that both limits `a = 0` and `1/a = 0` are representable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Coupling {
    /// `a = 0`.
    NonInteracting,
    /// `1/a`; zero is the unitarity limit.
    Inverse(Complex64),
}

impl Coupling {
    pub fn from_scattering_length(a: Complex64) -> Self {
        if a == c64(0.0, 0.0) {
            Coupling::NonInteracting
        } else {
            Coupling::Inverse(a.inv())
        }
    }

    pub fn unitarity() -> Self {
        Coupling::Inverse(c64(0.0, 0.0))
    }

    /// `a`, or `None` at unitarity.
    pub fn scattering_length(&self) -> Option<Complex64> {
        match *self {
            Coupling::NonInteracting => Some(c64(0.0, 0.0)),
            Coupling::Inverse(c) if c == c64(0.0, 0.0) => None,
            Coupling::Inverse(c) => Some(c.inv()),
        }
    }

    pub fn conj(&self) -> Self {
        match *self {
            Coupling::NonInteracting => Coupling::NonInteracting,
            Coupling::Inverse(c) => Coupling::Inverse(c.conj()),
        }
    }

    fn is_real(&self) -> bool {
        match *self {
            Coupling::NonInteracting => true,
            Coupling::Inverse(c) => c.im == 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Contact,
    AqwExact,
    AqwEdep,
    AqwEindep,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Contact => "contact",
            Method::AqwExact => "aqw_exact",
            Method::AqwEdep => "aqw_edep",
            Method::AqwEindep => "aqw_eindep",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapLevel {
    pub branch: usize,
    pub energy: Complex64,
    pub residual: f64,
    pub method: Method,
}

/// `x = -E/2 + 1/4`; the eigenvalue condition reads `2 Gamma(x + 1/2) / Gamma(x) = 1/a`.
fn busch_argument(energy: Complex64) -> Complex64 {
    -0.5 * energy + 0.25
}

fn near_pole(z: Complex64) -> bool {
    is_nonpositive_integer(z, NEAR_POLE) || (z.re < 0.0 && {
        let d = z - z.re.round();
        d.norm() < NEAR_POLE
    })
}

/// Beyond this |x|, away from the negative real axis, `Gamma(x + 1/2)/Gamma(x)`
/// comes from its asymptotic series; log-Gamma differences would lose
/// `~|x| eps` there.
const RATIO_ASYMPTOTIC_MIN: f64 = 1e3;

fn half_gamma_ratio_series(x: Complex64) -> Complex64 {
    const COEFFS: [f64; 7] = [
        1.0,
        -1.0 / 8.0,
        1.0 / 128.0,
        5.0 / 1024.0,
        -21.0 / 32768.0,
        -399.0 / 262_144.0,
        869.0 / 4_194_304.0,
    ];
    let inv = x.inv();
    let series = COEFFS.iter().rev().fold(c64(0.0, 0.0), |acc, &k| acc * inv + k);
    x.sqrt() * series
}

/// `tan(pi x)` without overflow for large `|Im x|`.
fn tan_pi(x: Complex64) -> Complex64 {
    let i = c64(0.0, 1.0);
    if x.im >= 0.0 {
        let w = (2.0 * PI * i * x).exp();
        i * (1.0 - w) / (1.0 + w)
    } else {
        let w = (-2.0 * PI * i * x).exp();
        -i * (1.0 - w) / (1.0 + w)
    }
}

/// `Gamma(x + 1/2) / Gamma(x)` for large `|x|` not hugging the negative real
/// axis; the left half-plane goes through `tan(pi x) R(1/2 - x)`.
fn half_gamma_ratio_asymptotic(x: Complex64) -> Option<Complex64> {
    if x.norm() < RATIO_ASYMPTOTIC_MIN {
        return None;
    }
    if x.re >= 0.0 {
        Some(half_gamma_ratio_series(x))
    } else if x.im.abs() >= 5.0 {
        Some(tan_pi(x) * half_gamma_ratio_series(0.5 - x))
    } else {
        None
    }
}

/// `2 Gamma(-E/2 + 3/4) / Gamma(-E/2 + 1/4)`.
///
/// Formed from log-Gamma differences; close to the zeros (E = 2n + 1/2) the
/// reciprocal Gamma function is used so the zeros come out exactly, and deep
/// in the complex plane an asymptotic series keeps full relative accuracy.
pub fn busch_lhs(energy: Complex64) -> Result<Complex64> {
    let x = busch_argument(energy);
    let xh = x + 0.5;
    if is_nonpositive_integer(xh, crate::specfun::POLE_TOLERANCE) {
        return Err(Error::Pole(energy));
    }
    if let Some(ratio) = half_gamma_ratio_asymptotic(x) {
        return Ok(2.0 * ratio);
    }
    if near_pole(x) {
        return Ok(2.0 * cgamma(xh)? * crgamma(x)?);
    }
    Ok(2.0 * (clgamma(xh)? - clgamma(x)?).exp())
}

/// `1 / busch_lhs(E) = Gamma(-E/2 + 1/4) / (2 Gamma(-E/2 + 3/4))`, analytic at
/// the poles E = 2n + 3/2 where it vanishes.
pub fn busch_lhs_inverse(energy: Complex64) -> Result<Complex64> {
    let x = busch_argument(energy);
    let xh = x + 0.5;
    if is_nonpositive_integer(x, crate::specfun::POLE_TOLERANCE) {
        return Err(Error::Pole(energy));
    }
    if let Some(ratio) = half_gamma_ratio_asymptotic(x) {
        return Ok(0.5 / ratio);
    }
    if near_pole(xh) {
        return Ok(0.5 * cgamma(x)? * crgamma(xh)?);
    }
    Ok(0.5 * (clgamma(x)? - clgamma(xh)?).exp())
}

/// `psi(x + 1/2) - psi(x)`; `d busch/dE = -busch * D / 2`.
fn digamma_difference(energy: Complex64) -> Result<Complex64> {
    let x = busch_argument(energy);
    Ok(cdigamma(x + 0.5)? - cdigamma(x)?)
}

/// Derivative of [`busch_lhs`] with respect to E.
pub fn busch_lhs_derivative(energy: Complex64) -> Result<Complex64> {
    Ok(-0.5 * busch_lhs(energy)? * digamma_difference(energy)?)
}

/// Scaled defining function of the spectrum for a given `a`.
///
/// For `|a| <= 1` the inverse form `(1/busch(E) - a)/max(|a|, 1e-4)` is used
/// (analytic at the noninteracting energies), otherwise `busch(E) - 1/a`. At a
/// root both equal `|busch(E) - 1/a| / max(1, |1/a|)` to first order, except
/// that tiny `|a|` stops tightening the tolerance below what f64 can resolve.
#[derive(Debug, Clone, Copy)]
pub struct BuschEquation {
    coupling: Coupling,
}

pub(crate) const MIN_INVERSE_SCALE: f64 = 1e-4;

impl BuschEquation {
    pub fn new(coupling: Coupling) -> Self {
        Self { coupling }
    }

    fn inverse_form(&self) -> Option<(Complex64, f64)> {
        match self.coupling {
            Coupling::NonInteracting => Some((c64(0.0, 0.0), 1.0)),
            Coupling::Inverse(c) if c.norm() >= 1.0 => {
                let a = c.inv();
                Some((a, a.norm().max(MIN_INVERSE_SCALE)))
            }
            Coupling::Inverse(_) => None,
        }
    }

    pub fn value(&self, energy: Complex64) -> Result<Complex64> {
        match (self.inverse_form(), self.coupling) {
            (Some((a, scale)), _) => Ok((busch_lhs_inverse(energy)? - a) / scale),
            (None, Coupling::Inverse(c)) => Ok(busch_lhs(energy)? - c),
            (None, Coupling::NonInteracting) => unreachable!(),
        }
    }

    pub fn value_and_derivative(&self, energy: Complex64) -> Result<(Complex64, Complex64)> {
        let value = self.value(energy)?;
        let derivative = match digamma_difference(energy) {
            Ok(d) => match (self.inverse_form(), self.coupling) {
                (Some((_, scale)), _) => 0.5 * busch_lhs_inverse(energy)? * d / scale,
                (None, _) => -0.5 * busch_lhs(energy)? * d,
            },
            Err(_) => {
                let h = 1e-7 * energy.norm().max(1.0);
                (self.value(energy + h)? - self.value(energy - h)?) / (2.0 * h)
            }
        };
        Ok((value, derivative))
    }

    pub fn residual(&self, energy: Complex64) -> Result<f64> {
        Ok(self.value(energy)?.norm())
    }
}

/// Scaled residual `|busch_lhs(E) - 1/a| / max(1, |1/a|)` of a candidate level.
pub fn level_residual(coupling: Coupling, energy: Complex64) -> Result<f64> {
    BuschEquation::new(coupling).residual(energy)
}

fn polish(coupling: Coupling, seed: Complex64) -> Result<croots::RootResult> {
    let eq = BuschEquation::new(coupling);
    let r = croots::find_root_with_derivative(|e| eq.value_and_derivative(e), seed, LEVEL_TOLERANCE)?;
    if !r.converged {
        return Err(Error::NonEigenvalue {
            energy: r.root,
            residual: r.residual,
        });
    }
    Ok(r)
}

/// The `n`-th pole interval of `busch_lhs` on the real axis: `(-inf, 3/2)` for
/// `n = 0`, else `(2n - 1/2, 2n + 3/2)`. Exactly one real root lies in each.
fn pole_interval(n: usize) -> (f64, f64) {
    let hi = 2.0 * n as f64 + 1.5;
    let lo = if n == 0 { f64::NEG_INFINITY } else { hi - 2.0 };
    (lo, hi)
}

/// Real roots of `busch_lhs(E) = c` for real `c`, one per pole interval, ascending.
pub fn real_levels(inverse_a: f64, n_levels: usize) -> Result<Vec<f64>> {
    let coupling = Coupling::Inverse(c64(inverse_a, 0.0));
    let sign_of = |e: f64| -> f64 {
        match busch_lhs(c64(e, 0.0)) {
            Ok(v) => (v.re - inverse_a).signum(),
            // Only reachable at a numerator pole; the caller never lands exactly on one.
            Err(_) => 0.0,
        }
    };
    (0..n_levels)
        .map(|n| {
            let (lo_pole, hi) = pole_interval(n);
            let mut lo = if n == 0 {
                // busch ~ sqrt(-2E) as E -> -inf
                let mut lo = (0.5 - 0.5 * inverse_a * inverse_a.abs()).min(-1.0) - 1.0;
                while sign_of(lo) <= 0.0 {
                    lo = 2.0 * lo - 1.0;
                }
                lo
            } else {
                lo_pole
            };
            let mut hi = hi;
            // busch decreases from +inf (just above lo_pole) to -inf (just below hi).
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let s = sign_of(mid);
                if s > 0.0 {
                    lo = mid;
                } else if s < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    hi = mid;
                    break;
                }
            }
            let mut e = 0.5 * (lo + hi);
            // Newton polish on the real axis.
            let eq = BuschEquation::new(coupling);
            for _ in 0..4 {
                if let Ok((v, d)) = eq.value_and_derivative(c64(e, 0.0)) {
                    let step = (v / d).re;
                    if step.is_finite() && (e - step) > lo_pole && (e - step) < pole_interval(n).1 {
                        e -= step;
                    }
                }
            }
            Ok(e)
        })
        .collect()
}

fn exact_levels(energies: impl Iterator<Item = f64>) -> Vec<TrapLevel> {
    energies
        .enumerate()
        .map(|(branch, e)| TrapLevel {
            branch,
            energy: c64(e, 0.0),
            residual: 0.0,
            method: Method::Contact,
        })
        .collect()
}

/// Family `p -> a(p) = alpha - i p` used for continuation in beta.
struct BetaFamily {
    alpha: f64,
}

impl BetaFamily {
    fn equation(&self, p: f64) -> BuschEquation {
        BuschEquation::new(Coupling::from_scattering_length(c64(self.alpha, -p)))
    }
}

impl RootFamily for BetaFamily {
    fn eval(&self, p: f64, e: Complex64) -> Result<Complex64> {
        self.equation(p).value(e)
    }

    fn eval_with_derivative(&self, p: f64, e: Complex64) -> Option<Result<(Complex64, Complex64)>> {
        Some(self.equation(p).value_and_derivative(e))
    }
}

/// Family `p -> a(p) = p - i beta` used for sweeps in Re a.
struct AlphaFamily {
    beta: f64,
}

impl AlphaFamily {
    fn equation(&self, p: f64) -> BuschEquation {
        BuschEquation::new(Coupling::from_scattering_length(c64(p, -self.beta)))
    }
}

impl RootFamily for AlphaFamily {
    fn eval(&self, p: f64, e: Complex64) -> Result<Complex64> {
        self.equation(p).value(e)
    }

    fn eval_with_derivative(&self, p: f64, e: Complex64) -> Option<Result<(Complex64, Complex64)>> {
        Some(self.equation(p).value_and_derivative(e))
    }
}

/// Lowest `n_levels` levels for scattering length `a = alpha - i beta`.
///
/// Branch `n` is the continuation in beta, at fixed alpha, of the `n`-th real
/// level at beta = 0. For alpha > 0 branch 0 is the molecular level.
pub fn spectrum(a: ComplexScatteringLength, n_levels: usize) -> Result<Vec<TrapLevel>> {
    spectrum_for_coupling(a.coupling(), n_levels)
}

/// As [`spectrum`] for any coupling, including `a = 0`, `1/a = 0` and complex
/// `a` of either sign of Im a.
pub fn spectrum_for_coupling(coupling: Coupling, n_levels: usize) -> Result<Vec<TrapLevel>> {
    if n_levels == 0 {
        return Err(Error::invalid("n_levels must be at least 1"));
    }
    let c = match coupling {
        Coupling::NonInteracting => {
            return Ok(exact_levels((0..n_levels).map(|n| 1.5 + 2.0 * n as f64)));
        }
        Coupling::Inverse(c) => c,
    };
    if c == c64(0.0, 0.0) {
        return Ok(exact_levels((0..n_levels).map(|n| 0.5 + 2.0 * n as f64)));
    }
    if !(c.re.is_finite() && c.im.is_finite()) {
        return Err(Error::NonFinite("coupling"));
    }
    let eq = BuschEquation::new(coupling);
    if coupling.is_real() {
        return real_levels(c.re, n_levels)?
            .into_iter()
            .enumerate()
            .map(|(branch, e)| {
                let energy = c64(e, 0.0);
                Ok(TrapLevel {
                    branch,
                    energy,
                    residual: eq.residual(energy)?,
                    method: Method::Contact,
                })
            })
            .collect();
    }
    let a = c.inv();
    let alpha = a.re;
    let beta = -a.im;
    let seeds: Vec<Complex64> = if alpha == 0.0 {
        (0..n_levels).map(|n| c64(1.5 + 2.0 * n as f64, 0.0)).collect()
    } else {
        real_levels(alpha.recip(), n_levels)?
            .into_iter()
            .map(|e| c64(e, 0.0))
            .collect()
    };
    let deep_molecule = alpha > 0.0 && alpha < DEEP_MOLECULE_ALPHA;
    let steps = ((beta.abs() / 0.01).ceil() as usize).max(16);
    let grid: Vec<f64> = (0..=steps).map(|k| beta * k as f64 / steps as f64).collect();
    let family = BetaFamily { alpha };
    let tracked_seeds = if deep_molecule { &seeds[1..] } else { &seeds[..] };
    let tracks = croots::track_branch(&family, tracked_seeds, &grid, &TrackOptions::default())?;
    let mut energies: Vec<Complex64> = Vec::with_capacity(n_levels);
    if deep_molecule {
        // busch(E) ~ 2 sqrt(-E/2 + 1/4) for large |E|.
        let seed = 0.5 - 0.5 * c * c;
        energies.push(polish(coupling, seed)?.root);
    }
    energies.extend(tracks.iter().map(|t| *t.roots.last().expect("non-empty track")));
    energies
        .into_iter()
        .enumerate()
        .map(|(branch, energy)| {
            Ok(TrapLevel {
                branch,
                energy,
                residual: eq.residual(energy)?,
                method: Method::Contact,
            })
        })
        .collect()
}

/// First-order energy `3/2 + 2n + 2 pi a |psi_n(0)|^2` of the n-th trap
/// (non-molecular) level for small `a`.
pub fn perturbative_energy(a: Complex64, n: usize) -> Complex64 {
    c64(1.5 + 2.0 * n as f64, 0.0) + 2.0 * PI * a * s_state_density_at_origin(n)
}

/// `|psi_n(0)|^2 = pi^{-3/2} (2n+1)!! / (2^n n!)` for the noninteracting s-states.
pub fn s_state_density_at_origin(n: usize) -> f64 {
    let mut ratio = 1.0;
    for k in 1..=n {
        ratio *= (2 * k + 1) as f64 / (2 * k) as f64;
    }
    ratio * PI.powf(-1.5)
}

/// Branches of the spectrum along a grid of Re a at fixed beta = -Im a.
///
/// For beta = 0 each grid point is solved independently and levels are
/// ordered by energy. For beta > 0 the branches are labelled at the largest
/// Re a of the grid (continuation in beta from the real axis there) and
/// followed along the grid from that end. Output tracks are in grid order.
pub fn sweep_re_a(beta: f64, re_a_grid: &[f64], n_levels: usize) -> Result<Vec<BranchTrack>> {
    if n_levels == 0 {
        return Err(Error::invalid("n_levels must be at least 1"));
    }
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::invalid("beta must be finite and non-negative"));
    }
    if re_a_grid.is_empty() || re_a_grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("Re a grid must be non-empty and finite"));
    }
    let increasing = re_a_grid.windows(2).all(|w| w[1] > w[0]);
    let decreasing = re_a_grid.windows(2).all(|w| w[1] < w[0]);
    if !(increasing || decreasing) {
        return Err(Error::invalid("Re a grid must be strictly monotone"));
    }
    if beta == 0.0 {
        return sweep_real(re_a_grid, n_levels);
    }
    let mut descending = re_a_grid.to_vec();
    if increasing {
        descending.reverse();
    }
    let start = ComplexScatteringLength::new(descending[0], beta)?;
    let seeds: Vec<Complex64> = spectrum(start, n_levels)?.iter().map(|l| l.energy).collect();
    let family = AlphaFamily { beta };
    let mut tracks = croots::track_branch(&family, &seeds, &descending, &TrackOptions::default())?;
    if increasing {
        let n = re_a_grid.len();
        for t in &mut tracks {
            t.parameter_grid.reverse();
            t.roots.reverse();
            t.residuals.reverse();
            t.gaps.reverse();
            for col in &mut t.collisions {
                col.grid_index = n - 1 - col.grid_index;
            }
            t.collisions.sort_by_key(|c| (c.grid_index, c.other_branch));
        }
    }
    Ok(tracks)
}

fn sweep_real(grid: &[f64], n_levels: usize) -> Result<Vec<BranchTrack>> {
    let per_point: Vec<Vec<TrapLevel>> = grid
        .par_iter()
        .map(|&alpha| spectrum_for_coupling(Coupling::from_scattering_length(c64(alpha, 0.0)), n_levels))
        .collect::<Result<_>>()?;
    let mut tracks: Vec<BranchTrack> = (0..n_levels)
        .map(|branch| {
            let roots: Vec<Complex64> = per_point.iter().map(|l| l[branch].energy).collect();
            BranchTrack {
                branch_index: branch,
                parameter_grid: grid.to_vec(),
                residuals: per_point.iter().map(|l| l[branch].residual).collect(),
                gaps: roots.windows(2).map(|w| (w[1] - w[0]).norm()).collect(),
                roots,
                collisions: Vec::new(),
            }
        })
        .collect();
    croots::mark_collisions(&mut tracks, TrackOptions::default().collision_tolerance);
    Ok(tracks)
}

/// Closest approach of two branches along Re a at fixed beta.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchGap {
    pub beta: f64,
    pub re_a: f64,
    pub lower: Complex64,
    pub upper: Complex64,
}

impl BranchGap {
    pub fn distance(&self) -> f64 {
        (self.upper - self.lower).norm()
    }
}

/// Settings for [`find_avoided_crossing_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingOptions {
    pub re_a_min: f64,
    pub re_a_max: f64,
    pub re_a_step: f64,
    /// Number of coarse beta samples before the golden-section refinement.
    pub coarse_samples: usize,
    pub beta_tolerance: f64,
}

impl Default for CrossingOptions {
    fn default() -> Self {
        Self {
            re_a_min: -2.0,
            re_a_max: 5.0,
            re_a_step: 0.01,
            coarse_samples: 21,
            beta_tolerance: 1e-5,
        }
    }
}

fn grid_from(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect()
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

fn golden_min(mut lo: f64, mut hi: f64, tol: f64, mut f: impl FnMut(f64) -> f64) -> (f64, f64) {
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Minimum over Re a of the complex distance between branches `lo` and `hi`.
pub fn branch_gap(branch_lo: usize, branch_hi: usize, beta: f64, options: &CrossingOptions) -> Result<BranchGap> {
    let n_levels = branch_lo.max(branch_hi) + 1;
    let grid = grid_from(options.re_a_min, options.re_a_max, options.re_a_step);
    let tracks = sweep_re_a(beta, &grid, n_levels)?;
    let (tl, th) = (&tracks[branch_lo], &tracks[branch_hi]);
    let distances: Vec<f64> = tl.roots.iter().zip(&th.roots).map(|(a, b)| (a - b).norm()).collect();
    let (imin, _) = distances
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty grid");
    let lo = grid[imin.saturating_sub(1)];
    let hi = grid[(imin + 1).min(grid.len() - 1)];
    let mut best = BranchGap {
        beta,
        re_a: grid[imin],
        lower: tl.roots[imin],
        upper: th.roots[imin],
    };
    if hi > lo {
        let seeds = (tl.roots[imin], th.roots[imin]);
        let refine = |re_a: f64| -> Option<BranchGap> {
            let coupling = Coupling::from_scattering_length(c64(re_a, -beta));
            let lower = polish(coupling, seeds.0).ok()?.root;
            let upper = polish(coupling, seeds.1).ok()?.root;
            Some(BranchGap { beta, re_a, lower, upper })
        };
        let (x, d) = golden_min(lo, hi, 1e-7, |x| refine(x).map_or(f64::INFINITY, |g| g.distance()));
        if d < best.distance() {
            if let Some(g) = refine(x) {
                best = g;
            }
        }
    }
    Ok(best)
}

/// beta* at which branches `branch_lo` and `branch_hi` come closest in the
/// complex plane (minimum over beta of [`branch_gap`]).
pub fn find_avoided_crossing(branch_lo: usize, branch_hi: usize, beta_range: (f64, f64)) -> Result<f64> {
    find_avoided_crossing_with(branch_lo, branch_hi, beta_range, &CrossingOptions::default())
}

pub fn find_avoided_crossing_with(
    branch_lo: usize,
    branch_hi: usize,
    beta_range: (f64, f64),
    options: &CrossingOptions,
) -> Result<f64> {
    let (b0, b1) = beta_range;
    if !(0.0..=1.0).contains(&b0) || !(0.0..=1.0).contains(&b1) || b1 <= b0 {
        return Err(Error::invalid("beta range must satisfy 0 <= lo < hi <= 1"));
    }
    if branch_lo == branch_hi {
        return Err(Error::invalid("need two distinct branches"));
    }
    let n = options.coarse_samples.max(3);
    let betas: Vec<f64> = (0..n).map(|k| b0 + (b1 - b0) * k as f64 / (n - 1) as f64).collect();
    let gaps: Vec<f64> = betas
        .par_iter()
        .map(|&b| branch_gap(branch_lo, branch_hi, b, options).map(|g| g.distance()))
        .collect::<Result<_>>()?;
    let (imin, _) = gaps
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("at least three samples");
    if imin == 0 || imin == n - 1 {
        return Err(Error::NoCrossing { lo: b0, hi: b1 });
    }
    let (beta, _) = golden_min(betas[imin - 1], betas[imin + 1], options.beta_tolerance, |b| {
        branch_gap(branch_lo, branch_hi, b, options).map_or(f64::INFINITY, |g| g.distance())
    });
    Ok(beta)
}

/// Exceptional point of the eigenvalue condition nearest `seed`: the energy
/// where `d busch/dE = 0`, with the scattering length that puts a double
/// root there.
pub fn exceptional_point(seed: Complex64) -> Result<(Complex64, Complex64)> {
    let r = croots::find_root(digamma_difference, seed, 1e-13)?;
    if !r.converged {
        return Err(Error::NonEigenvalue {
            energy: r.root,
            residual: r.residual,
        });
    }
    Ok((r.root, busch_lhs_inverse(r.root)?))
}

/// Relative-motion wavefunction `psi(r) = A e^{-r^2/2} U(-E/2 + 3/4, 3/2, r^2)`.
///
/// Normalized with the c-product `int psi^2 4 pi r^2 dr = 1` (no complex
/// conjugation). The remaining sign is fixed so that `Re[r psi(r)] > 0` at
/// `r = 1e-3`.
pub fn wavefunction(coupling: Coupling, energy: Complex64, r_grid: &[f64]) -> Result<Vec<Complex64>> {
    let residual = level_residual(coupling, energy)?;
    if residual > 1e-8 {
        return Err(Error::NonEigenvalue { energy, residual });
    }
    if r_grid.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
        return Err(Error::invalid("radial grid must be positive and finite"));
    }
    let a_u = -0.5 * energy + 0.75;
    let b_u = c64(1.5, 0.0);
    let radial = |r: f64| -> Result<Complex64> {
        // u(r) = r psi(r) without the normalization constant.
        let z = c64(r * r, 0.0);
        Ok(r * (-0.5 * r * r).exp() * tricomi_u(a_u, b_u, z)?)
    };
    let extent = 10.0 + 3.0 * (2.0 * energy.norm()).sqrt().recip().max(0.0) + (2.0 * energy.re.max(0.0)).sqrt();
    let rule = CompositeRule::new(0.0, extent, 240, 12);
    let samples: Vec<Complex64> = rule
        .nodes
        .par_iter()
        .map(|&r| radial(r).map(|u| u * u))
        .collect::<Result<_>>()?;
    let norm = 4.0 * PI * rule.integrate_complex(&samples);
    let mut scale = norm.sqrt().inv();
    if (scale * radial(1e-3)?).re < 0.0 {
        scale = -scale;
    }
    r_grid
        .par_iter()
        .map(|&r| Ok(scale * radial(r)? / r))
        .collect()
}

/// Elastic and reactive rate constants of the reduced form
/// `K_el = 2 g (h k / mu) |a|^2 f(k)`, `K_loss = 2 g (h / mu) beta f(k)` with
/// `f(k) = 1 / (1 + k^2 |a|^2 + 2 k beta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateConstants {
    /// m^3/s
    pub k_elastic: f64,
    /// m^3/s
    pub k_loss: f64,
    pub g: u8,
    /// 1/m
    pub wavenumber: f64,
    pub reduction: f64,
}

/// `f(k) = 1 / (1 + k^2 |a|^2 + 2 k beta)`, in `(0, 1]`.
pub fn reduction_factor(a: ComplexScatteringLength, k: f64) -> f64 {
    let a2 = a.alpha * a.alpha + a.beta * a.beta;
    1.0 / (1.0 + k * k * a2 + 2.0 * k * a.beta)
}

/// Rates for scattering length `a` (metres), wavenumber `k` (1/m) and reduced
/// mass `mu` (kg), using the Planck constant `h`.
pub fn rate_constants(a: ComplexScatteringLength, k: f64, g: u8, mu: f64) -> Result<RateConstants> {
    if !(k >= 0.0 && k.is_finite()) {
        return Err(Error::invalid("wavenumber must be finite and non-negative"));
    }
    if g != 1 && g != 2 {
        return Err(Error::invalid("g must be 1 or 2"));
    }
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::invalid("reduced mass must be positive"));
    }
    let f = reduction_factor(a, k);
    let h_over_mu = crate::physunits::PLANCK / mu;
    let a2 = a.alpha * a.alpha + a.beta * a.beta;
    let gf = 2.0 * g as f64;
    Ok(RateConstants {
        k_elastic: gf * h_over_mu * k * a2 * f,
        k_loss: gf * h_over_mu * a.beta * f,
        g,
        wavenumber: k,
        reduction: f,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(alpha: f64, beta: f64) -> ComplexScatteringLength {
        ComplexScatteringLength::new(alpha, beta).unwrap()
    }

    #[test]
    fn busch_at_zero_energy() {
        // 2 Gamma(3/4) / Gamma(1/4), 30-digit reference
        let v = busch_lhs(c64(0.0, 0.0)).unwrap();
        assert!((v.re - 0.675_978_240_067_284_7).abs() < 1e-14 && v.im.abs() < 1e-15);
    }

    #[test]
    fn busch_poles_and_zeros() {
        assert!(matches!(busch_lhs(c64(1.5, 0.0)), Err(Error::Pole(_))));
        assert!(matches!(busch_lhs(c64(3.5, 0.0)), Err(Error::Pole(_))));
        assert_eq!(busch_lhs(c64(0.5, 0.0)).unwrap().norm(), 0.0);
        assert!(busch_lhs(c64(2.5 + 1e-9, 0.0)).unwrap().norm() < 1e-8);
        assert_eq!(busch_lhs_inverse(c64(5.5, 0.0)).unwrap().norm(), 0.0);
    }

    #[test]
    fn busch_far_from_the_real_axis() {
        // Gamma(x + 1/2)/Gamma(x) at 40 digits.
        for (x, ratio) in [
            (c64(-1.9e5, 1.26e5), c64(137.808587930278, 457.155834379756)),
            (c64(-2000.0, -30.0), c64(0.335379801988172, -44.7254121862629)),
        ] {
            let e = -2.0 * (x - 0.25);
            let v = busch_lhs(e).unwrap();
            assert!((v - 2.0 * ratio).norm() < 1e-13 * v.norm(), "{v}");
            let w = busch_lhs_inverse(e).unwrap();
            assert!((w * v - 1.0).norm() < 1e-14);
        }
    }

    #[test]
    fn busch_conjugation() {
        let e = c64(2.3, -0.7);
        let lhs = busch_lhs(e.conj()).unwrap();
        assert!((lhs - busch_lhs(e).unwrap().conj()).norm() < 1e-14);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for e in [c64(0.3, 0.2), c64(-4.0, -1.0), c64(2.7, -0.05)] {
            let h = 1e-6;
            let fd = (busch_lhs(e + h).unwrap() - busch_lhs(e - h).unwrap()) / (2.0 * h);
            let d = busch_lhs_derivative(e).unwrap();
            assert!((fd - d).norm() < 1e-7 * d.norm().max(1.0));
        }
    }

    #[test]
    fn limits() {
        let free = spectrum_for_coupling(Coupling::NonInteracting, 3).unwrap();
        let unit = spectrum_for_coupling(Coupling::unitarity(), 3).unwrap();
        for n in 0..3 {
            assert_eq!(free[n].energy, c64(1.5 + 2.0 * n as f64, 0.0));
            assert_eq!(unit[n].energy, c64(0.5 + 2.0 * n as f64, 0.0));
        }
    }

    #[test]
    fn real_a_one_ground_state() {
        let levels = spectrum(a(1.0, 0.0), 3).unwrap();
        assert!((levels[0].energy.re - (-0.342_418_946_781_288_7)).abs() < 1e-12);
        assert!(levels.iter().all(|l| l.energy.im == 0.0 && l.residual <= LEVEL_TOLERANCE));
        assert!(levels[1].energy.re > 1.5 && levels[1].energy.re < 3.5);
    }

    #[test]
    fn small_complex_a_matches_perturbation_theory() {
        let sc = a(0.01, 0.01);
        let levels = spectrum(sc, 3).unwrap();
        // alpha > 0: branch 0 is the molecular level, branch 1 the lowest trap level.
        assert!(levels[0].energy.norm() > 100.0);
        let e = levels[1].energy;
        assert!((e - c64(1.51128, -0.01128)).norm() < 2e-4, "{e}");
        assert!(levels.iter().all(|l| l.residual <= LEVEL_TOLERANCE && l.energy.im <= 0.0));
    }

    #[test]
    fn conjugate_coupling_gives_conjugate_levels() {
        let c = Coupling::from_scattering_length(c64(0.7, -0.3));
        let lv = spectrum_for_coupling(c, 4).unwrap();
        let lc = spectrum_for_coupling(c.conj(), 4).unwrap();
        for (x, y) in lv.iter().zip(&lc) {
            assert!((x.energy - y.energy.conj()).norm() < 1e-10);
        }
    }

    #[test]
    fn s_state_densities() {
        let ratio = s_state_density_at_origin(0) / s_state_density_at_origin(1);
        assert!((ratio - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn rate_reduction_factor() {
        assert!((reduction_factor(a(1.0, 1.0), 0.5) - 0.4).abs() < 1e-15);
        assert_eq!(reduction_factor(a(1.0, 1.0), 0.0), 1.0);
        let r = rate_constants(a(1e-9, 0.0), 1e6, 2, 1e-25).unwrap();
        assert_eq!(r.k_loss, 0.0);
        let r0 = rate_constants(a(1e-9, 1e-9), 0.0, 1, 1e-25).unwrap();
        assert_eq!(r0.k_elastic, 0.0);
        assert!(r0.k_loss > 0.0);
    }
}
