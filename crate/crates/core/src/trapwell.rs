//! Absorbing square well of range `L` inside the harmonic trap.
//!
//! Three ways to get the s-wave spectrum:
//! * exact: match the deep-well inner solution `e^{-ikr} - eta e^{ikr}` to the
//!   trap solution `r e^{-r^2/2} U((3 - 2E)/4, 3/2, r^2)` at `r = L`;
//! * edep: contact model with the energy-dependent scattering length `a(kappa(E))`;
//! * eindep: contact model with the zero-energy scattering length.

use num_complex::Complex64;
use serde::Serialize;

use crate::aqw::{self, WellSpec};
use crate::contact::{self, busch_lhs, busch_lhs_inverse, Coupling, Method};
use crate::croots::{self, BranchTrack, RootFamily, TrackOptions};
use crate::error::{Error, Result};
use crate::specfun::tricomi_u;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Fraction of the depth below which `L^2` and `|E|` must stay for the
/// deep-well inner solution to apply.
pub const DEEP_WELL_FRACTION: f64 = 0.01;

/// `L^2 <= 0.01 U` and `|E| <= 0.01 U`.
pub fn is_deep(well: &WellSpec, energy: Complex64) -> bool {
    let limit = DEEP_WELL_FRACTION * well.depth;
    well.range * well.range <= limit && energy.norm() <= limit
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteRangeProblem {
    /// Range and eta of the well; the depth is taken from `u_grid`.
    pub well: WellSpec,
    pub n_levels: usize,
    pub u_grid: Vec<f64>,
}

impl FiniteRangeProblem {
    pub fn new(well: WellSpec, n_levels: usize, u_grid: Vec<f64>) -> Result<Self> {
        if n_levels == 0 {
            return Err(Error::invalid("n_levels must be at least 1"));
        }
        if u_grid.is_empty() || u_grid.iter().any(|u| !(*u > 0.0 && u.is_finite())) {
            return Err(Error::invalid("depth grid must be non-empty and positive"));
        }
        if !u_grid.windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::invalid("depth grid must be strictly increasing"));
        }
        Ok(Self {
            well,
            n_levels,
            u_grid,
        })
    }

    /// Depths giving `alpha = sqrt(2U) L` evenly spaced on `(0, alpha_max]`.
    pub fn alpha_grid(range: f64, eta: Complex64, n_levels: usize, points: usize, alpha_max: f64) -> Result<Self> {
        let u_grid = (1..=points)
            .map(|k| {
                let alpha = alpha_max * k as f64 / points as f64;
                alpha * alpha / (2.0 * range * range)
            })
            .collect::<Vec<_>>();
        let well = WellSpec::new(*u_grid.last().ok_or_else(|| Error::invalid("no points"))?, range, eta)?;
        Self::new(well, n_levels, u_grid)
    }

    fn well_at(&self, depth: f64) -> WellSpec {
        WellSpec {
            depth,
            range: self.well.range,
            eta: self.well.eta,
        }
    }
}

/// `(u, du/dr)` at `r = L` of the inner solution `e^{-ikr} - eta e^{ikr}`, `k = sqrt(2(E + U))`.
fn inner_values(energy: Complex64, well: &WellSpec) -> (Complex64, Complex64) {
    let k = (2.0 * (energy + well.depth)).sqrt();
    let plus = well.eta * (I * k * well.range).exp();
    let minus = (-I * k * well.range).exp();
    (minus - plus, -I * k * (minus + plus))
}

/// `(u, du/dr)` at `r = L` of `u = r e^{-r^2/2} U((3 - 2E)/4, 3/2, r^2)`.
fn outer_values(energy: Complex64, range: f64) -> Result<(Complex64, Complex64)> {
    let a = (3.0 - 2.0 * energy) / 4.0;
    let b = c64(1.5, 0.0);
    let z = c64(range * range, 0.0);
    let u = tricomi_u(a, b, z)?;
    let du = if a == c64(0.0, 0.0) {
        c64(0.0, 0.0)
    } else {
        -a * tricomi_u(a + 1.0, b + 1.0, z)?
    };
    let gauss = (-0.5 * range * range).exp();
    let value = range * gauss * u;
    let slope = gauss * (u * (1.0 - range * range) + 2.0 * range * range * du);
    Ok((value, slope))
}

/// Logarithmic derivative of `r psi_in` at `r = L`.
pub fn inner_log_derivative(energy: Complex64, well: &WellSpec) -> Result<Complex64> {
    let (u, du) = inner_values(energy, well);
    if u.norm() <= 1e-300 || u.norm() <= 1e-15 * du.norm() * well.range {
        return Err(Error::NodeAtBoundary);
    }
    Ok(du / u)
}

/// Logarithmic derivative of `r psi_out` at `r = L`, `1/L - L + 2 L U'/U`.
pub fn outer_log_derivative(energy: Complex64, range: f64) -> Result<Complex64> {
    if !(range > 0.0 && range.is_finite()) {
        return Err(Error::invalid("range must be positive"));
    }
    let (u, du) = outer_values(energy, range)?;
    if u.norm() <= 1e-300 || u.norm() <= 1e-15 * du.norm() * range {
        return Err(Error::NodeAtBoundary);
    }
    Ok(du / u)
}

/// Scale-free matching mismatch
/// `|u_out' u_in - u_out u_in'| / (|u_out'| |u_in| + |u_out| |u_in'|)`.
///
/// Free of the poles a log-derivative difference has at nodes of either solution.
pub fn matching_residual(energy: Complex64, well: &WellSpec) -> Result<f64> {
    Ok(scaled_wronskian(energy, well)?.norm())
}

fn scaled_wronskian(energy: Complex64, well: &WellSpec) -> Result<Complex64> {
    let (ui, dui) = inner_values(energy, well);
    let (uo, duo) = outer_values(energy, well.range)?;
    let scale = duo.norm() * ui.norm() + uo.norm() * dui.norm();
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::NonFinite("matching scale"));
    }
    Ok((duo * ui - uo * dui) / scale)
}

struct ExactFamily<'a> {
    problem: &'a FiniteRangeProblem,
}

impl RootFamily for ExactFamily<'_> {
    fn eval(&self, depth: f64, energy: Complex64) -> Result<Complex64> {
        scaled_wronskian(energy, &self.problem.well_at(depth))
    }
}

fn zero_energy_coupling(well: &WellSpec) -> Result<Coupling> {
    match aqw::zero_energy_a(well) {
        Ok(a) => Ok(Coupling::from_scattering_length(a)),
        Err(Error::ResonancePole { .. }) => Ok(Coupling::unitarity()),
        Err(e) => Err(e),
    }
}

struct EindepFamily<'a> {
    problem: &'a FiniteRangeProblem,
}

impl RootFamily for EindepFamily<'_> {
    fn eval(&self, depth: f64, energy: Complex64) -> Result<Complex64> {
        let coupling = zero_energy_coupling(&self.problem.well_at(depth))?;
        contact::BuschEquation::new(coupling).value(energy)
    }

    fn eval_with_derivative(&self, depth: f64, energy: Complex64) -> Option<Result<(Complex64, Complex64)>> {
        Some(
            zero_energy_coupling(&self.problem.well_at(depth))
                .and_then(|c| contact::BuschEquation::new(c).value_and_derivative(energy)),
        )
    }
}

/// `a(kappa(E))` with `kappa = sqrt(2E)`, falling back to the zero-energy value at `E = 0`.
pub fn scattering_length_at(energy: Complex64, well: &WellSpec) -> Result<Complex64> {
    let kappa = (2.0 * energy).sqrt();
    match aqw::energy_dependent_a(kappa, well) {
        Err(Error::ZeroKappa) => aqw::zero_energy_a(well),
        other => other,
    }
}

/// Defining function of the edep spectrum: `1/busch(E) - a` where `|a(kappa(E))| <= 1`,
/// else `busch(E) - 1/a`, so that each form is used away from its poles. The
/// inverse form is divided by a per-well constant to keep it analytic.
fn edep_value(energy: Complex64, well: &WellSpec) -> Result<Complex64> {
    let a = scattering_length_at(energy, well)?;
    if a.norm() <= 1.0 {
        let scale = aqw::zero_energy_a(well)
            .map(|a0| a0.norm().clamp(contact::MIN_INVERSE_SCALE, 1.0))
            .unwrap_or(1.0);
        Ok((busch_lhs_inverse(energy)? - a) / scale)
    } else {
        Ok(busch_lhs(energy)? - a.inv())
    }
}

/// `|busch(E) - 1/a(kappa(E))| / max(1, |1/a|)`.
pub fn edep_residual(energy: Complex64, well: &WellSpec) -> Result<f64> {
    let a = scattering_length_at(energy, well)?;
    contact::level_residual(Coupling::from_scattering_length(a), energy)
}

struct EdepFamily<'a> {
    problem: &'a FiniteRangeProblem,
}

impl RootFamily for EdepFamily<'_> {
    fn eval(&self, depth: f64, energy: Complex64) -> Result<Complex64> {
        edep_value(energy, &self.problem.well_at(depth))
    }
}

/// One branch of one method across the depth grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WellLevelTrack {
    pub branch: usize,
    pub method: Method,
    pub depths: Vec<f64>,
    pub energies: Vec<Complex64>,
    pub residuals: Vec<f64>,
    /// Points that violate the deep-well condition.
    pub shallow: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MethodComparison {
    pub u_value: f64,
    pub branch: usize,
    pub exact: Complex64,
    pub edep: Complex64,
    pub eindep: Complex64,
    pub shallow_warning: bool,
}

/// Branch seeds at the deepest well: the lowest eindep contact levels there
/// that every method reproduces nearby. Zero-range levels with no finite-range
/// counterpart (a "molecule" bound by a scattering length comparable to `L`)
/// are skipped.
fn seeds(problem: &FiniteRangeProblem) -> Result<Vec<Complex64>> {
    let depth = *problem.u_grid.last().expect("validated grid");
    let deepest = problem.well_at(depth);
    let coupling = zero_energy_coupling(&deepest)?;
    let candidates = contact::spectrum_for_coupling(coupling, problem.n_levels + SPARE_SEEDS)?;
    let exact = ExactFamily { problem };
    let edep = EdepFamily { problem };
    let reproduced = |family: &dyn RootFamily, seed: Complex64| {
        croots::find_root(|e| family.eval(depth, e), seed, croots::DEFAULT_TOLERANCE)
            .map(|r| r.converged && (r.root - seed).norm() <= SEED_MATCH * seed.norm().max(1.0))
            .unwrap_or(false)
    };
    let seeds: Vec<Complex64> = candidates
        .iter()
        .map(|l| l.energy)
        .filter(|&e| reproduced(&exact, e) && reproduced(&edep, e))
        .take(problem.n_levels)
        .collect();
    if seeds.len() < problem.n_levels {
        return Err(Error::LostBranch {
            branch: seeds.len(),
            parameter: depth,
            last: candidates.last().map_or(Complex64::default(), |l| l.energy),
        });
    }
    Ok(seeds)
}

const SPARE_SEEDS: usize = 3;
const SEED_MATCH: f64 = 0.2;

fn run<R: RootFamily>(
    problem: &FiniteRangeProblem,
    family: &R,
    method: Method,
    residual: impl Fn(Complex64, &WellSpec) -> Result<f64>,
) -> Result<Vec<WellLevelTrack>> {
    let seeds = seeds(problem)?;
    let descending: Vec<f64> = problem.u_grid.iter().rev().copied().collect();
    let tracks: Vec<BranchTrack> = croots::track_branch(family, &seeds, &descending, &TrackOptions::default())?;
    tracks
        .into_iter()
        .map(|t| {
            let depths: Vec<f64> = t.parameter_grid.iter().rev().copied().collect();
            let energies: Vec<Complex64> = t.roots.iter().rev().copied().collect();
            let residuals = depths
                .iter()
                .zip(&energies)
                .map(|(&u, &e)| residual(e, &problem.well_at(u)))
                .collect::<Result<Vec<_>>>()?;
            let shallow = depths
                .iter()
                .zip(&energies)
                .map(|(&u, &e)| !is_deep(&problem.well_at(u), e))
                .collect();
            Ok(WellLevelTrack {
                branch: t.branch_index,
                method,
                depths,
                energies,
                residuals,
                shallow,
            })
        })
        .collect()
}

/// Matched (finite-range) spectrum over the depth grid.
pub fn exact_spectrum(problem: &FiniteRangeProblem) -> Result<Vec<WellLevelTrack>> {
    run(problem, &ExactFamily { problem }, Method::AqwExact, matching_residual)
}

/// Contact model with the zero-energy scattering length over the depth grid.
pub fn pseudo_spectrum_eindep(problem: &FiniteRangeProblem) -> Result<Vec<WellLevelTrack>> {
    run(problem, &EindepFamily { problem }, Method::AqwEindep, |e, w| {
        contact::level_residual(zero_energy_coupling(w)?, e)
    })
}

/// Contact model with the energy-dependent scattering length over the depth grid.
pub fn pseudo_spectrum_edep(problem: &FiniteRangeProblem) -> Result<Vec<WellLevelTrack>> {
    run(problem, &EdepFamily { problem }, Method::AqwEdep, edep_residual)
}

/// All three methods, row per (depth, branch).
pub fn compare_methods(problem: &FiniteRangeProblem) -> Result<Vec<MethodComparison>> {
    let (exact, (edep, eindep)) = rayon::join(
        || exact_spectrum(problem),
        || rayon::join(|| pseudo_spectrum_edep(problem), || pseudo_spectrum_eindep(problem)),
    );
    let (exact, edep, eindep) = (exact?, edep?, eindep?);
    let mut rows = Vec::with_capacity(problem.u_grid.len() * problem.n_levels);
    for (i, &u) in problem.u_grid.iter().enumerate() {
        for b in 0..problem.n_levels {
            rows.push(MethodComparison {
                u_value: u,
                branch: b,
                exact: exact[b].energies[i],
                edep: edep[b].energies[i],
                eindep: eindep[b].energies[i],
                shallow_warning: exact[b].shallow[i],
            });
        }
    }
    Ok(rows)
}
