//! Complex root finding (Newton with a Muller fallback) and predictor-corrector
//! continuation of root branches along a real parameter.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_MAX_ITERATIONS: usize = 200;
const NEWTON_FAILURES_BEFORE_MULLER: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootResult {
    pub root: Complex64,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn step_small(step: f64, z: Complex64, tol: f64) -> bool {
    step <= 10.0 * tol * z.norm().max(1.0)
}

fn stagnated(step: f64, z: Complex64) -> bool {
    step <= 4.0 * f64::EPSILON * z.norm().max(1.0)
}

// The seed is itself a root; at a multiple root the iterations below would
// divide by zero.
fn exact_root(z: Complex64, iterations: usize) -> RootResult {
    RootResult {
        root: z,
        residual: 0.0,
        iterations,
        converged: true,
    }
}

/// Muller's method from `seed`.
///
/// Terminates with `converged = true` once `|f(root)| <= tol` and the last
/// step is below `10 tol` (relative to `max(1, |root|)`), with
/// `converged = false` when the iteration stagnates above `tol`, and with
/// `Error::MaxIterations` after 200 iterations.
pub fn find_root<F>(f: F, seed: Complex64, tol: f64) -> Result<RootResult>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let h = 1e-3 * seed.norm().max(1.0);
    muller(&f, seed, Complex64::new(h, 0.5 * h), tol, DEFAULT_MAX_ITERATIONS, 0)
}

fn muller<F>(
    f: &F,
    seed: Complex64,
    spread: Complex64,
    tol: f64,
    max_iterations: usize,
    iterations_used: usize,
) -> Result<RootResult>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let eval = |z: Complex64| f(z).map_err(|_| Error::Domain(z));
    let mut x0 = seed - spread;
    let mut x1 = seed + spread;
    let mut x2 = seed;
    let mut f0 = eval(x0)?;
    let mut f1 = eval(x1)?;
    let mut f2 = eval(x2)?;
    if f2 == Complex64::default() {
        return Ok(exact_root(seed, iterations_used));
    }
    let mut best = (x2, f2.norm());
    for iteration in iterations_used + 1..=max_iterations {
        let h1 = x1 - x0;
        let h2 = x2 - x1;
        let d1 = (f1 - f0) / h1;
        let d2 = (f2 - f1) / h2;
        let a = (d2 - d1) / (h2 + h1);
        let b = a * h2 + d2;
        let disc = (b * b - 4.0 * a * f2).sqrt();
        let denom = if (b + disc).norm() >= (b - disc).norm() {
            b + disc
        } else {
            b - disc
        };
        let mut dx = if denom.norm() == 0.0 {
            // Degenerate parabola: nudge and keep going.
            Complex64::new(1e-3, 1e-3) * (1.0 + x2.norm())
        } else {
            -2.0 * f2 / denom
        };
        let mut x3 = x2 + dx;
        let mut f3 = f(x3);
        let mut shrink = 0;
        while f3.is_err() || !f3.as_ref().map(|v| v.norm().is_finite()).unwrap_or(false) {
            shrink += 1;
            if shrink > 30 {
                return Err(Error::Domain(x3));
            }
            dx *= 0.5;
            x3 = x2 + dx;
            f3 = f(x3);
        }
        let f3 = f3?;
        let residual = f3.norm();
        if residual < best.1 {
            best = (x3, residual);
        }
        let step = dx.norm();
        if residual <= tol && step_small(step, x3, tol) {
            return Ok(RootResult {
                root: x3,
                residual,
                iterations: iteration,
                converged: true,
            });
        }
        if stagnated(step, x3) {
            return Ok(RootResult {
                root: best.0,
                residual: best.1,
                iterations: iteration,
                converged: best.1 <= tol,
            });
        }
        (x0, x1, x2) = (x1, x2, x3);
        (f0, f1, f2) = (f1, f2, f3);
    }
    Err(Error::MaxIterations {
        iterations: max_iterations,
        best: best.0,
        residual: best.1,
    })
}

/// Newton's method with an analytic derivative; falls back to Muller after
/// three failed Newton steps (derivative zero, evaluation error, or no
/// decrease of `|f|` after damping).
pub fn find_root_with_derivative<F>(f: F, seed: Complex64, tol: f64) -> Result<RootResult>
where
    F: Fn(Complex64) -> Result<(Complex64, Complex64)>,
{
    let value_only = |z: Complex64| f(z).map(|(v, _)| v);
    let (mut fz, mut dfz) = f(seed).map_err(|_| Error::Domain(seed))?;
    if fz == Complex64::default() {
        return Ok(exact_root(seed, 0));
    }
    let mut z = seed;
    let mut failures = 0;
    for iteration in 1..=DEFAULT_MAX_ITERATIONS {
        if failures >= NEWTON_FAILURES_BEFORE_MULLER {
            let h = 1e-3 * z.norm().max(1.0);
            return muller(
                &value_only,
                z,
                Complex64::new(h, 0.5 * h),
                tol,
                DEFAULT_MAX_ITERATIONS,
                iteration,
            );
        }
        if dfz.norm() == 0.0 || !dfz.norm().is_finite() {
            failures += 1;
            z += Complex64::new(1e-6, 1e-6) * z.norm().max(1.0);
            (fz, dfz) = f(z).map_err(|_| Error::Domain(z))?;
            continue;
        }
        let step = fz / dfz;
        if fz.norm() <= tol && step_small(step.norm(), z, tol) {
            return Ok(RootResult {
                root: z,
                residual: fz.norm(),
                iterations: iteration - 1,
                converged: true,
            });
        }
        if stagnated(step.norm(), z) {
            return Ok(RootResult {
                root: z,
                residual: fz.norm(),
                iterations: iteration - 1,
                converged: fz.norm() <= tol,
            });
        }
        let mut damping = 1.0;
        let mut accepted = None;
        for _ in 0..6 {
            let trial = z - step * damping;
            if let Ok((ft, dft)) = f(trial) {
                if ft.norm().is_finite() && ft.norm() < fz.norm() {
                    accepted = Some((trial, ft, dft));
                    break;
                }
            }
            damping *= 0.5;
        }
        match accepted {
            Some((trial, ft, dft)) => {
                if damping < 1.0 {
                    failures += 1;
                }
                z = trial;
                fz = ft;
                dfz = dft;
            }
            None => failures = NEWTON_FAILURES_BEFORE_MULLER,
        }
    }
    Err(Error::MaxIterations {
        iterations: DEFAULT_MAX_ITERATIONS,
        best: z,
        residual: fz.norm(),
    })
}

/// A one-parameter family of functions `f(p, E)` whose roots in `E` are tracked.
pub trait RootFamily: Sync {
    fn eval(&self, parameter: f64, energy: Complex64) -> Result<Complex64>;

    /// `(f, df/dE)` when an analytic derivative is available.
    fn eval_with_derivative(
        &self,
        _parameter: f64,
        _energy: Complex64,
    ) -> Option<Result<(Complex64, Complex64)>> {
        None
    }
}

impl<F> RootFamily for F
where
    F: Fn(f64, Complex64) -> Result<Complex64> + Sync,
{
    fn eval(&self, parameter: f64, energy: Complex64) -> Result<Complex64> {
        self(parameter, energy)
    }
}

fn solve_at<R: RootFamily + ?Sized>(
    family: &R,
    parameter: f64,
    seed: Complex64,
    tol: f64,
) -> Result<RootResult> {
    if family.eval_with_derivative(parameter, seed).is_some() {
        find_root_with_derivative(
            |e| {
                family
                    .eval_with_derivative(parameter, e)
                    .expect("derivative availability does not change")
            },
            seed,
            tol,
        )
    } else {
        find_root(|e| family.eval(parameter, e), seed, tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackOptions {
    pub tolerance: f64,
    /// Largest accepted |dE| per (sub)step, multiplied by `max(1, |E|)` when
    /// `relative_bound` is set.
    pub continuity_bound: f64,
    pub relative_bound: bool,
    /// Smallest substep as a fraction of the grid spacing.
    pub min_step_fraction: f64,
    pub collision_tolerance: f64,
}

impl Default for TrackOptions {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_TOLERANCE,
            continuity_bound: 0.2,
            relative_bound: true,
            min_step_fraction: 1.0 / 64.0,
            collision_tolerance: 1e-8,
        }
    }
}

impl TrackOptions {
    fn bound(&self, energy: Complex64) -> f64 {
        if self.relative_bound {
            self.continuity_bound * energy.norm().max(1.0)
        } else {
            self.continuity_bound
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Collision {
    pub grid_index: usize,
    pub other_branch: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchTrack {
    pub branch_index: usize,
    pub parameter_grid: Vec<f64>,
    pub roots: Vec<Complex64>,
    pub residuals: Vec<f64>,
    /// `|roots[i + 1] - roots[i]|`.
    pub gaps: Vec<f64>,
    pub collisions: Vec<Collision>,
}

impl BranchTrack {
    pub fn max_gap(&self) -> f64 {
        self.gaps.iter().copied().fold(0.0, f64::max)
    }
}

fn tangent<R: RootFamily + ?Sized>(family: &R, p: f64, e: Complex64) -> Option<Complex64> {
    let dp = 1e-6 * p.abs().max(1.0);
    let fp = (family.eval(p + dp, e).ok()? - family.eval(p - dp, e).ok()?) / (2.0 * dp);
    let fe = match family.eval_with_derivative(p, e) {
        Some(Ok((_, d))) => d,
        Some(Err(_)) => return None,
        None => {
            let de = 1e-6 * e.norm().max(1.0);
            (family.eval(p, e + de).ok()? - family.eval(p, e - de).ok()?) / (2.0 * de)
        }
    };
    let slope = -fp / fe;
    slope.norm().is_finite().then_some(slope)
}

fn track_one<R: RootFamily + ?Sized>(
    family: &R,
    branch: usize,
    seed: Complex64,
    grid: &[f64],
    options: &TrackOptions,
) -> Result<BranchTrack> {
    let tol = options.tolerance;
    let start = solve_at(family, grid[0], seed, tol)?;
    if !start.converged {
        return Err(Error::LostBranch {
            branch,
            parameter: grid[0],
            last: seed,
        });
    }
    let mut roots = vec![start.root];
    let mut residuals = vec![start.residual];
    for window in grid.windows(2) {
        let (p0, p1) = (window[0], window[1]);
        let mut p = p0;
        let mut e = *roots.last().expect("track starts with one root");
        let mut residual = 0.0;
        let mut fraction = 1.0_f64;
        let mut remaining = 1.0_f64;
        while remaining > 0.0 {
            let h = fraction.min(remaining);
            let p_new = if h == remaining { p1 } else { p + h * (p1 - p0) };
            let slope = tangent(family, p, e).unwrap_or_default();
            let predicted = e + slope * (p_new - p);
            let bound = options.bound(e);
            let outcome = solve_at(family, p_new, predicted, tol);
            let at_minimum = fraction <= options.min_step_fraction;
            let accepted = match &outcome {
                Ok(r) if r.converged => {
                    let jump = (r.root - e).norm();
                    let miss = (r.root - predicted).norm();
                    let trusted = miss
                        <= (0.3 * (predicted - e).norm()).max(1e-3 * e.norm().max(1.0));
                    jump <= bound && (trusted || at_minimum)
                }
                _ => false,
            };
            if accepted {
                let r = outcome.expect("accepted outcome is Ok");
                e = r.root;
                residual = r.residual;
                p = p_new;
                remaining -= h;
                if remaining < 1e-12 {
                    remaining = 0.0;
                }
                fraction = (2.0 * fraction).min(1.0);
            } else if at_minimum {
                return Err(Error::LostBranch {
                    branch,
                    parameter: p_new,
                    last: e,
                });
            } else {
                fraction *= 0.5;
            }
        }
        roots.push(e);
        residuals.push(residual);
    }
    let gaps = roots.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    Ok(BranchTrack {
        branch_index: branch,
        parameter_grid: grid.to_vec(),
        roots,
        residuals,
        gaps,
        collisions: Vec::new(),
    })
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidInput("empty parameter grid".into()));
    }
    let increasing = grid.windows(2).all(|w| w[1] > w[0]);
    let decreasing = grid.windows(2).all(|w| w[1] < w[0]);
    if !(increasing || decreasing) || grid.iter().any(|p| !p.is_finite()) {
        return Err(Error::InvalidInput(
            "parameter grid must be finite and strictly monotone".into(),
        ));
    }
    Ok(())
}

/// Marks grid points where two tracks sit on the same root. Both tracks are kept.
pub fn mark_collisions(tracks: &mut [BranchTrack], tolerance: f64) {
    let n = tracks.len();
    for i in 0..n {
        for j in i + 1..n {
            let len = tracks[i].roots.len().min(tracks[j].roots.len());
            for k in 0..len {
                if (tracks[i].roots[k] - tracks[j].roots[k]).norm() < tolerance {
                    let (bi, bj) = (tracks[i].branch_index, tracks[j].branch_index);
                    tracks[i].collisions.push(Collision {
                        grid_index: k,
                        other_branch: bj,
                    });
                    tracks[j].collisions.push(Collision {
                        grid_index: k,
                        other_branch: bi,
                    });
                }
            }
        }
    }
    for t in tracks.iter_mut() {
        t.collisions.sort_by_key(|c| (c.grid_index, c.other_branch));
    }
}

/// Tracks one branch per seed across `grid` (tangent predictor, Newton/Muller
/// corrector, step halving down to `min_step_fraction`). Branches run in
/// parallel; output order follows the seeds.
pub fn track_branch<R: RootFamily + ?Sized>(
    family: &R,
    seeds: &[Complex64],
    grid: &[f64],
    options: &TrackOptions,
) -> Result<Vec<BranchTrack>> {
    validate_grid(grid)?;
    let mut tracks = seeds
        .par_iter()
        .enumerate()
        .map(|(branch, &seed)| track_one(family, branch, seed, grid, options))
        .collect::<Result<Vec<_>>>()?;
    mark_collisions(&mut tracks, options.collision_tolerance);
    Ok(tracks)
}
