//! One pass/fail line per acceptance criterion. Run with `--nocapture` to see
//! the report; the test fails if any criterion does.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use common::{c, domain, rel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trapreact::aqw::{energy_dependent_a, eta_from_polar, scattering_length_from_coefficients, zero_energy_a, WellSpec};
use trapreact::contact::{find_avoided_crossing, spectrum_for_coupling, Coupling};
use trapreact::decay::{evolve, fit_decay_rate, EvolutionState};
use trapreact::physunits::{
    density_overlap_lifetime, k_reactive_universal, lifetime_sweep, molecular_lifetime, SpeciesRegistry, TrapContext,
};
use trapreact::specfun::kummer_m;
use trapreact::trapwell::{compare_methods, FiniteRangeProblem};
use trapreact::Complex64;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn timed(f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let start = Instant::now();
    let o = f();
    (o, start.elapsed())
}

fn limits() -> Outcome {
    let (o, elapsed) = timed(|| {
        let free = spectrum_for_coupling(Coupling::NonInteracting, 3).unwrap();
        let unitary = spectrum_for_coupling(Coupling::unitarity(), 3).unwrap();
        let err = (0..3)
            .map(|n| {
                let k = 2.0 * n as f64;
                (free[n].energy - (1.5 + k)).norm().max((unitary[n].energy - (0.5 + k)).norm())
            })
            .fold(0.0, f64::max);
        outcome(err <= 1e-10, format!("max error {err:.1e}"))
    });
    let pass = o.pass && elapsed < Duration::from_secs(1);
    outcome(pass, format!("{}, {:.3} s", o.detail, elapsed.as_secs_f64()))
}

fn slope() -> Outcome {
    let direction = c(1.0, -1.0);
    let expected = 2.0 / PI.sqrt() * direction;
    let slopes: Vec<Complex64> = [1e-2, 1e-3, 1e-4]
        .iter()
        .map(|&t| {
            let a = direction * t;
            let levels = spectrum_for_coupling(Coupling::from_scattering_length(a), 3).unwrap();
            let e0 = levels
                .iter()
                .map(|l| l.energy)
                .min_by(|x, y| (x - 1.5).norm().total_cmp(&(y - 1.5).norm()))
                .unwrap();
            (e0 - 1.5) / t
        })
        .collect();
    let err = rel(slopes[2], expected);
    outcome(err <= 0.01, format!("slope {:.6} vs {:.6}, rel error {err:.1e}", slopes[2], expected))
}

fn crossing() -> Outcome {
    match find_avoided_crossing(0, 1, (0.2, 0.7)) {
        Ok(beta) => outcome((beta - 0.4427).abs() <= 0.005, format!("beta* = {beta:.5}")),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn aqw_limits() -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 1..=4000 {
        let alpha = 4.0 * PI * k as f64 / 4000.0;
        let range = 1.0;
        if (alpha / PI - (alpha / PI).floor() - 0.5).abs() > 1e-3 {
            let a = zero_energy_a(&WellSpec::from_alpha(alpha, range, c(1.0, 0.0)).unwrap()).unwrap();
            let expected = range * (1.0 - alpha.tan() / alpha);
            worst = worst.max((a - expected).norm() / expected.abs().max(range));
        }
        let a = zero_energy_a(&WellSpec::from_alpha(alpha, range, c(0.0, 0.0)).unwrap()).unwrap();
        worst = worst.max(rel(a, c(range, -range / alpha)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut max_im = f64::NEG_INFINITY;
    let mut samples = 0;
    while samples < 10_000 {
        let eta = Complex64::from_polar(rng.random::<f64>().sqrt(), rng.random_range(-PI..PI));
        let alpha = rng.random_range(1e-3..4.0 * PI);
        if let Ok(a) = zero_energy_a(&WellSpec::from_alpha(alpha, 1.0, eta).unwrap()) {
            max_im = max_im.max(a.im / a.norm().max(1.0));
            samples += 1;
        }
    }
    outcome(
        worst <= 1e-12 && max_im <= 1e-12,
        format!("closed forms {worst:.1e}, max Im a / |a| over 1e4 samples {max_im:.1e}"),
    )
}

fn energy_dependent_a_routes() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut routes, mut low): (f64, f64) = (0.0, 0.0);
    for _ in 0..1000 {
        let eta = eta_from_polar(rng.random_range(0.0..=1.0), rng.random_range(-1.0..1.0));
        let well = WellSpec::from_alpha(rng.random_range(0.1..4.0 * PI), 0.1, eta).unwrap();
        let energy: f64 = rng.random_range(1e-3..10.0);
        let kappa = c((2.0 * energy).sqrt(), 0.0);
        if let (Ok(x), Ok(y)) = (energy_dependent_a(kappa, &well), scattering_length_from_coefficients(energy, &well)) {
            routes = routes.max((x - y).norm() / x.norm().max(1.0));
        }
        if let (Ok(a0), Ok(a)) = (zero_energy_a(&well), energy_dependent_a(c(1e-4, 0.0), &well)) {
            low = low.max((a - a0).norm() / a0.norm().max(1.0));
        }
    }
    outcome(routes <= 1e-10 && low <= 1e-6, format!("routes {routes:.1e}, kappa = 1e-4 limit {low:.1e}"))
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

fn three_methods() -> Outcome {
    let (o, elapsed) = timed(|| {
        let mut pass = true;
        let mut detail = Vec::new();
        for modulus in [0.3, 0.7, 1.0] {
            let problem = FiniteRangeProblem::alpha_grid(0.1, eta_from_polar(modulus, 0.0), 3, 2000, 4.0 * PI).unwrap();
            let rows = match compare_methods(&problem) {
                Ok(rows) => rows,
                Err(e) => return outcome(false, format!("eta = {modulus}: {e}")),
            };
            for branch in 0..3 {
                let of: Vec<_> = rows.iter().filter(|r| r.branch == branch).collect();
                let edep = median(of.iter().map(|r| (r.edep - r.exact).norm()).collect());
                let eindep = median(of.iter().map(|r| (r.eindep - r.exact).norm()).collect());
                pass &= edep <= eindep;
            }
            let close = rows.iter().filter(|r| (r.edep - r.exact).norm() <= 0.05).count() as f64 / rows.len() as f64;
            pass &= close >= 0.9;
            detail.push(format!("|eta| = {modulus}: {:.1}% within 0.05", 100.0 * close));
        }
        outcome(pass, detail.join(", "))
    });
    let pass = o.pass && elapsed < Duration::from_secs(120);
    outcome(pass, format!("{}; {:.1} s", o.detail, elapsed.as_secs_f64()))
}

fn units() -> Outcome {
    let registry = SpeciesRegistry::builtin();
    let krb = registry.get("KRb").unwrap();
    let ctx = TrapContext::for_species(krb, 20e3).unwrap();
    let size = 2.0 * ctx.osc_length() * 1e9;
    let k = k_reactive_universal(krb);
    let abar = krb.abar_nm;
    let pass = (size / 180.0 - 1.0).abs() <= 0.05 && (k / 1.3e-11 - 1.0).abs() <= 0.1 && (abar - 6.4).abs() < 0.05;
    outcome(pass, format!("2 l_osc = {size:.1} nm, K = {k:.4e} cm^3/s, abar = {abar} nm"))
}

fn scaling() -> Outcome {
    let krb = SpeciesRegistry::builtin().get("KRb").unwrap().clone();
    let freqs: Vec<f64> = (0..16).map(|k| 5e3 * 40f64.powf(k as f64 / 15.0)).collect();
    let rows = lifetime_sweep(&krb, &freqs, &[1, 2, 3]).unwrap();
    let mut pass = true;
    let mut exponents = Vec::new();
    for level in 1..=3 {
        let (x, y): (Vec<f64>, Vec<f64>) =
            rows.iter().filter(|r| r.level == level).map(|r| (r.frequency.ln(), r.tau.ln())).unzip();
        let n = x.len() as f64;
        let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
        let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
        let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
        let p = sxy / sxx;
        pass &= (p + 1.0).abs() <= 0.05;
        exponents.push(format!("{p:.3}"));
    }
    outcome(pass, format!("exponents {} (expected -1.00 +- 0.05)", exponents.join(", ")))
}

fn magnitudes() -> Outcome {
    let registry = SpeciesRegistry::builtin();
    let krb = registry.get("KRb").unwrap();
    let lics = registry.get("LiCs").unwrap();
    let overlap = |s, f| density_overlap_lifetime(s, &TrapContext::for_species(s, f).unwrap(), 0) * 1e3;
    let (krb_ms, lics_ms) = (overlap(krb, 20e3), overlap(lics, 20e3));
    let row = &lifetime_sweep(krb, &[20e3], &[1]).unwrap()[0];
    let tau_ms = row.tau * 1e3;
    let molecular = molecular_lifetime(krb, 20e3).unwrap().tau;
    let pass = (0.25..=1.0).contains(&krb_ms)
        && (0.2..=0.8).contains(&lics_ms)
        && (0.05..=5.0).contains(&tau_ms)
        && molecular < 1e-6;
    outcome(
        pass,
        format!(
            "overlap KRb {krb_ms:.3} ms, LiCs {lics_ms:.3} ms; complex-energy {tau_ms:.4} ms (band 0.05-5); \
             molecular {molecular:.2e} s; tau / tau_overlap = {:.4}",
            row.convention_ratio().unwrap()
        ),
    )
}

fn dynamics() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut fit_err: f64 = 0.0;
    for level in 0..3 {
        let width: f64 = [0.3, 0.01, 1.0][level];
        let eig = vec![c(0.5, -0.3), c(2.5, -0.01), c(4.5, -1.0)];
        let state = EvolutionState::pure(eig, level).unwrap();
        let times: Vec<f64> = (0..32).map(|k| 0.05 * k as f64 / width.max(0.1)).collect();
        let pops: Vec<f64> = times.iter().map(|&t| evolve(&state, t).unwrap().populations()[level]).collect();
        let rate = fit_decay_rate(&times, &pops).unwrap();
        fit_err = fit_err.max((rate.abs() - 2.0 * width).abs() / (2.0 * width));
    }
    let mut monotone = 0;
    for _ in 0..100 {
        let n = rng.random_range(2..6);
        let eig: Vec<Complex64> = (0..n)
            .map(|k| c(0.5 + 2.0 * k as f64 + rng.random_range(-0.5..0.5), -rng.random_range(0.0..0.5)))
            .collect();
        let g = nalgebra::DMatrix::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let rho = &g * g.adjoint();
        let rho = rho.clone() / rho.trace();
        let state = EvolutionState::new(eig, rho).unwrap();
        let traces: Vec<f64> = (0..=60).map(|k| evolve(&state, 0.1 * k as f64).unwrap().trace()).collect();
        if traces.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)) {
            monotone += 1;
        }
    }
    outcome(
        fit_err <= 1e-12 && monotone == 100,
        format!("fit rel error {fit_err:.1e}, monotone traces {monotone}/100"),
    )
}

fn identities() -> Outcome {
    let (o, elapsed) = timed(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let max = |f: &mut dyn FnMut(&mut ChaCha8Rng) -> f64, rng: &mut ChaCha8Rng| {
            (0..1000).map(|_| f(rng)).fold(0.0, f64::max)
        };
        let checks = [
            (
                "gamma recurrence",
                max(&mut |r| common::gamma_recurrence_error(domain::gamma_argument(r)), &mut rng),
                1e-12,
            ),
            (
                "gamma reflection",
                max(&mut |r| common::gamma_reflection_error(domain::gamma_argument(r)), &mut rng),
                1e-10,
            ),
            (
                "Kummer transformation",
                max(
                    &mut |r| {
                        let (a, b, z) = domain::kummer_arguments(r);
                        common::kummer_transformation_error(a, b, z)
                    },
                    &mut rng,
                ),
                1e-9,
            ),
            (
                "Wronskian",
                max(
                    &mut |r| {
                        let (a, b, z) = domain::wronskian_arguments(r);
                        common::wronskian_error(a, b, z)
                    },
                    &mut rng,
                ),
                1e-8,
            ),
            (
                "M/U connection",
                max(
                    &mut |r| {
                        let (a, z) = domain::connection_arguments(r);
                        common::connection_error(a, z)
                    },
                    &mut rng,
                ),
                1e-9,
            ),
            (
                "M reference values",
                common::kummer_reference()
                    .iter()
                    .map(|&(a, b, z, m)| rel(kummer_m(a, b, z).unwrap(), m))
                    .fold(0.0, f64::max),
                1e-10,
            ),
        ];
        let pass = checks.iter().all(|(_, err, tol)| err <= tol);
        let detail = checks
            .iter()
            .map(|(name, err, tol)| format!("{name} {err:.1e} (<= {tol:.0e})"))
            .collect::<Vec<_>>()
            .join(", ");
        outcome(pass, detail)
    });
    let pass = o.pass && elapsed < Duration::from_secs(10);
    outcome(pass, format!("{}; {:.2} s", o.detail, elapsed.as_secs_f64()))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("limit exactness", limits),
        ("perturbative slope", slope),
        ("avoided-crossing location", crossing),
        ("square-well closed forms and absorption sign", aqw_limits),
        ("energy-dependent scattering length", energy_dependent_a_routes),
        ("three-method comparison", three_methods),
        ("units pipeline", units),
        ("lifetime scaling", scaling),
        ("lifetime magnitudes", magnitudes),
        ("decay dynamics", dynamics),
        ("special-function identities", identities),
    ];
    println!();
    let mut failed = Vec::new();
    for (k, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        println!("{} {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, k + 1, o.detail);
        if !o.pass {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
