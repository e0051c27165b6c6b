use std::f64::consts::PI;

use proptest::prelude::*;
use trapreact::contact::{
    busch_lhs, level_residual, real_levels, spectrum, spectrum_for_coupling, sweep_re_a, wavefunction,
    ComplexScatteringLength, Coupling, LEVEL_TOLERANCE,
};
use trapreact::croots::TrackOptions;
use trapreact::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lossy_levels_decay(alpha in -5.0..5.0f64, beta in 1e-3..=1.0f64) {
        let a = ComplexScatteringLength::new(alpha, beta).unwrap();
        let levels = spectrum(a, 6).unwrap();
        prop_assert_eq!(levels.len(), 6);
        for l in &levels {
            prop_assert!(l.energy.im <= 1e-12, "a = {alpha} - {beta}i: {:?}", l);
            prop_assert!(l.residual <= LEVEL_TOLERANCE, "{:?}", l);
        }
    }

    #[test]
    fn conjugate_coupling_conjugates_levels(alpha in -5.0..5.0f64, beta in 1e-3..=1.0f64) {
        let a = ComplexScatteringLength::new(alpha, beta).unwrap();
        let levels = spectrum_for_coupling(a.coupling(), 4).unwrap();
        let mirrored = spectrum_for_coupling(a.coupling().conj(), 4).unwrap();
        for (l, m) in levels.iter().zip(&mirrored) {
            prop_assert_eq!(l.branch, m.branch);
            prop_assert!((l.energy.conj() - m.energy).norm() <= 1e-9 * l.energy.norm().max(1.0), "{:?} vs {:?}", l, m);
        }
    }

    #[test]
    fn one_real_level_per_pole_interval(inverse_a in -20.0..20.0f64) {
        let levels = real_levels(inverse_a, 5).unwrap();
        for (n, e) in levels.iter().enumerate() {
            let hi = 2.0 * n as f64 + 1.5;
            prop_assert!(*e < hi);
            if n > 0 {
                prop_assert!(*e > hi - 2.0);
            }
            let r = level_residual(Coupling::Inverse(c(inverse_a, 0.0)), c(*e, 0.0)).unwrap();
            prop_assert!(r <= LEVEL_TOLERANCE);
        }
    }
}

#[test]
fn busch_lhs_decreases_between_poles() {
    // Poles at E = 2n + 3/2; sample each open interval on a fine grid.
    for n in 0..6 {
        let hi = 2.0 * n as f64 + 1.5;
        let lo = if n == 0 { -30.0 } else { hi - 2.0 };
        let samples = 4000;
        let mut previous = f64::INFINITY;
        for k in 1..samples {
            let e = lo + (hi - lo) * k as f64 / samples as f64;
            let v = busch_lhs(c(e, 0.0)).unwrap();
            assert!(v.im.abs() <= 1e-12 * v.re.abs().max(1.0));
            assert!(v.re < previous, "not decreasing at E = {e}");
            previous = v.re;
        }
    }
}

#[test]
fn limits_are_exact() {
    let free = spectrum_for_coupling(Coupling::NonInteracting, 4).unwrap();
    let unitary = spectrum_for_coupling(Coupling::unitarity(), 4).unwrap();
    for n in 0..4 {
        assert!((free[n].energy - c(1.5 + 2.0 * n as f64, 0.0)).norm() <= 1e-10);
        assert!((unitary[n].energy - c(0.5 + 2.0 * n as f64, 0.0)).norm() <= 1e-10);
    }
    // Approaching the limits continuously.
    let near_free = spectrum(ComplexScatteringLength::new(1e-9, 0.0).unwrap(), 3).unwrap();
    assert!((near_free[1].energy - c(1.5, 0.0)).norm() < 1e-8);
    let near_unitary = spectrum(ComplexScatteringLength::new(1e9, 0.0).unwrap(), 3).unwrap();
    assert!((near_unitary[0].energy - c(0.5, 0.0)).norm() < 1e-8);
}

/// Least-squares slope of `(E - 3/2)` against `a` through the origin, for the
/// level that starts at 3/2.
fn slope(direction: Complex64, ts: &[f64]) -> Vec<Complex64> {
    ts.iter()
        .map(|&t| {
            let a = direction * t;
            let levels = spectrum_for_coupling(Coupling::from_scattering_length(a), 3).unwrap();
            let level = levels
                .iter()
                .min_by(|x, y| (x.energy - 1.5).norm().total_cmp(&(y.energy - 1.5).norm()))
                .unwrap();
            (level.energy - 1.5) / a
        })
        .collect()
}

#[test]
fn small_a_slope_approaches_first_order_value() {
    let expected = 2.0 / PI.sqrt();
    for direction in [c(1.0, 0.0), c(-1.0, 0.0), c(1.0, -1.0), c(0.3, -1.0)] {
        let slopes = slope(direction, &[1e-2, 1e-3, 1e-4]);
        let errors: Vec<f64> = slopes.iter().map(|s| (s - expected).norm() / expected).collect();
        // First-order theory: the error shrinks linearly with |a|.
        assert!(errors[2] < 1e-3, "{direction}: {errors:?}");
        assert!(errors[1] < errors[0] && errors[2] < errors[1], "{direction}: {errors:?}");
    }
}

#[test]
fn wavefunction_solves_radial_equation() {
    for (a, level) in [(c(1.0, 0.0), 1), (c(0.8, -0.4), 0), (c(-0.5, -0.3), 2)] {
        let coupling = Coupling::from_scattering_length(a);
        let e = spectrum_for_coupling(coupling, 3).unwrap()[level].energy;
        let h = 1e-3;
        let rs: Vec<f64> = (0..=70).map(|k| 0.5 + 3.5 * k as f64 / 70.0).collect();
        let grid: Vec<f64> = rs.iter().flat_map(|&r| [r - h, r, r + h]).collect();
        let psi = wavefunction(coupling, e, &grid).unwrap();
        let u: Vec<Complex64> = grid.iter().zip(&psi).map(|(r, p)| r * p).collect();
        let scale = u.iter().map(|x| x.norm()).fold(0.0, f64::max);
        for (k, &r) in rs.iter().enumerate() {
            let (um, u0, up) = (u[3 * k], u[3 * k + 1], u[3 * k + 2]);
            let second = (up - 2.0 * u0 + um) / (h * h);
            let residual = -0.5 * second + 0.5 * r * r * u0 - e * u0;
            assert!(residual.norm() <= 1e-6 * scale.max(1.0), "a = {a}, r = {r}: {residual}");
        }
    }
}

#[test]
fn wavefunction_is_c_normalized() {
    let coupling = Coupling::from_scattering_length(c(0.6, -0.2));
    let e = spectrum_for_coupling(coupling, 2).unwrap()[1].energy;
    let n = 20000;
    let rmax = 12.0;
    let rs: Vec<f64> = (1..=n).map(|k| rmax * (k as f64 - 0.5) / n as f64).collect();
    let psi = wavefunction(coupling, e, &rs).unwrap();
    let norm: Complex64 = rs.iter().zip(&psi).map(|(r, p)| 4.0 * PI * r * r * p * p).sum::<Complex64>() * (rmax / n as f64);
    assert!((norm - 1.0).norm() < 1e-5, "{norm}");
}

#[test]
fn sweeps_are_continuous_and_on_shell() {
    let grid: Vec<f64> = (0..=400).map(|k| -2.0 + 0.01 * k as f64).collect();
    // Real sweeps solve each point on its own and are not tracked.
    for beta in [0.1, 0.4427, 1.0] {
        let tracks = sweep_re_a(beta, &grid, 3).unwrap();
        let bound = TrackOptions::default().continuity_bound;
        for t in &tracks {
            assert!(t.residuals.iter().all(|&r| r <= LEVEL_TOLERANCE), "beta {beta}");
            for (i, g) in t.gaps.iter().enumerate() {
                let at_collision = t.collisions.iter().any(|c| c.grid_index == i || c.grid_index == i + 1);
                let scale = t.roots[i].norm().max(1.0);
                assert!(*g <= bound * scale || at_collision, "beta {beta} branch {} step {i}: {g}", t.branch_index);
            }
        }
    }
}

#[test]
fn sweeps_are_deterministic() {
    let grid: Vec<f64> = (0..=200).map(|k| -1.0 + 0.01 * k as f64).collect();
    let first = sweep_re_a(0.3, &grid, 3).unwrap();
    let second = sweep_re_a(0.3, &grid, 3).unwrap();
    assert_eq!(first, second);
}

#[test]
fn gain_is_rejected() {
    assert!(ComplexScatteringLength::new(1.0, -0.1).is_err());
    assert!(ComplexScatteringLength::new(f64::NAN, 0.1).is_err());
}
