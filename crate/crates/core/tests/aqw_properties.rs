use std::f64::consts::PI;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trapreact::aqw::{
    coefficients, energy_dependent_a, eta_from_polar, resonance_poles, scattering_length_from_coefficients,
    zero_energy_a, WellSpec,
};
use trapreact::Complex64;

/// Uniform over the closed unit disk.
fn random_eta(rng: &mut impl Rng) -> Complex64 {
    Complex64::from_polar(rng.random::<f64>().sqrt(), rng.random_range(-PI..PI))
}

#[test]
fn absorption_never_creates_flux() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10_000 {
        let eta = random_eta(&mut rng);
        let range = rng.random_range(0.02..1.0);
        let alpha = rng.random_range(1e-3..4.0 * PI);
        let well = WellSpec::from_alpha(alpha, range, eta).unwrap();
        let a = match zero_energy_a(&well) {
            Ok(a) => a,
            Err(_) => continue,
        };
        assert!(a.im <= 1e-12 * a.norm().max(1.0), "eta = {eta}, alpha = {alpha}: {a}");
        let energy = rng.random_range(1e-3..20.0);
        if let Ok(coeffs) = coefficients(energy, &well) {
            assert!(coeffs.c_tilde.norm() <= 1.0 + 1e-10, "eta = {eta}, E = {energy}: {}", coeffs.c_tilde);
        }
    }
}

#[test]
fn lossless_well_conserves_flux() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..1000 {
        let eta = eta_from_polar(1.0, rng.random_range(-1.0..1.0));
        let well = WellSpec::from_alpha(rng.random_range(0.1..12.0), 0.1, eta).unwrap();
        if let Ok(coeffs) = coefficients(rng.random_range(0.01..10.0), &well) {
            assert!((coeffs.c_tilde.norm() - 1.0).abs() <= 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn closed_form_limits(alpha in 1e-3..4.0 * PI, range in 0.01..2.0f64) {
        let real = WellSpec::from_alpha(alpha, range, Complex64::new(1.0, 0.0)).unwrap();
        if (alpha / PI - (alpha / PI).floor() - 0.5).abs() > 1e-3 {
            let a = zero_energy_a(&real).unwrap();
            let expected = range * (1.0 - alpha.tan() / alpha);
            prop_assert!((a - expected).norm() <= 1e-12 * expected.abs().max(range), "{a} vs {expected}");
        }
        let black = WellSpec::from_alpha(alpha, range, Complex64::new(0.0, 0.0)).unwrap();
        let a = zero_energy_a(&black).unwrap();
        let expected = Complex64::new(range, -range / alpha);
        prop_assert!((a - expected).norm() <= 1e-12 * expected.norm());
    }

    #[test]
    fn both_scattering_length_routes_agree(
        modulus in 0.0..=1.0f64,
        phase in -1.0..1.0f64,
        alpha in 0.1..4.0 * PI,
        energy in 1e-3..10.0f64,
    ) {
        let well = WellSpec::from_alpha(alpha, 0.1, eta_from_polar(modulus, phase)).unwrap();
        let kappa = Complex64::new((2.0 * energy).sqrt(), 0.0);
        if let (Ok(direct), Ok(via)) = (energy_dependent_a(kappa, &well), scattering_length_from_coefficients(energy, &well)) {
            prop_assert!((direct - via).norm() <= 1e-10 * direct.norm().max(1.0), "{direct} vs {via}");
        }
    }

    #[test]
    fn small_kappa_reaches_zero_energy_value(modulus in 0.0..=1.0f64, phase in -1.0..1.0f64, alpha in 0.1..4.0 * PI) {
        let well = WellSpec::from_alpha(alpha, 0.1, eta_from_polar(modulus, phase)).unwrap();
        if let (Ok(a0), Ok(a)) = (zero_energy_a(&well), energy_dependent_a(Complex64::new(1e-4, 0.0), &well)) {
            // Effective-range correction is O(kappa^2 a0 r_e^2).
            prop_assert!((a - a0).norm() <= 1e-6 * a0.norm().max(1.0), "{a} vs {a0}");
        }
    }

    #[test]
    fn phase_advance_moves_poles_by_pi(phase in -1.0..1.0f64) {
        let before = resonance_poles(eta_from_polar(1.0, phase), 0.0, 8.0 * PI);
        let after = resonance_poles(eta_from_polar(1.0, phase + 2.0), 0.0, 8.0 * PI);
        // arg wraps the phase back into (-pi, pi]; the pole set is the same lattice.
        for p in before.iter().skip(1) {
            prop_assert!(after.iter().any(|q| (q - (p - PI)).abs() < 1e-9 || (q - p).abs() < 1e-9));
        }
        for p in &before {
            let w = WellSpec::from_alpha(*p, 1.0, eta_from_polar(1.0, phase)).unwrap();
            let plus = w.eta * Complex64::new(0.0, *p).exp();
            let minus = Complex64::new(0.0, -*p).exp();
            prop_assert!((plus + minus).norm() < 1e-9);
        }
    }
}

#[test]
fn pole_condition_fixes_alpha_plus_half_phase() {
    for phase in [-0.9, -0.25, 0.0, 0.3, 0.75] {
        let eta = eta_from_polar(1.0, phase);
        for alpha in resonance_poles(eta, 0.0, 4.0 * PI) {
            let k = ((2.0 * alpha + PI * phase - PI) / (2.0 * PI)).round();
            assert!((2.0 * alpha + PI * phase - PI - 2.0 * PI * k).abs() < 1e-12);
        }
    }
    assert!(resonance_poles(eta_from_polar(0.7, 0.0), 0.0, 4.0 * PI).is_empty());
}
