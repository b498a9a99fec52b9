use proptest::prelude::*;
use wormhole_lab::models::{sample_ising, sample_syk};
use wormhole_lab::pauli_algebra::{Pauli, PauliWord};
use wormhole_lab::sizewinding::{
    extract_coefficients, extract_pauli_coefficients, phase_alignment, winding_profile,
    winding_report,
};
use wormhole_lab::spectra::ThermalContext;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn r_is_weighted_mean_of_r_l(seed in 0u64..1000, i in 1usize..=8, t in 0.0f64..5.0, beta in 0.0f64..6.0) {
        let ctx = ThermalContext::from_spec(&sample_syk(8, 1.0, seed).unwrap(), beta).unwrap();
        let prof = winding_profile(&extract_coefficients(&ctx, i, t).unwrap()).unwrap();
        let weighted: f64 = prof.rows.iter().map(|r| r.p * r.r_l).sum();
        prop_assert!((prof.r - weighted).abs() < 1e-12);
        let total_p: f64 = prof.rows.iter().map(|r| r.p).sum();
        prop_assert!((total_p - 1.0).abs() < 1e-10);
        prop_assert!(prof.w <= prof.r + 1e-12 && prof.r <= 1.0 + 1e-12);
    }

    #[test]
    fn metrics_ignore_global_phase(seed in 0u64..1000, phi in 0.0f64..6.3) {
        let ctx = ThermalContext::from_spec(&sample_syk(8, 1.1, seed).unwrap(), 4.0).unwrap();
        let cs = extract_coefficients(&ctx, 1, 2.0).unwrap();
        let a = winding_report(&cs).unwrap();
        let b = winding_report(&cs.with_global_phase(phi)).unwrap();
        prop_assert!((a.r - b.r).abs() < 1e-12);
        prop_assert!((a.w - b.w).abs() < 1e-12);
        prop_assert!((a.fit.chi - b.fit.chi).abs() < 1e-8);
    }

    #[test]
    fn r_bar_in_unit_interval(seed in 0u64..200, t in 0.5f64..4.0) {
        let spec = sample_ising(4, 0.17, seed).unwrap();
        let ctx = ThermalContext::new(&spec.realize().unwrap(), 4.0).unwrap();
        let w = PauliWord::single(4, 0, Pauli::X).unwrap();
        let prof = winding_profile(&extract_pauli_coefficients(&ctx, &w, t).unwrap()).unwrap();
        let rb = phase_alignment(&prof).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&rb));
    }
}

/// For `N = 10` the string `ψ^i Γ` (the complement of `ψ^i`) carries no weight
/// in `ρ^{1/2} ψ^i(t)`; for `N = 8, 12` every odd string does.
#[test]
fn complement_string_vanishes_only_for_ten_majoranas() {
    for (n, expected) in [(8usize, 128usize), (10, 511), (12, 2048)] {
        let ctx = ThermalContext::from_spec(&sample_syk(n, 1.25, 0).unwrap(), 4.0).unwrap();
        let cs = extract_coefficients(&ctx, 1, 2.8).unwrap();
        assert_eq!(cs.len(), expected, "N = {n}");
        let complement: String = (2..=n)
            .map(|k| format!("ψ{k}"))
            .collect::<Vec<_>>()
            .join("·");
        assert_eq!(
            cs.coefficients.iter().any(|c| c.label == complement),
            n != 10
        );
    }
}
