//! Cross-module consistency: the reduced cocycle against the full one, the
//! alternating-coupling reduction against the shifted constant model, and
//! the band machinery against closed-form references.

use quasispec_core::cohomology::shift_by_pi;
use quasispec_core::lyapunov::{
    doubling_schedule, energy_grid, herman_lower_bound, le_sweep, lm_phase_average,
    lyapunov_estimate_with_grid,
};
use quasispec_core::model::{reduced_cocycle, ModelParams, GOLDEN_ALPHA};
use quasispec_core::numerics::{pairwise_sum, ScaledMat2};
use quasispec_core::spectrum::{rational_bands, RationalModel};
use std::f64::consts::TAU;

/// Exponent of the reduced cocycle estimated by the same phase-average
/// construction over the accelerated base theta -> theta + k*omega.
fn reduced_exponent(params: &ModelParams, energy: f64, blocks: u64, grid: usize) -> f64 {
    let k = params.period() as f64;
    let values: Vec<f64> = (0..grid)
        .map(|i| {
            let theta0 = TAU * (i as f64 + 0.5) / grid as f64;
            let mut acc = ScaledMat2::IDENTITY;
            for j in 0..blocks {
                let theta = (theta0 + j as f64 * k * params.omega()).rem_euclid(TAU);
                let block = ScaledMat2::from_mat(reduced_cocycle(params, energy, theta).into_mat());
                acc = block.mul(&acc);
            }
            acc.log_schmidt_norm() / blocks as f64
        })
        .collect();
    pairwise_sum(&values) / grid as f64
}

#[test]
fn reduced_cocycle_exponent_matches_full_cocycle() {
    let params = ModelParams::from_alpha(3.0, vec![1.0, -0.6], GOLDEN_ALPHA).unwrap();
    let energy = 0.4;
    let k = params.period() as u64;
    let blocks = 4096u64;
    let est = lyapunov_estimate_with_grid(&params, energy, &[blocks * k], 64);
    let reduced = reduced_exponent(&params, energy, blocks, 64) / k as f64;
    assert!(
        (reduced - est.value).abs() <= 2.0 * est.spread.max(1e-4),
        "reduced {reduced} vs full {} (spread {})",
        est.value,
        est.spread
    );
}

#[test]
fn herman_bound_dominated_on_a_coarse_sweep() {
    let params = ModelParams::from_alpha(4.0, vec![2.0, 0.5], GOLDEN_ALPHA).unwrap();
    let bound = herman_lower_bound(&params);
    assert!((bound - 2.0f64.ln()).abs() < 1e-12);
    let energies = energy_grid(-params.energy_bound(), params.energy_bound(), 21);
    for (energy, est) in le_sweep(&params, &energies, &doubling_schedule(6, 12), 64) {
        assert!(
            est.value >= bound - 0.05,
            "E={energy}: {} < {bound}",
            est.value
        );
    }
}

#[test]
fn alternating_sweep_equals_shifted_constant_sweep() {
    let omega = TAU * GOLDEN_ALPHA;
    let alternating = ModelParams::new(2.0, vec![1.0, -1.0], omega).unwrap();
    let classic = ModelParams::new(2.0, vec![1.0], shift_by_pi(omega)).unwrap();
    let energies = energy_grid(-4.0, 4.0, 17);
    let schedule = doubling_schedule(6, 11);
    let a = le_sweep(&alternating, &energies, &schedule, 64);
    let b = le_sweep(&classic, &energies, &schedule, 64);
    for ((energy, ea), (_, eb)) in a.iter().zip(b.iter()) {
        assert!(
            (ea.value - eb.value).abs() <= 1e-3,
            "E={energy}: {} vs {}",
            ea.value,
            eb.value
        );
    }
}

#[test]
fn alternating_bands_match_shifted_constant_bands() {
    // At alpha = p/q the alternating model equals the constant model at
    // alpha + 1/2 mod 1; band sets agree as closed sets.
    let alternating = RationalModel::new(1.0, vec![1.0, -1.0], 2, 5).unwrap();
    // 2/5 + 1/2 = 9/10.  The reflected representative 1 - 9/10 = 1/10 keeps
    // alpha in (0, 1); reflection preserves each section's spectrum.
    let shifted = RationalModel::new(1.0, vec![1.0], 1, 10).unwrap();
    let a = rational_bands(&alternating, 32, 1e-3).unwrap();
    let b = rational_bands(&shifted, 32, 1e-3).unwrap();
    let d = quasispec_core::numerics::hausdorff_distance(&a.bands, &b.bands);
    assert!(d <= 1e-6, "Hausdorff {d}");
}

#[test]
fn vanishing_first_coupling_kills_the_exponent_at_zero_energy() {
    let params = ModelParams::from_alpha(1.0, vec![0.0, 7.0], GOLDEN_ALPHA).unwrap();
    let lm = lm_phase_average(&params, 0.0, 1 << 15, 64);
    assert!(lm <= 1e-3, "{lm}");
}

#[test]
fn subcritical_band_measure_tracks_the_coupling() {
    // measure = 4|1 - lambda/2| at a golden convergent, lambda < 2.
    for lambda in [0.5, 1.5] {
        let model = RationalModel::new(lambda, vec![1.0], 8, 13).unwrap();
        let set = rational_bands(&model, 32, 1e-3).unwrap();
        let expected = 4.0 * (1.0 - lambda / 2.0);
        assert!(
            (set.measure() - expected).abs() <= 0.12,
            "lambda={lambda}: {} vs {expected}",
            set.measure()
        );
    }
}
