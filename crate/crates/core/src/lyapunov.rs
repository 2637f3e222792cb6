//! Lyapunov exponent estimation: phase-averaged log norms of cocycle
//! products, their minimum over a step schedule, the Herman lower bound and
//! parallel energy sweeps.
//!
//! The m-step quantity averaged here is (1/m) log ||A^m|| over a uniform
//! phase grid and all coupling residues; the subadditive limit is
//! approached from above, so the estimator takes the minimum over an
//! increasing schedule of m values, reusing one orbit per phase sample.

use rayon::prelude::*;

use crate::model::{cocycle_checkpoints, ModelParams, PhasePoint};
use crate::numerics::pairwise_sum;

/// Phase samples per residue used by the default estimators.
pub const DEFAULT_GRID_SIZE: usize = 512;

/// Doubling schedule 2^lo .. 2^hi inclusive.
pub fn doubling_schedule(lo_exp: u32, hi_exp: u32) -> Vec<u64> {
    (lo_exp..=hi_exp).map(|e| 1u64 << e).collect()
}

/// Default schedule for energy sweeps.
pub fn sweep_schedule() -> Vec<u64> {
    doubling_schedule(6, 14)
}

/// Default schedule for single-energy certification.
pub fn certification_schedule() -> Vec<u64> {
    doubling_schedule(6, 20)
}

/// A Lyapunov exponent estimate in nats per step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovEstimate {
    /// Min over the schedule of the phase-averaged (1/m) log norm.
    pub value: f64,
    /// The m attaining the minimum.
    pub m: u64,
    /// Phase samples per residue.
    pub grid: usize,
    /// max - min over the grid of per-sample values at the attaining m;
    /// a convergence indicator.
    pub spread: f64,
}

#[derive(Debug, Clone, Copy)]
struct PhaseStats {
    mean: f64,
    min: f64,
    max: f64,
}

/// Midpoint phase grid; starting points cover every residue.
fn grid_points(params: &ModelParams, grid_size: usize) -> Vec<PhasePoint> {
    let k = params.period();
    let mut points = Vec::with_capacity(k * grid_size);
    for h in 0..k {
        for i in 0..grid_size {
            let theta = std::f64::consts::TAU * (i as f64 + 0.5) / grid_size as f64;
            points.push(PhasePoint { theta, residue: h });
        }
    }
    points
}

/// Per-checkpoint statistics of (1/m) log ||A^m(start)|| over the grid.
/// Samples are reduced with a deterministic pairwise sum in grid order, so
/// parallel and serial runs agree bitwise.
fn phase_stats(
    params: &ModelParams,
    energy: f64,
    schedule: &[u64],
    grid_size: usize,
) -> Vec<PhaseStats> {
    assert!(!schedule.is_empty(), "schedule must be nonempty");
    assert!(grid_size >= 1, "grid_size must be >= 1");
    let points = grid_points(params, grid_size);
    let per_sample: Vec<Vec<f64>> = points
        .par_iter()
        .map(|&start| {
            cocycle_checkpoints(params, energy, start, schedule)
                .iter()
                .zip(schedule)
                .map(|(snap, &m)| snap.log_schmidt_norm() / m as f64)
                .collect()
        })
        .collect();
    (0..schedule.len())
        .map(|j| {
            let column: Vec<f64> = per_sample.iter().map(|row| row[j]).collect();
            let mean = pairwise_sum(&column) / column.len() as f64;
            let min = column.iter().copied().fold(f64::INFINITY, f64::min);
            let max = column.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            PhaseStats { mean, min, max }
        })
        .collect()
}

/// Phase-averaged (1/m) log Schmidt norm of the m-step product, averaged
/// over `grid_size` phases per residue and all residues.
pub fn lm_phase_average(params: &ModelParams, energy: f64, m: u64, grid_size: usize) -> f64 {
    phase_stats(params, energy, &[m.max(1)], grid_size)[0].mean
}

/// Same average restricted to orbits starting at one residue.
pub fn lm_phase_average_at_residue(
    params: &ModelParams,
    energy: f64,
    m: u64,
    grid_size: usize,
    residue: usize,
) -> f64 {
    let m = m.max(1);
    let points: Vec<PhasePoint> = (0..grid_size)
        .map(|i| PhasePoint {
            theta: std::f64::consts::TAU * (i as f64 + 0.5) / grid_size as f64,
            residue,
        })
        .collect();
    let values: Vec<f64> = points
        .par_iter()
        .map(|&start| {
            cocycle_checkpoints(params, energy, start, &[m])[0].log_schmidt_norm() / m as f64
        })
        .collect();
    pairwise_sum(&values) / values.len() as f64
}

/// Minimum of the phase average over an increasing schedule of m values.
/// Each grid orbit is run once to the final m with snapshots at the
/// schedule points, so the checkpoint values agree bitwise with
/// [`lm_phase_average`] at the same m.
pub fn lyapunov_estimate_with_grid(
    params: &ModelParams,
    energy: f64,
    schedule: &[u64],
    grid_size: usize,
) -> LyapunovEstimate {
    let stats = phase_stats(params, energy, schedule, grid_size);
    let (best, stat) = stats
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.mean.partial_cmp(&b.1.mean).expect("finite averages"))
        .expect("nonempty schedule");
    LyapunovEstimate {
        value: stat.mean,
        m: schedule[best],
        grid: grid_size,
        spread: stat.max - stat.min,
    }
}

pub fn lyapunov_estimate(params: &ModelParams, energy: f64, schedule: &[u64]) -> LyapunovEstimate {
    lyapunov_estimate_with_grid(params, energy, schedule, DEFAULT_GRID_SIZE)
}

/// Herman lower bound ln((|lambda|/2) * geometric mean of |T|); minus
/// infinity when the coupling or lambda vanishes. Lyapunov estimates
/// dominate this bound at every energy.
pub fn herman_lower_bound(params: &ModelParams) -> f64 {
    let lambda = params.lambda().abs();
    if lambda == 0.0 || params.coupling().contains(&0.0) {
        return f64::NEG_INFINITY;
    }
    let k = params.period() as f64;
    let log_gm: f64 = params.coupling().iter().map(|t| t.abs().ln()).sum::<f64>() / k;
    (lambda / 2.0).ln() + log_gm
}

/// Estimates for every energy on the grid; output order matches input
/// order regardless of parallel execution.
pub fn le_sweep(
    params: &ModelParams,
    energies: &[f64],
    schedule: &[u64],
    grid_size: usize,
) -> Vec<(f64, LyapunovEstimate)> {
    energies
        .par_iter()
        .map(|&e| (e, lyapunov_estimate_with_grid(params, e, schedule, grid_size)))
        .collect()
}

/// Uniform energy grid of `count` points on [lo, hi].
pub fn energy_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![0.5 * (lo + hi)];
    }
    (0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{cocycle_product, GOLDEN_ALPHA};
    use crate::numerics::operator_norm;

    fn golden_params(lambda: f64, coupling: Vec<f64>) -> ModelParams {
        ModelParams::from_alpha(lambda, coupling, GOLDEN_ALPHA).unwrap()
    }

    #[test]
    fn free_cocycle_inside_band_has_tiny_exponent() {
        let params = golden_params(0.0, vec![1.0]);
        for energy in [0.0, 1.0, -1.5] {
            let lm = lm_phase_average(&params, energy, 10_000, 16);
            assert!(lm <= 0.01, "E={energy}: {lm}");
        }
    }

    #[test]
    fn free_cocycle_outside_band_matches_closed_form() {
        let params = golden_params(0.0, vec![1.0]);
        for energy in [2.6f64, 3.0, -3.5] {
            let expected = ((energy.abs() + (energy * energy - 4.0).sqrt()) / 2.0).ln();
            let lm = lm_phase_average(&params, energy, 8192, 8);
            assert!((lm - expected).abs() <= 0.02, "E={energy}: {lm} vs {expected}");
        }
    }

    #[test]
    fn unipotent_block_exponent_is_logarithmically_small() {
        let t1 = 10.0;
        let params = golden_params(1.0, vec![0.0, t1]);
        let m = 10_000u64;
        let lm = lm_phase_average(&params, 0.0, m, 32);
        let bound = (2.0 + t1 * t1 * (m as f64) * (m as f64)).sqrt().ln() / m as f64;
        assert!(lm <= bound, "{lm} > {bound}");
    }

    #[test]
    fn strong_coupling_amo_reaches_herman_floor() {
        let params = golden_params(6.0, vec![1.0]);
        let lm = lm_phase_average(&params, 0.0, 16_384, 64);
        assert!(lm >= 3f64.ln() - 0.05, "{lm}");
    }

    #[test]
    fn herman_bound_values() {
        assert!((herman_lower_bound(&golden_params(6.0, vec![1.0])) - 3f64.ln()).abs() < 1e-14);
        assert!(
            (herman_lower_bound(&golden_params(2.0, vec![4.0, 1.0])) - 2f64.ln()).abs() < 1e-14
        );
        assert_eq!(
            herman_lower_bound(&golden_params(2.0, vec![1.0, 0.0])),
            f64::NEG_INFINITY
        );
        assert_eq!(
            herman_lower_bound(&golden_params(0.0, vec![1.0])),
            f64::NEG_INFINITY
        );
    }

    #[test]
    fn estimate_is_min_of_schedule_averages() {
        let params = golden_params(1.5, vec![1.0, -1.0]);
        let schedule = doubling_schedule(4, 9);
        let est = lyapunov_estimate_with_grid(&params, 0.4, &schedule, 24);
        for &m in &schedule {
            let lm = lm_phase_average(&params, 0.4, m, 24);
            assert!(est.value <= lm + 1e-15, "m={m}");
        }
        assert!(schedule.contains(&est.m));
    }

    #[test]
    fn estimate_checkpoints_match_single_runs_bitwise() {
        let params = golden_params(2.0, vec![1.0]);
        let schedule = [64u64, 256, 1024];
        let est = lyapunov_estimate_with_grid(&params, 1.1, &schedule, 8);
        let singles: Vec<f64> = schedule
            .iter()
            .map(|&m| lm_phase_average(&params, 1.1, m, 8))
            .collect();
        let min = singles.iter().copied().fold(f64::INFINITY, f64::min);
        assert_eq!(est.value, min);
    }

    #[test]
    fn estimate_value_is_effectively_nonnegative() {
        let params = golden_params(0.9, vec![1.0, 0.3]);
        let est = lyapunov_estimate_with_grid(&params, 0.2, &doubling_schedule(6, 12), 32);
        assert!(est.value >= -1e-9);
        assert!(est.value >= -10.0 * est.spread);
    }

    #[test]
    fn vanishing_coupling_estimate_is_small_at_zero_energy() {
        let params = golden_params(1.0, vec![0.0, 5.0]);
        let est = lyapunov_estimate_with_grid(&params, 0.0, &doubling_schedule(6, 13), 32);
        assert!(est.value <= 0.01, "{}", est.value);
    }

    #[test]
    fn sweep_preserves_input_order() {
        let params = golden_params(1.0, vec![1.0]);
        let energies = [1.5, -0.5, 0.0, 2.5];
        let out = le_sweep(&params, &energies, &doubling_schedule(5, 8), 8);
        let returned: Vec<f64> = out.iter().map(|(e, _)| *e).collect();
        assert_eq!(returned, energies);
    }

    #[test]
    fn sweep_modulus_of_continuity_shrinks_under_refinement() {
        let params = golden_params(1.0, vec![1.0]);
        let schedule = doubling_schedule(6, 11);
        let modulus = |count: usize| {
            let grid = energy_grid(-3.0, 3.0, count);
            let sweep = le_sweep(&params, &grid, &schedule, 24);
            sweep
                .windows(2)
                .map(|w| (w[1].1.value - w[0].1.value).abs())
                .fold(0.0, f64::max)
        };
        let coarse = modulus(31);
        let fine = modulus(61);
        assert!(fine < coarse, "fine {fine} vs coarse {coarse}");
    }

    #[test]
    fn operator_norm_choice_shifts_average_by_at_most_half_log_two() {
        let params = golden_params(1.3, vec![1.0, 2.0]);
        let m = 512u64;
        let grid = 16usize;
        let points = grid_points(&params, grid);
        let mut diff_max: f64 = 0.0;
        for p in points {
            let snap = cocycle_product(&params, 0.7, p, m);
            let schmidt = snap.log_schmidt_norm();
            let op = snap.log_scale + operator_norm(&snap.mat).ln();
            diff_max = diff_max.max((schmidt - op).abs() / m as f64);
        }
        assert!(diff_max <= 2f64.sqrt().ln() / m as f64 + 1e-15);
    }

    #[test]
    fn residue_shift_invariance() {
        let params = golden_params(1.2, vec![1.0, -0.5, 0.8]);
        let schedule = doubling_schedule(6, 12);
        let est = lyapunov_estimate_with_grid(&params, 0.3, &schedule, 48);
        let m = est.m;
        let from_zero = lm_phase_average_at_residue(&params, 0.3, m, 48, 0);
        for h in 1..3 {
            let from_h = lm_phase_average_at_residue(&params, 0.3, m, 48, h);
            assert!(
                (from_h - from_zero).abs() <= 2.0 * est.spread.max(1e-6),
                "h={h}: {from_h} vs {from_zero} (spread {})",
                est.spread
            );
        }
    }

    #[test]
    fn energy_grid_endpoints() {
        let g = energy_grid(-2.0, 2.0, 5);
        assert_eq!(g, vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
        assert_eq!(energy_grid(1.0, 3.0, 1), vec![2.0]);
    }
}
