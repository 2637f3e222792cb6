//! Periodic-approximant diagnostics for the non-decay of solutions: the
//! four-norm lower bound for unimodular matrices, the approximant potential
//! error with its Lipschitz bound, and per-scale block comparisons between
//! the true cocycle and its rational-frequency approximant.

use num_traits::ToPrimitive;

use crate::arithmetic::ContinuedFraction;
use crate::error::{Error, Result};
use crate::model::{
    back_shifted, cocycle_product, inverse_cocycle_product, potential, rational_omega,
    ModelParams, PhasePoint,
};
use crate::numerics::{schmidt_norm, Mat2, ScaledMat2, UNIMODULAR_TOL};

/// Hard ceiling on block lengths.
pub const MAX_BLOCK_STEPS: u64 = 10_000_000;

/// Directions sampled when reporting the worst witness vector.
const WORST_DIRECTIONS: usize = 64;

fn vec_norm(v: (f64, f64)) -> f64 {
    v.0.hypot(v.1)
}

/// max(||A v||, ||A^2 v||, ||A^-1 v||, ||A^-2 v||) for a unimodular A and a
/// unit vector v; at least 1/2 for every such pair.
pub fn cfks_max_norm(a: &Mat2, v: (f64, f64)) -> Result<f64> {
    if (vec_norm(v) - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnitVector {
            op: "gordon::cfks_max_norm",
            x: v.0,
            y: v.1,
        });
    }
    let det = a.det();
    if !det.is_finite() || (det - 1.0).abs() > UNIMODULAR_TOL {
        return Err(Error::NotUnimodular {
            op: "gordon::cfks_max_norm",
            det,
        });
    }
    let inv = a.sl2_inverse();
    let v1 = a.apply(v);
    let v2 = a.apply(v1);
    let w1 = inv.apply(v);
    let w2 = inv.apply(w1);
    Ok(vec_norm(v1)
        .max(vec_norm(v2))
        .max(vec_norm(w1))
        .max(vec_norm(w2)))
}

/// Measured approximant potential error and its analytic bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialErrorReport {
    /// sup over the window and a theta grid of |V_k(n) - V(n)|.
    pub measured: f64,
    /// Lipschitz bound 2*pi*C*window*|alpha - p/q| with C = |lambda|*max|T|.
    pub bound: f64,
    /// Whether p/q is an actual convergent of alpha.
    pub is_convergent: bool,
    pub q: i64,
    /// Window half-width in sites, window_multiple * q.
    pub window: u64,
}

/// Compare the potential at the rational frequency p'/q' against the true
/// frequency over |n| <= window_multiple * q', maximized over a theta grid.
pub fn approximant_potential_error(
    params: &ModelParams,
    p_prime: i64,
    q_prime: i64,
    window_multiple: u64,
    theta_grid: usize,
) -> Result<PotentialErrorReport> {
    if q_prime <= 0 || p_prime <= 0 || p_prime >= q_prime {
        return Err(Error::InvalidParams {
            op: "gordon::approximant_potential_error",
            detail: format!("p/q = {p_prime}/{q_prime} must satisfy 0 < p/q < 1"),
        });
    }
    let approx =
        ModelParams::new(params.lambda(), params.coupling().to_vec(), rational_omega(p_prime, q_prime))?;
    let window = window_multiple * q_prime as u64;
    let mut measured: f64 = 0.0;
    let grid = theta_grid.max(1);
    for j in 0..grid {
        let theta = std::f64::consts::TAU * j as f64 / grid as f64;
        for n in -(window as i64)..=(window as i64) {
            let diff = (potential(&approx, theta, n) - potential(params, theta, n)).abs();
            measured = measured.max(diff);
        }
    }
    let c = params.lambda().abs() * params.max_abs_coupling();
    let alpha_err = (params.alpha() - p_prime as f64 / q_prime as f64).abs();
    let bound = std::f64::consts::TAU * c * window as f64 * alpha_err;
    let is_convergent = crate::arithmetic::continued_fraction_expand(
        params.alpha(),
        64,
        crate::arithmetic::DEFAULT_MIN_REMAINDER,
    )
    .map(|cf| {
        (0..cf.len()).any(|n| match cf.convergent_f64(n) {
            Some((p, q)) => p == p_prime as f64 && q == q_prime as f64,
            None => false,
        })
    })
    .unwrap_or(false);
    Ok(PotentialErrorReport {
        measured,
        bound,
        is_convergent,
        q: q_prime,
        window,
    })
}

/// Per-scale diagnostic report.
#[derive(Debug, Clone, PartialEq)]
pub struct GordonReport {
    /// Convergent index used.
    pub level: usize,
    pub p: i64,
    pub q: i64,
    /// Block period T_k = 2q in sites.
    pub t_k: u64,
    /// sup over |n| <= 2*T_k of the potential error at the diagnostic phase.
    pub sup_potential_error: f64,
    /// Lipschitz bound on the potential error.
    pub potential_error_bound: f64,
    /// D_k = max over a in {+-1, +-2} of ||B^{a T_k} - B_k^{a T_k}||.
    pub matrix_discrepancy: f64,
    /// Telescoping bound 2 T_k * Mbar^(2 T_k - 1) * sup_error; infinity when
    /// it leaves the floating range.
    pub discrepancy_bound: f64,
    /// G_k = max over a of ||B_k^{a T_k} v|| from exact powers of the
    /// period block.
    pub four_norm: f64,
    /// G_k - 1/2.
    pub margin: f64,
    /// max over a of ||B^{a T_k} v|| for the true cocycle.
    pub witness: f64,
    /// 1/2 - D_k, the guaranteed floor on the witness.
    pub witness_floor: f64,
    /// Min over sampled unit directions of the approximant four-norm.
    pub worst_direction_four_norm: f64,
    /// Whether the product of the two folded couplings exceeds 4 in
    /// absolute value.
    pub hypothesis_met: bool,
}

fn scaled_apply_norm(block: &ScaledMat2, v: (f64, f64)) -> f64 {
    let w = block.mat.apply(v);
    (block.log_scale + vec_norm(w).ln()).exp()
}

fn scaled_inverse(block: &ScaledMat2) -> ScaledMat2 {
    // For a represented matrix of determinant 1, the inverse is the
    // adjugate: adj(e^s m) = e^s adj(m).
    ScaledMat2 {
        mat: block.mat.sl2_inverse(),
        log_scale: block.log_scale,
    }
}

fn block_difference(a: &ScaledMat2, b: &ScaledMat2) -> f64 {
    let a_raw = a.reassemble();
    let b_raw = b.reassemble();
    if !a_raw.is_finite() || !b_raw.is_finite() {
        return f64::INFINITY;
    }
    let d = Mat2::new(
        a_raw.a11 - b_raw.a11,
        a_raw.a12 - b_raw.a12,
        a_raw.a21 - b_raw.a21,
        a_raw.a22 - b_raw.a22,
    );
    schmidt_norm(&d)
}

/// Forward and backward blocks of the given site lengths starting at
/// (theta, 0); negative lengths propagate onto the start from behind.
fn four_blocks(params: &ModelParams, energy: f64, theta: f64, t_k: u64) -> [ScaledMat2; 4] {
    let start = PhasePoint::new(theta, 0);
    let f1 = cocycle_product(params, energy, start, t_k);
    let f2 = cocycle_product(params, energy, start, 2 * t_k);
    let b1 = inverse_cocycle_product(params, energy, back_shifted(params, start, t_k), t_k);
    let b2 = inverse_cocycle_product(params, energy, back_shifted(params, start, 2 * t_k), 2 * t_k);
    [f1, f2, b1, b2]
}

/// Run the per-scale diagnostic at one convergent of the frequency.
///
/// The approximant blocks used for the four-norm are exact powers of the
/// single period block, so the four-norm inequality applies to them with no
/// periodization error; the discrepancy D_k compares orbit products of both
/// cocycles through the same code path.
pub fn gordon_diagnostics(
    params: &ModelParams,
    energy: f64,
    theta: f64,
    cf: &ContinuedFraction,
    convergent_index: usize,
    v: (f64, f64),
) -> Result<GordonReport> {
    if params.period() > 2 {
        return Err(Error::InvalidParams {
            op: "gordon::gordon_diagnostics",
            detail: format!(
                "diagnostics cover the two-coupling setting; period {} given",
                params.period()
            ),
        });
    }
    if (vec_norm(v) - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnitVector {
            op: "gordon::gordon_diagnostics",
            x: v.0,
            y: v.1,
        });
    }
    if convergent_index >= cf.len() {
        return Err(Error::InvalidParams {
            op: "gordon::gordon_diagnostics",
            detail: format!(
                "convergent index {convergent_index} out of range (have {})",
                cf.len()
            ),
        });
    }
    let (p_big, q_big) = cf.convergent(convergent_index);
    let (p, q) = match (p_big.to_i64(), q_big.to_i64()) {
        (Some(p), Some(q)) if q > 0 && 2 * (q as u64) * 2 <= MAX_BLOCK_STEPS => (p, q),
        _ => {
            return Err(Error::BlockTooLong {
                op: "gordon::gordon_diagnostics",
                steps: q_big.to_u128().map(|q| 4 * q).unwrap_or(u128::MAX),
                limit: MAX_BLOCK_STEPS,
            })
        }
    };
    let t_k = 2 * q as u64;
    let approx = ModelParams::new(
        params.lambda(),
        params.coupling().to_vec(),
        rational_omega(p, q),
    )?;

    // Potential error at this phase over the window the blocks traverse.
    let window = 2 * t_k as i64;
    let mut sup_err: f64 = 0.0;
    for n in -window..=window {
        sup_err = sup_err.max((potential(&approx, theta, n) - potential(params, theta, n)).abs());
    }
    let c = params.lambda().abs() * params.max_abs_coupling();
    let alpha_err = (params.alpha() - p as f64 / q as f64).abs();
    let potential_error_bound = std::f64::consts::TAU * c * window as f64 * alpha_err;

    let true_blocks = four_blocks(params, energy, theta, t_k);
    let approx_blocks = four_blocks(&approx, energy, theta, t_k);
    let matrix_discrepancy = true_blocks
        .iter()
        .zip(approx_blocks.iter())
        .map(|(a, b)| block_difference(a, b))
        .fold(0.0f64, f64::max);

    // Telescoping bound in log space.
    let m = params.lambda().abs() * params.max_abs_coupling();
    let m_bar = (2.0 * (m + 2.0)).max(m);
    let discrepancy_bound = if sup_err == 0.0 {
        0.0
    } else {
        let log_bound =
            (2.0 * t_k as f64).ln() + (2.0 * t_k as f64 - 1.0) * m_bar.ln() + sup_err.ln();
        log_bound.exp()
    };

    // Four-norm from exact powers of the period block.
    let period_block = cocycle_product(&approx, energy, PhasePoint::new(theta, 0), t_k);
    let powers = [
        period_block,
        period_block.mul(&period_block),
        scaled_inverse(&period_block),
        scaled_inverse(&period_block).mul(&scaled_inverse(&period_block)),
    ];
    let four_norm_of = |w: (f64, f64)| -> f64 {
        powers
            .iter()
            .map(|b| scaled_apply_norm(b, w))
            .fold(0.0f64, f64::max)
    };
    let four_norm = four_norm_of(v);
    let worst_direction_four_norm = (0..WORST_DIRECTIONS)
        .map(|j| {
            let psi = std::f64::consts::PI * j as f64 / WORST_DIRECTIONS as f64;
            four_norm_of((psi.cos(), psi.sin()))
        })
        .fold(f64::INFINITY, f64::min);

    let witness = true_blocks
        .iter()
        .map(|b| scaled_apply_norm(b, v))
        .fold(0.0f64, f64::max);

    let folded: Vec<f64> = params.coupling().iter().map(|t| params.lambda() * t).collect();
    let product = if folded.len() == 2 {
        folded[0] * folded[1]
    } else {
        folded[0] * folded[0]
    };

    Ok(GordonReport {
        level: convergent_index,
        p,
        q,
        t_k,
        sup_potential_error: sup_err,
        potential_error_bound,
        matrix_discrepancy,
        discrepancy_bound,
        four_norm,
        margin: four_norm - 0.5,
        witness,
        witness_floor: 0.5 - matrix_discrepancy,
        worst_direction_four_norm,
        hypothesis_met: product.abs() > 4.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::liouville_construct;
    use crate::model::GOLDEN_ALPHA;
    use crate::numerics::SplitMix64;
    use num_bigint::BigInt;

    fn random_sl2(rng: &mut SplitMix64) -> Mat2 {
        let phi1 = rng.next_range(0.0, std::f64::consts::TAU);
        let phi2 = rng.next_range(0.0, std::f64::consts::TAU);
        let t = rng.next_range(-3.0, 3.0);
        let r1 = Mat2::new(phi1.cos(), -phi1.sin(), phi1.sin(), phi1.cos());
        let r2 = Mat2::new(phi2.cos(), -phi2.sin(), phi2.sin(), phi2.cos());
        let d = Mat2::new(t.exp(), 0.0, 0.0, (-t).exp());
        r1.mul(&d).mul(&r2)
    }

    fn random_unit(rng: &mut SplitMix64) -> (f64, f64) {
        let psi = rng.next_range(0.0, std::f64::consts::TAU);
        (psi.cos(), psi.sin())
    }

    #[test]
    fn identity_four_norm_is_one() {
        let n = cfks_max_norm(&Mat2::IDENTITY, (1.0, 0.0)).unwrap();
        assert_eq!(n, 1.0);
    }

    #[test]
    fn diagonal_four_norm_direct_value() {
        let a = Mat2::new(2.0, 0.0, 0.0, 0.5);
        let n = cfks_max_norm(&a, (0.0, 1.0)).unwrap();
        assert!((n - 4.0).abs() < 1e-14);
    }

    #[test]
    fn four_norm_never_falls_below_half() {
        let mut rng = SplitMix64::new(0x5eed);
        let mut min_seen = f64::INFINITY;
        for _ in 0..20_000 {
            let a = random_sl2(&mut rng);
            let v = random_unit(&mut rng);
            let n = cfks_max_norm(&a, v).unwrap();
            min_seen = min_seen.min(n);
        }
        assert!(min_seen >= 0.5 - 1e-12, "min {min_seen}");
    }

    #[test]
    fn non_unit_vector_is_rejected() {
        assert!(matches!(
            cfks_max_norm(&Mat2::IDENTITY, (1.0, 1.0)),
            Err(Error::NonUnitVector { .. })
        ));
    }

    #[test]
    fn potential_error_vanishes_at_exactly_rational_frequency() {
        let params = ModelParams::new(1.0, vec![2.5, 2.0], rational_omega(2, 5)).unwrap();
        let report = approximant_potential_error(&params, 2, 5, 4, 16).unwrap();
        assert_eq!(report.measured, 0.0);
        assert_eq!(report.bound, 0.0);
    }

    #[test]
    fn golden_convergent_potential_error_is_within_bound() {
        let params = ModelParams::from_alpha(1.0, vec![1.0], GOLDEN_ALPHA).unwrap();
        for (p, q) in [(8i64, 13i64), (21, 34), (55, 89)] {
            let report = approximant_potential_error(&params, p, q, 4, 32).unwrap();
            assert!(
                report.measured <= report.bound,
                "q={q}: measured {:e} > bound {:e}",
                report.measured,
                report.bound
            );
            assert!(report.is_convergent, "q={q}");
        }
    }

    #[test]
    fn non_convergent_is_flagged_but_computed() {
        let params = ModelParams::from_alpha(1.0, vec![1.0], GOLDEN_ALPHA).unwrap();
        let report = approximant_potential_error(&params, 1, 3, 4, 16).unwrap();
        assert!(!report.is_convergent);
        assert!(report.measured <= report.bound);
    }

    #[test]
    fn exactly_rational_frequency_gives_zero_discrepancy() {
        let params = ModelParams::new(1.0, vec![2.5, 2.0], rational_omega(2, 5)).unwrap();
        let cf = ContinuedFraction::from_quotients(vec![
            BigInt::from(0),
            BigInt::from(2),
            BigInt::from(2),
        ])
        .unwrap();
        // Convergents of [0; 2, 2]: 0/1, 1/2, 2/5.
        let report = gordon_diagnostics(&params, 0.4, 0.3, &cf, 2, (1.0, 0.0)).unwrap();
        assert_eq!(report.q, 5);
        assert_eq!(report.t_k, 10);
        assert_eq!(report.sup_potential_error, 0.0);
        assert_eq!(report.matrix_discrepancy, 0.0);
        assert!(report.four_norm >= 0.5 - 1e-9);
        assert!(report.witness >= 0.5 - 1e-9);
        assert!(report.hypothesis_met);
    }

    #[test]
    fn liouville_levels_meet_bounds_and_witness() {
        let built = liouville_construct(3).unwrap();
        let params =
            ModelParams::from_alpha(1.0, vec![2.5, 2.0], built.alpha).unwrap();
        for level in 1..=3usize {
            let report =
                gordon_diagnostics(&params, 0.3, 0.2, &built.cf, level, (1.0, 0.0)).unwrap();
            assert!(
                report.sup_potential_error <= report.potential_error_bound + 1e-15,
                "level {level}"
            );
            if report.discrepancy_bound.is_finite() {
                assert!(
                    report.matrix_discrepancy <= report.discrepancy_bound,
                    "level {level}: D {:e} > bound {:e}",
                    report.matrix_discrepancy,
                    report.discrepancy_bound
                );
            }
            assert!(report.four_norm >= 0.5 - 1e-9, "level {level}");
            assert!(
                report.witness >= 0.25,
                "level {level}: witness {}",
                report.witness
            );
        }
    }

    #[test]
    fn period_three_is_rejected() {
        let params = ModelParams::from_alpha(1.0, vec![1.0, 2.0, 3.0], GOLDEN_ALPHA).unwrap();
        let cf = ContinuedFraction::from_quotients(vec![BigInt::from(0), BigInt::from(2)]).unwrap();
        assert!(gordon_diagnostics(&params, 0.0, 0.0, &cf, 1, (1.0, 0.0)).is_err());
    }

    #[test]
    fn oversized_blocks_are_rejected() {
        let params = ModelParams::from_alpha(1.0, vec![1.0], GOLDEN_ALPHA).unwrap();
        let cf = ContinuedFraction::from_quotients(vec![
            BigInt::from(0),
            BigInt::from(9_000_000u64),
        ])
        .unwrap();
        let err = gordon_diagnostics(&params, 0.0, 0.0, &cf, 1, (1.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::BlockTooLong { .. }));
    }
}
