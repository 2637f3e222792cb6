//! The small-divisor cohomological equation h(phi + step) - h(phi) = f(phi),
//! solved by Fourier mode division, and the triangular conjugation that
//! brings the two-step block with vanishing first coupling to the constant
//! rotation -I at energy zero, with an O(E) residual nearby.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{cocycle_product, reduced_cocycle, ModelParams, PhasePoint};
use crate::numerics::{schmidt_norm, Mat2, TrigPolynomial};

/// Default lower bound on admissible divisors |e^{i n step} - 1|.
pub const DEFAULT_DIVISOR_FLOOR: f64 = 1e-8;

/// Default phase-grid size for residual suprema.
pub const DEFAULT_RESIDUAL_GRID: usize = 4096;

/// Tolerance on the mean of the right-hand side; above it no solution
/// exists.
const MEAN_TOL: f64 = 1e-12;

/// A solution of the cohomological equation with its diagnostics.
#[derive(Debug, Clone)]
pub struct CohomologySolution {
    pub h: TrigPolynomial,
    /// The effective rotation step of the equation.
    pub step: f64,
    /// Min over used modes of |e^{i n step} - 1|.
    pub smallest_divisor: f64,
    /// sup over the check grid of |h(phi+step) - h(phi) - rhs(phi)|.
    pub residual_sup: f64,
}

/// Solve h(phi + step) - h(phi) = rhs(phi) by dividing Fourier modes by
/// e^{i n step} - 1. The right-hand side must have zero mean; any needed
/// divisor below `divisor_floor` fails loudly, naming the offending mode.
pub fn solve_cohomological(
    rhs: &TrigPolynomial,
    step: f64,
    divisor_floor: f64,
) -> Result<CohomologySolution> {
    let mean = rhs.mean();
    if mean.norm() > MEAN_TOL {
        return Err(Error::NonzeroMean { mean: mean.norm() });
    }
    let degree = rhs.degree() as i64;
    let mut coeffs = vec![Complex64::ZERO; (2 * degree + 1) as usize];
    let mut smallest = f64::INFINITY;
    for n in -degree..=degree {
        if n == 0 {
            continue;
        }
        let r = rhs.coeff(n);
        if r == Complex64::ZERO {
            continue;
        }
        let divisor = Complex64::from_polar(1.0, n as f64 * step) - Complex64::new(1.0, 0.0);
        let size = divisor.norm();
        if size < divisor_floor {
            return Err(Error::SmallDivisor {
                mode: n,
                divisor: size,
                floor: divisor_floor,
            });
        }
        smallest = smallest.min(size);
        coeffs[(n + degree) as usize] = r / divisor;
    }
    let h = TrigPolynomial::from_coeffs(coeffs)?;
    let grid = DEFAULT_RESIDUAL_GRID.max(4 * (rhs.degree() + 1));
    let mut residual: f64 = 0.0;
    for i in 0..grid {
        let phi = std::f64::consts::TAU * i as f64 / grid as f64;
        let lhs = h.eval(phi + step) - h.eval(phi);
        residual = residual.max((lhs - rhs.eval(phi)).norm());
    }
    Ok(CohomologySolution {
        h,
        step,
        smallest_divisor: if smallest.is_finite() { smallest } else { 0.0 },
        residual_sup: residual,
    })
}

fn require_conjugable(params: &ModelParams, op: &'static str) -> Result<()> {
    if params.period() != 2 || params.coupling()[0] != 0.0 {
        return Err(Error::InvalidParams {
            op,
            detail: format!(
                "conjugation requires period 2 with T(0) = 0, got k = {}, T(0) = {}",
                params.period(),
                params.coupling().first().copied().unwrap_or(f64::NAN)
            ),
        });
    }
    Ok(())
}

/// Right-hand side whose solution h conjugates the two-step block to -I at
/// E = 0: with the one-step convention [[E - V, -1], [1, 0]] the block at
/// T(0) = 0 is -[[1, -lambda T(1) cos(theta+omega)], [0, 1]], so the
/// equation reads h(theta+3w) - h(theta+w) = -lambda T(1) cos(theta+w).
pub fn conjugation_rhs(params: &ModelParams) -> Result<TrigPolynomial> {
    require_conjugable(params, "cohomology::conjugation_rhs")?;
    Ok(TrigPolynomial::cosine(-params.lambda() * params.coupling()[1]))
}

/// Solve the conjugation equation for this family (step 2*omega).
pub fn solve_conjugation(params: &ModelParams, divisor_floor: f64) -> Result<CohomologySolution> {
    let rhs = conjugation_rhs(params)?;
    solve_cohomological(&rhs, 2.0 * params.omega(), divisor_floor)
}

/// The conjugated block
/// [[1, -h(theta+3w)], [0, 1]] * B(theta) * [[1, h(theta+w)], [0, 1]].
/// Equals -I at E = 0 and -I + O(E) nearby.
pub fn conjugated_cocycle(
    params: &ModelParams,
    energy: f64,
    theta: f64,
    h: &TrigPolynomial,
) -> Result<Mat2> {
    require_conjugable(params, "cohomology::conjugated_cocycle")?;
    let omega = params.omega();
    let b = reduced_cocycle(params, energy, theta).into_mat();
    let left = Mat2::new(1.0, -h.eval_real(theta + 3.0 * omega), 0.0, 1.0);
    let right = Mat2::new(1.0, h.eval_real(theta + omega), 0.0, 1.0);
    Ok(left.mul(&b).mul(&right))
}

/// sup over a phase grid of || conjugated block + I || (Schmidt norm): the
/// distance of the conjugated cocycle from the constant rotation by pi.
pub fn residual_sup(
    params: &ModelParams,
    energy: f64,
    h: &TrigPolynomial,
    grid: usize,
) -> Result<f64> {
    require_conjugable(params, "cohomology::residual_sup")?;
    let mut sup: f64 = 0.0;
    for i in 0..grid.max(1) {
        let theta = std::f64::consts::TAU * i as f64 / grid.max(1) as f64;
        let b = conjugated_cocycle(params, energy, theta, h)?;
        let shifted = Mat2::new(b.a11 + 1.0, b.a12, b.a21, b.a22 + 1.0);
        sup = sup.max(schmidt_norm(&shifted));
    }
    Ok(sup)
}

/// Least-squares slope of ln(residual) against ln(E) over the given
/// energies; the residual vanishes linearly when the slope is >= 1.
pub fn residual_slope(
    params: &ModelParams,
    h: &TrigPolynomial,
    energies: &[f64],
    grid: usize,
) -> Result<(f64, Vec<(f64, f64)>)> {
    let mut points = Vec::with_capacity(energies.len());
    for &e in energies {
        let r = residual_sup(params, e, h, grid)?;
        points.push((e, r));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(e, r)| (e.ln(), r.ln())).collect();
    let n = logs.len() as f64;
    let sx: f64 = logs.iter().map(|p| p.0).sum();
    let sy: f64 = logs.iter().map(|p| p.1).sum();
    let sxx: f64 = logs.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = logs.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    Ok((slope, points))
}

/// omega + pi reduced into (0, 2pi) with a single final rounding. Cocycle
/// products near the spectrum amplify a one-ulp frequency perturbation to
/// ~3e-8 over 1e4 steps, so the naive fl(omega) + fl(pi) shift is too
/// coarse; the two-term pi keeps the error at the last rounding only.
pub fn shift_by_pi(omega: f64) -> f64 {
    const PI_HI: f64 = std::f64::consts::PI;
    const PI_LO: f64 = 1.224_646_799_147_353_2e-16;
    if omega > PI_HI {
        // omega + pi - 2pi = omega - pi; the first subtraction is exact by
        // Sterbenz for omega in (pi, 2pi).
        (omega - PI_HI) - PI_LO
    } else {
        let s = omega + PI_HI;
        let z = s - omega;
        let e = (omega - (s - z)) + (PI_HI - z);
        s + (e + PI_LO)
    }
}

/// Max entrywise difference, at the common rescaled magnitude, between the
/// m-step cocycle of the alternating-coupling model {1, -1} at frequency
/// omega and the m-step constant-coupling cocycle at frequency omega + pi.
/// The potentials agree identically, so the difference is pure roundoff.
pub fn amo_equivalence_check(
    lambda: f64,
    omega: f64,
    energy: f64,
    theta: f64,
    m: u64,
) -> Result<f64> {
    let alternating = ModelParams::new(lambda, vec![1.0, -1.0], omega)?;
    let classic = ModelParams::new(lambda, vec![1.0], shift_by_pi(omega))?;
    let start = PhasePoint::new(theta, 0);
    let pa = cocycle_product(&alternating, energy, start, m);
    let pb = cocycle_product(&classic, energy, start, m);
    let common = pa.log_scale.max(pb.log_scale);
    let da = pa.mat.scaled((pa.log_scale - common).exp());
    let db = pb.mat.scaled((pb.log_scale - common).exp());
    Ok(da.max_entry_diff(&db))
}
