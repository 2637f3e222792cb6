//! The operator family: coupling sequence, skew-product base dynamics on
//! S^1 x Z_k, potential, transfer matrices and their ordered products.
//!
//! The one-step matrix at orbit point (theta, h) is
//! [[E - lambda*T(h)*cos(theta), -1], [1, 0]], and an m-step product applies
//! later steps on the left. Long products are held in rescaled form
//! ([`ScaledMat2`]) so that norms never leave the floating-point range.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::numerics::{Mat2, ScaledMat2, UnimodularMat2};

/// Parameters of the operator family: coupling scalar, periodic coupling
/// sequence and rotation frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    lambda: f64,
    coupling: Vec<f64>,
    omega: f64,
    /// lambda * coupling[h], the factor actually multiplying cos.
    folded: Vec<f64>,
}

impl ModelParams {
    pub fn new(lambda: f64, coupling: Vec<f64>, omega: f64) -> Result<ModelParams> {
        if coupling.is_empty() {
            return Err(Error::InvalidParams {
                op: "ModelParams::new",
                detail: "coupling sequence must have at least one entry".into(),
            });
        }
        if !(omega > 0.0 && omega < TAU) {
            return Err(Error::InvalidParams {
                op: "ModelParams::new",
                detail: format!("omega = {omega} outside (0, 2*pi)"),
            });
        }
        if !lambda.is_finite() || coupling.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidParams {
                op: "ModelParams::new",
                detail: "non-finite coupling".into(),
            });
        }
        let folded = coupling.iter().map(|t| lambda * t).collect();
        Ok(ModelParams {
            lambda,
            coupling,
            omega,
            folded,
        })
    }

    /// Frequency given as alpha = omega / (2*pi) in (0, 1).
    pub fn from_alpha(lambda: f64, coupling: Vec<f64>, alpha: f64) -> Result<ModelParams> {
        ModelParams::new(lambda, coupling, TAU * alpha)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn coupling(&self) -> &[f64] {
        &self.coupling
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn alpha(&self) -> f64 {
        self.omega / TAU
    }

    /// Coupling period k.
    pub fn period(&self) -> usize {
        self.coupling.len()
    }

    pub fn max_abs_coupling(&self) -> f64 {
        self.coupling.iter().fold(0.0, |m, t| m.max(t.abs()))
    }

    /// Operator-norm bound on the spectrum: |E| <= 2 + |lambda| * max|T|.
    pub fn energy_bound(&self) -> f64 {
        2.0 + self.lambda.abs() * self.max_abs_coupling()
    }

    fn folded_coupling(&self, h: usize) -> f64 {
        self.folded[h]
    }
}

/// Shared construction of omega from an exact rational alpha = p/q, so that
/// every module producing "the same rational frequency" lands on the same
/// floating-point value.
pub fn rational_omega(p: i64, q: i64) -> f64 {
    TAU * (p as f64) / (q as f64)
}

/// The golden-mean frequency alpha = (sqrt(5) - 1) / 2.
pub const GOLDEN_ALPHA: f64 = 0.618_033_988_749_894_9;

/// alpha = sqrt(2) - 1, the other canonical bounded-quotient frequency.
pub const SQRT2_ALPHA: f64 = std::f64::consts::SQRT_2 - 1.0;

/// A point of the skew-product base S^1 x {0..k-1}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub theta: f64,
    pub residue: usize,
}

impl PhasePoint {
    pub fn new(theta: f64, residue: usize) -> PhasePoint {
        PhasePoint {
            theta: theta.rem_euclid(TAU),
            residue,
        }
    }
}

/// 2*pi - fl(2*pi): the systematic error a bare `x - TAU` wrap would inject
/// at every wrap event. Since models at different frequencies wrap at
/// different rates, that bias acts as a differential frequency error, so
/// the wrap folds it back in. The leading subtraction is exact by Sterbenz
/// for x in [TAU, 2*TAU).
const TAU_LO: f64 = 2.449_293_598_294_706_4e-16;

#[inline(always)]
fn wrap_tau(x: f64) -> f64 {
    if x >= TAU {
        let y = (x - TAU) - TAU_LO;
        if y < 0.0 {
            0.0
        } else {
            y
        }
    } else {
        x
    }
}

/// Phase recurrence carried in double-double precision: the evaluated
/// phase stays within one ulp of theta_0 + n*omega mod 2*pi for any orbit
/// length. A bare iterated sum drifts linearly (a few 1e-16 per step),
/// which is invisible to exponent estimates but dominates cocycle identity
/// checks; single-compensation summation cannot absorb the sub-ulp wrap
/// tail either.
struct CompensatedPhase {
    hi: f64,
    lo: f64,
}

impl CompensatedPhase {
    #[inline(always)]
    fn new(theta: f64) -> CompensatedPhase {
        CompensatedPhase { hi: theta, lo: 0.0 }
    }

    #[inline(always)]
    fn theta(&self) -> f64 {
        self.hi
    }

    #[inline(always)]
    fn advance(&mut self, omega: f64) {
        // TwoSum(hi, omega), exact residue into lo, then renormalize.
        let s = self.hi + omega;
        let b = s - self.hi;
        let err = (self.hi - (s - b)) + (omega - b);
        let lo = self.lo + err;
        let t = s + lo;
        self.lo = lo - (t - s);
        self.hi = t;
        if self.hi >= TAU {
            // Exact by Sterbenz for hi in [TAU, 2*TAU); the 2*pi tail goes
            // through the low word.
            self.hi -= TAU;
            let lo2 = self.lo - TAU_LO;
            let t2 = self.hi + lo2;
            self.lo = lo2 - (t2 - self.hi);
            self.hi = t2;
        }
    }
}

/// One application of the base map (theta, h) -> (theta + omega, h + 1 mod k).
pub fn skew_step(p: PhasePoint, params: &ModelParams) -> PhasePoint {
    let k = params.period();
    PhasePoint {
        theta: wrap_tau(p.theta + params.omega),
        residue: if p.residue + 1 == k { 0 } else { p.residue + 1 },
    }
}

/// Potential lambda * T(n mod k) * cos(theta + n*omega); n may be negative,
/// the coupling index uses the nonnegative remainder.
pub fn potential(params: &ModelParams, theta: f64, n: i64) -> f64 {
    let k = params.period() as i64;
    let h = n.rem_euclid(k) as usize;
    params.folded_coupling(h) * (theta + n as f64 * params.omega).cos()
}

/// One-step transfer matrix [[E - V(n), -1], [1, 0]]; det is exactly 1.
pub fn transfer_matrix(params: &ModelParams, energy: f64, theta: f64, n: i64) -> UnimodularMat2 {
    let e = energy - potential(params, theta, n);
    UnimodularMat2::new_unchecked(Mat2::new(e, -1.0, 1.0, 0.0))
}

/// Steps between norm rescales: 1000, shortened when the one-step norm bound
/// could overflow the range within that window.
fn rescale_stride(params: &ModelParams, energy: f64) -> u64 {
    let m = params.lambda.abs() * params.max_abs_coupling();
    let one_step = ((energy.abs() + m).powi(2) + 2.0).sqrt().max(2.0);
    let budget = 230.0 / one_step.ln();
    (budget as u64).clamp(1, 1000)
}

struct CocycleAccumulator {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    log_scale: f64,
}

impl CocycleAccumulator {
    fn identity() -> CocycleAccumulator {
        CocycleAccumulator {
            a: 1.0,
            b: 0.0,
            c: 0.0,
            d: 1.0,
            log_scale: 0.0,
        }
    }

    #[inline(always)]
    fn push_left(&mut self, e: f64) {
        // acc <- [[e, -1], [1, 0]] * acc
        let na = e * self.a - self.c;
        let nb = e * self.b - self.d;
        self.c = self.a;
        self.d = self.b;
        self.a = na;
        self.b = nb;
    }

    #[inline(always)]
    fn push_right_inverse(&mut self, e: f64) {
        // acc <- acc * [[0, 1], [-1, e]]
        let na = -self.b;
        let nb = self.a + self.b * e;
        let nc = -self.d;
        let nd = self.c + self.d * e;
        self.a = na;
        self.b = nb;
        self.c = nc;
        self.d = nd;
    }

    fn rescale(&mut self) {
        let norm_sq = self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d;
        let factor = (norm_sq / 2.0).sqrt();
        if factor > 0.0 && factor.is_finite() {
            let inv = 1.0 / factor;
            self.a *= inv;
            self.b *= inv;
            self.c *= inv;
            self.d *= inv;
            self.log_scale += factor.ln();
        }
    }

    fn snapshot(&self) -> ScaledMat2 {
        let mut s = ScaledMat2 {
            mat: Mat2::new(self.a, self.b, self.c, self.d),
            log_scale: self.log_scale,
        };
        s.rescale();
        s
    }
}

/// m-step ordered product A(orbit_{m-1}) ... A(orbit_0) in rescaled form,
/// with snapshots at each requested step count. `steps` must be
/// nondecreasing; a snapshot at 0 is the identity.
pub fn cocycle_checkpoints(
    params: &ModelParams,
    energy: f64,
    start: PhasePoint,
    steps: &[u64],
) -> Vec<ScaledMat2> {
    let mut out = Vec::with_capacity(steps.len());
    let mut next = 0usize;
    while next < steps.len() && steps[next] == 0 {
        out.push(ScaledMat2::IDENTITY);
        next += 1;
    }
    if next == steps.len() {
        return out;
    }
    let m_max = steps[steps.len() - 1];
    let k = params.period();
    let omega = params.omega;
    let stride = rescale_stride(params, energy);
    let mut acc = CocycleAccumulator::identity();
    let mut phase = CompensatedPhase::new(start.theta);
    let mut h = start.residue;
    let mut until_rescale = stride;
    for step in 1..=m_max {
        let e = energy - params.folded[h] * phase.theta().cos();
        acc.push_left(e);
        phase.advance(omega);
        h += 1;
        if h == k {
            h = 0;
        }
        until_rescale -= 1;
        if until_rescale == 0 {
            acc.rescale();
            until_rescale = stride;
        }
        while next < steps.len() && steps[next] == step {
            out.push(acc.snapshot());
            next += 1;
        }
    }
    out
}

/// m-step cocycle product from `start`; m = 0 yields the identity at scale 0.
pub fn cocycle_product(
    params: &ModelParams,
    energy: f64,
    start: PhasePoint,
    m: u64,
) -> ScaledMat2 {
    cocycle_checkpoints(params, energy, start, &[m])
        .pop()
        .expect("one checkpoint requested")
}

/// Inverse of the m-step product from `start`: the ordered product of
/// one-step inverses [[0, 1], [-1, E - V]] along the forward orbit, so that
/// `inverse_cocycle_product * cocycle_product = I`.
pub fn inverse_cocycle_product(
    params: &ModelParams,
    energy: f64,
    start: PhasePoint,
    m: u64,
) -> ScaledMat2 {
    let k = params.period();
    let omega = params.omega;
    let stride = rescale_stride(params, energy);
    let mut acc = CocycleAccumulator::identity();
    let mut phase = CompensatedPhase::new(start.theta);
    let mut h = start.residue;
    let mut until_rescale = stride;
    for _ in 0..m {
        let e = energy - params.folded[h] * phase.theta().cos();
        acc.push_right_inverse(e);
        phase.advance(omega);
        h += 1;
        if h == k {
            h = 0;
        }
        until_rescale -= 1;
        if until_rescale == 0 {
            acc.rescale();
            until_rescale = stride;
        }
    }
    acc.snapshot()
}

/// The point m steps behind `start` on the orbit, so that
/// `cocycle_product(.., back_shifted(start, m), m)` propagates onto `start`.
pub fn back_shifted(params: &ModelParams, start: PhasePoint, m: u64) -> PhasePoint {
    let k = params.period();
    let theta = (start.theta - (m as f64) * params.omega).rem_euclid(TAU);
    let residue = (start.residue + k - (m as usize % k)) % k;
    PhasePoint { theta, residue }
}

/// The k-step block B(theta) = A^k(theta, 0), the cocycle of the reduced
/// dynamics theta -> theta + k*omega.
pub fn reduced_cocycle(params: &ModelParams, energy: f64, theta: f64) -> UnimodularMat2 {
    let k = params.period();
    let mut acc = Mat2::IDENTITY;
    let mut th = theta;
    for h in 0..k {
        let e = energy - params.folded[h] * th.cos();
        acc = Mat2::new(e, -1.0, 1.0, 0.0).mul(&acc);
        th = wrap_tau(th + params.omega);
    }
    UnimodularMat2::new_unchecked(acc)
}

/// Birkhoff average (1/m) * sum f(orbit_j) of an observable on S^1 x Z_k.
pub fn birkhoff_average<F>(params: &ModelParams, f: F, start: PhasePoint, m: u64) -> f64
where
    F: Fn(f64, usize) -> f64,
{
    let mut p = start;
    let mut sum = 0.0;
    for _ in 0..m {
        sum += f(p.theta, p.residue);
        p = skew_step(p, params);
    }
    sum / m as f64
}

/// Residual of the product-to-sum identity
/// cos(x + n w1) + cos(x + n w2) = 2 cos(x + n(w1+w2)/2) cos(n(w1-w2)/2),
/// scaled by lambda. Zero up to roundoff for any inputs.
pub fn two_dim_reduction_check(
    lambda: f64,
    omega1: f64,
    omega2: f64,
    theta: f64,
    n: i64,
) -> f64 {
    let nf = n as f64;
    let sum = lambda * (theta + nf * omega1).cos() + lambda * (theta + nf * omega2).cos();
    let product =
        2.0 * lambda * (theta + nf * 0.5 * (omega1 + omega2)).cos() * (nf * 0.5 * (omega1 - omega2)).cos();
    (sum - product).abs()
}

/// Schmidt-norm bound sqrt((|E| + M)^2 + 2) <= 2(M + 2) on one-step matrices,
/// valid for |E| <= M + 2 with M = |lambda| * max|T|.
pub fn one_step_norm_bound(params: &ModelParams) -> f64 {
    let m = params.lambda.abs() * params.max_abs_coupling();
    2.0 * (m + 2.0)
}
