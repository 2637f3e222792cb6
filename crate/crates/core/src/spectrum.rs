//! Spectrum approximation through rational-frequency periodic approximants:
//! discriminant band sets, their Lebesgue measure, and an independent
//! truncated-matrix eigenvalue oracle.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{potential, rational_omega, ModelParams};
use crate::numerics::IntervalUnion;

/// Bisection iterations used to refine each band edge.
const EDGE_BISECTIONS: usize = 60;

/// The operator family at an exactly rational frequency alpha = p/q.
#[derive(Debug, Clone)]
pub struct RationalModel {
    params: ModelParams,
    p: i64,
    q: i64,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        let t = b;
        b = a.rem_euclid(b);
        a = t;
    }
    a.abs()
}

impl RationalModel {
    pub fn new(lambda: f64, coupling: Vec<f64>, p: i64, q: i64) -> Result<RationalModel> {
        if q <= 0 || p <= 0 || p >= q {
            return Err(Error::InvalidParams {
                op: "RationalModel::new",
                detail: format!("alpha = {p}/{q} must satisfy 0 < p/q < 1"),
            });
        }
        let g = gcd(p, q);
        let (p, q) = (p / g, q / g);
        let params = ModelParams::new(lambda, coupling, rational_omega(p, q))?;
        Ok(RationalModel { params, p, q })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// Full period of the potential: lcm(q, k).
    pub fn total_period(&self) -> u64 {
        let k = self.params.period() as i64;
        (self.q / gcd(self.q, k) * k) as u64
    }
}

/// Per-site potential values over one full period at a fixed phase; the
/// discriminant is then a polynomial product over these alone.
fn period_sites(model: &RationalModel, theta: f64) -> Vec<f64> {
    let period = model.total_period() as i64;
    (0..period)
        .map(|n| potential(model.params(), theta, n))
        .collect()
}

/// Trace of the product of [[E - v_n, -1], [1, 0]] over the site values,
/// rescaled on the fly; overflow surfaces as an infinite trace.
fn trace_of_product(sites: &[f64], energy: f64) -> f64 {
    let (mut a, mut b, mut c, mut d) = (1.0f64, 0.0f64, 0.0f64, 1.0f64);
    let mut log_scale = 0.0f64;
    for &v in sites {
        let e = energy - v;
        let na = e * a - c;
        let nb = e * b - d;
        c = a;
        d = b;
        a = na;
        b = nb;
        let norm_sq = a * a + b * b + c * c + d * d;
        if norm_sq > 1e250 {
            let f = (norm_sq / 2.0).sqrt();
            a /= f;
            b /= f;
            c /= f;
            d /= f;
            log_scale += f.ln();
        }
    }
    (a + d) * log_scale.exp()
}

/// Trace of the transfer product over one full period at phase theta; a
/// monic degree-P polynomial in E.
pub fn discriminant(model: &RationalModel, energy: f64, theta: f64) -> f64 {
    trace_of_product(&period_sites(model, theta), energy)
}

/// The discriminant is invariant under theta -> theta + 2*pi*k*p/q (a
/// k-site translation conjugates the period product), so as a function of
/// theta it is a trigonometric polynomial in c = q_tilde * theta with at
/// most `k` harmonics, q_tilde = q / gcd(q, k). At strong coupling the
/// oscillation amplitude grows like (|lambda| max|T| / 2)^P, which no theta
/// grid can resolve; the exact harmonics can.
struct ThetaHarmonics {
    /// Complex amplitudes t_0..t_k of e^{i m c}; t_{-m} = conj(t_m).
    modes: Vec<(f64, f64)>,
    finite: bool,
}

impl ThetaHarmonics {
    fn extract(model: &RationalModel, energy: f64) -> ThetaHarmonics {
        let k = model.params().period() as i64;
        let q_tilde = (model.q / gcd(model.q, k)) as f64;
        let n = (2 * k + 1) as usize;
        let mut samples = Vec::with_capacity(n);
        let mut finite = true;
        for i in 0..n {
            let c = std::f64::consts::TAU * i as f64 / n as f64;
            let d = discriminant(model, energy, c / q_tilde);
            finite &= d.is_finite();
            samples.push(d);
        }
        let mut modes = Vec::with_capacity(k as usize + 1);
        for m in 0..=k as usize {
            let (mut re, mut im) = (0.0f64, 0.0f64);
            for (i, &d) in samples.iter().enumerate() {
                let phase = -std::f64::consts::TAU * (m * i) as f64 / n as f64;
                re += d * phase.cos();
                im += d * phase.sin();
            }
            modes.push((re / n as f64, im / n as f64));
        }
        ThetaHarmonics { modes, finite }
    }

    /// Value of the trace at harmonic phase c.
    fn eval(&self, c: f64) -> f64 {
        let mut acc = self.modes[0].0;
        for (m, &(re, im)) in self.modes.iter().enumerate().skip(1) {
            let phase = m as f64 * c;
            acc += 2.0 * (re * phase.cos() - im * phase.sin());
        }
        acc
    }

    /// Extremum near a bracketed sample by ternary search.
    fn refine(&self, center: f64, half_width: f64, maximize: bool) -> f64 {
        let sign = if maximize { -1.0 } else { 1.0 };
        let (mut a, mut b) = (center - half_width, center + half_width);
        for _ in 0..60 {
            let m1 = a + (b - a) / 3.0;
            let m2 = b - (b - a) / 3.0;
            if sign * self.eval(m1) < sign * self.eval(m2) {
                b = m2;
            } else {
                a = m1;
            }
        }
        self.eval(0.5 * (a + b))
    }

    /// (min, max) of the trace over the full circle.
    fn range(&self) -> (f64, f64) {
        if !self.finite {
            return (f64::NEG_INFINITY, f64::INFINITY);
        }
        let harmonics = self.modes.len() - 1;
        let samples = (32 * harmonics.max(1)).max(64);
        let step = std::f64::consts::TAU / samples as f64;
        let (mut min_at, mut min_val) = (0.0f64, f64::INFINITY);
        let (mut max_at, mut max_val) = (0.0f64, f64::NEG_INFINITY);
        for i in 0..samples {
            let c = i as f64 * step;
            let v = self.eval(c);
            if v < min_val {
                min_val = v;
                min_at = c;
            }
            if v > max_val {
                max_val = v;
                max_at = c;
            }
        }
        (
            self.refine(min_at, step, false).min(min_val),
            self.refine(max_at, step, true).max(max_val),
        )
    }
}

/// min over all theta of |discriminant(theta, E)|, from the exact harmonic
/// structure.
pub fn theta_min_abs_discriminant(model: &RationalModel, energy: f64) -> f64 {
    let (lo, hi) = ThetaHarmonics::extract(model, energy).range();
    if lo > 0.0 {
        lo
    } else if hi < 0.0 {
        -hi
    } else {
        0.0
    }
}

/// Membership in the family band set: some phase brings the trace into
/// the strip [-2, 2].
fn inside_band_union(model: &RationalModel, energy: f64) -> bool {
    let (lo, hi) = ThetaHarmonics::extract(model, energy).range();
    lo <= 2.0 && hi >= -2.0
}

/// A band set: the approximate spectrum of the rational-frequency family.
#[derive(Debug, Clone)]
pub struct BandSet {
    pub bands: IntervalUnion,
    pub p: i64,
    pub q: i64,
    /// Total period lcm(q, k) of the approximant.
    pub period: u64,
    pub theta_samples: usize,
}

impl BandSet {
    pub fn measure(&self) -> f64 {
        self.bands.measure()
    }
}

/// Lebesgue measure of a band set.
pub fn spectrum_measure(bands: &BandSet) -> f64 {
    bands.measure()
}

/// Zeros of one phase section's discriminant on the scan grid. Each band of
/// a periodic operator contains exactly one zero of its discriminant, where
/// it crosses from one side of the strip [-2, 2] to the other, so sign
/// changes locate every band of the section, including bands far thinner
/// than the scan step.
fn section_zeros(sites: &[f64], grid: &[f64]) -> Vec<f64> {
    let disc = |e: f64| trace_of_product(sites, e);
    let values: Vec<f64> = grid.iter().map(|&e| disc(e)).collect();
    let mut zeros = Vec::new();
    for i in 0..grid.len() - 1 {
        let crossing = values[i] == 0.0 || (values[i] > 0.0) != (values[i + 1] > 0.0);
        if !crossing {
            continue;
        }
        let (mut a, mut b) = (grid[i], grid[i + 1]);
        let mut fa = values[i];
        for _ in 0..EDGE_BISECTIONS {
            let mid = 0.5 * (a + b);
            let fm = disc(mid);
            if (fm > 0.0) == (fa > 0.0) {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
        }
        zeros.push(0.5 * (a + b));
    }
    zeros
}

/// Band set {E : min over theta of |discriminant| <= 2}. Band membership
/// uses the exact theta minimum through the harmonic structure of the
/// trace; the theta grid seeds band locations through per-section
/// discriminant zeros, so bands thinner than the energy scan step are
/// still found. Each seed is expanded to the enclosing band by bisection
/// on the membership indicator.
pub fn rational_bands(
    model: &RationalModel,
    theta_grid: usize,
    e_resolution: f64,
) -> Result<BandSet> {
    if theta_grid < 1 || !e_resolution.is_finite() || e_resolution <= 0.0 {
        return Err(Error::InvalidParams {
            op: "rational_bands",
            detail: format!("theta_grid = {theta_grid}, e_resolution = {e_resolution}"),
        });
    }
    let bound = model.params().energy_bound() + 0.25;
    let period = model.total_period();
    // Zeros of a section discriminant cluster quadratically at the spectral
    // hull, with spacing of order range/P^2; the scan must resolve that
    // pitch or adjacent sign changes cancel and whole bands vanish.
    let pitch = 2.0 * bound / (3.0 * (period * period) as f64);
    let step = e_resolution.min(pitch);
    let steps = (2.0 * bound / step).ceil() as usize + 1;
    let grid: Vec<f64> = (0..=steps)
        .map(|i| -bound + 2.0 * bound * i as f64 / steps as f64)
        .collect();

    // Seeds inside bands: per-section discriminant zeros plus indicator
    // transitions on the scan grid.
    let mut seeds: Vec<f64> = (0..theta_grid)
        .into_par_iter()
        .flat_map_iter(|j| {
            let theta = std::f64::consts::TAU * j as f64 / theta_grid as f64;
            section_zeros(&period_sites(model, theta), &grid).into_iter()
        })
        .collect();
    let inside: Vec<bool> = grid
        .par_iter()
        .map(|&e| inside_band_union(model, e))
        .collect();
    for i in 0..grid.len() {
        if inside[i] && (i == 0 || !inside[i - 1]) {
            seeds.push(grid[i]);
        }
    }
    seeds.sort_by(|a, b| a.partial_cmp(b).expect("finite seeds"));
    seeds.dedup();

    let edge = |mut outside: f64, mut inside_pt: f64| -> f64 {
        for _ in 0..EDGE_BISECTIONS {
            let mid = 0.5 * (outside + inside_pt);
            if inside_band_union(model, mid) {
                inside_pt = mid;
            } else {
                outside = mid;
            }
        }
        0.5 * (outside + inside_pt)
    };

    let mut intervals: Vec<(f64, f64)> = Vec::new();
    for &seed in &seeds {
        if let Some(&(_, hi)) = intervals.last() {
            if seed <= hi {
                continue;
            }
        }
        if !inside_band_union(model, seed) {
            continue;
        }
        let cell = ((seed + bound) / (2.0 * bound) * steps as f64) as usize;
        let cell = cell.min(grid.len() - 1);
        let mut jl = cell;
        while inside[jl] || grid[jl] > seed {
            if jl == 0 {
                break;
            }
            jl -= 1;
        }
        let mut jr = cell;
        while inside[jr] || grid[jr] < seed {
            if jr == grid.len() - 1 {
                break;
            }
            jr += 1;
        }
        let lo = edge(grid[jl], seed);
        let hi = edge(grid[jr], seed);
        intervals.push((lo.min(hi), lo.max(hi)));
    }

    let bands = IntervalUnion::from_intervals(intervals);
    if bands.is_empty() {
        return Err(Error::EmptyBands {
            lambda: model.params().lambda(),
            q: model.q,
        });
    }
    Ok(BandSet {
        bands,
        p: model.p,
        q: model.q,
        period,
        theta_samples: theta_grid,
    })
}

/// Eigenvalues of the N x N Dirichlet truncation: symmetric tridiagonal
/// with the potential on the diagonal and unit hopping, solved by Sturm
/// bisection to 1e-10 and returned in ascending order.
pub fn truncated_spectrum_oracle(params: &ModelParams, theta: f64, n: usize) -> Vec<f64> {
    let diag: Vec<f64> = (0..n).map(|i| potential(params, theta, i as i64)).collect();
    sturm_eigenvalues(&diag, 1.0)
}

/// Number of eigenvalues of tridiag(diag, off) strictly below x, by the
/// signs of the LDL^T pivots.
fn sturm_count(diag: &[f64], off: f64, x: f64) -> usize {
    let guard = 1e-300;
    let mut count = 0usize;
    let mut d = diag[0] - x;
    if d < 0.0 {
        count += 1;
    }
    let off_sq = off * off;
    for &t in &diag[1..] {
        let safe = if d.abs() < guard {
            if d >= 0.0 {
                guard
            } else {
                -guard
            }
        } else {
            d
        };
        d = (t - x) - off_sq / safe;
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// All eigenvalues of the symmetric tridiagonal matrix with constant
/// off-diagonal, each refined independently to absolute width 1e-10.
fn sturm_eigenvalues(diag: &[f64], off: f64) -> Vec<f64> {
    let n = diag.len();
    if n == 0 {
        return Vec::new();
    }
    // Gershgorin bounds.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (i, &d) in diag.iter().enumerate() {
        let r = off.abs() * if i == 0 || i == n - 1 { 1.0 } else { 2.0 };
        lo = lo.min(d - r);
        hi = hi.max(d + r);
    }
    lo -= 1.0;
    hi += 1.0;
    (0..n)
        .into_par_iter()
        .map(|k| {
            let (mut a, mut b) = (lo, hi);
            while b - a > 1e-10 {
                let mid = 0.5 * (a + b);
                if sturm_count(diag, off, mid) <= k {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}
