//! Small deterministic numerical kernels shared by every module: 2x2 real
//! matrices with rescaled products, unions of closed intervals, and finite
//! trigonometric polynomials.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Gap below which adjacent intervals are merged, absorbing roundoff at
/// band edges.
pub const MERGE_GAP: f64 = 1e-12;

/// Tolerance on |det - 1| for a matrix to count as unimodular.
pub const UNIMODULAR_TOL: f64 = 1e-9;

/// A real 2x2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        a11: 1.0,
        a12: 0.0,
        a21: 0.0,
        a22: 1.0,
    };

    pub fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Mat2 {
        Mat2 { a11, a12, a21, a22 }
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    pub fn is_finite(&self) -> bool {
        self.a11.is_finite() && self.a12.is_finite() && self.a21.is_finite() && self.a22.is_finite()
    }

    /// Matrix product `self * rhs` without range checking.
    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        Mat2 {
            a11: self.a11 * rhs.a11 + self.a12 * rhs.a21,
            a12: self.a11 * rhs.a12 + self.a12 * rhs.a22,
            a21: self.a21 * rhs.a11 + self.a22 * rhs.a21,
            a22: self.a21 * rhs.a12 + self.a22 * rhs.a22,
        }
    }

    /// Scale every entry.
    pub fn scaled(&self, s: f64) -> Mat2 {
        Mat2 {
            a11: self.a11 * s,
            a12: self.a12 * s,
            a21: self.a21 * s,
            a22: self.a22 * s,
        }
    }

    /// Inverse assuming det = 1 (the adjugate).
    pub fn sl2_inverse(&self) -> Mat2 {
        Mat2 {
            a11: self.a22,
            a12: -self.a12,
            a21: -self.a21,
            a22: self.a11,
        }
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: (f64, f64)) -> (f64, f64) {
        (
            self.a11 * v.0 + self.a12 * v.1,
            self.a21 * v.0 + self.a22 * v.1,
        )
    }

    /// Largest absolute entry difference to `other`.
    pub fn max_entry_diff(&self, other: &Mat2) -> f64 {
        let d1 = (self.a11 - other.a11).abs();
        let d2 = (self.a12 - other.a12).abs();
        let d3 = (self.a21 - other.a21).abs();
        let d4 = (self.a22 - other.a22).abs();
        d1.max(d2).max(d3).max(d4)
    }
}

/// Matrix product with a range check on the result.
pub fn compose(a: &Mat2, b: &Mat2) -> Result<Mat2> {
    let m = a.mul(b);
    if !m.is_finite() {
        return Err(Error::NumericRange {
            op: "numerics::compose",
            detail: format!("product of {a:?} and {b:?} has non-finite entries"),
        });
    }
    Ok(m)
}

/// Schmidt (Frobenius) norm: sqrt of the sum of squared entries.
///
/// For a unimodular matrix this is at least sqrt(2).
pub fn schmidt_norm(m: &Mat2) -> f64 {
    schmidt_norm_sq(m).sqrt()
}

pub fn schmidt_norm_sq(m: &Mat2) -> f64 {
    m.a11 * m.a11 + m.a12 * m.a12 + m.a21 * m.a21 + m.a22 * m.a22
}

/// Operator (spectral) norm, from the singular values of a 2x2 matrix.
pub fn operator_norm(m: &Mat2) -> f64 {
    let f = schmidt_norm_sq(m);
    let d = m.det();
    // sigma_max^2 = (f + sqrt(f^2 - 4 det^2)) / 2
    let disc = (f * f - 4.0 * d * d).max(0.0);
    (0.5 * (f + disc.sqrt())).sqrt()
}

/// A 2x2 matrix constrained to determinant 1 within [`UNIMODULAR_TOL`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnimodularMat2(Mat2);

impl UnimodularMat2 {
    pub const IDENTITY: UnimodularMat2 = UnimodularMat2(Mat2::IDENTITY);

    pub fn new(m: Mat2) -> Result<UnimodularMat2> {
        Self::with_tolerance(m, UNIMODULAR_TOL, "UnimodularMat2::new")
    }

    pub fn with_tolerance(m: Mat2, tol: f64, op: &'static str) -> Result<UnimodularMat2> {
        let det = m.det();
        if !det.is_finite() || (det - 1.0).abs() > tol {
            return Err(Error::NotUnimodular { op, det });
        }
        Ok(UnimodularMat2(m))
    }

    /// Wrap a matrix whose determinant is 1 by construction.
    pub(crate) fn new_unchecked(m: Mat2) -> UnimodularMat2 {
        UnimodularMat2(m)
    }

    pub fn mat(&self) -> &Mat2 {
        &self.0
    }

    pub fn into_mat(self) -> Mat2 {
        self.0
    }

    pub fn inverse(&self) -> UnimodularMat2 {
        UnimodularMat2(self.0.sl2_inverse())
    }
}

impl std::ops::Deref for UnimodularMat2 {
    type Target = Mat2;
    fn deref(&self) -> &Mat2 {
        &self.0
    }
}

/// Rotation matrix [[cos, -sin], [sin, cos]].
pub fn rotation(angle: f64) -> UnimodularMat2 {
    let (s, c) = angle.sin_cos();
    UnimodularMat2(Mat2::new(c, -s, s, c))
}

/// A 2x2 matrix held as `exp(log_scale) * mat`, with `mat` kept at Schmidt
/// norm near sqrt(2) so that arbitrarily long cocycle products stay inside
/// the floating-point range. `log_scale` carries the growth, which is the
/// quantity the Lyapunov estimators consume.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledMat2 {
    pub mat: Mat2,
    pub log_scale: f64,
}

impl ScaledMat2 {
    pub const IDENTITY: ScaledMat2 = ScaledMat2 {
        mat: Mat2::IDENTITY,
        log_scale: 0.0,
    };

    pub fn from_mat(m: Mat2) -> ScaledMat2 {
        let mut s = ScaledMat2 {
            mat: m,
            log_scale: 0.0,
        };
        s.rescale();
        s
    }

    /// Pull the Schmidt norm of `mat` back to sqrt(2), accumulating its log.
    pub fn rescale(&mut self) {
        let norm = schmidt_norm(&self.mat);
        if norm > 0.0 && norm.is_finite() {
            let target = std::f64::consts::SQRT_2;
            let factor = norm / target;
            self.mat = self.mat.scaled(1.0 / factor);
            self.log_scale += factor.ln();
        }
    }

    /// log of the Schmidt norm of the represented matrix.
    pub fn log_schmidt_norm(&self) -> f64 {
        self.log_scale + 0.5 * schmidt_norm_sq(&self.mat).ln()
    }

    /// log|det| of the represented matrix.
    pub fn log_abs_det(&self) -> f64 {
        2.0 * self.log_scale + self.mat.det().abs().ln()
    }

    /// |det - 1| of the represented matrix, evaluated in log space. Only
    /// meaningful while both singular values of the represented matrix are
    /// within floating range; a condition number beyond ~1e300 destroys the
    /// determinant information in any scaled f64 representation.
    pub fn unimodular_drift(&self) -> f64 {
        let sign = self.mat.det().signum();
        (sign * self.log_abs_det().exp() - 1.0).abs()
    }

    /// The represented matrix itself; entries may overflow to infinity when
    /// `log_scale` is large.
    pub fn reassemble(&self) -> Mat2 {
        self.mat.scaled(self.log_scale.exp())
    }

    /// Product of two scaled matrices, `self * rhs`.
    pub fn mul(&self, rhs: &ScaledMat2) -> ScaledMat2 {
        let mut out = ScaledMat2 {
            mat: self.mat.mul(&rhs.mat),
            log_scale: self.log_scale + rhs.log_scale,
        };
        out.rescale();
        out
    }
}

/// A sorted union of pairwise disjoint closed intervals.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalUnion {
    intervals: Vec<(f64, f64)>,
}

impl IntervalUnion {
    pub fn empty() -> IntervalUnion {
        IntervalUnion::default()
    }

    /// Normalize a list of closed intervals: sort, drop invalid pairs, and
    /// merge intervals separated by less than [`MERGE_GAP`].
    pub fn from_intervals(raw: impl IntoIterator<Item = (f64, f64)>) -> IntervalUnion {
        let mut items: Vec<(f64, f64)> = raw
            .into_iter()
            .filter(|(lo, hi)| lo.is_finite() && hi.is_finite() && lo <= hi)
            .collect();
        items.sort_by(|a, b| a.partial_cmp(b).expect("finite endpoints"));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(items.len());
        for (lo, hi) in items {
            match merged.last_mut() {
                Some(last) if lo <= last.1 + MERGE_GAP => last.1 = last.1.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        IntervalUnion { intervals: merged }
    }

    pub fn from_points(points: impl IntoIterator<Item = f64>) -> IntervalUnion {
        IntervalUnion::from_intervals(points.into_iter().map(|x| (x, x)))
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    /// Total Lebesgue measure.
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(lo, hi)| hi - lo).sum()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|&(lo, hi)| lo <= x && x <= hi)
    }

    /// Distance from a point to the union (0 inside).
    pub fn distance_to(&self, x: f64) -> f64 {
        self.intervals
            .iter()
            .map(|&(lo, hi)| {
                if x < lo {
                    lo - x
                } else if x > hi {
                    x - hi
                } else {
                    0.0
                }
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn min(&self) -> Option<f64> {
        self.intervals.first().map(|&(lo, _)| lo)
    }

    pub fn max(&self) -> Option<f64> {
        self.intervals.last().map(|&(_, hi)| hi)
    }

    /// Affine image x -> scale*x + shift (scale may be negative).
    pub fn affine(&self, scale: f64, shift: f64) -> IntervalUnion {
        IntervalUnion::from_intervals(self.intervals.iter().map(|&(lo, hi)| {
            let a = scale * lo + shift;
            let b = scale * hi + shift;
            (a.min(b), a.max(b))
        }))
    }
}

/// Lebesgue measure of an interval union.
pub fn union_measure(u: &IntervalUnion) -> f64 {
    u.measure()
}

/// Symmetric Hausdorff distance between two closed sets given as interval
/// unions. Empty versus nonempty returns infinity; empty versus empty is 0.
pub fn hausdorff_distance(a: &IntervalUnion, b: &IntervalUnion) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return 0.0,
        (true, false) | (false, true) => return f64::INFINITY,
        _ => {}
    }
    one_sided_hausdorff(a, b).max(one_sided_hausdorff(b, a))
}

/// sup over x in `a` of dist(x, b). The supremum is attained either at an
/// endpoint of `a` or at a gap midpoint of `b` lying inside `a`.
fn one_sided_hausdorff(a: &IntervalUnion, b: &IntervalUnion) -> f64 {
    let mut worst: f64 = 0.0;
    for &(lo, hi) in a.intervals() {
        worst = worst.max(b.distance_to(lo)).max(b.distance_to(hi));
    }
    let bs = b.intervals();
    for w in bs.windows(2) {
        let mid = 0.5 * (w[0].1 + w[1].0);
        if a.contains(mid) {
            worst = worst.max(b.distance_to(mid));
        }
    }
    worst
}

/// A finite Fourier series sum_{n=-N..N} c_n e^{i n phi}.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    degree: usize,
    /// Coefficients indexed by n + degree, length 2*degree + 1.
    coeffs: Vec<Complex64>,
}

impl TrigPolynomial {
    pub fn zero() -> TrigPolynomial {
        TrigPolynomial {
            degree: 0,
            coeffs: vec![Complex64::ZERO],
        }
    }

    /// Build from coefficients c_{-N}..c_{N}; the slice length must be odd.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Result<TrigPolynomial> {
        if coeffs.len() % 2 != 1 {
            return Err(Error::InvalidParams {
                op: "TrigPolynomial::from_coeffs",
                detail: format!("coefficient list length {} is not odd", coeffs.len()),
            });
        }
        Ok(TrigPolynomial {
            degree: coeffs.len() / 2,
            coeffs,
        })
    }

    /// a * cos(phi), as the pair of modes (a/2) e^{+-i phi}.
    pub fn cosine(amplitude: f64) -> TrigPolynomial {
        let half = Complex64::new(0.5 * amplitude, 0.0);
        TrigPolynomial {
            degree: 1,
            coeffs: vec![half, Complex64::ZERO, half],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficient of e^{i n phi}, zero outside the stored band.
    pub fn coeff(&self, n: i64) -> Complex64 {
        let idx = n + self.degree as i64;
        if idx < 0 || idx >= self.coeffs.len() as i64 {
            Complex64::ZERO
        } else {
            self.coeffs[idx as usize]
        }
    }

    pub fn mean(&self) -> Complex64 {
        self.coeff(0)
    }

    /// Whether c_{-n} = conj(c_n) for all n, i.e. the series is real-valued.
    pub fn is_real_valued(&self, tol: f64) -> bool {
        (0..=self.degree as i64)
            .all(|n| (self.coeff(-n) - self.coeff(n).conj()).norm() <= tol)
    }

    /// Evaluate by a power recurrence in e^{i phi}.
    pub fn eval(&self, phi: f64) -> Complex64 {
        let base = Complex64::from_polar(1.0, phi);
        let mut acc = self.coeff(0);
        let mut pow = Complex64::new(1.0, 0.0);
        for n in 1..=self.degree as i64 {
            pow *= base;
            acc += self.coeff(n) * pow + self.coeff(-n) * pow.conj();
        }
        acc
    }

    pub fn eval_real(&self, phi: f64) -> f64 {
        self.eval(phi).re
    }
}

/// Deterministic splittable generator for fuzz suites; the same seed always
/// yields the same stream.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn next_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

/// Deterministic pairwise sum; serial and parallel callers that fill the
/// slice in index order obtain bitwise identical results.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn assert_mat_close(a: &Mat2, b: &Mat2, tol: f64) {
        assert!(
            a.max_entry_diff(b) <= tol,
            "matrices differ by {:e}: {a:?} vs {b:?}",
            a.max_entry_diff(b)
        );
    }

    #[test]
    fn compose_identity_is_identity() {
        let m = Mat2::new(0.3, -1.7, 2.2, 0.9);
        let r = compose(&Mat2::IDENTITY, &m).unwrap();
        assert_mat_close(&r, &m, 0.0);
    }

    #[test]
    fn compose_quarter_rotations_gives_minus_identity() {
        let r = rotation(FRAC_PI_2);
        let p = compose(r.mat(), r.mat()).unwrap();
        assert_mat_close(&p, &Mat2::IDENTITY.scaled(-1.0), 1e-15);
    }

    #[test]
    fn compose_overflow_reports_numeric_range() {
        let big = Mat2::new(1e308, 1e308, 1e308, 1e308);
        let err = compose(&big, &big).unwrap_err();
        assert!(matches!(err, Error::NumericRange { .. }));
    }

    #[test]
    fn schmidt_norm_identity_is_sqrt_two() {
        assert!((schmidt_norm(&Mat2::IDENTITY) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rotation_quarter_turn_entries() {
        let r = rotation(FRAC_PI_2);
        assert_mat_close(r.mat(), &Mat2::new(0.0, -1.0, 1.0, 0.0), 1e-15);
    }

    #[test]
    fn rotation_half_turn_is_minus_identity() {
        let r = rotation(PI);
        assert_mat_close(r.mat(), &Mat2::IDENTITY.scaled(-1.0), 1e-15);
    }

    #[test]
    fn rotation_zero_is_identity() {
        assert_mat_close(rotation(0.0).mat(), &Mat2::IDENTITY, 0.0);
    }

    #[test]
    fn operator_norm_bounds_schmidt() {
        let m = Mat2::new(2.0, 0.5, -1.0, 0.25);
        let op = operator_norm(&m);
        let fro = schmidt_norm(&m);
        assert!(op <= fro + 1e-12);
        assert!(fro <= 2f64.sqrt() * op + 1e-12);
    }

    #[test]
    fn union_measure_free_band() {
        let u = IntervalUnion::from_intervals([(-2.0, 2.0)]);
        assert_eq!(union_measure(&u), 4.0);
    }

    #[test]
    fn union_merges_overlaps() {
        let u = IntervalUnion::from_intervals([(0.0, 1.0), (0.5, 2.0)]);
        assert_eq!(u.len(), 1);
        assert!((u.measure() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn hausdorff_of_set_with_itself_is_zero() {
        let u = IntervalUnion::from_intervals([(-1.0, 0.0), (2.0, 3.0)]);
        assert_eq!(hausdorff_distance(&u, &u), 0.0);
    }

    #[test]
    fn hausdorff_empty_vs_nonempty_is_infinite() {
        let u = IntervalUnion::from_intervals([(0.0, 1.0)]);
        assert_eq!(hausdorff_distance(&IntervalUnion::empty(), &u), f64::INFINITY);
        assert_eq!(hausdorff_distance(&IntervalUnion::empty(), &IntervalUnion::empty()), 0.0);
    }

    #[test]
    fn hausdorff_detects_gap_midpoint() {
        // a covers the gap of b, so the witness is the gap midpoint of b.
        let a = IntervalUnion::from_intervals([(0.0, 4.0)]);
        let b = IntervalUnion::from_intervals([(0.0, 1.0), (3.0, 4.0)]);
        assert!((hausdorff_distance(&a, &b) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn scaled_product_tracks_norm_growth() {
        // Product of n copies of diag(3, 1/3): log norm grows like n ln 3.
        // n is kept small enough that the contracting singular value stays
        // representable, which the determinant check needs.
        let d = Mat2::new(3.0, 0.0, 0.0, 1.0 / 3.0);
        let mut acc = ScaledMat2::IDENTITY;
        let n = 120;
        for _ in 0..n {
            acc = ScaledMat2::from_mat(d).mul(&acc);
        }
        let expected = n as f64 * 3f64.ln();
        assert!((acc.log_schmidt_norm() - expected).abs() < 1e-6 * expected);
        assert!(acc.unimodular_drift() < 1e-9);
    }

    #[test]
    fn scaled_product_of_rotations_never_drifts() {
        // Elliptic products keep both singular values at 1; the determinant
        // check stays meaningful for any length.
        let r = rotation(0.7).into_mat();
        let mut acc = ScaledMat2::IDENTITY;
        for _ in 0..50_000 {
            acc = ScaledMat2::from_mat(r).mul(&acc);
        }
        assert!(acc.unimodular_drift() < 1e-9);
        assert!(acc.log_schmidt_norm().abs() < 1e-6 + std::f64::consts::SQRT_2.ln());
    }

    #[test]
    fn trig_polynomial_cosine_eval() {
        let p = TrigPolynomial::cosine(2.5);
        for phi in [0.0, 0.7, 2.0, 5.5] {
            assert!((p.eval_real(phi) - 2.5 * phi.cos()).abs() < 1e-14);
            assert!(p.eval(phi).im.abs() < 1e-14);
        }
        assert!(p.is_real_valued(0.0));
        assert_eq!(p.mean(), Complex64::ZERO);
    }

    #[test]
    fn trig_polynomial_eval_matches_direct_sum() {
        // Recurrence evaluation against literal per-term exponentials.
        let coeffs: Vec<Complex64> = vec![
            Complex64::new(0.2, -0.1),
            Complex64::new(-0.4, 0.3),
            Complex64::new(1.0, 0.0),
            Complex64::new(-0.4, -0.3),
            Complex64::new(0.2, 0.1),
        ];
        let p = TrigPolynomial::from_coeffs(coeffs.clone()).unwrap();
        for phi in [0.1, 1.9, 4.4] {
            let direct: Complex64 = coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c * Complex64::from_polar(1.0, (i as f64 - 2.0) * phi))
                .sum();
            assert!((p.eval(phi) - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn pairwise_sum_matches_naive_on_small_input() {
        let xs = [1.5, -0.25, 3.0, 0.125, -2.0];
        assert_eq!(pairwise_sum(&xs), 2.375);
    }

    #[test]
    fn splitmix_is_reproducible() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    proptest! {
        #[test]
        fn det_is_multiplicative(
            e in proptest::collection::vec(-3.0f64..3.0, 8)
        ) {
            let a = Mat2::new(e[0], e[1], e[2], e[3]);
            let b = Mat2::new(e[4], e[5], e[6], e[7]);
            let p = compose(&a, &b).unwrap();
            prop_assert!((p.det() - a.det() * b.det()).abs() <= 1e-12);
        }

        #[test]
        fn compose_is_associative(
            e in proptest::collection::vec(-1.0f64..1.0, 12)
        ) {
            let a = Mat2::new(e[0], e[1], e[2], e[3]);
            let b = Mat2::new(e[4], e[5], e[6], e[7]);
            let c = Mat2::new(e[8], e[9], e[10], e[11]);
            let left = compose(&compose(&a, &b).unwrap(), &c).unwrap();
            let right = compose(&a, &compose(&b, &c).unwrap()).unwrap();
            prop_assert!(left.max_entry_diff(&right) <= 1e-10);
        }

        #[test]
        fn rotations_add_angles(x in -10.0f64..10.0, y in -10.0f64..10.0) {
            let lhs = compose(rotation(x).mat(), rotation(y).mat()).unwrap();
            let rhs = rotation(x + y);
            prop_assert!(lhs.max_entry_diff(rhs.mat()) <= 1e-12);
        }

        #[test]
        fn interval_normalization_is_idempotent(
            raw in proptest::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 0..12)
        ) {
            let u = IntervalUnion::from_intervals(raw);
            let again = IntervalUnion::from_intervals(u.intervals().to_vec());
            prop_assert_eq!(u.intervals(), again.intervals());
            prop_assert!(u.measure() >= 0.0);
            for w in u.intervals().windows(2) {
                prop_assert!(w[0].1 < w[1].0);
            }
        }

        #[test]
        fn scaled_mat_reassembles_small_products(
            e in proptest::collection::vec(-2.0f64..2.0, 8)
        ) {
            let a = Mat2::new(e[0], e[1], e[2], e[3]);
            let b = Mat2::new(e[4], e[5], e[6], e[7]);
            let direct = a.mul(&b);
            let scaled = ScaledMat2::from_mat(a).mul(&ScaledMat2::from_mat(b));
            let back = scaled.reassemble();
            prop_assert!(direct.max_entry_diff(&back) <= 1e-10 * (1.0 + schmidt_norm(&direct)));
        }
    }
}
