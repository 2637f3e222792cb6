//! Continued-fraction machinery: expansions, convergents in exact integer
//! arithmetic, the beta exponent measuring Liouville behaviour, and a
//! constructive Liouville-frequency generator.
//!
//! Convergents are kept as exact big integers; the input frequency is the
//! only floating quantity. The defining inequalities here are exponentially
//! sharp and do not survive double precision.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Digit budget for exact convergent denominators.
const INTEGER_DIGIT_BUDGET: f64 = 1e6;

/// How the floating expansion stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Halt {
    /// The remainder reached exactly zero: the input is a dyadic rational
    /// whose expansion is complete.
    ExactZero,
    /// The remainder fell below the precision floor.
    RemainderFloor,
    /// The requested number of terms was reached.
    MaxTerms,
}

/// Partial quotients a_0, a_1, ... with the exact convergents p_i/q_i.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuedFraction {
    quotients: Vec<BigInt>,
    /// (p_i, q_i) for i = 0..; index matches `quotients`.
    convergents: Vec<(BigInt, BigInt)>,
    halt: Halt,
    /// The floating value the expansion refers to (the input for an
    /// expansion, the final convergent for a construction).
    alpha: f64,
}

fn big_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

fn ln_big(x: &BigInt) -> f64 {
    if let Some(v) = x.to_f64() {
        if v.is_finite() && v > 0.0 {
            return v.ln();
        }
    }
    // Beyond f64 range: ln(x) = bits * ln 2 up to the mantissa correction,
    // which is below the resolution any caller needs at this magnitude.
    x.bits() as f64 * std::f64::consts::LN_2
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    (a + b - BigInt::from(1)) / b
}

impl ContinuedFraction {
    fn from_parts(quotients: Vec<BigInt>, halt: Halt, alpha: f64) -> ContinuedFraction {
        let mut convergents = Vec::with_capacity(quotients.len());
        let (mut p_prev, mut q_prev) = (BigInt::from(1), BigInt::from(0));
        let (mut p, mut q) = (quotients[0].clone(), BigInt::from(1));
        convergents.push((p.clone(), q.clone()));
        for a in &quotients[1..] {
            let p_next = a * &p + &p_prev;
            let q_next = a * &q + &q_prev;
            p_prev = std::mem::replace(&mut p, p_next);
            q_prev = std::mem::replace(&mut q, q_next);
            convergents.push((p.clone(), q.clone()));
        }
        ContinuedFraction {
            quotients,
            convergents,
            halt,
            alpha,
        }
    }

    /// Build directly from partial quotients [a_0; a_1, ...]; the value is
    /// the exact final convergent.
    pub fn from_quotients(quotients: Vec<BigInt>) -> Result<ContinuedFraction> {
        if quotients.is_empty() {
            return Err(Error::InvalidParams {
                op: "ContinuedFraction::from_quotients",
                detail: "need at least a_0".into(),
            });
        }
        if quotients[1..].iter().any(|a| a < &BigInt::from(1)) {
            return Err(Error::InvalidParams {
                op: "ContinuedFraction::from_quotients",
                detail: "partial quotients a_i must be >= 1 for i >= 1".into(),
            });
        }
        let mut cf = ContinuedFraction::from_parts(quotients, Halt::ExactZero, 0.0);
        let (p, q) = cf.convergent(cf.len() - 1);
        cf.alpha = BigRational::new(p.clone(), q.clone())
            .to_f64()
            .unwrap_or(f64::NAN);
        Ok(cf)
    }

    pub fn quotients(&self) -> &[BigInt] {
        &self.quotients
    }

    /// Number of computed convergents.
    pub fn len(&self) -> usize {
        self.convergents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.convergents.is_empty()
    }

    pub fn convergent(&self, n: usize) -> (&BigInt, &BigInt) {
        let (p, q) = &self.convergents[n];
        (p, q)
    }

    /// Convergent as a floating pair, when it fits.
    pub fn convergent_f64(&self, n: usize) -> Option<(f64, f64)> {
        let (p, q) = self.convergent(n);
        match (p.to_f64(), q.to_f64()) {
            (Some(pf), Some(qf)) if pf.is_finite() && qf.is_finite() => Some((pf, qf)),
            _ => None,
        }
    }

    pub fn halt(&self) -> Halt {
        self.halt
    }

    /// Whether the expansion is finite (rational input or precision floor).
    pub fn is_finite_expansion(&self) -> bool {
        matches!(self.halt, Halt::ExactZero | Halt::RemainderFloor)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Exact value of the final convergent.
    pub fn final_convergent_value(&self) -> BigRational {
        let (p, q) = self.convergent(self.len() - 1);
        BigRational::new(p.clone(), q.clone())
    }
}

/// Default precision floor for floating expansions.
pub const DEFAULT_MIN_REMAINDER: f64 = 1e-15;

/// Expand alpha in (0, 1) into partial quotients; the expansion halts at
/// `max_terms`, at an exactly zero remainder, or when the remainder falls
/// below `min_remainder`. Convergents violating the exact convergent
/// inequality against the (exact rational) input are trimmed, so every
/// convergent returned is a true convergent of the floating input.
pub fn continued_fraction_expand(
    alpha: f64,
    max_terms: usize,
    min_remainder: f64,
) -> Result<ContinuedFraction> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParams {
            op: "continued_fraction_expand",
            detail: format!("alpha = {alpha} outside (0, 1)"),
        });
    }
    let mut quotients = vec![BigInt::from(0)];
    let mut x = alpha;
    let mut halt = Halt::MaxTerms;
    for _ in 0..max_terms {
        if x == 0.0 {
            halt = Halt::ExactZero;
            break;
        }
        if x < min_remainder {
            halt = Halt::RemainderFloor;
            break;
        }
        let recip = 1.0 / x;
        let a = recip.floor();
        quotients.push(BigInt::from(a as i64));
        x = recip - a;
    }
    let cf = ContinuedFraction::from_parts(quotients, halt, alpha);
    Ok(trim_to_true_convergents(cf, alpha))
}

/// Drop trailing convergents past the precision floor: every kept index i
/// satisfies |alpha - p_i/q_i| <= 1/(q_i q_{i+1}) exactly, with alpha read
/// as the exact rational value of the floating input.
fn trim_to_true_convergents(cf: ContinuedFraction, alpha: f64) -> ContinuedFraction {
    let exact = BigRational::from_float(alpha).expect("alpha is finite");
    let mut keep = cf.len();
    for i in 0..cf.len().saturating_sub(1) {
        let (p, q) = cf.convergent(i);
        let (_, q_next) = cf.convergent(i + 1);
        let err = (&exact - BigRational::new(p.clone(), q.clone())).abs();
        let bound = BigRational::new(BigInt::from(1), q * q_next);
        if err > bound {
            keep = i + 1;
            break;
        }
    }
    if keep == cf.len() {
        cf
    } else {
        let quotients = cf.quotients[..keep].to_vec();
        ContinuedFraction::from_parts(quotients, Halt::RemainderFloor, alpha)
    }
}

/// Finite-data proxy for beta = limsup ln(q_{n+1}) / q_n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaEstimate {
    /// Max over computed levels of ln(q_{n+1}) / q_n.
    pub value: f64,
    /// Index n attaining the max.
    pub attained_at: usize,
    /// Whether the underlying expansion was finite; a limsup claim is never
    /// made from finite data.
    pub finite_expansion: bool,
}

/// Max over available n of ln(q_{n+1}) / q_n together with the attaining
/// index. Requires at least 3 convergents.
pub fn beta_estimate(cf: &ContinuedFraction) -> Result<BetaEstimate> {
    if cf.len() < 3 {
        return Err(Error::InvalidParams {
            op: "beta_estimate",
            detail: format!("need at least 3 convergents, have {}", cf.len()),
        });
    }
    let mut best = f64::NEG_INFINITY;
    let mut best_at = 0;
    for n in 1..cf.len() - 1 {
        let (_, q_n) = cf.convergent(n);
        let (_, q_next) = cf.convergent(n + 1);
        let value = ln_big(q_next) / q_n.to_f64().unwrap_or(f64::INFINITY);
        if value > best {
            best = value;
            best_at = n;
        }
    }
    Ok(BetaEstimate {
        value: best,
        attained_at: best_at,
        finite_expansion: cf.is_finite_expansion(),
    })
}

/// Result of the Liouville construction.
#[derive(Debug, Clone)]
pub struct LiouvilleConstruction {
    pub cf: ContinuedFraction,
    /// Floating proxy: the final convergent rounded to f64.
    pub alpha: f64,
    pub levels_built: usize,
}

/// Construct partial quotients so that at each level j = 1..levels the
/// convergents satisfy 1/(q_j q_{j+1}) <= j^(-q_j), which forces
/// |alpha - p_j/q_j| <= j^(-q_j). Quotients are the smallest >= 2 meeting
/// the level constraint; levels whose denominators would exceed the exact
/// integer budget are rejected with the achieved level.
pub fn liouville_construct(levels: usize) -> Result<LiouvilleConstruction> {
    if levels < 1 {
        return Err(Error::InvalidParams {
            op: "liouville_construct",
            detail: "levels must be >= 1".into(),
        });
    }
    // Seed [0; 2]: q_0 = 1, q_1 = 2.
    let mut quotients = vec![BigInt::from(0), BigInt::from(2)];
    let (mut q_prev, mut q_cur) = (BigInt::from(1), BigInt::from(2));
    for j in 1..=levels {
        // Need q_{j+1} >= j^{q_j} / q_j.
        let digits = q_cur.to_f64().map(|q| q * (j as f64).ln() / std::f64::consts::LN_10);
        match digits {
            Some(d) if d <= INTEGER_DIGIT_BUDGET => {}
            _ => {
                return Err(Error::IntegerBudget {
                    achieved: j - 1,
                    requested: levels,
                })
            }
        }
        let exp = q_cur.to_u32().ok_or(Error::IntegerBudget {
            achieved: j - 1,
            requested: levels,
        })?;
        let target = if j == 1 {
            BigInt::from(1)
        } else {
            ceil_div(&big_pow(j as u64, exp), &q_cur)
        };
        let needed = &target - &q_prev;
        let a = if needed <= BigInt::zero() {
            BigInt::from(2)
        } else {
            ceil_div(&needed, &q_cur).max(BigInt::from(2))
        };
        let q_next = &a * &q_cur + &q_prev;
        quotients.push(a);
        q_prev = std::mem::replace(&mut q_cur, q_next);
    }
    let mut cf = ContinuedFraction::from_parts(quotients, Halt::ExactZero, 0.0);
    let alpha = cf.final_convergent_value().to_f64().unwrap_or(f64::NAN);
    cf.alpha = alpha;
    Ok(LiouvilleConstruction {
        cf,
        alpha,
        levels_built: levels,
    })
}

fn big_pow(base: u64, mut exp: u32) -> BigInt {
    let mut result = BigInt::from(1);
    let mut b = BigInt::from(base);
    while exp > 0 {
        if exp & 1 == 1 {
            result = &result * &b;
        }
        b = &b * &b;
        exp >>= 1;
    }
    result
}

/// Measured approximation error of one convergent against the floating
/// frequency, with the convergent-recurrence bound for comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproximationQuality {
    /// |alpha - p_n/q_n|, computed in exact rational arithmetic against the
    /// exact value of the floating alpha.
    pub error: f64,
    /// 1/(q_n q_{n+1}); absent at the last computed convergent.
    pub bound: Option<f64>,
}

pub fn approximation_quality(cf: &ContinuedFraction, n: usize) -> Result<ApproximationQuality> {
    if n >= cf.len() {
        return Err(Error::InvalidParams {
            op: "approximation_quality",
            detail: format!("convergent index {n} out of range (have {})", cf.len()),
        });
    }
    let exact = BigRational::from_float(cf.alpha()).ok_or(Error::InvalidParams {
        op: "approximation_quality",
        detail: "frequency is not finite".into(),
    })?;
    let (p, q) = cf.convergent(n);
    let err = (&exact - BigRational::new(p.clone(), q.clone()))
        .abs()
        .to_f64()
        .unwrap_or(f64::NAN);
    let bound = if n + 1 < cf.len() {
        let (_, q_next) = cf.convergent(n + 1);
        BigRational::new(BigInt::from(1), q * q_next).to_f64()
    } else {
        None
    };
    Ok(ApproximationQuality { error: err, bound })
}

/// gcd(p_n, q_n) as an exact integer; 1 for every true convergent pair.
pub fn convergent_gcd(cf: &ContinuedFraction, n: usize) -> BigInt {
    let (p, q) = cf.convergent(n);
    big_gcd(p, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::GOLDEN_ALPHA;

    fn fib(n: usize) -> u64 {
        let (mut a, mut b) = (0u64, 1u64);
        for _ in 0..n {
            let t = a + b;
            a = b;
            b = t;
        }
        a
    }

    #[test]
    fn golden_ratio_expansion_is_all_ones() {
        let cf = continued_fraction_expand(GOLDEN_ALPHA, 20, DEFAULT_MIN_REMAINDER).unwrap();
        assert!(cf.len() >= 15);
        for a in &cf.quotients()[1..] {
            assert_eq!(a, &BigInt::from(1));
        }
        // q_n is the Fibonacci sequence 1, 1, 2, 3, 5, 8, 13, ...
        for n in 1..cf.len() {
            let (_, q) = cf.convergent(n);
            assert_eq!(q, &BigInt::from(fib(n + 1)), "n = {n}");
        }
        // 55/89 appears as a convergent.
        let found = (0..cf.len()).any(|n| {
            let (p, q) = cf.convergent(n);
            p == &BigInt::from(55) && q == &BigInt::from(89)
        });
        assert!(found);
    }

    #[test]
    fn one_third_terminates() {
        let cf = continued_fraction_expand(1.0 / 3.0, 30, DEFAULT_MIN_REMAINDER).unwrap();
        assert_eq!(cf.quotients()[1], BigInt::from(3));
        assert!(cf.is_finite_expansion());
        let (p, q) = cf.convergent(1);
        assert_eq!((p, q), (&BigInt::from(1), &BigInt::from(3)));
    }

    #[test]
    fn one_half_is_single_quotient() {
        let cf = continued_fraction_expand(0.5, 30, DEFAULT_MIN_REMAINDER).unwrap();
        assert_eq!(cf.quotients().len(), 2);
        assert_eq!(cf.quotients()[1], BigInt::from(2));
        assert_eq!(cf.halt(), Halt::ExactZero);
    }

    #[test]
    fn convergent_inequality_holds_exactly() {
        for alpha in [GOLDEN_ALPHA, crate::model::SQRT2_ALPHA, 0.123456789, 0.7182818284] {
            let cf = continued_fraction_expand(alpha, 30, DEFAULT_MIN_REMAINDER).unwrap();
            let exact = BigRational::from_float(alpha).unwrap();
            for n in 0..cf.len() - 1 {
                let (p, q) = cf.convergent(n);
                let (_, q_next) = cf.convergent(n + 1);
                let err = (&exact - BigRational::new(p.clone(), q.clone())).abs();
                let bound = BigRational::new(BigInt::from(1), q * q_next);
                assert!(err <= bound, "alpha={alpha}, n={n}");
            }
        }
    }

    #[test]
    fn consecutive_convergents_straddle_alpha() {
        let cf = continued_fraction_expand(GOLDEN_ALPHA, 18, DEFAULT_MIN_REMAINDER).unwrap();
        let exact = BigRational::from_float(GOLDEN_ALPHA).unwrap();
        let mut last_sign = 0i8;
        for n in 0..cf.len() {
            let (p, q) = cf.convergent(n);
            let diff = &exact - BigRational::new(p.clone(), q.clone());
            let sign = if diff > BigRational::zero() {
                1
            } else if diff < BigRational::zero() {
                -1
            } else {
                0
            };
            if last_sign != 0 && sign != 0 {
                assert_eq!(sign, -last_sign, "signs must alternate (n = {n})");
            }
            last_sign = sign;
        }
    }

    #[test]
    fn convergents_are_coprime() {
        let cf = continued_fraction_expand(0.37281, 25, DEFAULT_MIN_REMAINDER).unwrap();
        for n in 0..cf.len() {
            assert_eq!(convergent_gcd(&cf, n), BigInt::from(1));
        }
    }

    #[test]
    fn denominators_dominate_fibonacci() {
        for alpha in [GOLDEN_ALPHA, crate::model::SQRT2_ALPHA, 0.3127618932] {
            let cf = continued_fraction_expand(alpha, 15, DEFAULT_MIN_REMAINDER).unwrap();
            for n in 1..cf.len() {
                let (_, q) = cf.convergent(n);
                assert!(q >= &BigInt::from(fib(n + 1)), "alpha={alpha}, n={n}");
            }
        }
    }

    #[test]
    fn round_trip_reproduces_convergents_exactly() {
        // Fold the quotient prefix from the tail as an exact rational and
        // compare against the recurrence.
        let cf = continued_fraction_expand(0.54030230586, 14, DEFAULT_MIN_REMAINDER).unwrap();
        for n in 1..cf.len() {
            let mut value = BigRational::from(cf.quotients()[n].clone());
            for i in (0..n).rev() {
                value = BigRational::from(cf.quotients()[i].clone()) + value.recip();
            }
            let (p, q) = cf.convergent(n);
            assert_eq!(value, BigRational::new(p.clone(), q.clone()), "n = {n}");
        }
    }

    #[test]
    fn golden_beta_is_small_and_decreasing() {
        let cf = continued_fraction_expand(GOLDEN_ALPHA, 20, DEFAULT_MIN_REMAINDER).unwrap();
        let beta = beta_estimate(&cf).unwrap();
        assert!(beta.value <= 0.7, "beta = {}", beta.value);
        // Ratios ln(q_{n+1})/q_n decrease beyond the first few levels.
        let ratio = |n: usize| {
            let (_, q_n) = cf.convergent(n);
            let (_, q_next) = cf.convergent(n + 1);
            ln_big(q_next) / q_n.to_f64().unwrap()
        };
        for n in 3..cf.len() - 2 {
            assert!(ratio(n + 1) < ratio(n), "n = {n}");
        }
    }

    #[test]
    fn rational_beta_flags_termination() {
        let cf = continued_fraction_expand(3.0 / 7.0, 30, DEFAULT_MIN_REMAINDER).unwrap();
        if cf.len() >= 3 {
            let beta = beta_estimate(&cf).unwrap();
            assert!(beta.finite_expansion);
        } else {
            assert!(cf.is_finite_expansion());
        }
    }

    #[test]
    fn liouville_construction_satisfies_level_inequalities() {
        let built = liouville_construct(3).unwrap();
        let cf = &built.cf;
        // Exact check: q_j * q_{j+1} >= j^{q_j} at every level.
        for j in 1..=3usize {
            let (_, q_j) = cf.convergent(j);
            let (_, q_next) = cf.convergent(j + 1);
            let exp = q_j.to_u32().unwrap();
            let rhs = big_pow(j as u64, exp);
            assert!(q_j * q_next >= rhs, "level {j}");
        }
    }

    #[test]
    fn liouville_level_one_is_unconstrained() {
        let built = liouville_construct(1).unwrap();
        assert_eq!(built.levels_built, 1);
        assert!(built.cf.len() >= 3);
    }

    #[test]
    fn liouville_quality_meets_definition_via_proxy() {
        let built = liouville_construct(3).unwrap();
        for j in 1..=3usize {
            let quality = approximation_quality(&built.cf, j).unwrap();
            let (_, q_j) = built.cf.convergent(j);
            let bound = (j as f64).powf(-q_j.to_f64().unwrap());
            assert!(
                quality.error <= bound,
                "level {j}: error {:e} > {bound:e}",
                quality.error
            );
        }
    }

    #[test]
    fn liouville_beta_grows_with_level() {
        let built = liouville_construct(3).unwrap();
        let beta = beta_estimate(&built.cf).unwrap();
        let (_, q2) = built.cf.convergent(2);
        let q2f = q2.to_f64().unwrap();
        let lower = std::f64::consts::LN_2 - 2.0 * q2f.ln() / q2f;
        assert!(beta.value >= lower, "beta {} < {lower}", beta.value);
    }

    #[test]
    fn liouville_budget_rejection_names_achieved_level() {
        let err = liouville_construct(6).unwrap_err();
        match err {
            Error::IntegerBudget { achieved, requested } => {
                assert_eq!(requested, 6);
                assert!(achieved >= 3);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn golden_quality_example() {
        let cf = continued_fraction_expand(GOLDEN_ALPHA, 20, DEFAULT_MIN_REMAINDER).unwrap();
        // |alpha - 8/13| <= 1/(13*21)
        let n = (0..cf.len())
            .find(|&n| cf.convergent(n).1 == &BigInt::from(13))
            .unwrap();
        let quality = approximation_quality(&cf, n).unwrap();
        assert!(quality.error <= 1.0 / (13.0 * 21.0));
        assert!((quality.bound.unwrap() - 1.0 / (13.0 * 21.0)).abs() < 1e-18);
    }

    #[test]
    fn terminating_rational_quality_is_zero_at_last() {
        let cf = continued_fraction_expand(0.5, 10, DEFAULT_MIN_REMAINDER).unwrap();
        let quality = approximation_quality(&cf, cf.len() - 1).unwrap();
        assert_eq!(quality.error, 0.0);
    }

    #[test]
    fn rejects_alpha_outside_unit_interval() {
        assert!(continued_fraction_expand(1.5, 10, 1e-15).is_err());
        assert!(continued_fraction_expand(0.0, 10, 1e-15).is_err());
    }
}
