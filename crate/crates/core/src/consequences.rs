//! Consequences of the Beta transform-order characterisation.
//!
//! - exceedance probabilities `P(X >= mean)`, `P(X > mode)`, `P(X > anti-mode)`
//!   and their monotonicity in the shape parameters;
//! - closed-form bounds on `P(X >= mean)` for `a, b >= 1`;
//! - the identity `P(Beta(k+1, n-k) >= p) = P(Bin(n, p) <= k)` and the two
//!   binomial monotonicity statements it yields;
//! - (anti)mode-median-mean inequalities for skewed Beta laws.
//!
//! For continuous laws `P(X >= t) = P(X > t) = 1 - F(t)`.

use serde::{Deserialize, Serialize};

use crate::distributions::{BetaParams, BinomialParams, Continuous, ShapeClass, ShapeKind, Skew};
use crate::error::{Error, Result};
use crate::orders::{decide_beta_order, OrderKind, OrderResult};

/// Tolerance for monotonicity violations in parameter scans.
pub const SCAN_TOL: f64 = 1e-10;
/// Tolerance for the inner inequalities of [`bounds_check`].
pub const BOUNDS_TOL: f64 = 1e-12;
/// Tolerance for [`mmm_check`] and [`jensen_exceedance_compare`].
pub const INEQUALITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExceedanceRow {
    pub a: f64,
    pub b: f64,
    pub mean: f64,
    pub shape: ShapeClass,
    pub p_over_mean: f64,
    /// Present for unimodal shapes.
    pub p_over_mode: Option<f64>,
    /// Present for uniantimodal shapes.
    pub p_over_antimode: Option<f64>,
}

pub fn exceedance_row(params: &BetaParams) -> Result<ExceedanceRow> {
    let shape = params.shape_class();
    let mean = params.mean();
    let tail = |t: Option<f64>| t.map(|t| params.sf(t)).transpose();
    Ok(ExceedanceRow {
        a: params.a(),
        b: params.b(),
        mean,
        shape,
        p_over_mean: params.sf(mean)?,
        p_over_mode: tail((shape.kind == ShapeKind::Unimodal).then_some(shape.location).flatten())?,
        p_over_antimode: tail((shape.kind == ShapeKind::Uniantimodal).then_some(shape.location).flatten())?,
    })
}

/// `((b/(1+b))^b, 1 - (a/(1+a))^a)`: `P(X >= mean)` at `a = 1` and at `b = 1`.
pub fn mean_exceedance_bounds(params: &BetaParams) -> (f64, f64) {
    let (a, b) = (params.a(), params.b());
    let lower = (b * (-(1.0 + b).recip()).ln_1p()).exp();
    let upper = -(a * (-(1.0 + a).recip()).ln_1p()).exp_m1();
    (lower, upper)
}

/// `e⁻¹ < (b/(1+b))^b <= P(X >= mean) <= 1 - (a/(1+a))^a < 1 - e⁻¹`, inner
/// comparisons at tolerance [`BOUNDS_TOL`].
pub fn bounds_check(params: &BetaParams) -> Result<bool> {
    if params.a() < 1.0 || params.b() < 1.0 {
        return Err(Error::domain("bounds_check", format!("requires a, b >= 1, got {params}")));
    }
    let p = params.sf(params.mean())?;
    let (lower, upper) = mean_exceedance_bounds(params);
    let inv_e = (-1.0f64).exp();
    Ok(inv_e < lower && lower <= p + BOUNDS_TOL && p <= upper + BOUNDS_TOL && upper < 1.0 - inv_e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axis {
    A,
    B,
    BinomialP,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Increasing,
    Decreasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    MeanExceedance,
    ModeExceedance,
    AntimodeExceedance,
}

impl Target {
    /// Direction in which the exceedance probability moves along `axis`.
    pub fn claimed_direction(self, axis: Axis) -> Option<Direction> {
        use Direction::*;
        match (self, axis) {
            (Target::MeanExceedance | Target::AntimodeExceedance, Axis::A) => Some(Increasing),
            (Target::MeanExceedance | Target::AntimodeExceedance, Axis::B) => Some(Decreasing),
            (Target::ModeExceedance, Axis::A) => Some(Decreasing),
            (Target::ModeExceedance, Axis::B) => Some(Increasing),
            (_, Axis::BinomialP) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub axis: Axis,
    pub direction: Direction,
    /// `(parameter, probability)` in scan order.
    pub samples: Vec<(f64, f64)>,
    /// Indices `i` such that the step from sample `i` to `i + 1` goes against
    /// `direction` by more than the tolerance.
    pub violations: Vec<usize>,
}

impl MonotonicityReport {
    fn from_samples(axis: Axis, direction: Direction, samples: Vec<(f64, f64)>, tol: f64) -> Self {
        let violations = samples
            .windows(2)
            .enumerate()
            .filter(|(_, w)| {
                let step = w[1].1 - w[0].1;
                match direction {
                    Direction::Increasing => step < -tol,
                    Direction::Decreasing => step > tol,
                }
            })
            .map(|(i, _)| i)
            .collect();
        MonotonicityReport { axis, direction, samples, violations }
    }

    pub fn is_monotone(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Evaluates `target` along `values` of `axis` with the other shape parameter
/// held at `fixed`, and flags steps against the claimed direction by more
/// than `tol`.
pub fn scan_monotone(axis: Axis, fixed: f64, values: &[f64], target: Target, tol: f64) -> Result<MonotonicityReport> {
    let direction = target
        .claimed_direction(axis)
        .ok_or_else(|| Error::domain("scan_monotone", "the binomial axis is scanned by binomial_monotonicity"))?;
    if values.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::domain("scan_monotone", "values must be strictly increasing"));
    }
    let samples = values
        .iter()
        .map(|&v| {
            let params = match axis {
                Axis::A => BetaParams::new(v, fixed)?,
                _ => BetaParams::new(fixed, v)?,
            };
            let t = match target {
                Target::MeanExceedance => params.mean(),
                Target::ModeExceedance => params.mode()?,
                Target::AntimodeExceedance => params.antimode()?,
            };
            Ok((v, params.sf(t)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MonotonicityReport::from_samples(axis, direction, samples, tol))
}

/// `max_p |P(Beta(k+1, n-k) >= p) - P(Bin(n, p) <= k)|` over `p_grid`.
pub fn beta_binomial_identity_check(n: u64, k: u64, p_grid: &[f64]) -> Result<f64> {
    if k >= n {
        return Err(Error::domain("beta_binomial_identity_check", format!("need k < n, got k = {k}, n = {n}")));
    }
    let beta = BetaParams::new((k + 1) as f64, (n - k) as f64)?;
    p_grid.iter().try_fold(0.0f64, |worst, &p| {
        let lhs = beta.sf(p)?;
        let rhs = BinomialParams::new(n, p)?.cdf(k)?;
        Ok(worst.max((lhs - rhs).abs()))
    })
}

/// The two binomial sequences, each with its claimed direction:
///
/// - `P(B > np - p) = P(B >= k + 1)` at `p = k/(n-1)`, `k = 1..=n-2`,
///   increasing;
/// - `P(B > np - (1-p)) = P(B >= k)` at `p = k/(n+1)`, `k = 1..=n`,
///   decreasing.
///
/// At these grid points the thresholds are the integers `k` and `k - 1`, so
/// the strict inequalities become the stated tail sums.
pub fn binomial_monotonicity(n: u64, tol: f64) -> Result<(MonotonicityReport, MonotonicityReport)> {
    if n < 2 {
        return Err(Error::domain("binomial_monotonicity", format!("need n >= 2, got {n}")));
    }
    let first = (1..n.saturating_sub(1))
        .map(|k| {
            let p = k as f64 / (n - 1) as f64;
            Ok((p, BinomialParams::new(n, p)?.sf_from(k + 1)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let second = (1..=n)
        .map(|k| {
            let p = k as f64 / (n + 1) as f64;
            Ok((p, BinomialParams::new(n, p)?.sf_from(k)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((
        MonotonicityReport::from_samples(Axis::BinomialP, Direction::Increasing, first, tol),
        MonotonicityReport::from_samples(Axis::BinomialP, Direction::Decreasing, second, tol),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MmmReport {
    /// Mode for shapes with a unique maximiser of the density, anti-mode for
    /// shapes with a unique minimiser; boundary points included.
    pub mode_or_antimode: Option<f64>,
    pub median: f64,
    pub mean: f64,
    pub skew: Skew,
    pub inequalities_hold: bool,
}

/// Checks the (anti)mode-median-mean inequalities.
///
/// For `a <= b` (positive skew): `median <= mean`; `mode <= median` when
/// `1 <= a` and `(a, b) != (1, 1)` (the mode is 0 when `a = 1`);
/// `median <= anti-mode` when `a < 1` and `b <= 1` (the anti-mode is 1 when
/// `b = 1`). For `a > b` the reversed inequalities are checked, which is the
/// same statement for `1 - X ~ Beta(b, a)`.
pub fn mmm_check(params: &BetaParams) -> Result<MmmReport> {
    let skew = params.skew();
    let positive = if skew == Skew::Negative { params.reflect() } else { *params };
    let (a, b) = (positive.a(), positive.b());
    let median = positive.median()?;
    let mean = positive.mean();
    let tol = INEQUALITY_TOL;
    let mut holds = median <= mean + tol;
    let mut extreme = None;
    if a >= 1.0 && b > 1.0 {
        let mode = if a == 1.0 { 0.0 } else { positive.mode()? };
        holds &= mode <= median + tol;
        extreme = Some(mode);
    } else if a < 1.0 && b <= 1.0 {
        let antimode = if b == 1.0 { 1.0 } else { positive.antimode()? };
        holds &= median <= antimode + tol;
        extreme = Some(antimode);
    }
    let back = |x: f64| if skew == Skew::Negative { 1.0 - x } else { x };
    Ok(MmmReport {
        mode_or_antimode: extreme.map(back),
        median: back(median),
        mean: back(mean),
        skew,
        inequalities_hold: holds,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Functional {
    Mean,
    Mode,
    Antimode,
}

/// For `P <=c Q`: `P(X >= T(P)) >= P(Y >= T(Q))` for the mean and anti-mode,
/// `<=` for the mode, at tolerance [`INEQUALITY_TOL`].
pub fn jensen_exceedance_compare(p: &BetaParams, q: &BetaParams, functional: Functional) -> Result<bool> {
    let verdict = decide_beta_order(OrderKind::ConvexTransform, p, q).result;
    if !matches!(verdict, OrderResult::LessThan | OrderResult::Equivalent) {
        return Err(Error::Ordering(format!("{p} is not convex-transform smaller than {q}")));
    }
    let point = |d: &BetaParams| match functional {
        Functional::Mean => Ok(d.mean()),
        Functional::Mode => d.mode(),
        Functional::Antimode => d.antimode(),
    };
    let px = p.sf(point(p)?)?;
    let py = q.sf(point(q)?)?;
    Ok(match functional {
        Functional::Mean | Functional::Antimode => px >= py - INEQUALITY_TOL,
        Functional::Mode => px <= py + INEQUALITY_TOL,
    })
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn beta(a: f64, b: f64) -> BetaParams {
        BetaParams::new(a, b).unwrap()
    }

    #[test]
    fn exceedance_examples() {
        let r = exceedance_row(&beta(1.0, 1.0)).unwrap();
        assert!((r.p_over_mean - 0.5).abs() < 1e-15);
        assert_eq!((r.p_over_mode, r.p_over_antimode), (None, None));
        for &b in &[0.5, 1.0, 2.0, 5.0, 30.0] {
            let r = exceedance_row(&beta(1.0, b)).unwrap();
            let expected = (b / (1.0 + b)).powf(b);
            assert!((r.p_over_mean - expected).abs() < 1e-14, "b={b}");
        }
        for &a in &[0.5, 2.0, 5.0, 30.0] {
            let r = exceedance_row(&beta(a, 1.0)).unwrap();
            let expected = 1.0 - (a / (1.0 + a)).powf(a);
            assert!((r.p_over_mean - expected).abs() < 1e-14, "a={a}");
        }
        let r = exceedance_row(&beta(2.0, 5.0)).unwrap();
        assert!(r.p_over_mode.is_some() && r.p_over_antimode.is_none());
        let r = exceedance_row(&beta(0.5, 0.8)).unwrap();
        assert!(r.p_over_mode.is_none() && r.p_over_antimode.is_some());
    }

    #[test]
    fn exceedance_reflection() {
        for &(a, b) in &[(0.3, 0.7), (2.5, 5.0), (1.0, 1.5), (7.0, 2.0)] {
            let s = exceedance_row(&beta(a, b)).unwrap().p_over_mean + exceedance_row(&beta(b, a)).unwrap().p_over_mean;
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bounds_examples() {
        assert!(bounds_check(&beta(1.0, 1.0)).unwrap());
        assert!(bounds_check(&beta(50.0, 50.0)).unwrap());
        assert!(bounds_check(&beta(2.0, 3.0)).unwrap());
        let p = exceedance_row(&beta(50.0, 50.0)).unwrap().p_over_mean;
        assert!((p - 0.5).abs() < 0.02);
        assert!(bounds_check(&beta(0.5, 3.0)).is_err());
    }

    #[test]
    fn lower_bound_approaches_inv_e_from_above() {
        let inv_e = (-1.0f64).exp();
        let mut prev = f64::INFINITY;
        for &b in &[1.0, 10.0, 100.0, 1000.0] {
            let (lower, _) = mean_exceedance_bounds(&beta(1.0, b));
            assert!(lower > inv_e && lower < prev, "b={b}");
            prev = lower;
        }
        assert!(prev - inv_e < 2e-4);
    }

    #[test]
    fn scan_examples() {
        let r = scan_monotone(Axis::A, 2.0, &linspace(1.0, 10.0, 19), Target::MeanExceedance, SCAN_TOL).unwrap();
        assert_eq!(r.direction, Direction::Increasing);
        assert!(r.is_monotone());
        let r = scan_monotone(Axis::A, 3.0, &linspace(1.1, 6.0, 50), Target::ModeExceedance, SCAN_TOL).unwrap();
        assert_eq!(r.direction, Direction::Decreasing);
        assert!(r.is_monotone());
        let r = scan_monotone(Axis::A, 0.9, &linspace(0.1, 0.9, 9), Target::AntimodeExceedance, SCAN_TOL).unwrap();
        assert_eq!(r.direction, Direction::Increasing);
        assert!(r.is_monotone(), "{r:?}");
    }

    #[test]
    fn scan_rejects_bad_input() {
        assert!(matches!(
            scan_monotone(Axis::A, 3.0, &[0.5, 2.0], Target::ModeExceedance, SCAN_TOL),
            Err(Error::ShapeClass(_))
        ));
        assert!(scan_monotone(Axis::B, 0.5, &[0.3, 1.2], Target::AntimodeExceedance, SCAN_TOL).is_err());
        assert!(scan_monotone(Axis::A, 2.0, &[2.0, 1.0], Target::MeanExceedance, SCAN_TOL).is_err());
        assert!(scan_monotone(Axis::BinomialP, 2.0, &[1.0, 2.0], Target::MeanExceedance, SCAN_TOL).is_err());
    }

    #[test]
    fn violations_are_detected() {
        let r = MonotonicityReport::from_samples(
            Axis::A,
            Direction::Increasing,
            vec![(0.0, 0.1), (1.0, 0.3), (2.0, 0.2), (3.0, 0.2 - 1e-12), (4.0, 0.5)],
            1e-10,
        );
        assert_eq!(r.violations, vec![1]);
    }

    #[test]
    fn identity_examples() {
        // Beta(2,1) tail 1 - p², binomial cdf 1 - p²
        assert!(beta_binomial_identity_check(2, 1, &[0.5]).unwrap() < 1e-15);
        assert!((beta(2.0, 1.0).sf(0.5).unwrap() - 0.75).abs() < 1e-15);
        assert!(beta_binomial_identity_check(7, 3, &[0.0]).unwrap() < 1e-15);
        assert!(beta_binomial_identity_check(2, 2, &[0.5]).is_err());
    }

    #[test]
    fn binomial_examples() {
        let (first, second) = binomial_monotonicity(5, 1e-12).unwrap();
        assert_eq!(first.samples.len(), 3);
        assert_eq!(second.samples.len(), 5);
        assert!(first.is_monotone() && second.is_monotone());
        let (first, second) = binomial_monotonicity(2, 1e-12).unwrap();
        assert!(first.samples.is_empty() && first.is_monotone());
        assert!(second.is_monotone());
        assert!(binomial_monotonicity(1, 1e-12).is_err());
    }

    #[test]
    fn mmm_examples() {
        let r = mmm_check(&beta(2.0, 5.0)).unwrap();
        assert!(r.inequalities_hold);
        assert!((r.mode_or_antimode.unwrap() - 0.2).abs() < 1e-15);
        assert!(r.median > 0.2 && r.median < 2.0 / 7.0);
        let r = mmm_check(&beta(3.0, 3.0)).unwrap();
        assert!(r.inequalities_hold);
        assert!((r.median - 0.5).abs() < 1e-12 && (r.mode_or_antimode.unwrap() - 0.5).abs() < 1e-15);
        let r = mmm_check(&beta(0.5, 0.8)).unwrap();
        assert!(r.inequalities_hold);
        assert!(r.median <= r.mean && r.median <= r.mode_or_antimode.unwrap());
        // negative skew: mirrored values
        let r = mmm_check(&beta(5.0, 2.0)).unwrap();
        assert!(r.inequalities_hold);
        assert!((r.mode_or_antimode.unwrap() - 0.8).abs() < 1e-15);
        assert!(r.mean <= r.median && r.median <= 0.8);
        // boundary shapes
        assert_eq!(mmm_check(&beta(1.0, 3.0)).unwrap().mode_or_antimode, Some(0.0));
        assert_eq!(mmm_check(&beta(0.4, 1.0)).unwrap().mode_or_antimode, Some(1.0));
        assert_eq!(mmm_check(&beta(1.0, 1.0)).unwrap().mode_or_antimode, None);
    }

    #[test]
    fn jensen_examples() {
        // Beta(2,1): P(X >= 2/3) = 5/9; uniform: 1/2
        assert!(jensen_exceedance_compare(&beta(2.0, 1.0), &beta(1.0, 1.0), Functional::Mean).unwrap());
        let p = beta(2.5, 3.0);
        for f in [Functional::Mean, Functional::Mode] {
            assert!(jensen_exceedance_compare(&p, &p, f).unwrap());
        }
        assert!(jensen_exceedance_compare(&beta(3.0, 3.0), &beta(2.0, 3.0), Functional::Mode).unwrap());
        assert!(jensen_exceedance_compare(&beta(0.8, 0.5), &beta(0.5, 0.9), Functional::Antimode).unwrap());
        assert!(matches!(
            jensen_exceedance_compare(&beta(2.0, 2.0), &beta(1.0, 1.0), Functional::Mean),
            Err(Error::Ordering(_))
        ));
        assert!(matches!(
            jensen_exceedance_compare(&beta(2.0, 1.0), &beta(1.0, 1.0), Functional::Mode),
            Err(Error::ShapeClass(_))
        ));
    }

    #[test]
    fn linspace_endpoints() {
        let v = linspace(1.0, 10.0, 41);
        assert_eq!((v[0], v[40], v.len()), (1.0, 10.0, 41));
        assert!((v[1] - 1.225).abs() < 1e-15);
    }
}
