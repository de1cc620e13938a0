//! Beta, Gamma and Binomial families.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specialfns::{self, Accuracy};

/// Common interface of the continuous laws used by the order checkers.
pub trait Continuous {
    /// Distribution function on the whole real line.
    fn cdf(&self, x: f64) -> Result<f64>;

    /// `1 - cdf(x)`, accurate in the upper tail.
    fn sf(&self, x: f64) -> Result<f64> {
        self.cdf(x).map(|c| 1.0 - c)
    }

    /// `(cdf(x), sf(x))` from a single evaluation where possible.
    fn cdf_sf(&self, x: f64) -> Result<(f64, f64)> {
        Ok((self.cdf(x)?, self.sf(x)?))
    }

    fn quantile(&self, u: f64) -> Result<f64>;

    /// The point `x` with `sf(x) = q`.
    fn quantile_upper(&self, q: f64) -> Result<f64> {
        self.quantile(1.0 - q)
    }

    /// Closed support `(lower, upper)`; `upper` may be infinite.
    fn support(&self) -> (f64, f64);
}

/// `G⁻¹(F(x))`, inverting on whichever tail keeps full precision.
pub fn transform<F, G>(from: &F, to: &G, x: f64) -> Result<f64>
where
    F: Continuous + ?Sized,
    G: Continuous + ?Sized,
{
    let (u, s) = from.cdf_sf(x)?;
    if u <= 0.5 {
        to.quantile(u)
    } else {
        to.quantile_upper(s)
    }
}

fn require_finite(op: &'static str, x: f64) -> Result<()> {
    if x.is_nan() {
        Err(Error::domain(op, "argument is NaN"))
    } else {
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct RawBeta {
    a: f64,
    b: f64,
}

/// Parameters of Beta(a, b): density `x^{a-1}(1-x)^{b-1} / Β(a,b)` on (0, 1).
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "RawBeta", try_from = "RawBeta")]
pub struct BetaParams {
    a: f64,
    b: f64,
    ln_beta: f64,
}

impl From<BetaParams> for RawBeta {
    fn from(p: BetaParams) -> Self {
        RawBeta { a: p.a, b: p.b }
    }
}

impl TryFrom<RawBeta> for BetaParams {
    type Error = Error;
    fn try_from(r: RawBeta) -> Result<Self> {
        BetaParams::new(r.a, r.b)
    }
}

impl fmt::Debug for BetaParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Beta({}, {})", self.a, self.b)
    }
}

impl fmt::Display for BetaParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Beta({}, {})", self.a, self.b)
    }
}

/// Where a Beta density attains its extreme value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeKind {
    /// `a > 1, b > 1`: unique interior maximum.
    Unimodal,
    /// `a < 1, b < 1`: unique interior minimum.
    Uniantimodal,
    /// Exactly one of `a, b` on the other side of 1, or one equal to 1.
    MonotoneDensity,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeClass {
    pub kind: ShapeKind,
    /// `(a-1)/(a+b-2)` for unimodal and uniantimodal shapes.
    pub location: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Skew {
    Positive,
    Negative,
    Symmetric,
}

impl BetaParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite() && b > 0.0 && b.is_finite()) {
            return Err(Error::domain("BetaParams::new", format!("shape parameters must be positive, got ({a}, {b})")));
        }
        Ok(BetaParams { a, b, ln_beta: specialfns::ln_beta_unchecked(a, b) })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn ln_beta(&self) -> f64 {
        self.ln_beta
    }

    /// Law of `1 - X` for `X ~ Beta(a, b)`, i.e. Beta(b, a).
    pub fn reflect(&self) -> BetaParams {
        BetaParams { a: self.b, b: self.a, ln_beta: self.ln_beta }
    }

    /// Density on the open unit interval.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::domain("beta_pdf", format!("x must lie in (0, 1), got {x}")));
        }
        Ok(self.pdf_unchecked(x))
    }

    pub(crate) fn ln_pdf_unchecked(&self, x: f64) -> f64 {
        (self.a - 1.0) * x.ln() + (self.b - 1.0) * (-x).ln_1p() - self.ln_beta
    }

    pub(crate) fn pdf_unchecked(&self, x: f64) -> f64 {
        self.ln_pdf_unchecked(x).exp()
    }

    fn cdf_pair(&self, x: f64) -> Result<(f64, f64)> {
        require_finite("beta_cdf", x)?;
        specialfns::inc_beta_pair(x, self.a, self.b, self.ln_beta, &Accuracy::default())
    }

    pub fn mean(&self) -> f64 {
        self.a / (self.a + self.b)
    }

    /// Median as the 1/2-quantile (the CDF is strictly increasing).
    pub fn median(&self) -> Result<f64> {
        self.quantile(0.5)
    }

    pub fn shape_class(&self) -> ShapeClass {
        let (a, b) = (self.a, self.b);
        let loc = (a - 1.0) / (a + b - 2.0);
        if a > 1.0 && b > 1.0 {
            ShapeClass { kind: ShapeKind::Unimodal, location: Some(loc) }
        } else if a < 1.0 && b < 1.0 {
            ShapeClass { kind: ShapeKind::Uniantimodal, location: Some(loc) }
        } else if a == 1.0 && b == 1.0 {
            ShapeClass { kind: ShapeKind::Uniform, location: None }
        } else {
            ShapeClass { kind: ShapeKind::MonotoneDensity, location: None }
        }
    }

    /// The unique mode; an error unless `a > 1` and `b > 1`.
    pub fn mode(&self) -> Result<f64> {
        match self.shape_class() {
            ShapeClass { kind: ShapeKind::Unimodal, location: Some(m) } => Ok(m),
            _ => Err(Error::ShapeClass(format!("{self} (mode)"))),
        }
    }

    /// The unique anti-mode; an error unless `a < 1` and `b < 1`.
    pub fn antimode(&self) -> Result<f64> {
        match self.shape_class() {
            ShapeClass { kind: ShapeKind::Uniantimodal, location: Some(m) } => Ok(m),
            _ => Err(Error::ShapeClass(format!("{self} (anti-mode)"))),
        }
    }

    /// Failure rate `f(x) / (1 - F(x))`; infinite once the survival
    /// function underflows.
    pub fn hazard_rate(&self, x: f64) -> Result<f64> {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::domain("hazard_rate", format!("x must lie in (0, 1), got {x}")));
        }
        let s = self.sf(x)?;
        if s <= 0.0 {
            return Ok(f64::INFINITY);
        }
        Ok(self.pdf_unchecked(x) / s)
    }

    /// Average failure rate `-ln(1 - F(x)) / x`.
    pub fn avg_hazard_rate(&self, x: f64) -> Result<f64> {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::domain("avg_hazard_rate", format!("x must lie in (0, 1), got {x}")));
        }
        let s = self.sf(x)?;
        if s <= 0.0 {
            return Ok(f64::INFINITY);
        }
        Ok(-s.ln() / x)
    }

    pub fn skew(&self) -> Skew {
        if self.a < self.b {
            Skew::Positive
        } else if self.a > self.b {
            Skew::Negative
        } else {
            Skew::Symmetric
        }
    }
}

impl Continuous for BetaParams {
    fn cdf(&self, x: f64) -> Result<f64> {
        self.cdf_pair(x).map(|p| p.0)
    }

    fn sf(&self, x: f64) -> Result<f64> {
        self.cdf_pair(x).map(|p| p.1)
    }

    fn cdf_sf(&self, x: f64) -> Result<(f64, f64)> {
        self.cdf_pair(x)
    }

    fn quantile(&self, u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::domain("beta_quantile", format!("u must lie in [0, 1], got {u}")));
        }
        specialfns::inv_beta_unchecked(u, self.a, self.b, self.ln_beta, &Accuracy::default())
    }

    fn quantile_upper(&self, q: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::domain("beta_quantile_upper", format!("q must lie in [0, 1], got {q}")));
        }
        specialfns::inv_beta_upper_unchecked(q, self.a, self.b, self.ln_beta, &Accuracy::default())
    }

    fn support(&self) -> (f64, f64) {
        (0.0, 1.0)
    }
}

#[derive(Serialize, Deserialize)]
struct RawGamma {
    shape: f64,
    scale: f64,
}

/// Gamma(shape α, scale θ): density `x^{α-1} e^{-x/θ} / (θ^α Γ(α))` on (0, ∞).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "RawGamma", try_from = "RawGamma")]
pub struct GammaParams {
    shape: f64,
    scale: f64,
}

impl From<GammaParams> for RawGamma {
    fn from(p: GammaParams) -> Self {
        RawGamma { shape: p.shape, scale: p.scale }
    }
}

impl TryFrom<RawGamma> for GammaParams {
    type Error = Error;
    fn try_from(r: RawGamma) -> Result<Self> {
        GammaParams::new(r.shape, r.scale)
    }
}

impl GammaParams {
    pub fn new(shape: f64, scale: f64) -> Result<Self> {
        if !(shape > 0.0 && shape.is_finite() && scale > 0.0 && scale.is_finite()) {
            return Err(Error::domain(
                "GammaParams::new",
                format!("shape and scale must be positive, got ({shape}, {scale})"),
            ));
        }
        Ok(GammaParams { shape, scale })
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn mean(&self) -> f64 {
        self.shape * self.scale
    }

    fn cdf_pair(&self, x: f64) -> Result<(f64, f64)> {
        require_finite("gamma_cdf", x)?;
        specialfns::inc_gamma_pair((x / self.scale).max(0.0), self.shape, &Accuracy::default())
    }
}

impl Continuous for GammaParams {
    fn cdf(&self, x: f64) -> Result<f64> {
        self.cdf_pair(x).map(|p| p.0)
    }

    fn sf(&self, x: f64) -> Result<f64> {
        self.cdf_pair(x).map(|p| p.1)
    }

    fn cdf_sf(&self, x: f64) -> Result<(f64, f64)> {
        self.cdf_pair(x)
    }

    fn quantile(&self, u: f64) -> Result<f64> {
        specialfns::inv_reg_inc_gamma(u, self.shape, &Accuracy::default()).map(|x| x * self.scale)
    }

    fn quantile_upper(&self, q: f64) -> Result<f64> {
        if q == 0.0 {
            return Ok(f64::INFINITY);
        }
        specialfns::inv_reg_inc_gamma_upper(q, self.shape, &Accuracy::default()).map(|x| x * self.scale)
    }

    fn support(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
}

#[derive(Serialize, Deserialize)]
struct RawBinomial {
    n: u64,
    p: f64,
}

/// Binomial(n, p).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "RawBinomial", try_from = "RawBinomial")]
pub struct BinomialParams {
    n: u64,
    p: f64,
}

impl From<BinomialParams> for RawBinomial {
    fn from(b: BinomialParams) -> Self {
        RawBinomial { n: b.n, p: b.p }
    }
}

impl TryFrom<RawBinomial> for BinomialParams {
    type Error = Error;
    fn try_from(r: RawBinomial) -> Result<Self> {
        BinomialParams::new(r.n, r.p)
    }
}

/// Neumaier-compensated sum, in iteration order.
pub(crate) fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

impl BinomialParams {
    pub fn new(n: u64, p: f64) -> Result<Self> {
        if n == 0 || !(0.0..=1.0).contains(&p) {
            return Err(Error::domain("BinomialParams::new", format!("need n >= 1 and p in [0, 1], got ({n}, {p})")));
        }
        Ok(BinomialParams { n, p })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    fn check_k(&self, op: &'static str, k: u64) -> Result<()> {
        if k > self.n {
            Err(Error::domain(op, format!("k = {k} exceeds n = {}", self.n)))
        } else {
            Ok(())
        }
    }

    fn pmf_unchecked(&self, k: u64) -> f64 {
        let (n, p) = (self.n, self.p);
        if p == 0.0 {
            return if k == 0 { 1.0 } else { 0.0 };
        }
        if p == 1.0 {
            return if k == n { 1.0 } else { 0.0 };
        }
        if n <= 1000 {
            // an exact-order product for the coefficient avoids the log-gamma
            // rounding, which dominates far out in the tails
            let m = k.min(n - k);
            let choose = (1..=m).fold(1.0, |acc, j| acc * (n - m + j) as f64 / j as f64);
            let direct = choose * p.powi(k as i32) * ((n - k) as f64 * (-p).ln_1p()).exp();
            if direct > 1e-290 {
                return direct;
            }
        }
        let lg = specialfns::ln_gamma_unchecked;
        let (nf, kf) = (n as f64, k as f64);
        let ln_choose = lg(nf + 1.0) - lg(kf + 1.0) - lg(nf - kf + 1.0);
        (ln_choose + kf * p.ln() + (nf - kf) * (-p).ln_1p()).exp()
    }

    /// `P(B = k)` via log-gamma binomial coefficients.
    pub fn pmf(&self, k: u64) -> Result<f64> {
        self.check_k("binomial_pmf", k)?;
        Ok(self.pmf_unchecked(k))
    }

    /// `P(B <= k)`, summed in ascending `k` with compensation.
    pub fn cdf(&self, k: u64) -> Result<f64> {
        self.check_k("binomial_cdf", k)?;
        Ok(compensated_sum((0..=k).map(|j| self.pmf_unchecked(j))).min(1.0))
    }

    /// `P(B >= k)`, summed directly over the upper tail.
    pub fn sf_from(&self, k: u64) -> Result<f64> {
        self.check_k("binomial_sf", k)?;
        Ok(compensated_sum((k..=self.n).map(|j| self.pmf_unchecked(j))).min(1.0))
    }
}
