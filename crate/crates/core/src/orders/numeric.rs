//! Grid-based checkers for the three orders.
//!
//! A pass means no violation was observed on the grid; a failure carries a
//! witness line and is a genuine counterexample up to the zero tolerance.
//!
//! The star and convex checkers rely on `S(F - G∘ℓ) = S(H - ℓ)` with
//! `H = G⁻¹∘F`. [`TransformTable`] stores `H` on the grid together with the
//! band `[G⁻¹(F - tol), G⁻¹(F + tol)]` outside of which `|F - G∘ℓ| > tol`, so a
//! line is classified per node by two comparisons instead of a CDF call.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::distributions::{BetaParams, Continuous, GammaParams};
use crate::error::{Error, Result};
use crate::signpattern::{GridPolicy, Sign, SignPattern};

use super::AffineMap;

pub const DEFAULT_SEED: u64 = 0x5EED;

/// Settings shared by the numerical checkers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckConfig {
    pub grid: GridPolicy,
    /// Lines (or slopes) per check; half random, half through quantile pairs.
    pub lines: usize,
    pub seed: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { grid: GridPolicy::default(), lines: 200, seed: DEFAULT_SEED }
    }
}

/// A line whose comparison with the transform violates the pattern bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub line: AffineMap,
    /// Grid point at which the violation became visible.
    pub x: f64,
    /// Observed pattern of `x ↦ F(x) - G(ℓ(x))` along the whole grid.
    pub pattern: SignPattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumericCheckReport {
    pub consistent: bool,
    /// Present iff `consistent` is false.
    pub witness: Option<Witness>,
    /// Bound every line pattern must respect.
    pub pattern_bound: SignPattern,
    pub grid_size: usize,
}

impl NumericCheckReport {
    fn new(witness: Option<Witness>, pattern_bound: SignPattern, grid_size: usize) -> Self {
        NumericCheckReport { consistent: witness.is_none(), witness, pattern_bound, grid_size }
    }
}

fn bounded_support<F: Continuous + ?Sized>(op: &'static str, f: &F) -> Result<(f64, f64)> {
    let (lo, hi) = f.support();
    if lo.is_finite() && hi.is_finite() {
        Ok((lo, hi))
    } else {
        Err(Error::domain(op, "the first law must have bounded support"))
    }
}

/// `G⁻¹(u)` given both `u` and `1 - u`, using the tail that keeps precision.
fn quantile_either<G: Continuous + ?Sized>(g: &G, u: f64, s: f64) -> Result<f64> {
    if u <= 0.5 {
        g.quantile(u.max(0.0))
    } else {
        g.quantile_upper(s.max(0.0))
    }
}

/// `x ↦ F(x) ≥ G(x) - tol` on the grid over the support of `F`, i.e. the law
/// of `F` is stochastically smaller than that of `G`.
pub fn verify_st_numeric<F, G>(f: &F, g: &G, grid: &GridPolicy) -> Result<NumericCheckReport>
where
    F: Continuous + ?Sized,
    G: Continuous + ?Sized,
{
    let (lo, hi) = bounded_support("verify_st_numeric", f)?;
    let xs = grid.nodes(lo, hi);
    let mut signs = Vec::with_capacity(xs.len());
    let mut worst: Option<(f64, f64)> = None;
    for &x in &xs {
        let diff = f.cdf(x)? - g.cdf(x)?;
        signs.push(Sign::with_tol(diff, grid.zero_tol));
        if diff < -grid.zero_tol && worst.is_none_or(|(_, w)| diff < w) {
            worst = Some((x, diff));
        }
    }
    let witness = worst.map(|(x, _)| Witness { line: AffineMap::IDENTITY, x, pattern: SignPattern::from_signs(signs) });
    Ok(NumericCheckReport::new(witness, SignPattern::PLUS, xs.len()))
}

/// `H = G⁻¹∘F` and its tolerance band on a grid.
#[derive(Debug, Clone)]
pub struct TransformTable {
    xs: Vec<f64>,
    h: Vec<f64>,
    band_lo: Vec<f64>,
    band_hi: Vec<f64>,
    tol: f64,
}

impl TransformTable {
    /// Tabulates over the (bounded) support of `F`.
    pub fn new<F, G>(f: &F, g: &G, grid: &GridPolicy) -> Result<Self>
    where
        F: Continuous + ?Sized,
        G: Continuous + ?Sized,
    {
        let (lo, hi) = bounded_support("TransformTable::new", f)?;
        let tol = grid.zero_tol;
        let xs = grid.nodes(lo, hi);
        let n = xs.len();
        let (mut h, mut band_lo, mut band_hi) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
        for &x in &xs {
            let (u, s) = f.cdf_sf(x)?;
            h.push(quantile_either(g, u, s)?);
            // G(y) < F - tol  iff  y < band_lo
            band_lo.push(if u <= tol { f64::NEG_INFINITY } else { quantile_either(g, u - tol, s + tol)? });
            band_hi.push(if s <= tol { f64::INFINITY } else { quantile_either(g, u + tol, s - tol)? });
        }
        Ok(TransformTable { xs, h, band_lo, band_hi, tol })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.xs
    }

    /// `G⁻¹(F(x))` at the nodes.
    pub fn transform(&self) -> &[f64] {
        &self.h
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Sign of `F(x_i) - G(ℓ(x_i))` with the zero tolerance applied.
    #[inline]
    fn sign_at(&self, i: usize, line: &AffineMap) -> Sign {
        let y = line.eval(self.xs[i]);
        if y < self.band_lo[i] {
            Sign::Positive
        } else if y > self.band_hi[i] {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    /// Observed pattern of `F - G∘ℓ` on the grid.
    pub fn line_pattern(&self, line: &AffineMap) -> SignPattern {
        (0..self.len()).map(|i| self.sign_at(i, line)).collect()
    }

    /// The first line whose pattern exceeds `bound`.
    pub fn find_violation(&self, lines: &[AffineMap], bound: &SignPattern) -> Option<Witness> {
        lines.iter().find_map(|line| {
            let mut pattern = SignPattern::UNIT;
            let mut at = None;
            for i in 0..self.len() {
                pattern = pattern.push(self.sign_at(i, line));
                if at.is_none() && !pattern.leq(bound) {
                    at = Some(self.xs[i]);
                }
            }
            at.map(|x| Witness { line: *line, x, pattern })
        })
    }

    /// A chord of `H` over consecutive nodes lying below `H` by more than
    /// `tol·max(1, |H|)`.
    pub fn concavity_witness(&self) -> Option<Witness> {
        (1..self.len().saturating_sub(1)).find_map(|m| {
            let (x0, x1, x2) = (self.xs[m - 1], self.xs[m], self.xs[m + 1]);
            let (h0, h1, h2) = (self.h[m - 1], self.h[m], self.h[m + 1]);
            if !(h0.is_finite() && h1.is_finite() && h2.is_finite()) {
                return None;
            }
            let chord = (h0 * (x2 - x1) + h2 * (x1 - x0)) / (x2 - x0);
            (h1 - chord > self.tol * h1.abs().max(1.0)).then(|| {
                let line = AffineMap::through(x0, h0, x2, h2);
                Witness { line, x: x1, pattern: self.line_pattern(&line) }
            })
        })
    }

    /// A decrease of `H(x)/x` beyond `tol·max(1, H/x)` between consecutive
    /// nodes.
    pub fn star_witness(&self) -> Option<Witness> {
        (1..self.len()).find_map(|i| {
            let (x0, x1) = (self.xs[i - 1], self.xs[i]);
            let (r0, r1) = (self.h[i - 1] / x0, self.h[i] / x1);
            if !(r0.is_finite() && r1.is_finite()) {
                return None;
            }
            (r1 < r0 - self.tol * r0.abs().max(1.0)).then(|| {
                let line = AffineMap::new(r0, 0.0);
                Witness { line, x: x1, pattern: self.line_pattern(&line) }
            })
        })
    }

    /// Convex transform check: every line pattern `<= +-+` and no concave
    /// chord.
    pub fn convex_report(&self, lines: &[AffineMap]) -> NumericCheckReport {
        let bound: SignPattern = "+-+".parse().expect("valid pattern");
        let witness = self.find_violation(lines, &bound).or_else(|| self.concavity_witness());
        NumericCheckReport::new(witness, bound, self.len())
    }

    /// Star-shaped check: every ray pattern `<= -+` and `H(x)/x`
    /// nondecreasing.
    pub fn star_report(&self, slopes: &[f64]) -> NumericCheckReport {
        let bound: SignPattern = "-+".parse().expect("valid pattern");
        let rays: Vec<AffineMap> = slopes.iter().map(|&c| AffineMap::new(c, 0.0)).collect();
        let witness = self.find_violation(&rays, &bound).or_else(|| self.star_witness());
        NumericCheckReport::new(witness, bound, self.len())
    }
}

pub fn verify_star_numeric<F, G>(f: &F, g: &G, slopes: &[f64], grid: &GridPolicy) -> Result<NumericCheckReport>
where
    F: Continuous + ?Sized,
    G: Continuous + ?Sized,
{
    if slopes.is_empty() {
        return Err(Error::domain("verify_star_numeric", "no slopes given"));
    }
    if f.support().0 != 0.0 {
        return Err(Error::domain("verify_star_numeric", "the first law must have support starting at 0"));
    }
    Ok(TransformTable::new(f, g, grid)?.star_report(slopes))
}

pub fn verify_convex_numeric<F, G>(f: &F, g: &G, lines: &[AffineMap], grid: &GridPolicy) -> Result<NumericCheckReport>
where
    F: Continuous + ?Sized,
    G: Continuous + ?Sized,
{
    if lines.is_empty() {
        return Err(Error::domain("verify_convex_numeric", "no lines given"));
    }
    Ok(TransformTable::new(f, g, grid)?.convex_report(lines))
}

/// Probability levels `1/(1+e^{-t})` for `t` evenly spread over `[-7, 7]`,
/// returned with their complements.
fn logistic_levels(m: usize) -> Vec<(f64, f64)> {
    (0..m)
        .map(|k| {
            let t = if m == 1 { 0.0 } else { -7.0 + 14.0 * k as f64 / (m - 1) as f64 };
            (1.0 / (1.0 + (-t).exp()), 1.0 / (1.0 + t.exp()))
        })
        .collect()
}

/// Points `(F⁻¹(u), G⁻¹(u))` on the graph of `H` at `m` levels.
fn quantile_pairs<F, G>(f: &F, g: &G, m: usize) -> Result<Vec<(f64, f64)>>
where
    F: Continuous + ?Sized,
    G: Continuous + ?Sized,
{
    logistic_levels(m).into_iter().map(|(u, s)| Ok((quantile_either(f, u, s)?, quantile_either(g, u, s)?))).collect()
}

/// `n` lines: `n/2` with `c ∈ (0, 4)`, `d ∈ (-2, 1)` uniform from `seed`, the
/// rest secants of `H` through quantile pairs, shortest spans first.
pub fn sample_lines<F, G>(f: &F, g: &G, n: usize, seed: u64) -> Result<Vec<AffineMap>>
where
    F: Continuous + ?Sized,
    G: Continuous + ?Sized,
{
    let n_random = n / 2;
    let n_secant = n - n_random;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lines: Vec<AffineMap> =
        (0..n_random).map(|_| AffineMap::new(rng.random_range(0.0..4.0), rng.random_range(-2.0..1.0))).collect();
    let mut m = 2;
    while m * (m - 1) / 2 < n_secant {
        m += 1;
    }
    let pts = quantile_pairs(f, g, m)?;
    'outer: for gap in 1..m {
        for i in 0..m - gap {
            if lines.len() == n {
                break 'outer;
            }
            let ((x0, y0), (x1, y1)) = (pts[i], pts[i + gap]);
            if x1 > x0 && y0.is_finite() && y1.is_finite() {
                lines.push(AffineMap::through(x0, y0, x1, y1));
            }
        }
    }
    Ok(lines)
}

/// `n` slopes: `n/2` uniform on `(0, 4)` from `seed`, the rest `G⁻¹(u)/F⁻¹(u)`
/// at logistic levels.
pub fn sample_slopes<F, G>(f: &F, g: &G, n: usize, seed: u64) -> Result<Vec<f64>>
where
    F: Continuous + ?Sized,
    G: Continuous + ?Sized,
{
    let n_random = n / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut slopes: Vec<f64> = (0..n_random).map(|_| rng.random_range(0.0..4.0)).collect();
    for (x, y) in quantile_pairs(f, g, n - n_random)? {
        let c = y / x;
        if c.is_finite() && c > 0.0 {
            slopes.push(c);
        }
    }
    Ok(slopes)
}

/// Checks `Beta(a, b) <=* Gamma(a, θ)` and `Beta(a, b) <=c Gamma(a, θ)`.
///
/// Returns the star-shaped report if it fails, otherwise the convex one.
pub fn beta_vs_gamma_check(a: f64, b: f64, theta: f64, config: &CheckConfig) -> Result<NumericCheckReport> {
    let f = BetaParams::new(a, b)?;
    let g = GammaParams::new(a, theta)?;
    let table = TransformTable::new(&f, &g, &config.grid)?;
    let star = table.star_report(&sample_slopes(&f, &g, config.lines, config.seed)?);
    if !star.consistent {
        return Ok(star);
    }
    Ok(table.convex_report(&sample_lines(&f, &g, config.lines, config.seed)?))
}
