//! Reduction of `S(F - G∘ℓ)` to the sign pattern of a cubic.
//!
//! For `F ~ Beta(a, b)`, `G ~ Beta(a', b')` and `ℓ(x) = c·x + d` with `c > 0`,
//! `d < 1`, write `I = {x ∈ [0, 1] : 0 < ℓ(x) < 1}`. Then
//!
//! ```text
//! S(F - G∘ℓ on [0,1]) <= σ₁·S(p₁) <= σ₁·S(p₂) <= σ₁σ₂·S(p₃) <= σ₁σ₂·S(p₄)   (on I)
//! ```
//!
//! where `p₁ = f - c·g∘ℓ` is the derivative of `F - G∘ℓ`, `p₂` its log form,
//! `p₃ = p₂'` and `p₄ = p₃·x(1-x)ℓ(1-ℓ)` a cubic.

use serde::{Deserialize, Serialize};

use crate::distributions::{BetaParams, Continuous};
use crate::error::{Error, Result};
use crate::signpattern::{pattern_of_function, GridPolicy, Sign, SignPattern};

use super::cubic::cubic_sign_pattern;
use super::AffineMap;

/// Coefficients and sign factors of the reduction for one `(P, Q, ℓ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaCubic {
    pub c3: f64,
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
    /// `sign(-d)`.
    pub sigma1: Sign,
    /// Sign of `p₂` at the left end of `I`; `None` when it is not determined
    /// by the parameters (then any of `0, -, +` may apply).
    pub sigma2: Option<Sign>,
    /// `ln(Β(a', b') / (c·Β(a, b)))`.
    pub log_constant: f64,
    /// `I = (max(0, -d/c), min(1, (1-d)/c))`; empty when `lo >= hi`.
    pub interval: (f64, f64),
}

impl LemmaCubic {
    pub fn eval(&self, x: f64) -> f64 {
        ((self.c3 * x + self.c2) * x + self.c1) * x + self.c0
    }

    pub fn interval_is_empty(&self) -> bool {
        !(self.interval.0 < self.interval.1)
    }
}

fn check_line(op: &'static str, line: &AffineMap) -> Result<()> {
    if !(line.c > 0.0 && line.c.is_finite()) {
        return Err(Error::domain(op, format!("slope must be positive, got {}", line.c)));
    }
    if !(line.d < 1.0) {
        return Err(Error::domain(op, format!("intercept must be below 1, got {}", line.d)));
    }
    Ok(())
}

pub fn lemma_cubic(p: &BetaParams, q: &BetaParams, line: &AffineMap) -> Result<LemmaCubic> {
    check_line("lemma_cubic", line)?;
    let (a, b, a2, b2) = (p.a(), p.b(), q.a(), q.b());
    let AffineMap { c, d } = *line;
    let c3 = (a - a2 + b - b2) * c * c;
    let c2 = -(a - a2 + 1.0 - b2) * c * c - (a - a2 + b - 1.0) * c * (1.0 - d) - (b2 - b + 1.0 - a) * c * d;
    let c1 = (a - a2) * c * (1.0 - d) - (a - b2) * c * d - (a + b - 2.0) * (1.0 - d) * d;
    let c0 = -(a - 1.0) * (d - 1.0) * d;
    let sigma2 = if d == 0.0 && a2 != a {
        Some(Sign::of(a2 - a))
    } else if d > 0.0 && a != 1.0 {
        Some(Sign::of(1.0 - a))
    } else if d < 0.0 && a2 != 1.0 {
        Some(Sign::of(a2 - 1.0))
    } else {
        None
    };
    Ok(LemmaCubic {
        c3,
        c2,
        c1,
        c0,
        sigma1: Sign::of(-d),
        sigma2,
        log_constant: q.ln_beta() - c.ln() - p.ln_beta(),
        interval: ((-d / c).max(0.0), ((1.0 - d) / c).min(1.0)),
    })
}

/// The staged functions of the reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    P1,
    P2,
    P3,
    P4,
}

impl Stage {
    pub const ALL: [Stage; 4] = [Stage::P1, Stage::P2, Stage::P3, Stage::P4];
}

/// Evaluates stage `stage` at `x`, which must lie in the open interval `I`.
pub fn lemma_stage_eval(stage: Stage, p: &BetaParams, q: &BetaParams, line: &AffineMap, x: f64) -> Result<f64> {
    let cubic = lemma_cubic(p, q, line)?;
    let (lo, hi) = cubic.interval;
    if !(x > lo && x < hi) {
        return Err(Error::domain("lemma_stage_eval", format!("x = {x} outside ({lo}, {hi})")));
    }
    Ok(stage_value(stage, p, q, line, &cubic, x))
}

fn stage_value(stage: Stage, p: &BetaParams, q: &BetaParams, line: &AffineMap, cubic: &LemmaCubic, x: f64) -> f64 {
    stage_terms(stage, p, q, line, cubic, x).iter().sum()
}

/// The summands of a stage; their magnitudes set the scale of rounding error.
fn stage_terms(stage: Stage, p: &BetaParams, q: &BetaParams, line: &AffineMap, cubic: &LemmaCubic, x: f64) -> [f64; 5] {
    let (a, b, a2, b2) = (p.a(), p.b(), q.a(), q.b());
    let c = line.c;
    let l = line.eval(x);
    match stage {
        Stage::P1 => [p.pdf_unchecked(x), -c * q.pdf_unchecked(l), 0.0, 0.0, 0.0],
        Stage::P2 => [
            (a - 1.0) * x.ln(),
            (b - 1.0) * (-x).ln_1p(),
            -(a2 - 1.0) * l.ln(),
            -(b2 - 1.0) * (-l).ln_1p(),
            cubic.log_constant,
        ],
        Stage::P3 => [(a - 1.0) / x, -(b - 1.0) / (1.0 - x), -c * (a2 - 1.0) / l, c * (b2 - 1.0) / (1.0 - l), 0.0],
        Stage::P4 => [cubic.eval(x), 0.0, 0.0, 0.0, 0.0],
    }
}

/// Observed patterns along the chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaChain {
    pub cubic: LemmaCubic,
    /// `S(F - G∘ℓ)` on `[0, 1]` from the grid.
    pub base: SignPattern,
    /// Grid patterns of `p₁, p₂, p₃` on `I`, then the exact pattern of `p₄`.
    pub stages: [SignPattern; 4],
    /// The value of `σ₂` that made the chain hold, if any did.
    pub sigma2_used: Option<Sign>,
    pub holds: bool,
}

/// Evaluates every link of the chain.
///
/// The base pattern and `p₁..p₃` are grid estimates, the latter refined
/// towards the ends of `I` and with the zero tolerance scaled by the size of
/// the summands; `p₄` is exact. When
/// `σ₂` is undetermined the chain holds if it holds for some choice in
/// `{0, -, +}`.
pub fn lemma_chain(p: &BetaParams, q: &BetaParams, line: &AffineMap, grid: &GridPolicy) -> Result<LemmaChain> {
    let cubic = lemma_cubic(p, q, line)?;
    if cubic.interval_is_empty() {
        return Err(Error::domain("lemma_chain", format!("ℓ maps no point of (0, 1) into (0, 1): {line:?}")));
    }
    let base = pattern_of_function(
        |x| {
            let l = line.eval(x).clamp(0.0, 1.0);
            p.cdf(x).unwrap_or(f64::NAN) - q.cdf(l).unwrap_or(f64::NAN)
        },
        0.0,
        1.0,
        grid,
    )?
    .pattern;
    let (lo, hi) = cubic.interval;
    let mut stages = [SignPattern::UNIT; 4];
    let nodes = stage_nodes(lo, hi, grid);
    for (slot, stage) in stages.iter_mut().zip([Stage::P1, Stage::P2, Stage::P3]) {
        *slot = nodes
            .iter()
            .map(|&x| {
                let terms = stage_terms(stage, p, q, line, &cubic, x);
                let v: f64 = terms.iter().sum();
                let scale = terms.iter().map(|t| t.abs()).sum::<f64>().max(1.0);
                if v.is_finite() {
                    Sign::with_tol(v, grid.zero_tol * scale)
                } else {
                    Sign::Zero
                }
            })
            .collect();
    }
    stages[3] = cubic_sign_pattern(&cubic);

    let s1 = cubic.sigma1;
    let front = base.leq(&(s1 * stages[0])) && (s1 * stages[0]).leq(&(s1 * stages[1]));
    let candidates: Vec<Sign> = match cubic.sigma2 {
        Some(s) => vec![s],
        None => vec![Sign::Zero, Sign::Negative, Sign::Positive],
    };
    let sigma2_used = if front {
        candidates.into_iter().find(|&s2| {
            let lhs = s1 * stages[1];
            let p3 = s1 * (s2 * stages[2]);
            let p4 = s1 * (s2 * stages[3]);
            lhs.leq(&p3) && p3.leq(&p4)
        })
    } else {
        None
    };
    Ok(LemmaChain { cubic, base, stages, sigma2_used, holds: sigma2_used.is_some() })
}

/// Chebyshev nodes on `I` plus points at distances `w·10^-k` from either end.
///
/// The stages have logarithmic or power singularities at the ends of `I`, so a
/// sign change can sit far inside the grid margin.
fn stage_nodes(lo: f64, hi: f64, grid: &GridPolicy) -> Vec<f64> {
    let w = hi - lo;
    let mut nodes = grid.nodes(lo, hi);
    // at a nonzero end, x and ℓ(x) carry absolute rounding of about 1e-16,
    // which swamps offsets much below 1e-12
    let depth = |end: f64| if end == 0.0 { 300 } else { 12 };
    for k in 9..=depth(lo) {
        nodes.push(lo + w * 10f64.powi(-k));
    }
    for k in 9..=depth(hi) {
        nodes.push(hi - w * 10f64.powi(-k));
    }
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    nodes
}

pub fn verify_lemma_chain(p: &BetaParams, q: &BetaParams, line: &AffineMap, grid: &GridPolicy) -> Result<bool> {
    lemma_chain(p, q, line, grid).map(|c| c.holds)
}
