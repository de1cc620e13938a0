//! The monoid of sign patterns.
//!
//! A sign pattern is an element of the monoid generated by two idempotents
//! `+` and `-` with unit `0`. Because `+·+ = +` and `-·- = -`, every element
//! has a unique reduced form: an alternating word such as `+-+`. An
//! alternating word is determined by its first sign and its length, which is
//! how [`SignPattern`] stores it.
//!
//! Patterns are partially ordered by the factor relation: `p <= q` when
//! `q = π·p·π'` for some patterns `π, π'`. For reduced words this is the
//! substring relation, which gives a constant-time decision rule (see
//! [`SignPattern::leq`]).
//!
//! The sign pattern `S(f)` of a function is the maximal pattern obtained by
//! reading off the signs of `f` at increasing points. Sampling `f` on a finite
//! grid yields a lower bound for `S(f)` in this order.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sign of a real number; `Zero` is the unit of the sign-pattern monoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    /// Exact sign; NaN maps to `Zero`.
    pub fn of(x: f64) -> Sign {
        Sign::with_tol(x, 0.0)
    }

    /// Sign with a dead zone: `|x| <= tol` (or NaN) maps to `Zero`.
    pub fn with_tol(x: f64, tol: f64) -> Sign {
        if x > tol {
            Sign::Positive
        } else if x < -tol {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }

    fn symbol(self) -> char {
        match self {
            Sign::Negative => '-',
            Sign::Zero => '0',
            Sign::Positive => '+',
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self.flip()
    }
}

/// A reduced alternating word over `{+, -}`.
///
/// Invariant: `len == 0` iff `first == Sign::Zero`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct SignPattern {
    first: Sign,
    len: usize,
}

impl SignPattern {
    /// The unit `0` (empty word).
    pub const UNIT: SignPattern = SignPattern { first: Sign::Zero, len: 0 };
    pub const PLUS: SignPattern = SignPattern { first: Sign::Positive, len: 1 };
    pub const MINUS: SignPattern = SignPattern { first: Sign::Negative, len: 1 };

    pub fn unit() -> Self {
        Self::UNIT
    }

    /// The pattern of a single sign; `Zero` gives the unit.
    pub fn single(sign: Sign) -> Self {
        match sign {
            Sign::Zero => Self::UNIT,
            s => SignPattern { first: s, len: 1 },
        }
    }

    /// Alternating word of the given length starting with `first`.
    ///
    /// Returns the unit when `len == 0` or `first` is `Zero`.
    pub fn alternating(first: Sign, len: usize) -> Self {
        if len == 0 || first.is_zero() {
            Self::UNIT
        } else {
            SignPattern { first, len }
        }
    }

    /// Monoid product of a sequence of signs (zeros are dropped, repeats collapse).
    pub fn from_signs<I: IntoIterator<Item = Sign>>(signs: I) -> Self {
        signs.into_iter().fold(Self::UNIT, |acc, s| acc.push(s))
    }

    /// Right-multiplies by a single sign.
    pub fn push(self, sign: Sign) -> Self {
        match (sign, self.last()) {
            (Sign::Zero, _) => self,
            (s, None) => SignPattern::single(s),
            (s, Some(last)) if s == last => self,
            (_, Some(_)) => SignPattern { first: self.first, len: self.len + 1 },
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_unit(&self) -> bool {
        self.len == 0
    }

    /// Same as [`SignPattern::is_unit`]: the unit is the empty word.
    pub fn is_empty(&self) -> bool {
        self.is_unit()
    }

    pub fn first(&self) -> Option<Sign> {
        (self.len > 0).then_some(self.first)
    }

    pub fn last(&self) -> Option<Sign> {
        self.get(self.len.wrapping_sub(1))
    }

    /// The sign at position `i` of the reduced word.
    pub fn get(&self, i: usize) -> Option<Sign> {
        if i >= self.len {
            None
        } else if i & 1 == 0 {
            Some(self.first)
        } else {
            Some(self.first.flip())
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Sign> + '_ {
        (0..self.len).filter_map(move |i| self.get(i))
    }

    /// Monoid product: `self` followed by `rhs`, with a shared boundary sign
    /// collapsed into one.
    pub fn concat(self, rhs: SignPattern) -> SignPattern {
        match (self.last(), rhs.first()) {
            (None, _) => rhs,
            (_, None) => self,
            (Some(l), Some(r)) => {
                SignPattern { first: self.first, len: if l == r { self.len + rhs.len - 1 } else { self.len + rhs.len } }
            }
        }
    }

    /// Word read right to left. An anti-homomorphism and an involution.
    pub fn reverse(self) -> SignPattern {
        match self.last() {
            None => self,
            Some(last) => SignPattern { first: last, len: self.len },
        }
    }

    /// Every sign negated. A homomorphism and an involution.
    pub fn flip(self) -> SignPattern {
        SignPattern { first: self.first.flip(), len: self.len }
    }

    /// Factor order: `self <= other` iff `other = π·self·π'` for some `π, π'`.
    ///
    /// For alternating words this holds iff `self` fits into `other` as a
    /// substring: either both start with the same sign and `self` is no
    /// longer, or they start differently and `self` is at least one shorter.
    pub fn leq(&self, other: &SignPattern) -> bool {
        match (self.first(), other.first()) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(p), Some(q)) if p == q => self.len <= other.len,
            (Some(_), Some(_)) => self.len < other.len,
        }
    }
}

impl Default for SignPattern {
    fn default() -> Self {
        Self::UNIT
    }
}

impl Mul for SignPattern {
    type Output = SignPattern;
    fn mul(self, rhs: SignPattern) -> SignPattern {
        self.concat(rhs)
    }
}

impl Mul<Sign> for SignPattern {
    type Output = SignPattern;
    fn mul(self, rhs: Sign) -> SignPattern {
        self.push(rhs)
    }
}

impl Mul<SignPattern> for Sign {
    type Output = SignPattern;
    fn mul(self, rhs: SignPattern) -> SignPattern {
        SignPattern::single(self).concat(rhs)
    }
}

impl FromIterator<Sign> for SignPattern {
    fn from_iter<I: IntoIterator<Item = Sign>>(iter: I) -> Self {
        SignPattern::from_signs(iter)
    }
}

impl std::iter::Product for SignPattern {
    fn product<I: Iterator<Item = SignPattern>>(iter: I) -> Self {
        iter.fold(SignPattern::UNIT, SignPattern::concat)
    }
}

impl PartialOrd for SignPattern {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self.leq(other), other.leq(self)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return f.write_str("0");
        }
        self.iter().try_for_each(|s| write!(f, "{}", s.symbol()))
    }
}

impl fmt::Debug for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignPattern({self})")
    }
}

impl FromStr for SignPattern {
    type Err = Error;

    /// Parses words over `+`, `-` (or `−`) and `0`; the result is reduced.
    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                '+' => Ok(Sign::Positive),
                '-' | '−' => Ok(Sign::Negative),
                '0' | '𝟘' => Ok(Sign::Zero),
                other => Err(Error::domain("SignPattern::from_str", format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(SignPattern::from_signs)
    }
}

impl From<SignPattern> for String {
    fn from(p: SignPattern) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for SignPattern {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Monoid product of the signs of `values`; entries with `|v| <= zero_tol`
/// contribute the unit.
pub fn pattern_of_samples(values: &[f64], zero_tol: f64) -> SignPattern {
    values.iter().map(|&v| Sign::with_tol(v, zero_tol)).collect()
}

/// Sample placement for function-based sign pattern estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPolicy {
    /// Number of Chebyshev nodes.
    pub points: usize,
    /// Endpoint exclusion as a fraction of the interval width.
    pub margin: f64,
    /// Values with magnitude at most this count as zero.
    pub zero_tol: f64,
}

impl Default for GridPolicy {
    fn default() -> Self {
        GridPolicy { points: 2049, margin: 1e-8, zero_tol: 1e-9 }
    }
}

impl GridPolicy {
    pub fn with_points(points: usize) -> Self {
        GridPolicy { points, ..Default::default() }
    }

    /// Ascending Chebyshev nodes of the first kind mapped onto
    /// `[lo + margin·w, hi - margin·w]` with `w = hi - lo`.
    ///
    /// Node sets for `n` and `3n` points are nested.
    pub fn nodes(&self, lo: f64, hi: f64) -> Vec<f64> {
        let n = self.points.max(1);
        let w = hi - lo;
        let (lo, hi) = (lo + self.margin * w, hi - self.margin * w);
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        (0..n)
            .map(|k| {
                // k = 0 is the node closest to -1
                let theta = std::f64::consts::PI * (2 * (n - 1 - k) + 1) as f64 / (2 * n) as f64;
                (mid + half * theta.cos()).clamp(lo, hi)
            })
            .collect()
    }
}

/// Grid estimate of the sign pattern of a function on an open interval.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionPattern {
    pub pattern: SignPattern,
    /// Grid points where the function did not return a finite value; these
    /// were treated as zeros.
    pub failed_points: Vec<f64>,
}

/// Evaluates `f` on the grid over `(lo, hi)` and returns the product of the
/// observed signs.
///
/// Non-finite values are treated as zeros and listed in
/// [`FunctionPattern::failed_points`].
pub fn pattern_of_function<F>(f: F, lo: f64, hi: f64, grid: &GridPolicy) -> Result<FunctionPattern>
where
    F: Fn(f64) -> f64,
{
    if !(lo < hi) {
        return Err(Error::domain("pattern_of_function", format!("empty interval ({lo}, {hi})")));
    }
    let mut failed_points = Vec::new();
    let pattern = grid
        .nodes(lo, hi)
        .into_iter()
        .map(|x| {
            let v = f(x);
            if v.is_finite() {
                Sign::with_tol(v, grid.zero_tol)
            } else {
                failed_points.push(x);
                Sign::Zero
            }
        })
        .collect();
    Ok(FunctionPattern { pattern, failed_points })
}

/// Checks the bound `S(f) <= σ·S(f')` with `σ` the first sign of `f`, using
/// sampled values of `f` and `f'` (both sorted by abscissa).
pub fn check_derivative_bound(f_samples: &[(f64, f64)], df_samples: &[(f64, f64)], zero_tol: f64) -> bool {
    let f_vals: Vec<f64> = f_samples.iter().map(|&(_, y)| y).collect();
    let df_vals: Vec<f64> = df_samples.iter().map(|&(_, y)| y).collect();
    let sf = pattern_of_samples(&f_vals, zero_tol);
    let sdf = pattern_of_samples(&df_vals, zero_tol);
    let lead = sf.first().unwrap_or(Sign::Zero);
    sf.leq(&(lead * sdf))
}
