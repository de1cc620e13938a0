//! Transform orders on probability distributions.
//!
//! The crate is organised bottom-up:
//!
//! - [`signpattern`]: the monoid of reduced sign words, its partial order and
//!   sampling-based estimates of the sign pattern of a real function.
//! - [`specialfns`]: log-gamma, log-beta, regularized incomplete beta and gamma
//!   functions and their inverses.
//! - [`distributions`]: Beta, Gamma and Binomial parameter records with
//!   cdf/quantile/moments/hazard rates.
//! - [`orders`]: closed-form order deciders within the Beta family, generic
//!   grid-based checkers for stochastic dominance, star-shaped and convex
//!   transform order, and the cubic reduction used to bound sign patterns of
//!   `F - G∘ℓ`.
//! - [`consequences`]: exceedance probabilities over mean/mode/anti-mode, their
//!   monotonicity in the parameters, the Beta–Binomial identity and the
//!   (anti)mode-median-mean inequalities.

pub mod consequences;
pub mod distributions;
pub mod error;
pub mod orders;
pub mod signpattern;
pub mod specialfns;

pub use distributions::{BetaParams, BinomialParams, Continuous, GammaParams, ShapeClass, ShapeKind, Skew};
pub use error::{Error, Result};

pub use orders::{AffineMap, LemmaCubic, NumericCheckReport, OrderKind, OrderResult, OrderVerdict};
pub use signpattern::{GridPolicy, Sign, SignPattern};
pub use specialfns::Accuracy;
