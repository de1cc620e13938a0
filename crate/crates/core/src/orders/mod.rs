//! Stochastic, star-shaped and convex transform orders.
//!
//! For distribution functions `F` (law of `X`) and `G` (law of `Y`):
//!
//! - `X <=st Y` when `F(x) >= G(x)` for all `x`;
//! - `X <=* Y` when `x ↦ G⁻¹(F(x))` is star-shaped, i.e. `G⁻¹(F(x))/x` is
//!   nondecreasing;
//! - `X <=c Y` when `x ↦ G⁻¹(F(x))` is convex.
//!
//! Within the Beta family all three are decided by the parameters alone
//! ([`decide_beta_order`]). The [`numeric`] checkers test the same relations
//! for arbitrary continuous laws on a grid, and [`lemma`] holds the reduction
//! that bounds `S(F - G∘ℓ)` by the sign pattern of a cubic.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::distributions::BetaParams;

pub mod cubic;
pub mod lemma;
pub mod numeric;

pub use cubic::{cubic_sign_pattern, polynomial_sign_pattern};
pub use lemma::{lemma_chain, lemma_cubic, lemma_stage_eval, verify_lemma_chain, LemmaChain, LemmaCubic, Stage};
pub use numeric::{
    beta_vs_gamma_check, sample_lines, sample_slopes, verify_convex_numeric, verify_st_numeric, verify_star_numeric,
    CheckConfig, NumericCheckReport, TransformTable, Witness, DEFAULT_SEED,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderKind {
    StochasticDominance,
    StarShaped,
    ConvexTransform,
}

impl OrderKind {
    pub const ALL: [OrderKind; 3] = [OrderKind::StochasticDominance, OrderKind::StarShaped, OrderKind::ConvexTransform];
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderKind::StochasticDominance => "st",
            OrderKind::StarShaped => "star",
            OrderKind::ConvexTransform => "convex",
        })
    }
}

impl std::str::FromStr for OrderKind {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "st" | "stochastic-dominance" => Ok(OrderKind::StochasticDominance),
            "star" | "star-shaped" => Ok(OrderKind::StarShaped),
            "convex" | "convex-transform" => Ok(OrderKind::ConvexTransform),
            _ => Err(crate::Error::domain(
                "OrderKind::from_str",
                format!("unknown order {s:?}; expected st, star or convex"),
            )),
        }
    }
}

/// Position of `P` relative to `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrderResult {
    LessThan,
    GreaterThan,
    Equivalent,
    Incomparable,
}

impl OrderResult {
    pub fn reversed(self) -> OrderResult {
        match self {
            OrderResult::LessThan => OrderResult::GreaterThan,
            OrderResult::GreaterThan => OrderResult::LessThan,
            r => r,
        }
    }
}

/// Verdict for `P` relative to `Q` under `relation`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrderVerdict {
    pub relation: OrderKind,
    pub result: OrderResult,
}

/// `ℓ(x) = c·x + d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    pub c: f64,
    pub d: f64,
}

impl AffineMap {
    pub const IDENTITY: AffineMap = AffineMap { c: 1.0, d: 0.0 };

    pub fn new(c: f64, d: f64) -> Self {
        AffineMap { c, d }
    }

    /// Line through `(x0, y0)` and `(x1, y1)`; `x0 != x1`.
    pub fn through(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        let c = (y1 - y0) / (x1 - x0);
        AffineMap { c, d: y0 - c * x0 }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        self.c * x + self.d
    }
}

/// Closed-form order between two Beta laws.
///
/// With `P = Beta(a, b)` and `Q = Beta(a', b')`, the condition
/// `a >= a'` and `b <= b'` makes `P` smaller than `Q` in the star-shaped and
/// convex transform orders and larger in the stochastic order.
pub fn decide_beta_order(kind: OrderKind, p: &BetaParams, q: &BetaParams) -> OrderVerdict {
    let (a, b, a2, b2) = (p.a(), p.b(), q.a(), q.b());
    let transform_result = if a == a2 && b == b2 {
        OrderResult::Equivalent
    } else if a >= a2 && b <= b2 {
        OrderResult::LessThan
    } else if a <= a2 && b >= b2 {
        OrderResult::GreaterThan
    } else {
        OrderResult::Incomparable
    };
    let result = match kind {
        OrderKind::StochasticDominance => transform_result.reversed(),
        OrderKind::StarShaped | OrderKind::ConvexTransform => transform_result,
    };
    OrderVerdict { relation: kind, result }
}

/// `X <=c Y` iff `1 - Y <=c 1 - X`: compares the convex verdict for `(P, Q)`
/// with the one for the reflected pair `(Q̄, P̄)`.
pub fn mirror_check(p: &BetaParams, q: &BetaParams) -> bool {
    let direct = decide_beta_order(OrderKind::ConvexTransform, p, q).result == OrderResult::LessThan;
    let mirrored =
        decide_beta_order(OrderKind::ConvexTransform, &q.reflect(), &p.reflect()).result == OrderResult::LessThan;
    direct == mirrored
}

#[cfg(test)]
mod tests {
    use super::*;

    fn beta(a: f64, b: f64) -> BetaParams {
        BetaParams::new(a, b).unwrap()
    }

    const GRID: [f64; 6] = [0.3, 0.7, 1.0, 1.5, 2.5, 5.0];

    fn grid_params() -> Vec<BetaParams> {
        GRID.iter().flat_map(|&a| GRID.iter().map(move |&b| beta(a, b))).collect()
    }

    #[test]
    fn decide_examples() {
        let v = decide_beta_order(OrderKind::ConvexTransform, &beta(2.0, 1.0), &beta(1.0, 1.0));
        assert_eq!(v.result, OrderResult::LessThan);
        let v = decide_beta_order(OrderKind::ConvexTransform, &beta(2.0, 2.0), &beta(1.0, 1.0));
        assert_eq!(v.result, OrderResult::Incomparable);
        for kind in OrderKind::ALL {
            let v = decide_beta_order(kind, &beta(3.0, 4.0), &beta(3.0, 4.0));
            assert_eq!(v, OrderVerdict { relation: kind, result: OrderResult::Equivalent });
        }
        let v = decide_beta_order(OrderKind::StochasticDominance, &beta(2.0, 1.0), &beta(1.0, 1.0));
        assert_eq!(v.result, OrderResult::GreaterThan);
    }

    #[test]
    fn verdicts_are_antisymmetric_and_transitive() {
        let ps = grid_params();
        for kind in OrderKind::ALL {
            for p in &ps {
                for q in &ps {
                    let pq = decide_beta_order(kind, p, q).result;
                    let qp = decide_beta_order(kind, q, p).result;
                    assert_eq!(pq, qp.reversed(), "{kind} {p} {q}");
                    if pq != OrderResult::LessThan {
                        continue;
                    }
                    for r in &ps {
                        if decide_beta_order(kind, q, r).result == OrderResult::LessThan {
                            assert_eq!(decide_beta_order(kind, p, r).result, OrderResult::LessThan);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn transform_orders_reverse_stochastic_order() {
        let ps = grid_params();
        for p in &ps {
            for q in &ps {
                let st = decide_beta_order(OrderKind::StochasticDominance, p, q).result;
                let star = decide_beta_order(OrderKind::StarShaped, p, q).result;
                let cx = decide_beta_order(OrderKind::ConvexTransform, p, q).result;
                assert_eq!(star, cx);
                assert_eq!(st, cx.reversed());
            }
        }
    }

    #[test]
    fn mirror_examples() {
        assert!(mirror_check(&beta(2.0, 1.0), &beta(1.0, 1.0)));
        assert!(mirror_check(&beta(3.0, 3.0), &beta(3.0, 3.0)));
        let ps = grid_params();
        for p in &ps {
            for q in &ps {
                assert!(mirror_check(p, q), "{p} {q}");
            }
        }
    }

    #[test]
    fn order_kind_parses() {
        assert_eq!("convex".parse::<OrderKind>().unwrap(), OrderKind::ConvexTransform);
        assert_eq!("st".parse::<OrderKind>().unwrap(), OrderKind::StochasticDominance);
        assert!("lr".parse::<OrderKind>().is_err());
        let json =
            serde_json::to_string(&OrderVerdict { relation: OrderKind::StarShaped, result: OrderResult::LessThan })
                .unwrap();
        assert_eq!(json, r#"{"relation":"star-shaped","result":"LessThan"}"#);
    }

    #[test]
    fn affine_map_through_points() {
        let l = AffineMap::through(0.25, 1.0, 0.75, 2.0);
        assert!((l.c - 2.0).abs() < 1e-15 && (l.d - 0.5).abs() < 1e-15);
        assert_eq!(AffineMap::IDENTITY.eval(0.3), 0.3);
    }
}
