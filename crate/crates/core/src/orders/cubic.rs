//! Exact sign patterns of polynomials of degree at most three.
//!
//! Between consecutive critical points a polynomial is monotone, so it changes
//! sign at most once there; its pattern on such a piece is the product of the
//! signs at the two ends. Critical points come from the quadratic formula, so
//! no root of the cubic itself is ever located.

use crate::signpattern::{Sign, SignPattern};

use super::lemma::LemmaCubic;

/// Sign pattern of `c3·x³ + c2·x² + c1·x + c0` on the open interval of the
/// lemma.
pub fn cubic_sign_pattern(cubic: &LemmaCubic) -> SignPattern {
    let (lo, hi) = cubic.interval;
    polynomial_sign_pattern([cubic.c0, cubic.c1, cubic.c2, cubic.c3], lo, hi)
}

/// Sign pattern on the open interval `(lo, hi)` of the polynomial with
/// coefficients `coeffs[k]` for `x^k`.
///
/// Leading zero coefficients reduce the degree; the zero polynomial and empty
/// intervals give the unit.
pub fn polynomial_sign_pattern(coeffs: [f64; 4], lo: f64, hi: f64) -> SignPattern {
    if !(lo < hi) {
        return SignPattern::UNIT;
    }
    let p = Poly(coeffs);
    if p.degree().is_none() {
        return SignPattern::UNIT;
    }
    let mut signs = vec![p.sign_right_of(lo)];
    signs.extend(p.critical_points().into_iter().filter(|&x| x > lo && x < hi).map(|x| Sign::of(p.eval(x))));
    signs.push(p.sign_left_of(hi));
    SignPattern::from_signs(signs)
}

#[derive(Clone, Copy)]
struct Poly([f64; 4]);

impl Poly {
    fn degree(&self) -> Option<usize> {
        (0..4).rev().find(|&k| self.0[k] != 0.0)
    }

    fn eval(&self, x: f64) -> f64 {
        let [c0, c1, c2, c3] = self.0;
        ((c3 * x + c2) * x + c1) * x + c0
    }

    /// Value of the `k`-th derivative at `x`.
    fn deriv(&self, k: usize, x: f64) -> f64 {
        let [_, c1, c2, c3] = self.0;
        match k {
            0 => self.eval(x),
            1 => (3.0 * c3 * x + 2.0 * c2) * x + c1,
            2 => 6.0 * c3 * x + 2.0 * c2,
            3 => 6.0 * c3,
            _ => 0.0,
        }
    }

    /// Sign of `p(x + h)` for small `h > 0`: the first nonzero Taylor term.
    fn sign_right_of(&self, x: f64) -> Sign {
        (0..4).map(|k| Sign::of(self.deriv(k, x))).find(|s| !s.is_zero()).unwrap_or(Sign::Zero)
    }

    /// Sign of `p(x - h)` for small `h > 0`.
    fn sign_left_of(&self, x: f64) -> Sign {
        (0..4)
            .map(|k| {
                let s = Sign::of(self.deriv(k, x));
                if k % 2 == 1 {
                    s.flip()
                } else {
                    s
                }
            })
            .find(|s| !s.is_zero())
            .unwrap_or(Sign::Zero)
    }

    /// Real roots of `p'`, ascending.
    fn critical_points(&self) -> Vec<f64> {
        let [_, c1, c2, c3] = self.0;
        quadratic_roots(3.0 * c3, 2.0 * c2, c1)
    }
}

/// Real roots of `a·x² + b·x + c`, ascending, by the cancellation-free form of
/// the quadratic formula.
fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a == 0.0 {
        return if b == 0.0 { Vec::new() } else { vec![-c / b] };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    if disc == 0.0 {
        return vec![-b / (2.0 * a)];
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let (r1, r2) = if q == 0.0 {
        // b == 0 and c == 0
        (0.0, 0.0)
    } else {
        (q / a, c / q)
    };
    let mut roots = vec![r1.min(r2), r1.max(r2)];
    roots.dedup();
    roots
}
