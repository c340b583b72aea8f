//! Complex polynomials given by their zeros.
//!
//! A polynomial is always described by a [`ZeroConfig`]: distinct locations
//! with multiplicities. The expanded coefficient form ([`PolyCoeffs`]) is an
//! internal representation used by the root finder and as a cross-check for
//! derivative evaluation.

mod coeffs;
mod config;
mod critical;
mod roots;

pub use coeffs::{expand, PolyCoeffs};
pub use config::{transform, Zero, ZeroConfig};
pub use critical::{critical_points, critical_points_with, reduced_derivative, CriticalPoint, CriticalSet};
pub use roots::{roots, roots_with, RootCluster, Roots};

use num_complex::Complex64;

/// A point of the complex plane. Public operations reject non-finite values.
pub type ComplexPoint = Complex64;

pub(crate) fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Taylor coefficients at `h = 0` of `∏ (d + h)^μ`, truncated after `order`.
///
/// Each factor is given as `(d, μ)`. Working on the factored form keeps high
/// multiplicities exact where expansion would lose digits.
pub(crate) fn taylor_product<I>(factors: I, order: usize) -> Vec<Complex64>
where
    I: IntoIterator<Item = (Complex64, u32)>,
{
    let mut acc = vec![Complex64::new(0.0, 0.0); order + 1];
    acc[0] = Complex64::new(1.0, 0.0);
    let mut factor = vec![Complex64::new(0.0, 0.0); order + 1];
    for (d, mult) in factors {
        if mult == 0 {
            continue;
        }
        let mult = mult as usize;
        let top = mult.min(order);
        // (d + h)^μ = Σ_k C(μ,k) d^{μ-k} h^k
        let mut binom = 1.0;
        for (k, slot) in factor.iter_mut().enumerate() {
            *slot = if k <= top {
                let v = d.powu((mult - k) as u32) * binom;
                binom = binom * (mult - k) as f64 / (k + 1) as f64;
                v
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
        for i in (0..=order).rev() {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..=i.min(top) {
                s += acc[i - k] * factor[k];
            }
            acc[i] = s;
        }
    }
    acc
}

/// Converts Taylor coefficients into derivative values `p^(ℓ) = ℓ!·t_ℓ`.
pub(crate) fn taylor_to_derivatives(mut t: Vec<Complex64>) -> Vec<Complex64> {
    let mut f = 1.0;
    for (l, v) in t.iter_mut().enumerate() {
        if l > 0 {
            f *= l as f64;
        }
        *v *= f;
    }
    t
}

/// Evaluates `a[0] + a[1] z + …` and its derivative by Horner's rule.
pub(crate) fn horner_with_derivative(a: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in a.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Taylor coefficients of the coefficient polynomial `a` at `z`
/// (repeated synthetic division).
pub(crate) fn taylor_shift(a: &[Complex64], z: Complex64) -> Vec<Complex64> {
    let mut b = a.to_vec();
    let n = b.len().saturating_sub(1);
    for k in 0..n {
        for j in (k..n).rev() {
            let next = b[j + 1];
            b[j] += z * next;
        }
    }
    b
}

/// `Σ |a_k| r^k`, the scale against which rounding in `p(z)` is measured.
pub(crate) fn abs_horner(a: &[Complex64], r: f64) -> f64 {
    a.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
}
