//! Half-plane certificates for zeros on the unit circle.
//!
//! After rotating so that `ξ - z_{i0}` is real and negative, a boundary zero
//! `z_i = e^{iγ_i}` with `ψ_1 = (ξ - z_i)²` and `ψ_2 = ψ_1 z̄_i` satisfies the
//! algebraic pair
//!
//! * `Im ψ_1 · Im ψ_2 < 0`,
//! * `Re ψ_1 < (Im ψ_1 / Im ψ_2) Re ψ_2`,
//!
//! exactly when the trigonometric pair in `θ_i = arg(ξ - z_i)` and `γ_i`
//! holds.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{centroid_xi, weighted_centroid};
use crate::cpoly::ZeroConfig;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlaneCert {
    pub psi1: Complex64,
    pub psi2: Complex64,
    pub theta: f64,
    pub gamma: f64,
    pub conv1: bool,
    /// `None` when `Im ψ_2 = 0`.
    pub conv2: Option<bool>,
    /// Trigonometric forms of the two inequalities.
    pub trig1: bool,
    pub trig2: Option<bool>,
}

impl HalfPlaneCert {
    /// Evaluates both forms from `ψ_1`, `ψ_2`; the angles are read off the
    /// arguments, `2θ = arg ψ_1` and `2θ - γ = arg ψ_2`.
    pub fn from_psi(psi1: Complex64, psi2: Complex64) -> Self {
        let two_theta = psi1.arg();
        let gamma = two_theta - psi2.arg();
        Self::evaluate(psi1, psi2, two_theta / 2.0, gamma)
    }

    /// Evaluates both forms for `ξ - z_i = c e^{iθ}`, `z_i = e^{iγ}`.
    pub fn from_angles(c: f64, theta: f64, gamma: f64) -> Self {
        let psi1 = Complex64::from_polar(c * c, 2.0 * theta);
        let psi2 = psi1 * Complex64::from_polar(1.0, -gamma);
        Self::evaluate(psi1, psi2, theta, gamma)
    }

    fn evaluate(psi1: Complex64, psi2: Complex64, theta: f64, gamma: f64) -> Self {
        let conv1 = psi1.im * psi2.im < 0.0;
        let conv2 = (psi2.im != 0.0).then(|| psi1.re < psi1.im / psi2.im * psi2.re);
        let (s1, s2) = ((2.0 * theta).sin(), (2.0 * theta - gamma).sin());
        let trig1 = s1 * s2 < 0.0;
        let trig2 = (s2 != 0.0).then(|| (2.0 * theta).cos() < s1 / s2 * (2.0 * theta - gamma).cos());
        Self {
            psi1,
            psi2,
            theta,
            gamma,
            conv1,
            conv2,
            trig1,
            trig2,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.conv2.is_none() || self.trig2.is_none()
    }

    /// Both algebraic inequalities hold.
    pub fn algebraic(&self) -> bool {
        self.conv1 && self.conv2 == Some(true)
    }

    /// Both trigonometric inequalities hold.
    pub fn trigonometric(&self) -> bool {
        self.trig1 && self.trig2 == Some(true)
    }

    pub fn forms_agree(&self) -> bool {
        self.algebraic() == self.trigonometric()
    }
}

/// Certificate for the boundary zero `i` against the reference zero `i0` of
/// a `k = 1` configuration.
pub fn halfplane_cert(config: &ZeroConfig, i: usize, i0: usize) -> Result<HalfPlaneCert> {
    let m = config.distinct();
    if i >= m || i0 >= m || i == i0 {
        return Err(Error::contract(format!("need distinct zero indices below {m}, got {i} and {i0}")));
    }
    centroid_xi(config)?;
    halfplane_cert_at(config, weighted_centroid(config)?, i, i0)
}

/// As [`halfplane_cert`] with a given `ξ`, skipping the stratum check.
pub fn halfplane_cert_at(config: &ZeroConfig, xi: Complex64, i: usize, i0: usize) -> Result<HalfPlaneCert> {
    let zeros = config.zeros();
    let (zi, z0) = match (zeros.get(i), zeros.get(i0)) {
        (Some(a), Some(b)) => (a.location, b.location),
        _ => return Err(Error::contract("zero index out of range")),
    };
    if (zi.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::contract(format!("z_{i} is not on the unit circle (|z| = {})", zi.norm())));
    }
    if xi == z0 {
        return Err(Error::contract("ξ coincides with the reference zero"));
    }
    // Rotate about 0 so that ξ - z_{i0} lies on the negative real axis.
    let rot = Complex64::from_polar(1.0, std::f64::consts::PI - (xi - z0).arg());
    let (xi, zi) = (xi * rot, zi * rot);
    let d = xi - zi;
    let psi1 = d * d;
    let psi2 = psi1 * zi.conj();
    Ok(HalfPlaneCert::evaluate(psi1, psi2, d.arg(), zi.arg()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn imaginary_pair() {
        let cert = HalfPlaneCert::from_psi(c(0.0, 1.0), c(0.0, -1.0));
        assert!(cert.conv1);
        assert!(cert.trig1);
    }

    #[test]
    fn hand_trigonometry() {
        // sin(2θ) = -1, sin(2θ - γ) = sin(3π/4) > 0.
        let cert = HalfPlaneCert::from_angles(1.0, 3.0 * PI / 4.0, 3.0 * PI / 4.0);
        assert!(cert.conv1 && cert.trig1);
        assert!(cert.forms_agree());
        // θ = 3π/4, γ = π/2 puts ψ_2 on the real axis.
        let cert = HalfPlaneCert::from_angles(1.0, 3.0 * PI / 4.0, PI / 2.0);
        assert!(cert.psi2.im.abs() < 1e-15);
        assert!((cert.psi1.im * cert.psi2.im).abs() < 1e-15);
    }

    #[test]
    fn perturbed_roots_of_unity() {
        let mut pts: Vec<Complex64> = (0..5).map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 5.0)).collect();
        pts[0] = c(0.9, 0.0);
        let cfg = ZeroConfig::simple(&pts).unwrap();
        // Not a k = 1 configuration, so use the weighted centroid directly.
        let xi = weighted_centroid(&cfg).unwrap();
        for i in 1..5 {
            let cert = halfplane_cert_at(&cfg, xi, i, 0).unwrap();
            assert!(cert.forms_agree(), "{cert:?}");
        }
        assert!(matches!(halfplane_cert(&cfg, 1, 0), Err(Error::Contract(_))));
    }

    #[test]
    fn interior_zero_is_rejected() {
        let cfg = ZeroConfig::simple(&[c(0.5, 0.0), c(-1.0, 0.0)]).unwrap();
        assert!(matches!(halfplane_cert_at(&cfg, c(-0.25, 0.0), 0, 1), Err(Error::Contract(_))));
    }
}
