use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{is_finite, taylor_product, taylor_to_derivatives};
use crate::error::{Error, Result};
use crate::tol::Tolerances;

/// One distinct zero `(z_i, μ_i)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Zero {
    pub location: Complex64,
    pub multiplicity: u32,
}

impl Zero {
    pub fn new(location: Complex64, multiplicity: u32) -> Self {
        Self {
            location,
            multiplicity,
        }
    }
}

/// The multiset of distinct zeros of `p(z) = ∏ (z - z_i)^{μ_i}`.
///
/// The order of the zeros is significant: the first `s = m - 1 - k` zeros are
/// the dependent ones when the configuration is used for implicit-function
/// computations. Nothing in the crate reorders a configuration silently.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Zero>", into = "Vec<Zero>")]
pub struct ZeroConfig {
    zeros: Vec<Zero>,
    degree: usize,
}

impl ZeroConfig {
    /// Validates with the default separation tolerance.
    pub fn new(zeros: Vec<Zero>) -> Result<Self> {
        Self::with_tolerances(zeros, &Tolerances::default())
    }

    pub fn with_tolerances(zeros: Vec<Zero>, tol: &Tolerances) -> Result<Self> {
        if zeros.is_empty() {
            return Err(Error::contract("a zero configuration needs at least one zero"));
        }
        for (i, z) in zeros.iter().enumerate() {
            if !is_finite(z.location) {
                return Err(Error::contract(format!("zero {i} is not finite")));
            }
            if z.multiplicity == 0 {
                return Err(Error::contract(format!("zero {i} has multiplicity 0")));
            }
        }
        for i in 0..zeros.len() {
            for j in i + 1..zeros.len() {
                let d = (zeros[i].location - zeros[j].location).norm();
                if d < tol.tau_sep {
                    return Err(Error::contract(format!(
                        "zeros {i} and {j} are closer than {:e} (distance {d:e})",
                        tol.tau_sep
                    )));
                }
            }
        }
        let degree = zeros.iter().map(|z| z.multiplicity as usize).sum();
        Ok(Self { zeros, degree })
    }

    /// Simple zeros at the given points.
    pub fn simple(points: &[Complex64]) -> Result<Self> {
        Self::new(points.iter().map(|&p| Zero::new(p, 1)).collect())
    }

    /// From `(location, multiplicity)` pairs.
    pub fn from_pairs(pairs: &[(Complex64, u32)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(z, m)| Zero::new(z, m)).collect())
    }

    /// The zeros of `z^n - 1`, in the order `e^{2π i (k-1)/n}`, `k = 1..n`.
    pub fn roots_of_unity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::contract("roots of unity need n ≥ 1"));
        }
        let pts: Vec<_> = (0..n)
            .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64))
            .collect();
        Self::simple(&pts)
    }

    pub fn zeros(&self) -> &[Zero] {
        &self.zeros
    }

    /// Total degree `n = Σ μ_i`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of distinct zeros `m`.
    pub fn distinct(&self) -> usize {
        self.zeros.len()
    }

    pub fn locations(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.zeros.iter().map(|z| z.location)
    }

    pub fn multiplicities(&self) -> impl Iterator<Item = u32> + '_ {
        self.zeros.iter().map(|z| z.multiplicity)
    }

    /// `p(z), p'(z), …, p^(max_order)(z)` from the product form.
    pub fn eval_derivatives(&self, z: Complex64, max_order: usize) -> Result<Vec<Complex64>> {
        if max_order > self.degree {
            return Err(Error::contract(format!(
                "derivative order {max_order} exceeds degree {}",
                self.degree
            )));
        }
        if !is_finite(z) {
            return Err(Error::contract("evaluation point is not finite"));
        }
        Ok(derivatives_from_factors(
            self.zeros.iter().map(|w| (w.location, w.multiplicity)),
            z,
            max_order,
        ))
    }

    /// `p(z)` from the product form.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.zeros
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, w| acc * (z - w.location).powu(w.multiplicity))
    }
}

/// Derivatives of `∏ (z - z_i)^{μ_i}` at `z` up to `max_order`.
pub(crate) fn derivatives_from_factors<I>(factors: I, z: Complex64, max_order: usize) -> Vec<Complex64>
where
    I: IntoIterator<Item = (Complex64, u32)>,
{
    let t = taylor_product(factors.into_iter().map(|(w, m)| (z - w, m)), max_order);
    taylor_to_derivatives(t)
}

impl TryFrom<Vec<Zero>> for ZeroConfig {
    type Error = Error;

    fn try_from(zeros: Vec<Zero>) -> Result<Self> {
        ZeroConfig::new(zeros)
    }
}

impl From<ZeroConfig> for Vec<Zero> {
    fn from(c: ZeroConfig) -> Self {
        c.zeros
    }
}

/// Maps every zero by `z ↦ scale·e^{i·rotation}·z + shift`.
pub fn transform(config: &ZeroConfig, rotation: f64, scale: f64, shift: Complex64) -> Result<ZeroConfig> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::contract(format!("scale must be positive, got {scale}")));
    }
    if !rotation.is_finite() || !is_finite(shift) {
        return Err(Error::contract("rotation and shift must be finite"));
    }
    let factor = Complex64::from_polar(scale, rotation);
    ZeroConfig::new(
        config
            .zeros
            .iter()
            .map(|z| Zero::new(factor * z.location + shift, z.multiplicity))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ZeroConfig::new(vec![]).is_err());
        assert!(ZeroConfig::new(vec![Zero::new(c(f64::NAN, 0.0), 1)]).is_err());
        assert!(ZeroConfig::new(vec![Zero::new(c(0.0, 0.0), 0)]).is_err());
        assert!(ZeroConfig::from_pairs(&[(c(0.0, 0.0), 1), (c(1e-9, 0.0), 1)]).is_err());
    }

    #[test]
    fn derivatives_of_difference_of_squares() {
        let cfg = ZeroConfig::simple(&[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let d = cfg.eval_derivatives(c(0.0, 0.0), 2).unwrap();
        assert_eq!(d, vec![c(-1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)]);
        assert!(cfg.eval_derivatives(c(0.0, 0.0), 3).is_err());
    }

    #[test]
    fn derivatives_of_fifth_roots_at_origin() {
        let cfg = ZeroConfig::roots_of_unity(5).unwrap();
        let d = cfg.eval_derivatives(c(0.0, 0.0), 4).unwrap();
        assert!((d[0] - c(-1.0, 0.0)).norm() < 1e-14);
        for v in &d[1..] {
            assert!(v.norm() < 1e-13, "{v}");
        }
    }

    #[test]
    fn derivative_vanishes_at_two_thirds() {
        // p = z^2 (z - 1), p' = z (3z - 2)
        let cfg = ZeroConfig::from_pairs(&[(c(0.0, 0.0), 2), (c(1.0, 0.0), 1)]).unwrap();
        let z = c(2.0 / 3.0, 0.0);
        let d = cfg.eval_derivatives(z, 1).unwrap();
        assert!((d[0] - c(4.0 / 9.0 * (-1.0 / 3.0), 0.0)).norm() < 1e-15);
        assert!(d[1].norm() < 1e-15);
    }

    #[test]
    fn transform_examples() {
        let cfg = ZeroConfig::simple(&[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let r = transform(&cfg, std::f64::consts::FRAC_PI_2, 1.0, c(0.0, 0.0)).unwrap();
        assert!((r.zeros()[0].location - c(0.0, 1.0)).norm() < 1e-15);
        assert!((r.zeros()[1].location - c(0.0, -1.0)).norm() < 1e-15);
        let s = transform(&cfg, 0.0, 2.0, c(0.0, 0.0)).unwrap();
        assert_eq!(s.zeros()[0].location, c(2.0, 0.0));
        assert_eq!(s.zeros()[1].location, c(-2.0, 0.0));
        assert!(transform(&cfg, 0.0, 0.0, c(0.0, 0.0)).is_err());
        assert!(transform(&cfg, 0.0, -1.0, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn serde_validates() {
        let bad = vec![Zero::new(c(0.0, 0.0), 1), Zero::new(c(0.0, 0.0), 2)];
        assert!(ZeroConfig::try_from(bad).is_err());
    }
}
