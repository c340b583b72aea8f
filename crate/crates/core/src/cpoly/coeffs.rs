use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{is_finite, taylor_shift, taylor_to_derivatives, ZeroConfig};
use crate::error::{Error, Result};
use crate::tol::Tolerances;

/// Monic coefficient form, ascending powers: `c[0] + c[1] z + … + z^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyCoeffs {
    coeffs: Vec<Complex64>,
}

impl PolyCoeffs {
    /// Normalizes by the leading coefficient, which must be nonzero.
    pub fn from_coeffs(mut coeffs: Vec<Complex64>) -> Result<Self> {
        let lead = *coeffs
            .last()
            .ok_or_else(|| Error::contract("empty coefficient list"))?;
        if lead == Complex64::new(0.0, 0.0) {
            return Err(Error::contract("leading coefficient is zero"));
        }
        if coeffs.iter().any(|&c| !is_finite(c)) {
            return Err(Error::contract("coefficients must be finite"));
        }
        if lead != Complex64::new(1.0, 0.0) {
            for c in coeffs.iter_mut() {
                *c /= lead;
            }
        }
        *coeffs.last_mut().unwrap() = Complex64::new(1.0, 0.0);
        Ok(Self { coeffs })
    }

    /// Real coefficients, ascending.
    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::from_coeffs(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// `∏ (z - r)` over the given nodes.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            mul_linear(&mut coeffs, r);
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `q(z), q'(z), …, q^(max_order)(z)` by repeated synthetic division.
    pub fn derivatives_at(&self, z: Complex64, max_order: usize) -> Vec<Complex64> {
        let mut t = taylor_shift(&self.coeffs, z);
        t.resize(max_order + 1, Complex64::new(0.0, 0.0));
        taylor_to_derivatives(t)
    }

    /// Max-norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Multiplies `coeffs` in place by `(z - r)`.
pub(crate) fn mul_linear(coeffs: &mut Vec<Complex64>, r: Complex64) {
    coeffs.push(Complex64::new(0.0, 0.0));
    for j in (0..coeffs.len()).rev() {
        let lower = if j > 0 { coeffs[j - 1] } else { Complex64::new(0.0, 0.0) };
        coeffs[j] = lower - r * coeffs[j];
    }
}

/// Expands `∏ (z - z_i)^{μ_i}` into monic coefficients.
pub fn expand(config: &ZeroConfig) -> Result<PolyCoeffs> {
    expand_with(config, &Tolerances::default())
}

pub fn expand_with(config: &ZeroConfig, tol: &Tolerances) -> Result<PolyCoeffs> {
    if config.degree() > tol.max_degree {
        return Err(Error::Capacity {
            degree: config.degree(),
            max: tol.max_degree,
        });
    }
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    for z in config.zeros() {
        for _ in 0..z.multiplicity {
            mul_linear(&mut coeffs, z.location);
        }
    }
    Ok(PolyCoeffs { coeffs })
}
