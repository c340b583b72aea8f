//! The Jacobian of the implicit system `p^(ℓ)(ξ_j) = 0`, `ℓ = 1..ν_j`.
//!
//! Rows are the equations, ordered by `ξ_j` and then by `ℓ`. Columns are the
//! unknowns: the dependent zeros `z_1..z_s` followed by `ξ_1..ξ_k`. This is the
//! transpose of the block display usually written for this system.
//!
//! `∂p^(ℓ)(ξ_j)/∂z_i = Ω_i^(ℓ)(ξ_j)` with `Ω_i(z) = -μ_i p(z)/(z - z_i)`, and
//! `∂p^(ℓ)(ξ_j)/∂ξ_j = p^(ℓ+1)(ξ_j)`, which vanishes on the stratum except
//! for `ℓ = ν_j`.

mod sampler;
mod sweep;
mod system;

pub use sampler::{sample_stratum, SampledPoint, SamplerOptions};
pub use sweep::{rank_sweep, RankSweepReport, SweepRecord};
pub use system::ImplicitSystem;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cpoly::{CriticalSet, ZeroConfig};
use crate::error::{Error, Result};
use crate::strata::{structure_of, Structure};
use crate::tol::Tolerances;

/// `J` together with its singular values (descending).
#[derive(Debug, Clone, PartialEq)]
pub struct ImplicitJacobian {
    pub matrix: DMatrix<Complex64>,
    pub singular_values: Vec<f64>,
    /// Number of dependent-zero columns; the remaining columns belong to ξ.
    pub s: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankCertificate {
    pub rank: usize,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub threshold: f64,
}

impl RankCertificate {
    /// `σ_min / σ_max`, or 0 for an empty or zero matrix.
    pub fn ratio(&self) -> f64 {
        if self.sigma_max > 0.0 {
            self.sigma_min / self.sigma_max
        } else {
            0.0
        }
    }

    pub fn is_full(&self, size: usize) -> bool {
        self.rank == size
    }
}

impl ImplicitJacobian {
    /// Wraps an arbitrary square matrix (used for synthetic controls).
    pub fn from_matrix(matrix: DMatrix<Complex64>, s: usize) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::contract("the implicit Jacobian is square"));
        }
        let singular_values = singular_values(&matrix)?;
        Ok(Self {
            matrix,
            singular_values,
            s,
        })
    }

    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Singular values, descending.
pub fn singular_values(matrix: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    if matrix.is_empty() {
        return Ok(Vec::new());
    }
    let svd = matrix
        .clone()
        .try_svd(false, false, f64::EPSILON, 10_000)
        .ok_or(Error::SvdNonConvergence)?;
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    if sv.iter().any(|x| !x.is_finite()) {
        return Err(Error::SvdNonConvergence);
    }
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Checks that `crit` describes `config` and returns the stratum.
fn consistent_structure(config: &ZeroConfig, crit: &CriticalSet, tol: &Tolerances) -> Result<Structure> {
    let expected_first: Vec<_> = config
        .zeros()
        .iter()
        .filter(|z| z.multiplicity >= 2)
        .map(|z| (z.location, z.multiplicity - 1))
        .collect();
    let first: Vec<_> = crit.first_kind.iter().map(|c| (c.location, c.multiplicity)).collect();
    if first != expected_first {
        return Err(Error::contract("first-kind critical points do not match the zeros"));
    }
    for c in &crit.second_kind {
        for z in config.zeros() {
            if (c.location - z.location).norm() < tol.tau_sep {
                return Err(Error::contract("a second-kind point coincides with a zero"));
            }
        }
    }
    structure_of(config, crit).map_err(|e| Error::contract(format!("critical set inconsistent with zeros: {e}")))
}

pub fn assemble(config: &ZeroConfig, crit: &CriticalSet) -> Result<ImplicitJacobian> {
    assemble_with(config, crit, &Tolerances::default())
}

pub fn assemble_with(config: &ZeroConfig, crit: &CriticalSet, tol: &Tolerances) -> Result<ImplicitJacobian> {
    let structure = consistent_structure(config, crit, tol)?;
    let sys = ImplicitSystem::from_parts(config, crit, structure.s());
    let (matrix, _) = sys.jacobians();
    ImplicitJacobian::from_matrix(matrix, structure.s())
}

/// Rank relative to the default threshold `1e-10·σ_max`.
pub fn rank_certificate(j: &ImplicitJacobian) -> RankCertificate {
    rank_certificate_with(j, Tolerances::default().rank_threshold)
}

pub fn rank_certificate_with(j: &ImplicitJacobian, threshold: f64) -> RankCertificate {
    let sigma_max = j.singular_values.first().copied().unwrap_or(0.0);
    let sigma_min = j.singular_values.last().copied().unwrap_or(0.0);
    let rank = j
        .singular_values
        .iter()
        .filter(|&&s| s > threshold * sigma_max)
        .count();
    RankCertificate {
        rank,
        sigma_min,
        sigma_max,
        threshold,
    }
}

/// Central finite differences of the map (dependent zeros, ξ) ↦ system
/// residuals, step `h` along the real axis (the map is holomorphic).
pub fn finite_difference_jacobian(config: &ZeroConfig, crit: &CriticalSet, h: f64) -> Result<DMatrix<Complex64>> {
    let structure = consistent_structure(config, crit, &Tolerances::default())?;
    let base = ImplicitSystem::from_parts(config, crit, structure.s());
    let size = base.size();
    let mut fd = DMatrix::zeros(size, size);
    for col in 0..size {
        let mut plus = base.clone();
        let mut minus = base.clone();
        plus.perturb_unknown(col, Complex64::new(h, 0.0));
        minus.perturb_unknown(col, Complex64::new(-h, 0.0));
        let diff = (plus.residual() - minus.residual()) / Complex64::new(2.0 * h, 0.0);
        fd.set_column(col, &diff);
    }
    Ok(fd)
}

/// Largest entrywise deviation `|J - J_fd| / max(1, |J|)` for step `1e-6`.
pub fn verify_against_fd(config: &ZeroConfig, crit: &CriticalSet) -> Result<f64> {
    let j = assemble(config, crit)?;
    let fd = finite_difference_jacobian(config, crit, 1e-6)?;
    Ok(j
        .matrix
        .iter()
        .zip(fd.iter())
        .map(|(a, b)| (a - b).norm() / a.norm().max(1.0))
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cpoly::critical_points;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn symmetric_pair_is_diagonal_two() {
        let cfg = ZeroConfig::simple(&[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let crit = critical_points(&cfg).unwrap();
        let j = assemble(&cfg, &crit).unwrap();
        assert_eq!(j.size(), 1);
        assert!((j.matrix[(0, 0)] - c(2.0, 0.0)).norm() < 1e-14);
        let cert = rank_certificate(&j);
        assert_eq!(cert.rank, 1);
        assert!((cert.sigma_min - 2.0).abs() < 1e-14);
    }

    #[test]
    fn cube_roots_of_unity() {
        // s = 1, k = 1, ν = 2. Ω_1(z) = -(z² + z + 1): Ω_1'(0) = -1, Ω_1''(0) = -2,
        // p''(0) = 0, p'''(0) = 6.
        let cfg = ZeroConfig::roots_of_unity(3).unwrap();
        let crit = critical_points(&cfg).unwrap();
        let j = assemble(&cfg, &crit).unwrap();
        let expected = [[c(-1.0, 0.0), c(0.0, 0.0)], [c(-2.0, 0.0), c(6.0, 0.0)]];
        for r in 0..2 {
            for col in 0..2 {
                assert!((j.matrix[(r, col)] - expected[r][col]).norm() < 1e-12, "{r},{col}: {}", j.matrix[(r, col)]);
            }
        }
        assert_eq!(rank_certificate(&j).rank, 2);
        assert!(verify_against_fd(&cfg, &crit).unwrap() < 1e-5);
    }

    #[test]
    fn simple_stratum_is_diagonal_of_second_derivatives() {
        let cfg = ZeroConfig::simple(&[c(0.9, 0.1), c(-0.3, 0.7), c(-0.5, -0.6), c(0.2, -0.4), c(0.05, 0.3)]).unwrap();
        let crit = critical_points(&cfg).unwrap();
        assert_eq!(crit.k(), 4);
        let j = assemble(&cfg, &crit).unwrap();
        for (r, xi) in crit.second_kind.iter().enumerate() {
            let p2 = cfg.eval_derivatives(xi.location, 2).unwrap()[2];
            for col in 0..4 {
                let want = if r == col { p2 } else { c(0.0, 0.0) };
                assert!((j.matrix[(r, col)] - want).norm() <= 1e-12, "{r},{col}");
            }
        }
    }

    #[test]
    fn duplicated_column_is_rank_deficient() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(2.0, 1.0), c(2.0, 1.0)]);
        let j = ImplicitJacobian::from_matrix(m, 0).unwrap();
        let cert = rank_certificate(&j);
        assert!(cert.rank < 2);
        assert!(cert.ratio() < 1e-10);
    }

    #[test]
    fn inconsistent_critical_set_is_rejected() {
        let cfg = ZeroConfig::roots_of_unity(3).unwrap();
        let mut crit = critical_points(&cfg).unwrap();
        crit.second_kind[0].multiplicity = 1;
        assert!(matches!(assemble(&cfg, &crit), Err(Error::Contract(_))));
    }
}
