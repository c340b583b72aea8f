use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::coeffs::mul_linear;
use super::{roots_with, PolyCoeffs, ZeroConfig};
use crate::error::{Error, Result};
use crate::tol::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub location: Complex64,
    pub multiplicity: u32,
}

/// Distinct zeros of `p'`, split by whether they are also zeros of `p`.
///
/// First-kind points are the multiple zeros `z_i` (multiplicity `μ_i - 1`),
/// in the order of the configuration. Second-kind points `ξ_j` are sorted by
/// real part, then imaginary part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalSet {
    pub first_kind: Vec<CriticalPoint>,
    pub second_kind: Vec<CriticalPoint>,
}

impl CriticalSet {
    /// Number of distinct second-kind critical points.
    pub fn k(&self) -> usize {
        self.second_kind.len()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.first_kind
            .iter()
            .chain(&self.second_kind)
            .map(|c| c.multiplicity as usize)
            .sum()
    }

    /// All distinct critical points, first kind followed by second kind.
    pub fn all(&self) -> impl Iterator<Item = &CriticalPoint> {
        self.first_kind.iter().chain(&self.second_kind)
    }
}

/// `p'(z) / (n ∏ (z - z_i)^{μ_i - 1}) = (1/n) Σ μ_i ∏_{j≠i} (z - z_j)`, monic
/// of degree `m - 1`. Its zeros are exactly the second-kind critical points.
pub fn reduced_derivative(config: &ZeroConfig) -> PolyCoeffs {
    let zeros = config.zeros();
    let m = zeros.len();
    let n = config.degree() as f64;
    let mut acc = vec![Complex64::new(0.0, 0.0); m];
    for (i, zi) in zeros.iter().enumerate() {
        let mut omega = vec![Complex64::new(1.0, 0.0)];
        for (j, zj) in zeros.iter().enumerate() {
            if j != i {
                mul_linear(&mut omega, zj.location);
            }
        }
        let w = zi.multiplicity as f64 / n;
        for (a, o) in acc.iter_mut().zip(&omega) {
            *a += o * w;
        }
    }
    // Σ μ_i / n = 1, so the leading coefficient is one up to rounding.
    PolyCoeffs::from_coeffs(acc).expect("leading coefficient is one")
}

pub fn critical_points(config: &ZeroConfig) -> Result<CriticalSet> {
    critical_points_with(config, &Tolerances::default())
}

pub fn critical_points_with(config: &ZeroConfig, tol: &Tolerances) -> Result<CriticalSet> {
    if config.degree() < 2 {
        return Err(Error::contract("critical points need degree n ≥ 2"));
    }
    if config.degree() > tol.max_degree {
        return Err(Error::Capacity {
            degree: config.degree(),
            max: tol.max_degree,
        });
    }
    let first_kind = config
        .zeros()
        .iter()
        .filter(|z| z.multiplicity >= 2)
        .map(|z| CriticalPoint {
            location: z.location,
            multiplicity: z.multiplicity - 1,
        })
        .collect();

    let mut second_kind = Vec::new();
    if config.distinct() >= 2 {
        let r = roots_with(&reduced_derivative(config), tol)?;
        for cl in r.clusters {
            for (i, z) in config.zeros().iter().enumerate() {
                let d = (cl.location - z.location).norm();
                if d < tol.tau_sep {
                    return Err(Error::Degeneracy(format!(
                        "critical point {} lies within {:e} of zero {i} at {} (distance {d:e})",
                        cl.location, tol.tau_sep, z.location
                    )));
                }
            }
            second_kind.push(CriticalPoint {
                location: cl.location,
                multiplicity: cl.multiplicity as u32,
            });
        }
        second_kind.sort_by(|a, b| {
            a.location
                .re
                .total_cmp(&b.location.re)
                .then(a.location.im.total_cmp(&b.location.im))
        });
    }
    Ok(CriticalSet {
        first_kind,
        second_kind,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn symmetric_pair() {
        let cs = critical_points(&ZeroConfig::simple(&[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap()).unwrap();
        assert!(cs.first_kind.is_empty());
        assert_eq!(cs.k(), 1);
        assert!(cs.second_kind[0].location.norm() < 1e-15);
        assert_eq!(cs.second_kind[0].multiplicity, 1);
    }

    #[test]
    fn fifth_roots_of_unity() {
        let cs = critical_points(&ZeroConfig::roots_of_unity(5).unwrap()).unwrap();
        assert_eq!(cs.k(), 1);
        assert_eq!(cs.second_kind[0].multiplicity, 4);
        assert!(cs.second_kind[0].location.norm() < 1e-14);
    }

    #[test]
    fn double_zero_and_simple_zero() {
        let cfg = ZeroConfig::from_pairs(&[(c(0.0, 0.0), 2), (c(1.0, 0.0), 1)]).unwrap();
        let cs = critical_points(&cfg).unwrap();
        assert_eq!(cs.first_kind, vec![CriticalPoint { location: c(0.0, 0.0), multiplicity: 1 }]);
        assert_eq!(cs.k(), 1);
        assert!((cs.second_kind[0].location - c(2.0 / 3.0, 0.0)).norm() < 1e-15);
        assert_eq!(cs.total_multiplicity(), 2);
    }

    #[test]
    fn single_multiple_zero_has_no_second_kind() {
        let cfg = ZeroConfig::from_pairs(&[(c(0.0, 0.0), 2)]).unwrap();
        let cs = critical_points(&cfg).unwrap();
        assert_eq!(cs.k(), 0);
        assert_eq!(cs.total_multiplicity(), 1);
    }

    #[test]
    fn degree_one_is_rejected() {
        let cfg = ZeroConfig::simple(&[c(0.0, 0.0)]).unwrap();
        assert!(matches!(critical_points(&cfg), Err(Error::Contract(_))));
    }

    #[test]
    fn near_coincidence_is_a_degeneracy() {
        // μ = (1, 1, 1) at 0, 1, and ε; a critical point sits within ε/2 of 0.
        let eps = 4e-8;
        let cfg = ZeroConfig::with_tolerances(
            vec![
                crate::cpoly::Zero::new(c(0.0, 0.0), 1),
                crate::cpoly::Zero::new(c(eps, 0.0), 1),
                crate::cpoly::Zero::new(c(1.0, 0.0), 1),
            ],
            &Tolerances { tau_sep: 1e-9, ..Tolerances::default() },
        )
        .unwrap();
        assert!(matches!(critical_points(&cfg), Err(Error::Degeneracy(_))));
    }
}
