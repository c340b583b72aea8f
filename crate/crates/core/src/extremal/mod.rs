//! Sendov's objective and the extremal machinery around it.
//!
//! `S(z̄) = max_i min_j |z_i - ζ_j|` ranges over all critical points `ζ_j`
//! of `p'`, while `S_ℓ = min_j |z_ℓ - ξ_j|` uses the second-kind points only.

mod cert;
mod disk;
mod kkt;
mod search;

pub use cert::{halfplane_cert, halfplane_cert_at, HalfPlaneCert};
pub use disk::{enclosing_disk, EnclosingDisk};
pub use kkt::{fit_multipliers, kkt_residual, lagrangian, KKTState, KktResidual, MultiplierFit};
pub use search::{
    local_search, local_search_with, monte_carlo, Finding, FindingKind, LocalSearchResult, MonteCarloResult,
    SearchOptions, REPORT_EPSILON, VIOLATION_EPSILON,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cpoly::{critical_points_with, CriticalSet, ZeroConfig};
use crate::error::{Error, Result};
use crate::tol::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SendovValue {
    pub value: f64,
    /// Index into the configuration's distinct zeros.
    pub attaining_zero_index: usize,
    /// For `S`, an index into [`CriticalSet::all`]; for `S_ℓ`, into the
    /// second-kind points.
    pub attaining_crit_index: usize,
}

pub fn sendov_s(config: &ZeroConfig) -> Result<SendovValue> {
    let crit = critical_points_with(config, &Tolerances::default())?;
    Ok(sendov_s_from(config, &crit))
}

/// `S` for a configuration whose critical set is already known.
pub fn sendov_s_from(config: &ZeroConfig, crit: &CriticalSet) -> SendovValue {
    let all: Vec<Complex64> = crit.all().map(|c| c.location).collect();
    let mut first_kind = 0;
    let mut best: Option<SendovValue> = None;
    for (i, z) in config.zeros().iter().enumerate() {
        let (value, j) = if z.multiplicity >= 2 {
            // A multiple zero is its own critical point.
            first_kind += 1;
            (0.0, first_kind - 1)
        } else {
            nearest(z.location, &all)
        };
        if best.is_none_or(|b| value > b.value) {
            best = Some(SendovValue {
                value,
                attaining_zero_index: i,
                attaining_crit_index: j,
            });
        }
    }
    best.expect("a configuration has at least one zero")
}

fn nearest(z: Complex64, points: &[Complex64]) -> (f64, usize) {
    points
        .iter()
        .enumerate()
        .map(|(j, w)| ((z - w).norm(), j))
        .fold((f64::INFINITY, 0), |a, b| if b.0 < a.0 { b } else { a })
}

pub fn sendov_s_ell(config: &ZeroConfig, ell: usize) -> Result<SendovValue> {
    let crit = critical_points_with(config, &Tolerances::default())?;
    sendov_s_ell_from(config, &crit, ell)
}

pub fn sendov_s_ell_from(config: &ZeroConfig, crit: &CriticalSet, ell: usize) -> Result<SendovValue> {
    let z = config
        .zeros()
        .get(ell)
        .ok_or_else(|| Error::contract(format!("zero index {ell} out of range")))?;
    if z.multiplicity != 1 {
        return Err(Error::contract(format!("S_ℓ needs a simple zero, z_{ell} has multiplicity {}", z.multiplicity)));
    }
    if crit.k() == 0 {
        return Err(Error::contract("S_ℓ needs at least one second-kind critical point"));
    }
    let xi: Vec<Complex64> = crit.second_kind.iter().map(|c| c.location).collect();
    let (value, j) = nearest(z.location, &xi);
    Ok(SendovValue {
        value,
        attaining_zero_index: ell,
        attaining_crit_index: j,
    })
}

/// `μ̃_i = (n - μ_i) / (m - 1)`.
pub fn tilde_mu(config: &ZeroConfig) -> Vec<f64> {
    let n = config.degree() as f64;
    let m = config.distinct() as f64;
    config.multiplicities().map(|mu| (n - mu as f64) / (m - 1.0)).collect()
}

/// `Σ μ̃_i z_i / n`, without checking the stratum.
pub fn weighted_centroid(config: &ZeroConfig) -> Result<Complex64> {
    if config.distinct() < 2 {
        return Err(Error::contract("the weighted centroid needs m ≥ 2"));
    }
    let n = config.degree() as f64;
    Ok(tilde_mu(config)
        .into_iter()
        .zip(config.locations())
        .map(|(w, z)| z * w)
        .sum::<Complex64>()
        / n)
}

/// The single second-kind critical point of a `k = 1` configuration, by the
/// weighted-centroid formula.
pub fn centroid_xi(config: &ZeroConfig) -> Result<Complex64> {
    let crit = critical_points_with(config, &Tolerances::default())?;
    check_single_critical_point(config, &crit)?;
    weighted_centroid(config)
}

pub(crate) fn check_single_critical_point(config: &ZeroConfig, crit: &CriticalSet) -> Result<()> {
    let m = config.distinct();
    if crit.k() != 1 || crit.second_kind[0].multiplicity as usize != m - 1 {
        return Err(Error::contract(format!(
            "expected one second-kind critical point of multiplicity {}, found {:?}",
            m.saturating_sub(1),
            crit.second_kind.iter().map(|c| c.multiplicity).collect::<Vec<_>>()
        )));
    }
    Ok(())
}
