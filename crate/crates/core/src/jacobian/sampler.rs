//! Random configurations in a prescribed stratum.
//!
//! Generic strata (all `ν_j = 1`) are open, so zeros drawn uniformly in the
//! unit disk land in them almost surely. Other strata have measure zero and
//! are constructed:
//!
//! * simple zeros (`μ̄ = 1^m`): pick the ξ's, integrate
//!   `m ∏ (z - ξ_j)^{ν_j}` and add a random constant; the zeros of the result
//!   have exactly the prescribed critical points;
//! * otherwise: fix the free zeros at random and solve the implicit system
//!   for the dependent zeros and the ξ's by damped Newton from random starts.
//!
//! Constructed draws are mapped by an affine change of variable so that the
//! zeros have centroid 0 and largest modulus 1. Strata are affine invariant,
//! and without this Newton tends to return tightly clustered configurations
//! whose singular values spread by powers of the cluster size.
//!
//! Every draw is checked against an independent classification by the root
//! finder before it is returned.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;

use super::ImplicitSystem;
use crate::cpoly::{critical_points, roots, CriticalPoint, CriticalSet, PolyCoeffs, Zero, ZeroConfig};
use crate::error::{Error, Result};
use crate::rng::uniform_disk;
use crate::strata::Structure;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerOptions {
    pub max_attempts: usize,
    /// Minimum distance between any two of the zeros and ξ's.
    pub min_separation: f64,
    /// All zeros and ξ's must lie in `|z| ≤ max_modulus`.
    pub max_modulus: f64,
}

impl Default for SamplerOptions {
    fn default() -> Self {
        Self {
            max_attempts: 5000,
            min_separation: 0.02,
            max_modulus: 3.0,
        }
    }
}

/// A configuration in a known stratum, with its critical set ordered like
/// the stratum's `ν̄`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPoint {
    pub config: ZeroConfig,
    pub crit: CriticalSet,
    pub structure: Structure,
}

impl SampledPoint {
    pub fn system(&self) -> ImplicitSystem {
        ImplicitSystem::from_parts(&self.config, &self.crit, self.structure.s())
    }
}

pub fn sample_stratum<R: Rng + ?Sized>(
    stratum: &Structure,
    rng: &mut R,
    opts: &SamplerOptions,
) -> Result<SampledPoint> {
    let generic = stratum.nu().iter().all(|&v| v == 1);
    let simple = stratum.mu().iter().all(|&v| v == 1);
    let mut last_reason = String::from("no attempt made");
    for _ in 0..opts.max_attempts {
        let candidate = if generic {
            draw_generic(stratum, rng)
        } else if simple {
            draw_by_integration(stratum, rng).and_then(normalize)
        } else {
            draw_by_newton(stratum, rng).and_then(normalize)
        };
        match candidate.and_then(|sys| accept(stratum, sys, opts)) {
            Ok(point) => return Ok(point),
            Err(reason) => last_reason = reason,
        }
    }
    Err(Error::SamplerExhausted {
        attempts: opts.max_attempts,
        reason: last_reason,
    })
}

type Attempt<T> = std::result::Result<T, String>;

fn draw_generic<R: Rng + ?Sized>(stratum: &Structure, rng: &mut R) -> Attempt<ImplicitSystem> {
    let zeros: Vec<(Complex64, u32)> = stratum.mu().iter().map(|&mu| (uniform_disk(rng, 1.0), mu)).collect();
    let config = ZeroConfig::new(zeros.iter().map(|&(z, m)| Zero::new(z, m)).collect()).map_err(|e| e.to_string())?;
    let crit = critical_points(&config).map_err(|e| e.to_string())?;
    if crit.k() != stratum.k() || crit.second_kind.iter().any(|c| c.multiplicity != 1) {
        return Err("generic draw fell outside the stratum".into());
    }
    Ok(ImplicitSystem::new(
        zeros,
        0,
        crit.second_kind.iter().map(|c| (c.location, 1)).collect(),
    ))
}

fn draw_by_integration<R: Rng + ?Sized>(stratum: &Structure, rng: &mut R) -> Attempt<ImplicitSystem> {
    let m = stratum.m();
    let xi: Vec<(Complex64, u32)> = stratum.nu().iter().map(|&nu| (uniform_disk(rng, 0.8), nu)).collect();
    let mut nodes = Vec::with_capacity(m - 1);
    for &(x, nu) in &xi {
        nodes.extend(std::iter::repeat_n(x, nu as usize));
    }
    let r = PolyCoeffs::from_roots(&nodes);
    // p = m ∫_0^z r + C
    let mut p = vec![uniform_disk(rng, 1.0)];
    for (k, c) in r.coeffs().iter().enumerate() {
        p.push(c * (m as f64 / (k + 1) as f64));
    }
    let p = PolyCoeffs::from_coeffs(p).map_err(|e| e.to_string())?;
    let found = roots(&p).map_err(|e| e.to_string())?;
    if found.clusters.len() != m {
        return Err("integrated polynomial has a repeated zero".into());
    }
    let mut zeros: Vec<(Complex64, u32)> = found.clusters.iter().map(|c| (c.location, 1)).collect();
    zeros.shuffle(rng);
    let mut sys = ImplicitSystem::new(zeros, stratum.s(), xi);
    for _ in 0..3 {
        sys.newton_step(1.0).ok_or("singular Jacobian while polishing")?;
    }
    Ok(sys)
}

fn draw_by_newton<R: Rng + ?Sized>(stratum: &Structure, rng: &mut R) -> Attempt<ImplicitSystem> {
    let zeros = stratum.mu().iter().map(|&mu| (uniform_disk(rng, 1.0), mu)).collect();
    let xi = stratum.nu().iter().map(|&nu| (uniform_disk(rng, 1.0), nu)).collect();
    let mut sys = ImplicitSystem::new(zeros, stratum.s(), xi);
    let target = 1e-13 * sys.poly_norm().max(1.0);
    let mut res = sys.residual_norm();
    for _ in 0..100 {
        if res <= target {
            // One more step to settle at rounding level.
            sys.newton_step(1.0).ok_or("singular Jacobian")?;
            return Ok(sys);
        }
        let mut damping = 1.0;
        loop {
            let mut trial = sys.clone();
            trial.newton_step(damping).ok_or("singular Jacobian")?;
            let r = trial.residual_norm();
            if r.is_finite() && r < res {
                sys = trial;
                res = r;
                break;
            }
            damping *= 0.5;
            if damping < 1.0 / 256.0 {
                return Err("newton stalled".into());
            }
        }
    }
    Err("newton did not converge".into())
}

/// `z ↦ (z - c)/r` with `c` the plain centroid of the zeros and `r` their
/// largest distance from it, followed by one Newton polish.
fn normalize(mut sys: ImplicitSystem) -> Attempt<ImplicitSystem> {
    let c = sys.zeros.iter().map(|z| z.0).sum::<Complex64>() / sys.zeros.len() as f64;
    let r = sys.zeros.iter().map(|z| (z.0 - c).norm()).fold(0.0, f64::max);
    if !(r > 0.0 && r.is_finite()) {
        return Err("degenerate configuration".into());
    }
    for z in sys.zeros.iter_mut().chain(sys.xi.iter_mut()) {
        z.0 = (z.0 - c) / r;
    }
    sys.newton_step(1.0).ok_or("singular Jacobian after normalization")?;
    Ok(sys)
}

fn accept(stratum: &Structure, sys: ImplicitSystem, opts: &SamplerOptions) -> Attempt<SampledPoint> {
    let (sep, _) = sys.min_separation();
    if sep < opts.min_separation {
        return Err(format!("separation {sep:e} below margin"));
    }
    if sys.zeros.iter().map(|z| z.0).chain(sys.xi.iter().map(|x| x.0)).any(|z| z.norm() > opts.max_modulus) {
        return Err("point outside the sampling window".into());
    }
    let scale = sys.poly_norm().max(1.0);
    let res = sys.residual_norm();
    if !(res <= 1e-10 * scale) {
        return Err(format!("system residual {res:e} too large"));
    }
    let config = sys.to_config().map_err(|e| e.to_string())?;

    // Independent check: the root finder must see the same stratum.
    let found = critical_points(&config).map_err(|e| e.to_string())?;
    if found.k() != stratum.k() {
        return Err("root finder disagrees on k".into());
    }
    for &(x, nu) in &sys.xi {
        let ok = found
            .second_kind
            .iter()
            .any(|c| c.multiplicity == nu && (c.location - x).norm() <= 1e-6);
        if !ok {
            return Err("root finder disagrees on a critical point".into());
        }
    }
    let crit = CriticalSet {
        first_kind: found.first_kind,
        second_kind: sys
            .xi
            .iter()
            .map(|&(location, multiplicity)| CriticalPoint { location, multiplicity })
            .collect(),
    };
    Ok(SampledPoint {
        config,
        crit,
        structure: stratum.clone(),
    })
}
