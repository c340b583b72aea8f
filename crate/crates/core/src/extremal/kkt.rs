//! Kuhn–Tucker conditions for maximizing `F_0 = |ξ - z_{i0}|²` over `k = 1`
//! configurations in the closed unit disk.
//!
//! With `ξ - z_i = c_i e^{iθ_i}`, `c = ∏ c_i`, `θ = Σ θ_i` and multipliers
//! `λ_1 = λ cos θ_λ`, `λ_2 = λ sin θ_λ`, `η_i ≥ 0`, the Lagrangian is
//!
//! `F = F_0 - λ_1 Re f(ξ) - λ_2 Im f(ξ) - Σ η_i (|z_i|² - 1)`,
//! `f(z) = (z - ξ)^{m-1} - (1/n) Σ μ_i ω_i(z)`.
//!
//! Its partial derivatives in `a_i = Re z_i`, `b_i = Im z_i` are evaluated
//! in the trigonometric form; the complex form `n (∂F/∂a_i - i ∂F/∂b_i) / μ_i`
//! is evaluated independently from the zeros. The closed forms use
//! `f(ξ) = 0` and `(z - ξ)^{m-2} = 0` at `z = ξ`, hence `m ≥ 3`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_single_critical_point, tilde_mu, weighted_centroid};
use crate::cpoly::{critical_points_with, ZeroConfig};
use crate::error::{Error, Result};
use crate::tol::Tolerances;

/// Distance from the unit circle below which a zero counts as a boundary
/// zero.
const BOUNDARY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KKTState {
    pub lambda: f64,
    pub theta_lambda: f64,
    pub eta: Vec<f64>,
    /// `(c_i, θ_i)` with `ξ - z_i = c_i e^{iθ_i}`.
    pub polar: Vec<(f64, f64)>,
    pub c: f64,
    pub theta: f64,
    pub i0: usize,
}

impl KKTState {
    /// Polar data from the weighted centroid of `config`.
    pub fn new(config: &ZeroConfig, lambda: f64, theta_lambda: f64, eta: Vec<f64>, i0: usize) -> Result<Self> {
        let xi = weighted_centroid(config)?;
        let polar: Vec<(f64, f64)> = config
            .locations()
            .map(|z| {
                let d = xi - z;
                (d.norm(), d.arg())
            })
            .collect();
        let state = Self {
            lambda,
            theta_lambda,
            eta,
            c: polar.iter().map(|p| p.0).product(),
            theta: polar.iter().map(|p| p.1).sum(),
            polar,
            i0,
        };
        state.validate(config)?;
        Ok(state)
    }

    pub fn lambda_components(&self) -> (f64, f64) {
        (self.lambda * self.theta_lambda.cos(), self.lambda * self.theta_lambda.sin())
    }

    pub fn validate(&self, config: &ZeroConfig) -> Result<()> {
        let m = config.distinct();
        if self.eta.len() != m || self.polar.len() != m {
            return Err(Error::contract(format!("a KKT state for m = {m} needs m multipliers and polar pairs")));
        }
        if self.i0 >= m {
            return Err(Error::contract(format!("i0 = {} out of range", self.i0)));
        }
        if config.zeros()[self.i0].multiplicity != 1 {
            return Err(Error::contract("the reference zero z_{i0} must be simple"));
        }
        if !(self.lambda >= 0.0) || self.eta.iter().any(|e| !(*e >= 0.0)) {
            return Err(Error::contract("multipliers λ and η_i must be nonnegative"));
        }
        let xi = weighted_centroid(config)?;
        for (i, (z, &(ci, ti))) in config.locations().zip(&self.polar).enumerate() {
            if ci <= 0.0 {
                return Err(Error::contract(format!("c_{i} = 0: z_{i} coincides with ξ")));
            }
            if (Complex64::from_polar(ci, ti) - (xi - z)).norm() > 1e-12 * (1.0 + ci) {
                return Err(Error::contract(format!("polar pair {i} does not reconstruct ξ - z_{i}")));
            }
            let slack = self.eta[i] * (z.norm_sqr() - 1.0);
            if slack.abs() > 1e-10 {
                return Err(Error::contract(format!("complementary slackness fails at {i}: {slack:e}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KktResidual {
    /// `(∂F/∂a_1, ∂F/∂b_1, …, ∂F/∂a_m, ∂F/∂b_m)` in trigonometric form.
    pub eq1: Vec<f64>,
    /// Complex form, one entry per zero.
    pub eq34: Vec<Complex64>,
    /// Consolidated form: for `i ≠ i0` the difference of the two sides
    /// equated with the reference expression, for `i0` the reference
    /// expression plus `(λ/2) e^{-iθ_λ} ∏ (ξ - z_j)`.
    pub eq2: Vec<Complex64>,
    /// `max_i |n (eq1_a - i eq1_b) / μ_i - eq34_i|`.
    pub dual_mismatch: f64,
    /// `z_{i0}` lies on the unit circle, so `η_{i0}` need not vanish.
    pub reference_on_boundary: bool,
}

impl KktResidual {
    pub fn max_eq1(&self) -> f64 {
        self.eq1.iter().fold(0.0f64, |a, b| a.max(b.abs()))
    }
}

struct Geometry {
    xi: Complex64,
    z: Vec<Complex64>,
    mu: Vec<f64>,
    tilde: Vec<f64>,
    n: f64,
}

impl Geometry {
    fn new(config: &ZeroConfig) -> Result<Self> {
        if config.distinct() < 3 {
            return Err(Error::contract("the Kuhn–Tucker system needs m ≥ 3"));
        }
        let crit = critical_points_with(config, &Tolerances::default())?;
        check_single_critical_point(config, &crit)?;
        Ok(Self {
            xi: weighted_centroid(config)?,
            z: config.locations().collect(),
            mu: config.multiplicities().map(f64::from).collect(),
            tilde: tilde_mu(config),
            n: config.degree() as f64,
        })
    }

    /// Coefficient of `(ξ̄ - z̄_{i0})` scaled by `n`: `2μ̃_i` or `2μ̃_{i0} - 2n`.
    fn base(&self, i: usize, i0: usize) -> f64 {
        2.0 * self.tilde[i] - if i == i0 { 2.0 * self.n } else { 0.0 }
    }

    fn eq1(&self, state: &KKTState, lambda: (f64, f64), eta: &[f64]) -> Vec<f64> {
        let (l1, l2) = lambda;
        let (c0, t0) = state.polar[state.i0];
        let mut out = Vec::with_capacity(2 * self.z.len());
        for (i, &(ci, ti)) in state.polar.iter().enumerate() {
            let base = self.base(i, state.i0) / self.n;
            let w = state.c * self.mu[i] / (self.n * ci * ci);
            let phi = state.theta - 2.0 * ti;
            let (a, b) = (self.z[i].re, self.z[i].im);
            out.push(base * c0 * t0.cos() + w * (l1 * phi.cos() + l2 * phi.sin()) - 2.0 * eta[i] * a);
            out.push(base * c0 * t0.sin() + w * (-l1 * phi.sin() + l2 * phi.cos()) - 2.0 * eta[i] * b);
        }
        out
    }
}

pub fn kkt_residual(config: &ZeroConfig, state: &KKTState) -> Result<KktResidual> {
    state.validate(config)?;
    let g = Geometry::new(config)?;
    let i0 = state.i0;
    let eq1 = g.eq1(state, state.lambda_components(), &state.eta);

    let prod: Complex64 = g.z.iter().map(|z| g.xi - z).product();
    let rot = Complex64::from_polar(state.lambda, -state.theta_lambda);
    let d0 = (g.xi - g.z[i0]).conj();
    let eq34: Vec<Complex64> = (0..g.z.len())
        .map(|i| {
            let d = g.xi - g.z[i];
            rot * prod / (d * d) + d0 * (g.base(i, i0) / g.mu[i]) - g.z[i].conj() * (2.0 * g.n * state.eta[i] / g.mu[i])
        })
        .collect();

    let dual_mismatch = (0..g.z.len())
        .map(|i| {
            let from_eq1 = Complex64::new(eq1[2 * i], -eq1[2 * i + 1]) * (g.n / g.mu[i]);
            (from_eq1 - eq34[i]).norm()
        })
        .fold(0.0, f64::max);

    let e0 = g.xi - g.z[i0];
    let reference = e0 * e0 * ((g.tilde[i0] - g.n) * d0 - g.z[i0].conj() * (g.n * state.eta[i0]));
    let eq2 = (0..g.z.len())
        .map(|i| {
            if i == i0 {
                reference + rot * prod * 0.5
            } else {
                let d = g.xi - g.z[i];
                d * d * (d0 * (g.tilde[i] / g.mu[i]) - g.z[i].conj() * (g.n * state.eta[i] / g.mu[i])) - reference
            }
        })
        .collect();

    Ok(KktResidual {
        eq1,
        eq34,
        eq2,
        dual_mismatch,
        reference_on_boundary: (g.z[i0].norm() - 1.0).abs() <= BOUNDARY_TOL,
    })
}

/// `F` at zero locations `point`, with the constraint evaluated at the fixed
/// `z = ξ` of `config` and the multipliers of `state`. `ξ` inside `F_0` and
/// `f` follows `point` through the weighted-centroid formula.
pub fn lagrangian(config: &ZeroConfig, state: &KKTState, point: &[Complex64]) -> Result<f64> {
    let m = config.distinct();
    if point.len() != m {
        return Err(Error::contract(format!("expected {m} zero locations")));
    }
    let z_fixed = weighted_centroid(config)?;
    let n = config.degree() as f64;
    let mu: Vec<f64> = config.multiplicities().map(f64::from).collect();
    let tilde = tilde_mu(config);
    let xi: Complex64 = point.iter().zip(&tilde).map(|(z, w)| z * w).sum::<Complex64>() / n;
    let f0 = (xi - point[state.i0]).norm_sqr();
    let mut sum = Complex64::new(0.0, 0.0);
    for i in 0..m {
        let omega: Complex64 = (0..m).filter(|&j| j != i).map(|j| z_fixed - point[j]).product();
        sum += omega * mu[i];
    }
    let f = (z_fixed - xi).powu(m as u32 - 1) - sum / n;
    let (l1, l2) = state.lambda_components();
    let penalty: f64 = point.iter().zip(&state.eta).map(|(z, e)| e * (z.norm_sqr() - 1.0)).sum();
    Ok(f0 - l1 * f.re - l2 * f.im - penalty)
}

/// Least-squares multipliers for the trigonometric system at a fixed `i0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplierFit {
    pub lambda: f64,
    pub theta_lambda: f64,
    pub eta: Vec<f64>,
    /// `max |eq1|` at the fitted multipliers.
    pub residual: f64,
    /// `max |eq1|` with all multipliers zero.
    pub scale: f64,
    /// η's that the unconstrained fit wanted negative and were pinned at 0.
    pub pinned: Vec<usize>,
    /// The residual vanishes (relative `1e-8`) with nonnegative multipliers.
    pub consistent: bool,
}

/// Fits `λ_1, λ_2` and the `η_i` of boundary zeros (interior zeros have
/// `η_i = 0` by complementary slackness), keeping `η ≥ 0` by an active set.
pub fn fit_multipliers(config: &ZeroConfig, i0: usize) -> Result<MultiplierFit> {
    let m = config.distinct();
    let probe = KKTState::new(config, 0.0, 0.0, vec![0.0; m], i0)?;
    let g = Geometry::new(config)?;
    let boundary: Vec<usize> = (0..m).filter(|&i| (g.z[i].norm() - 1.0).abs() <= BOUNDARY_TOL).collect();

    let zero_eta = vec![0.0; m];
    let g0 = DVector::from_vec(g.eq1(&probe, (0.0, 0.0), &zero_eta));
    let column = |lambda: (f64, f64), eta: &[f64]| DVector::from_vec(g.eq1(&probe, lambda, eta)) - &g0;
    let mut cols = vec![column((1.0, 0.0), &zero_eta), column((0.0, 1.0), &zero_eta)];
    for &i in &boundary {
        let mut e = zero_eta.clone();
        e[i] = 1.0;
        cols.push(column((0.0, 0.0), &e));
    }

    let mut active: Vec<usize> = (0..boundary.len()).collect();
    let mut pinned = Vec::new();
    let x = loop {
        let idx: Vec<usize> = [0, 1].into_iter().chain(active.iter().map(|a| a + 2)).collect();
        let a = DMatrix::from_columns(&idx.iter().map(|&k| cols[k].clone()).collect::<Vec<_>>());
        let sol = a
            .svd(true, true)
            .solve(&(-&g0), 1e-14)
            .map_err(|e| Error::contract(format!("least squares failed: {e}")))?;
        let worst = active
            .iter()
            .enumerate()
            .filter(|(p, _)| sol[p + 2] < 0.0)
            .min_by(|a, b| sol[a.0 + 2].total_cmp(&sol[b.0 + 2]));
        match worst {
            Some((p, &b)) => {
                pinned.push(boundary[b]);
                active.remove(p);
            }
            None => {
                let mut full = vec![0.0; 2 + boundary.len()];
                for (p, &k) in idx.iter().enumerate() {
                    full[k] = sol[p];
                }
                break full;
            }
        }
    };

    let mut eta = vec![0.0; m];
    for (p, &i) in boundary.iter().enumerate() {
        eta[i] = x[2 + p];
    }
    let fitted = g.eq1(&probe, (x[0], x[1]), &eta);
    let residual = fitted.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    let scale = g0.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    pinned.sort_unstable();
    Ok(MultiplierFit {
        lambda: x[0].hypot(x[1]),
        theta_lambda: x[1].atan2(x[0]).rem_euclid(std::f64::consts::TAU),
        eta,
        residual,
        scale,
        consistent: residual <= 1e-8 * scale.max(1.0),
        pinned,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Zeros of `(z - a)³ + b`; `a` is a double critical point.
    fn cubic_k1(a: Complex64, b: Complex64) -> ZeroConfig {
        let r = (-b).powf(1.0 / 3.0);
        let pts: Vec<Complex64> = (0..3)
            .map(|k| a + r * Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 3.0))
            .collect();
        ZeroConfig::simple(&pts).unwrap()
    }

    #[test]
    fn zero_multipliers_give_objective_gradient() {
        let cfg = cubic_k1(c(0.1, -0.2), c(0.3, 0.1));
        let m = 3;
        let i0 = 1;
        let state = KKTState::new(&cfg, 0.0, 0.0, vec![0.0; m], i0).unwrap();
        let r = kkt_residual(&cfg, &state).unwrap();
        let xi = weighted_centroid(&cfg).unwrap();
        let z: Vec<Complex64> = cfg.locations().collect();
        let d0 = xi - z[i0];
        for i in 0..m {
            // μ̃_i = 1, n = 3.
            let w = if i == i0 { -4.0 / 3.0 } else { 2.0 / 3.0 };
            assert!((r.eq1[2 * i] - w * d0.re).abs() < 1e-14);
            assert!((r.eq1[2 * i + 1] - w * d0.im).abs() < 1e-14);
        }
        assert!(r.dual_mismatch < 1e-14);
    }

    #[test]
    fn residual_is_the_lagrangian_gradient() {
        let cfg = cubic_k1(c(0.05, 0.1), c(-0.2, 0.35));
        let state = KKTState::new(&cfg, 0.7, 1.3, vec![0.0; 3], 2).unwrap();
        let r = kkt_residual(&cfg, &state).unwrap();
        let base: Vec<Complex64> = cfg.locations().collect();
        let h = 1e-6;
        for i in 0..3 {
            for (part, dir) in [(0, c(h, 0.0)), (1, c(0.0, h))] {
                let mut plus = base.clone();
                let mut minus = base.clone();
                plus[i] += dir;
                minus[i] -= dir;
                let fd = (lagrangian(&cfg, &state, &plus).unwrap() - lagrangian(&cfg, &state, &minus).unwrap()) / (2.0 * h);
                assert!((fd - r.eq1[2 * i + part]).abs() < 1e-7 * (1.0 + fd.abs()), "{fd} vs {}", r.eq1[2 * i + part]);
            }
        }
    }

    #[test]
    fn small_m_and_wrong_stratum_are_rejected() {
        let two = ZeroConfig::simple(&[c(0.5, 0.0), c(-0.5, 0.0)]).unwrap();
        let s2 = KKTState::new(&two, 0.0, 0.0, vec![0.0; 2], 0).unwrap();
        assert!(matches!(kkt_residual(&two, &s2), Err(Error::Contract(_))));
        let generic = ZeroConfig::simple(&[c(0.5, 0.0), c(-0.5, 0.0), c(0.0, 0.7)]).unwrap();
        let sg = KKTState::new(&generic, 0.0, 0.0, vec![0.0; 3], 0).unwrap();
        assert!(matches!(kkt_residual(&generic, &sg), Err(Error::Contract(_))));
    }

    #[test]
    fn slackness_is_enforced() {
        let cfg = cubic_k1(c(0.0, 0.0), c(0.125, 0.0));
        assert!(matches!(KKTState::new(&cfg, 0.0, 0.0, vec![1.0, 0.0, 0.0], 0), Err(Error::Contract(_))));
    }

    #[test]
    fn roots_of_unity_fit_is_recorded() {
        let cfg = ZeroConfig::roots_of_unity(5).unwrap();
        let fit = fit_multipliers(&cfg, 0).unwrap();
        assert!(fit.eta.iter().all(|e| *e >= 0.0));
        assert!(fit.residual <= fit.scale + 1e-15);
    }
}
