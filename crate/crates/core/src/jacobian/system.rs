use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::cpoly::{expand, taylor_product, taylor_to_derivatives, CriticalSet, Zero, ZeroConfig};
use crate::error::Result;

/// The implicit system `p^(ℓ)(ξ_j) = 0` at a point of its domain.
///
/// `zeros` holds the dependent zeros first (`s` of them) and the free zeros
/// after. The unknowns are the dependent zeros followed by the ξ's.
#[derive(Debug, Clone, PartialEq)]
pub struct ImplicitSystem {
    pub zeros: Vec<(Complex64, u32)>,
    pub s: usize,
    pub xi: Vec<(Complex64, u32)>,
}

fn ratio_derivs(factors: impl Iterator<Item = (Complex64, u32)>, x: Complex64, order: usize) -> Vec<Complex64> {
    taylor_to_derivatives(taylor_product(factors.map(|(w, m)| (x - w, m)), order))
}

impl ImplicitSystem {
    pub fn new(zeros: Vec<(Complex64, u32)>, s: usize, xi: Vec<(Complex64, u32)>) -> Self {
        Self { zeros, s, xi }
    }

    pub fn from_parts(config: &ZeroConfig, crit: &CriticalSet, s: usize) -> Self {
        Self {
            zeros: config.zeros().iter().map(|z| (z.location, z.multiplicity)).collect(),
            s,
            xi: crit.second_kind.iter().map(|c| (c.location, c.multiplicity)).collect(),
        }
    }

    /// Number of equations, `Σ ν_j`.
    pub fn size(&self) -> usize {
        self.xi.iter().map(|x| x.1 as usize).sum()
    }

    pub fn n_free(&self) -> usize {
        self.zeros.len() - self.s
    }

    pub fn unknowns(&self) -> DVector<Complex64> {
        DVector::from_iterator(
            self.s + self.xi.len(),
            self.zeros[..self.s].iter().chain(&self.xi).map(|x| x.0),
        )
    }

    pub fn set_unknowns(&mut self, u: &DVector<Complex64>) {
        for (i, v) in u.iter().enumerate() {
            if i < self.s {
                self.zeros[i].0 = *v;
            } else {
                self.xi[i - self.s].0 = *v;
            }
        }
    }

    pub fn perturb_unknown(&mut self, idx: usize, delta: Complex64) {
        if idx < self.s {
            self.zeros[idx].0 += delta;
        } else {
            self.xi[idx - self.s].0 += delta;
        }
    }

    pub fn free(&self) -> Vec<Complex64> {
        self.zeros[self.s..].iter().map(|z| z.0).collect()
    }

    pub fn set_free(&mut self, free: &[Complex64]) {
        for (slot, &v) in self.zeros[self.s..].iter_mut().zip(free) {
            slot.0 = v;
        }
    }

    /// `(p^(ℓ)(ξ_j))` in row order.
    pub fn residual(&self) -> DVector<Complex64> {
        let mut out = Vec::with_capacity(self.size());
        for &(x, nu) in &self.xi {
            let pd = ratio_derivs(self.zeros.iter().copied(), x, nu as usize);
            out.extend_from_slice(&pd[1..=nu as usize]);
        }
        DVector::from_vec(out)
    }

    pub fn residual_norm(&self) -> f64 {
        self.residual().iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Jacobians with respect to the unknowns and to the free zeros.
    pub fn jacobians(&self) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
        let size = self.size();
        let n_unknown = self.s + self.xi.len();
        let mut ju = DMatrix::zeros(size, n_unknown);
        let mut jf = DMatrix::zeros(size, self.n_free());
        let mut row0 = 0;
        for (j, &(x, nu)) in self.xi.iter().enumerate() {
            let nu = nu as usize;
            let pd = ratio_derivs(self.zeros.iter().copied(), x, nu + 1);
            for l in 1..=nu {
                ju[(row0 + l - 1, self.s + j)] = pd[l + 1];
            }
            for (i, &(_, mu)) in self.zeros.iter().enumerate() {
                // Ω_i = -μ_i ∏ (z - z_r)^{μ_r} / (z - z_i)
                let factors = self
                    .zeros
                    .iter()
                    .enumerate()
                    .map(|(r, &(w, m))| (w, if r == i { m - 1 } else { m }));
                let od = ratio_derivs(factors, x, nu);
                for l in 1..=nu {
                    let v = od[l] * -(mu as f64);
                    if i < self.s {
                        ju[(row0 + l - 1, i)] = v;
                    } else {
                        jf[(row0 + l - 1, i - self.s)] = v;
                    }
                }
            }
            row0 += nu;
        }
        (ju, jf)
    }

    /// Max-norm of the expanded coefficients of `p`.
    pub fn poly_norm(&self) -> f64 {
        self.to_config()
            .ok()
            .and_then(|c| expand(&c).ok())
            .map(|p| p.norm())
            .unwrap_or(1.0)
    }

    /// Smallest distance among zeros and ξ's, with a description of the pair.
    pub fn min_separation(&self) -> (f64, String) {
        let pts: Vec<(Complex64, String)> = self
            .zeros
            .iter()
            .enumerate()
            .map(|(i, z)| (z.0, format!("zero {i}")))
            .chain(self.xi.iter().enumerate().map(|(j, x)| (x.0, format!("xi {j}"))))
            .collect();
        let mut best = (f64::INFINITY, String::new());
        for a in 0..pts.len() {
            for b in a + 1..pts.len() {
                let d = (pts[a].0 - pts[b].0).norm();
                if d < best.0 {
                    best = (d, format!("{} and {}", pts[a].1, pts[b].1));
                }
            }
        }
        best
    }

    /// Zeros in internal order (dependent first).
    pub fn to_config(&self) -> Result<ZeroConfig> {
        ZeroConfig::new(self.zeros.iter().map(|&(z, m)| Zero::new(z, m)).collect())
    }

    /// One Newton step on the unknowns; returns the step's max-norm, or
    /// `None` when the Jacobian is singular.
    pub fn newton_step(&mut self, damping: f64) -> Option<f64> {
        let (ju, _) = self.jacobians();
        let f = self.residual();
        let delta = ju.lu().solve(&(-f))?;
        if delta.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return None;
        }
        let u = self.unknowns() + delta.clone() * Complex64::new(damping, 0.0);
        self.set_unknowns(&u);
        Some(delta.iter().map(|v| v.norm()).fold(0.0, f64::max) * damping)
    }
}
