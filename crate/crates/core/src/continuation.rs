//! Predictor–corrector tracking of the implicit functions
//! `z_1..z_s, ξ_1..ξ_k` of the free zeros `z_{s+1}..z_m`.
//!
//! The predictor is the tangent step `J_u δu = -J_free δfree`; the corrector
//! is full Newton on the implicit system in the unknowns. Tracking stops at a
//! stratum boundary, detected either as a collapsed separation or as a
//! collapsed `σ_min / σ_max` of the Jacobian.

use nalgebra::DVector;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cpoly::{critical_points_with, CriticalSet, Zero, ZeroConfig};
use crate::error::{Error, Result};
use crate::jacobian::{singular_values, ImplicitSystem};
use crate::strata::{structure_of, Structure};
use crate::tol::Tolerances;

/// Relative Newton tolerance: `η_newton = NEWTON_TOL · max(1, ‖p‖)`.
pub const NEWTON_TOL: f64 = 1e-12;
/// Consecutive non-improving corrector iterations tolerated.
pub const BASIN_PATIENCE: usize = 25;
/// Corrector iteration cap.
pub const MAX_CORRECTOR_ITERATIONS: usize = 60;
pub const MIN_STEP: f64 = 1e-9;

/// A point of the stratum split into free and dependent coordinates.
///
/// `order[..s]` are the original indices of the dependent zeros and
/// `order[s..]` those of the free zeros.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImplicitState {
    pub free: Vec<Complex64>,
    pub dependent: Vec<Complex64>,
    pub crit: Vec<Complex64>,
    pub stratum: Structure,
    pub residual: f64,
    pub order: Vec<usize>,
}

impl ImplicitState {
    /// Classifies `config` and makes the last `k + 1` zeros free.
    pub fn from_config(config: &ZeroConfig) -> Result<Self> {
        Self::from_config_with(config, None, &Tolerances::default())
    }

    /// `free` lists the original indices of the free zeros (exactly `k + 1`
    /// of them); `None` selects the last `k + 1`.
    pub fn from_config_with(config: &ZeroConfig, free: Option<&[usize]>, tol: &Tolerances) -> Result<Self> {
        let crit = critical_points_with(config, tol)?;
        Self::from_parts(config, &crit, free)
    }

    /// Uses a known critical set; its second-kind order fixes the order of ν̄.
    pub fn from_parts(config: &ZeroConfig, crit: &CriticalSet, free: Option<&[usize]>) -> Result<Self> {
        let stratum = structure_of(config, crit)?;
        let m = stratum.m();
        let s = stratum.s();
        let order = match free {
            None => (0..m).collect::<Vec<_>>(),
            Some(f) => {
                if f.len() != m - s {
                    return Err(Error::contract(format!(
                        "{} free zeros given, the stratum has {}",
                        f.len(),
                        m - s
                    )));
                }
                let mut seen = vec![false; m];
                for &i in f {
                    if i >= m || std::mem::replace(&mut seen[i], true) {
                        return Err(Error::contract(format!("invalid free zero index {i}")));
                    }
                }
                (0..m).filter(|i| !seen[*i]).chain(f.iter().copied()).collect()
            }
        };
        let loc: Vec<Complex64> = config.locations().collect();
        let mut state = Self {
            free: order[s..].iter().map(|&i| loc[i]).collect(),
            dependent: order[..s].iter().map(|&i| loc[i]).collect(),
            crit: crit.second_kind.iter().map(|c| c.location).collect(),
            stratum,
            residual: 0.0,
            order,
        };
        state.residual = state.system().residual_norm();
        Ok(state)
    }

    pub fn s(&self) -> usize {
        self.dependent.len()
    }

    pub fn system(&self) -> ImplicitSystem {
        let mu = self.stratum.mu();
        let zeros = self
            .dependent
            .iter()
            .chain(&self.free)
            .zip(&self.order)
            .map(|(&z, &i)| (z, mu[i]))
            .collect();
        let xi = self.crit.iter().zip(self.stratum.nu()).map(|(&x, &nu)| (x, nu)).collect();
        ImplicitSystem::new(zeros, self.s(), xi)
    }

    fn absorb(&mut self, sys: &ImplicitSystem) {
        let s = self.s();
        for (slot, z) in self.dependent.iter_mut().zip(&sys.zeros[..s]) {
            *slot = z.0;
        }
        for (slot, x) in self.crit.iter_mut().zip(&sys.xi) {
            *slot = x.0;
        }
        self.residual = sys.residual_norm();
    }

    /// Zero locations in the original order.
    pub fn locations(&self) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.order.len()];
        for (&z, &i) in self.dependent.iter().chain(&self.free).zip(&self.order) {
            out[i] = z;
        }
        out
    }

    pub fn config(&self) -> Result<ZeroConfig> {
        ZeroConfig::new(
            self.locations()
                .into_iter()
                .zip(self.stratum.mu())
                .map(|(z, &mu)| Zero::new(z, mu))
                .collect(),
        )
    }

    /// The unknowns `(dependent, crit)` as one vector.
    pub fn unknowns(&self) -> Vec<Complex64> {
        self.dependent.iter().chain(&self.crit).copied().collect()
    }

    /// `η_newton` for the current polynomial.
    pub fn newton_tolerance(&self) -> f64 {
        NEWTON_TOL * self.system().poly_norm().max(1.0)
    }
}

fn check_boundary(sys: &ImplicitSystem, tol: &Tolerances) -> Result<()> {
    let (sep, pair) = sys.min_separation();
    if sep < tol.tau_sep {
        return Err(Error::Boundary(format!("separation of {pair} collapsed to {sep:e}")));
    }
    let (ju, _) = sys.jacobians();
    let sv = singular_values(&ju)?;
    let ratio = match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if hi > 0.0 => lo / hi,
        (Some(_), Some(_)) => 0.0,
        _ => 1.0,
    };
    if ratio < tol.rank_threshold {
        return Err(Error::Boundary(format!("Jacobian σ_min/σ_max collapsed to {ratio:e}")));
    }
    Ok(())
}

/// Newton on the unknowns until `residual ≤ η_newton`.
pub fn correct(state: &ImplicitState) -> Result<ImplicitState> {
    correct_with(state, &Tolerances::default())
}

pub fn correct_with(state: &ImplicitState, tol: &Tolerances) -> Result<ImplicitState> {
    run_corrector(state, tol, MAX_CORRECTOR_ITERATIONS, BASIN_PATIENCE)
}

fn run_corrector(state: &ImplicitState, tol: &Tolerances, max_iter: usize, patience: usize) -> Result<ImplicitState> {
    let mut sys = state.system();
    let eta = NEWTON_TOL * sys.poly_norm().max(1.0);
    let mut res = sys.residual_norm();
    check_boundary(&sys, tol)?;
    if res <= eta {
        let mut out = state.clone();
        out.residual = res;
        return Ok(out);
    }
    let mut best = res;
    let mut stale = 0;
    for it in 0..max_iter {
        if sys.newton_step(1.0).is_none() {
            return Err(Error::Boundary("singular Jacobian in the corrector".into()));
        }
        check_boundary(&sys, tol)?;
        res = sys.residual_norm();
        if !res.is_finite() {
            return Err(Error::Basin {
                iterations: it + 1,
                residual: res,
            });
        }
        if res <= eta {
            // One more step removes the last contraction error.
            let mut polished = sys.clone();
            if polished.newton_step(1.0).is_some() && polished.residual_norm() <= res {
                sys = polished;
            }
            let mut out = state.clone();
            out.absorb(&sys);
            return Ok(out);
        }
        if res < best {
            best = res;
            stale = 0;
        } else {
            stale += 1;
            if stale >= patience {
                return Err(Error::Basin {
                    iterations: it + 1,
                    residual: res,
                });
            }
        }
    }
    Err(Error::Basin {
        iterations: max_iter,
        residual: res,
    })
}

/// Piecewise linear path of the free zeros.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSpec {
    pub waypoints: Vec<Vec<Complex64>>,
    pub max_step: f64,
}

impl PathSpec {
    /// A straight segment from `from` to `to`.
    pub fn segment(from: Vec<Complex64>, to: Vec<Complex64>, max_step: f64) -> Self {
        Self {
            waypoints: vec![from, to],
            max_step,
        }
    }

    /// A closed polygonal loop moving free zero `index` around a circle.
    pub fn circle(start: &[Complex64], index: usize, radius: f64, vertices: usize, max_step: f64) -> Self {
        let centre = start[index] - radius;
        let waypoints = (0..=vertices)
            .map(|v| {
                let mut w = start.to_vec();
                let phase = std::f64::consts::TAU * v as f64 / vertices as f64;
                w[index] = centre + Complex64::from_polar(radius, phase);
                w
            })
            .collect();
        Self { waypoints, max_step }
    }

    fn validate(&self, n_free: usize) -> Result<()> {
        if !(self.max_step > 0.0 && self.max_step.is_finite()) {
            return Err(Error::contract("max_step must be positive and finite"));
        }
        if self.waypoints.is_empty() {
            return Err(Error::contract("a path needs at least one waypoint"));
        }
        for (w, p) in self.waypoints.iter().enumerate() {
            if p.len() != n_free {
                return Err(Error::contract(format!(
                    "waypoint {w} has {} coordinates, expected {n_free}",
                    p.len()
                )));
            }
            if p.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
                return Err(Error::contract(format!("waypoint {w} is not finite")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StopReason {
    Completed,
    Boundary { message: String },
    MinStep { min_step: f64 },
}

impl StopReason {
    pub fn is_completed(&self) -> bool {
        matches!(self, StopReason::Completed)
    }

    pub fn to_error(&self) -> Option<Error> {
        match self {
            StopReason::Completed => None,
            StopReason::Boundary { message } => Some(Error::Boundary(message.clone())),
            StopReason::MinStep { min_step } => Some(Error::MinStep { min_step: *min_step }),
        }
    }
}

/// One accepted state. `t` runs from 0 to the number of segments; its
/// integer part is the segment index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub state: ImplicitState,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
    pub stop: StopReason,
}

impl Trajectory {
    pub fn last(&self) -> &ImplicitState {
        &self.points.last().expect("a trajectory holds its start").state
    }

    /// `Ok(self)` when the final waypoint was reached.
    pub fn into_result(self) -> Result<Self> {
        match self.stop.to_error() {
            None => Ok(self),
            Some(e) => Err(e),
        }
    }
}

/// Tracks `start` along `path`. The first waypoint must coincide with the
/// free zeros of `start` (it is snapped onto them otherwise).
pub fn track(start: &ImplicitState, path: &PathSpec) -> Result<Trajectory> {
    track_with(start, path, &Tolerances::default())
}

pub fn track_with(start: &ImplicitState, path: &PathSpec, tol: &Tolerances) -> Result<Trajectory> {
    path.validate(start.free.len())?;
    let mut state = correct_with(start, tol)?;
    let mut points = vec![TrajectoryPoint {
        t: 0.0,
        state: state.clone(),
    }];
    let mut step = path.max_step;
    for (seg, pair) in path.waypoints.windows(2).enumerate() {
        let (a, b) = (&pair[0], &pair[1]);
        let length = a.iter().zip(b).map(|(x, y)| (y - x).norm()).fold(0.0, f64::max);
        if length == 0.0 {
            continue;
        }
        let mut tau = 0.0;
        while tau < 1.0 {
            let h = (step / length).min(1.0 - tau);
            let target = if tau + h >= 1.0 {
                1.0
            } else {
                tau + h
            };
            let free: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x + (y - x) * target).collect();
            match advance(&state, &free, tol) {
                Ok(next) => {
                    state = next;
                    tau = target;
                    points.push(TrajectoryPoint {
                        t: seg as f64 + tau,
                        state: state.clone(),
                    });
                    step = (step * 2.0).min(path.max_step);
                }
                Err(e) => {
                    step *= 0.5;
                    if step < MIN_STEP {
                        let stop = match e {
                            Error::Boundary(message) => StopReason::Boundary { message },
                            _ => StopReason::MinStep { min_step: MIN_STEP },
                        };
                        return Ok(Trajectory { points, stop });
                    }
                }
            }
        }
    }
    Ok(Trajectory {
        points,
        stop: StopReason::Completed,
    })
}

/// One predictor–corrector step to new free values.
fn advance(state: &ImplicitState, free: &[Complex64], tol: &Tolerances) -> Result<ImplicitState> {
    let sys = state.system();
    let (ju, jf) = sys.jacobians();
    let dfree = DVector::from_iterator(free.len(), free.iter().zip(&state.free).map(|(a, b)| a - b));
    let rhs = -(jf * &dfree);
    let du = ju
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Boundary("singular Jacobian in the predictor".into()))?;
    let mut predicted = state.clone();
    predicted.free = free.to_vec();
    let s = state.s();
    for (i, d) in du.iter().enumerate() {
        if i < s {
            predicted.dependent[i] += d;
        } else {
            predicted.crit[i - s] += d;
        }
    }
    // A short, fast-converging corrector keeps the tracker on its branch.
    let corrected = run_corrector(&predicted, tol, 8, 2)?;
    let jump = corrected
        .unknowns()
        .iter()
        .zip(predicted.unknowns())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let predicted_move = du.iter().map(|d| d.norm()).fold(0.0, f64::max);
    let free_move = dfree.iter().map(|d| d.norm()).fold(0.0, f64::max);
    if jump > 0.5 * (predicted_move + free_move) + 1e-10 {
        return Err(Error::Basin {
            iterations: 0,
            residual: corrected.residual,
        });
    }
    Ok(corrected)
}

/// Which tracked quantity a scan reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum Output {
    Dependent(usize),
    Crit(usize),
}

impl Output {
    fn read(&self, state: &ImplicitState) -> Result<Complex64> {
        match *self {
            Output::Dependent(i) => state.dependent.get(i),
            Output::Crit(j) => state.crit.get(j),
        }
        .copied()
        .ok_or_else(|| Error::contract(format!("output {self:?} does not exist in this stratum")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    /// Offset of the scanned free zero from its centre value.
    pub offset: Complex64,
    /// Tracked output, or `None` when tracking hit a boundary.
    pub value: Option<Complex64>,
    /// `|∂f/∂z̄|`, where a full stencil is available.
    pub cr_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticityScan {
    pub resolution: usize,
    pub radius: f64,
    /// Row-major over `(im, re)` offsets in `[-radius, radius]`.
    pub grid: Vec<GridPoint>,
    pub max_cr_residual: f64,
    /// Largest `|∂f/∂z|` seen, for scale.
    pub max_derivative: f64,
    pub boundary_points: usize,
}

/// Tracks `output` over a square grid of the free zero `variable_index` and
/// estimates the Cauchy–Riemann residual `|∂f/∂z̄|` by fourth-order central
/// differences at grid points with two neighbours on every side.
pub fn scan_analyticity(
    state: &ImplicitState,
    variable_index: usize,
    output: Output,
    radius: f64,
    resolution: usize,
) -> Result<AnalyticityScan> {
    scan_analyticity_with(state, variable_index, output, radius, resolution, &Tolerances::default())
}

pub fn scan_analyticity_with(
    state: &ImplicitState,
    variable_index: usize,
    output: Output,
    radius: f64,
    resolution: usize,
    tol: &Tolerances,
) -> Result<AnalyticityScan> {
    if variable_index >= state.free.len() {
        return Err(Error::contract(format!(
            "free variable {variable_index} does not exist; there are {}",
            state.free.len()
        )));
    }
    if resolution < 2 || !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::contract("a scan needs resolution ≥ 2 and a positive radius"));
    }
    let centre = correct_with(state, tol)?;
    output.read(&centre)?;
    let h = 2.0 * radius / (resolution - 1) as f64;
    let offsets: Vec<Complex64> = (0..resolution * resolution)
        .map(|idx| Complex64::new(-radius + h * (idx % resolution) as f64, -radius + h * (idx / resolution) as f64))
        .collect();
    let values: Vec<Option<Complex64>> = offsets
        .par_iter()
        .map(|&off| {
            let mut target = centre.free.clone();
            target[variable_index] += off;
            let path = PathSpec::segment(centre.free.clone(), target, radius);
            let traj = track_with(&centre, &path, tol).ok()?;
            if !traj.stop.is_completed() {
                return None;
            }
            output.read(traj.last()).ok()
        })
        .collect();

    let at = |ix: isize, iy: isize| -> Option<Complex64> {
        let r = resolution as isize;
        if ix < 0 || iy < 0 || ix >= r || iy >= r {
            return None;
        }
        values[(iy * r + ix) as usize]
    };
    let mut grid = Vec::with_capacity(offsets.len());
    let mut max_cr: f64 = 0.0;
    let mut max_der: f64 = 0.0;
    for (idx, (&offset, &value)) in offsets.iter().zip(&values).enumerate() {
        let (ix, iy) = ((idx % resolution) as isize, (idx / resolution) as isize);
        let stencil = |dx: isize, dy: isize| -> Option<Complex64> {
            let f = |k: isize| at(ix + k * dx, iy + k * dy);
            Some((f(-2)? - f(-1)? * 8.0 + f(1)? * 8.0 - f(2)?) / (12.0 * h))
        };
        let cr = value.and(stencil(1, 0)).zip(stencil(0, 1)).map(|(fx, fy)| {
            let i = Complex64::i();
            max_der = max_der.max(((fx - i * fy) * 0.5).norm());
            ((fx + i * fy) * 0.5).norm()
        });
        if let Some(r) = cr {
            max_cr = max_cr.max(r);
        }
        grid.push(GridPoint {
            offset,
            value,
            cr_residual: cr,
        });
    }
    Ok(AnalyticityScan {
        resolution,
        radius,
        boundary_points: values.iter().filter(|v| v.is_none()).count(),
        grid,
        max_cr_residual: max_cr,
        max_derivative: max_der,
    })
}

/// Largest distance between tracked critical points and a fresh computation
/// on the state's configuration, matched by multiplicity and nearest
/// location. `None` when the strata disagree.
pub fn endpoint_discrepancy(state: &ImplicitState, tol: &Tolerances) -> Result<Option<f64>> {
    let config = state.config()?;
    let direct = critical_points_with(&config, tol)?;
    if direct.k() != state.crit.len() {
        return Ok(None);
    }
    let mut used = vec![false; direct.k()];
    let mut worst: f64 = 0.0;
    for (x, &nu) in state.crit.iter().zip(state.stratum.nu()) {
        let best = direct
            .second_kind
            .iter()
            .enumerate()
            .filter(|(j, c)| !used[*j] && c.multiplicity == nu)
            .map(|(j, c)| (j, (c.location - x).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((j, d)) => {
                used[j] = true;
                worst = worst.max(d);
            }
            None => return Ok(None),
        }
    }
    Ok(Some(worst))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exact_state_is_a_fixed_point() {
        let st = ImplicitState::from_config(&ZeroConfig::roots_of_unity(5).unwrap()).unwrap();
        let out = correct(&st).unwrap();
        assert_eq!(out.unknowns(), st.unknowns());
    }

    #[test]
    fn perturbed_xi_returns_to_origin() {
        let mut st = ImplicitState::from_config(&ZeroConfig::roots_of_unity(5).unwrap()).unwrap();
        assert_eq!(st.stratum.nu(), &[4]);
        st.crit[0] += c(1e-3, 0.0);
        let out = correct(&st).unwrap();
        assert!(out.crit[0].norm() < 1e-12, "{}", out.crit[0]);
        assert!(out.residual <= out.newton_tolerance());
    }

    #[test]
    fn merged_critical_points_are_a_boundary() {
        let config = ZeroConfig::simple(&[c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.2)]).unwrap();
        let mut st = ImplicitState::from_config(&config).unwrap();
        assert_eq!(st.crit.len(), 3);
        st.crit[1] = st.crit[0];
        assert!(matches!(correct(&st), Err(Error::Boundary(_))));
    }

    #[test]
    fn radial_move_matches_recomputation() {
        let config = ZeroConfig::roots_of_unity(3).unwrap();
        let st = ImplicitState::from_config(&config).unwrap();
        // k = 1: ξ = 0 is double, two free zeros, one dependent.
        assert_eq!(st.free.len(), 2);
        let mut target = st.free.clone();
        target[0] *= 0.9;
        let traj = track(&st, &PathSpec::segment(st.free.clone(), target, 0.05)).unwrap();
        assert!(traj.stop.is_completed());
        let d = endpoint_discrepancy(traj.last(), &Tolerances::default()).unwrap().unwrap();
        assert!(d < 1e-9, "{d:e}");
    }

    #[test]
    fn rigid_rotation_keeps_centre_fixed() {
        let st = ImplicitState::from_config(&ZeroConfig::roots_of_unity(5).unwrap()).unwrap();
        let rot = Complex64::from_polar(1.0, 0.3);
        let target: Vec<_> = st.free.iter().map(|z| z * rot).collect();
        let traj = track(&st, &PathSpec::segment(st.free.clone(), target, 0.02)).unwrap();
        assert!(traj.stop.is_completed());
        for p in &traj.points {
            assert!(p.state.crit[0].norm() < 1e-10);
        }
    }

    #[test]
    fn small_loop_returns() {
        let config = ZeroConfig::simple(&[c(0.9, 0.1), c(-0.5, 0.6), c(-0.3, -0.7), c(0.2, 0.3)]).unwrap();
        let st = ImplicitState::from_config(&config).unwrap();
        let path = PathSpec::circle(&st.free, 1, 1e-2, 24, 1e-2);
        let traj = track(&st, &path).unwrap();
        assert!(traj.stop.is_completed());
        let end = traj.last();
        for (a, b) in end.free.iter().zip(&st.free) {
            assert!((a - b).norm() < 1e-12);
        }
        for (a, b) in end.unknowns().iter().zip(st.unknowns()) {
            assert!((a - b).norm() < 1e-8);
        }
    }

    #[test]
    fn collision_stops_at_boundary() {
        // Drive a free zero onto another zero.
        let config = ZeroConfig::simple(&[c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let st = ImplicitState::from_config(&config).unwrap();
        let mut target = st.free.clone();
        target[0] = c(-1.0, 0.0);
        let traj = track(&st, &PathSpec::segment(st.free.clone(), target, 0.1)).unwrap();
        assert!(matches!(traj.stop, StopReason::Boundary { .. }), "{:?}", traj.stop);
        let last = traj.last();
        assert!(last.residual <= last.newton_tolerance());
    }

    #[test]
    fn bad_path_is_a_contract_error() {
        let st = ImplicitState::from_config(&ZeroConfig::roots_of_unity(3).unwrap()).unwrap();
        let path = PathSpec::segment(vec![c(0.0, 0.0)], vec![c(1.0, 0.0)], 0.1);
        assert!(matches!(track(&st, &path), Err(Error::Contract(_))));
    }

    #[test]
    fn centroid_scan_is_analytic() {
        // k = 1 with simple zeros: ξ is an affine function of the zeros.
        let st = ImplicitState::from_config(&ZeroConfig::roots_of_unity(4).unwrap()).unwrap();
        let scan = scan_analyticity(&st, 0, Output::Crit(0), 1e-2, 7).unwrap();
        assert_eq!(scan.boundary_points, 0);
        assert!(scan.max_cr_residual <= 1e-6, "{:e}", scan.max_cr_residual);
    }

    #[test]
    fn scan_around_root_of_unity() {
        let st = ImplicitState::from_config(&ZeroConfig::roots_of_unity(5).unwrap()).unwrap();
        let scan = scan_analyticity(&st, 0, Output::Crit(0), 1e-2, 11).unwrap();
        assert!(scan.max_cr_residual <= 1e-5, "{:e}", scan.max_cr_residual);
        assert!(scan.max_derivative > 1e-3);
    }
}
