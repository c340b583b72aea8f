//! Monte Carlo sampling of `S` and projected ascent on `S_ℓ`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{fit_multipliers, sendov_s_ell_from, sendov_s_from, MultiplierFit, SendovValue};
use crate::cpoly::{critical_points_with, Zero, ZeroConfig};
use crate::error::{Error, Result};
use crate::rng::{stream, uniform_disk};
use crate::tol::Tolerances;

/// Configurations with `S > 1 - REPORT_EPSILON` are reported.
pub const REPORT_EPSILON: f64 = 1e-3;
/// `S > 1 + VIOLATION_EPSILON` would contradict the conjectured bound.
pub const VIOLATION_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FindingKind {
    NearExtremal,
    SendovViolation,
    RankDeficient,
}

impl FindingKind {
    /// Violations and rank deficiencies contradict a claim; near-extremal
    /// configurations are only of interest.
    pub fn is_counterexample(self) -> bool {
        !matches!(self, FindingKind::NearExtremal)
    }

    pub fn for_value(s: f64) -> Option<Self> {
        if s > 1.0 + VIOLATION_EPSILON {
            Some(FindingKind::SendovViolation)
        } else if s > 1.0 - REPORT_EPSILON {
            Some(FindingKind::NearExtremal)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub kind: FindingKind,
    /// Where the configuration came from, e.g. `monte_carlo n=5 seed=1 sample=17`.
    pub source: String,
    pub value: f64,
    pub config: ZeroConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloResult {
    pub n: usize,
    pub samples: u64,
    pub seed: u64,
    pub max: SendovValue,
    pub argmax: ZeroConfig,
    pub argmax_index: u64,
    /// Samples skipped because two zeros nearly coincided or a critical
    /// point nearly coincided with a zero.
    pub skipped: u64,
    pub findings: Vec<Finding>,
}

struct Best {
    value: SendovValue,
    index: u64,
    config: ZeroConfig,
}

#[derive(Default)]
struct Acc {
    best: Option<Best>,
    skipped: u64,
    findings: Vec<(u64, FindingKind, f64, ZeroConfig)>,
}

impl Acc {
    fn merge(mut self, other: Acc) -> Acc {
        self.skipped += other.skipped;
        self.findings.extend(other.findings);
        self.best = match (self.best, other.best) {
            (Some(a), Some(b)) => Some(if (b.value.value, std::cmp::Reverse(b.index)) > (a.value.value, std::cmp::Reverse(a.index)) {
                b
            } else {
                a
            }),
            (a, b) => a.or(b),
        };
        self
    }
}

/// Draws `samples` configurations of `n` simple zeros uniformly (by area)
/// in the unit disk and keeps the largest `S`. Ties go to the lowest sample
/// index, so the result does not depend on the thread count.
pub fn monte_carlo(n: usize, samples: u64, seed: u64) -> Result<MonteCarloResult> {
    if n < 2 {
        return Err(Error::contract("monte_carlo needs n ≥ 2"));
    }
    if samples == 0 {
        return Err(Error::contract("monte_carlo needs at least one sample"));
    }
    let tol = Tolerances::default();
    let acc = (0..samples)
        .into_par_iter()
        .fold(Acc::default, |mut acc, i| {
            let mut rng = stream(seed, i);
            let pts: Vec<Zero> = (0..n).map(|_| Zero::new(uniform_disk(&mut rng, 1.0), 1)).collect();
            let evaluated = ZeroConfig::with_tolerances(pts, &tol)
                .and_then(|cfg| critical_points_with(&cfg, &tol).map(|crit| (sendov_s_from(&cfg, &crit), cfg)));
            match evaluated {
                Ok((value, config)) => {
                    if let Some(kind) = FindingKind::for_value(value.value) {
                        acc.findings.push((i, kind, value.value, config.clone()));
                    }
                    let candidate = Acc {
                        best: Some(Best { value, index: i, config }),
                        ..Acc::default()
                    };
                    acc = acc.merge(candidate);
                }
                Err(_) => acc.skipped += 1,
            }
            acc
        })
        .reduce(Acc::default, Acc::merge);

    let best = acc
        .best
        .ok_or_else(|| Error::contract("every sample was skipped"))?;
    let mut findings = acc.findings;
    findings.sort_by_key(|f| f.0);
    Ok(MonteCarloResult {
        n,
        samples,
        seed,
        max: best.value,
        argmax: best.config,
        argmax_index: best.index,
        skipped: acc.skipped,
        findings: findings
            .into_iter()
            .map(|(i, kind, value, config)| Finding {
                kind,
                source: format!("monte_carlo n={n} seed={seed} sample={i}"),
                value,
                config,
            })
            .collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub steps: usize,
    /// Radius of the proposal disk.
    pub step_size: f64,
    /// Floor for the proposal radius after collapses.
    pub min_step: f64,
    /// A proposal is accepted when it raises `S_ℓ` by more than this.
    pub accept_threshold: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            steps: 1000,
            step_size: 1e-2,
            min_step: 1e-6,
            accept_threshold: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalSearchResult {
    pub ell: usize,
    pub start: SendovValue,
    pub best: ZeroConfig,
    pub best_value: SendovValue,
    /// `S` (over all critical points) of the final configuration.
    pub best_s: SendovValue,
    /// `S_ℓ` after each accepted move, starting with the initial value.
    pub trace: Vec<f64>,
    pub proposals: usize,
    pub accepted: usize,
    /// Largest `S` over every configuration evaluated.
    pub max_s_seen: f64,
    /// Proposals that left the stratum, with the reason.
    pub collapses: Vec<String>,
    pub final_step: f64,
    /// Multiplier fit at the final configuration with `i0 = ℓ`, when it is a
    /// `k = 1` configuration with `m ≥ 3`.
    pub kkt: Option<MultiplierFit>,
    pub kkt_note: Option<String>,
    pub findings: Vec<Finding>,
}

pub fn local_search(config: &ZeroConfig, ell: usize, steps: usize, seed: u64) -> Result<LocalSearchResult> {
    local_search_with(
        config,
        ell,
        &SearchOptions {
            steps,
            ..SearchOptions::default()
        },
        seed,
    )
}

/// Random single-zero moves, projected radially onto the closed unit disk,
/// accepted when they raise `S_ℓ`.
pub fn local_search_with(config: &ZeroConfig, ell: usize, opts: &SearchOptions, seed: u64) -> Result<LocalSearchResult> {
    if !(opts.step_size > 0.0 && opts.min_step > 0.0) {
        return Err(Error::contract("search step sizes must be positive"));
    }
    if let Some(z) = config.locations().find(|z| z.norm() > 1.0 + 1e-12) {
        return Err(Error::contract(format!("zero {z} lies outside the unit disk")));
    }
    let tol = Tolerances::default();
    let crit = critical_points_with(config, &tol)?;
    let start = sendov_s_ell_from(config, &crit, ell)?;
    let mut best_s = sendov_s_from(config, &crit);
    let mut current = config.clone();
    let mut value = start;
    let mut trace = vec![start.value];
    let mut max_s_seen = best_s.value;
    let mut collapses = Vec::new();
    let mut findings = Vec::new();
    let mut step = opts.step_size;
    let mut accepted = 0;
    let mut rng = stream(seed, 0);
    let m = current.distinct();

    let check = |cfg: &ZeroConfig, s: f64, findings: &mut Vec<Finding>, proposal: usize| {
        if FindingKind::for_value(s) == Some(FindingKind::SendovViolation) {
            findings.push(Finding {
                kind: FindingKind::SendovViolation,
                source: format!("local_search seed={seed} proposal={proposal}"),
                value: s,
                config: cfg.clone(),
            });
        }
    };
    check(&current, best_s.value, &mut findings, 0);

    for proposal in 1..=opts.steps {
        let idx = rng.random_range(0..m);
        let mut zeros = current.zeros().to_vec();
        let mut moved = zeros[idx].location + uniform_disk(&mut rng, step);
        if moved.norm() > 1.0 {
            moved /= moved.norm();
        }
        zeros[idx].location = moved;
        let evaluated = ZeroConfig::with_tolerances(zeros, &tol).and_then(|cfg| {
            let crit = critical_points_with(&cfg, &tol)?;
            let s_ell = sendov_s_ell_from(&cfg, &crit, ell)?;
            Ok((cfg.clone(), s_ell, sendov_s_from(&cfg, &crit)))
        });
        match evaluated {
            Ok((cfg, s_ell, s)) => {
                max_s_seen = max_s_seen.max(s.value);
                check(&cfg, s.value, &mut findings, proposal);
                if s_ell.value > value.value + opts.accept_threshold {
                    current = cfg;
                    value = s_ell;
                    best_s = s;
                    accepted += 1;
                    trace.push(value.value);
                }
            }
            Err(e) => {
                collapses.push(format!("proposal {proposal}: {e}"));
                step = (step * 0.5).max(opts.min_step);
            }
        }
    }

    if FindingKind::for_value(best_s.value) == Some(FindingKind::NearExtremal) {
        findings.push(Finding {
            kind: FindingKind::NearExtremal,
            source: format!("local_search seed={seed} final"),
            value: best_s.value,
            config: current.clone(),
        });
    }
    let (kkt, kkt_note) = match fit_multipliers(&current, ell) {
        Ok(fit) => (Some(fit), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(LocalSearchResult {
        ell,
        start,
        best: current,
        best_value: value,
        best_s,
        trace,
        proposals: opts.steps,
        accepted,
        max_s_seen,
        collapses,
        final_step: step,
        kkt,
        kkt_note,
        findings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_zeros_stay_within_bound() {
        let r = monte_carlo(2, 20_000, 5).unwrap();
        assert!(r.max.value <= 1.0 + VIOLATION_EPSILON);
        assert!(r.max.value > 0.9);
        assert!(r.findings.iter().all(|f| !f.kind.is_counterexample()));
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let a = monte_carlo(6, 2000, 42).unwrap();
        let b = monte_carlo(6, 2000, 42).unwrap();
        assert_eq!(a.argmax_index, b.argmax_index);
        assert_eq!(a.argmax, b.argmax);
        assert_eq!(a.max.value.to_bits(), b.max.value.to_bits());
    }

    #[test]
    fn roots_of_unity_are_locally_maximal() {
        let cfg = ZeroConfig::roots_of_unity(5).unwrap();
        let r = local_search(&cfg, 0, 2000, 9).unwrap();
        assert_eq!(r.accepted, 0);
        assert!((r.best_value.value - 1.0).abs() < 1e-12);
        assert!(r.max_s_seen <= 1.0 + VIOLATION_EPSILON);
    }

    #[test]
    fn trace_is_monotone() {
        let mut rng = stream(77, 0);
        let pts: Vec<_> = (0..5).map(|_| uniform_disk(&mut rng, 1.0)).collect();
        let cfg = ZeroConfig::simple(&pts).unwrap();
        let r = local_search(&cfg, 2, 500, 3).unwrap();
        assert!(r.trace.windows(2).all(|w| w[1] >= w[0]));
        assert!(r.best_value.value <= 1.0 + VIOLATION_EPSILON);
        assert!(r.best.locations().all(|z| z.norm() <= 1.0 + 1e-12));
    }

    #[test]
    fn multiple_zero_reference_is_rejected() {
        let cfg = ZeroConfig::from_pairs(&[(num_complex::Complex64::new(0.1, 0.0), 2), (num_complex::Complex64::new(-0.3, 0.2), 1)])
            .unwrap();
        assert!(matches!(local_search(&cfg, 0, 10, 1), Err(Error::Contract(_))));
    }
}
