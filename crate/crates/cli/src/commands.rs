//! Dispatch from a [`RunConfig`] to the library.

use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use sendovlab::continuation::{
    endpoint_discrepancy, scan_analyticity_with, track_with, AnalyticityScan, ImplicitState, Output, PathSpec,
};
use sendovlab::cpoly::critical_points_with;
use sendovlab::extremal::{
    enclosing_disk, fit_multipliers, halfplane_cert_at, kkt_residual, local_search_with, monte_carlo, sendov_s_from, weighted_centroid,
    Finding, FindingKind, KKTState, SearchOptions,
};
use sendovlab::io::{parse_stratum, parse_zeros_with, trajectory_table};
use sendovlab::jacobian::rank_sweep;
use sendovlab::rng::{stream, uniform_disk};
use sendovlab::strata::classify_stratum_with;
use sendovlab::{Complex64, Error, Result, Structure, Tolerances, ZeroConfig};

use crate::config::{Command, RunConfig};
use crate::report::{Header, Report};

/// A finished run. `error` is set when the command stopped early but still
/// produced a partial report (a path that hit a stratum boundary).
pub struct Outcome {
    pub report: Report,
    pub error: Option<Error>,
}

#[derive(Default)]
struct Body {
    value: Value,
    findings: Vec<Finding>,
    events: Vec<String>,
    table: Option<String>,
    error: Option<Error>,
}

impl Body {
    fn of<T: Serialize>(value: &T) -> Self {
        Body {
            value: to_value(value),
            ..Body::default()
        }
    }
}

fn to_value<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("report values serialize")
}

pub fn run(config: &RunConfig) -> Result<Outcome> {
    let tol = config.tolerances.apply()?;
    let ctx = Context { config, tol };
    let body = match &config.command {
        Command::Classify(a) => ctx.classify(a.zeros.as_deref())?,
        Command::Crit(a) => ctx.crit(a.zeros.as_deref())?,
        Command::Disk(a) => ctx.disk(a.zeros.as_deref())?,
        Command::RankSweep(a) => ctx.rank_sweep(&a.stratum, a.samples)?,
        Command::Track(a) => ctx.track(a.zeros.as_deref(), &a.to, a.free.as_deref(), a.max_step)?,
        Command::Scan(a) => ctx.scan(a)?,
        Command::Search(a) => ctx.search(a)?,
        Command::Sample(a) => {
            let result = monte_carlo(a.n, a.samples, config.seed)?;
            Body {
                findings: result.findings.clone(),
                ..Body::of(&result)
            }
        }
        Command::Kkt(a) => ctx.kkt(a)?,
    };
    if let (Some(path), Some(table)) = (&config.io.table, &body.table) {
        write_file(path, table)?;
    }
    Ok(Outcome {
        report: Report {
            header: Header::new(config, tol),
            body: body.value,
            findings: body.findings,
            events: body.events,
        },
        error: body.error,
    })
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::contract(format!("cannot write {}: {e}", path.display())))
}

struct Context<'a> {
    config: &'a RunConfig,
    tol: Tolerances,
}

impl Context<'_> {
    fn zeros(&self, inline: Option<&str>) -> Result<ZeroConfig> {
        match (inline, &self.config.io.input) {
            (Some(text), _) => parse_zeros_with(text, &self.tol),
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::contract(format!("cannot read {}: {e}", path.display())))?;
                parse_zeros_with(&text, &self.tol)
            }
            (None, None) => Err(Error::contract("no zeros given; use --zeros or --input")),
        }
    }

    fn classify(&self, zeros: Option<&str>) -> Result<Body> {
        let config = self.zeros(zeros)?;
        let stratum = classify_stratum_with(&config, &self.tol)?;
        Ok(Body {
            value: json!({
                "notation": stratum.to_string(),
                "stratum": to_value(&stratum),
                "n": stratum.n(),
                "m": stratum.m(),
                "k": stratum.k(),
                "s": stratum.s(),
            }),
            ..Body::default()
        })
    }

    fn crit(&self, zeros: Option<&str>) -> Result<Body> {
        let config = self.zeros(zeros)?;
        let crit = critical_points_with(&config, &self.tol)?;
        let s = sendov_s_from(&config, &crit);
        let mut body = Body {
            value: json!({ "critical_points": to_value(&crit), "sendov": to_value(&s) }),
            ..Body::default()
        };
        if let Some(kind) = FindingKind::for_value(s.value) {
            body.findings.push(Finding {
                kind,
                source: "crit".into(),
                value: s.value,
                config,
            });
        }
        Ok(body)
    }

    fn disk(&self, zeros: Option<&str>) -> Result<Body> {
        let config = self.zeros(zeros)?;
        let points: Vec<Complex64> = config.locations().collect();
        Ok(Body::of(&enclosing_disk(&points)))
    }

    fn rank_sweep(&self, stratum: &str, samples: usize) -> Result<Body> {
        let stratum: Structure = parse_stratum(stratum)?;
        let report = rank_sweep(&stratum, samples, self.config.seed, &self.tol)?;
        let findings = report
            .records
            .iter()
            .filter(|r| !r.full_rank)
            .map(|r| Finding {
                kind: FindingKind::RankDeficient,
                source: format!("rank_sweep {stratum} seed={} sample={}", self.config.seed, r.index),
                value: r.ratio,
                config: r.config.clone(),
            })
            .collect();
        Ok(Body {
            value: json!({
                "stratum": stratum.to_string(),
                "samples": samples,
                "min_ratio": report.min_ratio(),
                "deficient": report.deficient(),
                "records": to_value(&report.records),
            }),
            findings,
            ..Body::default()
        })
    }

    fn state(&self, zeros: Option<&str>, free: Option<&str>) -> Result<ImplicitState> {
        let config = self.zeros(zeros)?;
        let free = free.map(parse_indices).transpose()?;
        ImplicitState::from_config_with(&config, free.as_deref(), &self.tol)
    }

    fn track(&self, zeros: Option<&str>, to: &str, free: Option<&str>, max_step: f64) -> Result<Body> {
        let state = self.state(zeros, free)?;
        let target = parse_points(to)?;
        let path = PathSpec::segment(state.free.clone(), target, max_step);
        let traj = track_with(&state, &path, &self.tol)?;
        let end = traj.last();
        let error = traj.stop.to_error();
        // Near a boundary the recomputation itself may fail; that is already reported.
        let discrepancy = match error {
            None => endpoint_discrepancy(end, &self.tol)?,
            Some(_) => endpoint_discrepancy(end, &self.tol).ok().flatten(),
        };
        let value = json!({
            "stratum": state.stratum.to_string(),
            "free_indices": &state.order[state.s()..],
            "stop": to_value(&traj.stop),
            "steps": traj.points.len() - 1,
            "start": to_value(&state),
            "end": to_value(end),
            "endpoint_discrepancy": discrepancy,
        });
        Ok(Body {
            value,
            events: error.iter().map(|e| e.to_string()).collect(),
            table: Some(trajectory_table(&traj)),
            error,
            ..Body::default()
        })
    }

    fn scan(&self, a: &crate::config::ScanArgs) -> Result<Body> {
        let state = self.state(a.zeros.as_deref(), a.free.as_deref())?;
        let output = parse_output(&a.track)?;
        let scan = scan_analyticity_with(&state, a.variable, output, a.radius, a.resolution, &self.tol)?;
        let events = if scan.boundary_points > 0 {
            vec![format!("{} grid points left the stratum", scan.boundary_points)]
        } else {
            Vec::new()
        };
        Ok(Body {
            table: Some(scan_table(&scan)),
            events,
            ..Body::of(&scan)
        })
    }

    fn search(&self, a: &crate::config::SearchArgs) -> Result<Body> {
        let config = match (a.zeros.as_deref(), a.n, &self.config.io.input) {
            (None, Some(n), None) => random_start(n, self.config.seed)?,
            (_, Some(_), _) => return Err(Error::contract("give either a starting configuration or --n, not both")),
            (zeros, None, _) => self.zeros(zeros)?,
        };
        let opts = SearchOptions {
            steps: a.steps,
            step_size: a.step_size,
            ..SearchOptions::default()
        };
        let result = local_search_with(&config, a.ell, &opts, self.config.seed)?;
        Ok(Body {
            findings: result.findings.clone(),
            events: result.collapses.clone(),
            ..Body::of(&result)
        })
    }

    fn kkt(&self, a: &crate::config::KktArgs) -> Result<Body> {
        let config = self.zeros(a.zeros.as_deref())?;
        let fit = fit_multipliers(&config, a.i0)?;
        let residual = match a.lambda {
            Some(lambda) => {
                let eta = match &a.eta {
                    Some(text) => parse_reals(text)?,
                    None => vec![0.0; config.distinct()],
                };
                let state = KKTState::new(&config, lambda, a.theta_lambda, eta, a.i0)?;
                Some(kkt_residual(&config, &state)?)
            }
            None => None,
        };
        let xi = weighted_centroid(&config)?;
        let mut certificates = Vec::new();
        for (i, z) in config.locations().enumerate() {
            if i != a.i0 && (z.norm() - 1.0).abs() <= 1e-10 {
                let cert = halfplane_cert_at(&config, xi, i, a.i0)?;
                certificates.push(json!({
                    "index": i,
                    "certificate": to_value(&cert),
                    "algebraic": cert.algebraic(),
                    "trigonometric": cert.trigonometric(),
                    "forms_agree": cert.forms_agree(),
                }));
            }
        }
        let events = residual
            .as_ref()
            .filter(|r| r.reference_on_boundary)
            .map(|_| format!("reference zero {} lies on the unit circle", a.i0))
            .into_iter()
            .collect();
        Ok(Body {
            value: json!({
                "i0": a.i0,
                "xi": to_value(&xi),
                "fit": to_value(&fit),
                "residual": to_value(&residual),
                "certificates": certificates,
            }),
            events,
            ..Body::default()
        })
    }
}

fn random_start(n: usize, seed: u64) -> Result<ZeroConfig> {
    // The search itself draws from stream index 0.
    let mut rng = stream(seed, 1);
    let points: Vec<Complex64> = (0..n).map(|_| uniform_disk(&mut rng, 1.0)).collect();
    ZeroConfig::simple(&points)
}

fn parse_indices(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::contract(format!("bad index {t:?} in {text:?}")))
        })
        .collect()
}

fn parse_reals(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::contract(format!("bad number {t:?} in {text:?}")))
        })
        .collect()
}

/// `"re im; re im; ..."`.
fn parse_points(text: &str) -> Result<Vec<Complex64>> {
    text.split(';')
        .map(|p| {
            let parts: Vec<f64> = p
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::contract(format!("bad point {p:?}")))?;
            match parts[..] {
                [re, im] => Ok(Complex64::new(re, im)),
                _ => Err(Error::contract(format!("a point needs two numbers, got {p:?}"))),
            }
        })
        .collect()
}

fn parse_output(text: &str) -> Result<Output> {
    let bad = || Error::contract(format!("tracked output must be xi:J or dep:J, got {text:?}"));
    let (kind, index) = text.split_once(':').ok_or_else(bad)?;
    let index: usize = index.trim().parse().map_err(|_| bad())?;
    match kind.trim() {
        "xi" => Ok(Output::Crit(index)),
        "dep" => Ok(Output::Dependent(index)),
        _ => Err(bad()),
    }
}

fn scan_table(scan: &AnalyticityScan) -> String {
    let mut out = String::from("# offset_re offset_im value_re value_im cr_residual\n");
    for g in &scan.grid {
        let value = g.value.unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        let cr = g.cr_residual.unwrap_or(f64::NAN);
        out.push_str(&format!(
            "{:.16e} {:.16e} {:.16e} {:.16e} {:.16e}\n",
            g.offset.re, g.offset.im, value.re, value.im, cr
        ));
    }
    out
}
