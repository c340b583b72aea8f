//! Plain-text formats.
//!
//! Zero configurations:
//!
//! ```text
//! # comment
//! n=3 m=2          (or "3 2"; optional)
//! 0 0 2            re im multiplicity
//! 1 0 1
//! ```
//!
//! Records are separated by newlines or `;`. The single record
//! `roots_of_unity:N` stands for the zeros of `z^N - 1`.
//!
//! Strata are written `n:μ_1,…,μ_m/ν_1,…,ν_k`.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::continuation::Trajectory;
use crate::cpoly::{Zero, ZeroConfig};
use crate::error::{Error, Result};
use crate::strata::Structure;
use crate::tol::Tolerances;

struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Splits into records of tokens, dropping comments and empty records.
fn records(text: &str) -> Vec<Vec<Token<'_>>> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let mut offset = 0;
        for part in body.split(';') {
            let mut rec = Vec::new();
            let mut pos = 0;
            for tok in part.split_whitespace() {
                let start = part[pos..].find(tok).map_or(pos, |p| p + pos);
                rec.push(Token {
                    text: tok,
                    line: ln + 1,
                    column: body[..offset + start].chars().count() + 1,
                });
                pos = start + tok.len();
            }
            if !rec.is_empty() {
                out.push(rec);
            }
            offset += part.len() + 1;
        }
    }
    out
}

fn parse_int(tok: &Token<'_>, what: &str) -> Result<usize> {
    tok.text
        .parse::<usize>()
        .map_err(|_| parse_error(tok.line, tok.column, format!("expected {what}, found `{}`", tok.text)))
}

fn parse_real(tok: &Token<'_>) -> Result<f64> {
    let v = tok
        .text
        .parse::<f64>()
        .map_err(|_| parse_error(tok.line, tok.column, format!("expected a real number, found `{}`", tok.text)))?;
    if !v.is_finite() {
        return Err(parse_error(tok.line, tok.column, format!("non-finite number `{}`", tok.text)));
    }
    Ok(v)
}

/// Header `n m` or `n=.. m=..`, if the record is one.
fn parse_header(rec: &[Token<'_>]) -> Result<Option<(usize, usize, usize, usize)>> {
    if rec.len() != 2 {
        return Ok(None);
    }
    let keyed = rec[0].text.starts_with("n=") || rec[1].text.starts_with("m=");
    if keyed {
        let value = |tok: &Token<'_>, key: &str| -> Result<usize> {
            let v = tok
                .text
                .strip_prefix(key)
                .ok_or_else(|| parse_error(tok.line, tok.column, format!("expected `{key}<integer>`")))?;
            v.parse()
                .map_err(|_| parse_error(tok.line, tok.column + key.len(), format!("expected an integer after `{key}`")))
        };
        return Ok(Some((value(&rec[0], "n=")?, value(&rec[1], "m=")?, rec[0].line, rec[0].column)));
    }
    if rec.iter().all(|t| t.text.parse::<usize>().is_ok()) {
        return Ok(Some((parse_int(&rec[0], "n")?, parse_int(&rec[1], "m")?, rec[0].line, rec[0].column)));
    }
    Ok(None)
}

pub fn parse_zeros(text: &str) -> Result<ZeroConfig> {
    parse_zeros_with(text, &Tolerances::default())
}

pub fn parse_zeros_with(text: &str, tol: &Tolerances) -> Result<ZeroConfig> {
    let recs = records(text);
    let Some(first) = recs.first() else {
        return Err(parse_error(1, 1, "no zeros given"));
    };
    if let Some(arg) = first[0].text.strip_prefix("roots_of_unity:") {
        let tok = &first[0];
        if recs.len() > 1 || first.len() > 1 {
            return Err(parse_error(tok.line, tok.column, "`roots_of_unity:N` must be the only record"));
        }
        let n: usize = arg.parse().map_err(|_| {
            parse_error(tok.line, tok.column + "roots_of_unity:".len(), format!("expected an integer, found `{arg}`"))
        })?;
        if n == 0 {
            return Err(parse_error(tok.line, tok.column, "roots_of_unity needs N ≥ 1"));
        }
        return ZeroConfig::roots_of_unity(n);
    }

    let (header, body) = match parse_header(first)? {
        Some(h) => (Some(h), &recs[1..]),
        None => (None, &recs[..]),
    };
    let mut zeros: Vec<Zero> = Vec::with_capacity(body.len());
    let mut origins = Vec::with_capacity(body.len());
    for rec in body {
        if rec.len() != 3 {
            return Err(parse_error(
                rec[0].line,
                rec[0].column,
                format!("expected `re im multiplicity`, found {} fields", rec.len()),
            ));
        }
        let z = Complex64::new(parse_real(&rec[0])?, parse_real(&rec[1])?);
        let mu = parse_int(&rec[2], "a positive multiplicity")?;
        if mu == 0 || mu > u32::MAX as usize {
            return Err(parse_error(rec[2].line, rec[2].column, "multiplicity must be a positive integer"));
        }
        for (prev, &(line, _)) in zeros.iter().zip(&origins) {
            let d = (prev.location - z).norm();
            if d < tol.tau_sep {
                return Err(parse_error(
                    rec[0].line,
                    rec[0].column,
                    format!("duplicate location {z}: within {d:e} of the zero on line {line}"),
                ));
            }
        }
        zeros.push(Zero::new(z, mu as u32));
        origins.push((rec[0].line, rec[0].column));
    }
    if zeros.is_empty() {
        let (line, column) = header.map_or((1, 1), |h| (h.2, h.3));
        return Err(parse_error(line, column, "no zeros given"));
    }
    if let Some((n, m, line, column)) = header {
        let sum: usize = zeros.iter().map(|z| z.multiplicity as usize).sum();
        if sum != n {
            return Err(parse_error(line, column, format!("multiplicities sum to {sum}, header says n = {n}")));
        }
        if zeros.len() != m {
            return Err(parse_error(line, column, format!("{} distinct zeros given, header says m = {m}", zeros.len())));
        }
    }
    ZeroConfig::with_tolerances(zeros, tol)
}

/// Header plus one `re im mult` line per zero, with 17 significant digits so
/// that [`parse_zeros`] restores the configuration exactly.
pub fn serialize_zeros(config: &ZeroConfig) -> String {
    let mut out = format!("n={} m={}\n", config.degree(), config.distinct());
    for z in config.zeros() {
        let _ = writeln!(out, "{:.16e} {:.16e} {}", z.location.re, z.location.im, z.multiplicity);
    }
    out
}

pub fn parse_stratum(text: &str) -> Result<Structure> {
    let text = text.trim();
    let err = |column: usize, message: String| parse_error(1, column, message);
    let (n_part, rest) = text
        .split_once(':')
        .ok_or_else(|| err(1, "expected `n:μ_1,…,μ_m/ν_1,…,ν_k`".into()))?;
    let (mu_part, nu_part) = rest
        .split_once('/')
        .ok_or_else(|| err(n_part.len() + 2, "missing `/` between μ̄ and ν̄".into()))?;
    let n: usize = n_part.trim().parse().map_err(|_| err(1, format!("expected n, found `{n_part}`")))?;
    let list = |part: &str, start: usize| -> Result<Vec<u32>> {
        let mut col = start;
        part.split(',')
            .map(|x| {
                let here = col;
                col += x.len() + 1;
                x.trim()
                    .parse::<u32>()
                    .map_err(|_| err(here, format!("expected a positive integer, found `{x}`")))
            })
            .collect()
    };
    let mu_start = n_part.len() + 2;
    let mu = list(mu_part, mu_start)?;
    let nu = list(nu_part, mu_start + mu_part.len() + 1)?;
    let s = Structure::new(mu, nu).map_err(|e| err(1, e.to_string()))?;
    if s.n() != n {
        return Err(err(1, format!("μ̄ sums to {}, expected n = {n}", s.n())));
    }
    Ok(s)
}

/// Whitespace-separated columns: `t`, then real and imaginary parts of the
/// free zeros, dependent zeros and critical points, then the residual.
pub fn trajectory_table(traj: &Trajectory) -> String {
    let mut out = String::new();
    if let Some(first) = traj.points.first() {
        let st = &first.state;
        let mut head = vec!["t".to_string()];
        for (name, len) in [("free", st.free.len()), ("dep", st.dependent.len()), ("xi", st.crit.len())] {
            for i in 0..len {
                head.push(format!("{name}{i}_re"));
                head.push(format!("{name}{i}_im"));
            }
        }
        head.push("residual".into());
        let _ = writeln!(out, "# {}", head.join(" "));
    }
    for p in &traj.points {
        let st = &p.state;
        let mut cols = vec![format!("{:.16e}", p.t)];
        for z in st.free.iter().chain(&st.dependent).chain(&st.crit) {
            cols.push(format!("{:.16e}", z.re));
            cols.push(format!("{:.16e}", z.im));
        }
        cols.push(format!("{:.16e}", st.residual));
        let _ = writeln!(out, "{}", cols.join(" "));
    }
    out
}
