//! JSON reports and the append-only findings log.

use std::fs::OpenOptions;
use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::ser::{CompactFormatter, Formatter, PrettyFormatter};
use sendovlab::extremal::Finding;
use sendovlab::Tolerances;

use crate::config::RunConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    /// Effective tolerances after overrides.
    pub tolerances: Tolerances,
    /// The run configuration with every default filled in.
    pub config: RunConfig,
}

impl Header {
    pub fn new(config: &RunConfig, tolerances: Tolerances) -> Self {
        Self {
            tool: "sendovlab".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: config.command.name().into(),
            seed: config.seed,
            tolerances,
            config: config.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub header: Header,
    pub body: serde_json::Value,
    pub findings: Vec<Finding>,
    /// Stratum boundaries and other non-fatal events met during the run.
    pub events: Vec<String>,
}

impl Report {
    pub fn has_counterexample(&self) -> bool {
        self.findings.iter().any(|f| f.kind.is_counterexample())
    }

    pub fn to_json(&self) -> String {
        to_precise_json(self, PrettyFormatter::new())
    }
}

/// Writes floats in scientific notation with 17 significant digits, which
/// round-trips every `f64` exactly.
struct Precise<F>(F);

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*)),* $(,)?) => {
        $(fn $name<W: ?Sized + Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
            self.0.$name(w $(, $arg)*)
        })*
    };
}

impl<F: Formatter> Formatter for Precise<F> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        write!(w, "{:.16e}", value as f64)
    }

    delegate!(
        begin_array(),
        end_array(),
        begin_array_value(first: bool),
        end_array_value(),
        begin_object(),
        end_object(),
        begin_object_key(first: bool),
        begin_object_value(),
        end_object_value(),
    );
}

fn to_precise_json<T: Serialize, F: Formatter>(value: &T, formatter: F) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Precise(formatter));
    value.serialize(&mut ser).expect("report values serialize");
    String::from_utf8(out).expect("serde_json writes UTF-8")
}

/// Appends one JSON line per finding.
pub fn append_findings(path: &Path, findings: &[Finding]) -> io::Result<()> {
    if findings.is_empty() {
        return Ok(());
    }
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    let mut buf = String::new();
    for f in findings {
        buf.push_str(&to_precise_json(f, CompactFormatter));
        buf.push('\n');
    }
    file.write_all(buf.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        let text = to_precise_json(&vec![0.1, 1.0 / 3.0, -2.5e-300, 0.0], CompactFormatter);
        assert_eq!(
            text,
            "[1.0000000000000001e-1,3.3333333333333331e-1,-2.5000000000000000e-300,0.0000000000000000e0]"
        );
        let back: Vec<f64> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, vec![0.1, 1.0 / 3.0, -2.5e-300, 0.0]);
    }

    #[test]
    fn report_round_trip() {
        use crate::config::{Command, GlobalArgs, ZerosArgs};
        use sendovlab::extremal::FindingKind;
        use sendovlab::ZeroConfig;

        let config = RunConfig::from_cli(
            Command::Crit(ZerosArgs {
                zeros: Some("roots_of_unity:3".into()),
            }),
            &GlobalArgs::default(),
        );
        let report = Report {
            header: Header::new(&config, Tolerances::default()),
            body: serde_json::json!({ "x": 0.1, "y": [1.0 / 3.0] }),
            findings: vec![Finding {
                kind: FindingKind::NearExtremal,
                source: "test".into(),
                value: 1.0 - 1e-4,
                config: ZeroConfig::roots_of_unity(3).unwrap(),
            }],
            events: vec!["event".into()],
        };
        let back: Report = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn non_finite_becomes_null() {
        assert_eq!(to_precise_json(&vec![f64::NAN], CompactFormatter), "[null]");
    }
}
