//! Output records: JSON (schema version "1"), CSV and text tables.
//!
//! Every number is rounded to 12 significant digits before it is written, so
//! the JSON and CSV renderings of a record carry the same values.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: &str = "1";

/// `hbar^2 / (2 m_e)` in meV nm^2.
pub const HBAR2_OVER_2ME_MEV_NM2: f64 = 38.099_820_8;

/// Round to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub schema_version: String,
    pub command: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<SpecEcho>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub units: Option<Units>,
    pub results: Results,
    pub diagnostics: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_unix: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecEcho {
    pub class: u8,
    pub depth: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<ExtensionEcho>,
    /// `"shifted"` when energies are measured from the shallow well's moved
    /// zero, `"continuum"` otherwise.
    pub reference: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtensionEcho {
    pub u1: f64,
    pub q: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Units {
    pub mass_electron: f64,
    pub width_nm: f64,
    pub energy_unit: String,
    /// Energy in meV per unit of dimensionless energy.
    pub energy_scale: f64,
}

impl Units {
    pub fn new(mass: f64, width: f64) -> Self {
        Self {
            mass_electron: mass,
            width_nm: width,
            energy_unit: "meV".into(),
            energy_scale: sig12(HBAR2_OVER_2ME_MEV_NM2 / (mass * width * width)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Results {
    States { states: Vec<StateRow> },
    Sweep {
        n_states: usize,
        rows: Vec<SweepRowOut>,
    },
    Wavefunction(WavefunctionOut),
    Verify(VerifyOut),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateRow {
    pub index: usize,
    pub parity: String,
    pub kappa_d: f64,
    pub energy: f64,
    pub node_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy_mev: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRowOut {
    pub u: f64,
    pub kappa_d: Vec<Option<f64>>,
    pub possibly_incomplete: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WavefunctionOut {
    pub state: StateRow,
    pub norm_constant: f64,
    pub tail_fraction: f64,
    pub nodes: usize,
    pub x_over_d: Vec<f64>,
    pub psi: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOut {
    pub half_width: f64,
    pub points: usize,
    pub tolerance: f64,
    pub rows: Vec<VerifyRow>,
    pub certified: usize,
    pub agreed: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub index: usize,
    pub parity: String,
    pub kappa_analytic: f64,
    pub kappa_oracle: Option<f64>,
    pub abs_delta: Option<f64>,
    pub rel_delta: Option<f64>,
    pub overlap: Option<f64>,
    pub certified: bool,
    pub agrees: bool,
}

/// Shortest round-trip rendering, identical to the JSON number text.
fn num(x: f64) -> String {
    serde_json::Value::from(x).to_string()
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

impl Record {
    pub fn to_json(&self) -> Result<Vec<u8>, CliError> {
        let mut out = serde_json::to_vec_pretty(self)
            .map_err(|e| CliError::Io(format!("serializing record: {e}")))?;
        out.push(b'\n');
        Ok(out)
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(format!("writing CSV: {e}"));
        match &self.results {
            Results::States { states } => {
                let with_units = states.iter().any(|s| s.energy_mev.is_some());
                let mut header = vec!["index", "parity", "kappa_d", "energy", "node_count"];
                if with_units {
                    header.push("energy_mev");
                }
                w.write_record(&header).map_err(io)?;
                for s in states {
                    let mut row = vec![
                        s.index.to_string(),
                        s.parity.clone(),
                        num(s.kappa_d),
                        num(s.energy),
                        s.node_count.to_string(),
                    ];
                    if with_units {
                        row.push(opt(s.energy_mev));
                    }
                    w.write_record(&row).map_err(io)?;
                }
            }
            Results::Sweep { n_states, rows } => {
                let mut header = vec!["u".to_string()];
                header.extend((0..*n_states).map(|i| format!("kappa_d_{i}")));
                w.write_record(&header).map_err(io)?;
                for r in rows {
                    let mut row = vec![num(r.u)];
                    row.extend(r.kappa_d.iter().map(|k| opt(*k)));
                    w.write_record(&row).map_err(io)?;
                }
            }
            Results::Wavefunction(wf) => {
                let mut header = vec!["x_over_d", "psi"];
                if wf.density.is_some() {
                    header.push("density");
                }
                w.write_record(&header).map_err(io)?;
                for (i, (x, p)) in wf.x_over_d.iter().zip(&wf.psi).enumerate() {
                    let mut row = vec![num(*x), num(*p)];
                    if let Some(d) = &wf.density {
                        row.push(num(d[i]));
                    }
                    w.write_record(&row).map_err(io)?;
                }
            }
            Results::Verify(v) => {
                w.write_record([
                    "index",
                    "parity",
                    "kappa_analytic",
                    "kappa_oracle",
                    "abs_delta",
                    "rel_delta",
                    "overlap",
                    "certified",
                    "agrees",
                ])
                .map_err(io)?;
                for r in &v.rows {
                    w.write_record([
                        r.index.to_string(),
                        r.parity.clone(),
                        num(r.kappa_analytic),
                        opt(r.kappa_oracle),
                        opt(r.abs_delta),
                        opt(r.rel_delta),
                        opt(r.overlap),
                        r.certified.to_string(),
                        r.agrees.to_string(),
                    ])
                    .map_err(io)?;
                }
            }
        }
        w.into_inner()
            .map_err(|e| CliError::Io(format!("writing CSV: {e}")))
    }

    pub fn to_table(&self) -> Result<Vec<u8>, CliError> {
        let Results::Verify(v) = &self.results else {
            return Err(CliError::Usage(
                "table format is only available for verify".into(),
            ));
        };
        let mut s = format!(
            "oracle: L = {} d, {} points, Richardson-extrapolated; tolerance {:e}\n",
            v.half_width, v.points, v.tolerance
        );
        s.push_str(&format!(
            "{:>5} {:>6} {:>16} {:>16} {:>12} {:>12} {:>10} {:>9} {:>6}\n",
            "state", "parity", "kappa_analytic", "kappa_oracle", "abs_delta", "rel_delta", "overlap",
            "certified", "agrees"
        ));
        let cell = |v: Option<f64>, prec: usize| match v {
            Some(x) => format!("{x:.prec$e}"),
            None => "-".into(),
        };
        for r in &v.rows {
            s.push_str(&format!(
                "{:>5} {:>6} {:>16.10} {:>16} {:>12} {:>12} {:>10} {:>9} {:>6}\n",
                r.index,
                r.parity,
                r.kappa_analytic,
                r.kappa_oracle.map(|k| format!("{k:.10}")).unwrap_or("-".into()),
                cell(r.abs_delta, 3),
                cell(r.rel_delta, 3),
                r.overlap.map(|o| format!("{o:.6}")).unwrap_or("-".into()),
                if r.certified { "yes" } else { "no" },
                if r.agrees { "yes" } else { "no" },
            ));
        }
        for d in &self.diagnostics {
            s.push_str(&format!("note: {d}\n"));
        }
        s.push_str(&format!(
            "{}: {}/{} certified states agree\n",
            if v.passed { "PASS" } else { "FAIL" },
            v.agreed,
            v.certified
        ));
        Ok(s.into_bytes())
    }
}

/// Write to `path` through a temporary file in the same directory, or to
/// stdout when no path is given.
pub fn emit(bytes: &[u8], path: Option<&Path>) -> Result<(), CliError> {
    let Some(path) = path else {
        let mut out = std::io::stdout().lock();
        return out
            .write_all(bytes)
            .and_then(|_| out.flush())
            .map_err(|e| CliError::Io(format!("writing stdout: {e}")));
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| CliError::Io(format!("creating temporary file in {}: {e}", dir.display())))?;
    tmp.write_all(bytes)
        .and_then(|_| tmp.flush())
        .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))?;
    tmp.persist(path)
        .map_err(|e| CliError::Io(format!("renaming into {}: {e}", path.display())))?;
    Ok(())
}
