//! Command implementations behind the `exactwell` binary.

pub mod args;
pub mod record;

use std::time::{SystemTime, UNIX_EPOCH};

use exactwell::model::{WellClass, WellSpec};
use exactwell::oracle::{overlap, solve_richardson, OracleConfig, CERTIFY_KAPPA_L};
use exactwell::spectrum::{find_spectrum, sweep_with, BoundState, Parity, ScanOptions};
use exactwell::wavefun::{count_nodes, default_extent, normalize, normalize_on};
use thiserror::Error;

use args::{Command, Format, OutputArgs, SolveArgs, SweepArgs, VerifyArgs, WavefunctionArgs, WellArgs};
use record::{
    emit, sig12, ExtensionEcho, Record, Results, SpecEcho, StateRow, SweepRowOut, Units,
    VerifyOut, VerifyRow, WavefunctionOut, SCHEMA_VERSION,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_SOLVER: u8 = 3;
pub const EXIT_VERIFY: u8 = 4;

const OVERLAP_REPORT_MIN: f64 = 0.999;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Solver(String),
    #[error("verification failed: {0}")]
    Verify(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Solver(_) | CliError::Io(_) => EXIT_SOLVER,
            CliError::Verify(_) => EXIT_VERIFY,
        }
    }
}

fn solver<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Solver(e.to_string())
}

/// Runs one command, writing its output. Diagnostics that do not belong in
/// the output go to stderr.
pub fn run(command: &Command) -> Result<(), CliError> {
    let echo = serde_json::to_value(command).map_err(|e| CliError::Io(e.to_string()))?;
    let (record, format, output, outcome) = match command {
        Command::Solve(a) => (solve(a, echo)?, a.format, &a.output, Ok(())),
        Command::Sweep(a) => (sweep(a, echo)?, a.format, &a.output, Ok(())),
        Command::Wavefunction(a) => (wavefunction(a, echo)?, a.format, &a.output, Ok(())),
        Command::Verify(a) => {
            let record = verify(a, echo)?;
            let outcome = match &record.results {
                Results::Verify(v) if !v.passed => Err(CliError::Verify(format!(
                    "{}/{} certified states agree",
                    v.agreed, v.certified
                ))),
                _ => Ok(()),
            };
            (record, a.format, &a.output, outcome)
        }
    };
    let record = stamp(record, output);
    let bytes = match format {
        Format::Json => record.to_json()?,
        Format::Csv => {
            for d in &record.diagnostics {
                eprintln!("note: {d}");
            }
            record.to_csv()?
        }
        Format::Table => record.to_table()?,
    };
    emit(&bytes, output.out.as_deref())?;
    outcome
}

fn stamp(mut record: Record, output: &OutputArgs) -> Record {
    if output.stamp {
        record.generated_unix = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .ok()
            .map(|d| d.as_secs());
    }
    record
}

fn class_of(class: u8) -> Result<WellClass, CliError> {
    WellClass::from_p(class as i64).map_err(|e| CliError::Usage(e.to_string()))
}

fn build_spec(well: &WellArgs, depth: f64) -> Result<WellSpec, CliError> {
    let spec = WellSpec::new(class_of(well.class)?, depth)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    match (well.u1, well.q) {
        (Some(u1), Some(q)) => spec
            .with_extension(u1, q)
            .map_err(|e| CliError::Usage(e.to_string())),
        _ => Ok(spec),
    }
}

fn spec_echo(spec: &WellSpec) -> SpecEcho {
    SpecEcho {
        class: spec.class.p(),
        depth: spec.u,
        extension: spec.extension.map(|e| ExtensionEcho { u1: e.u1, q: e.q }),
        reference: match spec.class {
            WellClass::Shallow => "shifted".into(),
            _ => "continuum".into(),
        },
    }
}

fn parity_name(p: Parity) -> String {
    match p {
        Parity::Even => "even".into(),
        Parity::Odd => "odd".into(),
    }
}

fn state_row(b: &BoundState, units: Option<&Units>) -> StateRow {
    StateRow {
        index: b.index,
        parity: parity_name(b.parity),
        kappa_d: sig12(b.kappa_d),
        energy: sig12(b.energy_dimless),
        node_count: b.node_count,
        energy_mev: units.map(|u| sig12(b.energy_dimless * u.energy_scale)),
    }
}

fn solve(a: &SolveArgs, echo: serde_json::Value) -> Result<Record, CliError> {
    let spec = build_spec(&a.well, a.depth)?;
    let spectrum = find_spectrum(&spec, a.states as usize, a.kappa_min).map_err(solver)?;
    let units = match (a.units.mass, a.units.width) {
        (Some(m), Some(w)) => Some(Units::new(m, w)),
        _ => None,
    };
    let states = spectrum
        .states
        .iter()
        .map(|b| state_row(b, units.as_ref()))
        .collect();
    Ok(Record {
        schema_version: SCHEMA_VERSION.into(),
        command: echo,
        spec: Some(spec_echo(&spec)),
        units,
        results: Results::States { states },
        diagnostics: spectrum.diagnostics,
        generated_unix: None,
    })
}

/// Depth grid for a sweep, strictly increasing.
pub fn depth_grid(min: f64, max: f64, steps: usize, log: bool) -> Result<Vec<f64>, CliError> {
    if steps == 1 {
        return Ok(vec![min]);
    }
    if !(max > min) {
        return Err(CliError::Usage(format!(
            "--depth-max ({max}) must exceed --depth-min ({min}) when --steps > 1"
        )));
    }
    let n = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| {
            let f = i as f64 / n;
            if i == steps - 1 {
                max
            } else if log {
                min * (max / min).powf(f)
            } else {
                min + (max - min) * f
            }
        })
        .collect())
}

fn sweep(a: &SweepArgs, echo: serde_json::Value) -> Result<Record, CliError> {
    let class = class_of(a.class)?;
    let grid = depth_grid(a.depth_min, a.depth_max, a.steps as usize, a.log)?;
    let n = a.states as usize;
    let options = ScanOptions {
        kappa_min: a.kappa_min,
        ..ScanOptions::default()
    };
    let rows = sweep_with(class, &grid, n, &options).map_err(|e| CliError::Usage(e.to_string()))?;
    if rows.iter().all(|r| r.error.is_some()) {
        return Err(CliError::Solver(format!(
            "every sweep row failed; first error: {}",
            rows[0].error.as_deref().unwrap_or("unknown")
        )));
    }
    let diagnostics = rows
        .iter()
        .filter_map(|r| r.error.as_ref().map(|e| format!("u = {}: {e}", r.u)))
        .collect();
    let rows = rows
        .iter()
        .map(|r| SweepRowOut {
            u: sig12(r.u),
            kappa_d: (0..n).map(|i| r.kappa(i).map(sig12)).collect(),
            possibly_incomplete: r.possibly_incomplete,
            error: r.error.clone(),
        })
        .collect();
    Ok(Record {
        schema_version: SCHEMA_VERSION.into(),
        command: echo,
        spec: None,
        units: None,
        results: Results::Sweep { n_states: n, rows },
        diagnostics,
        generated_unix: None,
    })
}

fn wavefunction(a: &WavefunctionArgs, echo: serde_json::Value) -> Result<Record, CliError> {
    let spec = build_spec(&a.well, a.depth)?;
    let k = a.state as usize;
    let spectrum = find_spectrum(&spec, k + 1, a.kappa_min).map_err(solver)?;
    let Some(state) = spectrum.states.get(k).copied() else {
        return Err(CliError::Solver(format!(
            "state {k} not found: only {} bound states above kappa d = {:e}",
            spectrum.states.len(),
            a.kappa_min
        )));
    };
    let x_max = match a.xmax {
        Some(x) => x,
        None => default_extent(&spec, &state).map_err(solver)?,
    };
    let grid = normalize(&spec, &state, x_max, a.samples as usize).map_err(solver)?;
    let nodes = count_nodes(&grid).map_err(solver)?;
    let mut diagnostics = Vec::new();
    if nodes != state.index {
        diagnostics.push(format!(
            "counted {nodes} nodes for state {k}; the grid may be too coarse"
        ));
    }
    let psi: Vec<f64> = grid.psi.iter().map(|&p| sig12(p)).collect();
    let density = a.density.then(|| psi.iter().map(|p| sig12(p * p)).collect());
    Ok(Record {
        schema_version: SCHEMA_VERSION.into(),
        command: echo,
        spec: Some(spec_echo(&spec)),
        units: None,
        results: Results::Wavefunction(WavefunctionOut {
            state: state_row(&state, None),
            norm_constant: sig12(grid.norm_constant),
            tail_fraction: sig12(grid.tail_fraction),
            nodes,
            x_over_d: grid.x_over_d.iter().map(|&x| sig12(x)).collect(),
            psi,
            density,
        }),
        diagnostics,
        generated_unix: None,
    })
}

fn verify(a: &VerifyArgs, echo: serde_json::Value) -> Result<Record, CliError> {
    let spec = build_spec(&a.well, a.depth)?;
    let half_width = a
        .halfwidth
        .unwrap_or(if spec.class == WellClass::Steep { 200.0 } else { 60.0 });
    let config = OracleConfig::new(half_width, a.grid as usize)
        .map_err(|e| CliError::Usage(e.to_string()))?
        .with_eigenvectors();
    let analytic = find_spectrum(&spec, a.states as usize, a.kappa_min).map_err(solver)?;
    let oracle = solve_richardson(&spec, &config, analytic.states.len()).map_err(solver)?;
    let xs = oracle.coarse.x_over_d.clone().unwrap_or_default();
    let vectors = oracle.coarse.eigenvectors.clone().unwrap_or_default();

    let mut diagnostics = analytic.diagnostics.clone();
    let mut rows = Vec::new();
    for b in &analytic.states {
        let certified = b.kappa_d * half_width >= CERTIFY_KAPPA_L;
        let kappa_oracle = oracle.kappa_d.get(b.index).copied();
        let abs_delta = kappa_oracle.map(|k| (k - b.kappa_d).abs());
        let rel_delta = abs_delta.map(|d| d / b.kappa_d);
        let overlap = match vectors.get(b.index) {
            Some(v) => {
                let g = normalize_on(&spec, b, &xs).map_err(solver)?;
                Some(overlap(v, &xs, &g).map_err(solver)?)
            }
            None => None,
        };
        let agrees = rel_delta.is_some_and(|r| r <= a.tolerance);
        if !certified {
            diagnostics.push(format!(
                "state {} domain-limited: kappa d * L = {:.3} < {CERTIFY_KAPPA_L}",
                b.index,
                b.kappa_d * half_width
            ));
        } else if overlap.is_some_and(|o| o < OVERLAP_REPORT_MIN) {
            diagnostics.push(format!(
                "state {} eigenvector overlap {:.6} below {OVERLAP_REPORT_MIN}",
                b.index,
                overlap.unwrap_or_default()
            ));
        }
        rows.push(VerifyRow {
            index: b.index,
            parity: parity_name(b.parity),
            kappa_analytic: sig12(b.kappa_d),
            kappa_oracle: kappa_oracle.map(sig12),
            abs_delta: abs_delta.map(sig12),
            rel_delta: rel_delta.map(sig12),
            overlap: overlap.map(sig12),
            certified,
            agrees,
        });
    }
    let certified = rows.iter().filter(|r| r.certified).count();
    let agreed = rows.iter().filter(|r| r.certified && r.agrees).count();
    Ok(Record {
        schema_version: SCHEMA_VERSION.into(),
        command: echo,
        spec: Some(spec_echo(&spec)),
        units: None,
        results: Results::Verify(VerifyOut {
            half_width,
            points: config.points,
            tolerance: a.tolerance,
            rows,
            certified,
            agreed,
            passed: certified > 0 && agreed == certified,
        }),
        diagnostics,
        generated_unix: None,
    })
}
