//! Bound-state eigenvalues from the matching conditions at `x = 0`.
//!
//! For an even potential each eigenfunction is either odd (`psi(0) = 0`) or
//! even (`psi'(0) = 0`). With the half-axis solution `f(xi)` of the reduced
//! problem these become
//!
//! | well      | odd               | even                         |
//! |-----------|-------------------|------------------------------|
//! | Bessel    | `K_a(kd) = 0`     | `d/dxi [sqrt(xi) K_a] = 0`   |
//! | Whittaker | `W(2 kd) = 0`     | `W'(2 kd) = 0`               |
//!
//! The even Bessel condition is written with the derivative rather than the
//! `K_{a+1}/K_a` ratio so that it stays real for imaginary order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    reduce_any, reduce_at_decay, ModelError, ReducedKind, ReducedProblem, WellClass, WellSpec,
};
use crate::specfun::{bessel_k_pair, whittaker_w_pair, SpecFunError};

pub const DEFAULT_KAPPA_MIN: f64 = 1e-6;
const LOG_POINTS_PER_DECADE: usize = 400;
const LINEAR_POINTS: usize = 2000;
const BRACKET_REL_WIDTH: f64 = 1e-12;
const RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error("scan too coarse: {parity:?} condition changes sign twice within ({lo}, {hi})")]
    ScanResolution { parity: Parity, lo: f64, hi: f64 },
    #[error("parity ordering violated at state {index} (kappa d = {kappa_d}): expected {expected:?}")]
    ParityOrdering {
        index: usize,
        kappa_d: f64,
        expected: Parity,
    },
    #[error("invalid request: {0}")]
    InvalidRequest(String),
}

pub type Result<T> = std::result::Result<T, SpectrumError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(&self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    fn for_index(index: usize) -> Self {
        if index % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundState {
    pub index: usize,
    pub parity: Parity,
    pub kappa_d: f64,
    /// `-kappa_d^2` in units of `hbar^2/(2 m d^2)`, from the class's zero.
    pub energy_dimless: f64,
    pub node_count: usize,
}

impl BoundState {
    pub fn new(index: usize, parity: Parity, kappa_d: f64) -> Self {
        Self {
            index,
            parity,
            kappa_d,
            energy_dimless: -kappa_d * kappa_d,
            node_count: index,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub states: Vec<BoundState>,
    /// Fewer states than requested were found above `kappa_min`.
    pub possibly_incomplete: bool,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub kappa_min: f64,
    pub log_points_per_decade: usize,
    pub linear_points: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            kappa_min: DEFAULT_KAPPA_MIN,
            log_points_per_decade: LOG_POINTS_PER_DECADE,
            linear_points: LINEAR_POINTS,
        }
    }
}

/// Both matching residuals at effective decay constant `decay`.
fn conditions_at_decay(spec: &WellSpec, decay: f64) -> Result<(f64, f64)> {
    conditions(&reduce_at_decay(spec, decay)?)
}

fn conditions(reduced: &ReducedProblem) -> Result<(f64, f64)> {
    let xi = reduced.matching_argument();
    match reduced.kind {
        ReducedKind::Bessel => {
            let order = reduced.bessel_order.expect("Bessel reduction carries an order");
            let (k, dk) = bessel_k_pair(order, xi)?;
            let root = xi.sqrt();
            Ok((k, 0.5 * k / root + root * dk))
        }
        ReducedKind::Whittaker => {
            let params = reduced.whittaker.expect("Whittaker reduction carries parameters");
            Ok(whittaker_w_pair(params, xi)?)
        }
    }
}

/// Residual whose zeros are the odd-parity eigenvalues.
pub fn odd_condition(spec: &WellSpec, kappa_d: f64) -> Result<f64> {
    Ok(conditions(&reduce_any(spec, kappa_d)?)?.0)
}

/// Residual whose zeros are the even-parity eigenvalues.
pub fn even_condition(spec: &WellSpec, kappa_d: f64) -> Result<f64> {
    Ok(conditions(&reduce_any(spec, kappa_d)?)?.1)
}

fn condition_for(spec: &WellSpec, parity: Parity, decay: f64) -> Result<f64> {
    let (odd, even) = conditions_at_decay(spec, decay)?;
    Ok(match parity {
        Parity::Odd => odd,
        Parity::Even => even,
    })
}

fn uses_log_grid(spec: &WellSpec) -> bool {
    let c = spec.coefficients();
    // no Coulomb-like term, or an attractive 1/xi^2 strong enough to make nu imaginary
    c.a1 == 0.0 || c.a2 > 0.25
}

/// Scan points from the top of the allowed range downward.
fn scan_grid(spec: &WellSpec, options: &ScanOptions) -> Vec<f64> {
    let top = spec.decay_bound();
    let bottom = options.kappa_min;
    if !(top > bottom) {
        return Vec::new();
    }
    if uses_log_grid(spec) {
        let decades = (top / bottom).log10();
        let n = ((decades * options.log_points_per_decade as f64).ceil() as usize).max(1);
        let ratio = (bottom / top).ln() / n as f64;
        (0..=n).map(|i| top * (ratio * i as f64).exp()).collect()
    } else {
        let n = options.linear_points.max(2) - 1;
        let step = (top - bottom) / n as f64;
        (0..=n).map(|i| top - step * i as f64).collect()
    }
}

fn different_signs(a: f64, b: f64) -> bool {
    (a < 0.0) != (b < 0.0)
}

/// Bisection to a relative bracket width of `1e-12`, then one secant step
/// accepted only inside the bracket.
fn polish(
    spec: &WellSpec,
    parity: Parity,
    mut lo: f64,
    mut hi: f64,
    mut f_lo: f64,
    mut f_hi: f64,
) -> Result<f64> {
    while hi - lo > BRACKET_REL_WIDTH * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = condition_for(spec, parity, mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if different_signs(f_lo, f_mid) {
            hi = mid;
            f_hi = f_mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    let secant = lo - f_lo * (hi - lo) / (f_hi - f_lo);
    if secant > lo && secant < hi && secant.is_finite() {
        Ok(secant)
    } else {
        Ok(0.5 * (lo + hi))
    }
}

/// Bound states ordered by decreasing `kappa d`, at most `max_states` of them.
pub fn find_spectrum(spec: &WellSpec, max_states: usize, kappa_min: f64) -> Result<Spectrum> {
    find_spectrum_with(
        spec,
        max_states,
        &ScanOptions {
            kappa_min,
            ..ScanOptions::default()
        },
    )
}

pub fn find_spectrum_with(
    spec: &WellSpec,
    max_states: usize,
    options: &ScanOptions,
) -> Result<Spectrum> {
    if max_states == 0 {
        return Err(SpectrumError::InvalidRequest(
            "max_states must be at least 1".into(),
        ));
    }
    if !(options.kappa_min > 0.0 && options.kappa_min.is_finite()) {
        return Err(SpectrumError::InvalidRequest(format!(
            "kappa_min must be positive, got {}",
            options.kappa_min
        )));
    }
    let mut diagnostics = Vec::new();
    let grid = scan_grid(spec, options);
    if grid.is_empty() {
        diagnostics.push(format!(
            "kappa_min {} is above the depth bound {}",
            options.kappa_min,
            spec.decay_bound()
        ));
        return Ok(Spectrum {
            states: Vec::new(),
            possibly_incomplete: true,
            diagnostics,
        });
    }

    // (parity, decay)
    let mut roots: Vec<(Parity, f64)> = Vec::new();
    let mut prev = (grid[0], conditions_at_decay(spec, grid[0])?);
    let mut scan_stopped = false;
    for &g in &grid[1..] {
        let here = match conditions_at_decay(spec, g) {
            Ok(v) => v,
            Err(SpectrumError::SpecFun(e)) => {
                diagnostics.push(format!("scan stopped at kappa' d = {g:e}: {e}"));
                scan_stopped = true;
                break;
            }
            Err(e) => return Err(e),
        };
        let (hi, (odd_hi, even_hi)) = prev;
        let (odd_lo, even_lo) = here;
        for (parity, f_lo, f_hi) in [
            (Parity::Even, even_lo, even_hi),
            (Parity::Odd, odd_lo, odd_hi),
        ] {
            if !different_signs(f_lo, f_hi) {
                continue;
            }
            let root = polish(spec, parity, g, hi, f_lo, f_hi)?;
            let residual = condition_for(spec, parity, root)?;
            let scale = f_lo.abs().max(f_hi.abs());
            if residual.abs() > RESIDUAL_TOL * scale {
                diagnostics.push(format!(
                    "rejected {parity:?} sign change in ({g:e}, {hi:e}): residual {residual:e} is not a root"
                ));
                continue;
            }
            roots.push((parity, root));
        }
        prev = (g, here);
        if roots.len() >= max_states {
            break;
        }
    }

    roots.sort_by(|a, b| b.1.total_cmp(&a.1));
    check_alternation(spec, &roots)?;
    roots.truncate(max_states);

    let states: Vec<BoundState> = roots
        .iter()
        .enumerate()
        .map(|(i, &(parity, decay))| BoundState::new(i, parity, spec.kappa_from_decay(decay)))
        .collect();
    let possibly_incomplete = states.len() < max_states;
    if possibly_incomplete && !scan_stopped {
        diagnostics.push(format!(
            "found {} of {} requested states above kappa' d = {:e}; shallower states may exist",
            states.len(),
            max_states,
            options.kappa_min
        ));
    }
    Ok(Spectrum {
        states,
        possibly_incomplete,
        diagnostics,
    })
}

fn check_alternation(spec: &WellSpec, roots: &[(Parity, f64)]) -> Result<()> {
    for (i, pair) in roots.windows(2).enumerate() {
        if pair[0].0 == pair[1].0 {
            let missing = match pair[0].0 {
                Parity::Even => Parity::Odd,
                Parity::Odd => Parity::Even,
            };
            return Err(SpectrumError::ScanResolution {
                parity: missing,
                lo: spec.kappa_from_decay(pair[1].1),
                hi: spec.kappa_from_decay(pair[0].1),
            });
        }
        debug_assert!(i < roots.len());
    }
    if let Some(&(parity, decay)) = roots.first() {
        if parity != Parity::Even {
            return Err(SpectrumError::ParityOrdering {
                index: 0,
                kappa_d: spec.kappa_from_decay(decay),
                expected: Parity::Even,
            });
        }
    }
    for (i, &(parity, decay)) in roots.iter().enumerate() {
        if parity != Parity::for_index(i) {
            return Err(SpectrumError::ParityOrdering {
                index: i,
                kappa_d: spec.kappa_from_decay(decay),
                expected: Parity::for_index(i),
            });
        }
    }
    Ok(())
}

/// Same-parity level ratio `kappa_n / kappa_{n+2}` that the steep well
/// approaches near threshold when `u > 1/4`: `exp(pi / sqrt(u - 1/4))`.
pub fn accumulation_ratio(u: f64) -> Option<f64> {
    (u > 0.25).then(|| (std::f64::consts::PI / (u - 0.25).sqrt()).exp())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub u: f64,
    /// `(index, kappa d)` for the states found, lowest index first.
    pub states: Vec<(usize, f64)>,
    pub possibly_incomplete: bool,
    pub error: Option<String>,
}

impl SweepRow {
    pub fn kappa(&self, index: usize) -> Option<f64> {
        self.states
            .iter()
            .find(|(i, _)| *i == index)
            .map(|&(_, k)| k)
    }
}

/// Lowest `n_states` levels at every depth in `u_grid`, rows computed in
/// parallel. Per-row failures are recorded in the row.
pub fn sweep(class: WellClass, u_grid: &[f64], n_states: usize) -> Result<Vec<SweepRow>> {
    sweep_with(class, u_grid, n_states, &ScanOptions::default())
}

pub fn sweep_with(
    class: WellClass,
    u_grid: &[f64],
    n_states: usize,
    options: &ScanOptions,
) -> Result<Vec<SweepRow>> {
    if u_grid.iter().any(|&u| !(u > 0.0 && u.is_finite())) {
        return Err(SpectrumError::InvalidRequest(
            "all depths must be positive".into(),
        ));
    }
    if u_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SpectrumError::InvalidRequest(
            "depth grid must be strictly increasing".into(),
        ));
    }
    Ok(u_grid
        .par_iter()
        .map(|&u| {
            let outcome = WellSpec::new(class, u)
                .map_err(SpectrumError::from)
                .and_then(|spec| find_spectrum_with(&spec, n_states, options));
            match outcome {
                Ok(s) => SweepRow {
                    u,
                    states: s.states.iter().map(|b| (b.index, b.kappa_d)).collect(),
                    possibly_incomplete: s.possibly_incomplete,
                    error: None,
                },
                Err(e) => SweepRow {
                    u,
                    states: Vec::new(),
                    possibly_incomplete: true,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(p: i64, u: f64) -> WellSpec {
        WellSpec::from_p(p, u).unwrap()
    }

    #[test]
    fn steep_real_order_has_no_odd_states() {
        let s = spec(0, 0.2);
        let top = s.kappa_bound();
        let mut prev = odd_condition(&s, top).unwrap();
        for i in 1..400 {
            let k = top * (1e-5_f64).powf(i as f64 / 400.0);
            let v = odd_condition(&s, k).unwrap();
            assert!(v > 0.0 && prev > 0.0);
            prev = v;
        }
        let sp = find_spectrum(&s, 4, DEFAULT_KAPPA_MIN).unwrap();
        assert_eq!(sp.states.len(), 1);
        assert_eq!(sp.states[0].parity, Parity::Even);
        assert!(sp.possibly_incomplete);
    }

    #[test]
    fn alternation_errors() {
        let s = spec(1, 1.0);
        let err = check_alternation(&s, &[(Parity::Even, 0.4), (Parity::Even, 0.2)]).unwrap_err();
        assert!(matches!(err, SpectrumError::ScanResolution { parity: Parity::Odd, .. }));
        let err = check_alternation(&s, &[(Parity::Odd, 0.4), (Parity::Even, 0.2)]).unwrap_err();
        assert!(matches!(err, SpectrumError::ParityOrdering { index: 0, .. }));
    }

    #[test]
    fn invalid_requests() {
        let s = spec(1, 1.0);
        assert!(find_spectrum(&s, 0, 1e-6).is_err());
        assert!(find_spectrum(&s, 4, 0.0).is_err());
        assert!(sweep(WellClass::Double, &[1.0, 0.5], 4).is_err());
        assert!(sweep(WellClass::Double, &[-1.0], 4).is_err());
    }

    #[test]
    fn kappa_min_above_bound_is_empty() {
        let sp = find_spectrum(&spec(1, 1.0), 4, 0.9).unwrap();
        assert!(sp.states.is_empty());
        assert!(sp.possibly_incomplete);
    }

    #[test]
    fn energy_is_minus_kappa_squared() {
        let b = BoundState::new(2, Parity::Even, 0.3);
        assert_eq!(b.energy_dimless, -0.09);
        assert_eq!(b.node_count, 2);
    }
}
