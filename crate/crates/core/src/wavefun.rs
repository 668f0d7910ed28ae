//! Closed-form eigenfunctions: evaluation, normalization, node counting.
//!
//! On each half-axis the solution is `f(t) = W_{mu,nu}(2 kappa' d (1 + t))`,
//! with `t = |x|/d`. The Bessel wells fit the same form through
//! `sqrt(xi) K_a(xi) = sqrt(pi/2) W_{0,a}(2 xi)`, so one inward continuation
//! samples every class.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{reduce_any, ModelError, ReducedKind, WellSpec};
use crate::specfun::{SpecFunError, WhittakerOde, WhittakerParams};
use crate::spectrum::{BoundState, Parity};

pub const DEFAULT_SAMPLES: usize = 4001;
pub const DEFAULT_EXTENT: f64 = 40.0;
const MAX_TAIL_FRACTION: f64 = 0.01;
const MIN_SAMPLES_BETWEEN_NODES: usize = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WavefunctionError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error("analytic tail carries {fraction:.3e} of the norm; increase x_max (currently {x_max})")]
    TailDominated { fraction: f64, x_max: f64 },
    #[error("sign changes at samples {first} and {second} are too close to resolve nodes")]
    NodeResolution { first: usize, second: usize },
    #[error("invalid request: {0}")]
    InvalidRequest(String),
}

pub type Result<T> = std::result::Result<T, WavefunctionError>;

/// A normalized eigenfunction sampled on a grid symmetric about `x = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WavefunctionGrid {
    pub state: BoundState,
    pub x_over_d: Vec<f64>,
    pub psi: Vec<f64>,
    /// Factor taking `eval_unnormalized` to the normalized `psi`.
    pub norm_constant: f64,
    /// Share of the norm carried by the analytic tail beyond the grid.
    pub tail_fraction: f64,
}

impl WavefunctionGrid {
    pub fn density(&self) -> Vec<f64> {
        self.psi.iter().map(|p| p * p).collect()
    }
}

/// Half-axis sampler for one state.
struct HalfAxis {
    ode: WhittakerOde,
    prefactor: f64,
    decay: f64,
    mu: f64,
}

impl HalfAxis {
    fn new(spec: &WellSpec, state: &BoundState) -> Result<Self> {
        let reduced = reduce_any(spec, state.kappa_d)?;
        let (params, prefactor) = match reduced.kind {
            ReducedKind::Bessel => {
                let order = reduced.bessel_order.expect("Bessel reduction carries an order");
                (
                    WhittakerParams::from_nu_squared(0.0, order.squared())?,
                    std::f64::consts::FRAC_PI_2.sqrt(),
                )
            }
            ReducedKind::Whittaker => (
                reduced.whittaker.expect("Whittaker reduction carries parameters"),
                1.0,
            ),
        };
        Ok(Self {
            ode: WhittakerOde::new(params.mu, params.nu_sq),
            prefactor,
            decay: reduced.decay,
            mu: params.mu,
        })
    }

    fn z(&self, t: f64) -> f64 {
        2.0 * self.decay * (1.0 + t)
    }

    fn value(&self, t: f64) -> Result<f64> {
        Ok(self.prefactor * self.ode.eval(self.z(t))?.value()?)
    }

    /// `f(t)` at ascending `ts`, each multiplied by `exp(-shift)`, where
    /// `shift` is returned and keeps the largest sample of order one.
    fn sample(&self, ts: &[f64]) -> Result<(Vec<f64>, f64)> {
        let zs: Vec<f64> = ts.iter().rev().map(|&t| self.z(t)).collect();
        let scaled = self.ode.sample_descending(&zs)?;
        let logs: Vec<f64> = scaled
            .iter()
            .map(|s| s.log_scale + s.w.abs().ln())
            .collect();
        let shift = logs
            .iter()
            .copied()
            .filter(|v| v.is_finite())
            .fold(f64::NEG_INFINITY, f64::max);
        let shift = if shift.is_finite() { shift } else { 0.0 };
        let mut out: Vec<f64> = scaled
            .iter()
            .map(|s| self.prefactor * s.w * (s.log_scale - shift).exp())
            .collect();
        out.reverse();
        Ok((out, shift))
    }

    /// `-d ln f^2 / dt` from the large-argument form `W ~ z^mu e^(-z/2)`.
    fn tail_rate(&self, t: f64) -> f64 {
        2.0 * self.decay * (1.0 - 2.0 * self.mu / self.z(t)).max(0.5)
    }
}

/// Closed-form `psi(x/d)` before normalization: `sqrt(xi) K_a(xi)` or
/// `W_{mu,nu}(2 kappa' d (1 + |x|/d))` on each side, mirrored by parity.
pub fn eval_unnormalized(spec: &WellSpec, state: &BoundState, x_over_d: f64) -> Result<f64> {
    if !x_over_d.is_finite() {
        return Err(WavefunctionError::InvalidRequest(format!(
            "position must be finite, got {x_over_d}"
        )));
    }
    if x_over_d == 0.0 && state.parity == Parity::Odd {
        return Ok(0.0);
    }
    let f = HalfAxis::new(spec, state)?.value(x_over_d.abs())?;
    Ok(if x_over_d < 0.0 { state.parity.sign() * f } else { f })
}

/// Half-axis nodes uniform in `s = ln(1 + t)`: fine near the well, coarse in
/// the exponential tail. `samples` is rounded up to an odd count.
fn half_axis_grid(x_max: f64, samples: usize) -> (Vec<f64>, f64) {
    let n = if samples % 2 == 0 { samples + 1 } else { samples };
    let s_max = x_max.ln_1p();
    let ds = s_max / (n - 1) as f64;
    let mut ts: Vec<f64> = (0..n).map(|i| (ds * i as f64).exp_m1()).collect();
    ts[n - 1] = x_max;
    (ts, ds)
}

/// Composite Simpson of `g(t)` over the `ln(1+t)` grid.
fn simpson_graded(ts: &[f64], g: &[f64], ds: f64) -> f64 {
    let n = ts.len();
    let mut sum = g[0] * (1.0 + ts[0]) + g[n - 1] * (1.0 + ts[n - 1]);
    for i in 1..n - 1 {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * g[i] * (1.0 + ts[i]);
    }
    sum * ds / 3.0
}

fn check_request(state: &BoundState, x_max: f64, samples: usize) -> Result<()> {
    if !(state.kappa_d > 0.0 && state.kappa_d.is_finite()) {
        return Err(WavefunctionError::InvalidRequest(format!(
            "state has invalid kappa d = {}",
            state.kappa_d
        )));
    }
    if !(x_max > 0.0 && x_max.is_finite()) {
        return Err(WavefunctionError::InvalidRequest(format!(
            "x_max must be positive, got {x_max}"
        )));
    }
    if samples < 5 {
        return Err(WavefunctionError::InvalidRequest(format!(
            "need at least 5 samples per half-axis, got {samples}"
        )));
    }
    Ok(())
}

/// Normalized half-axis samples: `(t, f(t) / sqrt(norm), norm_constant, tail_fraction)`.
struct Normalized {
    ts: Vec<f64>,
    values: Vec<f64>,
    norm_constant: f64,
    tail_fraction: f64,
}

fn normalized_half_axis(
    spec: &WellSpec,
    state: &BoundState,
    x_max: f64,
    samples: usize,
) -> Result<Normalized> {
    check_request(state, x_max, samples)?;
    let half = HalfAxis::new(spec, state)?;
    let (ts, ds) = half_axis_grid(x_max, samples);
    let (mut values, shift) = half.sample(&ts)?;
    if state.parity == Parity::Odd {
        values[0] = 0.0;
    }
    let squares: Vec<f64> = values.iter().map(|v| v * v).collect();
    let body = simpson_graded(&ts, &squares, ds);
    let last = squares[squares.len() - 1];
    let tail = last / half.tail_rate(x_max);
    let half_norm = body + tail;
    if !(half_norm > 0.0 && half_norm.is_finite()) {
        return Err(WavefunctionError::InvalidRequest(
            "wavefunction vanishes on the grid".into(),
        ));
    }
    let tail_fraction = tail / half_norm;
    if tail_fraction > MAX_TAIL_FRACTION {
        return Err(WavefunctionError::TailDominated {
            fraction: tail_fraction,
            x_max,
        });
    }
    // full-line norm is twice the half-axis integral
    let scale = 1.0 / (2.0 * half_norm).sqrt();
    for v in &mut values {
        *v *= scale;
    }
    Ok(Normalized {
        ts,
        values,
        norm_constant: scale * (-shift).exp(),
        tail_fraction,
    })
}

/// Default extent `40 / kappa' d`.
pub fn default_extent(spec: &WellSpec, state: &BoundState) -> Result<f64> {
    Ok(DEFAULT_EXTENT / spec.decay_from_kappa(state.kappa_d)?)
}

/// Unit-norm eigenfunction on a symmetric grid with `samples` points per
/// half-axis (including `x = 0`) out to `x_max_over_d`.
pub fn normalize(
    spec: &WellSpec,
    state: &BoundState,
    x_max_over_d: f64,
    samples: usize,
) -> Result<WavefunctionGrid> {
    let half = normalized_half_axis(spec, state, x_max_over_d, samples)?;
    let n = half.ts.len();
    let sign = state.parity.sign();
    let mut x_over_d = Vec::with_capacity(2 * n - 1);
    let mut psi = Vec::with_capacity(2 * n - 1);
    for i in (1..n).rev() {
        x_over_d.push(-half.ts[i]);
        psi.push(sign * half.values[i]);
    }
    x_over_d.extend_from_slice(&half.ts);
    psi.extend_from_slice(&half.values);
    Ok(WavefunctionGrid {
        state: *state,
        x_over_d,
        psi,
        norm_constant: half.norm_constant,
        tail_fraction: half.tail_fraction,
    })
}

/// `normalize` with the default extent and sample count.
pub fn normalize_default(spec: &WellSpec, state: &BoundState) -> Result<WavefunctionGrid> {
    normalize(spec, state, default_extent(spec, state)?, DEFAULT_SAMPLES)
}

/// Normalized eigenfunction at arbitrary positions, for comparison against
/// data on a foreign grid. The norm comes from the default graded grid.
pub fn normalize_on(
    spec: &WellSpec,
    state: &BoundState,
    x_over_d: &[f64],
) -> Result<WavefunctionGrid> {
    if x_over_d.iter().any(|x| !x.is_finite()) {
        return Err(WavefunctionError::InvalidRequest(
            "positions must be finite".into(),
        ));
    }
    let reference = normalize_default(spec, state)?;
    let half = HalfAxis::new(spec, state)?;
    let mut order: Vec<usize> = (0..x_over_d.len()).collect();
    order.sort_by(|&a, &b| x_over_d[a].abs().total_cmp(&x_over_d[b].abs()));
    let ts: Vec<f64> = order.iter().map(|&i| x_over_d[i].abs()).collect();
    let (values, shift) = half.sample(&ts)?;
    let factor = reference.norm_constant * shift.exp();
    let mut psi = vec![0.0; x_over_d.len()];
    for (&i, v) in order.iter().zip(values) {
        let x = x_over_d[i];
        psi[i] = if x == 0.0 && state.parity == Parity::Odd {
            0.0
        } else if x < 0.0 {
            state.parity.sign() * factor * v
        } else {
            factor * v
        };
    }
    Ok(WavefunctionGrid {
        state: *state,
        x_over_d: x_over_d.to_vec(),
        psi,
        ..reference
    })
}

/// Strict sign changes across the whole grid. A sample that is exactly zero
/// (the odd-parity origin) is skipped, so it counts once.
pub fn count_nodes(grid: &WavefunctionGrid) -> Result<usize> {
    let mut changes: Vec<usize> = Vec::new();
    let mut last: Option<(usize, bool)> = None;
    for (i, &p) in grid.psi.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let negative = p < 0.0;
        if let Some((_, prev)) = last {
            if prev != negative {
                changes.push(i);
            }
        }
        last = Some((i, negative));
    }
    for w in changes.windows(2) {
        if w[1] - w[0] < MIN_SAMPLES_BETWEEN_NODES {
            return Err(WavefunctionError::NodeResolution {
                first: w[0],
                second: w[1],
            });
        }
    }
    Ok(changes.len())
}

/// `∫ psi_a psi_b dx/d` over the full line, both states normalized on a
/// common grid wide enough for the more extended one.
pub fn inner_product(
    spec: &WellSpec,
    a: &BoundState,
    b: &BoundState,
    samples: usize,
) -> Result<f64> {
    if a.parity != b.parity {
        return Ok(0.0);
    }
    let x_max = default_extent(spec, a)?.max(default_extent(spec, b)?);
    let na = normalized_half_axis(spec, a, x_max, samples)?;
    let nb = normalized_half_axis(spec, b, x_max, samples)?;
    let (_, ds) = half_axis_grid(x_max, samples);
    let products: Vec<f64> = na.values.iter().zip(&nb.values).map(|(p, q)| p * q).collect();
    Ok(2.0 * simpson_graded(&na.ts, &products, ds))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_grid_is_odd_and_ends_at_extent() {
        let (ts, ds) = half_axis_grid(100.0, 10);
        assert_eq!(ts.len(), 11);
        assert_eq!(ts[0], 0.0);
        assert_eq!(ts[10], 100.0);
        assert!((ds - 101f64.ln() / 10.0).abs() < 1e-15);
    }

    #[test]
    fn simpson_is_exact_for_the_exponential_weight() {
        // ∫_0^T e^{-t} dt with the graded substitution
        let (ts, ds) = half_axis_grid(30.0, 2001);
        let g: Vec<f64> = ts.iter().map(|t| (-t).exp()).collect();
        let v = simpson_graded(&ts, &g, ds);
        assert!((v - (1.0 - (-30.0f64).exp())).abs() < 1e-10);
    }

    #[test]
    fn node_counting_skips_exact_zero() {
        let state = BoundState::new(1, Parity::Odd, 0.3);
        let grid = WavefunctionGrid {
            state,
            x_over_d: vec![-2.0, -1.0, 0.0, 1.0, 2.0],
            psi: vec![-0.2, -0.1, 0.0, 0.1, 0.2],
            norm_constant: 1.0,
            tail_fraction: 0.0,
        };
        assert_eq!(count_nodes(&grid).unwrap(), 1);
        let jagged = WavefunctionGrid {
            psi: vec![1.0, -1.0, 1.0, -1.0, 1.0],
            ..grid
        };
        assert!(matches!(
            count_nodes(&jagged),
            Err(WavefunctionError::NodeResolution { .. })
        ));
    }

    #[test]
    fn invalid_requests() {
        let spec = WellSpec::from_p(1, 1.0).unwrap();
        let state = BoundState::new(0, Parity::Even, 0.4079);
        assert!(normalize(&spec, &state, -1.0, 101).is_err());
        assert!(normalize(&spec, &state, 10.0, 3).is_err());
        assert!(eval_unnormalized(&spec, &state, f64::NAN).is_err());
    }
}
