//! Finite-difference cross-check that uses no special functions.
//!
//! The dimensionless equation `-psi'' + V psi = E psi` is discretized with the
//! three-point Laplacian on `(-L, L)` with Dirichlet ends. The symmetric
//! tridiagonal matrix is solved by Sturm-sequence bisection, eigenvectors by
//! inverse iteration.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{potential_value, WellSpec};
use crate::wavefun::WavefunctionGrid;

/// States with `kappa d * L` below this are not resolved by the domain.
pub const CERTIFY_KAPPA_L: f64 = 10.0;
const DECAY_FLAG: f64 = 1e-8;
const BISECTION_STEPS: usize = 200;
const INVERSE_ITERATIONS: usize = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("invalid oracle configuration: {0}")]
    InvalidConfig(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
}

pub type Result<T> = std::result::Result<T, OracleError>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Half-width `L` of the domain in units of `d`.
    pub half_width_over_d: f64,
    /// Interior grid points; odd, so that `x = 0` is a node.
    pub points: usize,
    pub eigenvectors: bool,
}

impl OracleConfig {
    pub fn new(half_width_over_d: f64, points: usize) -> Result<Self> {
        let config = Self {
            half_width_over_d,
            points,
            eigenvectors: false,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_eigenvectors(mut self) -> Self {
        self.eigenvectors = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.half_width_over_d > 0.0 && self.half_width_over_d.is_finite()) {
            return Err(OracleError::InvalidConfig(format!(
                "half-width must be positive, got {}",
                self.half_width_over_d
            )));
        }
        if self.points < 3 || self.points % 2 == 0 {
            return Err(OracleError::InvalidConfig(format!(
                "points must be odd and at least 3, got {}",
                self.points
            )));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_width_over_d / (self.points + 1) as f64
    }

    /// The same domain with the step halved.
    pub fn refined(&self) -> Self {
        Self {
            points: 2 * self.points + 1,
            ..*self
        }
    }

    pub fn grid(&self) -> Vec<f64> {
        let h = self.step();
        let half = (self.points / 2) as i64;
        (-half..=half).map(|i| h * i as f64).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub config: OracleConfig,
    pub step: f64,
    /// Bound-state eigenvalues `E < V(∞)`, lowest first.
    pub energies: Vec<f64>,
    /// `sqrt(-E)`, sorted decreasing.
    pub eigen_kappa_d: Vec<f64>,
    /// `exp(-2 kappa d L) >= 1e-8`: the box walls perturb this state.
    pub domain_limited: Vec<bool>,
    /// Bound states below `V(∞)` on this grid, which may exceed the number
    /// reported.
    pub bound_count: usize,
    pub x_over_d: Option<Vec<f64>>,
    /// Unit-norm (`sum v^2 h = 1`) eigenvectors on `x_over_d`.
    pub eigenvectors: Option<Vec<Vec<f64>>>,
}

impl OracleResult {
    pub fn certified(&self, index: usize) -> bool {
        self.eigen_kappa_d
            .get(index)
            .is_some_and(|k| k * self.config.half_width_over_d >= CERTIFY_KAPPA_L)
    }
}

struct Tridiagonal {
    diag: Vec<f64>,
    off: f64,
}

impl Tridiagonal {
    fn new(spec: &WellSpec, config: &OracleConfig) -> Self {
        let h = config.step();
        let diag = config
            .grid()
            .iter()
            .map(|&x| 2.0 / (h * h) + potential_value(spec, x.abs()))
            .collect();
        Self {
            diag,
            off: -1.0 / (h * h),
        }
    }

    /// Number of eigenvalues strictly below `lambda`.
    fn count_below(&self, lambda: f64) -> usize {
        let e2 = self.off * self.off;
        let mut count = 0;
        let mut q = 1.0;
        for (i, &d) in self.diag.iter().enumerate() {
            q = if i == 0 { d - lambda } else { d - lambda - e2 / q };
            if q == 0.0 {
                q = -f64::EPSILON * (d.abs() + self.off.abs());
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn lower_bound(&self) -> f64 {
        self.diag.iter().copied().fold(f64::INFINITY, f64::min) - 2.0 * self.off.abs()
    }

    /// The `k`-th smallest eigenvalue, known to lie in `(lo, hi)`.
    fn eigenvalue(&self, k: usize, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Inverse iteration with a shift just below `lambda`.
    fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.diag.len();
        let shift = lambda - 1e-10 * lambda.abs().max(1e-6);
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 1e-3 * (i % 7) as f64).collect();
        let mut c = vec![0.0; n];
        let mut y = vec![0.0; n];
        for _ in 0..INVERSE_ITERATIONS {
            // Thomas algorithm on (T - shift) y = v
            let mut denom = self.diag[0] - shift;
            c[0] = self.off / denom;
            y[0] = v[0] / denom;
            for i in 1..n {
                denom = self.diag[i] - shift - self.off * c[i - 1];
                if denom == 0.0 {
                    denom = f64::EPSILON;
                }
                c[i] = self.off / denom;
                y[i] = (v[i] - self.off * y[i - 1]) / denom;
            }
            for i in (0..n - 1).rev() {
                y[i] -= c[i] * y[i + 1];
            }
            let norm = y.iter().map(|a| a * a).sum::<f64>().sqrt();
            for (vi, yi) in v.iter_mut().zip(&y) {
                *vi = yi / norm;
            }
        }
        v
    }
}

/// Lowest `n_states` bound states of the discretized problem.
pub fn solve_fd(spec: &WellSpec, config: &OracleConfig, n_states: usize) -> Result<OracleResult> {
    config.validate()?;
    let matrix = Tridiagonal::new(spec, config);
    let threshold = spec.threshold();
    let bound_count = matrix.count_below(threshold);
    let wanted = n_states.min(bound_count);
    let lo = matrix.lower_bound();
    let energies: Vec<f64> = (0..wanted)
        .map(|k| matrix.eigenvalue(k, lo, threshold))
        .collect();
    let eigen_kappa_d: Vec<f64> = energies.iter().map(|e| (-e).max(0.0).sqrt()).collect();
    let l = config.half_width_over_d;
    let domain_limited = eigen_kappa_d
        .iter()
        .map(|k| (-2.0 * k * l).exp() >= DECAY_FLAG)
        .collect();
    let (x_over_d, eigenvectors) = if config.eigenvectors {
        let h = config.step();
        let xs = config.grid();
        let vectors = energies
            .iter()
            .map(|&e| {
                let mut v = matrix.eigenvector(e);
                orient(&xs, &mut v);
                let scale = 1.0 / h.sqrt();
                v.iter_mut().for_each(|a| *a *= scale);
                v
            })
            .collect();
        (Some(xs), Some(vectors))
    } else {
        (None, None)
    };
    Ok(OracleResult {
        config: *config,
        step: config.step(),
        energies,
        eigen_kappa_d,
        domain_limited,
        bound_count,
        x_over_d,
        eigenvectors,
    })
}

/// Sign convention: the largest component on `x >= 0` is positive.
fn orient(xs: &[f64], v: &mut [f64]) {
    let pivot = xs
        .iter()
        .zip(v.iter())
        .filter(|(x, _)| **x >= 0.0)
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(_, &p)| p)
        .unwrap_or(1.0);
    if pivot < 0.0 {
        v.iter_mut().for_each(|a| *a = -*a);
    }
}

/// Eigenvalues from grids `h` and `h/2` combined as `(4 E_{h/2} - E_h) / 3`,
/// returned as `kappa d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extrapolated {
    pub coarse: OracleResult,
    pub fine: OracleResult,
    pub kappa_d: Vec<f64>,
}

pub fn solve_richardson(
    spec: &WellSpec,
    config: &OracleConfig,
    n_states: usize,
) -> Result<Extrapolated> {
    let coarse = solve_fd(spec, config, n_states)?;
    let fine_config = OracleConfig {
        eigenvectors: false,
        ..config.refined()
    };
    let fine = solve_fd(spec, &fine_config, n_states)?;
    let kappa_d = coarse
        .energies
        .iter()
        .zip(&fine.energies)
        .map(|(ec, ef)| (-(4.0 * ef - ec) / 3.0).max(0.0).sqrt())
        .collect();
    Ok(Extrapolated {
        coarse,
        fine,
        kappa_d,
    })
}

/// `|<psi_fd, psi_analytic>|` with both normalized on the shared grid.
pub fn overlap(oracle_vec: &[f64], oracle_x: &[f64], analytic: &WavefunctionGrid) -> Result<f64> {
    if oracle_vec.len() != oracle_x.len() {
        return Err(OracleError::GridMismatch(format!(
            "{} values on {} positions",
            oracle_vec.len(),
            oracle_x.len()
        )));
    }
    if analytic.x_over_d.len() != oracle_x.len() {
        return Err(OracleError::GridMismatch(format!(
            "analytic grid has {} points, oracle grid {}",
            analytic.x_over_d.len(),
            oracle_x.len()
        )));
    }
    if let Some((i, (a, b))) = oracle_x
        .iter()
        .zip(&analytic.x_over_d)
        .enumerate()
        .find(|(_, (a, b))| (*a - *b).abs() > 1e-12 * a.abs().max(1.0))
    {
        return Err(OracleError::GridMismatch(format!(
            "position {i} differs: {a} vs {b}"
        )));
    }
    let weights = trapezoid_weights(oracle_x);
    let dot = |p: &[f64], q: &[f64]| -> f64 {
        p.iter()
            .zip(q)
            .zip(&weights)
            .map(|((a, b), w)| a * b * w)
            .sum()
    };
    let pa = dot(oracle_vec, oracle_vec);
    let pb = dot(&analytic.psi, &analytic.psi);
    if !(pa > 0.0 && pb > 0.0) {
        return Err(OracleError::GridMismatch(
            "a vector vanishes on the grid".into(),
        ));
    }
    Ok((dot(oracle_vec, &analytic.psi).abs() / (pa * pb).sqrt()).min(1.0))
}

fn trapezoid_weights(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut w = vec![0.0; n];
    for i in 0..n.saturating_sub(1) {
        let half = 0.5 * (x[i + 1] - x[i]);
        w[i] += half;
        w[i + 1] += half;
    }
    if n == 1 {
        w[0] = 1.0;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(OracleConfig::new(10.0, 4).is_err());
        assert!(OracleConfig::new(10.0, 1).is_err());
        assert!(OracleConfig::new(-1.0, 11).is_err());
        let c = OracleConfig::new(10.0, 9).unwrap();
        assert_eq!(c.step(), 2.0);
        let g = c.grid();
        assert_eq!(g.len(), 9);
        assert_eq!(g[4], 0.0);
        assert_eq!(c.refined().step(), 1.0);
    }

    #[test]
    fn free_laplacian_spectrum() {
        // -psi'' on (-L, L): E_k = (2/h^2)(1 - cos(k pi / (n+1)))
        let matrix = Tridiagonal {
            diag: vec![2.0; 9],
            off: -1.0,
        };
        for k in 0..9 {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / 10.0).cos();
            let e = matrix.eigenvalue(k, matrix.lower_bound(), 5.0);
            assert!((e - exact).abs() < 1e-13);
        }
        assert_eq!(matrix.count_below(5.0), 9);
        assert_eq!(matrix.count_below(0.0), 0);
    }

    #[test]
    fn inverse_iteration_recovers_sine() {
        let matrix = Tridiagonal {
            diag: vec![2.0; 9],
            off: -1.0,
        };
        let e = 2.0 - 2.0 * (std::f64::consts::PI / 10.0).cos();
        let v = matrix.eigenvector(e);
        let norm: f64 = (1..=9)
            .map(|i| (i as f64 * std::f64::consts::PI / 10.0).sin().powi(2))
            .sum::<f64>()
            .sqrt();
        for (i, vi) in v.iter().enumerate() {
            let s = ((i + 1) as f64 * std::f64::consts::PI / 10.0).sin() / norm;
            assert!((vi.abs() - s).abs() < 1e-10);
        }
    }

    #[test]
    fn overlap_rejects_mismatched_grids() {
        let grid = WavefunctionGrid {
            state: crate::spectrum::BoundState::new(0, crate::spectrum::Parity::Even, 0.5),
            x_over_d: vec![-1.0, 0.0, 1.0],
            psi: vec![0.5, 1.0, 0.5],
            norm_constant: 1.0,
            tail_fraction: 0.0,
        };
        assert!(overlap(&[1.0, 2.0], &[0.0, 1.0], &grid).is_err());
        assert!(overlap(&[1.0, 2.0, 1.0], &[-1.0, 0.0, 1.5], &grid).is_err());
        let v = overlap(&[0.5, 1.0, 0.5], &[-1.0, 0.0, 1.0], &grid).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }
}
