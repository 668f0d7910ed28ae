//! Special functions needed by the closed-form bound states.
//!
//! Two independent evaluation routes exist for K and W:
//!
//! * the production route ([`bessel_k`], [`whittaker_w`]) starts from the
//!   large-argument asymptotic expansion and continues the solution of
//!   Whittaker's equation inward with Taylor-series steps. The decaying
//!   solution is the dominant one in that direction, so the continuation is
//!   stable, and it only involves the squared order, which keeps
//!   imaginary-order K real throughout;
//! * the connection-formula route ([`bessel_k_series`], [`whittaker_w_kummer`])
//!   combines the small-argument series I and M. It loses digits as the
//!   argument grows and is used to cross-check the production route.

mod bessel;
mod continuation;
mod gamma;
mod kummer;
mod quad;
mod whittaker;

pub use bessel::{
    bessel_i, bessel_i_complex, bessel_i_pair, bessel_k, bessel_k_pair, bessel_k_series,
    BesselOrder,
};
pub use gamma::{gamma, ln_gamma_complex, log_gamma, recip_gamma, LogGamma};
pub use kummer::kummer_m;
pub use whittaker::{
    whittaker_m, whittaker_w, whittaker_w_dz, whittaker_w_kummer, whittaker_w_pair,
    WhittakerParams,
};

pub(crate) use continuation::WhittakerOde;

use thiserror::Error;

/// Relative size below which a series term counts as negligible.
pub(crate) const SERIES_TOL: f64 = 1e-17;
/// Hard cap on series length.
pub(crate) const SERIES_MAX_TERMS: usize = 500;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("{function}: pole at {at}")]
    Pole { function: &'static str, at: f64 },
    #[error("{function}: argument out of domain ({reason})")]
    Domain {
        function: &'static str,
        reason: String,
    },
    #[error("{function}: result not representable")]
    Overflow { function: &'static str },
    #[error("{function}: no convergence after {terms} terms")]
    NoConvergence { function: &'static str, terms: usize },
    #[error("whittaker_w: degenerate parameters mu={mu}, nu={nu}")]
    Degenerate { mu: f64, nu: f64 },
}

pub type Result<T> = std::result::Result<T, SpecFunError>;

/// Sums a series whose terms come from `next_term`, stopping once three
/// consecutive terms are below `SERIES_TOL` relative to the partial sum.
pub(crate) fn sum_series<F>(function: &'static str, first: f64, mut next_term: F) -> Result<f64>
where
    F: FnMut(usize, f64) -> f64,
{
    let mut sum = first;
    let mut term = first;
    let mut quiet = 0;
    for k in 0..SERIES_MAX_TERMS {
        term = next_term(k, term);
        sum += term;
        if !sum.is_finite() {
            return Err(SpecFunError::Overflow { function });
        }
        if term.abs() <= SERIES_TOL * sum.abs() {
            quiet += 1;
            if quiet == 3 {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(SpecFunError::NoConvergence {
        function,
        terms: SERIES_MAX_TERMS,
    })
}
