//! The potential family and its reduction to Bessel's or Whittaker's
//! equation.
//!
//! Everything is dimensionless: lengths in units of the well width `d`,
//! energies in units of `hbar^2 / (2 m d^2)`, so the depth is `u = U0 d^2`
//! and a bound state at energy `-kappa^2` is labelled by `kappa d`.
//!
//! With `r = 1/(1 + |x|/d)` every member of the family (including the
//! optional `t^q/(1+t)` term) has `-V = a0 + a1 r + a2 r^2`. Substituting
//! `xi = 2 kappa' d (1 + |x|/d)` with `kappa'^2 = kappa^2 - a0` turns the
//! Schrödinger equation into Whittaker's equation with
//!
//! ```text
//! mu = a1 / (2 kappa' d),    nu^2 = 1/4 - a2
//! ```
//!
//! The steep well (`a1 = 0`) is the Bessel case `W_{0,alpha}(2 xi) ∝ sqrt(xi) K_alpha(xi)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::specfun::{BesselOrder, WhittakerParams};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("unsupported well class {0}; expected 0, 1 or 2")]
    UnsupportedClass(i64),
    #[error("depth must be positive and finite, got {0}")]
    InvalidDepth(f64),
    #[error("invalid extension: {0}")]
    InvalidExtension(String),
    #[error("kappa d must be positive and finite, got {0}")]
    InvalidKappa(f64),
    #[error("spec has an extension term; use reduce_extended")]
    ExtensionPresent,
    #[error("spec has no extension term")]
    ExtensionMissing,
    #[error("kappa d = {kappa_d} lies at or above the continuum threshold sqrt({threshold})")]
    NoDecay { kappa_d: f64, threshold: f64 },
}

/// The three exactly solvable shapes, by the exponent `p` in `t^p/(1+t)^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WellClass {
    /// `p = 0`: cusp-like well falling off as `1/t^2`.
    Steep,
    /// `p = 1`: double well with a zero-height barrier at the origin.
    Double,
    /// `p = 2`, with the energy zero shifted so that `V(∞) = 0` and `V(0) = -u`.
    Shallow,
}

impl WellClass {
    pub fn from_p(p: i64) -> Result<Self, ModelError> {
        match p {
            0 => Ok(WellClass::Steep),
            1 => Ok(WellClass::Double),
            2 => Ok(WellClass::Shallow),
            other => Err(ModelError::UnsupportedClass(other)),
        }
    }

    pub fn p(&self) -> u8 {
        match self {
            WellClass::Steep => 0,
            WellClass::Double => 1,
            WellClass::Shallow => 2,
        }
    }
}

/// Extra `-u1 t^q / (1 + t)` term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extension {
    pub u1: f64,
    pub q: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WellSpec {
    pub class: WellClass,
    pub u: f64,
    pub extension: Option<Extension>,
}

/// `-V = a0 + a1 r + a2 r^2` with `r = 1/(1+t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
}

impl WellSpec {
    pub fn new(class: WellClass, u: f64) -> Result<Self, ModelError> {
        if !(u > 0.0 && u.is_finite()) {
            return Err(ModelError::InvalidDepth(u));
        }
        Ok(Self {
            class,
            u,
            extension: None,
        })
    }

    pub fn from_p(p: i64, u: f64) -> Result<Self, ModelError> {
        Self::new(WellClass::from_p(p)?, u)
    }

    pub fn with_extension(mut self, u1: f64, q: u8) -> Result<Self, ModelError> {
        if !(u1 >= 0.0 && u1.is_finite()) {
            return Err(ModelError::InvalidExtension(format!(
                "u1 must be non-negative, got {u1}"
            )));
        }
        if q > 1 {
            return Err(ModelError::InvalidExtension(format!(
                "q must be 0 or 1, got {q}"
            )));
        }
        self.extension = Some(Extension { u1, q });
        Ok(self)
    }

    pub fn coefficients(&self) -> Coefficients {
        let u = self.u;
        let (mut a0, mut a1, a2) = match self.class {
            WellClass::Steep => (0.0, 0.0, u),
            // t/(1+t)^2 = r - r^2
            WellClass::Double => (0.0, u, -u),
            // 1 - t^2/(1+t)^2 = 2r - r^2
            WellClass::Shallow => (0.0, 2.0 * u, -u),
        };
        if let Some(Extension { u1, q }) = self.extension {
            if q == 0 {
                a1 += u1;
            } else {
                // t/(1+t) = 1 - r
                a0 += u1;
                a1 -= u1;
            }
        }
        Coefficients { a0, a1, a2 }
    }

    /// Energy of the continuum edge, `V(t -> ∞)`.
    pub fn threshold(&self) -> f64 {
        -self.coefficients().a0
    }

    /// Minimum of the potential over `t >= 0`.
    pub fn potential_min(&self) -> f64 {
        let Coefficients { a0, a1, a2 } = self.coefficients();
        let v = |r: f64| -(a0 + a1 * r + a2 * r * r);
        let mut best = v(1.0).min(v(0.0));
        if a2 < 0.0 {
            let vertex = -a1 / (2.0 * a2);
            if vertex > 0.0 && vertex < 1.0 {
                best = best.min(v(vertex));
            }
        }
        best
    }

    /// Upper bound on `kappa d` for any bound state (eigenvalues cannot lie
    /// below the potential minimum).
    pub fn kappa_bound(&self) -> f64 {
        (-self.potential_min()).max(0.0).sqrt()
    }

    /// Upper bound on the effective decay constant `kappa' d`.
    pub fn decay_bound(&self) -> f64 {
        (self.threshold() - self.potential_min()).max(0.0).sqrt()
    }

    pub fn kappa_from_decay(&self, decay: f64) -> f64 {
        (decay * decay + self.coefficients().a0).sqrt()
    }

    pub fn decay_from_kappa(&self, kappa_d: f64) -> Result<f64, ModelError> {
        if !(kappa_d > 0.0 && kappa_d.is_finite()) {
            return Err(ModelError::InvalidKappa(kappa_d));
        }
        let a0 = self.coefficients().a0;
        let d2 = kappa_d * kappa_d - a0;
        if d2 <= 0.0 {
            return Err(ModelError::NoDecay {
                kappa_d,
                threshold: a0,
            });
        }
        Ok(d2.sqrt())
    }
}

/// Dimensionless `V 2 m d^2 / hbar^2` at `t = |x|/d`.
pub fn potential_value(spec: &WellSpec, t: f64) -> f64 {
    let u = spec.u;
    let s = 1.0 + t;
    let mut v = match spec.class {
        WellClass::Steep => -u / (s * s),
        WellClass::Double => -u * t / (s * s),
        WellClass::Shallow => -u * (1.0 - t * t / (s * s)),
    };
    if let Some(Extension { u1, q }) = spec.extension {
        v -= u1 * t.powi(q as i32) / s;
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReducedKind {
    Bessel,
    Whittaker,
}

/// The named equation a well maps onto at a given `kappa d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedProblem {
    pub kind: ReducedKind,
    pub bessel_order: Option<BesselOrder>,
    pub whittaker: Option<WhittakerParams>,
    /// `xi = scale * decay * (1 + |x|/d)`.
    pub scale: f64,
    /// Effective decay constant `kappa' d`; equals `kappa d` unless a `q = 1`
    /// extension shifts the continuum.
    pub decay: f64,
}

impl ReducedProblem {
    /// The special-function argument at `t = |x|/d`.
    pub fn argument(&self, t: f64) -> f64 {
        self.scale * self.decay * (1.0 + t)
    }

    /// The argument at the matching point `x = 0`.
    pub fn matching_argument(&self) -> f64 {
        self.scale * self.decay
    }
}

pub fn reduce(spec: &WellSpec, kappa_d: f64) -> Result<ReducedProblem, ModelError> {
    if spec.extension.is_some() {
        return Err(ModelError::ExtensionPresent);
    }
    reduce_any(spec, kappa_d)
}

pub fn reduce_extended(spec: &WellSpec, kappa_d: f64) -> Result<ReducedProblem, ModelError> {
    if spec.extension.is_none() {
        return Err(ModelError::ExtensionMissing);
    }
    reduce_any(spec, kappa_d)
}

/// Reduction for any spec, with or without the extension term.
pub fn reduce_any(spec: &WellSpec, kappa_d: f64) -> Result<ReducedProblem, ModelError> {
    let decay = spec.decay_from_kappa(kappa_d)?;
    reduce_at_decay(spec, decay)
}

/// Reduction parameterised directly by the effective decay `kappa' d`.
pub fn reduce_at_decay(spec: &WellSpec, decay: f64) -> Result<ReducedProblem, ModelError> {
    if !(decay > 0.0 && decay.is_finite()) {
        return Err(ModelError::InvalidKappa(decay));
    }
    let Coefficients { a1, a2, .. } = spec.coefficients();
    let nu_sq = 0.25 - a2;
    if a1 == 0.0 {
        return Ok(ReducedProblem {
            kind: ReducedKind::Bessel,
            bessel_order: Some(BesselOrder::from_squared(nu_sq)),
            whittaker: None,
            scale: 1.0,
            decay,
        });
    }
    let params = WhittakerParams::from_nu_squared(a1 / (2.0 * decay), nu_sq)
        .map_err(|_| ModelError::InvalidKappa(decay))?;
    Ok(ReducedProblem {
        kind: ReducedKind::Whittaker,
        bessel_order: None,
        whittaker: Some(params),
        scale: 2.0,
        decay,
    })
}
