use serde::{Deserialize, Serialize};

use super::gamma::{gamma, recip_gamma};
use super::kummer::kummer_m;
use super::quad::exp_sinh;
use super::{Result, SpecFunError, WhittakerOde};

/// Parameters `(mu, nu)` of Whittaker's equation.
///
/// Only `nu^2` enters the equation, so it is stored squared; a negative
/// value means imaginary `nu`, which is how the zero-class well appears once
/// an extra Coulomb-like term is added.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WhittakerParams {
    pub mu: f64,
    pub nu_sq: f64,
}

impl WhittakerParams {
    pub fn new(mu: f64, nu: f64) -> Result<Self> {
        if !(mu.is_finite() && nu.is_finite()) || nu < 0.0 {
            return Err(SpecFunError::Domain {
                function: "whittaker_w",
                reason: format!("invalid parameters mu={mu}, nu={nu}"),
            });
        }
        Ok(Self { mu, nu_sq: nu * nu })
    }

    pub fn from_nu_squared(mu: f64, nu_sq: f64) -> Result<Self> {
        if !(mu.is_finite() && nu_sq.is_finite()) {
            return Err(SpecFunError::Domain {
                function: "whittaker_w",
                reason: format!("invalid parameters mu={mu}, nu^2={nu_sq}"),
            });
        }
        Ok(Self { mu, nu_sq })
    }

    /// Real `nu >= 0`, if there is one.
    pub fn nu(&self) -> Option<f64> {
        (self.nu_sq >= 0.0).then(|| self.nu_sq.sqrt())
    }

    pub(crate) fn ode(&self) -> WhittakerOde {
        WhittakerOde::new(self.mu, self.nu_sq)
    }
}

/// Whittaker function of the second kind `W_{mu,nu}(z)`, the solution that
/// decays like `exp(-z/2) z^mu` as `z -> ∞`.
pub fn whittaker_w(params: WhittakerParams, z: f64) -> Result<f64> {
    params.ode().eval(z)?.value()
}

/// `dW_{mu,nu}/dz`.
pub fn whittaker_w_dz(params: WhittakerParams, z: f64) -> Result<f64> {
    params.ode().eval(z)?.derivative()
}

/// `(W, dW/dz)` from a single continuation.
pub fn whittaker_w_pair(params: WhittakerParams, z: f64) -> Result<(f64, f64)> {
    let s = params.ode().eval(z)?;
    Ok((s.value()?, s.derivative()?))
}

/// Whittaker function of the first kind,
/// `M_{mu,nu}(z) = z^(nu+1/2) e^(-z/2) 1F1(1/2 + nu - mu; 1 + 2 nu; z)`.
pub fn whittaker_m(mu: f64, nu: f64, z: f64) -> Result<f64> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(SpecFunError::Domain {
            function: "whittaker_m",
            reason: format!("argument must be positive and finite, got {z}"),
        });
    }
    let m = kummer_m(0.5 + nu - mu, 1.0 + 2.0 * nu, z)?;
    let v = ((nu + 0.5) * z.ln() - 0.5 * z).exp() * m;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(SpecFunError::Overflow {
            function: "whittaker_m",
        })
    }
}

const NEAR_INTEGER: f64 = 1e-6;
const OFFSET: f64 = 2e-3;

/// `W` from the connection formula
///
/// ```text
/// W = Γ(-2nu)/Γ(1/2-nu-mu) M_{mu,nu} + Γ(2nu)/Γ(1/2+nu-mu) M_{mu,-nu}
/// ```
///
/// which is exact but cancels badly once `z` exceeds a few units. When `2nu`
/// sits within `1e-6` of an integer, `Γ(-2nu)` is at a pole; the integral
/// representation is used instead if `1/2 + nu - mu > 0`, otherwise `nu` is
/// offset by small steps and the results extrapolated back.
pub fn whittaker_w_kummer(params: WhittakerParams, z: f64) -> Result<f64> {
    let Some(nu) = params.nu() else {
        return Err(SpecFunError::Domain {
            function: "whittaker_w_kummer",
            reason: "imaginary nu is not supported on this route".into(),
        });
    };
    let mu = params.mu;
    let two_nu = 2.0 * nu;
    if (two_nu - two_nu.round()).abs() >= NEAR_INTEGER {
        return connection(mu, nu, z);
    }
    if 0.5 + nu - mu > 0.0 {
        if let Some(v) = integral_representation(mu, nu, z) {
            return Ok(v);
        }
    }
    // quadratic extrapolation from nu + k*eps, k = 1, 2, 3
    let w1 = connection(mu, nu + OFFSET, z);
    let w2 = connection(mu, nu + 2.0 * OFFSET, z);
    let w3 = connection(mu, nu + 3.0 * OFFSET, z);
    match (w1, w2, w3) {
        (Ok(w1), Ok(w2), Ok(w3)) => {
            let quadratic = 3.0 * w1 - 3.0 * w2 + w3;
            let linear = 2.0 * w1 - w2;
            if (quadratic - linear).abs() <= 1e-4 * quadratic.abs().max(1e-300) {
                Ok(quadratic)
            } else {
                Err(SpecFunError::Degenerate { mu, nu })
            }
        }
        _ => Err(SpecFunError::Degenerate { mu, nu }),
    }
}

fn connection(mu: f64, nu: f64, z: f64) -> Result<f64> {
    let first = gamma(-2.0 * nu)? * recip_gamma(0.5 - nu - mu);
    let second = gamma(2.0 * nu)? * recip_gamma(0.5 + nu - mu);
    let mut total = 0.0;
    if first != 0.0 {
        total += first * whittaker_m(mu, nu, z)?;
    }
    if second != 0.0 {
        total += second * whittaker_m(mu, -nu, z)?;
    }
    Ok(total)
}

/// `W = e^(-z/2) z^mu / Γ(1/2+nu-mu) ∫ e^-t t^(nu-mu-1/2) (1+t/z)^(nu+mu-1/2) dt`
fn integral_representation(mu: f64, nu: f64, z: f64) -> Option<f64> {
    let a = nu - mu - 0.5;
    let b = nu + mu - 0.5;
    let integral = exp_sinh(
        |t| (-t + a * t.ln() + b * (t / z).ln_1p()).exp(),
        1e-13,
    )?;
    let v = (-0.5 * z + mu * z.ln()).exp() * recip_gamma(0.5 + nu - mu) * integral;
    v.is_finite().then_some(v)
}
