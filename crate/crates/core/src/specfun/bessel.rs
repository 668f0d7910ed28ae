use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::gamma::{ln_gamma_complex, recip_gamma};
use super::{Result, SpecFunError, WhittakerOde, SERIES_MAX_TERMS, SERIES_TOL};

/// Order of a modified Bessel function: real `a`, or purely imaginary `i·value`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value")]
pub enum BesselOrder {
    Real(f64),
    Imaginary(f64),
}

impl BesselOrder {
    /// Order whose square is `order_sq`, on the imaginary axis when negative.
    pub fn from_squared(order_sq: f64) -> Self {
        if order_sq >= 0.0 {
            BesselOrder::Real(order_sq.sqrt())
        } else {
            BesselOrder::Imaginary((-order_sq).sqrt())
        }
    }

    /// The square of the order, which is real in both cases.
    pub fn squared(&self) -> f64 {
        match *self {
            BesselOrder::Real(a) => a * a,
            BesselOrder::Imaginary(v) => -v * v,
        }
    }

    pub fn as_complex(&self) -> Complex64 {
        match *self {
            BesselOrder::Real(a) => Complex64::new(a, 0.0),
            BesselOrder::Imaginary(v) => Complex64::new(0.0, v),
        }
    }

    fn validate(&self, function: &'static str) -> Result<()> {
        let ok = match *self {
            BesselOrder::Real(a) => a.is_finite(),
            BesselOrder::Imaginary(v) => v.is_finite() && v >= 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(SpecFunError::Domain {
                function,
                reason: format!("invalid order {self:?}"),
            })
        }
    }
}

fn positive_argument(function: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(SpecFunError::Domain {
            function,
            reason: format!("argument must be positive and finite, got {x}"),
        })
    }
}

/// Leading term `(x/2)^a / Γ(a+1)` of the I series for real order.
fn leading_term(order: f64, x: f64) -> Result<f64> {
    let rg = recip_gamma(order + 1.0);
    let t = rg * (0.5 * x).powf(order);
    if t.is_finite() {
        Ok(t)
    } else {
        Err(SpecFunError::Overflow {
            function: "bessel_i",
        })
    }
}

/// Modified Bessel function of the first kind for real order, by its
/// power series.
pub fn bessel_i(order: f64, x: f64) -> Result<f64> {
    Ok(bessel_i_pair(order, x)?.0)
}

/// `(I_a(x), I_a'(x))` from the power series and its termwise derivative.
pub fn bessel_i_pair(order: f64, x: f64) -> Result<(f64, f64)> {
    positive_argument("bessel_i", x)?;
    if !order.is_finite() {
        return Err(SpecFunError::Domain {
            function: "bessel_i",
            reason: format!("non-finite order {order}"),
        });
    }
    // I_{-n} = I_n for integer n, and the series below starts at a pole there
    let a = if order < 0.0 && order == order.round() {
        -order
    } else {
        order
    };
    let quarter_x2 = 0.25 * x * x;
    let mut term = leading_term(a, x)?;
    let mut value = term;
    let mut deriv = term * a / x;
    let mut quiet = 0;
    for m in 0..SERIES_MAX_TERMS {
        let mf = m as f64;
        term *= quarter_x2 / ((mf + 1.0) * (mf + 1.0 + a));
        value += term;
        deriv += term * (2.0 * (mf + 1.0) + a) / x;
        if !value.is_finite() || !deriv.is_finite() {
            return Err(SpecFunError::Overflow {
                function: "bessel_i",
            });
        }
        if term.abs() <= SERIES_TOL * value.abs() {
            quiet += 1;
            if quiet == 3 {
                return Ok((value, deriv));
            }
        } else {
            quiet = 0;
        }
    }
    Err(SpecFunError::NoConvergence {
        function: "bessel_i",
        terms: SERIES_MAX_TERMS,
    })
}

/// `I_order(x)` for complex order by the power series in complex arithmetic.
pub fn bessel_i_complex(order: Complex64, x: f64) -> Result<Complex64> {
    positive_argument("bessel_i_complex", x)?;
    let half = 0.5 * x;
    // (x/2)^order / Γ(order + 1)
    let first = (order * half.ln() - ln_gamma_complex(order + 1.0)).exp();
    let quarter_x2 = half * half;
    let mut term = first;
    let mut sum = first;
    let mut quiet = 0;
    for m in 0..SERIES_MAX_TERMS {
        let mf = m as f64;
        term *= quarter_x2 / ((mf + 1.0) * (order + (mf + 1.0)));
        sum += term;
        if !sum.re.is_finite() || !sum.im.is_finite() {
            return Err(SpecFunError::Overflow {
                function: "bessel_i_complex",
            });
        }
        if term.norm() <= SERIES_TOL * sum.norm() {
            quiet += 1;
            if quiet == 3 {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(SpecFunError::NoConvergence {
        function: "bessel_i_complex",
        terms: SERIES_MAX_TERMS,
    })
}

/// `K_order(x)` for real or purely imaginary order.
///
/// Uses `K_a(x) = sqrt(pi/(2x)) W_{0,a}(2x)` and the inward continuation of
/// `W`, so the result is accurate for any `x > 0` and stays real for
/// imaginary order, where it oscillates in sign as `x -> 0`.
pub fn bessel_k(order: BesselOrder, x: f64) -> Result<f64> {
    Ok(bessel_k_pair(order, x)?.0)
}

/// `(K(x), dK/dx)` for real or purely imaginary order.
pub fn bessel_k_pair(order: BesselOrder, x: f64) -> Result<(f64, f64)> {
    order.validate("bessel_k")?;
    positive_argument("bessel_k", x)?;
    let s = WhittakerOde::new(0.0, order.squared()).eval(2.0 * x)?;
    let (w, dw) = (
        s.value().map_err(|_| overflow_k())?,
        s.derivative().map_err(|_| overflow_k())?,
    );
    let pre = (0.5 * PI / x).sqrt();
    let k = pre * w;
    // d/dx [sqrt(pi/2x) W(2x)] = sqrt(pi/2x) (2 W'(2x) - W(2x)/(2x))
    let dk = pre * (2.0 * dw - 0.5 * w / x);
    if k.is_finite() && dk.is_finite() {
        Ok((k, dk))
    } else {
        Err(overflow_k())
    }
}

fn overflow_k() -> SpecFunError {
    SpecFunError::Overflow {
        function: "bessel_k",
    }
}

/// `K` from the connection formula `(pi/2)(I_{-a} - I_a)/sin(a pi)`
/// evaluated in complex arithmetic, returning the full complex result.
///
/// The imaginary part is zero in exact arithmetic; its size measures the
/// rounding in the combination. Cancellation grows like `exp(2x)`, so this
/// route is only meant for `x` of order one or below. Real orders within
/// `1e-6` of an integer are rejected.
pub fn bessel_k_series(order: BesselOrder, x: f64) -> Result<Complex64> {
    order.validate("bessel_k_series")?;
    positive_argument("bessel_k_series", x)?;
    let a = order.as_complex();
    if a.im == 0.0 && (a.re - a.re.round()).abs() < 1e-6 {
        return Err(SpecFunError::Degenerate { mu: 0.0, nu: a.re });
    }
    let i_minus = bessel_i_complex(-a, x)?;
    let i_plus = bessel_i_complex(a, x)?;
    Ok(0.5 * PI * (i_minus - i_plus) / (a * PI).sin())
}
