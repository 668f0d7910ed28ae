//! Inward continuation of the recessive solution of Whittaker's equation
//!
//! ```text
//! W'' + (-1/4 + mu/z + (1/4 - nu^2)/z^2) W = 0
//! ```
//!
//! The solution is pinned by the asymptotic expansion at a large starting
//! point and carried toward smaller `z` with Taylor-series steps whose
//! coefficients follow from a four-term recurrence. Only `nu^2` enters, so
//! imaginary `nu` (and therefore imaginary-order K) needs no complex
//! arithmetic. Values are carried as `exp(log_scale) * (w, dw)` so that the
//! continuation never overflows on its way in.

use super::{Result, SpecFunError};

const FUNCTION: &str = "whittaker_w";
const ASYMPTOTIC_MIN_START: f64 = 25.0;
const ASYMPTOTIC_MAX_START: f64 = 1.0e5;
const TAYLOR_TOL: f64 = 2.0e-17;
const TAYLOR_MAX_TERMS: usize = 220;

/// `W` and `dW/dz` at one point, both scaled by `exp(-log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Scaled {
    pub w: f64,
    pub dw: f64,
    pub log_scale: f64,
}

impl Scaled {
    pub fn value(&self) -> Result<f64> {
        finite(self.w * self.log_scale.exp())
    }

    pub fn derivative(&self) -> Result<f64> {
        finite(self.dw * self.log_scale.exp())
    }

    fn renormalize(&mut self) {
        let m = self.w.abs().max(self.dw.abs());
        if m > 0.0 && !(1e-100..=1e100).contains(&m) {
            self.w /= m;
            self.dw /= m;
            self.log_scale += m.ln();
        }
    }
}

fn finite(v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(SpecFunError::Overflow { function: FUNCTION })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct WhittakerOde {
    pub mu: f64,
    pub nu_sq: f64,
}

impl WhittakerOde {
    pub fn new(mu: f64, nu_sq: f64) -> Self {
        Self { mu, nu_sq }
    }

    /// Asymptotic expansion at `z`, or `None` when it cannot reach full
    /// precision there.
    fn asymptotic(&self, z: f64) -> Option<Scaled> {
        // W = exp(-z/2) z^mu * sum_s c_s z^-s,
        // c_{s+1} = c_s (nu^2 - (s + 1/2 - mu)^2) / (s + 1)
        let mut coeff = 1.0_f64;
        let mut term = 1.0_f64;
        let mut sum = 1.0_f64;
        let mut dsum = 0.0_f64;
        let mut largest = 1.0_f64;
        let mut s = 0usize;
        // terms may grow while s is below roughly |mu| + |nu|
        let growth_phase = 2.0 + self.mu.abs() + self.nu_sq.abs().sqrt();
        loop {
            let sf = s as f64;
            let factor = (self.nu_sq - (sf + 0.5 - self.mu).powi(2)) / (sf + 1.0);
            coeff *= factor;
            if coeff == 0.0 {
                break;
            }
            let next = coeff * z.powi(-(s as i32 + 1));
            if next.abs() > term.abs() && sf > growth_phase {
                // divergent tail reached before converging
                return None;
            }
            term = next;
            sum += term;
            dsum -= (sf + 1.0) * term / z;
            largest = largest.max(term.abs());
            s += 1;
            if term.abs() <= 1e-17 * sum.abs() {
                break;
            }
            if s > 400 || !sum.is_finite() {
                return None;
            }
        }
        if largest > 1e3 * sum.abs() {
            return None;
        }
        // d/dz [exp(-z/2) z^mu y] = exp(-z/2) z^mu (y' + (mu/z - 1/2) y)
        let dw = dsum + (self.mu / z - 0.5) * sum;
        Some(Scaled {
            w: sum,
            dw,
            log_scale: -0.5 * z + self.mu * z.ln(),
        })
    }

    fn start(&self, z_first: f64) -> Result<(f64, Scaled)> {
        if let Some(s) = self.asymptotic(z_first) {
            return Ok((z_first, s));
        }
        let mut z = z_first.max(ASYMPTOTIC_MIN_START);
        while z <= ASYMPTOTIC_MAX_START {
            if let Some(s) = self.asymptotic(z) {
                return Ok((z, s));
            }
            z *= 1.5;
        }
        Err(SpecFunError::NoConvergence {
            function: FUNCTION,
            terms: 400,
        })
    }

    fn step_limit(&self, z0: f64) -> f64 {
        let q = (0.25 - self.mu / z0 + (self.nu_sq - 0.25) / (z0 * z0)).abs();
        let wave = q.sqrt().max(0.5);
        (z0 / 3.0).min(3.0 / wave)
    }

    /// One Taylor step from `z0` by `h`; `None` if the series did not settle.
    fn taylor(&self, z0: f64, h: f64, state: &Scaled) -> Option<Scaled> {
        // z^2 W'' = (z^2/4 - mu z - (1/4 - nu^2)) W expanded about z0 gives
        // a recurrence for b_k = a_k h^k with polynomial coefficients.
        let p0 = -0.25 * z0 * z0 + self.mu * z0 + 0.25 - self.nu_sq;
        let p1 = self.mu - 0.5 * z0;
        let p2 = -0.25;
        let denom = z0 * z0;
        let (h2, h3, h4) = (h * h, h * h * h, h * h * h * h);

        let (mut bkm2, mut bkm1, mut bk, mut bk1) = (0.0, 0.0, state.w, state.dw * h);
        let scale = bk.abs().max(bk1.abs());
        if scale == 0.0 {
            return Some(*state);
        }
        let mut w = bk + bk1;
        let mut dw_h = bk1;
        let mut quiet = 0;
        for k in 0..TAYLOR_MAX_TERMS {
            let kf = k as f64;
            let num = 2.0 * z0 * (kf + 1.0) * kf * bk1 * h
                + (kf * (kf - 1.0) + p0) * bk * h2
                + p1 * bkm1 * h3
                + p2 * bkm2 * h4;
            let bk2 = -num / (denom * (kf + 2.0) * (kf + 1.0));
            w += bk2;
            dw_h += (kf + 2.0) * bk2;
            (bkm2, bkm1, bk, bk1) = (bkm1, bk, bk1, bk2);

            let reference = scale.max(w.abs()).max(dw_h.abs());
            if !reference.is_finite() {
                return None;
            }
            if bk2.abs() * (kf + 2.0) <= TAYLOR_TOL * reference {
                quiet += 1;
                if quiet == 3 {
                    let mut out = Scaled {
                        w,
                        dw: dw_h / h,
                        log_scale: state.log_scale,
                    };
                    out.renormalize();
                    return Some(out);
                }
            } else {
                quiet = 0;
            }
        }
        None
    }

    fn advance(&self, mut z: f64, target: f64, mut state: Scaled) -> Result<Scaled> {
        while z > target {
            let mut h = -self.step_limit(z).min(z - target);
            loop {
                if let Some(next) = self.taylor(z, h, &state) {
                    state = next;
                    z += h;
                    if (z - target).abs() <= 1e-15 * target {
                        z = target;
                    }
                    break;
                }
                h *= 0.5;
                if h.abs() < 1e-12 * z {
                    return Err(SpecFunError::NoConvergence {
                        function: FUNCTION,
                        terms: TAYLOR_MAX_TERMS,
                    });
                }
            }
        }
        Ok(state)
    }

    pub fn eval(&self, z: f64) -> Result<Scaled> {
        check_argument(z)?;
        let (z_start, state) = self.start(z)?;
        if z_start == z {
            return Ok(state);
        }
        self.advance(z_start, z, state)
    }

    /// Evaluates at every point of `zs`, which must be sorted in decreasing
    /// order, using a single inward sweep.
    pub fn sample_descending(&self, zs: &[f64]) -> Result<Vec<Scaled>> {
        let Some(&first) = zs.first() else {
            return Ok(Vec::new());
        };
        check_argument(first)?;
        let (mut z, mut state) = self.start(first)?;
        let mut out = Vec::with_capacity(zs.len());
        for &target in zs {
            check_argument(target)?;
            if target > z {
                return Err(SpecFunError::Domain {
                    function: FUNCTION,
                    reason: "sample points must be sorted in decreasing order".into(),
                });
            }
            if target < z {
                state = self.advance(z, target, state)?;
                z = target;
            }
            out.push(state);
        }
        Ok(out)
    }
}

fn check_argument(z: f64) -> Result<()> {
    if z > 0.0 && z.is_finite() {
        Ok(())
    } else {
        Err(SpecFunError::Domain {
            function: FUNCTION,
            reason: format!("argument must be positive and finite, got {z}"),
        })
    }
}
