use num_complex::Complex64;
use std::f64::consts::PI;

use super::{Result, SpecFunError};

/// `ln|Γ(x)|` together with the sign of `Γ(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogGamma {
    pub ln_abs: f64,
    pub sign: f64,
}

fn is_pole(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

pub fn log_gamma(x: f64) -> Result<LogGamma> {
    if !x.is_finite() {
        return Err(SpecFunError::Domain {
            function: "log_gamma",
            reason: format!("non-finite argument {x}"),
        });
    }
    if is_pole(x) {
        return Err(SpecFunError::Pole {
            function: "log_gamma",
            at: x,
        });
    }
    let (ln_abs, sign) = libm::lgamma_r(x);
    Ok(LogGamma {
        ln_abs,
        sign: if sign < 0 { -1.0 } else { 1.0 },
    })
}

pub fn gamma(x: f64) -> Result<f64> {
    if is_pole(x) {
        return Err(SpecFunError::Pole {
            function: "gamma",
            at: x,
        });
    }
    let g = libm::tgamma(x);
    if g.is_finite() {
        Ok(g)
    } else {
        Err(SpecFunError::Overflow { function: "gamma" })
    }
}

/// `1/Γ(x)`, which is entire: zero at the poles of Γ.
pub fn recip_gamma(x: f64) -> f64 {
    if is_pole(x) {
        return 0.0;
    }
    if x > 170.0 {
        return 0.0;
    }
    let lg = libm::lgamma_r(x);
    if lg.0 < 700.0 {
        1.0 / libm::tgamma(x)
    } else {
        let s = if lg.1 < 0 { -1.0 } else { 1.0 };
        s * (-lg.0).exp()
    }
}

// Lanczos approximation, g = 607/128 with 14 terms.
const LANCZOS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];

/// Principal-branch-agnostic `ln Γ(z)` for complex `z`; only `exp` of the
/// result is meaningful for `Re z < 1/2`.
pub fn ln_gamma_complex(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z)Γ(1−z) = π / sin(πz)
        let s = (z * PI).sin();
        return Complex64::new(PI, 0.0).ln() - s.ln() - ln_gamma_complex(1.0 - z);
    }
    let mut y = z;
    let tmp = z + 5.242_187_5;
    let tmp = (z + 0.5) * tmp.ln() - tmp;
    let mut ser = Complex64::new(0.999_999_999_999_997_092, 0.0);
    for c in LANCZOS {
        y += 1.0;
        ser += c / y;
    }
    tmp + (2.506_628_274_631_000_5 * ser / z).ln()
}
