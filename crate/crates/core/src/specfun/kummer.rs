use super::{sum_series, Result, SpecFunError};

/// Confluent hypergeometric function `1F1(a; b; z)`.
///
/// Summed directly for `z >= 0`; negative arguments go through Kummer's
/// transformation `M(a, b, z) = e^z M(b - a, b, -z)` so the summed series
/// never alternates because of `z`.
pub fn kummer_m(a: f64, b: f64, z: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && z.is_finite()) {
        return Err(SpecFunError::Domain {
            function: "kummer_m",
            reason: format!("non-finite input a={a}, b={b}, z={z}"),
        });
    }
    if b <= 0.0 && b == b.round() {
        return Err(SpecFunError::Pole {
            function: "kummer_m",
            at: b,
        });
    }
    if z < 0.0 {
        let m = kummer_m(b - a, b, -z)?;
        let v = z.exp() * m;
        return if v.is_finite() {
            Ok(v)
        } else {
            Err(SpecFunError::Overflow {
                function: "kummer_m",
            })
        };
    }
    sum_series("kummer_m", 1.0, |k, term| {
        let kf = k as f64;
        term * (a + kf) * z / ((b + kf) * (kf + 1.0))
    })
}
