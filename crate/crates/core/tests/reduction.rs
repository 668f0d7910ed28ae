use exactwell::model::{potential_value, reduce_any, ReducedKind, WellClass, WellSpec};
use exactwell::specfun::{bessel_k, whittaker_w};
use proptest::prelude::*;

/// Half-axis solution of the reduced problem at `t = |x|/d`.
fn half_axis(spec: &WellSpec, kappa_d: f64, t: f64) -> f64 {
    let r = reduce_any(spec, kappa_d).unwrap();
    let xi = r.argument(t);
    match r.kind {
        ReducedKind::Bessel => xi.sqrt() * bessel_k(r.bessel_order.unwrap(), xi).unwrap(),
        ReducedKind::Whittaker => whittaker_w(r.whittaker.unwrap(), xi).unwrap(),
    }
}

/// `|psi'' - (V + kappa^2) psi|` relative to the size of the terms, with the
/// second derivative from Richardson-extrapolated central differences.
fn schrodinger_residual(spec: &WellSpec, kappa_d: f64, t: f64) -> f64 {
    let f = |t: f64| half_axis(spec, kappa_d, t);
    let h = 2e-3 * (1.0 + t);
    let f0 = f(t);
    let d2 = |h: f64| (f(t + h) - 2.0 * f0 + f(t - h)) / (h * h);
    let second = (4.0 * d2(0.5 * h) - d2(h)) / 3.0;
    let rhs = (potential_value(spec, t) + kappa_d * kappa_d) * f0;
    let scale = second.abs().max(rhs.abs()).max(kappa_d * kappa_d * f0.abs());
    (second - rhs).abs() / scale
}

fn check_class(spec: &WellSpec, kappa_d: f64) -> Result<(), TestCaseError> {
    let t_max = (20.0 / kappa_d).min(60.0);
    for i in 0..20 {
        let t = 0.05 + (t_max - 0.05) * i as f64 / 19.0;
        let res = schrodinger_residual(spec, kappa_d, t);
        prop_assert!(res <= 1e-6, "{spec:?} kappa={kappa_d} t={t}: residual {res:e}");
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(5))]

    #[test]
    fn steep_reduction_solves_schrodinger(u in 0.05f64..5.0, frac in 0.05f64..0.95) {
        let spec = WellSpec::new(WellClass::Steep, u).unwrap();
        check_class(&spec, frac * spec.kappa_bound())?;
    }

    #[test]
    fn double_reduction_solves_schrodinger(u in 0.05f64..5.0, frac in 0.05f64..0.95) {
        let spec = WellSpec::new(WellClass::Double, u).unwrap();
        check_class(&spec, frac * spec.kappa_bound())?;
    }

    #[test]
    fn shallow_reduction_solves_schrodinger(u in 0.05f64..5.0, frac in 0.05f64..0.95) {
        let spec = WellSpec::new(WellClass::Shallow, u).unwrap();
        check_class(&spec, frac * spec.kappa_bound())?;
    }

    #[test]
    fn extended_reduction_solves_schrodinger(
        p in 0i64..3,
        q in 0u8..2,
        u in 0.2f64..3.0,
        u1 in 0.01f64..0.5,
        frac in 0.1f64..0.9,
    ) {
        let spec = WellSpec::from_p(p, u).unwrap().with_extension(u1, q).unwrap();
        let lo = spec.kappa_from_decay(1e-3);
        let kappa_d = lo + frac * (spec.kappa_from_decay(spec.decay_bound()) - lo);
        check_class(&spec, kappa_d)?;
    }

    #[test]
    fn depth_bound_holds(p in 0i64..3, u in 1e-3f64..50.0) {
        let spec = WellSpec::from_p(p, u).unwrap();
        let bound = spec.kappa_bound();
        prop_assert!(bound > 0.0);
        prop_assert!(bound <= u.sqrt() * (1.0 + 1e-15));
        // no point of the potential lies below -bound^2
        for i in 0..200 {
            let t = i as f64 * 0.05;
            prop_assert!(potential_value(&spec, t) >= -bound * bound * (1.0 + 1e-12));
        }
    }
}
