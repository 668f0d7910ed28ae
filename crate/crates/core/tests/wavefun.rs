use exactwell::model::{potential_value, WellSpec};
use exactwell::spectrum::{find_spectrum, BoundState, Parity};
use exactwell::wavefun::{
    count_nodes, default_extent, eval_unnormalized, inner_product, normalize, normalize_default,
    WavefunctionError, DEFAULT_SAMPLES,
};

fn spec(p: i64) -> WellSpec {
    WellSpec::from_p(p, 1.0).unwrap()
}

fn four_states(p: i64) -> Vec<BoundState> {
    let kappa_min = if p == 0 { 1e-4 } else { 1e-6 };
    let s = find_spectrum(&spec(p), 4, kappa_min).unwrap();
    assert_eq!(s.states.len(), 4);
    s.states
}

/// Full-line `∫ psi^2` by the trapezoid rule on the (non-uniform) grid.
fn trapezoid_norm(x: &[f64], psi: &[f64]) -> f64 {
    x.windows(2)
        .zip(psi.windows(2))
        .map(|(xw, pw)| 0.5 * (xw[1] - xw[0]) * (pw[0] * pw[0] + pw[1] * pw[1]))
        .sum()
}

#[test]
fn norm_constant_matches_quadrature_oracle() {
    // mpmath quad of W^2 at 30 digits
    let s = spec(1);
    let ground = four_states(1)[0];
    let grid = normalize_default(&s, &ground).unwrap();
    let rel = (grid.norm_constant - 0.267_027_081_541_296_55).abs() / 0.267_027_081_541_296_55;
    assert!(rel < 1e-8, "norm constant {}", grid.norm_constant);
    let mid = grid.x_over_d.len() / 2;
    assert_eq!(grid.x_over_d[mid], 0.0);
    assert!((grid.psi[mid] - 0.341_906_461_672_227_08).abs() < 1e-8);
}

#[test]
fn normalization_and_sample_doubling() {
    for p in [0, 1, 2] {
        let s = spec(p);
        for state in four_states(p) {
            let x_max = default_extent(&s, &state).unwrap();
            let a = normalize(&s, &state, x_max, DEFAULT_SAMPLES).unwrap();
            let b = normalize(&s, &state, x_max, 2 * DEFAULT_SAMPLES - 1).unwrap();
            let rel = (a.norm_constant - b.norm_constant).abs() / b.norm_constant;
            assert!(rel < 1e-6, "class {p} state {}: {rel:e}", state.index);
            // independent rule on the finer grid
            let n = trapezoid_norm(&b.x_over_d, &b.psi);
            assert!((n - 1.0).abs() < 1e-6, "class {p} state {}: {n}", state.index);
            assert!(a.tail_fraction < 1e-10);
        }
    }
}

#[test]
fn parity_is_exact() {
    for p in [0, 1, 2] {
        let s = spec(p);
        for state in four_states(p) {
            let g = normalize(&s, &state, default_extent(&s, &state).unwrap(), 501).unwrap();
            let n = g.psi.len();
            for i in 0..n {
                assert_eq!(g.x_over_d[i], -g.x_over_d[n - 1 - i]);
                assert_eq!(g.psi[i], state.parity.sign() * g.psi[n - 1 - i]);
            }
            if state.parity == Parity::Odd {
                assert_eq!(g.psi[n / 2], 0.0);
                assert_eq!(eval_unnormalized(&s, &state, 0.0).unwrap(), 0.0);
            }
        }
    }
}

#[test]
fn even_states_are_flat_at_origin() {
    for p in [0, 1, 2] {
        let s = spec(p);
        for state in four_states(p).into_iter().filter(|b| b.parity == Parity::Even) {
            let f = |x: f64| eval_unnormalized(&s, &state, x).unwrap();
            let h = 1e-4;
            // one-sided slope on the right half-axis
            let slope = (-3.0 * f(0.0) + 4.0 * f(h) - f(2.0 * h)) / (2.0 * h);
            let nearby = (1..=20)
                .map(|i| {
                    let x = 0.05 * i as f64;
                    ((f(x + h) - f(x - h)) / (2.0 * h)).abs()
                })
                .fold(0.0, f64::max);
            assert!(slope.abs() <= 1e-6 * nearby, "class {p} state {}: {slope:e}", state.index);
        }
    }
}

#[test]
fn double_well_ground_state_peaks_at_minima() {
    let s = spec(1);
    let ground = four_states(1)[0];
    let f = |x: f64| eval_unnormalized(&s, &ground, x).unwrap();
    assert_eq!(f(1.0), f(-1.0));
    assert!(f(1.0) > f(0.0));
    assert!(f(1.0) > f(3.0));
}

#[test]
fn node_count_equals_index() {
    for p in [0, 1, 2] {
        let s = spec(p);
        for state in four_states(p) {
            let g = normalize_default(&s, &state).unwrap();
            assert_eq!(count_nodes(&g).unwrap(), state.index, "class {p}");
            assert_eq!(state.node_count, state.index);
        }
    }
}

#[test]
fn states_are_orthogonal() {
    for p in [0, 1, 2] {
        let s = spec(p);
        let states = four_states(p);
        for i in 0..states.len() {
            let self_overlap = inner_product(&s, &states[i], &states[i], DEFAULT_SAMPLES).unwrap();
            assert!((self_overlap - 1.0).abs() < 1e-6);
            for j in i + 1..states.len() {
                let v = inner_product(&s, &states[i], &states[j], DEFAULT_SAMPLES).unwrap();
                assert!(v.abs() <= 1e-5, "class {p} states {i},{j}: {v:e}");
            }
        }
    }
}

#[test]
fn satisfies_schrodinger_equation() {
    for p in [0, 1, 2] {
        let s = spec(p);
        for state in four_states(p) {
            let f = |x: f64| eval_unnormalized(&s, &state, x).unwrap();
            let k2 = state.kappa_d * state.kappa_d;
            let extent = 10.0 / state.kappa_d;
            for i in 1..=20 {
                let x = extent * i as f64 / 20.0;
                let h = 1e-3 * (1.0 + x);
                let d2 = |h: f64| (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
                let second = (4.0 * d2(0.5 * h) - d2(h)) / 3.0;
                let rhs = (potential_value(&s, x) + k2) * f(x);
                let scale = second.abs().max(k2 * f(x).abs());
                assert!(
                    (second - rhs).abs() <= 1e-5 * scale,
                    "class {p} state {} x={x}",
                    state.index
                );
            }
        }
    }
}

#[test]
fn short_extent_is_tail_dominated() {
    let s = spec(1);
    let ground = four_states(1)[0];
    let err = normalize(&s, &ground, 0.5, 101).unwrap_err();
    assert!(matches!(err, WavefunctionError::TailDominated { .. }));
}
