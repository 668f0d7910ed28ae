use exactwell::model::WellSpec;
use exactwell::oracle::{overlap, solve_fd, solve_richardson, OracleConfig};
use exactwell::spectrum::{find_spectrum, Parity};
use exactwell::wavefun::normalize_on;

fn spec(p: i64, u: f64) -> WellSpec {
    WellSpec::from_p(p, u).unwrap()
}

#[test]
fn double_well_ground_state() {
    let r = solve_fd(&spec(1, 1.0), &OracleConfig::new(60.0, 24001).unwrap(), 1).unwrap();
    assert!((r.eigen_kappa_d[0] - 0.408).abs() <= 0.002);
    assert!(!r.domain_limited[0]);
}

#[test]
fn richardson_matches_analytic_levels() {
    for p in [1, 2] {
        let s = spec(p, 1.0);
        let analytic = find_spectrum(&s, 4, 1e-6).unwrap();
        let config = OracleConfig::new(60.0, 24001).unwrap();
        let r = solve_richardson(&s, &config, 4).unwrap();
        assert_eq!(r.kappa_d.len(), 4);
        for (b, k) in analytic.states.iter().zip(&r.kappa_d) {
            let rel = (k - b.kappa_d).abs() / b.kappa_d;
            assert!(rel < 1e-3, "class {p} state {}: {k} vs {}", b.index, b.kappa_d);
            assert!(r.coarse.certified(b.index));
        }
    }
}

#[test]
fn steep_ground_state_on_wide_domain() {
    let s = spec(0, 1.0);
    let analytic = find_spectrum(&s, 1, 1e-4).unwrap().states[0];
    let r = solve_richardson(&s, &OracleConfig::new(200.0, 24001).unwrap(), 2).unwrap();
    assert!((r.kappa_d[0] - analytic.kappa_d).abs() / analytic.kappa_d < 1e-3);
    // the second level needs kappa d * L >= 10, far beyond this domain
    assert!(!r.coarse.certified(1));
}

#[test]
fn eigenvectors_overlap_analytic_states() {
    let s = spec(1, 1.0);
    let analytic = find_spectrum(&s, 4, 1e-6).unwrap();
    let r = solve_fd(
        &s,
        &OracleConfig::new(60.0, 24001).unwrap().with_eigenvectors(),
        4,
    )
    .unwrap();
    let xs = r.x_over_d.as_ref().unwrap();
    let vecs = r.eigenvectors.as_ref().unwrap();
    let grids: Vec<_> = analytic
        .states
        .iter()
        .map(|b| normalize_on(&s, b, xs).unwrap())
        .collect();
    for (i, g) in grids.iter().enumerate() {
        let v = overlap(&vecs[i], xs, g).unwrap();
        assert!(v >= 0.999, "state {i}: overlap {v}");
        assert!((overlap(&g.psi, xs, g).unwrap() - 1.0).abs() < 1e-12);
    }
    // even analytic against odd oracle
    assert_eq!(grids[0].state.parity, Parity::Even);
    let cross = overlap(&vecs[1], xs, &grids[0]).unwrap();
    assert!(cross <= 1e-8, "cross overlap {cross:e}");
}

#[test]
fn free_particle_has_no_bound_state() {
    let r = solve_fd(&spec(1, 1e-12), &OracleConfig::new(60.0, 2001).unwrap(), 4).unwrap();
    assert!(r.eigen_kappa_d.iter().all(|&k| k <= 1e-5));
}

#[test]
fn error_scales_as_step_squared() {
    let s = spec(1, 1.0);
    let exact = find_spectrum(&s, 1, 1e-6).unwrap().states[0].kappa_d;
    let c1 = OracleConfig::new(60.0, 1201).unwrap();
    let c2 = c1.refined();
    let e1 = (solve_fd(&s, &c1, 1).unwrap().eigen_kappa_d[0] - exact).abs();
    let e2 = (solve_fd(&s, &c2, 1).unwrap().eigen_kappa_d[0] - exact).abs();
    let ratio = e1 / e2;
    assert!((ratio - 4.0).abs() <= 0.8, "ratio {ratio}");
}

#[test]
fn wider_domain_lowers_levels() {
    // same step, more points: Cauchy interlacing
    let s = spec(2, 1.0);
    let mut prev = vec![0.0; 4];
    for (l, n) in [(10.0, 999), (20.0, 1999), (40.0, 3999)] {
        let r = solve_fd(&s, &OracleConfig::new(l, n).unwrap(), 4).unwrap();
        for (k, p) in r.eigen_kappa_d.iter().zip(&mut prev) {
            assert!(*k >= *p);
            *p = *k;
        }
    }
}

#[test]
fn finite_spectrum_counts_agree() {
    // subcritical steep wells have exactly one level
    for u in [0.05, 0.1, 0.2, 0.24] {
        let s = spec(0, u);
        let analytic = find_spectrum(&s, 4, 1e-6).unwrap();
        assert_eq!(analytic.states.len(), 1);
        let l = (20.0 / analytic.states[0].kappa_d).max(60.0);
        let r = solve_fd(&s, &OracleConfig::new(l, 20001).unwrap(), 4).unwrap();
        assert_eq!(r.bound_count, 1, "u = {u}");
    }
}

#[test]
fn resolvable_levels_agree() {
    // the four lowest levels all have kappa d * L >= 10 at L = 60
    for p in [1, 2] {
        let s = spec(p, 1.0);
        let analytic = find_spectrum(&s, 4, 1e-6).unwrap();
        let r = solve_fd(&s, &OracleConfig::new(60.0, 12001).unwrap(), 5).unwrap();
        let cut = analytic.states[3].kappa_d * 0.9;
        assert!(analytic.states[3].kappa_d * 60.0 >= 10.0);
        let o = r.eigen_kappa_d.iter().filter(|&&k| k >= cut).count();
        assert_eq!(o, 4, "class {p}");
    }
}
