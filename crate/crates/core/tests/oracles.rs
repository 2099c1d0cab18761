mod common;

use common::{brute_force_cover, dense_advection, gamma_oracle, sobolev_sq, truncate};
use fracns_core::diagnostics::energy_inequality_residual;
use fracns_core::singular::{cover_sum, hausdorff_normalization, IntervalSet};
use fracns_core::solver::{nonlinear_term, run, IfRk4, NonlinearWorkspace, SolverConfig};
use fracns_core::spectral::{random_divfree_field, sobolev_norm, TorusGrid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn pseudo_spectral_advection_matches_dense_convolution() {
    for (dim, n) in [(2, 8), (2, 12), (3, 8)] {
        let grid = TorusGrid::new(dim, n).unwrap();
        let cfg = SolverConfig::new(grid, 1.0, 0.1, 0.01, 1.0);
        for seed in 0..3 {
            let u = truncate(&random_divfree_field(grid, -1.0, seed));
            let fast = nonlinear_term(&u, &cfg);
            let slow = dense_advection(&u);
            let scale = slow.max_abs().max(1e-300);
            let err = fast.sub(&slow).unwrap().max_abs();
            assert!(err <= 1e-12 * scale, "dim {dim} N {n} seed {seed}: {err} vs {scale}");
        }
    }
}

#[test]
fn galerkin_trajectory_matches_dense_oracle() {
    let grid = TorusGrid::new(2, 8).unwrap();
    let cfg = SolverConfig::new(grid, 1.0, 0.05, 0.01, 1.0);
    let stepper = IfRk4::new(grid, cfg.alpha, cfg.nu, cfg.dt);
    let mut ws = NonlinearWorkspace::new(&cfg);
    let mut oracle = |f: &fracns_core::spectral::SpectralField| dense_advection(f);
    let u0 = truncate(&random_divfree_field(grid, 0.0, 11).scaled(2.0));
    let (mut a, mut b) = (u0.clone(), u0);
    for _ in 0..50 {
        a = stepper.step(&a, None, &mut ws).state;
        b = stepper.step(&b, None, &mut oracle).state;
    }
    let err = a.sub(&b).unwrap().l2_sq().sqrt();
    assert!(err <= 1e-10 * b.l2_sq().sqrt(), "{err}");
}

#[test]
fn sobolev_norm_matches_direct_sum() {
    let grid = TorusGrid::new(3, 8).unwrap();
    let u = random_divfree_field(grid, -0.5, 4);
    for s in [-1.5, -0.5, 0.0, 0.75, 1.0, 2.5] {
        let got = sobolev_norm(&u, s).unwrap();
        let want = sobolev_sq(&u, s).sqrt();
        assert!((got - want).abs() <= 1e-13 * want, "s = {s}");
    }
}

#[test]
fn energy_defect_is_fourth_order_in_dt() {
    let grid = TorusGrid::new(2, 32).unwrap();
    let u0 = random_divfree_field(grid, -1.5, 3).scaled(1.0);
    let defect = |dt: f64| {
        let cfg = SolverConfig::new(grid, 1.0, 0.2, dt, 1.0).with_record_every((0.1 / dt).round() as usize);
        let out = run(&cfg, &u0).unwrap();
        let last = out.series.len() - 1;
        energy_inequality_residual(&out.series, 0, last).unwrap().abs()
    };
    let (coarse, fine) = (defect(0.0025), defect(0.00125));
    let ratio = fine / coarse;
    assert!(coarse > 1e-12, "defect {coarse} too small to measure an order");
    assert!((1.0 / 20.0..1.0 / 12.0).contains(&ratio), "ratio {ratio} ({coarse} -> {fine})");
}

#[test]
fn hausdorff_normalization_matches_stirling_gamma() {
    let rel = |a: f64, b: f64| (a - b).abs() / b;
    assert!(rel(gamma_oracle(0.5), std::f64::consts::PI.sqrt()) < 1e-13);
    assert!(rel(gamma_oracle(1.5), std::f64::consts::PI.sqrt() / 2.0) < 1e-13);
    assert!(rel(gamma_oracle(5.0), 24.0) < 1e-13);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let g: f64 = rng.gen_range(0.01..4.0);
        let want = std::f64::consts::PI.powf(g / 2.0) / gamma_oracle(g / 2.0 + 1.0);
        let got = hausdorff_normalization(g);
        assert!((got - want).abs() <= 1e-12 * want, "gamma {g}: {got} vs {want}");
    }
}

fn random_family(rng: &mut ChaCha8Rng) -> (Vec<(f64, f64)>, f64) {
    let tail = rng.gen_range(0.5..5.0);
    let m = rng.gen_range(0..12) * 2;
    let mut pts: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..tail)).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let intervals = pts
        .chunks_exact(2)
        .filter(|c| c[0] < c[1])
        .map(|c| (c[0], c[1]))
        .collect();
    (intervals, tail)
}

#[test]
fn cover_sum_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..500 {
        let (intervals, tail) = random_family(&mut rng);
        let gamma = rng.gen_range(0.05..2.0);
        let set = IntervalSet::new(intervals.clone(), tail).unwrap();
        let got = cover_sum(&set, gamma).unwrap().raw_sum;
        let want = brute_force_cover(&intervals, tail, gamma);
        assert!((got - want).abs() <= 1e-14 * want.max(1.0), "{got} vs {want}");
    }
}
