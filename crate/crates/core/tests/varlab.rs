use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use leastgrad_core::varlab::giusti::{giusti_extension, ExtensionDomain};
use leastgrad_core::varlab::solver::{least_gradient_solve, SolverConfig};
use leastgrad_core::varlab::suite::{
    brute_force_tv_min, model_square_suite, nonattainment_probe, oracle_instances,
    solver_exactness_suite,
};
use leastgrad_core::varlab::tv::{tv, tv_directional};
use leastgrad_core::varlab::{square_scenario, BoundaryDatum, Grid, GridField};

fn random_field(nx: usize, ny: usize, seed: u64) -> GridField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = Grid {
        nx,
        ny,
        x0: 0.0,
        y0: 0.0,
        h: 1.0 / nx as f64,
    };
    GridField {
        grid,
        mask: vec![true; grid.cells()],
        fixed: vec![false; grid.cells()],
        vals: (0..grid.cells()).map(|_| rng.gen_range(-2.0..2.0)).collect(),
    }
}

/// Independent re-summation of the isotropic TV, written against the
/// definition with explicit index arithmetic and reversed traversal order.
fn tv_naive(f: &GridField) -> f64 {
    let (nx, ny, h) = (f.grid.nx, f.grid.ny, f.grid.h);
    let mut total = 0.0f64;
    for j in (0..ny).rev() {
        for i in (0..nx).rev() {
            let c = j * nx + i;
            if !f.mask[c] {
                continue;
            }
            let dx = if i + 1 < nx && f.mask[c + 1] {
                f.vals[c + 1] - f.vals[c]
            } else {
                0.0
            };
            let dy = if j + 1 < ny && f.mask[c + nx] {
                f.vals[c + nx] - f.vals[c]
            } else {
                0.0
            };
            total += (dx * dx + dy * dy).sqrt();
        }
    }
    h * total
}

#[test]
fn tv_matches_naive_resummation() {
    for seed in 0..20 {
        let f = random_field(8, 8, seed);
        let a = tv(&f);
        let b = tv_naive(&f);
        assert!((a - b).abs() <= 1e-12 * (1.0 + b), "seed {seed}: {a} vs {b}");
    }
}

#[test]
fn tv_is_positively_homogeneous() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for seed in 0..10 {
        let f = random_field(12, 9, 100 + seed);
        let base = tv(&f);
        let c: f64 = rng.gen_range(-3.0..3.0);
        let mut g = f.clone();
        for v in &mut g.vals {
            *v *= c;
        }
        assert!((tv(&g) - c.abs() * base).abs() <= 1e-12 * (1.0 + base));
    }
}

#[test]
fn tv_dominated_by_axis_sum_and_dominates_each_axis() {
    for seed in 0..10 {
        let f = random_field(10, 10, 200 + seed);
        let t = tv(&f);
        let t1 = tv_directional(&f, 1);
        let t2 = tv_directional(&f, 2);
        assert!(t <= t1 + t2 + 1e-12);
        assert!(t + 1e-12 >= t1.max(t2));
    }
}

#[test]
fn tv_of_constant_is_zero() {
    let mut f = random_field(16, 16, 3);
    for v in &mut f.vals {
        *v = 0.75;
    }
    assert_eq!(tv(&f), 0.0);
    assert_eq!(tv_directional(&f, 1), 0.0);
    assert_eq!(tv_directional(&f, 2), 0.0);
}

#[test]
fn solver_zero_datum_returns_zero_field() {
    let datum = BoundaryDatum::zero();
    let field = square_scenario(16, &datum);
    let (u, rep) = least_gradient_solve(&field, &SolverConfig::default()).unwrap();
    assert!(rep.converged);
    assert!(rep.tv <= 1e-10, "tv = {}", rep.tv);
    assert!(u.vals.iter().all(|v| v.abs() <= 1e-9));
}

#[test]
fn solver_matches_brute_force_on_vertical_split() {
    let (_, field) = oracle_instances().remove(1);
    let oracle = brute_force_tv_min(&field).unwrap();
    let config = SolverConfig {
        max_iter: 500_000,
        tol: 1e-9,
        check_every: 500,
    };
    let (_, rep) = least_gradient_solve(&field, &config).unwrap();
    assert!(rep.converged);
    assert!(
        (rep.tv - oracle).abs() <= 1e-6,
        "solver {} vs oracle {}",
        rep.tv,
        oracle
    );
}

#[test]
fn solver_reports_nonconvergence_without_error() {
    let datum = BoundaryDatum::bottom_interval(0.25, 0.75, 0.0).unwrap();
    let field = square_scenario(32, &datum);
    let config = SolverConfig {
        max_iter: 10,
        tol: 1e-12,
        check_every: 5,
    };
    let (_, rep) = least_gradient_solve(&field, &config).unwrap();
    assert!(!rep.converged);
    assert!(rep.primal_dual_gap > 0.0);
}

#[test]
fn brute_force_refuses_large_grids() {
    let datum = BoundaryDatum::bottom_interval(0.25, 0.75, 0.0).unwrap();
    let field = square_scenario(10, &datum);
    assert!(brute_force_tv_min(&field).is_err());
}

#[test]
fn solver_exactness_oracle_suite_passes() {
    let report = solver_exactness_suite().unwrap();
    report.self_validate().unwrap();
    assert!(report.all_pass(), "\n{}", report.render());
}

#[test]
fn model_suite_passes_and_is_deterministic() {
    let a = model_square_suite(42).unwrap();
    a.self_validate().unwrap();
    assert!(a.all_pass(), "\n{}", a.render());
    let b = model_square_suite(42).unwrap();
    assert_eq!(a.render(), b.render());
}

#[test]
fn nonattainment_gap_shrinks_with_resolution() {
    let rows = nonattainment_probe(&[16, 32, 64], (0.25, 0.75), &SolverConfig::default()).unwrap();
    for r in &rows {
        assert!(r.converged, "n = {} did not converge", r.n);
        assert!(r.gap > 0.0, "n = {}: tv should stay above the datum norm", r.n);
    }
    assert!(rows[1].gap < rows[0].gap);
    assert!(rows[2].gap < rows[1].gap);
    assert!(rows[2].l1 < rows[0].l1);
}

#[test]
fn giusti_zero_datum_is_zero() {
    let datum = BoundaryDatum::zero();
    let template = square_scenario(128, &datum);
    let (u, rep) = giusti_extension(&ExtensionDomain::UnitSquare, &template, &datum, 0.2, 0.05).unwrap();
    assert_eq!(rep.w11, 0.0);
    assert!(u.vals.iter().all(|&v| v == 0.0));
}

#[test]
fn giusti_refuses_underresolved_grids() {
    let datum = BoundaryDatum::bottom_interval(0.25, 0.75, 0.05).unwrap();
    let template = square_scenario(16, &datum);
    assert!(giusti_extension(&ExtensionDomain::UnitSquare, &template, &datum, 0.1, 0.05).is_err());
}

#[test]
fn giusti_trace_matches_datum_near_boundary() {
    let n = 256;
    let datum = BoundaryDatum::bottom_interval(0.25, 0.75, 4.0 / n as f64).unwrap();
    let template = square_scenario(n, &datum);
    let (u, rep) = giusti_extension(&ExtensionDomain::UnitSquare, &template, &datum, 0.1, 0.05).unwrap();
    assert!(rep.layers >= 1);
    // Bottom row reproduces the datum.
    for i in 0..n {
        let p = u.grid.center(i, 0);
        let want = datum.value_at(leastgrad_core::geometry::Point::new(p.x, 0.0));
        let got = u.vals[u.grid.idx(i, 0)];
        assert!((got - want).abs() <= 1e-12, "i = {i}: {got} vs {want}");
    }
    // Deep interior is identically zero.
    let mid = u.grid.idx(n / 2, n / 2);
    assert_eq!(u.vals[mid], 0.0);
}

#[test]
fn datum_l1_norms_are_exact() {
    let d = BoundaryDatum::bottom_interval(0.2, 0.9, 0.01).unwrap();
    assert!((d.l1 - 0.7).abs() < 1e-15);
    let d = BoundaryDatum::disc_arc_left(0.0, 0.0).unwrap();
    assert!((d.l1 - std::f64::consts::PI).abs() < 1e-12);
}
