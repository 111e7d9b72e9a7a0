//! Acceptance gate: one criterion per test, one printed pass/fail line each
//! (visible with `--nocapture`). Each line carries the measured numbers the
//! verdict is based on.

use std::time::Instant;

use leastgrad_core::cantor;
use leastgrad_core::geometry::{ConcaveArc, Point};
use leastgrad_core::regions::Regions;
use leastgrad_core::varlab::giusti::{giusti_extension, ExtensionDomain};
use leastgrad_core::varlab::solver::{least_gradient_solve, SolverConfig};
use leastgrad_core::varlab::suite::{
    coarea_lower_check, model_square_suite, nonattainment_probe, solver_exactness_suite,
};
use leastgrad_core::varlab::{band_scenario, disc_scenario, BoundaryDatum};
use leastgrad_core::verification as vf;

fn verdict(num: usize, name: &str, pass: bool, details: &str) {
    println!(
        "acceptance {num:02} {name}: {} ({details})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "acceptance {num:02} {name} failed: {details}");
}

#[test]
fn acceptance_01_chord_contraction() {
    let t = Instant::now();
    let (curve, _) = ConcaveArc::circle_default();
    let tree = cantor::build(&curve, 12).unwrap();
    let check = vf::chord_contraction_check(&tree).unwrap();
    let ok = check.pass && t.elapsed().as_secs_f64() < 5.0;
    verdict(
        1,
        "chord-contraction",
        ok,
        &format!("worst ratio {:.6}, {:.2}s", check.measured[0].1, t.elapsed().as_secs_f64()),
    );
}

#[test]
fn acceptance_02_fatness() {
    let t = Instant::now();
    let (curve, _) = ConcaveArc::circle_default();
    let tree = cantor::build(&curve, 12).unwrap();
    let check = vf::fatness_check(&tree).unwrap();
    let ok = check.pass && t.elapsed().as_secs_f64() < 5.0;
    verdict(
        2,
        "fatness",
        ok,
        &format!("c_12 {:.6e} >= floor {:.6e}, {:.2}s", check.measured[0].1, check.bounds[0].1, t.elapsed().as_secs_f64()),
    );
}

#[test]
fn acceptance_03_triangle_separation() {
    let t = Instant::now();
    let (curve, _) = ConcaveArc::circle_default();
    let tree = cantor::build(&curve, 10).unwrap();
    let check = vf::triangle_separation_check(&tree, 10).unwrap();
    let ok = check.pass && t.elapsed().as_secs_f64() < 30.0;
    verdict(
        3,
        "triangle-separation",
        ok,
        &format!("min half-chord slack {:.3e}, {:.2}s", check.margin, t.elapsed().as_secs_f64()),
    );
}

#[test]
fn acceptance_04_chord_arc_sagitta() {
    let t = Instant::now();
    let (curve, _) = ConcaveArc::circle_default();
    let check = vf::chord_arc_sweep(&curve, 1000, 20260824);
    let ok = check.pass && t.elapsed().as_secs_f64() < 10.0;
    verdict(
        4,
        "chord-arc+sagitta",
        ok,
        &format!("failures {:.0}, min slack {:.3e}, {:.2}s", check.measured[1].1, check.margin, t.elapsed().as_secs_f64()),
    );
}

#[test]
fn acceptance_05_lipschitz_trend() {
    let t = Instant::now();
    let regions = Regions::default_scenario(8).unwrap();
    let check = vf::lipschitz_trend_check(&regions, 8, 10_000, 424242).unwrap();
    let ok = check.pass && t.elapsed().as_secs_f64() < 60.0;
    verdict(
        5,
        "lipschitz-trend",
        ok,
        &format!("worst margin {:.3e}, {:.2}s", check.margin, t.elapsed().as_secs_f64()),
    );
}

#[test]
fn acceptance_06_rad_decay() {
    let t = Instant::now();
    let regions = Regions::default_scenario(8).unwrap();
    let levels: Vec<usize> = (2..=8).collect();
    let check = vf::rad_decay_check(&regions, &levels, -0.8).unwrap();
    let ok = check.pass && t.elapsed().as_secs_f64() < 120.0;
    verdict(
        6,
        "rad-decay",
        ok,
        &format!("log2 slope {:.4}, {:.2}s", check.measured[0].1, t.elapsed().as_secs_f64()),
    );
}

#[test]
fn acceptance_07_model_suite() {
    let t = Instant::now();
    let report = model_square_suite(7).unwrap();
    let ok = report.all_pass() && t.elapsed().as_secs_f64() < 30.0;
    verdict(
        7,
        "model-problem-suite",
        ok,
        &format!("{} checks, {:.2}s", report.checks.len(), t.elapsed().as_secs_f64()),
    );
}

#[test]
fn acceptance_08_disc_chord_minimizer() {
    let t = Instant::now();
    let x0 = 0.8; // arc endpoints (0.8, +-0.6)
    let datum = BoundaryDatum::disc_arc_left(x0, 0.01).unwrap();
    let field = disc_scenario(512, &datum);
    let config = SolverConfig {
        max_iter: 200_000,
        tol: 2e-5,
        check_every: 500,
    };
    let (u, rep) = least_gradient_solve(&field, &config).unwrap();
    let chord_len = 1.2;
    let tv_ok = (rep.tv - chord_len).abs() <= 0.02 * chord_len;
    // Agreement with the half-plane indicator {x < x0}.
    let g = &u.grid;
    let mut agree = 0usize;
    let mut total = 0usize;
    for j in 0..g.ny {
        for i in 0..g.nx {
            let c = g.idx(i, j);
            if !u.mask[c] {
                continue;
            }
            total += 1;
            let want = if g.center(i, j).x < x0 { 1.0 } else { 0.0 };
            if (u.vals[c] - want).abs() < 0.5 {
                agree += 1;
            }
        }
    }
    let frac = agree as f64 / total as f64;
    let ok = rep.converged && tv_ok && frac >= 0.99 && t.elapsed().as_secs_f64() < 600.0;
    verdict(
        8,
        "disc-chord-minimizer",
        ok,
        &format!(
            "tv {:.5} (target 1.2), agreement {:.4}, {} iters, {:.1}s",
            rep.tv,
            frac,
            rep.iterations,
            t.elapsed().as_secs_f64()
        ),
    );
}

#[test]
fn acceptance_09_nonattainment_signature() {
    let t = Instant::now();
    let config = SolverConfig {
        max_iter: 200_000,
        tol: 1e-6,
        check_every: 500,
    };
    let rows = nonattainment_probe(&[64, 128, 256], (0.25, 0.75), &config).unwrap();
    let tv256 = rows[2].tv;
    let mut ok = (tv256 - 0.5).abs() <= 0.03 * 0.5;
    ok &= rows.iter().all(|r| r.converged);
    ok &= rows[1].tv < rows[0].tv && rows[2].tv < rows[1].tv;
    // Mass drains by at least 30% per grid doubling.
    ok &= rows[1].l1 <= 0.7 * rows[0].l1 && rows[2].l1 <= 0.7 * rows[1].l1;
    ok &= t.elapsed().as_secs_f64() < 600.0;
    verdict(
        9,
        "nonattainment-signature",
        ok,
        &format!(
            "tv {:.5}/{:.5}/{:.5}, l1 {:.2e}/{:.2e}/{:.2e}, {:.1}s",
            rows[0].tv, rows[1].tv, rows[2].tv, rows[0].l1, rows[1].l1, rows[2].l1,
            t.elapsed().as_secs_f64()
        ),
    );
}

#[test]
fn acceptance_10_extension_upper_bound() {
    let t = Instant::now();
    let datum = BoundaryDatum::disc_arc_left(0.8, 0.01).unwrap();
    let template = disc_scenario(1024, &datum);
    let domain = ExtensionDomain::Disc(leastgrad_core::geometry::CircleBoundary {
        center: Point::new(0.0, 0.0),
        radius: 1.0,
        band: 0.5,
    });
    let (_, rep) = giusti_extension(&domain, &template, &datum, 0.1, 0.05).unwrap();
    let bound = 1.15 * datum.l1;
    let ok = rep.w11 <= bound && t.elapsed().as_secs_f64() < 300.0;
    verdict(
        10,
        "extension-upper-bound",
        ok,
        &format!("w11 {:.5} <= {:.5}, {:.2}s", rep.w11, bound, t.elapsed().as_secs_f64()),
    );
}

#[test]
fn acceptance_11_coarea_lower_bound() {
    let t = Instant::now();
    let regions = Regions::default_scenario(4).unwrap();
    let level = 4;
    let h = 1e-4f64;
    let datum = BoundaryDatum::cantor_arcs(&regions.tree, level, h).unwrap();
    let eta = regions.curve.eta();
    let epsilon = 0.05f64;
    let t0 = (epsilon * epsilon / 2.0).max(12.0 * h);
    let mut f_max = 0.0f64;
    for i in 0..=200 {
        f_max = f_max.max(regions.curve.f(eta * i as f64 / 200.0));
    }
    let bbox = (-4.0 * h, eta + 4.0 * h, -(2.0 * t0), f_max + 4.0 * h);
    let template = band_scenario(&regions.boundary, bbox, h, &datum);
    let (w, _) = giusti_extension(
        &ExtensionDomain::Disc(regions.boundary),
        &template,
        &datum,
        epsilon,
        0.001,
    )
    .unwrap();
    let check = coarea_lower_check(&w, &regions, level, 0.1);
    let ok = check.is_ok() && t.elapsed().as_secs_f64() < 600.0;
    let details = match &check {
        Ok(c) => format!("lhs {:.5e} >= 0.9 rhs {:.5e}, {:.2}s", c.lhs, c.rhs, t.elapsed().as_secs_f64()),
        Err(e) => format!("{e}"),
    };
    verdict(11, "coarea-lower-bound", ok, &details);
}

#[test]
fn acceptance_12_solver_exactness_oracle() {
    let t = Instant::now();
    let report = solver_exactness_suite().unwrap();
    let ok = report.all_pass() && t.elapsed().as_secs_f64() < 60.0;
    verdict(
        12,
        "solver-exactness-oracle",
        ok,
        &format!("{} instances, {:.2}s", report.checks.len(), t.elapsed().as_secs_f64()),
    );
}
