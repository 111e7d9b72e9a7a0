//! Curve, chord, and hypothesis checks against independent oracles.

use leastgrad_core::geometry::checks::{chord_arc_check, sagitta_bound_check};
use leastgrad_core::geometry::{quad, ConcaveArc, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Trapezoid refinement with Richardson extrapolation; independent of the
/// adaptive Simpson used by the library.
fn richardson_arclength(curve: &ConcaveArc, a: f64, b: f64) -> f64 {
    let g = |x: f64| {
        let d = curve.fp(x);
        (1.0 + d * d).sqrt()
    };
    let mut n = 64usize;
    let trap = |n: usize| {
        let h = (b - a) / n as f64;
        let mut s = 0.5 * (g(a) + g(b));
        for i in 1..n {
            s += g(a + i as f64 * h);
        }
        s * h
    };
    let mut prev = trap(n);
    loop {
        n *= 2;
        let cur = trap(n);
        let extrap = (4.0 * cur - prev) / 3.0;
        if (cur - prev).abs() < 1e-12 || n >= 1 << 22 {
            return extrap;
        }
        prev = cur;
    }
}

#[test]
fn arc_length_flat_integrand() {
    // Straight-segment limit: unit speed integrand.
    let v = quad::adaptive_simpson(&|_| 1.0, 0.0, 0.5, 1e-12).unwrap();
    assert!((v - 0.5).abs() < 1e-12);
}

#[test]
fn arc_length_circle_angle() {
    // Chord subtending 0.1 rad of the unit circle: arc length is exactly 0.1.
    let theta = 0.1_f64;
    let eta = 2.0 * (theta / 2.0).sin();
    let arc = ConcaveArc::new(
        std::sync::Arc::new(leastgrad_core::geometry::CircleProfile { radius: 1.0, eta }),
        eta,
        leastgrad_core::geometry::Frame::identity(),
        None,
    )
    .unwrap();
    let len = arc.arc_length(0.0, eta).unwrap();
    assert!((len - theta).abs() < 1e-11, "len {len}");
}

#[test]
fn arc_length_matches_refinement_oracle() {
    let (arc, _) = ConcaveArc::circle_default();
    let ours = arc.arc_length(0.0, arc.eta()).unwrap();
    let oracle = richardson_arclength(&arc, 0.0, arc.eta());
    assert!((ours - oracle).abs() < 1e-10, "ours {ours} oracle {oracle}");
}

#[test]
fn arc_length_zero_and_domain_errors() {
    let (arc, _) = ConcaveArc::circle_default();
    assert_eq!(arc.arc_length(0.01, 0.01).unwrap(), 0.0);
    assert!(arc.arc_length(-0.01, 0.02).is_err());
    assert!(arc.arc_length(0.0, arc.eta() + 1e-3).is_err());
}

#[test]
fn arc_length_additive() {
    let (arc, _) = ConcaveArc::circle_default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let mut xs = [
            rng.gen_range(0.0..arc.eta()),
            rng.gen_range(0.0..arc.eta()),
            rng.gen_range(0.0..arc.eta()),
        ];
        xs.sort_by(f64::total_cmp);
        let [a, b, c] = xs;
        let whole = arc.arc_length(a, c).unwrap();
        let parts = arc.arc_length(a, b).unwrap() + arc.arc_length(b, c).unwrap();
        assert!((whole - parts).abs() < 1e-11);
    }
}

#[test]
fn perpendicular_parabola_midpoint() {
    let eta = 0.01;
    let arc = ConcaveArc::parabola(eta).unwrap();
    assert!(arc.hypotheses().main_ok);
    let chord = arc.root_chord();
    let m = chord.at(chord.len / 2.0);
    let p = arc.perpendicular_intersection(&chord, m).unwrap();
    assert!((p.x - eta / 2.0).abs() < 1e-12);
    assert!((p.y - eta * eta / 4.0).abs() < 1e-12);
}

#[test]
fn perpendicular_endpoint_fixed() {
    let (arc, _) = ConcaveArc::circle_default();
    let chord = arc.root_chord();
    let p = arc.perpendicular_intersection(&chord, chord.start).unwrap();
    assert!(p.dist(chord.start) < 1e-12);
}

#[test]
fn perpendicular_matches_bisection_oracle() {
    let (arc, _) = ConcaveArc::circle_default();
    let chord = arc.root_chord();
    let m = chord.at(chord.len / 3.0);
    let p = arc.perpendicular_intersection(&chord, m).unwrap();

    // Independent plain bisection on the chord-coordinate crossing equation.
    let u = chord.dir();
    let g = |x: f64| (arc.point_at(x) - m).dot(u);
    let (mut lo, mut hi) = (chord.a, chord.b);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if g(mid) * g(lo) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let x_oracle = 0.5 * (lo + hi);
    assert!((p.x - x_oracle).abs() < 1e-12, "got {} oracle {}", p.x, x_oracle);
}

#[test]
fn perpendicular_is_orthogonal() {
    let (arc, _) = ConcaveArc::circle_default();
    let chord = arc.chord(0.007, 0.041).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let m = chord.at(rng.gen_range(0.0..chord.len));
        let p = arc.perpendicular_intersection(&chord, m).unwrap();
        let v = p - m;
        if v.norm() > 1e-9 {
            let angle = v.unit().dot(chord.dir()).abs();
            assert!(angle < 1e-9, "angle defect {angle}");
        }
    }
}

#[test]
fn perpendicular_refused_without_hypotheses() {
    // Parabola with eta = 0.05 violates the smallness hypotheses.
    let arc = ConcaveArc::parabola(0.05).unwrap();
    assert!(!arc.hypotheses().main_ok);
    let chord = arc.root_chord();
    let m = chord.at(chord.len / 2.0);
    assert!(arc.perpendicular_intersection(&chord, m).is_err());
}

#[test]
fn perpendicular_rejects_off_chord_point() {
    let (arc, _) = ConcaveArc::circle_default();
    let chord = arc.root_chord();
    assert!(arc
        .perpendicular_intersection(&chord, Point::new(0.01, 0.01))
        .is_err());
}

#[test]
fn chord_arc_default_and_random_sweep() {
    let (arc, _) = ConcaveArc::circle_default();
    let full = chord_arc_check(&arc, 0.0, arc.eta()).unwrap();
    assert!(full.chord_len <= full.arc_len && full.arc_len <= full.upper_bound);

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let a = rng.gen_range(0.0..arc.eta());
        let b = rng.gen_range(0.0..arc.eta());
        if (a - b).abs() < 1e-9 {
            continue;
        }
        chord_arc_check(&arc, a.min(b), a.max(b)).unwrap();
    }
}

#[test]
fn sagitta_parabola_tight() {
    // For the parabola the bound (b-a)^2 |f''| / 8 = eta^2/4 is attained
    // at the midpoint.
    let eta = 0.01;
    let arc = ConcaveArc::parabola(eta).unwrap();
    let chord = arc.root_chord();
    let check = sagitta_bound_check(&arc, &chord, 100).unwrap();
    assert!((check.bound - eta * eta / 4.0).abs() < 1e-15);
    assert!((check.max_height - check.bound).abs() < 1e-9);
}

#[test]
fn sagitta_default_scenario() {
    let (arc, _) = ConcaveArc::circle_default();
    let chord = arc.root_chord();
    let check = sagitta_bound_check(&arc, &chord, 10_000).unwrap();
    assert!(check.max_height <= check.bound);
    assert!(check.max_height > 0.0);
}

#[test]
fn hypotheses_default_pass_parabola_fail() {
    let (arc, _) = ConcaveArc::circle_default();
    let h = arc.hypotheses();
    assert!(h.all_ok(), "{h:?}");
    assert!(h.certified);
    // 1/(16 |f''|^2) ~ 0.0624 for the unit-circle graph.
    assert!((h.main_bound - 0.0624).abs() < 1e-3);

    let bad = ConcaveArc::parabola(0.05).unwrap();
    assert!(!bad.hypotheses().main_ok);
    assert!(!bad.hypotheses().all_ok());
}

#[test]
fn hypotheses_monotone_in_eta() {
    // Shrinking eta never flips pass -> fail.
    let mut prev_ok = false;
    for &eta in &[0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.001] {
        let arc = ConcaveArc::new(
            std::sync::Arc::new(leastgrad_core::geometry::CircleProfile { radius: 1.0, eta }),
            eta,
            leastgrad_core::geometry::Frame::identity(),
            None,
        )
        .unwrap();
        let ok = arc.hypotheses().all_ok();
        assert!(!prev_ok || ok, "pass flipped to fail when shrinking eta to {eta}");
        prev_ok = ok;
    }
    assert!(prev_ok, "smallest eta must pass");
}

#[test]
fn restriction_sup_norms_below_global() {
    let (arc, _) = ConcaveArc::circle_default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let a = rng.gen_range(0.0..arc.eta());
        let b = rng.gen_range(0.0..arc.eta());
        if a >= b {
            continue;
        }
        let (fp, fpp) = arc.sup_on_interval(a, b, 500);
        assert!(fp <= arc.sup_fp() + 1e-15);
        assert!(fpp <= arc.sup_fpp() + 1e-15);
    }
}
