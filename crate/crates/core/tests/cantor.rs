//! Subdivision tree: contraction, fatness, and structural invariants.

use leastgrad_core::cantor::{build, subdivide};
use leastgrad_core::geometry::ConcaveArc;

#[test]
fn depth_zero_root_only() {
    let (arc, _) = ConcaveArc::circle_default();
    let tree = build(&arc, 0).unwrap();
    assert_eq!(tree.depth(), 0);
    let s = tree.chord_stats(0).unwrap();
    assert!((s.mu - arc.eta()).abs() < 1e-15);
    assert!((s.c - arc.eta()).abs() < 1e-15);
}

#[test]
fn subdivide_removes_exact_middle() {
    let (arc, _) = ConcaveArc::circle_default();
    let tree = build(&arc, 0).unwrap();
    let root = tree.node(0, 0).unwrap();
    let (l, r) = subdivide(root, &arc).unwrap();
    let d = root.chord.len;
    // The two intersection feet project back onto the parent chord at the
    // removed segment's endpoints: gap of exact length d^2 centered.
    let s_l = root.chord.coord_of(arc.point_at(l.b));
    let s_r = root.chord.coord_of(arc.point_at(r.a));
    assert!((s_r - s_l - d * d).abs() < 1e-12, "gap {}", s_r - s_l);
    assert!(((s_l + s_r) / 2.0 - d / 2.0).abs() < 1e-12);
}

#[test]
fn subdivide_symmetric_for_parabola() {
    let eta = 0.01;
    let arc = ConcaveArc::parabola(eta).unwrap();
    let tree = build(&arc, 0).unwrap();
    let (l, r) = subdivide(tree.node(0, 0).unwrap(), &arc).unwrap();
    assert!((l.chord.len - r.chord.len).abs() < 1e-14);
    assert!((l.a - (eta - r.b)).abs() < 1e-13);
    assert!((l.b - (eta - r.a)).abs() < 1e-13);
}

#[test]
fn child_chords_match_pythagoras_decomposition() {
    // Independent recomputation: the child chord is the hypotenuse of the
    // right triangle with legs (removed-middle-side offset, height), i.e.
    // H1(C_child)^2 = (chord gap to middle)^2 + height^2 computed from the
    // intersection points directly.
    let (arc, _) = ConcaveArc::circle_default();
    let tree = build(&arc, 0).unwrap();
    let root = tree.node(0, 0).unwrap();
    let (l, r) = subdivide(root, &arc).unwrap();
    for child in [&l, &r] {
        assert!(child.chord.len <= 2.0 / 3.0 * root.chord.len);
        // Recompute the chord length from raw endpoint coordinates.
        let p = arc.point_at(child.a);
        let q = arc.point_at(child.b);
        let direct = ((q.x - p.x).powi(2) + (q.y - p.y).powi(2)).sqrt();
        assert!((direct - child.chord.len).abs() < 1e-15);
        // Pythagoras in the parent-chord frame: chord coordinate span and
        // height above the parent chord.
        let u = root.chord.dir();
        let n = root.chord.normal();
        let dx = (q - p).dot(u);
        let dy = (q - p).dot(n);
        assert!((dx.hypot(dy) - child.chord.len).abs() < 1e-15);
    }
}

#[test]
fn contraction_and_fatness_to_depth_12() {
    let (arc, _) = ConcaveArc::circle_default();
    let tree = build(&arc, 12).unwrap();
    let eta = arc.eta();

    // mu_N <= (2/3)^N eta, with per-node strictness below level 0.
    for n in 0..=12usize {
        let s = tree.chord_stats(n).unwrap();
        assert!(s.mu <= (2.0f64 / 3.0).powi(n as i32) * eta + 1e-15);
        assert_eq!(tree.level(n).unwrap().len(), 1 << n);
        if n > 0 {
            for node in tree.level(n).unwrap() {
                let parent = tree.node(n - 1, node.index / 2).unwrap();
                assert!(node.chord.len < 2.0 / 3.0 * parent.chord.len);
                assert!(parent.a <= node.a && node.b <= parent.b);
            }
        }
    }

    // c_{N+1} >= c_N (1 - (2/3)^N) and the closed-form floor at depth 12.
    for n in 0..12usize {
        let c_n = tree.chord_stats(n).unwrap().c;
        let c_next = tree.chord_stats(n + 1).unwrap().c;
        assert!(c_next >= c_n * (1.0 - (2.0f64 / 3.0).powi(n as i32)) - 1e-14);
    }
    let c1 = tree.chord_stats(1).unwrap().c;
    let mut prod = 1.0;
    for k in 1..=11 {
        prod *= 1.0 - (2.0f64 / 3.0).powi(k);
    }
    let c12 = tree.chord_stats(12).unwrap().c;
    assert!(c12 >= c1 * prod && c1 * prod > 0.0);
}

#[test]
fn level_intervals_disjoint() {
    let (arc, _) = ConcaveArc::circle_default();
    let tree = build(&arc, 8).unwrap();
    for n in 0..=8usize {
        let nodes = tree.level(n).unwrap();
        for w in nodes.windows(2) {
            assert!(w[0].b < w[1].a, "overlap at level {n}");
        }
    }
}

#[test]
fn measure_bounds_monotone_and_positive() {
    let (arc, _) = ConcaveArc::circle_default();
    let tree = build(&arc, 8).unwrap();
    let mut prev = f64::INFINITY;
    for n in 0..=8usize {
        let mb = tree.measure_bounds(n).unwrap();
        assert!(mb.arc_sum <= prev + 1e-12, "arc sums must decrease");
        assert!(mb.arc_sum >= mb.lower_bound && mb.lower_bound > 0.0);
        prev = mb.arc_sum;
    }
    // Level 0 is the full arc, at least as long as its chord.
    assert!(tree.measure_bounds(0).unwrap().arc_sum >= arc.eta());
}

#[test]
fn build_deterministic() {
    let (arc, _) = ConcaveArc::circle_default();
    let t1 = build(&arc, 6).unwrap();
    let t2 = build(&arc, 6).unwrap();
    for n in 0..=6usize {
        let (a, b) = (t1.level(n).unwrap(), t2.level(n).unwrap());
        for (x, y) in a.iter().zip(b) {
            assert_eq!(x.a.to_bits(), y.a.to_bits());
            assert_eq!(x.b.to_bits(), y.b.to_bits());
            assert_eq!(x.chord.len.to_bits(), y.chord.len.to_bits());
            assert_eq!(x.arc_len.to_bits(), y.arc_len.to_bits());
        }
    }
}

#[test]
fn build_refuses_bad_inputs() {
    let (arc, _) = ConcaveArc::circle_default();
    assert!(build(&arc, 17).is_err());
    let bad = ConcaveArc::parabola(0.05).unwrap();
    assert!(build(&bad, 1).is_err());
}

#[test]
fn chords_satisfy_chord_arc_inequality() {
    use leastgrad_core::geometry::checks::chord_arc_check;
    let (arc, _) = ConcaveArc::circle_default();
    let tree = build(&arc, 8).unwrap();
    for n in 0..=8usize {
        for node in tree.level(n).unwrap() {
            chord_arc_check(&arc, node.a, node.b).unwrap();
        }
    }
}
