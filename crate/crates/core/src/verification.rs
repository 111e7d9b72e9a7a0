//! Check builders shared by the CLI `verify` command and the acceptance
//! suite: each wraps one quantitative inequality of the construction into a
//! `CheckResult` with its measured values and margin.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cantor::CantorTree;
use crate::geometry::checks::{chord_arc_check, sagitta_bound_check};
use crate::geometry::ConcaveArc;
use crate::regions::exact::level_pairwise_disjoint;
use crate::regions::{triangles_of_level, Regions};
use crate::report::CheckResult;
use crate::Result;

pub fn hypotheses_check(curve: &ConcaveArc) -> CheckResult {
    let h = curve.hypotheses();
    let margin = (h.main_bound - h.eta)
        .min(16.0 / 9.0 - h.cap_value)
        .min(h.strict_bound - h.eta);
    CheckResult::new("geometry.hypotheses", "hyp.smallness", h.all_ok())
        .measured("eta", h.eta)
        .measured("sup_fp", h.sup_fp)
        .measured("sup_fpp", h.sup_fpp)
        .measured("cap_value", h.cap_value)
        .bound("main_bound", h.main_bound)
        .bound("strict_bound", h.strict_bound)
        .bound("cap_bound", 16.0 / 9.0)
        .margin(margin)
        .note(if h.certified {
            "sup_norms_certified"
        } else {
            "sup_norms_sampled"
        })
}

/// Per-node strict contraction `child < (2/3) parent` and the level bound
/// `mu_N <= (2/3)^N`.
pub fn chord_contraction_check(tree: &CantorTree) -> Result<CheckResult> {
    let mut worst_ratio = 0.0f64;
    let mut level_ok = true;
    for n in 1..=tree.depth() {
        for node in tree.level(n)? {
            let parent = tree.node(n - 1, node.index / 2)?;
            worst_ratio = worst_ratio.max(node.chord.len / parent.chord.len);
        }
        let mu = tree.chord_stats(n)?.mu;
        level_ok &= mu <= (2.0f64 / 3.0).powi(n as i32);
    }
    let pass = worst_ratio < 2.0 / 3.0 && level_ok;
    Ok(CheckResult::new("cantor.contraction", "bound.chord-contraction", pass)
        .measured("worst_child_parent_ratio", worst_ratio)
        .bound("ratio", 2.0 / 3.0)
        .margin(2.0 / 3.0 - worst_ratio))
}

/// `c_{N+1} >= c_N (1 - (2/3)^N)` per level, and the positive product floor
/// at the bottom level.
pub fn fatness_check(tree: &CantorTree) -> Result<CheckResult> {
    let depth = tree.depth();
    let mut worst_slack = f64::INFINITY;
    let mut pass = true;
    for n in 1..depth {
        let c_n = tree.chord_stats(n)?.c;
        let c_next = tree.chord_stats(n + 1)?.c;
        let floor = c_n * (1.0 - (2.0f64 / 3.0).powi(n as i32));
        worst_slack = worst_slack.min(c_next - floor);
        pass &= c_next >= floor;
    }
    let c1 = tree.chord_stats(1.min(depth))?.c;
    let mut product_floor = c1;
    for k in 1..depth {
        product_floor *= 1.0 - (2.0f64 / 3.0).powi(k as i32);
    }
    let c_bottom = tree.chord_stats(depth)?.c;
    pass &= c_bottom >= product_floor && product_floor > 0.0;
    Ok(CheckResult::new("cantor.fatness", "bound.fatness-recursion", pass)
        .measured("c_bottom", c_bottom)
        .measured("worst_step_slack", if depth > 1 { worst_slack } else { 0.0 })
        .bound("product_floor", product_floor)
        .margin(c_bottom - product_floor))
}

/// Positive arc-measure floor at level `n`, and monotone arc sums.
pub fn measure_floor_check(tree: &CantorTree, n: usize) -> Result<CheckResult> {
    let mb = tree.measure_bounds(n)?;
    let mut monotone = true;
    for k in 1..=n {
        monotone &= tree.measure_bounds(k)?.arc_sum <= tree.measure_bounds(k - 1)?.arc_sum;
    }
    let pass = mb.arc_sum >= mb.lower_bound && mb.lower_bound > 0.0 && monotone;
    Ok(CheckResult::new("cantor.measure-floor", "bound.fat-limit-measure", pass)
        .measured("arc_sum", mb.arc_sum)
        .bound("lower_bound", mb.lower_bound)
        .margin(mb.arc_sum - mb.lower_bound))
}

/// Chord-vs-arc and sagitta inequalities on random sub-chords.
pub fn chord_arc_sweep(curve: &ConcaveArc, chords: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eta = curve.eta();
    let mut failures = 0usize;
    let mut min_arc_slack = f64::INFINITY;
    let mut min_sagitta_slack = f64::INFINITY;
    for _ in 0..chords {
        let mut a = rng.gen_range(0.0..eta);
        let mut b = rng.gen_range(0.0..eta);
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        if b - a < 1e-4 * eta {
            b = (a + 1e-4 * eta).min(eta);
        }
        match chord_arc_check(curve, a, b) {
            Ok(c) => min_arc_slack = min_arc_slack.min(c.upper_bound - c.arc_len),
            Err(_) => failures += 1,
        }
        match curve
            .chord(a, b)
            .and_then(|ch| sagitta_bound_check(curve, &ch, 50))
        {
            Ok(s) => min_sagitta_slack = min_sagitta_slack.min(s.bound - s.max_height),
            Err(_) => failures += 1,
        }
    }
    CheckResult::new("geometry.chord-arc-sweep", "bound.chord-arc+sagitta", failures == 0)
        .measured("chords", chords as f64)
        .measured("failures", failures as f64)
        .measured("min_arc_slack", min_arc_slack)
        .measured("min_sagitta_slack", min_sagitta_slack)
        .margin(min_arc_slack.min(min_sagitta_slack))
}

/// Hypotenuse-vs-parent-chord separation and exact pairwise disjointness of
/// same-level triangles, levels `1..=max_level`.
pub fn triangle_separation_check(tree: &CantorTree, max_level: usize) -> Result<CheckResult> {
    let mut worst = f64::INFINITY;
    let mut pass = true;
    for n in 1..=max_level.min(tree.depth()) {
        let tris = triangles_of_level(tree, n)?;
        for t in &tris {
            let parent = tree.node(n - 1, t.index / 2)?;
            let slack = 0.5 - t.hyp_len / parent.chord.len;
            worst = worst.min(slack);
            pass &= slack > 0.0;
        }
        pass &= level_pairwise_disjoint(&tris);
    }
    Ok(
        CheckResult::new("regions.triangle-separation", "bound.hyp-half-chord+disjoint", pass)
            .measured("min_half_chord_slack", worst)
            .margin(worst),
    )
}

/// Sampled Lipschitz ratios of the arc-coordinate projections stay within
/// `1 + c_N`, with a non-increasing per-level maximum for `N in 2..=max`.
pub fn lipschitz_trend_check(
    regions: &Regions,
    max_level: usize,
    pairs: usize,
    seed: u64,
) -> Result<CheckResult> {
    let mut pass = true;
    let mut worst_margin = f64::INFINITY;
    let mut prev = f64::INFINITY;
    let mut last_ratio = 0.0;
    for n in 2..=max_level {
        let probe = regions.lipschitz_probe(n, pairs, seed + n as u64)?;
        let c_n = regions.lipschitz_constant(n)?;
        worst_margin = worst_margin.min(1.0 + c_n - probe.max_ratio);
        pass &= probe.max_ratio <= 1.0 + c_n;
        pass &= probe.max_ratio <= prev + 1e-12;
        prev = probe.max_ratio;
        last_ratio = probe.max_ratio;
    }
    Ok(
        CheckResult::new("regions.lipschitz-trend", "bound.projection-lipschitz", pass)
            .measured("max_ratio_last_level", last_ratio)
            .measured("levels", (max_level.saturating_sub(1)) as f64)
            .margin(worst_margin),
    )
}

/// Inscribed-radius decay: monotone decreasing over `levels`, log2 slope at
/// most `slope_bound` (e.g. -0.8).
pub fn rad_decay_check(regions: &Regions, levels: &[usize], slope_bound: f64) -> Result<CheckResult> {
    use crate::regions::rad::{rad_estimate, suggested_resolution};
    let mut radii = Vec::with_capacity(levels.len());
    for &n in levels {
        let res = suggested_resolution(regions, n)?;
        radii.push(rad_estimate(regions, n, res)?.radius);
    }
    let mut monotone = true;
    for w in radii.windows(2) {
        monotone &= w[1] < w[0];
    }
    // Least-squares slope of log2(rad) against the level.
    let k = levels.len() as f64;
    let mean_x = levels.iter().map(|&n| n as f64).sum::<f64>() / k;
    let mean_y = radii.iter().map(|r| r.log2()).sum::<f64>() / k;
    let mut num = 0.0;
    let mut den = 0.0;
    for (&n, r) in levels.iter().zip(&radii) {
        num += (n as f64 - mean_x) * (r.log2() - mean_y);
        den += (n as f64 - mean_x).powi(2);
    }
    let slope = num / den;
    let pass = monotone && slope <= slope_bound;
    Ok(CheckResult::new("regions.rad-decay", "bound.inscribed-radius-decay", pass)
        .measured("slope_log2", slope)
        .measured("rad_first", radii[0])
        .measured("rad_last", *radii.last().unwrap())
        .bound("slope", slope_bound)
        .margin(slope_bound - slope))
}
