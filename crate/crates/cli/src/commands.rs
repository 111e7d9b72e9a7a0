//! Command implementations. Each returns the process exit code:
//! 0 success, 1 check failure, 2 misuse, 3 numeric non-convergence.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};

use leastgrad_core::cantor;
use leastgrad_core::export;
use leastgrad_core::geometry::{CircleBoundary, ConcaveArc};
use leastgrad_core::regions::Regions;
use leastgrad_core::report::{CheckResult, VerificationReport};
use leastgrad_core::svg;
use leastgrad_core::varlab::giusti::{giusti_extension, ExtensionDomain};
use leastgrad_core::varlab::solver::{least_gradient_solve, SolverConfig};
use leastgrad_core::varlab::suite::{coarea_lower_check, model_square_suite, nonattainment_probe};
use leastgrad_core::varlab::{band_scenario, disc_scenario, square_scenario, BoundaryDatum, GridField};
use leastgrad_core::verification as vf;

use crate::config::{CurvePreset, DatumSpec, RunConfig, Scenario};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_MISUSE: i32 = 2;
pub const EXIT_NONCONVERGED: i32 = 3;

fn make_curve(preset: &CurvePreset) -> Result<(ConcaveArc, Option<CircleBoundary>)> {
    Ok(match preset {
        CurvePreset::Circle => {
            let (arc, boundary) = ConcaveArc::circle_default();
            (arc, Some(boundary))
        }
        CurvePreset::Parabola { eta } => (ConcaveArc::parabola(*eta)?, None),
    })
}

fn write_out(out: &Path, name: &str, contents: &[u8]) -> Result<()> {
    fs::create_dir_all(out)?;
    fs::write(out.join(name), contents).with_context(|| format!("writing {name}"))
}

/// Timestamps and environment live here, never in the reports, so report
/// files stay byte-identical across reruns of the same config.
pub fn write_metadata(out: &Path, command: &str) -> Result<()> {
    let now = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let threads = std::env::var("LEASTGRAD_THREADS").unwrap_or_else(|_| "unset".into());
    let text = format!(
        "command = {command}\nunix_time = {now}\nversion = {}\nthreads_cap = {threads}\n",
        env!("CARGO_PKG_VERSION")
    );
    write_out(out, "run-metadata.txt", text.as_bytes())
}

pub fn cmd_build(cfg: &RunConfig, out: &Path) -> Result<i32> {
    let (curve, _) = make_curve(&cfg.curve)?;
    let tree = cantor::build(&curve, cfg.build.depth)?;
    let exported = export::export_tree(&tree, curve.eta());
    write_out(out, "tree.txt", exported.to_text().as_bytes())?;
    let figure = svg::construction_figure(&curve, &tree, cfg.build.draw_depth)?;
    write_out(out, "construction.svg", figure.as_bytes())?;

    let mut summary = String::new();
    let _ = writeln!(summary, "curve = {}", curve.profile_name());
    let _ = writeln!(summary, "eta = {:.16e}", curve.eta());
    let _ = writeln!(summary, "depth = {}", tree.depth());
    for n in 0..=tree.depth() {
        let s = tree.chord_stats(n)?;
        let mb = tree.measure_bounds(n)?;
        let _ = writeln!(
            summary,
            "level {n} nodes={} mu={:.16e} c={:.16e} arc_sum={:.16e}",
            tree.level(n)?.len(),
            s.mu,
            s.c,
            mb.arc_sum
        );
    }
    write_out(out, "build-report.txt", summary.as_bytes())?;
    println!("{summary}");
    Ok(EXIT_OK)
}

pub fn cmd_verify(cfg: &RunConfig, out: &Path) -> Result<i32> {
    let v = &cfg.verify;
    let (curve, boundary) = make_curve(&cfg.curve)?;
    let mut report = VerificationReport::default();

    report.push(vf::hypotheses_check(&curve));
    report.push(vf::chord_arc_sweep(&curve, v.sweep_chords, v.seed));

    match cantor::build(&curve, v.depth) {
        Ok(tree) => {
            report.push(vf::chord_contraction_check(&tree)?);
            report.push(vf::fatness_check(&tree)?);
            report.push(vf::measure_floor_check(&tree, v.depth)?);
            report.push(vf::triangle_separation_check(&tree, v.depth)?);
            if let Some(boundary) = boundary {
                let regions = Regions::new(curve, boundary, tree)?;
                report.push(vf::lipschitz_trend_check(
                    &regions,
                    v.lipschitz_max_level,
                    v.lipschitz_pairs,
                    v.seed,
                )?);
                let levels: Vec<usize> = (2..=v.rad_max_level).collect();
                if levels.len() >= 2 {
                    report.push(vf::rad_decay_check(&regions, &levels, -0.8)?);
                }
            }
        }
        Err(e) => {
            report.push(
                CheckResult::new("cantor.build", "construction.subdivision", false)
                    .note(&format!("construction failed: {e}")),
            );
        }
    }

    report.extend(model_square_suite(v.seed)?);
    report.self_validate()?;
    let text = report.render();
    write_out(out, "verify-report.txt", text.as_bytes())?;
    print!("{text}");
    Ok(if report.all_pass() { EXIT_OK } else { EXIT_CHECK_FAILED })
}

struct BandSetup {
    regions: Regions,
    datum: BoundaryDatum,
    bbox: (f64, f64, f64, f64),
}

fn band_setup(cfg: &RunConfig) -> Result<BandSetup> {
    let level = match cfg.solve.datum {
        DatumSpec::Cantor { level } => level,
        _ => anyhow::bail!("the band scenario needs a cantor datum"),
    };
    let regions = Regions::default_scenario(cfg.solve.depth)?;
    let datum = BoundaryDatum::cantor_arcs(&regions.tree, level, cfg.solve.ramp)?;
    let eta = regions.curve.eta();
    let h = cfg.solve.h;
    let t0 = (cfg.solve.epsilon * cfg.solve.epsilon / 2.0).max(12.0 * h);
    let mut f_max = 0.0f64;
    for i in 0..=200 {
        f_max = f_max.max(regions.curve.f(eta * i as f64 / 200.0));
    }
    let bbox = (-4.0 * h, eta + 4.0 * h, -(2.0 * t0), f_max + 4.0 * h);
    Ok(BandSetup {
        regions,
        datum,
        bbox,
    })
}

pub fn cmd_solve(cfg: &RunConfig, out: &Path, allow_nonconverged: bool) -> Result<i32> {
    let s = &cfg.solve;
    let mut report_text = String::new();
    let mut exit = EXIT_OK;

    // Scenario field with its trace.
    let mut band: Option<BandSetup> = None;
    let (template, datum) = match s.scenario {
        Scenario::Square => {
            let datum = match s.datum {
                DatumSpec::Zero => BoundaryDatum::zero(),
                DatumSpec::BottomInterval { a, b } => BoundaryDatum::bottom_interval(a, b, s.ramp)?,
                _ => anyhow::bail!("the square scenario takes zero or bottom-interval data"),
            };
            (square_scenario(s.n, &datum), datum)
        }
        Scenario::Disc => {
            let datum = match s.datum {
                DatumSpec::Zero => BoundaryDatum::zero(),
                DatumSpec::DiscArcLeft { x0 } => BoundaryDatum::disc_arc_left(x0, s.ramp)?,
                _ => anyhow::bail!("the disc scenario takes zero or disc-arc data"),
            };
            (disc_scenario(s.n, &datum), datum)
        }
        Scenario::Band => {
            let setup = band_setup(cfg)?;
            let field = band_scenario(&setup.regions.boundary, setup.bbox, s.h, &setup.datum);
            let datum = setup.datum.clone();
            band = Some(setup);
            (field, datum)
        }
    };

    let _ = writeln!(report_text, "scenario cells = {}", template.mask.iter().filter(|&&m| m).count());
    let _ = writeln!(report_text, "datum_l1 = {:.16e}", datum.l1);

    let mut field: GridField = template.clone();

    if s.giusti {
        let domain = match (&s.scenario, &band) {
            (Scenario::Square, _) => ExtensionDomain::UnitSquare,
            (_, Some(setup)) => ExtensionDomain::Disc(setup.regions.boundary),
            (Scenario::Disc, None) => ExtensionDomain::Disc(CircleBoundary {
                center: leastgrad_core::geometry::Point::new(0.0, 0.0),
                radius: 1.0,
                band: 0.5,
            }),
            _ => unreachable!(),
        };
        let (w, g) = giusti_extension(&domain, &template, &datum, s.epsilon, s.ramp_start)?;
        let _ = writeln!(report_text, "giusti w11 = {:.16e}", g.w11);
        let _ = writeln!(report_text, "giusti grad_l1 = {:.16e}", g.grad_l1);
        let _ = writeln!(report_text, "giusti l1 = {:.16e}", g.l1);
        let _ = writeln!(report_text, "giusti layers = {}", g.layers);
        let _ = writeln!(report_text, "giusti t0 = {:.16e}", g.t0);
        field = w;
    }

    if s.coarea {
        let setup = band.as_ref().expect("validated: coarea implies band");
        let level = match s.datum {
            DatumSpec::Cantor { level } => level,
            _ => unreachable!(),
        };
        match coarea_lower_check(&field, &setup.regions, level, s.coarea_tolerance) {
            Ok(c) => {
                let _ = writeln!(report_text, "coarea lhs = {:.16e}", c.lhs);
                let _ = writeln!(report_text, "coarea rhs = {:.16e}", c.rhs);
                let _ = writeln!(report_text, "coarea status = PASS");
            }
            Err(e) => {
                let _ = writeln!(report_text, "coarea status = FAIL ({e})");
                exit = EXIT_CHECK_FAILED;
            }
        }
    }

    if !s.skip_solve {
        let solver_cfg = SolverConfig {
            max_iter: s.max_iter,
            tol: s.tol,
            check_every: s.check_every,
        };
        let (u, rep) = least_gradient_solve(&template, &solver_cfg)?;
        let _ = writeln!(report_text, "solve tv = {:.16e}", rep.tv);
        let _ = writeln!(report_text, "solve l1 = {:.16e}", rep.l1_norm);
        let _ = writeln!(report_text, "solve iterations = {}", rep.iterations);
        let _ = writeln!(report_text, "solve gap = {:.16e}", rep.primal_dual_gap);
        let _ = writeln!(report_text, "solve converged = {}", rep.converged);
        if !rep.converged {
            if allow_nonconverged {
                let _ = writeln!(report_text, "solve nonconvergence-allowed = true");
            } else if exit == EXIT_OK {
                exit = EXIT_NONCONVERGED;
            }
        }
        field = u;
    }

    if !s.probe_sizes.is_empty() {
        let interval = match s.datum {
            DatumSpec::BottomInterval { a, b } => (a, b),
            _ => (0.25, 0.75),
        };
        let solver_cfg = SolverConfig {
            max_iter: s.max_iter,
            tol: s.tol,
            check_every: s.check_every,
        };
        let rows = nonattainment_probe(&s.probe_sizes, interval, &solver_cfg)?;
        write_out(out, "probe.csv", export::probe_rows_to_csv(&rows).as_bytes())?;
        for r in &rows {
            let _ = writeln!(
                report_text,
                "probe n={} tv={:.16e} l1={:.16e} gap={:.16e}",
                r.n, r.tv, r.l1, r.gap
            );
            if !r.converged && !allow_nonconverged && exit == EXIT_OK {
                exit = EXIT_NONCONVERGED;
            }
        }
    }

    write_out(out, "solve-report.txt", report_text.as_bytes())?;
    write_out(out, "field-header.txt", export::field_header(&field).as_bytes())?;
    write_out(out, "field.bin", &export::field_to_binary(&field))?;
    write_out(out, "field.csv", export::field_to_csv(&field).as_bytes())?;
    write_out(out, "field.svg", svg::field_figure(&field, s.figure_bands).as_bytes())?;
    print!("{report_text}");
    Ok(exit)
}

pub fn cmd_report(cfg: &RunConfig, _out: &Path) -> Result<i32> {
    if cfg.report.input.is_empty() {
        eprintln!("error: [report] input is required");
        return Ok(EXIT_MISUSE);
    }
    let text = match fs::read_to_string(&cfg.report.input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", cfg.report.input);
            return Ok(EXIT_MISUSE);
        }
    };
    let mut checks = 0usize;
    let mut failures = 0usize;
    for line in text.lines() {
        if !line.starts_with("check ") {
            continue;
        }
        checks += 1;
        if !line.contains(" anchor=") {
            eprintln!("error: unanchored check line: {line}");
            return Ok(EXIT_CHECK_FAILED);
        }
        if line.contains("status=FAIL") {
            failures += 1;
        }
    }
    println!("checks = {checks}");
    println!("failures = {failures}");
    Ok(if failures == 0 { EXIT_OK } else { EXIT_CHECK_FAILED })
}
