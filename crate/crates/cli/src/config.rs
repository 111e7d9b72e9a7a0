//! Flat `key = value` run configuration with one section per command.
//! Unknown sections or keys are rejected so archived configs stay honest.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum CurvePreset {
    Circle,
    Parabola { eta: f64 },
}

#[derive(Clone, Debug)]
pub struct BuildConfig {
    pub depth: usize,
    /// Depth drawn in the construction figure (chords/triangles).
    pub draw_depth: usize,
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub depth: usize,
    pub sweep_chords: usize,
    pub lipschitz_pairs: usize,
    pub lipschitz_max_level: usize,
    pub rad_max_level: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Scenario {
    Square,
    Disc,
    Band,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DatumSpec {
    Zero,
    BottomInterval { a: f64, b: f64 },
    DiscArcLeft { x0: f64 },
    Cantor { level: usize },
}

#[derive(Clone, Debug)]
pub struct SolveConfig {
    pub scenario: Scenario,
    pub n: usize,
    /// Cell size for the band scenario (square/disc derive it from `n`).
    pub h: f64,
    pub datum: DatumSpec,
    pub ramp: f64,
    pub max_iter: usize,
    pub tol: f64,
    pub check_every: usize,
    /// Build the layered trace extension instead of (before) solving.
    pub giusti: bool,
    pub epsilon: f64,
    pub ramp_start: f64,
    /// Run the directional lower-bound check on the extension (band scenario
    /// with a Cantor datum only).
    pub coarea: bool,
    pub coarea_tolerance: f64,
    /// Grid sizes for the shrinking-gap sweep; empty = skip.
    pub probe_sizes: Vec<usize>,
    pub skip_solve: bool,
    /// Color bands in the field figure.
    pub figure_bands: usize,
    /// Tree depth backing the Cantor datum.
    pub depth: usize,
}

#[derive(Clone, Debug)]
pub struct ReportConfig {
    /// Previously written report file to validate and summarize.
    pub input: String,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub curve: CurvePreset,
    pub build: BuildConfig,
    pub verify: VerifyConfig,
    pub solve: SolveConfig,
    pub report: ReportConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            curve: CurvePreset::Circle,
            build: BuildConfig {
                depth: 6,
                draw_depth: 2,
            },
            verify: VerifyConfig {
                depth: 8,
                sweep_chords: 200,
                lipschitz_pairs: 2000,
                lipschitz_max_level: 6,
                rad_max_level: 5,
                seed: 7,
            },
            solve: SolveConfig {
                scenario: Scenario::Square,
                n: 128,
                h: 1e-4,
                datum: DatumSpec::BottomInterval { a: 0.25, b: 0.75 },
                ramp: 0.0,
                max_iter: 200_000,
                tol: 1e-6,
                check_every: 250,
                giusti: false,
                epsilon: 0.1,
                ramp_start: 0.05,
                coarea: false,
                coarea_tolerance: 0.1,
                probe_sizes: Vec::new(),
                skip_solve: false,
                figure_bands: 12,
                depth: 4,
            },
            report: ReportConfig {
                input: String::new(),
            },
        }
    }
}

fn parse_sections(text: &str) -> Result<BTreeMap<String, Vec<(String, String)>>> {
    let mut out: BTreeMap<String, Vec<(String, String)>> = BTreeMap::new();
    let mut section = String::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            section = name.trim().to_string();
            out.entry(section.clone()).or_default();
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("line {}: expected `key = value`, got {raw:?}", lineno + 1))?;
        if section.is_empty() {
            bail!("line {}: key before any [section]", lineno + 1);
        }
        out.entry(section.clone())
            .or_default()
            .push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

struct Section<'a> {
    name: &'a str,
    pairs: &'a [(String, String)],
}

impl<'a> Section<'a> {
    fn known(&self, keys: &[&str]) -> Result<()> {
        for (k, _) in self.pairs {
            if !keys.contains(&k.as_str()) {
                bail!("unknown key `{k}` in section [{}]", self.name);
            }
        }
        Ok(())
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.pairs
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    fn parse<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| anyhow!("bad value for `{key}` in [{}]: {v:?}", self.name)),
        }
    }
}

pub fn load(text: &str) -> Result<RunConfig> {
    let sections = parse_sections(text)?;
    for name in sections.keys() {
        if !["curve", "build", "verify", "solve", "report"].contains(&name.as_str()) {
            bail!("unknown section [{name}]");
        }
    }
    let mut cfg = RunConfig::default();
    let empty: Vec<(String, String)> = Vec::new();
    let sec = |name: &str| Section {
        name: "",
        pairs: sections.get(name).map(|v| v.as_slice()).unwrap_or(&empty),
    };

    {
        let s = Section {
            name: "curve",
            ..sec("curve")
        };
        s.known(&["preset", "eta"])?;
        let preset = s.get("preset").unwrap_or("circle");
        cfg.curve = match preset {
            "circle" => {
                if s.get("eta").is_some() {
                    bail!("the circle preset fixes eta; remove `eta` from [curve]");
                }
                CurvePreset::Circle
            }
            "parabola" => CurvePreset::Parabola {
                eta: s.parse("eta", 0.05)?,
            },
            other => bail!("unknown curve preset {other:?}"),
        };
    }

    {
        let s = Section {
            name: "build",
            ..sec("build")
        };
        s.known(&["depth", "draw_depth"])?;
        cfg.build.depth = s.parse("depth", cfg.build.depth)?;
        cfg.build.draw_depth = s.parse("draw_depth", cfg.build.draw_depth.min(cfg.build.depth))?;
        if cfg.build.draw_depth > cfg.build.depth {
            bail!("draw_depth exceeds depth");
        }
    }

    {
        let s = Section {
            name: "verify",
            ..sec("verify")
        };
        s.known(&[
            "depth",
            "sweep_chords",
            "lipschitz_pairs",
            "lipschitz_max_level",
            "rad_max_level",
            "seed",
        ])?;
        cfg.verify.depth = s.parse("depth", cfg.verify.depth)?;
        cfg.verify.sweep_chords = s.parse("sweep_chords", cfg.verify.sweep_chords)?;
        cfg.verify.lipschitz_pairs = s.parse("lipschitz_pairs", cfg.verify.lipschitz_pairs)?;
        cfg.verify.lipschitz_max_level = s.parse("lipschitz_max_level", cfg.verify.lipschitz_max_level)?;
        cfg.verify.rad_max_level = s.parse("rad_max_level", cfg.verify.rad_max_level)?;
        cfg.verify.seed = s.parse("seed", cfg.verify.seed)?;
        if cfg.verify.lipschitz_max_level > cfg.verify.depth || cfg.verify.rad_max_level > cfg.verify.depth {
            bail!("probe levels exceed verify depth");
        }
    }

    {
        let s = Section {
            name: "solve",
            ..sec("solve")
        };
        s.known(&[
            "scenario", "n", "h", "datum", "a", "b", "x0", "level", "ramp", "max_iter", "tol",
            "check_every", "giusti", "epsilon", "ramp_start", "coarea", "coarea_tolerance",
            "probe_sizes", "skip_solve", "figure_bands", "depth",
        ])?;
        cfg.solve.scenario = match s.get("scenario").unwrap_or("square") {
            "square" => Scenario::Square,
            "disc" => Scenario::Disc,
            "band" => Scenario::Band,
            other => bail!("unknown scenario {other:?}"),
        };
        cfg.solve.n = s.parse("n", cfg.solve.n)?;
        cfg.solve.h = s.parse("h", cfg.solve.h)?;
        cfg.solve.datum = match s.get("datum").unwrap_or("zero") {
            "zero" => DatumSpec::Zero,
            "bottom-interval" => DatumSpec::BottomInterval {
                a: s.parse("a", 0.25)?,
                b: s.parse("b", 0.75)?,
            },
            "disc-arc" => DatumSpec::DiscArcLeft {
                x0: s.parse("x0", 0.8)?,
            },
            "cantor" => DatumSpec::Cantor {
                level: s.parse("level", 4)?,
            },
            other => bail!("unknown datum {other:?}"),
        };
        cfg.solve.ramp = s.parse("ramp", cfg.solve.ramp)?;
        cfg.solve.max_iter = s.parse("max_iter", cfg.solve.max_iter)?;
        cfg.solve.tol = s.parse("tol", cfg.solve.tol)?;
        cfg.solve.check_every = s.parse("check_every", cfg.solve.check_every)?;
        cfg.solve.giusti = s.parse("giusti", cfg.solve.giusti)?;
        cfg.solve.epsilon = s.parse("epsilon", cfg.solve.epsilon)?;
        cfg.solve.ramp_start = s.parse("ramp_start", cfg.solve.ramp_start)?;
        cfg.solve.coarea = s.parse("coarea", cfg.solve.coarea)?;
        cfg.solve.coarea_tolerance = s.parse("coarea_tolerance", cfg.solve.coarea_tolerance)?;
        cfg.solve.skip_solve = s.parse("skip_solve", cfg.solve.skip_solve)?;
        cfg.solve.figure_bands = s.parse("figure_bands", cfg.solve.figure_bands)?;
        cfg.solve.depth = s.parse("depth", cfg.solve.depth)?;
        if let Some(sizes) = s.get("probe_sizes") {
            cfg.solve.probe_sizes = sizes
                .split_whitespace()
                .map(|t| t.parse().context("bad probe_sizes entry"))
                .collect::<Result<_>>()?;
        }
        if cfg.solve.n < 4 || cfg.solve.n > 4096 {
            bail!("grid size n must lie in [4, 4096]");
        }
        if !(cfg.solve.tol > 0.0) || !(cfg.solve.h > 0.0) {
            bail!("tol and h must be positive");
        }
        if !(cfg.solve.epsilon > 0.0 && cfg.solve.epsilon < 0.5) {
            bail!("epsilon must lie in (0, 1/2)");
        }
        if cfg.solve.coarea && (cfg.solve.scenario != Scenario::Band || !cfg.solve.giusti) {
            bail!("coarea requires scenario = band, giusti = true, and a cantor datum");
        }
        if cfg.solve.coarea && !matches!(cfg.solve.datum, DatumSpec::Cantor { .. }) {
            bail!("coarea requires a cantor datum");
        }
        if let DatumSpec::Cantor { level } = cfg.solve.datum {
            if level > cfg.solve.depth {
                bail!("cantor datum level exceeds tree depth");
            }
        }
    }

    {
        let s = Section {
            name: "report",
            ..sec("report")
        };
        s.known(&["input"])?;
        if let Some(input) = s.get("input") {
            cfg.report.input = input.to_string();
        }
    }

    Ok(cfg)
}
