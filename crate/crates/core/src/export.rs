//! Serialization: hierarchical tree text with exact decimal round-trip,
//! run-length-encoded raster masks, and flat binary / CSV field grids.
//!
//! All floating-point values are written with 17 significant digits
//! (`{:.16e}`), which is lossless for `f64`: parsing and re-serializing
//! reproduces the bytes exactly.

use std::fmt::Write as _;

use crate::cantor::CantorTree;
use crate::error::{Error, Result};
use crate::varlab::GridField;

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("bad float: {s:?}")))
}

fn kv<'a>(line: &'a str, key: &str) -> Result<&'a str> {
    let rest = line
        .strip_prefix(key)
        .and_then(|r| r.trim_start().strip_prefix('='))
        .ok_or_else(|| Error::Parse(format!("expected `{key} = ...`, got {line:?}")))?;
    Ok(rest.trim())
}

// ---------------------------------------------------------------------------
// Tree export
// ---------------------------------------------------------------------------

/// Plain mirror of the tree data as serialized: per level, per node, the
/// abscissa interval in the root frame plus chord and arc lengths.
#[derive(Clone, Debug, PartialEq)]
pub struct ExportedTree {
    pub eta: f64,
    pub levels: Vec<Vec<ExportedNode>>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExportedNode {
    pub a: f64,
    pub b: f64,
    pub chord: f64,
    pub arc: f64,
}

pub fn export_tree(tree: &CantorTree, eta: f64) -> ExportedTree {
    let levels = (0..=tree.depth())
        .map(|n| {
            tree.level(n)
                .expect("level within depth")
                .iter()
                .map(|nd| ExportedNode {
                    a: nd.a,
                    b: nd.b,
                    chord: nd.chord.len,
                    arc: nd.arc_len,
                })
                .collect()
        })
        .collect();
    ExportedTree { eta, levels }
}

impl ExportedTree {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "leastgrad-tree v1");
        let _ = writeln!(s, "eta = {}", fmt(self.eta));
        let _ = writeln!(s, "depth = {}", self.levels.len().saturating_sub(1));
        for (n, level) in self.levels.iter().enumerate() {
            let _ = writeln!(s, "level {n} nodes {}", level.len());
            for (k, nd) in level.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "node {k} a={} b={} chord={} arc={}",
                    fmt(nd.a),
                    fmt(nd.b),
                    fmt(nd.chord),
                    fmt(nd.arc)
                );
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next() {
            Some("leastgrad-tree v1") => {}
            other => return Err(Error::Parse(format!("bad tree header: {other:?}"))),
        }
        let eta = parse_f64(kv(
            lines.next().ok_or_else(|| Error::Parse("truncated".into()))?,
            "eta",
        )?)?;
        let depth: usize = kv(
            lines.next().ok_or_else(|| Error::Parse("truncated".into()))?,
            "depth",
        )?
        .parse()
        .map_err(|_| Error::Parse("bad depth".into()))?;
        let mut levels = Vec::with_capacity(depth + 1);
        for n in 0..=depth {
            let head = lines.next().ok_or_else(|| Error::Parse("truncated".into()))?;
            let expect = format!("level {n} nodes ");
            let count: usize = head
                .strip_prefix(&expect)
                .and_then(|c| c.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad level header: {head:?}")))?;
            let mut nodes = Vec::with_capacity(count);
            for k in 0..count {
                let line = lines.next().ok_or_else(|| Error::Parse("truncated".into()))?;
                let rest = line
                    .strip_prefix(&format!("node {k} "))
                    .ok_or_else(|| Error::Parse(format!("bad node line: {line:?}")))?;
                let mut vals = [0.0f64; 4];
                for (slot, (field, key)) in rest
                    .split_whitespace()
                    .zip(["a", "b", "chord", "arc"])
                    .enumerate()
                {
                    let v = field
                        .strip_prefix(key)
                        .and_then(|f| f.strip_prefix('='))
                        .ok_or_else(|| Error::Parse(format!("bad node field: {field:?}")))?;
                    vals[slot] = parse_f64(v)?;
                }
                nodes.push(ExportedNode {
                    a: vals[0],
                    b: vals[1],
                    chord: vals[2],
                    arc: vals[3],
                });
            }
            levels.push(nodes);
        }
        Ok(ExportedTree { eta, levels })
    }
}

// ---------------------------------------------------------------------------
// Raster masks
// ---------------------------------------------------------------------------

/// Run-length encoding of a row-major boolean raster with a plain-text
/// header. Runs alternate starting from `false`.
pub fn mask_to_rle(mask: &[bool], nx: usize, ny: usize, bbox: (f64, f64, f64, f64), level: usize) -> String {
    assert_eq!(mask.len(), nx * ny);
    let mut s = String::new();
    let _ = writeln!(s, "leastgrad-mask v1");
    let _ = writeln!(s, "level = {level}");
    let _ = writeln!(s, "nx = {nx}");
    let _ = writeln!(s, "ny = {ny}");
    let _ = writeln!(
        s,
        "bbox = {} {} {} {}",
        fmt(bbox.0),
        fmt(bbox.1),
        fmt(bbox.2),
        fmt(bbox.3)
    );
    let mut runs: Vec<usize> = Vec::new();
    let mut cur = false;
    let mut len = 0usize;
    for &m in mask {
        if m == cur {
            len += 1;
        } else {
            runs.push(len);
            cur = m;
            len = 1;
        }
    }
    runs.push(len);
    let _ = writeln!(
        s,
        "runs = {}",
        runs.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(" ")
    );
    s
}

pub fn mask_from_rle(text: &str) -> Result<(Vec<bool>, usize, usize)> {
    let mut lines = text.lines();
    match lines.next() {
        Some("leastgrad-mask v1") => {}
        other => return Err(Error::Parse(format!("bad mask header: {other:?}"))),
    }
    let _level = lines.next().ok_or_else(|| Error::Parse("truncated".into()))?;
    let nx: usize = kv(lines.next().unwrap_or(""), "nx")?
        .parse()
        .map_err(|_| Error::Parse("bad nx".into()))?;
    let ny: usize = kv(lines.next().unwrap_or(""), "ny")?
        .parse()
        .map_err(|_| Error::Parse("bad ny".into()))?;
    let _bbox = lines.next().ok_or_else(|| Error::Parse("truncated".into()))?;
    let runs_line = kv(lines.next().unwrap_or(""), "runs")?;
    let mut mask = Vec::with_capacity(nx * ny);
    let mut cur = false;
    for r in runs_line.split_whitespace() {
        let len: usize = r.parse().map_err(|_| Error::Parse("bad run".into()))?;
        mask.extend(std::iter::repeat(cur).take(len));
        cur = !cur;
    }
    if mask.len() != nx * ny {
        return Err(Error::Parse(format!(
            "run lengths sum to {}, expected {}",
            mask.len(),
            nx * ny
        )));
    }
    Ok((mask, nx, ny))
}

// ---------------------------------------------------------------------------
// Field grids
// ---------------------------------------------------------------------------

/// Plain-text header accompanying the flat binary values.
pub fn field_header(field: &GridField) -> String {
    let g = &field.grid;
    let mut s = String::new();
    let _ = writeln!(s, "leastgrad-field v1");
    let _ = writeln!(s, "nx = {}", g.nx);
    let _ = writeln!(s, "ny = {}", g.ny);
    let _ = writeln!(s, "h = {}", fmt(g.h));
    let _ = writeln!(s, "x0 = {}", fmt(g.x0));
    let _ = writeln!(s, "y0 = {}", fmt(g.y0));
    let _ = writeln!(s, "order = row-major");
    let _ = writeln!(s, "format = f64le");
    s
}

/// Row-major values as little-endian `f64` bytes; masked-out cells carry 0.
pub fn field_to_binary(field: &GridField) -> Vec<u8> {
    let mut bytes = Vec::with_capacity(field.vals.len() * 8);
    for &v in &field.vals {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    bytes
}

pub fn field_from_binary(header: &str, bytes: &[u8]) -> Result<(Vec<f64>, usize, usize)> {
    let mut lines = header.lines();
    match lines.next() {
        Some("leastgrad-field v1") => {}
        other => return Err(Error::Parse(format!("bad field header: {other:?}"))),
    }
    let nx: usize = kv(lines.next().unwrap_or(""), "nx")?
        .parse()
        .map_err(|_| Error::Parse("bad nx".into()))?;
    let ny: usize = kv(lines.next().unwrap_or(""), "ny")?
        .parse()
        .map_err(|_| Error::Parse("bad ny".into()))?;
    if bytes.len() != nx * ny * 8 {
        return Err(Error::Parse(format!(
            "field data is {} bytes, expected {}",
            bytes.len(),
            nx * ny * 8
        )));
    }
    let vals = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok((vals, nx, ny))
}

/// CSV of masked cells: indices, cell-center coordinates, trace flag, value.
pub fn field_to_csv(field: &GridField) -> String {
    let g = &field.grid;
    let mut s = String::from("i,j,x,y,fixed,value\n");
    for j in 0..g.ny {
        for i in 0..g.nx {
            let c = g.idx(i, j);
            if !field.mask[c] {
                continue;
            }
            let p = g.center(i, j);
            let _ = writeln!(
                s,
                "{i},{j},{},{},{},{}",
                fmt(p.x),
                fmt(p.y),
                field.fixed[c] as u8,
                fmt(field.vals[c])
            );
        }
    }
    s
}

/// Rows of the non-attainment sweep as CSV.
pub fn probe_rows_to_csv(rows: &[crate::varlab::suite::ProbeRow]) -> String {
    let mut s = String::from("n,tv,l1,gap,converged\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            r.n,
            fmt(r.tv),
            fmt(r.l1),
            fmt(r.gap),
            r.converged as u8
        );
    }
    s
}
