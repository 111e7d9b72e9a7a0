//! Raster estimate of the inscribed-disc radius of `B_N` via an exact
//! squared Euclidean distance transform of the complement.
//!
//! The strips of `B_N` run arbitrarily deep into the domain but their widths
//! bound the inscribed radius, so the raster window only needs a few column
//! widths of depth below the root chord.

use crate::error::{Error, Result};
use crate::geometry::Point;

use super::{RegionTag, Regions};

#[derive(Clone, Copy, Debug)]
pub struct RadEstimate {
    /// Inscribed radius of `B_N`, error at most `resolution * sqrt(2)`.
    pub radius: f64,
    /// Same, restricted to the strip part `D_N^-`.
    pub strip_radius: f64,
    pub resolution: f64,
}

/// A resolution fine enough for both the level-`N` chords (membership) and
/// the column widths (radius accuracy).
pub fn suggested_resolution(regions: &Regions, n: usize) -> Result<f64> {
    let min_chord = regions
        .tree
        .level(n)?
        .iter()
        .map(|nd| nd.chord.len)
        .fold(f64::INFINITY, f64::min);
    Ok((min_chord / 8.0).min(max_column_width(regions, n)? / 40.0))
}

fn max_column_width(regions: &Regions, n: usize) -> Result<f64> {
    if n == 0 {
        return Ok(regions.curve.eta());
    }
    Ok(regions
        .triangles(n)?
        .iter()
        .map(|t| t.hyp_len)
        .fold(0.0, f64::max))
}

/// Estimates `rad(B_N)` (and `rad(B_N ∩ D_N^-)`) on a grid of the given
/// resolution. Cells outside the raster window count as complement, which
/// can only underestimate; the window is deep enough that the maximal discs
/// fit well inside it.
pub fn rad_estimate(regions: &Regions, n: usize, resolution: f64) -> Result<RadEstimate> {
    let min_chord = regions
        .tree
        .level(n)?
        .iter()
        .map(|nd| nd.chord.len)
        .fold(f64::INFINITY, f64::min);
    let required = min_chord / 8.0;
    if resolution > required {
        return Err(Error::ResolutionTooCoarse {
            given: resolution,
            required,
        });
    }
    let eta = regions.curve.eta();
    let w = max_column_width(regions, n)?;
    let cap_top = regions.curve.f(0.5 * eta) + 2.0 * resolution;
    let x0 = -2.0 * resolution;
    let x1 = eta + 2.0 * resolution;
    let y0 = -3.0 * w - 2.0 * resolution;
    let nx = ((x1 - x0) / resolution).ceil() as usize + 1;
    let ny = ((cap_top - y0) / resolution).ceil() as usize + 1;

    // Gaps between adjacent column footprints on the root chord. They can be
    // far narrower than the resolution (middle removals shrink like mu^2), so
    // cells below the root chord whose x-extent meets a gap are carved out
    // explicitly; otherwise the raster would merge adjacent columns and
    // overestimate the radius. Carving widens gaps to one cell, which only
    // underestimates.
    let mut gaps: Vec<(f64, f64)> = Vec::new();
    {
        let count = regions.tree.level(n)?.len();
        let mut prev_hi: Option<f64> = None;
        for k in 0..count {
            let (lo, hi) = regions.column_footprint(n, k)?;
            if let Some(p) = prev_hi {
                gaps.push((p, lo));
            }
            prev_hi = Some(hi);
        }
    }

    let mut mask = vec![false; nx * ny];
    let mut strip_mask = vec![false; nx * ny];
    for j in 0..ny {
        let y = y0 + (j as f64 + 0.5) * resolution;
        for i in 0..nx {
            let x = x0 + (i as f64 + 0.5) * resolution;
            if y < 0.0 {
                let (cx0, cx1) = (x - 0.5 * resolution, x + 0.5 * resolution);
                if gaps.iter().any(|&(g0, g1)| cx1 > g0 && cx0 < g1) {
                    continue;
                }
            }
            match regions.classify_point(Point::new(x, y), n)? {
                RegionTag::Outside => {}
                RegionTag::Strip => {
                    mask[j * nx + i] = true;
                    strip_mask[j * nx + i] = true;
                }
                _ => mask[j * nx + i] = true,
            }
        }
    }
    let radius = max_inscribed(&mask, nx, ny) * resolution;
    let strip_radius = max_inscribed(&strip_mask, nx, ny) * resolution;
    Ok(RadEstimate {
        radius,
        strip_radius,
        resolution,
    })
}

/// Largest distance (in cells) from a mask cell to the complement, with the
/// window border treated as complement.
fn max_inscribed(mask: &[bool], nx: usize, ny: usize) -> f64 {
    let d2 = distance_transform_squared(mask, nx, ny);
    d2.into_iter().fold(0.0f64, |m, v| m.max(v)).sqrt()
}

/// Exact squared EDT (two-pass 1D lower-envelope algorithm). Complement
/// cells and the virtual ring outside the window are sources.
pub fn distance_transform_squared(mask: &[bool], nx: usize, ny: usize) -> Vec<f64> {
    const INF: f64 = 1e20;
    // Column pass: distance to nearest source in the same column (sources at
    // complement cells and one cell beyond each border).
    let mut g = vec![0.0f64; nx * ny];
    for i in 0..nx {
        let mut prev = -1i64; // virtual source below row 0
        for j in 0..ny {
            if !mask[j * nx + i] {
                prev = j as i64;
            }
            g[j * nx + i] = (j as i64 - prev) as f64;
        }
        let mut next = ny as i64; // virtual source above the top row
        for j in (0..ny).rev() {
            if !mask[j * nx + i] {
                next = j as i64;
            }
            let d = (next - j as i64) as f64;
            let cell = &mut g[j * nx + i];
            *cell = cell.min(d);
        }
    }
    // Row pass: lower envelope of parabolas seeded by the column distances.
    let mut out = vec![0.0f64; nx * ny];
    let mut v = vec![0usize; nx + 2];
    let mut z = vec![0.0f64; nx + 3];
    for j in 0..ny {
        let f = |i: usize| {
            let gi = g[j * nx + i];
            if gi >= 1e9 {
                INF
            } else {
                gi * gi
            }
        };
        // Virtual sources at i = -1 and i = nx handled by clamping afterwards.
        let mut k = 0usize;
        v[0] = 0;
        z[0] = -INF;
        z[1] = INF;
        for qi in 1..nx {
            let fq = f(qi);
            loop {
                let vk = v[k];
                let s = (fq + (qi * qi) as f64 - f(vk) - (vk * vk) as f64)
                    / (2.0 * (qi as f64 - vk as f64));
                if s <= z[k] {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                } else {
                    k += 1;
                    v[k] = qi;
                    z[k] = s;
                    z[k + 1] = INF;
                    break;
                }
            }
        }
        let mut kk = 0usize;
        for i in 0..nx {
            while z[kk + 1] < i as f64 {
                kk += 1;
            }
            let vk = v[kk];
            let d = (i as f64 - vk as f64).powi(2) + f(vk);
            // Border ring: sources one cell beyond the left/right edges.
            let border = ((i + 1).min(nx - i)) as f64;
            out[j * nx + i] = d.min(border * border);
        }
    }
    out
}
