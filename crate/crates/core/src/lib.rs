//! Fat Cantor sets on a strictly concave boundary arc, the projection and
//! triangle machinery built on top of them, and a discrete least-gradient
//! laboratory that reproduces the quantitative estimates of the construction.
//!
//! The crate is organized bottom-up:
//!
//! * [`geometry`] — the arc as a graph curve, chords, arc length, and the
//!   smallness hypotheses that make everything downstream well defined;
//! * [`cantor`] — the recursive chord subdivision producing the fat Cantor
//!   set, with per-level measure statistics;
//! * [`regions`] — right triangles under the chords, the nested regions
//!   `B_N`, the projection maps onto the Cantor curves, the unit vector
//!   fields, and the inscribed-radius raster estimate;
//! * [`varlab`] — grids, discrete total variation, a primal-dual solver
//!   with hard trace constraints, the layered trace extension, and the
//!   model-problem / coarea check suites;
//! * [`report`], [`export`], [`svg`] — structured reports and file formats.

pub mod cantor;
pub mod error;
pub mod export;
pub mod geometry;
pub mod regions;
pub mod report;
pub mod svg;
mod util;
pub mod varlab;
pub mod verification;

pub use error::{Error, Result};
