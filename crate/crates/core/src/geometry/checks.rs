//! Chord-vs-arc and sagitta estimates, checked numerically against the
//! quantitative bounds they must satisfy.

use crate::error::{Error, Result};
use crate::geometry::{Chord, ConcaveArc};

#[derive(Clone, Copy, Debug)]
pub struct ChordArcCheck {
    pub chord_len: f64,
    pub arc_len: f64,
    pub upper_bound: f64,
}

/// Verifies `chord <= arc <= chord * (1 + (b-a) |f''| (2|f'| + |f''| (b-a)))`
/// on `[a, b]`, using the curve's certified sup norms.
pub fn chord_arc_check(curve: &ConcaveArc, a: f64, b: f64) -> Result<ChordArcCheck> {
    let chord = curve.chord(a, b)?;
    let arc_len = curve.arc_length(a, b)?;
    let w = b - a;
    let factor =
        1.0 + w * curve.sup_fpp() * (2.0 * curve.sup_fp() + curve.sup_fpp() * w);
    let upper_bound = chord.len * factor;
    // 1e-10 slack absorbs the quadrature tolerance on both sides.
    if chord.len > arc_len + 1e-10 || arc_len > upper_bound + 1e-10 {
        return Err(Error::VerificationFailed {
            name: "bound.chord-arc".into(),
            details: format!(
                "chord {} arc {} bound {} on [{a}, {b}]",
                chord.len, arc_len, upper_bound
            ),
        });
    }
    Ok(ChordArcCheck {
        chord_len: chord.len,
        arc_len,
        upper_bound,
    })
}

#[derive(Clone, Copy, Debug)]
pub struct SagittaCheck {
    pub max_height: f64,
    pub bound: f64,
}

/// Verifies that the arc stays within `(b-a)^2 |f''| / 8` of its chord:
/// the maximum, over chord points `m`, of the distance from `m` to its
/// perpendicular foot on the arc.
pub fn sagitta_bound_check(curve: &ConcaveArc, chord: &Chord, samples: usize) -> Result<SagittaCheck> {
    let w = chord.b - chord.a;
    let bound = w * w * curve.sup_fpp() / 8.0;
    let mut max_height: f64 = 0.0;
    for i in 0..=samples {
        let s = chord.len * (i as f64) / (samples as f64);
        let m = chord.at(s);
        let foot = curve.perpendicular_intersection(chord, m)?;
        max_height = max_height.max(m.dist(foot));
    }
    if max_height > bound + 1e-10 {
        return Err(Error::VerificationFailed {
            name: "bound.sagitta".into(),
            details: format!("max height {max_height} exceeds bound {bound}"),
        });
    }
    Ok(SagittaCheck { max_height, bound })
}
