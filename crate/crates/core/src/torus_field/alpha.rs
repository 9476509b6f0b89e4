use crate::error::Result;
use crate::fft::FftNd;

use super::field::{FieldKind, ScalarField};

/// Translation-minimized symmetric difference between two indicator fields.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaDistance {
    /// `min_t |E △ (t + F)|` over whole-cell translations `t`.
    pub distance: f64,
    /// Minimizing translation of `F`, in cells.
    pub shift: Vec<i64>,
}

/// `α(E, F)` restricted to grid translations, evaluated exhaustively through a
/// cross-correlation of the two indicators.
pub fn alpha_distance(e: &ScalarField, f: &ScalarField) -> Result<AlphaDistance> {
    e.spec().check_same(f.spec())?;
    e.require_kind(FieldKind::Indicator)?;
    f.require_kind(FieldKind::Indicator)?;
    let spec = e.spec();
    let fft = FftNd::new(spec);
    let a = fft.forward_real(e.values());
    let b = fft.forward_real(f.values());
    let n = spec.len() as f64;
    let corr = fft.inverse_real(a.iter().zip(&b).map(|(x, y)| x * y.conj() * n).collect());
    // correlations of ±1 fields are integers; ties resolve to the lowest flat index
    let (best, c) = corr
        .iter()
        .map(|c| c.round())
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, c)| if c > acc.1 { (i, c) } else { acc });
    let mismatched = (n - c) / 2.0;
    let shift = spec
        .unravel(best)
        .iter()
        .zip(spec.sizes())
        .map(|(&i, &m)| if i < m / 2 { i as i64 } else { i as i64 - m as i64 })
        .collect();
    Ok(AlphaDistance { distance: mismatched * spec.cell_volume(), shift })
}
