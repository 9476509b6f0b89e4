use std::path::Path;

use crate::error::{Error, Result};
use crate::torus_field::ScalarField;

/// Fixes one axis of a 3D field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Slice {
    pub axis: usize,
    pub index: usize,
}

/// Binary P6 grayscale image of a 2D field or a 3D slice.
///
/// Columns run along the lower free axis and rows along the higher one, with
/// row 0 at coordinate 0. Values map affinely from `[min, max]` to
/// `[0, 255]`; a constant field is mid-gray (128).
pub fn heatmap_bytes(field: &ScalarField, slice: Option<Slice>) -> Result<Vec<u8>> {
    let spec = field.spec();
    let (cols_axis, rows_axis, fixed) = match (spec.dim(), slice) {
        (1, None) => (0, None, None),
        (2, None) => (0, Some(1), None),
        (3, Some(s)) => {
            if s.axis >= 3 || s.index >= spec.sizes()[s.axis] {
                return Err(Error::Invalid(format!("slice {s:?} outside grid {:?}", spec.sizes())));
            }
            let free: Vec<usize> = (0..3).filter(|&a| a != s.axis).collect();
            (free[0], Some(free[1]), Some(s))
        }
        (3, None) => return Err(Error::Invalid("3D fields need a slice axis and index".into())),
        (d, Some(_)) => return Err(Error::Invalid(format!("slices apply to 3D fields, not {d}D"))),
        (d, None) => return Err(Error::Invalid(format!("cannot render a {d}D field"))),
    };
    let width = spec.sizes()[cols_axis];
    let height = rows_axis.map_or(1, |a| spec.sizes()[a]);
    let mut pixels = Vec::with_capacity(width * height);
    let mut idx = vec![0usize; spec.dim()];
    if let Some(s) = fixed {
        idx[s.axis] = s.index;
    }
    for r in 0..height {
        if let Some(a) = rows_axis {
            idx[a] = r;
        }
        for c in 0..width {
            idx[cols_axis] = c;
            pixels.push(field.values()[spec.ravel(&idx)]);
        }
    }
    let lo = pixels.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = pixels.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut out = format!("P6\n{width} {height}\n255\n").into_bytes();
    for v in pixels {
        let g = if hi > lo { (255.0 * (v - lo) / (hi - lo)).round() as u8 } else { 128 };
        out.extend_from_slice(&[g, g, g]);
    }
    Ok(out)
}

pub fn render_heatmap(field: &ScalarField, path: impl AsRef<Path>, slice: Option<Slice>) -> Result<()> {
    std::fs::write(path, heatmap_bytes(field, slice)?)?;
    Ok(())
}
