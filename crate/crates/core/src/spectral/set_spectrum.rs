use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::torus_field::{GridSpec, ShapeCandidate, ShapeSet};

use super::spectrum::Spectrum;

/// Bessel function `J₁` by the trapezoid rule on its periodic integral
/// representation, accurate to rounding for all `x` it is fed here.
pub fn bessel_j1(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let n = (1.3 * x.abs()).ceil() as usize + 40;
    let h = 2.0 * PI / n as f64;
    (0..n)
        .map(|k| {
            let t = k as f64 * h;
            (t - x * t.sin()).cos()
        })
        .sum::<f64>()
        / n as f64
}

/// Exact Fourier coefficients `∫(2χ_E − 1)e^{−2πiξ·x}` of a shape set,
/// truncated to `band`. Parts are assumed pairwise disjoint.
pub fn set_spectrum(set: &ShapeSet, band: &GridSpec) -> Result<Spectrum> {
    if set.dim() != band.dim() {
        return Err(crate::Error::Shape(format!(
            "set of dimension {} on a {}-dimensional band",
            set.dim(),
            band.dim()
        )));
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); band.len()];
    for (flat, c) in coeffs.iter_mut().enumerate() {
        let xi: Vec<f64> = band
            .unravel(flat)
            .iter()
            .enumerate()
            .map(|(a, &i)| band.frequency(a, i) as f64)
            .collect();
        let chi: Complex64 = set.parts().iter().map(|p| indicator_coefficient(p, &xi)).sum();
        *c = 2.0 * chi;
    }
    coeffs[0] -= 1.0;
    Ok(Spectrum::from_coefficients(band, coeffs))
}

fn indicator_coefficient(shape: &ShapeCandidate, xi: &[f64]) -> Complex64 {
    let dim = xi.len();
    match shape {
        ShapeCandidate::Lamella { axis, center, halfwidth } => {
            if (0..dim).any(|b| b != *axis && xi[b] != 0.0) {
                return Complex64::new(0.0, 0.0);
            }
            interval(xi[*axis], *center, *halfwidth)
        }
        ShapeCandidate::Ball { center, radius } => {
            let k = 2.0 * PI * xi.iter().map(|v| v * v).sum::<f64>().sqrt();
            let shift: f64 = xi.iter().zip(center).map(|(x, c)| x * c).sum();
            let phase = Complex64::from_polar(1.0, -2.0 * PI * shift);
            let r = *radius;
            let radial = match dim {
                1 => return interval(xi[0], center[0], r),
                2 => disk(k, r),
                _ => {
                    if k == 0.0 {
                        4.0 / 3.0 * PI * r.powi(3)
                    } else {
                        let kr = k * r;
                        4.0 * PI * (kr.sin() - kr * kr.cos()) / k.powi(3)
                    }
                }
            };
            phase * radial
        }
        ShapeCandidate::Cylinder { axis, center, radius } => {
            if xi[*axis] != 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let [b, c] = ShapeCandidate::cross_axes(*axis);
            let k = 2.0 * PI * (xi[b] * xi[b] + xi[c] * xi[c]).sqrt();
            let shift = xi[b] * center[0] + xi[c] * center[1];
            Complex64::from_polar(disk(k, *radius), -2.0 * PI * shift)
        }
    }
}

fn interval(xi: f64, center: f64, halfwidth: f64) -> Complex64 {
    if xi == 0.0 {
        return Complex64::new(2.0 * halfwidth, 0.0);
    }
    Complex64::from_polar((2.0 * PI * xi * halfwidth).sin() / (PI * xi), -2.0 * PI * xi * center)
}

/// `∫_{|x|<r} e^{−ik·x}` for `|k| = k`.
fn disk(k: f64, r: f64) -> f64 {
    if k == 0.0 {
        PI * r * r
    } else {
        2.0 * PI * r * bessel_j1(k * r) / k
    }
}
