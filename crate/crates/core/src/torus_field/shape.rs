use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::field::{FieldKind, ScalarField};
use super::grid::{wrap_delta, GridSpec};

/// Analytic candidate sets on the unit torus.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ShapeCandidate {
    /// Slab `{ |x_axis - center| <= halfwidth }`.
    Lamella { axis: usize, center: f64, halfwidth: f64 },
    /// Periodic ball; in two dimensions a disk.
    Ball { center: Vec<f64>, radius: f64 },
    /// Solid cylinder along `axis`; `center` gives the cross-section center in
    /// the two remaining axes, in increasing axis order. Three dimensions only.
    Cylinder { axis: usize, center: [f64; 2], radius: f64 },
}

impl ShapeCandidate {
    pub fn lamella(axis: usize, center: f64, halfwidth: f64) -> Self {
        ShapeCandidate::Lamella { axis, center, halfwidth }
    }

    pub fn ball(center: &[f64], radius: f64) -> Self {
        ShapeCandidate::Ball { center: center.to_vec(), radius }
    }

    pub fn cylinder(axis: usize, center: [f64; 2], radius: f64) -> Self {
        ShapeCandidate::Cylinder { axis, center, radius }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        let fail = |m: String| Err(Error::Shape(m));
        match self {
            ShapeCandidate::Lamella { axis, center, halfwidth } => {
                if *axis >= dim {
                    return fail(format!("lamella axis {axis} in dimension {dim}"));
                }
                if !(0.0..1.0).contains(center) || !(*halfwidth > 0.0 && *halfwidth < 0.5) {
                    return fail(format!("lamella center {center} / halfwidth {halfwidth} out of range"));
                }
            }
            ShapeCandidate::Ball { center, radius } => {
                if center.len() != dim {
                    return fail(format!("ball center has {} coordinates in dimension {dim}", center.len()));
                }
                if center.iter().any(|c| !(0.0..1.0).contains(c)) || !(*radius > 0.0 && *radius < 0.5) {
                    return fail(format!("ball center {center:?} / radius {radius} out of range"));
                }
            }
            ShapeCandidate::Cylinder { axis, center, radius } => {
                if dim != 3 || *axis >= 3 {
                    return fail(format!("cylinder along axis {axis} needs dimension 3, got {dim}"));
                }
                if center.iter().any(|c| !(0.0..1.0).contains(c)) || !(*radius > 0.0 && *radius < 0.5) {
                    return fail(format!("cylinder center {center:?} / radius {radius} out of range"));
                }
            }
        }
        Ok(())
    }

    /// Axes spanning the cross-section of a cylinder.
    pub fn cross_axes(axis: usize) -> [usize; 2] {
        match axis {
            0 => [1, 2],
            1 => [0, 2],
            _ => [0, 1],
        }
    }

    /// Periodic signed distance to the boundary, positive inside.
    pub fn signed_distance(&self, x: &[f64]) -> f64 {
        match self {
            ShapeCandidate::Lamella { axis, center, halfwidth } => {
                halfwidth - wrap_delta(x[*axis] - center).abs()
            }
            ShapeCandidate::Ball { center, radius } => {
                let r2: f64 = x.iter().zip(center).map(|(a, c)| wrap_delta(a - c).powi(2)).sum();
                radius - r2.sqrt()
            }
            ShapeCandidate::Cylinder { axis, center, radius } => {
                let [a, b] = Self::cross_axes(*axis);
                let r2 = wrap_delta(x[a] - center[0]).powi(2) + wrap_delta(x[b] - center[1]).powi(2);
                radius - r2.sqrt()
            }
        }
    }

    pub fn volume(&self, dim: usize) -> f64 {
        match self {
            ShapeCandidate::Lamella { halfwidth, .. } => 2.0 * halfwidth,
            ShapeCandidate::Ball { radius, .. } => match dim {
                1 => 2.0 * radius,
                2 => PI * radius * radius,
                _ => 4.0 / 3.0 * PI * radius.powi(3),
            },
            ShapeCandidate::Cylinder { radius, .. } => PI * radius * radius,
        }
    }

    /// Exact perimeter in the unit torus.
    pub fn perimeter(&self, dim: usize) -> f64 {
        match self {
            ShapeCandidate::Lamella { .. } => 2.0,
            ShapeCandidate::Ball { radius, .. } => match dim {
                1 => 2.0,
                2 => 2.0 * PI * radius,
                _ => 4.0 * PI * radius * radius,
            },
            ShapeCandidate::Cylinder { radius, .. } => 2.0 * PI * radius,
        }
    }

    /// Sum of principal curvatures; positive for convex sets.
    pub fn mean_curvature(&self, dim: usize) -> f64 {
        match self {
            ShapeCandidate::Lamella { .. } => 0.0,
            ShapeCandidate::Ball { radius, .. } => (dim as f64 - 1.0) / radius,
            ShapeCandidate::Cylinder { radius, .. } => 1.0 / radius,
        }
    }

    /// Squared norm of the second fundamental form.
    pub fn second_fundamental_sq(&self, dim: usize) -> f64 {
        match self {
            ShapeCandidate::Lamella { .. } => 0.0,
            ShapeCandidate::Ball { radius, .. } => (dim as f64 - 1.0) / (radius * radius),
            ShapeCandidate::Cylinder { radius, .. } => 1.0 / (radius * radius),
        }
    }

    pub fn translated(&self, t: &[f64]) -> Self {
        let wrap = |v: f64| v.rem_euclid(1.0);
        match self {
            ShapeCandidate::Lamella { axis, center, halfwidth } => ShapeCandidate::Lamella {
                axis: *axis,
                center: wrap(center + t[*axis]),
                halfwidth: *halfwidth,
            },
            ShapeCandidate::Ball { center, radius } => ShapeCandidate::Ball {
                center: center.iter().zip(t).map(|(c, s)| wrap(c + s)).collect(),
                radius: *radius,
            },
            ShapeCandidate::Cylinder { axis, center, radius } => {
                let [a, b] = Self::cross_axes(*axis);
                ShapeCandidate::Cylinder {
                    axis: *axis,
                    center: [wrap(center[0] + t[a]), wrap(center[1] + t[b])],
                    radius: *radius,
                }
            }
        }
    }

    /// The components of `E^k = {x : kx ∈ E}`.
    pub fn tiled(&self, dim: usize, k: usize) -> Vec<ShapeCandidate> {
        let kf = k as f64;
        let offsets = |n_axes: usize| -> Vec<Vec<usize>> {
            let mut out = vec![vec![]];
            for _ in 0..n_axes {
                out = out
                    .into_iter()
                    .flat_map(|p| (0..k).map(move |j| [p.clone(), vec![j]].concat()))
                    .collect();
            }
            out
        };
        match self {
            ShapeCandidate::Lamella { axis, center, halfwidth } => (0..k)
                .map(|j| ShapeCandidate::Lamella {
                    axis: *axis,
                    center: (center + j as f64) / kf,
                    halfwidth: halfwidth / kf,
                })
                .collect(),
            ShapeCandidate::Ball { center, radius } => offsets(dim)
                .into_iter()
                .map(|j| ShapeCandidate::Ball {
                    center: center.iter().zip(&j).map(|(c, &o)| (c + o as f64) / kf).collect(),
                    radius: radius / kf,
                })
                .collect(),
            ShapeCandidate::Cylinder { axis, center, radius } => offsets(2)
                .into_iter()
                .map(|j| ShapeCandidate::Cylinder {
                    axis: *axis,
                    center: [(center[0] + j[0] as f64) / kf, (center[1] + j[1] as f64) / kf],
                    radius: radius / kf,
                })
                .collect(),
        }
    }
}

/// Union of pairwise disjoint candidates, e.g. a tiled candidate.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapeSet {
    dim: usize,
    parts: Vec<ShapeCandidate>,
}

impl ShapeSet {
    pub fn new(dim: usize, parts: Vec<ShapeCandidate>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Shape("empty shape set".into()));
        }
        for p in &parts {
            p.validate(dim)?;
        }
        Ok(Self { dim, parts })
    }

    pub fn single(dim: usize, shape: ShapeCandidate) -> Result<Self> {
        Self::new(dim, vec![shape])
    }

    /// `E^k` for a candidate `E`.
    pub fn tiled(dim: usize, shape: &ShapeCandidate, k: usize) -> Result<Self> {
        shape.validate(dim)?;
        if k == 0 {
            return Err(Error::Invalid("tiling factor must be positive".into()));
        }
        Self::new(dim, shape.tiled(dim, k))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn parts(&self) -> &[ShapeCandidate] {
        &self.parts
    }

    pub fn signed_distance(&self, x: &[f64]) -> f64 {
        self.parts
            .iter()
            .map(|p| p.signed_distance(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.signed_distance(x) >= 0.0
    }

    pub fn volume(&self) -> f64 {
        self.parts.iter().map(|p| p.volume(self.dim)).sum()
    }

    pub fn perimeter(&self) -> f64 {
        self.parts.iter().map(|p| p.perimeter(self.dim)).sum()
    }

    /// Mean of `u = χ_E − χ_{complement}`.
    pub fn phase_mean(&self) -> f64 {
        2.0 * self.volume() - 1.0
    }
}

/// Point-samples `u^E` at cell centers; points on `∂E` count as inside.
pub fn rasterize(shape: &ShapeCandidate, spec: &GridSpec) -> Result<ScalarField> {
    rasterize_set(&ShapeSet::single(spec.dim(), shape.clone())?, spec)
}

pub fn rasterize_set(set: &ShapeSet, spec: &GridSpec) -> Result<ScalarField> {
    check_dim(set, spec)?;
    let values = (0..spec.len())
        .map(|i| if set.contains(&spec.center(i)) { 1.0 } else { -1.0 })
        .collect();
    ScalarField::new(spec.clone(), values, FieldKind::Indicator)
}

/// `tanh(d/ε)` with `d` the periodic signed distance to `∂E`.
pub fn tanh_profile(shape: &ShapeCandidate, spec: &GridSpec, eps: f64) -> Result<ScalarField> {
    tanh_profile_set(&ShapeSet::single(spec.dim(), shape.clone())?, spec, eps)
}

pub fn tanh_profile_set(set: &ShapeSet, spec: &GridSpec, eps: f64) -> Result<ScalarField> {
    check_dim(set, spec)?;
    check_resolvable(spec, eps)?;
    let values = (0..spec.len())
        .map(|i| (set.signed_distance(&spec.center(i)) / eps).tanh())
        .collect();
    ScalarField::new(spec.clone(), values, FieldKind::Phase)
}

/// Interface widths below two cells of the finest axis are rejected. Coarse
/// axes are accepted so that fields constant along them can use thin grids.
pub fn check_resolvable(spec: &GridSpec, eps: f64) -> Result<()> {
    let bound = 2.0 * spec.min_spacing();
    if !(eps >= bound) {
        return Err(Error::Invalid(format!("eps {eps} below resolvability bound {bound}")));
    }
    Ok(())
}

fn check_dim(set: &ShapeSet, spec: &GridSpec) -> Result<()> {
    if set.dim() != spec.dim() {
        return Err(Error::Shape(format!(
            "shape of dimension {} on a grid of dimension {}",
            set.dim(),
            spec.dim()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_volume_slab_has_zero_mean() {
        let g = GridSpec::cubic(2, 64).unwrap();
        let u = rasterize(&ShapeCandidate::lamella(0, 0.5, 0.25), &g).unwrap();
        assert_eq!(u.mean(), 0.0);
        assert_eq!(u.kind(), FieldKind::Indicator);
    }

    #[test]
    fn ball_mean_tends_to_volume() {
        let g = GridSpec::cubic(3, 64).unwrap();
        let ball = ShapeCandidate::ball(&[0.5, 0.5, 0.5], 0.25);
        let u = rasterize(&ball, &g).unwrap();
        let exact = 2.0 * 4.0 / 3.0 * PI * 0.25f64.powi(3) - 1.0;
        assert!((exact + 0.869).abs() < 1e-3);
        assert!((u.mean() - exact).abs() < 5e-3, "{} vs {exact}", u.mean());
    }

    #[test]
    fn coarse_raster_is_subsampled_fine_raster() {
        // cell centers of the n=8 grid coincide with no n=16 center; compare at shared
        // points by sampling the fine grid with a half-cell-consistent map
        let shape = ShapeCandidate::ball(&[0.4, 0.55], 0.3);
        let coarse = rasterize(&shape, &GridSpec::cubic(2, 8).unwrap()).unwrap();
        let fine_spec = GridSpec::cubic(2, 24).unwrap();
        let fine = rasterize(&shape, &fine_spec).unwrap();
        for flat in 0..coarse.spec().len() {
            let idx: Vec<usize> = coarse.spec().unravel(flat).iter().map(|i| 3 * i + 1).collect();
            assert_eq!(coarse.values()[flat], fine.values()[fine_spec.ravel(&idx)]);
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let g = GridSpec::cubic(2, 8).unwrap();
        assert!(rasterize(&ShapeCandidate::ball(&[0.5, 0.5, 0.5], 0.2), &g).is_err());
        assert!(rasterize(&ShapeCandidate::lamella(2, 0.5, 0.2), &g).is_err());
        assert!(rasterize(&ShapeCandidate::cylinder(0, [0.5, 0.5], 0.2), &g).is_err());
    }

    #[test]
    fn tanh_profile_values() {
        let g = GridSpec::cubic(2, 64).unwrap();
        let lam = ShapeCandidate::lamella(0, 0.5, 0.25);
        assert!(tanh_profile(&lam, &g, 0.01).is_err());
        let set = ShapeSet::single(2, lam).unwrap();
        assert!((set.signed_distance(&[0.5, 0.3]) - 0.25).abs() < 1e-15);
        assert_eq!(set.signed_distance(&[0.75, 0.1]), 0.0);
        let u = tanh_profile(&ShapeCandidate::lamella(0, 0.5, 0.25), &g, 0.05).unwrap();
        // the cell centers nearest x1 = 0.5 sit half a cell away
        let i = g.ravel(&[32, 0]);
        let expected = ((0.25 - 0.5 / 64.0) / 0.05f64).tanh();
        assert!((u.values()[i] - expected).abs() < 1e-15);
        assert!(((0.25f64 / 0.05).tanh() - 5f64.tanh()).abs() < 1e-15);
    }

    #[test]
    fn tanh_saturates_off_boundary() {
        let set = ShapeSet::single(2, ShapeCandidate::ball(&[0.5, 0.5], 0.2)).unwrap();
        let d = set.signed_distance(&[0.5, 0.5]);
        assert!(((d / 1e-4).tanh() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn tiled_components() {
        let lam = ShapeCandidate::lamella(0, 0.5, 0.25);
        let t = ShapeSet::tiled(2, &lam, 2).unwrap();
        assert_eq!(t.parts().len(), 2);
        assert!(t.contains(&[0.25, 0.3]) && t.contains(&[0.75, 0.9]));
        assert!(!t.contains(&[0.5, 0.3]) && !t.contains(&[0.0, 0.3]));
        assert!((t.perimeter() - 4.0).abs() < 1e-15);
        let b = ShapeSet::tiled(3, &ShapeCandidate::ball(&[0.5; 3], 0.25), 2).unwrap();
        assert_eq!(b.parts().len(), 8);
        assert!((b.perimeter() - 2.0 * 4.0 * PI * 0.0625).abs() < 1e-14);
        assert!((b.volume() - 4.0 / 3.0 * PI * 0.25f64.powi(3)).abs() < 1e-15);
    }

    #[test]
    fn curvature_catalog() {
        assert_eq!(ShapeCandidate::lamella(0, 0.5, 0.2).mean_curvature(3), 0.0);
        assert_eq!(ShapeCandidate::ball(&[0.5; 3], 0.25).mean_curvature(3), 8.0);
        assert_eq!(ShapeCandidate::ball(&[0.5; 2], 0.25).mean_curvature(2), 4.0);
        assert_eq!(ShapeCandidate::cylinder(2, [0.5, 0.5], 0.2).mean_curvature(3), 5.0);
    }
}
