use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::torus_field::{ShapeCandidate, ShapeSet};

use nalgebra::DMatrix;

use super::chart::{apply_along, periodic_diff_matrix, periodic_stiffness_matrix};

/// Parametrization of one connected piece of the interface.
#[derive(Clone, Debug, PartialEq)]
pub enum ChartKind {
    /// Periodic flat chart over the cross axes of a lamella interface.
    Flat,
    /// Circle of the given radius, uniform in angle.
    Circle { radius: f64 },
    /// Sphere with midpoint colatitudes and uniform longitudes.
    Sphere { radius: f64 },
    /// Cylinder surface, angle × axial coordinate.
    Tube { radius: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    pub kind: ChartKind,
    /// First point of this chart in the mesh arrays.
    pub offset: usize,
    /// Samples per chart axis, row-major.
    pub sizes: Vec<usize>,
}

impl Chart {
    pub fn len(&self) -> usize {
        self.sizes.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Quadrature points on `∂E` with outward normals and curvature data.
#[derive(Clone, Debug)]
pub struct InterfaceMesh {
    dim: usize,
    points: Vec<Vec<f64>>,
    normals: Vec<Vec<f64>>,
    weights: Vec<f64>,
    curvature: Vec<f64>,
    second_fundamental_sq: Vec<f64>,
    charts: Vec<Chart>,
}

fn check_resolution(resolution: usize) -> Result<()> {
    if resolution < 8 || !resolution.is_multiple_of(2) {
        return Err(Error::Invalid(format!("mesh resolution must be even and >= 8, got {resolution}")));
    }
    Ok(())
}

/// Fejér first-rule weights for `∫₀^π f(θ) sin θ dθ` at `θ_i = π(i+½)/n`.
pub fn fejer_weights(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let theta = PI * (i as f64 + 0.5) / n as f64;
            let s: f64 = (1..=n / 2).map(|k| (2.0 * k as f64 * theta).cos() / (4.0 * (k * k) as f64 - 1.0)).sum();
            2.0 / n as f64 * (1.0 - 2.0 * s)
        })
        .collect()
}

impl InterfaceMesh {
    fn empty(dim: usize) -> Self {
        Self {
            dim,
            points: Vec::new(),
            normals: Vec::new(),
            weights: Vec::new(),
            curvature: Vec::new(),
            second_fundamental_sq: Vec::new(),
            charts: Vec::new(),
        }
    }

    fn push(&mut self, x: Vec<f64>, nu: Vec<f64>, w: f64, h: f64, b2: f64) {
        self.points.push(x);
        self.normals.push(nu);
        self.weights.push(w);
        self.curvature.push(h);
        self.second_fundamental_sq.push(b2);
    }

    /// Mesh of a single candidate with `resolution` samples per chart axis
    /// (twice that in longitude on spheres).
    pub fn of_shape(shape: &ShapeCandidate, dim: usize, resolution: usize) -> Result<Self> {
        let mut mesh = Self::empty(dim);
        mesh.append(shape, resolution)?;
        Ok(mesh)
    }

    /// Concatenated meshes of the parts of a set.
    pub fn of_set(set: &ShapeSet, resolution: usize) -> Result<Self> {
        let mut mesh = Self::empty(set.dim());
        for part in set.parts() {
            mesh.append(part, resolution)?;
        }
        Ok(mesh)
    }

    fn append(&mut self, shape: &ShapeCandidate, n: usize) -> Result<()> {
        check_resolution(n)?;
        let dim = self.dim;
        shape.validate(dim)?;
        let h = shape.mean_curvature(dim);
        let b2 = shape.second_fundamental_sq(dim);
        match (shape, dim) {
            (ShapeCandidate::Lamella { axis, center, halfwidth }, 2 | 3) => {
                let cross: Vec<usize> = (0..dim).filter(|a| a != axis).collect();
                let sizes = vec![n; dim - 1];
                let count: usize = sizes.iter().product();
                for side in [1.0, -1.0] {
                    let offset = self.points.len();
                    for flat in 0..count {
                        let mut x = vec![0.0; dim];
                        x[*axis] = center + side * halfwidth;
                        let mut rem = flat;
                        for &b in cross.iter().rev() {
                            x[b] = (rem % n) as f64 / n as f64;
                            rem /= n;
                        }
                        let mut nu = vec![0.0; dim];
                        nu[*axis] = side;
                        self.push(x, nu, 1.0 / count as f64, h, b2);
                    }
                    self.charts.push(Chart { kind: ChartKind::Flat, offset, sizes: sizes.clone() });
                }
            }
            (ShapeCandidate::Ball { center, radius }, 2) => {
                let offset = self.points.len();
                for j in 0..n {
                    let t = 2.0 * PI * j as f64 / n as f64;
                    let nu = vec![t.cos(), t.sin()];
                    let x = vec![center[0] + radius * nu[0], center[1] + radius * nu[1]];
                    self.push(x, nu, 2.0 * PI * radius / n as f64, h, b2);
                }
                self.charts.push(Chart { kind: ChartKind::Circle { radius: *radius }, offset, sizes: vec![n] });
            }
            (ShapeCandidate::Ball { center, radius }, 3) => {
                let offset = self.points.len();
                let fejer = fejer_weights(n);
                let m = 2 * n;
                for (i, fw) in fejer.iter().enumerate() {
                    let th = PI * (i as f64 + 0.5) / n as f64;
                    for j in 0..m {
                        let ps = 2.0 * PI * j as f64 / m as f64;
                        let nu = vec![th.sin() * ps.cos(), th.sin() * ps.sin(), th.cos()];
                        let x = (0..3).map(|a| center[a] + radius * nu[a]).collect();
                        self.push(x, nu, radius * radius * fw * 2.0 * PI / m as f64, h, b2);
                    }
                }
                self.charts.push(Chart { kind: ChartKind::Sphere { radius: *radius }, offset, sizes: vec![n, m] });
            }
            (ShapeCandidate::Cylinder { axis, center, radius }, 3) => {
                let [b, c] = ShapeCandidate::cross_axes(*axis);
                let offset = self.points.len();
                for i in 0..n {
                    let t = 2.0 * PI * i as f64 / n as f64;
                    for j in 0..n {
                        let mut x = vec![0.0; 3];
                        let mut nu = vec![0.0; 3];
                        nu[b] = t.cos();
                        nu[c] = t.sin();
                        x[b] = center[0] + radius * nu[b];
                        x[c] = center[1] + radius * nu[c];
                        x[*axis] = j as f64 / n as f64;
                        self.push(x, nu, 2.0 * PI * radius / (n * n) as f64, h, b2);
                    }
                }
                self.charts.push(Chart { kind: ChartKind::Tube { radius: *radius }, offset, sizes: vec![n, n] });
            }
            _ => {
                return Err(Error::Shape(format!("no interface mesh for {shape:?} in dimension {dim}")));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn normals(&self) -> &[Vec<f64>] {
        &self.normals
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Mean curvature per point, positive for convex `E`.
    pub fn curvature(&self) -> &[f64] {
        &self.curvature
    }

    /// `|B|²` per point.
    pub fn second_fundamental_sq(&self) -> &[f64] {
        &self.second_fundamental_sq
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `∫ f` for per-point values `f`.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        self.weights.iter().zip(f).map(|(w, v)| w * v).sum()
    }

    /// Components of `∇_τφ` in an orthonormal tangent frame, one vector per
    /// tangent direction; derivatives are spectral along every chart axis.
    pub fn tangential_gradient(&self, phi: &[f64]) -> Vec<Vec<f64>> {
        assert_eq!(phi.len(), self.len(), "surface function length must match mesh");
        let mut out = vec![vec![0.0; self.len()]; self.dim - 1];
        for chart in &self.charts {
            chart_gradient(chart, phi, &mut out);
        }
        out
    }

    /// Symmetric matrix `S` with `φᵀSφ ≈ ∫|∇_τφ|²` whose kernel is the
    /// per-chart constants: periodic chart axes use the full Fourier symbol,
    /// Nyquist included; sphere colatitudes use the weighted great-circle
    /// derivative.
    pub fn stiffness_matrix(&self) -> DMatrix<f64> {
        let n = self.len();
        let mut s = DMatrix::<f64>::zeros(n, n);
        let add_line = |s: &mut DMatrix<f64>, k: &[f64], len: usize, start: usize, stride: usize, w: f64| {
            for i in 0..len {
                for j in 0..len {
                    s[(start + i * stride, start + j * stride)] += w * k[i * len + j];
                }
            }
        };
        for chart in &self.charts {
            let o = chart.offset;
            let w = self.weights[o];
            match &chart.kind {
                ChartKind::Flat | ChartKind::Tube { .. } | ChartKind::Circle { .. } => {
                    let periods: Vec<f64> = match &chart.kind {
                        ChartKind::Flat => vec![1.0; chart.sizes.len()],
                        ChartKind::Circle { radius } => vec![2.0 * PI * radius],
                        ChartKind::Tube { radius } => vec![2.0 * PI * radius, 1.0],
                        ChartKind::Sphere { .. } => unreachable!(),
                    };
                    let first = chart.sizes[0];
                    let k0 = periodic_stiffness_matrix(first, periods[0]);
                    if chart.sizes.len() == 1 {
                        add_line(&mut s, &k0, first, o, 1, w);
                    } else {
                        let m = chart.sizes[1];
                        let k1 = periodic_stiffness_matrix(m, periods[1]);
                        for j in 0..m {
                            add_line(&mut s, &k0, first, o + j, m, w);
                        }
                        for i in 0..first {
                            add_line(&mut s, &k1, m, o + i * m, 1, w);
                        }
                    }
                }
                ChartKind::Sphere { radius } => {
                    let (nt, m) = (chart.sizes[0], chart.sizes[1]);
                    let kp = periodic_stiffness_matrix(m, 2.0 * PI);
                    for i in 0..nt {
                        let th = PI * (i as f64 + 0.5) / nt as f64;
                        let wi = self.weights[o + i * m] / (radius * th.sin()).powi(2);
                        add_line(&mut s, &kp, m, o + i * m, 1, wi);
                    }
                    let len = chart.len();
                    let mut dtheta = DMatrix::<f64>::zeros(len, len);
                    let mut e = vec![0.0; n];
                    let mut out = vec![vec![0.0; n]; 2];
                    for j in 0..len {
                        e[o + j] = 1.0;
                        chart_gradient(chart, &e, &mut out);
                        for i in 0..len {
                            dtheta[(i, j)] = out[0][o + i];
                        }
                        e[o + j] = 0.0;
                    }
                    let wd = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.weights[o..o + len]));
                    let block = dtheta.transpose() * wd * &dtheta;
                    let mut view = s.view_mut((o, o), (len, len));
                    view += block;
                }
            }
        }
        s
    }

    /// `|∇_τφ|²` per point.
    pub fn tangential_gradient_sq(&self, phi: &[f64]) -> Vec<f64> {
        let g = self.tangential_gradient(phi);
        (0..self.len()).map(|i| g.iter().map(|c| c[i] * c[i]).sum()).collect()
    }
}

fn chart_gradient(chart: &Chart, phi: &[f64], out: &mut [Vec<f64>]) {
    let o = chart.offset;
    match &chart.kind {
        ChartKind::Flat => {
            let n = chart.sizes[0];
            let d = periodic_diff_matrix(n, 1.0);
            if chart.sizes.len() == 1 {
                apply_along(&d, n, phi, o, 1, &mut out[0]);
            } else {
                let m = chart.sizes[1];
                let dm = periodic_diff_matrix(m, 1.0);
                for j in 0..m {
                    apply_along(&d, n, phi, o + j, m, &mut out[0]);
                }
                for i in 0..n {
                    apply_along(&dm, m, phi, o + i * m, 1, &mut out[1]);
                }
            }
        }
        ChartKind::Circle { radius } => {
            let n = chart.sizes[0];
            let d = periodic_diff_matrix(n, 2.0 * PI * radius);
            apply_along(&d, n, phi, o, 1, &mut out[0]);
        }
        ChartKind::Tube { radius } => {
            let (n, m) = (chart.sizes[0], chart.sizes[1]);
            let dt = periodic_diff_matrix(n, 2.0 * PI * radius);
            let ds = periodic_diff_matrix(m, 1.0);
            for j in 0..m {
                apply_along(&dt, n, phi, o + j, m, &mut out[0]);
            }
            for i in 0..n {
                apply_along(&ds, m, phi, o + i * m, 1, &mut out[1]);
            }
        }
        ChartKind::Sphere { radius } => {
            let (n, m) = (chart.sizes[0], chart.sizes[1]);
            // longitude: per ring, scaled by 1/(r sin θ)
            let dp = periodic_diff_matrix(m, 2.0 * PI);
            for i in 0..n {
                let th = PI * (i as f64 + 0.5) / n as f64;
                apply_along(&dp, m, phi, o + i * m, 1, &mut out[1]);
                for j in 0..m {
                    out[1][o + i * m + j] /= radius * th.sin();
                }
            }
            // colatitude: great circles through antipodal longitudes
            let dt = periodic_diff_matrix(2 * n, 2.0 * PI);
            let mut line = vec![0.0; 2 * n];
            let mut dline = vec![0.0; 2 * n];
            for j in 0..m / 2 {
                let jj = j + m / 2;
                for i in 0..n {
                    line[i] = phi[o + i * m + j];
                    line[2 * n - 1 - i] = phi[o + i * m + jj];
                }
                apply_along(&dt, 2 * n, &line, 0, 1, &mut dline);
                for i in 0..n {
                    out[0][o + i * m + j] = dline[i] / radius;
                    out[0][o + i * m + jj] = -dline[2 * n - 1 - i] / radius;
                }
            }
        }
    }
}

/// Mean curvature of a candidate at a point of its boundary.
pub fn mean_curvature(shape: &ShapeCandidate, dim: usize, point: &[f64]) -> Result<f64> {
    shape.validate(dim)?;
    let d = shape.signed_distance(point);
    if d.abs() > 1e-9 {
        return Err(Error::Invalid(format!("point {point:?} is {d:e} off the interface")));
    }
    Ok(shape.mean_curvature(dim))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lamella_mesh() {
        for dim in [2, 3] {
            let m = InterfaceMesh::of_shape(&ShapeCandidate::lamella(0, 0.5, 0.25), dim, 8).unwrap();
            assert!((m.total_weight() - 2.0).abs() < 1e-14);
            assert!(m.normals().iter().all(|n| n[0].abs() == 1.0 && n[1..].iter().all(|&c| c == 0.0)));
            assert_eq!(m.charts().len(), 2);
            assert!(m.curvature().iter().all(|&h| h == 0.0));
        }
    }

    #[test]
    fn weights_match_areas() {
        let s = InterfaceMesh::of_shape(&ShapeCandidate::ball(&[0.5; 3], 0.25), 3, 8).unwrap();
        assert!((s.total_weight() - 4.0 * PI * 0.0625).abs() < 1e-12);
        let c = InterfaceMesh::of_shape(&ShapeCandidate::cylinder(1, [0.5, 0.5], 0.2), 3, 8).unwrap();
        assert!((c.total_weight() - 2.0 * PI * 0.2).abs() < 1e-14);
        let ci = InterfaceMesh::of_shape(&ShapeCandidate::ball(&[0.5; 2], 0.3), 2, 16).unwrap();
        assert!((ci.total_weight() - 2.0 * PI * 0.3).abs() < 1e-14);
        for m in [&s, &c, &ci] {
            for (x, nu) in m.points().iter().zip(m.normals()) {
                assert!((nu.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-12);
                let _ = x;
            }
        }
        // cylinder normals are radial in the cross-section
        assert!(c.normals().iter().all(|n| n[1] == 0.0));
        assert!(InterfaceMesh::of_shape(&ShapeCandidate::ball(&[0.5; 3], 0.25), 3, 6).is_err());
        assert!(InterfaceMesh::of_shape(&ShapeCandidate::ball(&[0.5], 0.25), 1, 8).is_err());
    }

    #[test]
    fn fejer_integrates_polynomials_in_cos() {
        let w = fejer_weights(10);
        let int = |f: &dyn Fn(f64) -> f64| -> f64 {
            w.iter().enumerate().map(|(i, wi)| wi * f((PI * (i as f64 + 0.5) / 10.0).cos())).sum()
        };
        assert!((int(&|_| 1.0) - 2.0).abs() < 1e-14);
        assert!((int(&|x| x * x) - 2.0 / 3.0).abs() < 1e-14);
        assert!((int(&|x| x.powi(8)) - 2.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn sphere_gradient_of_height_function() {
        // φ = ν₃ = cos θ has |∇_τφ|² = sin²θ / r²
        let r = 0.3;
        let m = InterfaceMesh::of_shape(&ShapeCandidate::ball(&[0.5; 3], r), 3, 12).unwrap();
        let phi: Vec<f64> = m.normals().iter().map(|n| n[2]).collect();
        let g2 = m.tangential_gradient_sq(&phi);
        for (nu, g) in m.normals().iter().zip(&g2) {
            assert!((g - (1.0 - nu[2] * nu[2]) / (r * r)).abs() < 1e-10);
        }
        // same for a horizontal component, which exercises both chart axes
        let phi: Vec<f64> = m.normals().iter().map(|n| n[0]).collect();
        let g2 = m.tangential_gradient_sq(&phi);
        for (nu, g) in m.normals().iter().zip(&g2) {
            assert!((g - (1.0 - nu[0] * nu[0]) / (r * r)).abs() < 1e-10);
        }
        // ∫|∇ν₁|² = |B|²∫ν₁² for the translation mode
        let lhs = m.integrate(&g2);
        let rhs = 2.0 / (r * r) * m.integrate(&phi.iter().map(|p| p * p).collect::<Vec<_>>());
        assert!((lhs - rhs).abs() < 1e-10 * rhs);
    }

    #[test]
    fn flat_and_tube_gradients() {
        let m = InterfaceMesh::of_shape(&ShapeCandidate::lamella(2, 0.5, 0.2), 3, 8).unwrap();
        let phi: Vec<f64> = m.points().iter().map(|x| (2.0 * PI * x[1]).sin()).collect();
        let g = m.tangential_gradient(&phi);
        for (i, x) in m.points().iter().enumerate() {
            assert!(g[0][i].abs() < 1e-12);
            assert!((g[1][i] - 2.0 * PI * (2.0 * PI * x[1]).cos()).abs() < 1e-11);
        }
        let t = InterfaceMesh::of_shape(&ShapeCandidate::cylinder(0, [0.5, 0.5], 0.2), 3, 8).unwrap();
        let phi: Vec<f64> = t.normals().iter().map(|n| n[1]).collect();
        let g2 = t.tangential_gradient_sq(&phi);
        for (nu, g) in t.normals().iter().zip(&g2) {
            assert!((g - nu[2] * nu[2] / 0.04).abs() < 1e-10);
        }
    }

    #[test]
    fn stiffness_agrees_with_gradients_and_has_constant_kernel() {
        let r = 0.3;
        for (shape, dim) in [
            (ShapeCandidate::ball(&[0.5; 3], r), 3),
            (ShapeCandidate::cylinder(1, [0.5, 0.5], r), 3),
            (ShapeCandidate::ball(&[0.5; 2], r), 2),
            (ShapeCandidate::lamella(0, 0.5, 0.25), 3),
        ] {
            let m = InterfaceMesh::of_shape(&shape, dim, 10).unwrap();
            let s = m.stiffness_matrix();
            assert!((&s - s.transpose()).norm() < 1e-9 * s.norm());
            let phi: Vec<f64> = m
                .normals()
                .iter()
                .zip(m.points())
                .map(|(n, x)| n[0] + 0.3 * n[dim - 1] * n[0] + 0.2 * (2.0 * PI * x[1]).sin())
                .collect();
            let v = nalgebra::DVector::from_column_slice(&phi);
            let quad = (v.transpose() * &s * &v)[(0, 0)];
            let direct = m.integrate(&m.tangential_gradient_sq(&phi));
            assert!((quad - direct).abs() < 1e-9 * direct, "{shape:?}: {quad} {direct}");
            let eig = nalgebra::SymmetricEigen::new(s.clone()).eigenvalues;
            let zeros = eig.iter().filter(|&&x| x.abs() < 1e-8 * s.norm()).count();
            assert_eq!(zeros, m.charts().len(), "{shape:?}");
        }
    }

    #[test]
    fn curvature_catalogue() {
        let lam = ShapeCandidate::lamella(0, 0.5, 0.25);
        assert_eq!(mean_curvature(&lam, 2, &[0.75, 0.3]).unwrap(), 0.0);
        let ball = ShapeCandidate::ball(&[0.5; 3], 0.25);
        assert_eq!(mean_curvature(&ball, 3, &[0.75, 0.5, 0.5]).unwrap(), 8.0);
        let cyl = ShapeCandidate::cylinder(2, [0.5, 0.5], 0.2);
        assert!((mean_curvature(&cyl, 3, &[0.7, 0.5, 0.1]).unwrap() - 5.0).abs() < 1e-12);
        assert!(mean_curvature(&ball, 3, &[0.5, 0.5, 0.5]).is_err());
    }
}
