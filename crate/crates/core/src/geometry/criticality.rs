use crate::error::Result;
use crate::spectral::{set_spectrum, Spectrum};
use crate::torus_field::{GridSpec, ShapeSet};

use super::mesh::InterfaceMesh;

/// How far a set is from `H + 4γv = λ` on its boundary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalityReport {
    pub gamma: f64,
    pub k: usize,
    /// Weighted surface mean of `H + 4γv`.
    pub lambda: f64,
    pub residual_sup: f64,
    /// `4γ sup|∇_τv|`, the size of `∇_τH` a critical set would need.
    pub grad_h_sup: f64,
    /// `4γ sup|∇v|`, a bound on `grad_h_sup` that ignores the tangential
    /// projection.
    pub grad_h_bound: f64,
}

impl CriticalityReport {
    pub const CSV_HEADER: &'static str = "gamma,k,lambda,residual_sup,grad_H_sup";

    pub fn csv_row(&self) -> String {
        format!(
            "{:.17e},{},{:.17e},{:.17e},{:.17e}",
            self.gamma, self.k, self.lambda, self.residual_sup, self.grad_h_sup
        )
    }
}

/// Potential values and gradients at the mesh points.
pub(crate) fn sample_potential(mesh: &InterfaceMesh, potential: &Spectrum) -> (Vec<f64>, Vec<Vec<f64>>) {
    mesh.points().iter().map(|x| potential.eval_with_gradient(x, true)).unzip()
}

/// Residual of the Euler–Lagrange equation on `mesh`, with `v` given by the
/// band-limited `potential` and `H` taken from the mesh.
pub fn el_residual(mesh: &InterfaceMesh, potential: &Spectrum, gamma: f64) -> CriticalityReport {
    let (v, grad) = sample_potential(mesh, potential);
    let lhs: Vec<f64> = mesh.curvature().iter().zip(&v).map(|(h, v)| h + 4.0 * gamma * v).collect();
    let lambda = mesh.integrate(&lhs) / mesh.total_weight();
    let residual_sup = lhs.iter().map(|x| (x - lambda).abs()).fold(0.0, f64::max);
    let mut grad_h_sup: f64 = 0.0;
    let mut grad_h_bound: f64 = 0.0;
    for (g, nu) in grad.iter().zip(mesh.normals()) {
        let gn: f64 = g.iter().zip(nu).map(|(a, b)| a * b).sum();
        let tangential: f64 = g.iter().zip(nu).map(|(a, b)| (a - gn * b).powi(2)).sum::<f64>().sqrt();
        let full: f64 = g.iter().map(|a| a * a).sum::<f64>().sqrt();
        grad_h_sup = grad_h_sup.max(4.0 * gamma * tangential);
        grad_h_bound = grad_h_bound.max(4.0 * gamma * full);
    }
    CriticalityReport { gamma, k: 1, lambda, residual_sup, grad_h_sup, grad_h_bound }
}

/// [`el_residual`] for a shape set with `v` from its exact Fourier
/// coefficients over `band`.
pub fn el_residual_of_set(set: &ShapeSet, gamma: f64, band: &GridSpec, resolution: usize) -> Result<CriticalityReport> {
    let mesh = InterfaceMesh::of_set(set, resolution)?;
    let potential = set_spectrum(set, band)?.potential();
    Ok(el_residual(&mesh, &potential, gamma))
}
