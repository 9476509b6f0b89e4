use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::spectral::green_matrix;

use super::form::SecondVariation;

/// Smallest generalized eigenvalue of the penalized form against the `H¹`
/// inner product on zero-mean surface functions.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenReport {
    pub min_eigenvalue: f64,
    /// Weight `ρ` multiplying `2|∫φν|²` in the assembled form.
    pub penalty_weight: f64,
    /// Dimension of the zero-mean space.
    pub size: usize,
    /// The lowest few eigenvalues in increasing order.
    pub lowest: Vec<f64>,
}

/// Minimum number of points per chart axis accepted by the eigen-solve.
pub const MIN_PENCIL_RESOLUTION: usize = 16;

impl SecondVariation {
    /// Assembles `A` (penalized form with weight `ρ`) and `B` (`H¹` Gram
    /// matrix), restricts both to `Σwφ = 0` and solves `Aφ = λBφ`.
    ///
    /// `ρ` is chosen so that pure translations sit far above the rest of the
    /// spectrum.
    pub fn min_eigenvalue(&self) -> Result<EigenReport> {
        let mesh = self.mesh();
        if mesh.charts().iter().any(|c| c.sizes.iter().any(|&s| s < MIN_PENCIL_RESOLUTION)) {
            return Err(Error::Invalid(format!("eigen-solve needs at least {MIN_PENCIL_RESOLUTION} points per chart axis")));
        }
        let n = mesh.len();
        let w = DVector::from_column_slice(mesh.weights());
        let wd = DMatrix::from_diagonal(&w);
        let stiffness = mesh.stiffness_matrix();
        let gamma = self.gamma();
        let mut a = stiffness.clone();
        for i in 0..n {
            let b2 = mesh.second_fundamental_sq()[i];
            a[(i, i)] += w[i] * (4.0 * gamma * self.normal_derivative()[i] - b2);
        }
        if gamma > 0.0 {
            a += green_matrix(self.band(), mesh.points(), mesh.weights()) * (8.0 * gamma);
        }
        let mut rho: f64 = 0.0;
        let mut moments = Vec::new();
        for axis in 0..mesh.dim() {
            let nu: Vec<f64> = mesh.normals().iter().map(|v| v[axis]).collect();
            let mass = mesh.integrate(&nu.iter().map(|x| x * x).collect::<Vec<_>>());
            if mass < 1e-12 * mesh.total_weight() {
                continue;
            }
            rho = rho.max(1e4 * self.h1_norm_sq(&nu) / (mass * mass));
            moments.push(DVector::from_iterator(n, nu.iter().zip(mesh.weights()).map(|(v, w)| v * w)));
        }
        for m in &moments {
            a += (m * m.transpose()) * (2.0 * rho);
        }
        let b = stiffness + wd;
        let q = zero_mean_basis(&w);
        let aq = q.transpose() * a * &q;
        let bq = q.transpose() * b * &q;
        let aq = (&aq + aq.transpose()) * 0.5;
        let bq = (&bq + bq.transpose()) * 0.5;
        let chol = bq
            .cholesky()
            .ok_or_else(|| Error::Numerical("H1 Gram matrix is not positive definite".into()))?;
        let l_inv = chol
            .l()
            .try_inverse()
            .ok_or_else(|| Error::Numerical("singular Cholesky factor".into()))?;
        let c = &l_inv * aq * l_inv.transpose();
        let c = (&c + c.transpose()) * 0.5;
        let eig = SymmetricEigen::try_new(c, 1e-14, 10_000)
            .ok_or_else(|| Error::Numerical("symmetric eigen-solve did not converge".into()))?;
        let mut values: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
        values.sort_by(f64::total_cmp);
        Ok(EigenReport {
            min_eigenvalue: values[0],
            penalty_weight: rho,
            size: values.len(),
            lowest: values.into_iter().take(8).collect(),
        })
    }
}

/// Orthonormal basis of `{φ : wᵀφ = 0}` from a Householder reflector.
fn zero_mean_basis(w: &DVector<f64>) -> DMatrix<f64> {
    let n = w.len();
    let mut u = w / w.norm();
    u[0] += if u[0] >= 0.0 { 1.0 } else { -1.0 };
    let u = &u / u.norm();
    let h = DMatrix::<f64>::identity(n, n) - (&u * u.transpose()) * 2.0;
    h.columns(1, n - 1).into_owned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stability::lamella_mode_scan;
    use crate::torus_field::{GridSpec, ShapeCandidate, ShapeSet};

    #[test]
    fn basis_is_orthonormal_and_zero_mean() {
        let w = DVector::from_vec(vec![0.5, 0.25, 0.125, 0.125]);
        let q = zero_mean_basis(&w);
        assert!((q.transpose() * &q - DMatrix::identity(3, 3)).norm() < 1e-14);
        assert!((w.transpose() * q).norm() < 1e-15);
    }

    #[test]
    fn lamella_at_zero_gamma_matches_mode_scan() {
        let set = ShapeSet::single(2, ShapeCandidate::lamella(0, 0.5, 0.25)).unwrap();
        let sv = SecondVariation::for_set(&set, 0.0, &GridSpec::new(&[64, 32]).unwrap(), 32).unwrap();
        let r = sv.min_eigenvalue().unwrap();
        let scan = lamella_mode_scan(0.0, 0.25, 8).unwrap();
        assert!((r.min_eigenvalue - scan).abs() < 1e-3 * scan, "{r:?} {scan}");
        assert!(r.min_eigenvalue > 0.0);
    }

    #[test]
    fn small_resolution_rejected() {
        let set = ShapeSet::single(2, ShapeCandidate::lamella(0, 0.5, 0.25)).unwrap();
        let sv = SecondVariation::for_set(&set, 0.0, &GridSpec::new(&[64, 8]).unwrap(), 8).unwrap();
        assert!(sv.min_eigenvalue().is_err());
    }
}
