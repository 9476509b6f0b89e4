use crate::error::{Error, Result};
use crate::geometry::{sample_potential, InterfaceMesh};
use crate::spectral::{measure_green_energy, set_spectrum, Spectrum};
use crate::torus_field::{GridSpec, ShapeSet};

/// Values of `φ` at the mesh points.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceFunction {
    values: Vec<f64>,
    zero_mean: bool,
}

impl SurfaceFunction {
    /// Flags `φ` as zero-mean when `|Σwφ| ≤ 1e-10 Σw`.
    pub fn new(mesh: &InterfaceMesh, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.len() {
            return Err(Error::Invalid(format!("{} values for a mesh of {} points", values.len(), mesh.len())));
        }
        let zero_mean = mesh.integrate(&values).abs() <= 1e-10 * mesh.total_weight();
        Ok(Self { values, zero_mean })
    }

    pub fn from_fn(mesh: &InterfaceMesh, f: impl Fn(&[f64], &[f64]) -> f64) -> Result<Self> {
        let values = mesh.points().iter().zip(mesh.normals()).map(|(x, n)| f(x, n)).collect();
        Self::new(mesh, values)
    }

    /// Removes the weighted mean.
    pub fn projected(mesh: &InterfaceMesh, mut values: Vec<f64>) -> Result<Self> {
        if values.len() == mesh.len() {
            let mean = mesh.integrate(&values) / mesh.total_weight();
            values.iter_mut().for_each(|v| *v -= mean);
        }
        Self::new(mesh, values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_zero_mean(&self) -> bool {
        self.zero_mean
    }
}

/// Terms of the second variation for one `φ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadFormReport {
    /// `∫|D_τφ|² − |B|²φ²`
    pub term_perimeter: f64,
    /// `4γ∫∂_νv φ²`
    pub term_potential: f64,
    /// `8γ∫∫Gφφ`
    pub term_green: f64,
    /// `2|∫φν|²` for the penalized form.
    pub penalty: Option<f64>,
    pub total: f64,
}

impl QuadFormReport {
    fn new(term_perimeter: f64, term_potential: f64, term_green: f64, penalty: Option<f64>) -> Self {
        let total = term_perimeter + term_potential + term_green + penalty.unwrap_or(0.0);
        Self { term_perimeter, term_potential, term_green, penalty, total }
    }

    /// `|term_perimeter| + |term_potential| + |term_green|` plus machine
    /// epsilon, the scale for degeneracy checks.
    pub fn magnitude(&self) -> f64 {
        self.term_perimeter.abs() + self.term_potential.abs() + self.term_green.abs() + f64::EPSILON
    }
}

/// The second variation `∂²F^γ(E)` on a fixed mesh, with `∂_νv` and the
/// Green kernel taken over one frequency band.
#[derive(Clone, Debug)]
pub struct SecondVariation {
    mesh: InterfaceMesh,
    gamma: f64,
    band: GridSpec,
    normal_derivative: Vec<f64>,
}

impl SecondVariation {
    /// `v` from the exact Fourier coefficients of `set` over `band`.
    pub fn for_set(set: &ShapeSet, gamma: f64, band: &GridSpec, resolution: usize) -> Result<Self> {
        let mesh = InterfaceMesh::of_set(set, resolution)?;
        let potential = set_spectrum(set, band)?.potential();
        Self::with_potential(mesh, &potential, gamma)
    }

    /// Any band-limited potential, e.g. the interpolant of a grid solve.
    pub fn with_potential(mesh: InterfaceMesh, potential: &Spectrum, gamma: f64) -> Result<Self> {
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::Invalid(format!("gamma must be nonnegative, got {gamma}")));
        }
        if mesh.dim() != potential.band().dim() {
            return Err(Error::GridMismatch(format!(
                "mesh of dimension {} with a {}-dimensional band",
                mesh.dim(),
                potential.band().dim()
            )));
        }
        let (_, grad) = sample_potential(&mesh, potential);
        let normal_derivative = grad
            .iter()
            .zip(mesh.normals())
            .map(|(g, n)| g.iter().zip(n).map(|(a, b)| a * b).sum())
            .collect();
        Ok(Self { mesh, gamma, band: potential.band().clone(), normal_derivative })
    }

    pub fn mesh(&self) -> &InterfaceMesh {
        &self.mesh
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn band(&self) -> &GridSpec {
        &self.band
    }

    /// `∂_νv` at the mesh points.
    pub fn normal_derivative(&self) -> &[f64] {
        &self.normal_derivative
    }

    fn check(&self, phi: &SurfaceFunction) -> Result<()> {
        if phi.values.len() != self.mesh.len() {
            return Err(Error::GridMismatch("surface function does not match the mesh".into()));
        }
        if !phi.zero_mean {
            return Err(Error::Invalid("surface function must have zero mean".into()));
        }
        Ok(())
    }

    /// `∫∫G φ φ` over the band, from the exact transform of `φ dH`.
    pub fn green_energy(&self, phi: &[f64]) -> f64 {
        let masses: Vec<f64> = phi.iter().zip(self.mesh.weights()).map(|(p, w)| p * w).collect();
        measure_green_energy(&self.band, self.mesh.points(), &masses)
    }

    /// `∫φν`, one component per axis.
    pub fn normal_moment(&self, phi: &[f64]) -> Vec<f64> {
        (0..self.mesh.dim())
            .map(|a| {
                phi.iter()
                    .zip(self.mesh.normals())
                    .zip(self.mesh.weights())
                    .map(|((p, n), w)| p * n[a] * w)
                    .sum()
            })
            .collect()
    }

    pub fn quad_form(&self, phi: &SurfaceFunction) -> Result<QuadFormReport> {
        self.check(phi)?;
        Ok(self.terms(&phi.values, None))
    }

    /// Adds `2|∫φν|²`.
    pub fn penalized_quad_form(&self, phi: &SurfaceFunction) -> Result<QuadFormReport> {
        self.check(phi)?;
        let penalty = 2.0 * self.normal_moment(&phi.values).iter().map(|c| c * c).sum::<f64>();
        Ok(self.terms(&phi.values, Some(penalty)))
    }

    fn terms(&self, phi: &[f64], penalty: Option<f64>) -> QuadFormReport {
        let m = &self.mesh;
        let grad_sq = m.tangential_gradient_sq(phi);
        let local: Vec<f64> = grad_sq
            .iter()
            .zip(m.second_fundamental_sq())
            .zip(phi)
            .map(|((g, b), p)| g - b * p * p)
            .collect();
        let pot: Vec<f64> = self.normal_derivative.iter().zip(phi).map(|(d, p)| d * p * p).collect();
        let green = if self.gamma == 0.0 { 0.0 } else { 8.0 * self.gamma * self.green_energy(phi) };
        QuadFormReport::new(m.integrate(&local), 4.0 * self.gamma * m.integrate(&pot), green, penalty)
    }

    /// `∫|D_τφ|² + φ²`.
    pub fn h1_norm_sq(&self, phi: &[f64]) -> f64 {
        let g = self.mesh.tangential_gradient_sq(phi);
        self.mesh.integrate(&g.iter().zip(phi).map(|(g, p)| g + p * p).collect::<Vec<_>>())
    }

    /// `∫|D_τφ|²`, the norm of the zero-mean space.
    pub fn h1_tilde_norm_sq(&self, phi: &[f64]) -> f64 {
        self.mesh.integrate(&self.mesh.tangential_gradient_sq(phi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus_field::ShapeCandidate;
    use std::f64::consts::PI;

    fn lamella_form(gamma: f64) -> SecondVariation {
        let set = ShapeSet::single(2, ShapeCandidate::lamella(0, 0.5, 0.25)).unwrap();
        SecondVariation::for_set(&set, gamma, &GridSpec::new(&[4096, 8]).unwrap(), 16).unwrap()
    }

    #[test]
    fn flat_mode_at_zero_gamma() {
        let sv = lamella_form(0.0);
        let phi = SurfaceFunction::from_fn(sv.mesh(), |x, _| (2.0 * PI * x[1]).cos()).unwrap();
        let r = sv.quad_form(&phi).unwrap();
        assert!((r.total - 4.0 * PI * PI).abs() < 1e-10);
        assert_eq!(r.term_green, 0.0);
    }

    #[test]
    fn translation_is_degenerate() {
        for gamma in [0.0, 1.0, 10.0] {
            let sv = lamella_form(gamma);
            let phi = SurfaceFunction::from_fn(sv.mesh(), |_, n| n[0]).unwrap();
            let r = sv.quad_form(&phi).unwrap();
            assert!(r.total.abs() <= 1e-6 * r.magnitude(), "{gamma}: {r:?}");
            let p = sv.penalized_quad_form(&phi).unwrap();
            assert!((p.penalty.unwrap() - 8.0).abs() < 1e-12);
            assert!((p.total - 8.0).abs() < 1e-6);
        }
    }

    #[test]
    fn ball_translation_at_zero_gamma() {
        let set = ShapeSet::single(3, ShapeCandidate::ball(&[0.5; 3], 0.25)).unwrap();
        let sv = SecondVariation::for_set(&set, 0.0, &GridSpec::cubic(3, 8).unwrap(), 8).unwrap();
        let phi = SurfaceFunction::from_fn(sv.mesh(), |_, n| n[2]).unwrap();
        assert!(sv.quad_form(&phi).unwrap().total.abs() < 1e-10);
    }

    #[test]
    fn rejects_nonzero_mean() {
        let sv = lamella_form(1.0);
        let phi = SurfaceFunction::new(sv.mesh(), vec![1.0; sv.mesh().len()]).unwrap();
        assert!(!phi.is_zero_mean());
        assert!(sv.quad_form(&phi).is_err());
        let fixed = SurfaceFunction::projected(sv.mesh(), (0..sv.mesh().len()).map(|i| i as f64).collect()).unwrap();
        assert!(fixed.is_zero_mean());
        assert!(SurfaceFunction::new(sv.mesh(), vec![0.0; 3]).is_err());
    }
}
