use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::SpectralWorkspace;
use crate::torus_field::ScalarField;

/// The three terms of `OK_ε` and their sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OkEnergy {
    /// `ε∫|∇u|²`
    pub gradient: f64,
    /// `(1/ε)∫(u²−1)²`
    pub well: f64,
    /// `γ NL(u)`
    pub nonlocal: f64,
    pub total: f64,
}

pub(crate) fn check_eps_gamma(eps: f64, gamma: f64) -> Result<()> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::Invalid(format!("eps must be positive, got {eps}")));
    }
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::Invalid(format!("gamma must be nonnegative, got {gamma}")));
    }
    Ok(())
}

/// `OK_ε(u) = ε∫|∇u|² + (1/ε)∫(u²−1)² + γ∫∫G(u−m)(u−m)`.
pub fn ok_energy(u: &ScalarField, eps: f64, gamma: f64, ws: &SpectralWorkspace) -> Result<f64> {
    Ok(ok_energy_parts(u, eps, gamma, ws)?.total)
}

pub fn ok_energy_parts(u: &ScalarField, eps: f64, gamma: f64, ws: &SpectralWorkspace) -> Result<OkEnergy> {
    check_eps_gamma(eps, gamma)?;
    ws.spec().check_same(u.spec())?;
    let coeffs = ws.forward(u.values());
    Ok(energy_from_parts(u.values(), &coeffs, &ws.gradient_symbol(), ws, eps, gamma))
}

/// Multiplier and sup-residual of the diffuse Euler–Lagrange equation
/// `−2εΔu + (4/ε)u(u²−1) + 2γv_u = λ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiffuseResidual {
    pub lambda: f64,
    pub residual_sup: f64,
}

pub fn diffuse_el_residual(u: &ScalarField, eps: f64, gamma: f64, ws: &SpectralWorkspace) -> Result<DiffuseResidual> {
    check_eps_gamma(eps, gamma)?;
    ws.spec().check_same(u.spec())?;
    let coeffs = ws.forward(u.values());
    let lap: Vec<Complex64> = coeffs.iter().zip(ws.gradient_symbol()).map(|(c, s)| c * s).collect();
    let pot: Vec<Complex64> = coeffs.iter().zip(ws.inverse_symbol()).map(|(c, m)| c * m).collect();
    let lap = ws.inverse(lap);
    let pot = ws.inverse(pot);
    let g: Vec<f64> = u
        .values()
        .iter()
        .zip(lap.iter().zip(&pot))
        .map(|(&x, (&l, &v))| 2.0 * eps * l + (4.0 / eps) * x * (x * x - 1.0) + 2.0 * gamma * v)
        .collect();
    let lambda = g.iter().sum::<f64>() / g.len() as f64;
    let residual_sup = g.iter().map(|x| (x - lambda).abs()).fold(0.0, f64::max);
    Ok(DiffuseResidual { lambda, residual_sup })
}

/// Gradient term by Parseval with the Nyquist-free symbol, which equals the
/// integral of the squared spectral gradient.
pub(crate) fn energy_from_parts(
    values: &[f64],
    coeffs: &[Complex64],
    grad_symbol: &[f64],
    ws: &SpectralWorkspace,
    eps: f64,
    gamma: f64,
) -> OkEnergy {
    let cell = ws.spec().cell_volume();
    let dirichlet: f64 = coeffs.iter().zip(grad_symbol).map(|(c, s)| c.norm_sqr() * s).sum();
    let well: f64 = values.iter().map(|&u| (u * u - 1.0).powi(2)).sum::<f64>() * cell;
    let nl = ws.nonlocal_energy_of_coeffs(coeffs);
    let gradient = eps * dirichlet;
    let well = well / eps;
    let nonlocal = gamma * nl;
    OkEnergy { gradient, well, nonlocal, total: gradient + well + nonlocal }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus_field::{tanh_profile, GridSpec, ShapeCandidate};

    #[test]
    fn trivial_values() {
        let g = GridSpec::cubic(2, 16).unwrap();
        let ws = SpectralWorkspace::new(&g);
        assert_eq!(ok_energy(&ScalarField::constant(&g, 1.0), 0.2, 3.0, &ws).unwrap(), 0.0);
        let zero = ok_energy(&ScalarField::constant(&g, 0.0), 0.2, 0.0, &ws).unwrap();
        assert!((zero - 5.0).abs() < 1e-14);
        assert!(ok_energy(&ScalarField::constant(&g, 0.0), 0.0, 0.0, &ws).is_err());
        assert!(ok_energy(&ScalarField::constant(&g, 0.0), 0.1, -1.0, &ws).is_err());
    }

    #[test]
    fn gradient_term_matches_spectral_gradients() {
        let g = GridSpec::new(&[64, 32]).unwrap();
        let ws = SpectralWorkspace::new(&g);
        let u = tanh_profile(&ShapeCandidate::ball(&[0.5, 0.5], 0.3), &g, 0.08).unwrap();
        let parts = ok_energy_parts(&u, 0.08, 2.0, &ws).unwrap();
        let direct = 0.08 * ws.dirichlet_energy(&u).unwrap();
        assert!((parts.gradient - direct).abs() < 1e-12 * direct);
        assert!((parts.nonlocal - 2.0 * ws.nonlocal_energy(&u).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn residual_vanishes_on_pure_phases_and_scales_under_tiling() {
        let g = GridSpec::cubic(2, 32).unwrap();
        let ws = SpectralWorkspace::new(&g);
        let r = diffuse_el_residual(&ScalarField::constant(&g, -1.0), 0.1, 2.0, &ws).unwrap();
        assert_eq!((r.lambda, r.residual_sup), (0.0, 0.0));
        // u(kx) at (ε/k, γk³) has k times the residual of u at (ε, γ)
        let u = tanh_profile(&ShapeCandidate::ball(&[0.5, 0.5], 0.3), &g, 0.1).unwrap();
        let tiled = u.tile(2).unwrap().subsample(1).unwrap();
        let coarse = u.subsample(2).unwrap();
        let wc = SpectralWorkspace::new(coarse.spec());
        let base = diffuse_el_residual(&coarse, 0.1, 1.0, &wc).unwrap();
        let fine = diffuse_el_residual(&tiled, 0.05, 8.0, &ws).unwrap();
        assert!((fine.residual_sup - 2.0 * base.residual_sup).abs() < 1e-9 * fine.residual_sup);
    }

    #[test]
    fn tanh_lamella_approaches_sixteen_thirds() {
        let g = GridSpec::new(&[2048, 4]).unwrap();
        let ws = SpectralWorkspace::new(&g);
        let lam = ShapeCandidate::lamella(0, 0.5, 0.25);
        let mut last = f64::INFINITY;
        for eps in [0.08, 0.04, 0.02] {
            let e = ok_energy(&tanh_profile(&lam, &g, eps).unwrap(), eps, 0.0, &ws).unwrap();
            let err = (e - 16.0 / 3.0).abs();
            assert!(err < last && err < 0.05 * eps, "{eps}: {e}");
            last = err;
        }
    }
}
