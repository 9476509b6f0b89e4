use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::spectral::{set_spectrum, SpectralWorkspace};
use crate::torus_field::{tanh_profile_set, GridSpec, ShapeSet};

use super::energy::ok_energy;

/// Surface tension `σ = 2∫₋₁¹ √W` of the double well `W(s) = (s²−1)²`.
pub const SIGMA: f64 = 8.0 / 3.0;

/// `2∫₋₁¹ √W(s) ds` by composite Simpson on `panels` (even) subintervals.
pub fn modica_mortola_constant(panels: usize) -> f64 {
    let panels = panels.max(2) + panels % 2;
    let h = 2.0 / panels as f64;
    let f = |s: f64| ((s * s - 1.0).powi(2)).sqrt();
    let mut acc = f(-1.0) + f(1.0);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(-1.0 + i as f64 * h);
    }
    2.0 * acc * h / 3.0
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaLimitRow {
    pub eps: f64,
    /// `OK_ε` of the tanh profile.
    pub diffuse: f64,
    /// `σP + γNL` of the sharp set.
    pub reference: f64,
    pub difference: f64,
}

pub const GAMMA_LIMIT_CSV_HEADER: &str = "eps,ok_eps,sharp_reference,difference";

pub fn gamma_limit_csv(rows: &[GammaLimitRow]) -> String {
    let mut out = format!("{GAMMA_LIMIT_CSV_HEADER}\n");
    for r in rows {
        let _ = writeln!(out, "{:.17e},{:.17e},{:.17e},{:.17e}", r.eps, r.diffuse, r.reference, r.difference);
    }
    out
}

/// Compares `OK_ε(tanh(d_E/ε))` with `σP(E) + γNL(E)` for each `ε`.
///
/// `P` is analytic and `NL` comes from the exact set coefficients over the
/// frequency band of `spec`.
pub fn gamma_limit_sweep(set: &ShapeSet, spec: &GridSpec, gamma: f64, eps_list: &[f64]) -> Result<Vec<GammaLimitRow>> {
    if eps_list.is_empty() {
        return Err(Error::Invalid("eps list is empty".into()));
    }
    let ws = SpectralWorkspace::new(spec);
    let nl = set_spectrum(set, spec)?.nonlocal_energy();
    let reference = SIGMA * set.perimeter() + gamma * nl;
    eps_list
        .iter()
        .map(|&eps| {
            let u = tanh_profile_set(set, spec, eps)?;
            let diffuse = ok_energy(&u, eps, gamma, &ws)?;
            Ok(GammaLimitRow { eps, diffuse, reference, difference: (diffuse - reference).abs() })
        })
        .collect()
}

/// Least-squares slope of `log y` against `log x`.
pub fn fit_order(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::Invalid("need at least two paired samples".into()));
    }
    if xs.iter().chain(ys).any(|&v| !(v > 0.0)) {
        return Err(Error::Invalid("log fit needs positive samples".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Invalid("abscissae are all equal".into()));
    }
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus_field::ShapeCandidate;

    #[test]
    fn sigma_by_quadrature() {
        // Simpson is exact on the quadratic 1 − s²
        assert!((modica_mortola_constant(64) - SIGMA).abs() < 1e-14);
    }

    #[test]
    fn fit_recovers_power() {
        let xs = [0.1, 0.2, 0.4, 0.8];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(1.5)).collect();
        assert!((fit_order(&xs, &ys).unwrap() - 1.5).abs() < 1e-12);
        assert!(fit_order(&xs, &[1.0, 0.0, 1.0, 1.0]).is_err());
        assert!(fit_order(&[1.0], &[1.0]).is_err());
    }

    #[test]
    fn zero_gamma_reference_is_sigma_perimeter() {
        let g = GridSpec::new(&[512, 4]).unwrap();
        let set = ShapeSet::single(2, ShapeCandidate::lamella(0, 0.5, 0.25)).unwrap();
        let rows = gamma_limit_sweep(&set, &g, 0.0, &[0.08, 0.04]).unwrap();
        assert!((rows[0].reference - 2.0 * SIGMA).abs() < 1e-15);
        assert!(rows[1].difference < rows[0].difference);
        assert_eq!(gamma_limit_csv(&rows).lines().count(), 3);
    }
}
