use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::diffuse_ok::fit_order;
use crate::error::{Error, Result};
use crate::sharp_energy::EnergyBreakdown;

/// Frequencies kept across the lamella in [`graph_lamella_energy`].
pub const GRAPH_FREQUENCY_CUTOFF: usize = 8192;

/// `J_j(x)²` for all `j` with non-negligible weight, from the Fourier
/// coefficients of `e^{-ix cos t}`.
fn bessel_squares(x: f64, planner: &mut FftPlanner<f64>) -> Vec<(i64, f64)> {
    let m = ((x.abs() + 64.0) as usize).next_power_of_two().max(64);
    let mut data: Vec<Complex64> = (0..m)
        .map(|t| Complex64::from_polar(1.0, -x * (2.0 * PI * t as f64 / m as f64).cos()))
        .collect();
    planner.plan_fft_forward(m).process(&mut data);
    data.iter()
        .enumerate()
        .map(|(j, c)| {
            let j = if j < m / 2 { j as i64 } else { j as i64 - m as i64 };
            (j, (c / m as f64).norm_sqr())
        })
        .collect()
}

/// `F^γ` of the zigzag lamella bounded by `x₁ = c ± w + a cos(2πq x₂)`.
///
/// The perimeter is integrated by the trapezoid rule and the nonlocal term
/// summed over `|ξ₁| ≤` [`GRAPH_FREQUENCY_CUTOFF`] with exact `x₂`
/// coefficients.
pub fn graph_lamella_energy(gamma: f64, w: f64, q: u32, a: f64) -> Result<EnergyBreakdown> {
    if !(w > 0.0 && w < 0.5) || q == 0 || !a.is_finite() || !(gamma >= 0.0) {
        return Err(Error::Invalid(format!("bad graph lamella (w = {w}, q = {q}, a = {a})")));
    }
    if 2.0 * a.abs() >= (0.5 - w).min(w) {
        return Err(Error::Invalid(format!("amplitude {a} makes the interfaces collide")));
    }
    let panels = 512;
    let slope = 2.0 * PI * q as f64 * a;
    let perimeter = 2.0
        * (0..panels)
            .map(|i| (1.0 + (slope * (2.0 * PI * i as f64 / panels as f64).sin()).powi(2)).sqrt())
            .sum::<f64>()
        / panels as f64;
    let mut planner = FftPlanner::new();
    let qf = q as f64;
    let mut nonlocal = 0.0;
    for xi in 1..=GRAPH_FREQUENCY_CUTOFF {
        let xi = xi as f64;
        let slab = (2.0 * (2.0 * PI * xi * w).sin() / (PI * xi)).powi(2);
        if slab == 0.0 {
            continue;
        }
        let spread: f64 = bessel_squares(2.0 * PI * xi * a, &mut planner)
            .into_iter()
            .map(|(j, b)| b / (xi * xi + qf * qf * (j * j) as f64))
            .sum();
        nonlocal += 2.0 * slab * spread / (4.0 * PI * PI);
    }
    Ok(EnergyBreakdown::new(perimeter, nonlocal, gamma))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GraphProbe {
    pub amplitude: f64,
    /// `|E_a △ E| = 4a/π`, unchanged by translations.
    pub alpha: f64,
    pub gap: f64,
}

/// Energy gaps of 1/k-periodic zigzag perturbations of `tile(lamella, k)` at
/// `γ̄`, through `F^γ̄(F_a) - F^γ̄(F) = k[F^{γ_k}(E_{ka}) - F^{γ_k}(E)]`.
pub fn graph_lamella_probe(gamma_bar: f64, k: usize, w: f64, q: u32, amplitudes: &[f64]) -> Result<Vec<GraphProbe>> {
    if k == 0 {
        return Err(Error::Invalid("k must be positive".into()));
    }
    let kf = k as f64;
    let gamma_k = gamma_bar / kf.powi(3);
    let base = graph_lamella_energy(gamma_k, w, q, 0.0)?.total;
    amplitudes
        .iter()
        .map(|&a| {
            let e = graph_lamella_energy(gamma_k, w, q, kf * a)?.total;
            Ok(GraphProbe { amplitude: a, alpha: 4.0 * a.abs() / PI, gap: kf * (e - base) })
        })
        .collect()
}

/// Least-squares exponent of `gap ∝ α^p`.
pub fn growth_exponent(probes: &[GraphProbe]) -> Result<f64> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = probes.iter().map(|p| (p.alpha, p.gap)).unzip();
    fit_order(&xs, &ys)
}
