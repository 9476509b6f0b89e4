use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Largest γ searched by the threshold routines.
pub const GAMMA_MAX: f64 = 1e4;

/// Periodic Green function of `−d²/dx² + κ²` on the unit circle at
/// separation `d ∈ [0, 1]`, `cosh(κ(d−½)) / (2κ sinh(κ/2))`.
pub fn screened_green(kappa: f64, d: f64) -> f64 {
    let d = d.rem_euclid(1.0);
    ((kappa * (d - 1.0)).exp() + (-kappa * d).exp()) / (2.0 * kappa * (1.0 - (-kappa).exp()))
}

/// Zero-mean periodic Green function of `−d²/dx²` at separation `d`.
pub fn circle_green(d: f64) -> f64 {
    let d = d.rem_euclid(1.0);
    0.5 * (d * d - d) + 1.0 / 12.0
}

/// Second variation of a lamella restricted to `(a₊, a₋) cos(2πq·x')` on the
/// (upper, lower) interfaces.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeMatrix {
    pub q: Vec<i64>,
    pub gamma: f64,
    pub halfwidth: f64,
    pub entries: [[f64; 2]; 2],
    /// `∫cos²` over one interface: ½ for `q ≠ 0`, 1 in the constant sector.
    pub area_factor: f64,
}

impl ModeMatrix {
    pub fn eigenvalues(&self) -> [f64; 2] {
        let [[a, b], [_, d]] = self.entries;
        let mean = 0.5 * (a + d);
        let rad = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        [mean - rad, mean + rad]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn form(&self, a: [f64; 2]) -> f64 {
        let m = self.entries;
        a[0] * a[0] * m[0][0] + 2.0 * a[0] * a[1] * m[0][1] + a[1] * a[1] * m[1][1]
    }

    fn q_norm_sq(&self) -> f64 {
        self.q.iter().map(|&v| (v * v) as f64).sum()
    }

    /// Smallest eigenvalue relative to the `H¹` norm of the mode.
    pub fn h1_min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue() / (self.area_factor * (4.0 * PI * PI * self.q_norm_sq() + 1.0))
    }
}

fn check_halfwidth(w: f64) -> Result<()> {
    if !(w > 0.0 && w < 0.5) {
        return Err(Error::Invalid(format!("halfwidth must lie in (0, 1/2), got {w}")));
    }
    Ok(())
}

/// Closed-form [`ModeMatrix`] for `q ≠ 0`.
///
/// With `m = 4w − 1`, `∂_νv = −2w(1−2w)` on both interfaces and the Green
/// couplings are `g_κ(0)` and `g_κ(2w)`, `κ = 2π|q|`.
pub fn lamella_mode_matrix(q: &[i64], gamma: f64, w: f64) -> Result<ModeMatrix> {
    check_halfwidth(w)?;
    if q.iter().all(|&v| v == 0) {
        return Err(Error::Invalid("q = 0 is the constant sector; use lamella_constant_sector".into()));
    }
    let q2: f64 = q.iter().map(|&v| (v * v) as f64).sum();
    let kappa = 2.0 * PI * q2.sqrt();
    let diag = 0.5 * (4.0 * PI * PI * q2 - 8.0 * gamma * w * (1.0 - 2.0 * w) + 8.0 * gamma * screened_green(kappa, 0.0));
    let off = 0.5 * 8.0 * gamma * screened_green(kappa, 2.0 * w);
    Ok(ModeMatrix { q: q.to_vec(), gamma, halfwidth: w, entries: [[diag, off], [off, diag]], area_factor: 0.5 })
}

/// The `q = 0` sector: constants on each interface. Only `(1, −1)` has zero
/// mean, and it is the translation `ν·e₁`, for which the form vanishes.
pub fn lamella_constant_sector(gamma: f64, w: f64) -> Result<ModeMatrix> {
    check_halfwidth(w)?;
    let diag = -8.0 * gamma * w * (1.0 - 2.0 * w) + 8.0 * gamma * circle_green(0.0);
    let off = 8.0 * gamma * circle_green(2.0 * w);
    Ok(ModeMatrix { q: vec![0], gamma, halfwidth: w, entries: [[diag, off], [off, diag]], area_factor: 1.0 })
}

/// `min_{1≤q≤q_max}` of the `H¹`-normalized smallest mode eigenvalue of a
/// lamella in two dimensions.
pub fn lamella_mode_scan(gamma: f64, w: f64, q_max: i64) -> Result<f64> {
    (1..=q_max.max(1))
        .map(|q| lamella_mode_matrix(&[q], gamma, w).map(|m| m.h1_min_eigenvalue()))
        .try_fold(f64::INFINITY, |acc, v| v.map(|v| acc.min(v)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThresholdStatus {
    Found,
    /// No sign change below [`GAMMA_MAX`].
    Open,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdReport {
    pub halfwidth: f64,
    pub gamma_star: f64,
    /// Mode with the lowest crossing.
    pub q_star: i64,
    pub status: ThresholdStatus,
}

/// Bisection to `tol` for the first sign change of `f` on `[lo, hi]`,
/// assuming `f(lo) > 0`.
pub fn bisect_sign_change(mut f: impl FnMut(f64) -> Result<f64>, mut lo: f64, mut hi: f64, tol: f64) -> Result<Option<f64>> {
    if f(hi)? > 0.0 {
        return Ok(None);
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// Smallest γ at which some `q ∈ {1..q_max}` mode of the lamella of
/// half-width `w` loses positivity, to 1e-6. The constant sector only holds
/// the translation and is left out.
pub fn lamella_threshold(w: f64, q_max: i64) -> Result<ThresholdReport> {
    check_halfwidth(w)?;
    let f = |g: f64| lamella_mode_scan(g, w, q_max);
    match bisect_sign_change(f, 0.0, GAMMA_MAX, 1e-6)? {
        None => Ok(ThresholdReport { halfwidth: w, gamma_star: f64::INFINITY, q_star: 0, status: ThresholdStatus::Open }),
        Some(g) => {
            let q_star = (1..=q_max.max(1))
                .min_by(|&a, &b| {
                    let ea = lamella_mode_matrix(&[a], g, w).unwrap().h1_min_eigenvalue();
                    let eb = lamella_mode_matrix(&[b], g, w).unwrap().h1_min_eigenvalue();
                    ea.total_cmp(&eb)
                })
                .unwrap_or(1);
            Ok(ThresholdReport { halfwidth: w, gamma_star: g, q_star, status: ThresholdStatus::Found })
        }
    }
}

pub const THRESHOLD_CSV_HEADER: &str = "w,gamma,min_eig";
