use std::cell::OnceCell;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::fft::FftNd;
use crate::torus_field::{FieldKind, GridSpec, ScalarField};

use super::spectrum::Spectrum;

/// Half-width of the alias lattice summed for the voxel-set kernel when more
/// than one frequency component is nonzero.
pub const VOXEL_ALIAS_RADIUS_2D: i64 = 16;
pub const VOXEL_ALIAS_RADIUS_3D: i64 = 4;

/// Frequency-domain operators on one grid.
///
/// Owns its transform plans and multiplier tables; not shareable across
/// threads while solving.
pub struct SpectralWorkspace {
    spec: GridSpec,
    fft: FftNd,
    /// `4π²|ξ|²`, Nyquist included.
    symbol: Vec<f64>,
    /// `1/(4π²|ξ|²)`, zero at `ξ = 0`.
    inverse_symbol: Vec<f64>,
    /// Per-axis `2πξ_a`, Nyquist zeroed.
    wavenumbers: Vec<Vec<f64>>,
    voxel_kernel: OnceCell<Vec<f64>>,
}

impl SpectralWorkspace {
    pub fn new(spec: &GridSpec) -> Self {
        let wavenumbers: Vec<Vec<f64>> = (0..spec.dim())
            .map(|a| {
                let n = spec.sizes()[a];
                (0..n)
                    .map(|i| {
                        let xi = spec.frequency(a, i);
                        if xi == -(n as i64) / 2 {
                            0.0
                        } else {
                            2.0 * PI * xi as f64
                        }
                    })
                    .collect()
            })
            .collect();
        let symbol: Vec<f64> = (0..spec.len())
            .map(|flat| {
                spec.unravel(flat)
                    .iter()
                    .enumerate()
                    .map(|(a, &i)| (2.0 * PI * spec.frequency(a, i) as f64).powi(2))
                    .sum()
            })
            .collect();
        let inverse_symbol = symbol.iter().map(|&s| if s == 0.0 { 0.0 } else { 1.0 / s }).collect();
        Self {
            spec: spec.clone(),
            fft: FftNd::new(spec),
            symbol,
            inverse_symbol,
            wavenumbers,
            voxel_kernel: OnceCell::new(),
        }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn symbol(&self) -> &[f64] {
        &self.symbol
    }

    pub fn inverse_symbol(&self) -> &[f64] {
        &self.inverse_symbol
    }

    /// `4π²|ξ|²` with Nyquist components removed, the symbol of `∇ᵀ∇` as
    /// realized by [`SpectralWorkspace::gradient`].
    pub fn gradient_symbol(&self) -> Vec<f64> {
        (0..self.spec.len())
            .map(|flat| {
                self.spec
                    .unravel(flat)
                    .iter()
                    .enumerate()
                    .map(|(a, &i)| self.wavenumbers[a][i].powi(2))
                    .sum()
            })
            .collect()
    }

    pub fn forward(&self, values: &[f64]) -> Vec<Complex64> {
        self.fft.forward_real(values)
    }

    pub fn inverse(&self, coeffs: Vec<Complex64>) -> Vec<f64> {
        self.fft.inverse_real(coeffs)
    }

    pub fn fft(&self) -> &FftNd {
        &self.fft
    }

    /// Zero-mean solution of `−Δv = rhs − mean(rhs)`.
    pub fn poisson_zero_mean(&self, rhs: &ScalarField) -> Result<ScalarField> {
        self.spec.check_same(rhs.spec())?;
        let coeffs: Vec<Complex64> = self
            .forward(rhs.values())
            .into_iter()
            .zip(&self.inverse_symbol)
            .map(|(c, m)| c * m)
            .collect();
        ScalarField::generic(self.spec.clone(), self.inverse(coeffs))
    }

    /// `−Δu`, all modes including Nyquist.
    pub fn neg_laplacian(&self, u: &ScalarField) -> Result<ScalarField> {
        self.spec.check_same(u.spec())?;
        let coeffs = self.forward(u.values()).into_iter().zip(&self.symbol).map(|(c, s)| c * s).collect();
        ScalarField::generic(self.spec.clone(), self.inverse(coeffs))
    }

    /// `Σ_{ξ≠0} |û(ξ)|² / (4π²|ξ|²)`, the Dirichlet energy of the potential.
    pub fn nonlocal_energy(&self, u: &ScalarField) -> Result<f64> {
        self.spec.check_same(u.spec())?;
        Ok(self.nonlocal_energy_of_coeffs(&self.forward(u.values())))
    }

    pub fn nonlocal_energy_of_coeffs(&self, coeffs: &[Complex64]) -> f64 {
        coeffs.iter().zip(&self.inverse_symbol).map(|(c, m)| c.norm_sqr() * m).sum()
    }

    /// Spectral partial derivatives, one field per axis.
    pub fn gradient(&self, u: &ScalarField) -> Result<Vec<ScalarField>> {
        self.spec.check_same(u.spec())?;
        let coeffs = self.forward(u.values());
        (0..self.spec.dim())
            .map(|a| {
                let d: Vec<Complex64> = coeffs
                    .iter()
                    .enumerate()
                    .map(|(flat, c)| {
                        let i = self.spec.unravel(flat)[a];
                        c * Complex64::new(0.0, self.wavenumbers[a][i])
                    })
                    .collect();
                ScalarField::generic(self.spec.clone(), self.inverse(d))
            })
            .collect()
    }

    /// `∫|∇u|²` from the gradient fields.
    pub fn dirichlet_energy(&self, u: &ScalarField) -> Result<f64> {
        let cell = self.spec.cell_volume();
        Ok(self
            .gradient(u)?
            .iter()
            .map(|g| g.values().iter().map(|v| v * v).sum::<f64>() * cell)
            .sum())
    }

    /// Trigonometric interpolant of a sampled field.
    pub fn spectrum(&self, u: &ScalarField) -> Result<Spectrum> {
        self.spec.check_same(u.spec())?;
        Ok(Spectrum::from_samples(&self.spec, self.forward(u.values())))
    }

    /// Trigonometric interpolant of the zero-mean potential of `u`.
    pub fn potential_spectrum(&self, u: &ScalarField) -> Result<Spectrum> {
        Ok(self.spectrum(u)?.potential())
    }

    /// Nonlocal energy of the voxel set described by an indicator field: the
    /// indicator is read as constant on each cell and the energy is that of the
    /// resulting piecewise-constant function, all alias frequencies included.
    pub fn set_nonlocal_energy(&self, u: &ScalarField) -> Result<f64> {
        self.spec.check_same(u.spec())?;
        u.require_kind(FieldKind::Indicator)?;
        let kernel = self.voxel_kernel.get_or_init(|| voxel_kernel(&self.spec));
        Ok(self.forward(u.values()).iter().zip(kernel).map(|(c, k)| c.norm_sqr() * k).sum())
    }
}

/// Per-frequency weight `Σ_j Π_a sinc²(π(s_a+j_a)) / (4π²|n∘(s+j)|²)`, `s = ξ/n`.
fn voxel_kernel(spec: &GridSpec) -> Vec<f64> {
    let dim = spec.dim();
    let radius = if dim == 3 { VOXEL_ALIAS_RADIUS_3D } else { VOXEL_ALIAS_RADIUS_2D };
    (0..spec.len())
        .map(|flat| {
            let idx = spec.unravel(flat);
            let s: Vec<f64> = (0..dim)
                .map(|a| spec.frequency(a, idx[a]) as f64 / spec.sizes()[a] as f64)
                .collect();
            let active: Vec<usize> = (0..dim).filter(|&a| s[a] != 0.0).collect();
            match active.len() {
                0 => 0.0,
                1 => {
                    let a = active[0];
                    let n = spec.sizes()[a] as f64;
                    let sn = (PI * s[a]).sin();
                    (1.0 / (sn * sn) - 2.0 / 3.0) / (4.0 * n * n)
                }
                _ => alias_sum(spec, &s, &active, radius),
            }
        })
        .collect()
}

fn alias_sum(spec: &GridSpec, s: &[f64], active: &[usize], radius: i64) -> f64 {
    let sin2: Vec<f64> = s.iter().map(|v| (PI * v).sin().powi(2)).collect();
    let span = (2 * radius + 1) as usize;
    let count = span.pow(active.len() as u32);
    let mut total = 0.0;
    for c in 0..count {
        let mut rem = c;
        let mut weight = 1.0;
        let mut freq2 = 0.0;
        for &a in active {
            let j = (rem % span) as i64 - radius;
            rem /= span;
            let t = s[a] + j as f64;
            weight *= sin2[a] / (PI * PI * t * t);
            freq2 += (spec.sizes()[a] as f64 * t).powi(2);
        }
        total += weight / (4.0 * PI * PI * freq2);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus_field::{rasterize, ShapeCandidate};

    fn cos_field(spec: &GridSpec) -> ScalarField {
        ScalarField::from_fn(spec, |x| (2.0 * PI * x[0]).cos())
    }

    #[test]
    fn constant_rhs_gives_zero_potential() {
        let g = GridSpec::cubic(2, 16).unwrap();
        let ws = SpectralWorkspace::new(&g);
        let v = ws.poisson_zero_mean(&ScalarField::constant(&g, 3.5)).unwrap();
        assert!(v.max_abs() < 1e-15);
        assert_eq!(ws.nonlocal_energy(&ScalarField::constant(&g, -1.0)).unwrap(), 0.0);
    }

    #[test]
    fn single_mode_solve() {
        let g = GridSpec::cubic(2, 32).unwrap();
        let ws = SpectralWorkspace::new(&g);
        let u = cos_field(&g);
        let v = ws.poisson_zero_mean(&u).unwrap();
        for (a, b) in v.values().iter().zip(u.values()) {
            assert!((a - b / (4.0 * PI * PI)).abs() < 1e-15);
        }
        let nl = ws.nonlocal_energy(&u).unwrap();
        assert!((nl - 1.0 / (8.0 * PI * PI)).abs() < 1e-15);
        assert!((nl - 0.012665).abs() < 1e-6);
    }

    #[test]
    fn lamella_potential_range() {
        // −v'' = ±1 on the circle: v is piecewise quadratic with range 1/16
        let g = GridSpec::new(&[512, 4]).unwrap();
        let ws = SpectralWorkspace::new(&g);
        let u = rasterize(&ShapeCandidate::lamella(0, 0.5, 0.25), &g).unwrap();
        let v = ws.poisson_zero_mean(&u).unwrap();
        let (lo, hi) = v.values().iter().fold((f64::MAX, f64::MIN), |(l, h), &x| (l.min(x), h.max(x)));
        assert!((hi - lo - 1.0 / 16.0).abs() < 1e-5, "{}", hi - lo);
        let nl = ws.nonlocal_energy(&u).unwrap();
        assert!((nl - 1.0 / 48.0).abs() < 1e-6);
    }

    #[test]
    fn gradient_of_sine() {
        let g = GridSpec::cubic(2, 16).unwrap();
        let ws = SpectralWorkspace::new(&g);
        let u = ScalarField::from_fn(&g, |x| (2.0 * PI * x[1]).sin());
        let grad = ws.gradient(&u).unwrap();
        assert!(grad[0].max_abs() < 1e-14);
        for (i, d) in grad[1].values().iter().enumerate() {
            let x = g.center(i);
            assert!((d - 2.0 * PI * (2.0 * PI * x[1]).cos()).abs() < 1e-12);
        }
        let zero = ws.gradient(&ScalarField::constant(&g, 2.0)).unwrap();
        assert!(zero.iter().all(|f| f.max_abs() < 1e-15));
    }

    #[test]
    fn voxel_kernel_exact_for_cell_aligned_lamella() {
        for sizes in [[512usize, 4], [256, 256]] {
            let g = GridSpec::new(&sizes).unwrap();
            let ws = SpectralWorkspace::new(&g);
            let u = rasterize(&ShapeCandidate::lamella(0, 0.5, 0.25), &g).unwrap();
            let nl = ws.set_nonlocal_energy(&u).unwrap();
            assert!((nl - 1.0 / 48.0).abs() < 1e-14, "{sizes:?}: {nl}");
        }
    }

    #[test]
    fn voxel_kernel_is_positive_and_close_to_trig_symbol_at_low_frequency() {
        let g = GridSpec::cubic(2, 32).unwrap();
        let ws = SpectralWorkspace::new(&g);
        let k = voxel_kernel(&g);
        assert_eq!(k[0], 0.0);
        for (flat, (&kv, &m)) in k.iter().zip(ws.inverse_symbol()).enumerate().skip(1) {
            assert!(kv > 0.0, "{flat}");
            let idx = g.unravel(flat);
            if idx.iter().enumerate().all(|(a, &i)| g.frequency(a, i).abs() <= 2) {
                assert!((kv / m - 1.0).abs() < 0.03, "{idx:?} {kv} {m}");
            }
        }
    }
}
