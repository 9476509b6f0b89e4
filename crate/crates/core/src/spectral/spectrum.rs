use std::f64::consts::PI;

use num_complex::Complex64;

use crate::torus_field::GridSpec;

/// Band-limited periodic function `Σ_ξ c_ξ e^{2πiξ·(x − o)}` with coefficients in
/// FFT layout over `band`. Nyquist modes contribute as cosines and carry no
/// derivative.
#[derive(Clone, Debug)]
pub struct Spectrum {
    band: GridSpec,
    coeffs: Vec<Complex64>,
    origin: Vec<f64>,
}

impl Spectrum {
    /// Interpolant of cell-centred samples; `coeffs` are the normalized DFT.
    pub fn from_samples(spec: &GridSpec, coeffs: Vec<Complex64>) -> Self {
        let origin = (0..spec.dim()).map(|a| 0.5 * spec.spacing(a)).collect();
        Self::with_origin(spec, coeffs, origin)
    }

    /// Truncated Fourier series with exact coefficients `∫u e^{−2πiξ·x}`.
    pub fn from_coefficients(band: &GridSpec, coeffs: Vec<Complex64>) -> Self {
        Self::with_origin(band, coeffs, vec![0.0; band.dim()])
    }

    fn with_origin(band: &GridSpec, coeffs: Vec<Complex64>, origin: Vec<f64>) -> Self {
        assert_eq!(coeffs.len(), band.len(), "coefficient count must match band");
        Self { band: band.clone(), coeffs, origin }
    }

    pub fn band(&self) -> &GridSpec {
        &self.band
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    /// Zero-mean solution of `−Δv = u − mean(u)`.
    pub fn potential(&self) -> Spectrum {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(flat, c)| {
                let s = self.symbol(flat);
                if s == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    c / s
                }
            })
            .collect();
        Spectrum { band: self.band.clone(), coeffs, origin: self.origin.clone() }
    }

    /// `Σ_{ξ≠0} |c_ξ|²/(4π²|ξ|²)`.
    pub fn nonlocal_energy(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(flat, c)| c.norm_sqr() / self.symbol(flat))
            .sum()
    }

    fn symbol(&self, flat: usize) -> f64 {
        let idx = self.band.unravel(flat);
        idx.iter()
            .enumerate()
            .map(|(a, &i)| (2.0 * PI * self.band.frequency(a, i) as f64).powi(2))
            .sum()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.eval_with_gradient(x, false).0
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        self.eval_with_gradient(x, true).1
    }

    /// Value and (optionally) gradient at `x`, one pass over the band.
    pub fn eval_with_gradient(&self, x: &[f64], with_gradient: bool) -> (f64, Vec<f64>) {
        let dim = self.band.dim();
        assert_eq!(x.len(), dim, "point dimension must match band");
        let mut phase: [Vec<Complex64>; 3] = Default::default();
        let mut wave: [Vec<f64>; 3] = Default::default();
        for a in 0..3 {
            if a >= dim {
                phase[a] = vec![Complex64::new(1.0, 0.0)];
                wave[a] = vec![0.0];
                continue;
            }
            let n = self.band.sizes()[a];
            let t = x[a] - self.origin[a];
            phase[a] = (0..n)
                .map(|i| {
                    let xi = self.band.frequency(a, i);
                    if n > 1 && xi == -(n as i64) / 2 {
                        Complex64::new((2.0 * PI * xi as f64 * t).cos(), 0.0)
                    } else {
                        Complex64::from_polar(1.0, 2.0 * PI * xi as f64 * t)
                    }
                })
                .collect();
            wave[a] = (0..n)
                .map(|i| {
                    let xi = self.band.frequency(a, i);
                    if xi == -(n as i64) / 2 {
                        0.0
                    } else {
                        2.0 * PI * xi as f64
                    }
                })
                .collect();
        }
        let mut value = Complex64::new(0.0, 0.0);
        let mut grad = [Complex64::new(0.0, 0.0); 3];
        let mut flat = 0;
        for i0 in 0..phase[0].len() {
            for i1 in 0..phase[1].len() {
                let p01 = phase[0][i0] * phase[1][i1];
                for i2 in 0..phase[2].len() {
                    let term = self.coeffs[flat] * p01 * phase[2][i2];
                    flat += 1;
                    value += term;
                    if with_gradient {
                        let it = Complex64::new(-term.im, term.re);
                        grad[0] += it * wave[0][i0];
                        grad[1] += it * wave[1][i1];
                        grad[2] += it * wave[2][i2];
                    }
                }
            }
        }
        let g = if with_gradient { grad[..dim].iter().map(|c| c.re).collect() } else { Vec::new() };
        (value.re, g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::SpectralWorkspace;
    use crate::torus_field::ScalarField;

    #[test]
    fn sample_interpolant_reproduces_samples_and_trig_polynomials() {
        let g = GridSpec::new(&[16, 8]).unwrap();
        let f = |x: &[f64]| (2.0 * PI * (3.0 * x[0] - x[1])).sin() + 0.5 * (2.0 * PI * 2.0 * x[1]).cos();
        let u = ScalarField::from_fn(&g, f);
        let ws = SpectralWorkspace::new(&g);
        let s = ws.spectrum(&u).unwrap();
        for i in [0, 5, 77, 127] {
            assert!((s.eval(&g.center(i)) - u.values()[i]).abs() < 1e-13);
        }
        let x = [0.123, 0.777];
        assert!((s.eval(&x) - f(&x)).abs() < 1e-13);
        let gr = s.gradient(&x);
        let arg = 2.0 * PI * (3.0 * x[0] - x[1]);
        assert!((gr[0] - 6.0 * PI * arg.cos()).abs() < 1e-11);
        let dy = -2.0 * PI * arg.cos() - 0.5 * 4.0 * PI * (4.0 * PI * x[1]).sin();
        assert!((gr[1] - dy).abs() < 1e-11);
    }

    #[test]
    fn potential_matches_grid_solve() {
        let g = GridSpec::cubic(2, 16).unwrap();
        let u = ScalarField::from_fn(&g, |x| (2.0 * PI * x[0]).cos() * (2.0 * PI * x[1]).sin() + 0.3);
        let ws = SpectralWorkspace::new(&g);
        let v = ws.poisson_zero_mean(&u).unwrap();
        let vs = ws.potential_spectrum(&u).unwrap();
        for i in [0, 17, 200] {
            assert!((vs.eval(&g.center(i)) - v.values()[i]).abs() < 1e-14);
        }
        assert!((vs.mean()).abs() < 1e-16);
        let nl = ws.spectrum(&u).unwrap().nonlocal_energy();
        assert!((nl - ws.nonlocal_energy(&u).unwrap()).abs() < 1e-15);
        // cos·sin with |ξ|² = 2 has energy 1/4 · 1/(8π²)
        assert!((nl - 1.0 / (32.0 * PI * PI)).abs() < 1e-15);
    }
}
