use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::torus_field::GridSpec;

/// Per-point, per-axis phases `e^{−2πiξ_a x_a}` over the band.
fn axis_phases(band: &GridSpec, x: &[f64]) -> Vec<Vec<Complex64>> {
    (0..band.dim())
        .map(|a| {
            (0..band.sizes()[a])
                .map(|i| Complex64::from_polar(1.0, -2.0 * PI * band.frequency(a, i) as f64 * x[a]))
                .collect()
        })
        .collect()
}

/// `Σ_i m_i e^{−2πiξ·x_i}` for every `ξ` in `band`: the Fourier coefficients
/// of the discrete measure with masses `m_i` at `x_i`.
pub fn measure_transform(band: &GridSpec, points: &[Vec<f64>], masses: &[f64]) -> Vec<Complex64> {
    assert_eq!(points.len(), masses.len(), "one mass per point");
    let mut out = vec![Complex64::new(0.0, 0.0); band.len()];
    let strides = band.strides();
    for (x, &m) in points.iter().zip(masses) {
        if m == 0.0 {
            continue;
        }
        let ph = axis_phases(band, x);
        accumulate(&ph, &strides, 0, 0, Complex64::new(m, 0.0), &mut out);
    }
    out
}

fn accumulate(ph: &[Vec<Complex64>], strides: &[usize], axis: usize, base: usize, acc: Complex64, out: &mut [Complex64]) {
    if axis + 1 == ph.len() {
        for (i, p) in ph[axis].iter().enumerate() {
            out[base + i * strides[axis]] += acc * p;
        }
        return;
    }
    for (i, p) in ph[axis].iter().enumerate() {
        accumulate(ph, strides, axis + 1, base + i * strides[axis], acc * p, out);
    }
}

/// `Σ_{ξ≠0} |μ̂(ξ)|²/(4π²|ξ|²)` over the band, i.e. `∫∫G dμ dμ` truncated.
pub fn measure_green_energy(band: &GridSpec, points: &[Vec<f64>], masses: &[f64]) -> f64 {
    let mu = measure_transform(band, points, masses);
    mu.iter()
        .enumerate()
        .skip(1)
        .map(|(flat, c)| c.norm_sqr() / band_symbol(band, flat))
        .sum()
}

fn band_symbol(band: &GridSpec, flat: usize) -> f64 {
    band.unravel(flat)
        .iter()
        .enumerate()
        .map(|(a, &i)| (2.0 * PI * band.frequency(a, i) as f64).powi(2))
        .sum()
}

/// Matrix `K_ij = w_i w_j G_band(x_i − x_j)` so that `mᵀK m/(w w)` reproduces
/// [`measure_green_energy`] for masses `m_i = w_i φ_i`.
pub fn green_matrix(band: &GridSpec, points: &[Vec<f64>], weights: &[f64]) -> DMatrix<f64> {
    const CHUNK: usize = 2048;
    let n = points.len();
    let phases: Vec<Vec<Vec<Complex64>>> = points.iter().map(|x| axis_phases(band, x)).collect();
    let mut k = DMatrix::<f64>::zeros(n, n);
    let freqs: Vec<usize> = (1..band.len()).collect();
    for chunk in freqs.chunks(CHUNK) {
        let mut r = DMatrix::<f64>::zeros(2 * chunk.len(), n);
        for (row, &flat) in chunk.iter().enumerate() {
            let idx = band.unravel(flat);
            let scale = 1.0 / band_symbol(band, flat).sqrt();
            for p in 0..n {
                let mut e = Complex64::new(weights[p] * scale, 0.0);
                for (a, &i) in idx.iter().enumerate() {
                    e *= phases[p][a][i];
                }
                r[(2 * row, p)] = e.re;
                r[(2 * row + 1, p)] = e.im;
            }
        }
        k.gemm_tr(1.0, &r, &r, 1.0);
    }
    k
}
