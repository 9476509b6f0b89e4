//! Multidimensional complex FFT over row-major grids.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::torus_field::GridSpec;

pub struct FftNd {
    spec: GridSpec,
    forward: Vec<Arc<dyn Fft<f64>>>,
    inverse: Vec<Arc<dyn Fft<f64>>>,
}

impl FftNd {
    pub fn new(spec: &GridSpec) -> Self {
        let mut planner = FftPlanner::new();
        let forward = spec.sizes().iter().map(|&n| planner.plan_fft_forward(n)).collect();
        let inverse = spec.sizes().iter().map(|&n| planner.plan_fft_inverse(n)).collect();
        Self { spec: spec.clone(), forward, inverse }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    /// Fourier coefficients `(1/N) Σ u_j e^{-2πi ξ·j/n}`.
    pub fn forward_real(&self, values: &[f64]) -> Vec<Complex64> {
        let mut data: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward_in_place(&mut data);
        data
    }

    pub fn forward_in_place(&self, data: &mut [Complex64]) {
        self.transform(data, &self.forward);
        let scale = 1.0 / data.len() as f64;
        data.iter_mut().for_each(|c| *c *= scale);
    }

    /// Inverse of [`FftNd::forward_in_place`].
    pub fn inverse_in_place(&self, data: &mut [Complex64]) {
        self.transform(data, &self.inverse);
    }

    pub fn inverse_real(&self, mut coeffs: Vec<Complex64>) -> Vec<f64> {
        self.inverse_in_place(&mut coeffs);
        coeffs.into_iter().map(|c| c.re).collect()
    }

    fn transform(&self, data: &mut [Complex64], plans: &[Arc<dyn Fft<f64>>]) {
        assert_eq!(data.len(), self.spec.len());
        let strides = self.spec.strides();
        let sizes = self.spec.sizes();
        for axis in 0..self.spec.dim() {
            let n = sizes[axis];
            let stride = strides[axis];
            let plan = &plans[axis];
            if stride == 1 {
                plan.process(data);
                continue;
            }
            let block = n * stride;
            let mut line = vec![Complex64::new(0.0, 0.0); n];
            let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
            for base in (0..data.len()).step_by(block) {
                for offset in 0..stride {
                    let start = base + offset;
                    for (j, l) in line.iter_mut().enumerate() {
                        *l = data[start + j * stride];
                    }
                    plan.process_with_scratch(&mut line, &mut scratch);
                    for (j, l) in line.iter().enumerate() {
                        data[start + j * stride] = *l;
                    }
                }
            }
        }
    }
}
