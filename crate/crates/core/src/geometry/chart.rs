use std::f64::consts::PI;

/// Fourier differentiation matrix for `n` (even) equispaced samples of a
/// function with period `period`; the Nyquist mode is differentiated to 0.
pub fn periodic_diff_matrix(n: usize, period: f64) -> Vec<f64> {
    let h = 2.0 * PI / n as f64;
    let scale = 2.0 * PI / period;
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let k = i as i64 - j as i64;
                let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                d[i * n + j] = scale * 0.5 * sign / (0.5 * k as f64 * h).tan();
            }
        }
    }
    d
}

/// `−d²/dx²` on `n` (even) equispaced samples of period `period`, with the
/// Nyquist mode kept at symbol `(πn/period)²`.
pub fn periodic_stiffness_matrix(n: usize, period: f64) -> Vec<f64> {
    let h = 2.0 * PI / n as f64;
    let scale = (2.0 * PI / period).powi(2);
    let mut k = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            k[i * n + j] = scale
                * if i == j {
                    PI * PI / (3.0 * h * h) + 1.0 / 6.0
                } else {
                    let d = i as i64 - j as i64;
                    let sign = if d.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                    0.5 * sign / (0.5 * d as f64 * h).sin().powi(2)
                };
        }
    }
    k
}

/// Applies an `n × n` row-major matrix to `len` strided lines of `values`.
pub fn apply_along(matrix: &[f64], n: usize, values: &[f64], start: usize, stride: usize, out: &mut [f64]) {
    for i in 0..n {
        let row = &matrix[i * n..(i + 1) * n];
        out[start + i * stride] = row.iter().enumerate().map(|(j, m)| m * values[start + j * stride]).sum();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn differentiates_trig_polynomials() {
        let n = 16;
        let d = periodic_diff_matrix(n, 2.0);
        let x: Vec<f64> = (0..n).map(|i| 2.0 * i as f64 / n as f64).collect();
        let f: Vec<f64> = x.iter().map(|t| (3.0 * PI * t).sin() + (PI * t).cos()).collect();
        let mut out = vec![0.0; n];
        apply_along(&d, n, &f, 0, 1, &mut out);
        for (o, t) in out.iter().zip(&x) {
            let exact = 3.0 * PI * (3.0 * PI * t).cos() - PI * (PI * t).sin();
            assert!((o - exact).abs() < 1e-12);
        }
        // constants and the Nyquist mode are annihilated
        let nyq: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        apply_along(&d, n, &nyq, 0, 1, &mut out);
        assert!(out.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn stiffness_symbol() {
        let n = 8;
        let k = periodic_stiffness_matrix(n, 1.0);
        let apply = |f: &[f64]| -> Vec<f64> {
            let mut out = vec![0.0; n];
            apply_along(&k, n, f, 0, 1, &mut out);
            out
        };
        let c: Vec<f64> = (0..n).map(|i| (2.0 * PI * 3.0 * i as f64 / n as f64).cos()).collect();
        for (a, b) in apply(&c).iter().zip(&c) {
            assert!((a - 36.0 * PI * PI * b).abs() < 1e-10);
        }
        let nyq: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        for (a, b) in apply(&nyq).iter().zip(&nyq) {
            assert!((a - 64.0 * PI * PI * b).abs() < 1e-9);
        }
        assert!(apply(&[1.0; 8]).iter().all(|v| v.abs() < 1e-10));
    }
}
