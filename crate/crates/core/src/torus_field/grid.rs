use crate::error::{Error, Result};

/// Largest number of samples a grid may hold unless raised explicitly.
pub const DEFAULT_SAMPLE_BUDGET: usize = 1 << 26;

/// Uniform periodic sampling of the unit torus `[0,1)^dim`.
///
/// Samples sit at cell centers `(i + 1/2) / n_a`; storage is row-major with
/// the last axis fastest.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GridSpec {
    sizes: Vec<usize>,
}

impl GridSpec {
    pub fn new(sizes: &[usize]) -> Result<Self> {
        Self::with_budget(sizes, DEFAULT_SAMPLE_BUDGET)
    }

    pub fn with_budget(sizes: &[usize], budget: usize) -> Result<Self> {
        if sizes.is_empty() || sizes.len() > 3 {
            return Err(Error::Grid(format!("dimension {} not in 1..=3", sizes.len())));
        }
        let mut total: usize = 1;
        for (axis, &n) in sizes.iter().enumerate() {
            if n < 4 || n % 2 != 0 {
                return Err(Error::Grid(format!(
                    "axis {axis} has {n} samples; need an even count >= 4"
                )));
            }
            total = total
                .checked_mul(n)
                .filter(|&t| t <= budget)
                .ok_or_else(|| Error::Grid(format!("sample count exceeds budget {budget}")))?;
        }
        Ok(Self { sizes: sizes.to_vec() })
    }

    /// Cubic grid with `n` samples along each of `dim` axes.
    pub fn cubic(dim: usize, n: usize) -> Result<Self> {
        Self::new(&vec![n; dim])
    }

    pub fn dim(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn len(&self) -> usize {
        self.sizes.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        1.0 / self.sizes[axis] as f64
    }

    /// Smallest spacing over all axes.
    pub fn min_spacing(&self) -> f64 {
        1.0 / *self.sizes.iter().max().unwrap() as f64
    }

    pub fn cell_volume(&self) -> f64 {
        1.0 / self.len() as f64
    }

    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dim()];
        for a in (0..self.dim().saturating_sub(1)).rev() {
            strides[a] = strides[a + 1] * self.sizes[a + 1];
        }
        strides
    }

    pub fn unravel(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for a in (0..self.dim()).rev() {
            idx[a] = flat % self.sizes[a];
            flat /= self.sizes[a];
        }
        idx
    }

    pub fn ravel(&self, idx: &[usize]) -> usize {
        idx.iter()
            .zip(&self.sizes)
            .fold(0, |acc, (&i, &n)| acc * n + (i % n))
    }

    /// Cell-center coordinates of a flat index.
    pub fn center(&self, flat: usize) -> Vec<f64> {
        self.unravel(flat)
            .iter()
            .zip(&self.sizes)
            .map(|(&i, &n)| (i as f64 + 0.5) / n as f64)
            .collect()
    }

    /// Signed integer frequency of index `i` along `axis`, in `[-n/2, n/2 - 1]`.
    pub fn frequency(&self, axis: usize, i: usize) -> i64 {
        let n = self.sizes[axis] as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// Grid with every axis divided by `k`.
    pub fn coarsened(&self, k: usize) -> Result<Self> {
        if k == 0 || self.sizes.iter().any(|n| n % k != 0) {
            return Err(Error::Grid(format!("{k} does not divide sizes {:?}", self.sizes)));
        }
        Self::new(&self.sizes.iter().map(|n| n / k).collect::<Vec<_>>())
    }

    pub fn check_same(&self, other: &GridSpec) -> Result<()> {
        if self != other {
            return Err(Error::GridMismatch(format!("{:?} vs {:?}", self.sizes, other.sizes)));
        }
        Ok(())
    }
}

/// Minimum-image displacement on the unit circle, in `[-1/2, 1/2)`.
pub fn wrap_delta(d: f64) -> f64 {
    d - (d + 0.5).floor()
}
