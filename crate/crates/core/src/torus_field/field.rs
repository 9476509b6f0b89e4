use crate::error::{Error, Result};

use super::grid::GridSpec;

/// Overshoot allowed beyond `[-1, 1]` for phase fields.
pub const PHASE_OVERSHOOT: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Generic,
    /// Every value is exactly `-1` or `+1`.
    Indicator,
    /// Values in `[-1 - PHASE_OVERSHOOT, 1 + PHASE_OVERSHOOT]`.
    Phase,
}

impl FieldKind {
    pub fn code(self) -> u8 {
        match self {
            FieldKind::Generic => 0,
            FieldKind::Indicator => 1,
            FieldKind::Phase => 2,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(FieldKind::Generic),
            1 => Some(FieldKind::Indicator),
            2 => Some(FieldKind::Phase),
            _ => None,
        }
    }

    fn admits(self, value: f64) -> bool {
        match self {
            FieldKind::Generic => value.is_finite(),
            FieldKind::Indicator => value == 1.0 || value == -1.0,
            FieldKind::Phase => value.abs() <= 1.0 + PHASE_OVERSHOOT,
        }
    }
}

/// Samples of a real function on a [`GridSpec`].
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    spec: GridSpec,
    values: Vec<f64>,
    kind: FieldKind,
}

impl ScalarField {
    pub fn new(spec: GridSpec, values: Vec<f64>, kind: FieldKind) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::Field(format!(
                "{} values for a grid of {} samples",
                values.len(),
                spec.len()
            )));
        }
        if let Some(bad) = values.iter().find(|&&v| !kind.admits(v)) {
            return Err(Error::Field(format!("value {bad} not admissible for {kind:?} field")));
        }
        Ok(Self { spec, values, kind })
    }

    pub fn generic(spec: GridSpec, values: Vec<f64>) -> Result<Self> {
        Self::new(spec, values, FieldKind::Generic)
    }

    pub fn from_fn(spec: &GridSpec, f: impl Fn(&[f64]) -> f64) -> Self {
        let values = (0..spec.len()).map(|i| f(&spec.center(i))).collect();
        Self { spec: spec.clone(), values, kind: FieldKind::Generic }
    }

    pub fn constant(spec: &GridSpec, c: f64) -> Self {
        Self { spec: spec.clone(), values: vec![c; spec.len()], kind: FieldKind::Generic }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    /// Relabels the field, validating the values against the new kind.
    pub fn with_kind(self, kind: FieldKind) -> Result<Self> {
        Self::new(self.spec, self.values, kind)
    }

    pub fn require_kind(&self, kind: FieldKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::Field(format!("expected {kind:?} field, got {:?}", self.kind)));
        }
        Ok(())
    }

    /// Spatial mean, equal to the integral over the unit torus.
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `L¹` distance to another field on the same grid.
    pub fn l1_distance(&self, other: &ScalarField) -> Result<f64> {
        self.spec.check_same(&other.spec)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            * self.spec.cell_volume())
    }

    /// Samples `E^k = {x : kx ∈ E}` on the same grid: `out[i] = in[k·i mod n]`.
    pub fn tile(&self, k: usize) -> Result<ScalarField> {
        if k == 0 || self.spec.sizes().iter().any(|n| n % k != 0) {
            return Err(Error::Invalid(format!(
                "tiling factor {k} does not divide grid sizes {:?}",
                self.spec.sizes()
            )));
        }
        let values = (0..self.spec.len())
            .map(|flat| {
                let idx: Vec<usize> = self.spec.unravel(flat).iter().map(|i| i * k).collect();
                self.values[self.spec.ravel(&idx)]
            })
            .collect();
        Ok(Self { spec: self.spec.clone(), values, kind: self.kind })
    }

    /// The samples read by [`ScalarField::tile`], as a field on the coarsened grid.
    pub fn subsample(&self, k: usize) -> Result<ScalarField> {
        let coarse = self.spec.coarsened(k)?;
        let values = (0..coarse.len())
            .map(|flat| {
                let idx: Vec<usize> = coarse.unravel(flat).iter().map(|i| i * k).collect();
                self.values[self.spec.ravel(&idx)]
            })
            .collect();
        Ok(Self { spec: coarse, values, kind: self.kind })
    }

    /// Circular shift by whole cells.
    pub fn shifted(&self, by: &[i64]) -> ScalarField {
        let values = (0..self.spec.len())
            .map(|flat| {
                let idx: Vec<usize> = self
                    .spec
                    .unravel(flat)
                    .iter()
                    .zip(by)
                    .zip(self.spec.sizes())
                    .map(|((&i, &s), &n)| (i as i64 - s).rem_euclid(n as i64) as usize)
                    .collect();
                self.values[self.spec.ravel(&idx)]
            })
            .collect();
        Self { spec: self.spec.clone(), values, kind: self.kind }
    }
}
