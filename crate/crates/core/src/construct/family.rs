use std::f64::consts::PI;

use crate::diffuse_ok::{diffuse_el_residual, minimize_with, FlowConfig, FlowStatus, SIGMA};
use crate::error::{Error, Result};
use crate::spectral::SpectralWorkspace;
use crate::torus_field::{alpha_distance, tanh_profile, FieldKind, GridSpec, ScalarField, ShapeCandidate};

/// Settings shared by every member of a continuation family.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyConfig {
    /// Flow template; its `gamma` is replaced by `σγ` for each member.
    pub flow: FlowConfig,
    /// Amplitude of the bending kick added before each warm start.
    pub perturbation: f64,
    /// Largest accepted `α` between neighbouring members.
    pub escape_distance: f64,
}

impl FamilyConfig {
    pub fn new(flow: FlowConfig) -> Self {
        Self { flow, perturbation: 1e-2, escape_distance: 0.05 }
    }

    pub fn validate(&self) -> Result<()> {
        self.flow.validate()?;
        if !(self.perturbation >= 0.0) || !self.perturbation.is_finite() {
            return Err(Error::Invalid("perturbation must be finite and nonnegative".into()));
        }
        if !(self.escape_distance > 0.0) {
            return Err(Error::Invalid("escape_distance must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct FamilyMember {
    /// Sharp `γ`; the flow ran at `σγ`.
    pub gamma: f64,
    /// Relaxed phase field.
    pub field: ScalarField,
    /// Sharpened indicator at the volume of the seed profile.
    pub set: ScalarField,
    pub energy: f64,
    pub flow_status: FlowStatus,
    pub steps: usize,
    /// `α` to the previous member, or to the seed raster for the first one.
    pub alpha_prev: f64,
    /// Sup of the diffuse Euler–Lagrange residual.
    pub residual_sup: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FamilyStatus {
    Complete,
    /// The flow gave up at this `γ`.
    Stalled { gamma: f64 },
    /// The member at this `γ` jumped away from its predecessor.
    Escaped { gamma: f64, alpha: f64 },
}

impl FamilyStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Complete => "complete",
            Self::Stalled { .. } => "stalled",
            Self::Escaped { .. } => "escaped",
        }
    }

    pub fn is_complete(&self) -> bool {
        matches!(self, Self::Complete)
    }
}

/// Accepted members in increasing `γ`, and why the walk stopped.
#[derive(Clone, Debug)]
pub struct Family {
    pub members: Vec<FamilyMember>,
    pub status: FamilyStatus,
}

impl Family {
    pub const CSV_HEADER: &'static str = "gamma,energy,alpha_prev,residual_sup,steps,flow_status";

    pub fn to_csv(&self) -> String {
        let mut out = format!("{}\n", Self::CSV_HEADER);
        for m in &self.members {
            out.push_str(&format!(
                "{:.17e},{:.17e},{:.17e},{:.17e},{},{}\n",
                m.gamma,
                m.energy,
                m.alpha_prev,
                m.residual_sup,
                m.steps,
                m.flow_status.as_str()
            ));
        }
        out
    }

    pub fn last(&self) -> Option<&FamilyMember> {
        self.members.last()
    }
}

/// Thresholds `u` into an indicator with exactly `target` cells inside.
///
/// The level starts at 0 and is moved only when that misses the target by
/// more than one cell.
pub fn sharpen(u: &ScalarField, target: usize) -> Result<ScalarField> {
    let n = u.values().len();
    if target > n {
        return Err(Error::Invalid(format!("target volume {target} exceeds {n} cells")));
    }
    let inside = u.values().iter().filter(|&&x| x > 0.0).count();
    let level = if inside.abs_diff(target) <= 1 {
        0.0
    } else {
        let mut sorted = u.values().to_vec();
        sorted.sort_by(|a, b| b.total_cmp(a));
        match target {
            0 => sorted[0],
            t if t == n => sorted[n - 1] - 1.0,
            t => 0.5 * (sorted[t - 1] + sorted[t]),
        }
    };
    let values = u.values().iter().map(|&x| if x > level { 1.0 } else { -1.0 }).collect();
    ScalarField::new(u.spec().clone(), values, FieldKind::Indicator)
}

/// Cell count inside `{u > 0}` implied by the mass of `u`.
pub fn target_cells(u: &ScalarField) -> usize {
    let n = u.values().len() as f64;
    (n * (1.0 + u.mean()) / 2.0).round() as usize
}

/// `δ Σ_a ∂_a u · cos(2π x_{a+1})`: a bending kick with zero mass.
fn bending_kick(u: &ScalarField, delta: f64, ws: &SpectralWorkspace) -> Result<ScalarField> {
    if delta == 0.0 {
        return Ok(u.clone());
    }
    let spec = u.spec();
    let dim = spec.dim();
    let grads = ws.gradient(u)?;
    let values = (0..spec.len())
        .map(|i| {
            let x = spec.center(i);
            let kick: f64 = (0..dim).map(|a| grads[a].values()[i] * (2.0 * PI * x[(a + 1) % dim]).cos()).sum();
            u.values()[i] + delta * kick
        })
        .collect();
    ScalarField::new(spec.clone(), values, FieldKind::Phase)
}

/// Walks `γ` through `gammas` (sharp units, increasing from 0), warm-starting
/// each flow from the previous member plus a small bending kick.
pub fn continue_family(seed: &ShapeCandidate, spec: &GridSpec, gammas: &[f64], cfg: &FamilyConfig) -> Result<Family> {
    cfg.validate()?;
    if gammas.is_empty() || gammas[0] != 0.0 || gammas.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Invalid("gamma list must start at 0 and increase".into()));
    }
    let ws = SpectralWorkspace::new(spec);
    let start = tanh_profile(seed, spec, cfg.flow.eps)?;
    let target = target_cells(&start);
    let mut previous = sharpen(&start, target)?;
    let mut field = start;
    let mut members = Vec::with_capacity(gammas.len());
    for &gamma in gammas {
        let flow = FlowConfig { gamma: SIGMA * gamma, ..cfg.flow.clone() };
        let kicked = bending_kick(&field, cfg.perturbation, &ws)?;
        let trace = minimize_with(&kicked, &flow, &ws, |_, _| {})?;
        if trace.status == FlowStatus::Stalled {
            return Ok(Family { members, status: FamilyStatus::Stalled { gamma } });
        }
        let set = sharpen(&trace.final_field, target)?;
        let alpha = alpha_distance(&set, &previous)?.distance;
        if alpha > cfg.escape_distance {
            return Ok(Family { members, status: FamilyStatus::Escaped { gamma, alpha } });
        }
        let residual = diffuse_el_residual(&trace.final_field, flow.eps, flow.gamma, &ws)?;
        members.push(FamilyMember {
            gamma,
            energy: trace.final_energy(),
            flow_status: trace.status,
            steps: trace.records.len(),
            alpha_prev: alpha,
            residual_sup: residual.residual_sup,
            set: set.clone(),
            field: trace.final_field,
        });
        previous = set;
        field = members.last().map(|m| m.field.clone()).unwrap_or(field);
    }
    Ok(Family { members, status: FamilyStatus::Complete })
}
