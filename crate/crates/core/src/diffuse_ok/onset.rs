use crate::error::{Error, Result};
use crate::spectral::SpectralWorkspace;
use crate::torus_field::{tanh_profile, GridSpec, ScalarField, ShapeCandidate};

use super::flow::{flow_step, minimize_with, FlowConfig, FlowState, StepOutcome};
use super::gamma_limit::SIGMA;

/// Settings for locating the sharp-γ value at which a lamella starts to
/// buckle under the diffuse flow.
#[derive(Clone, Debug, PartialEq)]
pub struct OnsetConfig {
    /// Grid sizes; axis 0 is normal to the lamella, axis 1 carries the mode.
    pub sizes: Vec<usize>,
    pub eps: f64,
    pub halfwidth: f64,
    /// Interface displacement amplitude of the `cos(2πx₂)` perturbation.
    pub amplitude: f64,
    pub dt: f64,
    pub relax_steps: usize,
    pub probe_steps: usize,
    pub bisection_steps: usize,
    /// Initial bracket in sharp-γ units.
    pub bracket: (f64, f64),
}

impl Default for OnsetConfig {
    fn default() -> Self {
        Self {
            sizes: vec![256, 16],
            eps: 1.0 / 64.0,
            halfwidth: 0.25,
            amplitude: 1e-3,
            dt: 0.01,
            relax_steps: 4000,
            probe_steps: 1500,
            bisection_steps: 6,
            bracket: (40.0, 200.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OnsetReport {
    /// Midpoint of the final bracket, sharp-γ units.
    pub gamma: f64,
    pub bracket: (f64, f64),
    /// `(sharp γ, late-time growth rate)` for every probe.
    pub probes: Vec<(f64, f64)>,
}

/// Growth rate of the buckling mode at sharp parameter `gamma`: the flow runs
/// at `γ_d = σγ` from a relaxed lamella displaced by `δcos(2πx₂)`.
pub fn buckling_growth_rate(gamma: f64, cfg: &OnsetConfig) -> Result<f64> {
    let spec = GridSpec::new(&cfg.sizes)?;
    if spec.dim() != 2 {
        return Err(Error::Invalid("onset probe runs on two-dimensional grids".into()));
    }
    let ws = SpectralWorkspace::new(&spec);
    let mut flow = FlowConfig::new(cfg.eps, SIGMA * gamma);
    flow.dt = cfg.dt;
    flow.max_steps = cfg.relax_steps;
    flow.energy_tolerance = 0.0;
    let u0 = tanh_profile(&ShapeCandidate::lamella(0, 0.5, cfg.halfwidth), &spec, cfg.eps)?;
    let base = minimize_with(&u0, &flow, &ws, |_, _| {})?.final_field;
    let d1 = ws.gradient(&base)?.swap_remove(0);
    let n1 = spec.sizes()[1] as f64;
    let values = base
        .values()
        .iter()
        .zip(d1.values())
        .enumerate()
        .map(|(flat, (&u, &du))| {
            let x2 = (spec.unravel(flat)[1] as f64 + 0.5) / n1;
            u + cfg.amplitude * (2.0 * std::f64::consts::PI * x2).cos() * du
        })
        .collect();
    let mut state = FlowState::new(ScalarField::generic(spec.clone(), values)?, &flow, &ws)?;
    let half = cfg.probe_steps / 2;
    let (mut t, mut t_mid, mut a_mid) = (0.0, 0.0, 0.0);
    for step in 1..=cfg.probe_steps {
        match flow_step(&state, &flow, &ws)? {
            StepOutcome::Accepted { state: next, .. } => {
                t += next.dt;
                state = next;
            }
            StepOutcome::Stalled => return Err(Error::Numerical("onset probe stalled".into())),
        }
        if step == half {
            t_mid = t;
            a_mid = transverse_amplitude(&state.field);
        }
    }
    let a_end = transverse_amplitude(&state.field);
    Ok((a_end / a_mid).ln() / (t - t_mid))
}

/// L² norm of `u` minus its average along axis 1.
fn transverse_amplitude(u: &ScalarField) -> f64 {
    let spec = u.spec();
    let (n0, n1) = (spec.sizes()[0], spec.sizes()[1]);
    let v = u.values();
    let mut acc = 0.0;
    for i in 0..n0 {
        let row = &v[i * n1..(i + 1) * n1];
        let mean = row.iter().sum::<f64>() / n1 as f64;
        acc += row.iter().map(|x| (x - mean).powi(2)).sum::<f64>();
    }
    (acc * spec.cell_volume()).sqrt()
}

/// Bisects the sign of [`buckling_growth_rate`] over `cfg.bracket`.
pub fn lamella_flow_onset(cfg: &OnsetConfig) -> Result<OnsetReport> {
    let (mut lo, mut hi) = cfg.bracket;
    let mut probes = Vec::new();
    let mut probe = |g: f64| -> Result<f64> {
        let r = buckling_growth_rate(g, cfg)?;
        probes.push((g, r));
        Ok(r)
    };
    if probe(lo)? >= 0.0 || probe(hi)? <= 0.0 {
        return Err(Error::Numerical(format!("bracket ({lo}, {hi}) does not straddle the onset")));
    }
    for _ in 0..cfg.bisection_steps {
        let mid = 0.5 * (lo + hi);
        if probe(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(OnsetReport { gamma: 0.5 * (lo + hi), bracket: (lo, hi), probes })
}
