use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::SpectralWorkspace;
use crate::torus_field::{check_resolvable, FieldKind, ScalarField};

use super::energy::{check_eps_gamma, energy_from_parts};

/// Smallest time step tried before a flow is declared stalled.
pub const MIN_DT: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct FlowConfig {
    pub eps: f64,
    pub gamma: f64,
    pub dt: f64,
    /// Linear stabilizer `c_s` moved to the implicit side.
    pub stabilizer: f64,
    pub max_steps: usize,
    /// Stop once an accepted step lowers the energy by less than this.
    pub energy_tolerance: f64,
    pub dt_backoff: f64,
}

impl FlowConfig {
    /// Defaults: `dt = ε²`, `c_s = 2/ε`, 10 000 steps, tolerance 1e-12,
    /// backoff 0.5.
    pub fn new(eps: f64, gamma: f64) -> Self {
        Self {
            eps,
            gamma,
            dt: eps * eps,
            stabilizer: 2.0 / eps,
            max_steps: 10_000,
            energy_tolerance: 1e-12,
            dt_backoff: 0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_eps_gamma(self.eps, self.gamma)?;
        let bad = |what: &str| Err(Error::Invalid(what.to_string()));
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return bad("dt must be positive");
        }
        if !(self.stabilizer >= 0.0) || !self.stabilizer.is_finite() {
            return bad("stabilizer must be nonnegative");
        }
        if !(self.energy_tolerance >= 0.0) {
            return bad("energy_tolerance must be nonnegative");
        }
        if !(self.dt_backoff > 0.0 && self.dt_backoff < 1.0) {
            return bad("dt_backoff must lie in (0, 1)");
        }
        Ok(())
    }
}

/// Current iterate of a flow with its cached energy and step size.
#[derive(Clone, Debug)]
pub struct FlowState {
    pub field: ScalarField,
    pub energy: f64,
    pub dt: f64,
}

impl FlowState {
    pub fn new(field: ScalarField, config: &FlowConfig, ws: &SpectralWorkspace) -> Result<Self> {
        config.validate()?;
        ws.spec().check_same(field.spec())?;
        check_resolvable(field.spec(), config.eps)?;
        let coeffs = ws.forward(field.values());
        let energy =
            energy_from_parts(field.values(), &coeffs, &ws.gradient_symbol(), ws, config.eps, config.gamma).total;
        let field = field.with_kind(FieldKind::Phase)?;
        Ok(Self { field, energy, dt: config.dt })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub dt: f64,
    pub energy: f64,
    pub mass: f64,
    pub sup_update: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlowStatus {
    Converged,
    MaxSteps,
    /// No energy-decreasing step was found above [`MIN_DT`].
    Stalled,
}

impl FlowStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            FlowStatus::Converged => "converged",
            FlowStatus::MaxSteps => "max_steps",
            FlowStatus::Stalled => "stalled",
        }
    }
}

#[derive(Clone, Debug)]
pub struct FlowTrace {
    pub records: Vec<StepRecord>,
    pub initial_energy: f64,
    pub status: FlowStatus,
    pub final_field: ScalarField,
}

impl FlowTrace {
    pub const CSV_HEADER: &'static str = "step,dt,energy,mass,sup_update";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            let _ = writeln!(out, "{},{:.17e},{:.17e},{:.17e},{:.17e}", r.step, r.dt, r.energy, r.mass, r.sup_update);
        }
        out
    }

    pub fn final_energy(&self) -> f64 {
        self.records.last().map_or(self.initial_energy, |r| r.energy)
    }
}

/// Outcome of one attempted step.
#[derive(Clone, Debug)]
pub enum StepOutcome {
    Accepted { state: FlowState, sup_update: f64, rejections: usize },
    Stalled,
}

/// One semi-implicit step of `∂_t u = 2εΔu − (4/ε)u(u²−1) − 2γv_u` with the
/// zero mode frozen; rejected and retried with a smaller `dt` while the energy
/// would increase.
pub fn flow_step(state: &FlowState, config: &FlowConfig, ws: &SpectralWorkspace) -> Result<StepOutcome> {
    config.validate()?;
    ws.spec().check_same(state.field.spec())?;
    let u = state.field.values();
    let eps = config.eps;
    let u_hat = ws.forward(u);
    let inv = ws.inverse_symbol();
    let grad_symbol = ws.gradient_symbol();
    let potential: Vec<f64> = ws.inverse(u_hat.iter().zip(inv).map(|(c, m)| c * m).collect());
    let drift: Vec<f64> = u
        .iter()
        .zip(&potential)
        .map(|(&x, &v)| -(4.0 / eps) * x * (x * x - 1.0) - 2.0 * config.gamma * v)
        .collect();
    let drift_hat = ws.forward(&drift);
    let mut dt = state.dt;
    let mut rejections = 0;
    while dt >= MIN_DT {
        let cs = config.stabilizer;
        let next_hat: Vec<Complex64> = u_hat
            .iter()
            .zip(&drift_hat)
            .zip(&grad_symbol)
            .enumerate()
            .map(|(i, ((&c, &n), &k2))| {
                if i == 0 {
                    c
                } else {
                    (c + dt * (cs * c + n)) / (1.0 + dt * (cs + 2.0 * eps * k2))
                }
            })
            .collect();
        let next = ws.inverse(next_hat.clone());
        let energy = energy_from_parts(&next, &next_hat, &grad_symbol, ws, eps, config.gamma).total;
        if energy <= state.energy {
            let sup_update = next.iter().zip(u).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            let field = ScalarField::new(state.field.spec().clone(), next, FieldKind::Phase)?;
            return Ok(StepOutcome::Accepted { state: FlowState { field, energy, dt }, sup_update, rejections });
        }
        dt *= config.dt_backoff;
        rejections += 1;
    }
    Ok(StepOutcome::Stalled)
}

/// Runs [`flow_step`] until the energy decrease falls below tolerance, the
/// step budget is spent, or the step size underflows.
pub fn minimize(u0: &ScalarField, config: &FlowConfig) -> Result<FlowTrace> {
    let ws = SpectralWorkspace::new(u0.spec());
    minimize_with(u0, config, &ws, |_, _| {})
}

/// [`minimize`] on a caller-owned workspace with a per-step observer.
pub fn minimize_with(
    u0: &ScalarField,
    config: &FlowConfig,
    ws: &SpectralWorkspace,
    mut observe: impl FnMut(usize, &FlowState),
) -> Result<FlowTrace> {
    let mut state = FlowState::new(u0.clone(), config, ws)?;
    let initial_energy = state.energy;
    let cell = ws.spec().cell_volume();
    let mut records = Vec::new();
    let mut status = FlowStatus::MaxSteps;
    for step in 1..=config.max_steps {
        match flow_step(&state, config, ws)? {
            StepOutcome::Stalled => {
                status = FlowStatus::Stalled;
                break;
            }
            StepOutcome::Accepted { state: next, sup_update, .. } => {
                let decrease = state.energy - next.energy;
                let mass = next.field.values().iter().sum::<f64>() * cell;
                records.push(StepRecord { step, dt: next.dt, energy: next.energy, mass, sup_update });
                state = next;
                observe(step, &state);
                if decrease < config.energy_tolerance {
                    status = FlowStatus::Converged;
                    break;
                }
            }
        }
    }
    Ok(FlowTrace { records, initial_energy, status, final_field: state.field })
}
