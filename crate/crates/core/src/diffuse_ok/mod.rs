//! The diffuse Ohta–Kawasaki energy, its mass-conserving gradient flow and
//! the Γ-limit comparison against the sharp functional.

mod energy;
mod flow;
mod gamma_limit;
mod onset;

pub use energy::{diffuse_el_residual, ok_energy, ok_energy_parts, DiffuseResidual, OkEnergy};
pub use flow::{
    flow_step, minimize, minimize_with, FlowConfig, FlowState, FlowStatus, FlowTrace, StepOutcome, StepRecord,
    MIN_DT,
};
pub use gamma_limit::{
    fit_order, gamma_limit_csv, gamma_limit_sweep, modica_mortola_constant, GammaLimitRow, GAMMA_LIMIT_CSV_HEADER,
    SIGMA,
};
pub use onset::{buckling_growth_rate, lamella_flow_onset, OnsetConfig, OnsetReport};
