//! Interface meshes of candidate shapes, mean curvature and the
//! Euler–Lagrange residual `H + 4γv − λ`.

mod chart;
mod criticality;
mod mesh;

pub use chart::periodic_diff_matrix;
pub use criticality::{el_residual, el_residual_of_set, CriticalityReport};
pub(crate) use criticality::sample_potential;
pub use mesh::{fejer_weights, mean_curvature, Chart, ChartKind, InterfaceMesh};
