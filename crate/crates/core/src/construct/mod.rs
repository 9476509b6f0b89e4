//! Periodic near-critical patterns built from a strictly stable seed, and the
//! `γ`-continuation that feeds them.

mod family;
mod graph;
mod periodic;
mod probe;

pub use family::{continue_family, sharpen, target_cells, Family, FamilyConfig, FamilyMember, FamilyStatus};
pub use graph::{graph_lamella_energy, graph_lamella_probe, growth_exponent, GraphProbe, GRAPH_FREQUENCY_CUTOFF};
pub use periodic::{
    build_periodic, zero_level_offset, ConstructCertificate, ConstructConfig, PeriodicBuild, PeriodicReport,
    PeriodicStage, CERTIFICATE_CSV_HEADER,
};
pub use probe::{local_minimality_probe, ProbeConfig, ProbeReport, MAX_PROBE_AMPLITUDE};
