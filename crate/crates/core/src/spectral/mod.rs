//! Periodic Poisson solves, Parseval energies, spectral derivatives and
//! band-limited point evaluation.

mod set_spectrum;
mod spectrum;
mod surface;
mod workspace;

pub use set_spectrum::{bessel_j1, set_spectrum};
pub use spectrum::Spectrum;
pub use surface::{green_matrix, measure_green_energy, measure_transform};
pub use workspace::{SpectralWorkspace, VOXEL_ALIAS_RADIUS_2D, VOXEL_ALIAS_RADIUS_3D};
