//! Periodic grids, scalar fields, candidate shapes, set distances, tiling and
//! the `OKF1` field file format.

mod alpha;
mod field;
mod grid;
mod io;
mod shape;

pub use alpha::{alpha_distance, AlphaDistance};
pub use field::{FieldKind, ScalarField, PHASE_OVERSHOOT};
pub use grid::{wrap_delta, GridSpec, DEFAULT_SAMPLE_BUDGET};
pub use io::{decode_field, encode_field, read_field, write_field};
pub use shape::{
    check_resolvable, rasterize, rasterize_set, tanh_profile, tanh_profile_set, ShapeCandidate,
    ShapeSet,
};
