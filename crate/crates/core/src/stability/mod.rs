//! The second variation of `F^γ`, its penalized form, the discrete infimum
//! over zero-mean perturbations and the lamellar mode analysis.

mod form;
mod modes;
mod pencil;

pub use form::{QuadFormReport, SecondVariation, SurfaceFunction};
pub use modes::{
    bisect_sign_change, circle_green, lamella_constant_sector, lamella_mode_matrix, lamella_mode_scan,
    lamella_threshold, screened_green, ModeMatrix, ThresholdReport, ThresholdStatus, GAMMA_MAX,
    THRESHOLD_CSV_HEADER,
};
pub use pencil::{EigenReport, MIN_PENCIL_RESOLUTION};
