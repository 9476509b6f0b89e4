#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod cli;
pub mod construct;
pub mod diffuse_ok;
pub mod error;
pub mod geometry;
mod fft;
pub mod sharp_energy;
pub mod spectral;
pub mod stability;
pub mod torus_field;

pub use error::{Error, Result};
