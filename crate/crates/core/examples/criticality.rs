//! Euler–Lagrange residuals `H + 4γv - λ` of candidate shapes with the
//! potential from their exact Fourier coefficients.

use okpattern::geometry::{el_residual_of_set, CriticalityReport};
use okpattern::torus_field::{GridSpec, ShapeCandidate, ShapeSet};

fn main() -> okpattern::Result<()> {
    let band = GridSpec::cubic(2, 128)?;
    let shapes = [
        ("lamella", ShapeCandidate::lamella(0, 0.5, 0.25)),
        ("disk", ShapeCandidate::ball(&[0.5, 0.5], 0.3)),
    ];
    println!("shape,{}", CriticalityReport::CSV_HEADER);
    for (name, shape) in shapes {
        let set = ShapeSet::single(2, shape)?;
        for gamma in [0.0, 1.0, 10.0] {
            println!("{name},{}", el_residual_of_set(&set, gamma, &band, 64)?.csv_row());
        }
    }
    Ok(())
}
