//! Stability of a lamella: the two-interface mode matrices, the threshold
//! γ* across half-widths, and the discrete pencil eigenvalue on a mesh.

use okpattern::stability::{lamella_mode_matrix, lamella_threshold, SecondVariation, THRESHOLD_CSV_HEADER};
use okpattern::torus_field::{GridSpec, ShapeCandidate, ShapeSet};

fn main() -> okpattern::Result<()> {
    for q in 1..=3 {
        let m = lamella_mode_matrix(&[q], 50.0, 0.25)?;
        println!("q = {q}: entries {:?}, eigenvalues {:?}", m.entries, m.eigenvalues());
    }

    println!("\nw,gamma_star,q_star");
    for w in [0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4] {
        let t = lamella_threshold(w, 16)?;
        println!("{w},{:.6},{}", t.gamma_star, t.q_star);
    }

    println!("\n{THRESHOLD_CSV_HEADER}");
    let set = ShapeSet::single(2, ShapeCandidate::lamella(0, 0.5, 0.25))?;
    let band = GridSpec::new(&[256, 32])?;
    for gamma in [0.0, 50.0, 90.0, 100.0] {
        let eig = SecondVariation::for_set(&set, gamma, &band, 32)?.min_eigenvalue()?;
        println!("0.25,{gamma},{:.6}", eig.min_eigenvalue);
    }
    Ok(())
}
