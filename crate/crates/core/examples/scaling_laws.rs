// Tiling identities for a lamella and a disk: P scales by k, NL by k^-2.
use okpattern::sharp_energy::{scaling_check, ScalingReport};
use okpattern::torus_field::{GridSpec, ShapeCandidate};

fn main() -> okpattern::Result<()> {
    let grid = GridSpec::cubic(2, 128)?;
    println!("{}", ScalingReport::CSV_HEADER);
    for shape in [ShapeCandidate::lamella(0, 0.5, 0.25), ShapeCandidate::ball(&[0.5, 0.5], 0.3)] {
        for k in [1, 2, 4] {
            println!("{}", scaling_check(&shape, &grid, 10.0, k)?.csv_row());
        }
    }
    Ok(())
}
