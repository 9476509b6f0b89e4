//! Potential of a disk on a 128² torus and its nonlocal energy, from the
//! grid solver and from the exact Fourier coefficients of the disk.

use okpattern::spectral::{set_spectrum, SpectralWorkspace};
use okpattern::torus_field::{rasterize, GridSpec, ShapeCandidate, ShapeSet};

fn main() -> okpattern::Result<()> {
    let grid = GridSpec::cubic(2, 128)?;
    let disk = ShapeCandidate::ball(&[0.5, 0.5], 0.3);
    let u = rasterize(&disk, &grid)?;
    let ws = SpectralWorkspace::new(&grid);

    let v = ws.poisson_zero_mean(&u)?;
    let centre = grid.ravel(&[64, 64]);
    println!("v at centre        {:+.6e}", v.values()[centre]);
    println!("max |v|            {:.6e}", v.max_abs());

    let exact = set_spectrum(&ShapeSet::single(2, disk)?, &grid)?;
    println!("NL voxel set       {:.10}", ws.set_nonlocal_energy(&u)?);
    println!("NL exact disk      {:.10}", exact.nonlocal_energy());
    println!("v(centre), exact   {:+.6e}", exact.potential().eval(&[0.5, 0.5]));
    Ok(())
}
