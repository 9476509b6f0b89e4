// Translation-minimized L1 distance between rasterized shapes.
use okpattern::torus_field::{alpha_distance, rasterize, GridSpec, ShapeCandidate};

fn main() -> okpattern::Result<()> {
    let grid = GridSpec::cubic(2, 64)?;
    let a = rasterize(&ShapeCandidate::ball(&[0.5, 0.5], 0.25), &grid)?;
    let moved = rasterize(&ShapeCandidate::ball(&[0.3, 0.7], 0.25), &grid)?;
    let bigger = rasterize(&ShapeCandidate::ball(&[0.5, 0.5], 0.3), &grid)?;
    println!("plain L1 to moved disk   {:.5}", a.l1_distance(&moved)? / 2.0);
    let d = alpha_distance(&a, &moved)?;
    println!("alpha to moved disk      {:.5} at shift {:?}", d.distance, d.shift);
    println!("alpha to larger disk     {:.5}", alpha_distance(&a, &bigger)?.distance);
    Ok(())
}
