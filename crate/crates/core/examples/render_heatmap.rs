// Writes heatmaps of a disk indicator and of its potential to the temp dir.
use okpattern::cli::render_heatmap;
use okpattern::spectral::SpectralWorkspace;
use okpattern::torus_field::{rasterize, GridSpec, ShapeCandidate};

fn main() -> okpattern::Result<()> {
    let grid = GridSpec::cubic(2, 128)?;
    let u = rasterize(&ShapeCandidate::ball(&[0.4, 0.6], 0.25), &grid)?;
    let v = SpectralWorkspace::new(&grid).poisson_zero_mean(&u)?;
    let dir = std::env::temp_dir();
    for (name, field) in [("indicator", &u), ("potential", &v)] {
        let path = dir.join(format!("okpattern_{name}.ppm"));
        render_heatmap(field, &path, None)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
