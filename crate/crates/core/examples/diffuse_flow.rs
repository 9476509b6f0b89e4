//! Relaxes a perturbed disk under the diffuse flow and prints every 100th
//! step of the trace.

use okpattern::diffuse_ok::{minimize, FlowConfig};
use okpattern::torus_field::{tanh_profile, FieldKind, GridSpec, ScalarField, ShapeCandidate};

fn main() -> okpattern::Result<()> {
    let grid = GridSpec::cubic(2, 64)?;
    let eps = 0.04;
    let base = tanh_profile(&ShapeCandidate::ball(&[0.5, 0.5], 0.3), &grid, eps)?;
    let bumped: Vec<f64> = base
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let x = grid.center(i);
            let theta = (x[1] - 0.5).atan2(x[0] - 0.5);
            v + 0.3 * (1.0 - v * v) * (3.0 * theta).cos()
        })
        .collect();
    let u0 = ScalarField::new(grid, bumped, FieldKind::Phase)?;

    let mut cfg = FlowConfig::new(eps, 20.0);
    cfg.max_steps = 1500;
    cfg.dt = 4.0 * eps * eps;
    let trace = minimize(&u0, &cfg)?;

    println!("initial energy {:.8}", trace.initial_energy);
    for r in trace.records.iter().filter(|r| r.step % 100 == 0) {
        println!("step {:5}  dt {:.2e}  energy {:.8}  mass {:+.3e}", r.step, r.dt, r.energy, r.mass);
    }
    println!("{} after {} steps, energy {:.8}", trace.status.as_str(), trace.records.len(), trace.final_energy());
    Ok(())
}
