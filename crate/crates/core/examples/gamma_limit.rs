//! `OK_ε` of tanh profiles against the sharp energy `σP + γNL` as `ε`
//! shrinks, with the fitted convergence order.

use okpattern::diffuse_ok::{fit_order, gamma_limit_csv, gamma_limit_sweep, modica_mortola_constant};
use okpattern::torus_field::{GridSpec, ShapeCandidate, ShapeSet};

fn main() -> okpattern::Result<()> {
    println!("sigma by quadrature {:.15}", modica_mortola_constant(4000));
    let set = ShapeSet::single(2, ShapeCandidate::lamella(0, 0.5, 0.25))?;
    let grid = GridSpec::new(&[2048, 4])?;
    let eps = [0.08, 0.04, 0.02, 0.01];
    let rows = gamma_limit_sweep(&set, &grid, 1.0, &eps)?;
    print!("{}", gamma_limit_csv(&rows));
    let diffs: Vec<f64> = rows.iter().map(|r| r.difference.abs()).collect();
    println!("order {:.3}", fit_order(&eps, &diffs)?);
    Ok(())
}
