//! Builds 1/k-periodic lamellar patterns at γ̄ = 40 for k = 1, 2, 4, prints
//! their certificates and probes the k = 2 pattern with cell swaps.

use okpattern::construct::{build_periodic, graph_lamella_probe, growth_exponent, local_minimality_probe};
use okpattern::construct::{ConstructConfig, ProbeConfig};
use okpattern::diffuse_ok::FlowConfig;
use okpattern::torus_field::{GridSpec, ShapeCandidate};

fn main() -> okpattern::Result<()> {
    let mut flow = FlowConfig::new(0.04, 0.0);
    flow.dt = 0.002;
    flow.max_steps = 3000;
    let gamma_bar = 40.0;
    let cfg = ConstructConfig::new(
        ShapeCandidate::lamella(0, 0.5, 0.25),
        gamma_bar,
        vec![1, 2, 4],
        GridSpec::cubic(2, 64)?,
        flow,
    );
    let report = build_periodic(&cfg)?;
    println!("seed gate: min eigenvalue {:.4}", report.gate.min_eigenvalue);
    print!("{}", report.to_csv());

    if let Some(Ok(built)) = report.stages.iter().find(|s| s.k == 2).map(|s| s.outcome.as_ref()) {
        let probes = local_minimality_probe(&built.tiled, gamma_bar, 2, &ProbeConfig::new(200, 3))?;
        println!("200 cell-swap probes: min gap {:.4e}", probes.min_gap());
    }

    let graph = graph_lamella_probe(gamma_bar, 2, 0.25, 1, &[0.001, 0.002, 0.004, 0.008])?;
    for g in &graph {
        println!("zigzag a = {:.3}: alpha {:.4e}, gap {:.4e}", g.amplitude, g.alpha, g.gap);
    }
    println!("growth exponent {:.4}", growth_exponent(&graph)?);
    Ok(())
}
