//! One check per acceptance criterion. Each prints a single PASS/FAIL line
//! with the measured value and the pinned tolerance.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use okpattern::cli;
use okpattern::construct::{
    build_periodic, graph_lamella_probe, growth_exponent, local_minimality_probe, ConstructConfig, ProbeConfig,
};
use okpattern::diffuse_ok::{fit_order, gamma_limit_sweep, lamella_flow_onset, minimize, FlowConfig, OnsetConfig};
use okpattern::sharp_energy::scaling_check;
use okpattern::spectral::SpectralWorkspace;
use okpattern::stability::{lamella_mode_matrix, lamella_threshold, SecondVariation, SurfaceFunction};
use okpattern::torus_field::{rasterize, tanh_profile, FieldKind, GridSpec, ScalarField, ShapeCandidate, ShapeSet};

fn report(n: u32, pass: bool, detail: String) {
    println!("criterion {n}: {} ({detail})", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {n} failed: {detail}");
}

fn lamella() -> ShapeCandidate {
    ShapeCandidate::lamella(0, 0.5, 0.25)
}

#[test]
fn criterion_01_green_solver() {
    const POTENTIAL_TOL: f64 = 1e-12;
    const LAPLACIAN_TOL: f64 = 1e-10;
    let g = GridSpec::cubic(2, 256).unwrap();
    let ws = SpectralWorkspace::new(&g);
    let u = ScalarField::from_fn(&g, |x| (2.0 * PI * x[0]).cos());
    let v = ws.poisson_zero_mean(&u).unwrap();
    let pot_err = v
        .values()
        .iter()
        .zip(u.values())
        .map(|(a, b)| (a - b / (4.0 * PI * PI)).abs())
        .fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut lap_err: f64 = 0.0;
    for _ in 0..20 {
        let f = ScalarField::generic(g.clone(), (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
        let mean = f.mean();
        let back = ws.neg_laplacian(&ws.poisson_zero_mean(&f).unwrap()).unwrap();
        let num: f64 = back.values().iter().zip(f.values()).map(|(a, b)| (a - (b - mean)).powi(2)).sum();
        let den: f64 = f.values().iter().map(|b| (b - mean).powi(2)).sum();
        lap_err = lap_err.max((num / den).sqrt());
    }
    report(
        1,
        pot_err <= POTENTIAL_TOL && lap_err <= LAPLACIAN_TOL,
        format!("sup |v - u/4pi^2| = {pot_err:.2e} <= {POTENTIAL_TOL:.0e}, Laplacian residual {lap_err:.2e} <= {LAPLACIAN_TOL:.0e}"),
    );
}

#[test]
fn criterion_02_nonlocal_closed_form() {
    const LINE_TOL: f64 = 1e-8;
    const PLANE_TOL: f64 = 1e-6;
    let nl = |sizes: &[usize]| {
        let g = GridSpec::new(sizes).unwrap();
        let u = rasterize(&lamella(), &g).unwrap();
        SpectralWorkspace::new(&g).set_nonlocal_energy(&u).unwrap()
    };
    let line = (nl(&[512]) - 1.0 / 48.0).abs();
    let plane = (nl(&[256, 256]) - 1.0 / 48.0).abs();
    report(
        2,
        line <= LINE_TOL && plane <= PLANE_TOL,
        format!("|NL - 1/48| = {line:.2e} on 512 <= {LINE_TOL:.0e}, {plane:.2e} on 256^2 <= {PLANE_TOL:.0e}"),
    );
}

#[test]
fn criterion_03_scaling_identities() {
    const NL_TOL: f64 = 1e-12;
    const ENERGY_TOL: f64 = 1e-3;
    let g = GridSpec::cubic(2, 256).unwrap();
    let mut nl_err: f64 = 0.0;
    let mut energy_err: f64 = 0.0;
    for shape in [lamella(), ShapeCandidate::ball(&[0.5, 0.5], 0.3)] {
        for gamma in [0.0, 1.0, 10.0] {
            for k in [1, 2, 4] {
                let r = scaling_check(&shape, &g, gamma, k).unwrap();
                nl_err = nl_err.max(r.rel_err[1]);
                energy_err = energy_err.max(r.rel_err[2]);
            }
        }
    }
    report(
        3,
        nl_err <= NL_TOL && energy_err <= ENERGY_TOL,
        format!("NL {nl_err:.2e} <= {NL_TOL:.0e}, energy {energy_err:.2e} <= {ENERGY_TOL:.0e}"),
    );
}

#[test]
fn criterion_04_flow_audit() {
    const MASS_TOL: f64 = 1e-12;
    let g = GridSpec::cubic(2, 64).unwrap();
    let base = tanh_profile(&lamella(), &g, 0.05).unwrap();
    let u0 = ScalarField::new(
        g.clone(),
        base.values()
            .iter()
            .enumerate()
            .map(|(i, v)| v + 0.05 * (1.0 - v * v) * (2.0 * PI * g.center(i)[1]).cos())
            .collect(),
        FieldKind::Phase,
    )
    .unwrap();
    let mut cfg = FlowConfig::new(0.05, 10.0);
    cfg.max_steps = 500;
    cfg.energy_tolerance = 0.0;
    let trace = minimize(&u0, &cfg).unwrap();
    let m0 = u0.values().iter().sum::<f64>() * g.cell_volume();
    let drift = trace.records.iter().map(|r| (r.mass - m0).abs()).fold(0.0, f64::max);
    let mut previous = trace.initial_energy;
    let mut increases = 0;
    for r in &trace.records {
        increases += (r.energy > previous) as usize;
        previous = r.energy;
    }
    report(
        4,
        trace.records.len() == 500 && drift <= MASS_TOL && increases == 0,
        format!("{} steps, mass drift {drift:.2e} <= {MASS_TOL:.0e}, {increases} energy increases", trace.records.len()),
    );
}

#[test]
fn criterion_05_gamma_limit_order() {
    const MIN_ORDER: f64 = 0.9;
    let set = ShapeSet::single(2, lamella()).unwrap();
    let g = GridSpec::new(&[2048, 4]).unwrap();
    let eps = [0.08, 0.04, 0.02, 0.01];
    let rows = gamma_limit_sweep(&set, &g, 1.0, &eps).unwrap();
    let diffs: Vec<f64> = rows.iter().map(|r| r.difference.abs()).collect();
    let decreasing = diffs.windows(2).all(|w| w[1] < w[0]);
    let order = fit_order(&eps, &diffs).unwrap();
    report(5, decreasing && order >= MIN_ORDER, format!("order {order:.3} >= {MIN_ORDER}, differences {diffs:?}"));
}

fn lamella_variation(gamma: f64, w: f64, band: &[usize]) -> SecondVariation {
    let set = ShapeSet::single(2, ShapeCandidate::lamella(0, 0.5, w)).unwrap();
    SecondVariation::for_set(&set, gamma, &GridSpec::new(band).unwrap(), 16).unwrap()
}

#[test]
fn criterion_06_translation_degeneracy() {
    const REL_TOL: f64 = 1e-6;
    let mut worst: f64 = 0.0;
    for gamma in [0.0, 1.0, 10.0] {
        let sv = lamella_variation(gamma, 0.25, &[4096, 8]);
        let phi = SurfaceFunction::from_fn(sv.mesh(), |_, n| n[0]).unwrap();
        let r = sv.quad_form(&phi).unwrap();
        worst = worst.max(r.total.abs() / r.magnitude());
    }
    report(6, worst <= REL_TOL, format!("|d2F[nu.e1]| / scale = {worst:.2e} <= {REL_TOL:.0e}"));
}

#[test]
fn criterion_07_mode_matrix_matches_grid_form() {
    const REL_TOL: f64 = 1e-3;
    let mut worst: f64 = 0.0;
    for w in [0.15, 0.25, 0.35] {
        for gamma in [0.0, 1.0, 10.0] {
            let sv = lamella_variation(gamma, w, &[4096, 16]);
            for q in [1i64, 2, 3] {
                let m = lamella_mode_matrix(&[q], gamma, w).unwrap();
                for a in [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, -1.0]] {
                    let phi = SurfaceFunction::from_fn(sv.mesh(), |x, n| {
                        let amp = if n[0] > 0.0 { a[0] } else { a[1] };
                        amp * (2.0 * PI * q as f64 * x[1]).cos()
                    })
                    .unwrap();
                    let grid = sv.quad_form(&phi).unwrap().total;
                    let modal = m.form(a);
                    worst = worst.max((grid - modal).abs() / modal.abs().max(1e-300));
                }
            }
        }
    }
    report(7, worst <= REL_TOL, format!("max relative difference {worst:.2e} <= {REL_TOL:.0e}"));
}

#[test]
fn criterion_08_threshold_consistency() {
    const REL_TOL: f64 = 0.10;
    let modal = lamella_threshold(0.25, 16).unwrap().gamma_star;
    let onset = lamella_flow_onset(&OnsetConfig::default()).unwrap().gamma;
    let rel = (onset - modal).abs() / modal;
    report(8, rel <= REL_TOL, format!("mode scan {modal:.3}, flow onset {onset:.3}, relative gap {rel:.3} <= {REL_TOL}"));
}

fn periodic_config() -> ConstructConfig {
    let mut flow = FlowConfig::new(0.04, 0.0);
    flow.dt = 0.002;
    flow.max_steps = 3000;
    ConstructConfig::new(lamella(), 40.0, vec![1, 2, 4], GridSpec::cubic(2, 64).unwrap(), flow)
}

#[test]
fn criterion_09_periodic_construction_trends() {
    const SPREAD_TOL: f64 = 2.0;
    const GAP_FLOOR: f64 = -1e-12;
    let report9 = build_periodic(&periodic_config()).unwrap();
    let certs = report9.certificates();
    assert_eq!(certs.len(), 3, "{}", report9.to_csv());
    let scaled: Vec<f64> = certs.iter().map(|c| c.grad_h_bound * c.k as f64).collect();
    let spread = scaled.iter().copied().fold(0.0, f64::max) / scaled.iter().copied().fold(f64::INFINITY, f64::min);
    let c0: Vec<f64> = certs.iter().map(|c| c.c0_proxy).collect();
    let c0_decreasing = c0.windows(2).all(|w| w[1] < w[0]);
    let tiled = report9.stages[1].outcome.as_ref().unwrap().tiled.clone();
    let probes = local_minimality_probe(&tiled, 40.0, 2, &ProbeConfig::new(200, 3)).unwrap();
    let min_gap = probes.min_gap();
    report(
        9,
        spread <= SPREAD_TOL && c0_decreasing && probes.gaps.len() == 200 && min_gap >= GAP_FLOOR,
        format!(
            "k*grad_H bound spread {spread:.3} <= {SPREAD_TOL}, C0 proxy {c0:?}, min probe gap {min_gap:.3e} >= {GAP_FLOOR:.0e}"
        ),
    );
}

#[test]
fn criterion_10_quadratic_growth() {
    const EXPONENT_TOL: f64 = 0.3;
    let probes = graph_lamella_probe(40.0, 2, 0.25, 1, &[0.001, 0.002, 0.004, 0.008]).unwrap();
    let p = growth_exponent(&probes).unwrap();
    let positive = probes.iter().all(|g| g.gap > 0.0);
    report(10, positive && (p - 2.0).abs() <= EXPONENT_TOL, format!("fitted exponent {p:.4}, within 2 +- {EXPONENT_TOL}"));
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((p.strip_prefix(dir).unwrap().display().to_string(), fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn criterion_11_reproducible_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    let out_s = out.to_str().unwrap().to_string();
    let runs: [&[&str]; 3] = [
        &["flow", "--n", "32,32", "--eps", "0.08", "--gamma", "5", "--steps", "200"],
        &["green", "--shape", "ball", "--radius", "0.3"],
        &["construct", "--n", "32,32", "--eps", "0.08", "--k", "1,2", "--gamma-bar", "10", "--probes", "20", "--steps", "500"],
    ];
    let mut identical = true;
    let mut files = 0;
    for args in runs {
        let mut argv = vec!["okpattern".to_string()];
        argv.extend(args.iter().map(|s| s.to_string()));
        argv.extend(["--out".to_string(), out_s.clone()]);
        let mut snaps = Vec::new();
        for _ in 0..2 {
            let _ = fs::remove_dir_all(&out);
            assert_eq!(cli::run(argv.clone()), cli::EXIT_OK, "{argv:?}");
            snaps.push(snapshot(&out));
        }
        files += snaps[0].len();
        identical &= snaps[0] == snaps[1];
    }
    report(11, identical && files > 0, format!("{files} files compared byte for byte across repeated runs"));
}
