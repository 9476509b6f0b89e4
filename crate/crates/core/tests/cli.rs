use std::fs;

use okpattern::cli::{run, EXIT_CONFIG, EXIT_OK};
use okpattern::torus_field::{rasterize, write_field, GridSpec, ScalarField, ShapeCandidate};

fn argv(args: &[&str]) -> Vec<String> {
    std::iter::once("okpattern").chain(args.iter().copied()).map(String::from).collect()
}

fn csv_row(text: &str, row: usize) -> Vec<String> {
    text.lines().nth(row).unwrap().split(',').map(String::from).collect()
}

#[test]
fn energy_of_the_reference_lamella() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("e");
    let code = run(argv(&["energy", "--shape", "lamella", "--w", "0.25", "--gamma", "48", "--out", out.to_str().unwrap()]));
    assert_eq!(code, EXIT_OK);
    let report = fs::read_to_string(out.join("report.csv")).unwrap();
    assert_eq!(report.lines().next().unwrap(), "perimeter,nonlocal,gamma,total");
    let total: f64 = csv_row(&report, 1)[3].parse().unwrap();
    assert!((total - 3.0).abs() < 1e-12);
    assert!(out.join("fields/indicator.okf").exists());
    let meta = fs::read_to_string(out.join("meta.txt")).unwrap();
    assert!(meta.contains("gamma = 48.0"));
}

#[test]
fn scaling_first_row_is_exact() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("s");
    let code = run(argv(&["scaling", "--shape", "lamella", "--w", "0.25", "--gamma", "1", "--k", "1,2,4", "--out", out.to_str().unwrap()]));
    assert_eq!(code, EXIT_OK);
    let report = fs::read_to_string(out.join("report.csv")).unwrap();
    assert_eq!(report.lines().count(), 4);
    let row = csv_row(&report, 1);
    assert_eq!(row[0], "1");
    assert!(row[7..].iter().all(|v| v.parse::<f64>().unwrap() == 0.0));
}

#[test]
fn config_file_with_unknown_key_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.toml");
    fs::write(&cfg, "[flow]\nmax_step = 3\n").unwrap();
    assert_eq!(run(argv(&["flow", "--config", cfg.to_str().unwrap()])), EXIT_CONFIG);
    fs::write(&cfg, "eps = 0.1\n[grid]\nsizes = [32, 32]\n[flow]\nmax_steps = 5\n").unwrap();
    let out = tmp.path().join("f");
    assert_eq!(run(argv(&["flow", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()])), EXIT_OK);
    let trace = fs::read_to_string(out.join("report.csv")).unwrap();
    assert_eq!(trace.lines().next().unwrap(), "step,dt,energy,mass,sup_update");
    assert!(trace.lines().count() <= 6);
}

#[test]
fn stability_writes_threshold() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("t");
    assert_eq!(run(argv(&["stability", "--gammas", "0,200", "--out", out.to_str().unwrap()])), EXIT_OK);
    let report = fs::read_to_string(out.join("report.csv")).unwrap();
    let at = |row: usize| csv_row(&report, row)[2].parse::<f64>().unwrap();
    assert!(at(1) > 0.0 && at(2) < 0.0);
    let t = fs::read_to_string(out.join("threshold.csv")).unwrap();
    let g: f64 = csv_row(&t, 1)[1].parse().unwrap();
    assert!((g - 94.872).abs() < 1e-3);
}

#[test]
fn render_lamella_and_constant() {
    let tmp = tempfile::tempdir().unwrap();
    let g = GridSpec::cubic(2, 16).unwrap();
    let field = tmp.path().join("lam.okf");
    write_field(&rasterize(&ShapeCandidate::lamella(0, 0.5, 0.25), &g).unwrap(), &field).unwrap();
    let img = tmp.path().join("lam.ppm");
    let args = argv(&["render", field.to_str().unwrap(), img.to_str().unwrap()]);
    assert_eq!(run(args.clone()), EXIT_OK);
    let first = fs::read(&img).unwrap();
    assert!(first.starts_with(b"P6\n16 16\n255\n"));
    let white = first[13..].chunks(3).filter(|p| p[0] == 255).count();
    assert_eq!(white, 8 * 16);
    assert_eq!(run(args), EXIT_OK);
    assert_eq!(fs::read(&img).unwrap(), first);

    write_field(&ScalarField::constant(&g, 0.3), &field).unwrap();
    assert_eq!(run(argv(&["render", field.to_str().unwrap(), img.to_str().unwrap()])), EXIT_OK);
    assert!(fs::read(&img).unwrap()[13..].iter().all(|&b| b == 128));
    let bad = argv(&["render", field.to_str().unwrap(), img.to_str().unwrap(), "--axis", "2", "--index", "0"]);
    assert_eq!(run(bad), EXIT_CONFIG);
}
