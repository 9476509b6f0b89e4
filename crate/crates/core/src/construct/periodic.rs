use crate::diffuse_ok::FlowConfig;
use crate::error::{Error, Result};
use crate::geometry::{el_residual, InterfaceMesh};
use crate::sharp_energy::sharp_energy;
use crate::spectral::SpectralWorkspace;
use crate::stability::{EigenReport, SecondVariation, MIN_PENCIL_RESOLUTION};
use crate::torus_field::{alpha_distance, rasterize, GridSpec, ScalarField, ShapeCandidate, ShapeSet};

use super::family::{continue_family, FamilyConfig, FamilyStatus};

#[derive(Clone, Debug, PartialEq)]
pub struct ConstructConfig {
    pub seed: ShapeCandidate,
    pub gamma_bar: f64,
    pub ks: Vec<usize>,
    pub spec: GridSpec,
    pub family: FamilyConfig,
    /// Members per family, the last one at `γ_k`.
    pub family_steps: usize,
    /// Interface sample resolution for the certificate meshes.
    pub mesh_resolution: usize,
}

impl ConstructConfig {
    pub fn new(seed: ShapeCandidate, gamma_bar: f64, ks: Vec<usize>, spec: GridSpec, flow: FlowConfig) -> Self {
        Self {
            seed,
            gamma_bar,
            ks,
            spec,
            family: FamilyConfig::new(flow),
            family_steps: 4,
            mesh_resolution: 32,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.seed.validate(self.spec.dim())?;
        self.family.validate()?;
        if !(self.gamma_bar > 0.0) || !self.gamma_bar.is_finite() {
            return Err(Error::Invalid("gamma_bar must be positive".into()));
        }
        if self.ks.is_empty() {
            return Err(Error::Invalid("k list is empty".into()));
        }
        for &k in &self.ks {
            if k == 0 || self.spec.sizes().iter().any(|n| n % k != 0) {
                return Err(Error::Invalid(format!("k = {k} does not divide grid sizes {:?}", self.spec.sizes())));
            }
        }
        if self.family_steps == 0 {
            return Err(Error::Invalid("family_steps must be positive".into()));
        }
        Ok(())
    }

    /// Smallest eigenvalue of the area functional's second variation at the
    /// seed; construction requires it to be positive.
    pub fn seed_gate(&self) -> Result<EigenReport> {
        let set = ShapeSet::single(self.spec.dim(), self.seed.clone())?;
        let res = self.mesh_resolution.max(MIN_PENCIL_RESOLUTION);
        SecondVariation::for_set(&set, 0.0, &self.spec, res)?.min_eigenvalue()
    }

    /// `γ_k = γ̄ k⁻³`.
    pub fn gamma_k(&self, k: usize) -> f64 {
        self.gamma_bar / (k as f64).powi(3)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstructCertificate {
    pub k: usize,
    pub gamma_k: f64,
    /// `α(E_{γ_k}, seed)` on the grid.
    pub alpha: f64,
    /// Largest normal offset of the zero level from `tile(seed, k)`.
    pub c0_proxy: f64,
    /// Sharp Euler–Lagrange residual of `F` on the tiled seed interface.
    pub residual_sup: f64,
    pub grad_h_sup: f64,
    pub grad_h_bound: f64,
    /// `F^γ̄(F)`.
    pub energy_lhs: f64,
    /// `k[P(E) + γ_k NL(E)]` for the parent `E` that the tiling replicates.
    pub energy_rhs: f64,
    pub rel_err: f64,
    /// Relative error of `NL(F) = k⁻² NL(E)`.
    pub nl_rel_err: f64,
    pub family_status: FamilyStatus,
}

pub const CERTIFICATE_CSV_HEADER: &str =
    "k,gamma_k,alpha,c0_proxy,residual_sup,grad_H_sup,energy_lhs,energy_rhs,rel_err,grad_H_bound,nl_rel_err,status";

impl ConstructCertificate {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{}",
            self.k,
            self.gamma_k,
            self.alpha,
            self.c0_proxy,
            self.residual_sup,
            self.grad_h_sup,
            self.energy_lhs,
            self.energy_rhs,
            self.rel_err,
            self.grad_h_bound,
            self.nl_rel_err,
            self.family_status.as_str()
        )
    }
}

/// Outcome of one `k`: a certificate with `E_{γ_k}` and `F`, or the error
/// that stopped it.
#[derive(Clone, Debug)]
pub struct PeriodicStage {
    pub k: usize,
    pub gamma_k: f64,
    pub outcome: std::result::Result<PeriodicBuild, String>,
}

#[derive(Clone, Debug)]
pub struct PeriodicBuild {
    pub certificate: ConstructCertificate,
    pub parent: ScalarField,
    pub tiled: ScalarField,
}

#[derive(Clone, Debug)]
pub struct PeriodicReport {
    pub gate: EigenReport,
    pub stages: Vec<PeriodicStage>,
}

impl PeriodicReport {
    pub fn to_csv(&self) -> String {
        let mut out = format!("{CERTIFICATE_CSV_HEADER}\n");
        for s in &self.stages {
            match &s.outcome {
                Ok(b) => out.push_str(&b.certificate.csv_row()),
                Err(e) => out.push_str(&format!("{},{:.17e},,,,,,,,,,error: {}", s.k, s.gamma_k, e.replace(',', ";"))),
            }
            out.push('\n');
        }
        out
    }

    pub fn certificates(&self) -> Vec<&ConstructCertificate> {
        self.stages.iter().filter_map(|s| s.outcome.as_ref().ok().map(|b| &b.certificate)).collect()
    }
}

/// Runs the continuation to each `γ_k`, sharpens, tiles and certifies.
/// Failures at one `k` are recorded without stopping the others.
pub fn build_periodic(cfg: &ConstructConfig) -> Result<PeriodicReport> {
    cfg.validate()?;
    let gate = cfg.seed_gate()?;
    if !(gate.min_eigenvalue > 0.0) {
        return Err(Error::Invalid(format!(
            "seed is not strictly stable: minimum eigenvalue {:.3e}",
            gate.min_eigenvalue
        )));
    }
    let stages = cfg
        .ks
        .iter()
        .map(|&k| PeriodicStage { k, gamma_k: cfg.gamma_k(k), outcome: build_one(cfg, k).map_err(|e| e.to_string()) })
        .collect();
    Ok(PeriodicReport { gate, stages })
}

fn build_one(cfg: &ConstructConfig, k: usize) -> Result<PeriodicBuild> {
    let spec = &cfg.spec;
    let dim = spec.dim();
    let gamma_k = cfg.gamma_k(k);
    let steps = cfg.family_steps;
    let gammas: Vec<f64> = (0..=steps).map(|j| gamma_k * j as f64 / steps as f64).collect();
    let family = continue_family(&cfg.seed, spec, &gammas, &cfg.family)?;
    let last = family
        .last()
        .ok_or_else(|| Error::Numerical(format!("family for k = {k} has no accepted member")))?;
    let parent = last.set.clone();
    let tiled = parent.tile(k)?;
    let kf = k as f64;

    let alpha = alpha_distance(&parent, &rasterize(&cfg.seed, spec)?)?.distance;
    let seed_mesh = InterfaceMesh::of_shape(&cfg.seed, dim, cfg.mesh_resolution)?;
    let c0_proxy = zero_level_offset(&last.field, &seed_mesh)? / kf;

    let tiled_mesh = InterfaceMesh::of_set(&ShapeSet::tiled(dim, &cfg.seed, k)?, cfg.mesh_resolution)?;
    let ws = SpectralWorkspace::new(spec);
    let crit = el_residual(&tiled_mesh, &ws.potential_spectrum(&tiled)?, cfg.gamma_bar);

    let lhs = sharp_energy(&tiled, cfg.gamma_bar, &ws)?;
    let sub = parent.subsample(k)?;
    let coarse_ws = SpectralWorkspace::new(sub.spec());
    let par = sharp_energy(&sub, gamma_k, &coarse_ws)?;
    let energy_rhs = kf * par.total;
    let rel = |a: f64, b: f64| if b == 0.0 { a.abs() } else { (a - b).abs() / b.abs() };

    let certificate = ConstructCertificate {
        k,
        gamma_k,
        alpha,
        c0_proxy,
        residual_sup: crit.residual_sup,
        grad_h_sup: crit.grad_h_sup,
        grad_h_bound: crit.grad_h_bound,
        energy_lhs: lhs.total,
        energy_rhs,
        rel_err: rel(lhs.total, energy_rhs),
        nl_rel_err: rel(lhs.nonlocal, par.nonlocal / (kf * kf)),
        family_status: family.status,
    };
    Ok(PeriodicBuild { certificate, parent, tiled })
}

/// Periodic multilinear interpolation of cell-centred samples.
fn interpolate(u: &ScalarField, x: &[f64]) -> f64 {
    let spec = u.spec();
    let dim = spec.dim();
    let mut base = vec![0usize; dim];
    let mut frac = vec![0.0; dim];
    for a in 0..dim {
        let n = spec.sizes()[a];
        let t = x[a] * n as f64 - 0.5;
        let f = t.floor();
        base[a] = (f as i64).rem_euclid(n as i64) as usize;
        frac[a] = t - f;
    }
    let mut total = 0.0;
    let mut idx = vec![0usize; dim];
    for corner in 0..(1usize << dim) {
        let mut w = 1.0;
        for a in 0..dim {
            let up = (corner >> a) & 1;
            idx[a] = (base[a] + up) % spec.sizes()[a];
            w *= if up == 1 { frac[a] } else { 1.0 - frac[a] };
        }
        if w != 0.0 {
            total += w * u.values()[spec.ravel(&idx)];
        }
    }
    total
}

/// Largest distance, along the mesh normals, from each mesh point to the
/// nearest zero of `u`. Points without a zero within eight cells count as
/// eight cells.
pub fn zero_level_offset(u: &ScalarField, mesh: &InterfaceMesh) -> Result<f64> {
    if u.spec().dim() != mesh.dim() {
        return Err(Error::Invalid("field and mesh dimensions differ".into()));
    }
    let h = u.spec().min_spacing();
    let reach = 8.0 * h;
    let step = h / 4.0;
    let mut worst: f64 = 0.0;
    for (x, nu) in mesh.points().iter().zip(mesh.normals()) {
        let f = |s: f64| -> f64 {
            let p: Vec<f64> = x.iter().zip(nu).map(|(a, b)| a + s * b).collect();
            interpolate(u, &p)
        };
        let f0 = f(0.0);
        let mut found = if f0 == 0.0 { Some(0.0) } else { None };
        let mut j = 0.0;
        while found.is_none() && j * step < reach {
            for dir in [1.0, -1.0] {
                let (a, b) = (dir * j * step, dir * (j + 1.0) * step);
                let (fa, fb) = (f(a), f(b));
                if fa * fb <= 0.0 {
                    let (mut lo, mut hi, mut flo) = (a, b, fa);
                    for _ in 0..60 {
                        let mid = 0.5 * (lo + hi);
                        let fm = f(mid);
                        if (fm <= 0.0) == (flo <= 0.0) {
                            lo = mid;
                            flo = fm;
                        } else {
                            hi = mid;
                        }
                    }
                    let s = 0.5 * (lo + hi);
                    found = Some(found.map_or(s, |t: f64| if s.abs() < t.abs() { s } else { t }));
                }
            }
            j += 1.0;
        }
        worst = worst.max(found.map_or(reach, f64::abs));
    }
    Ok(worst)
}
