//! The `okpattern` command line: configuration, run directories and
//! heatmaps.

mod config;
mod render;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::construct::{build_periodic, local_minimality_probe, ConstructConfig, ProbeConfig};
use crate::diffuse_ok::{fit_order, gamma_limit_csv, gamma_limit_sweep, minimize, FlowStatus, FlowTrace};
use crate::error::{Error, Result};
use crate::sharp_energy::{scaling_check, sharp_energy_of_shape, ScalingReport};
use crate::spectral::SpectralWorkspace;
use crate::stability::{lamella_mode_scan, lamella_threshold, SecondVariation, THRESHOLD_CSV_HEADER};
use crate::torus_field::{rasterize, read_field, tanh_profile, write_field, ShapeCandidate, ShapeSet};

pub use config::{
    ConstructSection, FlowSection, GammaLimitSection, GridSection, RunConfig, ScalingSection, ShapeKind, ShapeSection,
    StabilitySection,
};
pub use render::{heatmap_bytes, render_heatmap, Slice};

/// Exit code for a completed run.
pub const EXIT_OK: i32 = 0;
/// Exit code for bad arguments or configuration.
pub const EXIT_CONFIG: i32 = 2;
/// Exit code for a run that failed or ended with a failure status.
pub const EXIT_NUMERICAL: i32 = 3;

/// Only environment input; recorded in `meta.txt`.
pub const THREADS_ENV: &str = "OKPATTERN_THREADS";

#[derive(Parser, Debug)]
#[command(name = "okpattern", version, about = "Ohta-Kawasaki energies, flows and periodic constructions on the flat torus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sharp energy of the configured shape.
    Energy(Overrides),
    /// Zero-mean potential of the configured shape.
    Green(Overrides),
    /// Diffuse gradient flow from the tanh profile of the shape.
    Flow(Overrides),
    /// Periodic construction with certificates and probes.
    Construct(Overrides),
    /// Second-variation spectra and the lamella threshold.
    Stability(Overrides),
    /// Tiling identities for the configured shape.
    Scaling(Overrides),
    /// Diffuse energy against its sharp limit over a list of ε.
    GammaLimit(Overrides),
    /// Heatmap of a field file.
    Render(RenderArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Self::Energy(_) => "energy",
            Self::Green(_) => "green",
            Self::Flow(_) => "flow",
            Self::Construct(_) => "construct",
            Self::Stability(_) => "stability",
            Self::Scaling(_) => "scaling",
            Self::GammaLimit(_) => "gamma-limit",
            Self::Render(_) => "render",
        }
    }
}

#[derive(Args, Debug, Default)]
struct Overrides {
    /// TOML configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Run directory.
    #[arg(long)]
    out: Option<String>,
    #[arg(long, value_enum)]
    shape: Option<ShapeKind>,
    /// Lamella half-width.
    #[arg(long)]
    w: Option<f64>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    axis: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    center: Option<Vec<f64>>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    /// Grid sizes, one per axis.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Tiling factors for `scaling` and `construct`.
    #[arg(long, value_delimiter = ',')]
    k: Option<Vec<usize>>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    gamma_bar: Option<f64>,
    #[arg(long)]
    probes: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    eps_list: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    gammas: Option<Vec<f64>>,
    #[arg(long)]
    q_max: Option<i64>,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args, Debug)]
struct RenderArgs {
    input: PathBuf,
    output: PathBuf,
    /// Fixed axis for 3D fields.
    #[arg(long)]
    axis: Option<usize>,
    #[arg(long)]
    index: Option<usize>,
}

impl Overrides {
    fn apply(&self, cfg: &mut RunConfig) {
        macro_rules! set {
            ($flag:expr, $target:expr) => {
                if let Some(v) = &$flag {
                    $target = v.clone();
                }
            };
        }
        set!(self.out, cfg.out);
        set!(self.shape, cfg.shape.kind);
        set!(self.w, cfg.shape.halfwidth);
        set!(self.radius, cfg.shape.radius);
        set!(self.axis, cfg.shape.axis);
        set!(self.center, cfg.shape.center);
        set!(self.gamma, cfg.gamma);
        set!(self.eps, cfg.eps);
        set!(self.n, cfg.grid.sizes);
        set!(self.k, cfg.scaling.ks);
        set!(self.k, cfg.construct.ks);
        set!(self.steps, cfg.flow.max_steps);
        if let Some(dt) = self.dt {
            cfg.flow.dt = Some(dt);
        }
        set!(self.gamma_bar, cfg.construct.gamma_bar);
        set!(self.probes, cfg.construct.probes);
        set!(self.eps_list, cfg.gamma_limit.eps_list);
        set!(self.gammas, cfg.stability.gammas);
        set!(self.q_max, cfg.stability.q_max);
        set!(self.threads, cfg.threads);
    }
}

/// Config file (or defaults), then flags, then `OKPATTERN_THREADS`.
fn resolve(command: &str, overrides: &Overrides, threads_env: Option<String>) -> Result<RunConfig> {
    let mut cfg = match &overrides.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Config { key: "--config".into(), message: format!("{}: {e}", path.display()) })?;
            RunConfig::from_toml(&text)?
        }
        None => RunConfig::default(),
    };
    overrides.apply(&mut cfg);
    if let Some(t) = threads_env {
        cfg.threads = t.trim().parse().map_err(|_| Error::Config {
            key: THREADS_ENV.into(),
            message: format!("expected a positive integer, got {t:?}"),
        })?;
    }
    cfg.validate_for(command)?;
    Ok(cfg)
}

/// Files a subcommand leaves in its run directory besides `meta.txt`.
struct RunOutput {
    report: String,
    extra: Vec<(String, String)>,
    fields: Vec<(String, crate::torus_field::ScalarField)>,
    /// `false` when the run finished with a failure status.
    ok: bool,
    summary: String,
}

impl RunOutput {
    fn new(report: String) -> Self {
        Self { report, extra: vec![], fields: vec![], ok: true, summary: String::new() }
    }
}

fn shape_set(cfg: &RunConfig) -> Result<(ShapeCandidate, ShapeSet)> {
    let shape = cfg.shape_candidate()?;
    let set = ShapeSet::single(cfg.grid.sizes.len(), shape.clone())?;
    Ok((shape, set))
}

fn run_energy(cfg: &RunConfig) -> Result<RunOutput> {
    let spec = cfg.grid_spec()?;
    let (shape, _) = shape_set(cfg)?;
    let e = sharp_energy_of_shape(&shape, &spec, cfg.gamma)?;
    let mut out = RunOutput::new(format!(
        "perimeter,nonlocal,gamma,total\n{:.17e},{:.17e},{:.17e},{:.17e}\n",
        e.perimeter, e.nonlocal, e.gamma, e.total
    ));
    out.summary = format!("total {:.12}", e.total);
    out.fields.push(("indicator".into(), rasterize(&shape, &spec)?));
    Ok(out)
}

fn run_green(cfg: &RunConfig) -> Result<RunOutput> {
    let spec = cfg.grid_spec()?;
    let (shape, _) = shape_set(cfg)?;
    let u = rasterize(&shape, &spec)?;
    let ws = SpectralWorkspace::new(&spec);
    let v = ws.poisson_zero_mean(&u)?;
    let lo = v.values().iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.values().iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let nl = ws.set_nonlocal_energy(&u)?;
    let mut out = RunOutput::new(format!("nonlocal,v_min,v_max\n{nl:.17e},{lo:.17e},{hi:.17e}\n"));
    out.summary = format!("NL {nl:.12}");
    out.fields.push(("indicator".into(), u));
    out.fields.push(("potential".into(), v));
    Ok(out)
}

fn run_flow(cfg: &RunConfig) -> Result<RunOutput> {
    let spec = cfg.grid_spec()?;
    let (shape, _) = shape_set(cfg)?;
    let u0 = tanh_profile(&shape, &spec, cfg.eps)?;
    let trace: FlowTrace = minimize(&u0, &cfg.flow_config())?;
    let mut out = RunOutput::new(trace.to_csv());
    out.ok = trace.status != FlowStatus::Stalled;
    out.summary = format!("{} after {} steps, energy {:.12}", trace.status.as_str(), trace.records.len(), trace.final_energy());
    out.fields.push(("initial".into(), u0));
    out.fields.push(("final".into(), trace.final_field));
    Ok(out)
}

fn run_construct(cfg: &RunConfig) -> Result<RunOutput> {
    let spec = cfg.grid_spec()?;
    let (shape, _) = shape_set(cfg)?;
    let c = &cfg.construct;
    let mut cc = ConstructConfig::new(shape, c.gamma_bar, c.ks.clone(), spec, cfg.flow_config());
    cc.family_steps = c.family_steps;
    cc.family.perturbation = c.perturbation;
    cc.family.escape_distance = c.escape_distance;
    cc.mesh_resolution = c.mesh_resolution;
    let report = build_periodic(&cc)?;
    let mut out = RunOutput::new(report.to_csv());
    let mut probes = String::from("k,probe,gap\n");
    let mut worst = f64::INFINITY;
    for stage in &report.stages {
        match &stage.outcome {
            Err(_) => out.ok = false,
            Ok(b) => {
                out.ok &= b.certificate.family_status.is_complete();
                out.fields.push((format!("parent_k{}", stage.k), b.parent.clone()));
                out.fields.push((format!("tiled_k{}", stage.k), b.tiled.clone()));
                if c.probes > 0 {
                    let pc = ProbeConfig { rng_seed: c.rng_seed, ..ProbeConfig::new(c.probes, c.probe_amplitude) };
                    let r = local_minimality_probe(&b.tiled, c.gamma_bar, stage.k, &pc)?;
                    for (i, g) in r.gaps.iter().enumerate() {
                        let _ = writeln!(probes, "{},{i},{g:.17e}", stage.k);
                    }
                    worst = worst.min(r.min_gap());
                }
            }
        }
    }
    if worst < -1e-12 {
        out.ok = false;
    }
    out.summary = format!("gate {:.6e}, min probe gap {worst:.6e}", report.gate.min_eigenvalue);
    out.extra.push(("probes.csv".into(), probes));
    Ok(out)
}

fn run_stability(cfg: &RunConfig) -> Result<RunOutput> {
    let s = &cfg.stability;
    let (shape, set) = shape_set(cfg)?;
    let mut report = format!("{THRESHOLD_CSV_HEADER}\n");
    let mut out;
    if let ShapeCandidate::Lamella { halfwidth, .. } = shape {
        for &g in &s.gammas {
            let _ = writeln!(report, "{halfwidth:.17e},{g:.17e},{:.17e}", lamella_mode_scan(g, halfwidth, s.q_max)?);
        }
        let t = lamella_threshold(halfwidth, s.q_max)?;
        out = RunOutput::new(report);
        out.extra.push((
            "threshold.csv".into(),
            format!(
                "w,gamma_star,q_star,status\n{:.17e},{:.17e},{},{:?}\n",
                t.halfwidth, t.gamma_star, t.q_star, t.status
            ),
        ));
        out.summary = format!("threshold {:.6} at q = {}", t.gamma_star, t.q_star);
    } else {
        let spec = cfg.grid_spec()?;
        let size = cfg.shape.radius;
        for &g in &s.gammas {
            let eig = SecondVariation::for_set(&set, g, &spec, s.resolution)?.min_eigenvalue()?;
            let _ = writeln!(report, "{size:.17e},{g:.17e},{:.17e}", eig.min_eigenvalue);
        }
        out = RunOutput::new(report);
    }
    Ok(out)
}

fn run_scaling(cfg: &RunConfig) -> Result<RunOutput> {
    let spec = cfg.grid_spec()?;
    let (shape, _) = shape_set(cfg)?;
    let mut report = format!("{}\n", ScalingReport::CSV_HEADER);
    let mut worst: f64 = 0.0;
    for &k in &cfg.scaling.ks {
        let r = scaling_check(&shape, &spec, cfg.gamma, k)?;
        worst = worst.max(r.max_rel_err());
        report.push_str(&r.csv_row());
        report.push('\n');
    }
    let mut out = RunOutput::new(report);
    out.summary = format!("max relative error {worst:.3e}");
    Ok(out)
}

fn run_gamma_limit(cfg: &RunConfig) -> Result<RunOutput> {
    let spec = cfg.grid_spec()?;
    let (_, set) = shape_set(cfg)?;
    let rows = gamma_limit_sweep(&set, &spec, cfg.gamma, &cfg.gamma_limit.eps_list)?;
    let order = fit_order(
        &rows.iter().map(|r| r.eps).collect::<Vec<_>>(),
        &rows.iter().map(|r| r.difference.abs()).collect::<Vec<_>>(),
    )?;
    let mut out = RunOutput::new(gamma_limit_csv(&rows));
    out.summary = format!("fitted order {order:.4}");
    Ok(out)
}

fn write_run(dir: &Path, command: &str, cfg: &RunConfig, out: &RunOutput) -> Result<()> {
    fs::create_dir_all(dir.join("fields"))?;
    fs::write(dir.join("report.csv"), &out.report)?;
    for (name, text) in &out.extra {
        fs::write(dir.join(name), text)?;
    }
    for (name, field) in &out.fields {
        write_field(field, dir.join("fields").join(format!("{name}.okf")))?;
    }
    fs::write(dir.join("meta.txt"), meta_text(command, cfg))?;
    Ok(())
}

/// `meta.txt`: versions, subcommand and the resolved configuration.
pub fn meta_text(command: &str, cfg: &RunConfig) -> String {
    format!(
        "# okpattern {}\n# subcommand {command}\n# threads {}\n{}",
        env!("CARGO_PKG_VERSION"),
        cfg.threads,
        cfg.to_toml()
    )
}

fn render(args: &RenderArgs) -> Result<()> {
    let field = read_field(&args.input)?;
    let slice = match (args.axis, args.index) {
        (Some(axis), Some(index)) => Some(Slice { axis, index }),
        (None, None) => None,
        _ => return Err(Error::Invalid("--axis and --index go together".into())),
    };
    render_heatmap(&field, &args.output, slice)
}

/// Parses `argv` (program name first), runs one subcommand and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let name = cli.command.name();
    let overrides = match &cli.command {
        Command::Render(args) => {
            return match render(args) {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_CONFIG
                }
            }
        }
        Command::Energy(o)
        | Command::Green(o)
        | Command::Flow(o)
        | Command::Construct(o)
        | Command::Stability(o)
        | Command::Scaling(o)
        | Command::GammaLimit(o) => o,
    };
    let cfg = match resolve(name, overrides, std::env::var(THREADS_ENV).ok()) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    let result = match &cli.command {
        Command::Energy(_) => run_energy(&cfg),
        Command::Green(_) => run_green(&cfg),
        Command::Flow(_) => run_flow(&cfg),
        Command::Construct(_) => run_construct(&cfg),
        Command::Stability(_) => run_stability(&cfg),
        Command::Scaling(_) => run_scaling(&cfg),
        Command::GammaLimit(_) => run_gamma_limit(&cfg),
        Command::Render(_) => unreachable!(),
    };
    let dir = PathBuf::from(&cfg.out);
    match result.and_then(|out| write_run(&dir, name, &cfg, &out).map(|()| out)) {
        Ok(out) => {
            println!("{name}: {} ({})", if out.ok { "ok" } else { "failed" }, dir.display());
            if !out.summary.is_empty() {
                println!("{}", out.summary);
            }
            if out.ok {
                EXIT_OK
            } else {
                EXIT_NUMERICAL
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_NUMERICAL
        }
    }
}
