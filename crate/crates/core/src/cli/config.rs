use serde::{Deserialize, Serialize};

use crate::diffuse_ok::FlowConfig;
use crate::error::{Error, Result};
use crate::torus_field::{check_resolvable, GridSpec, ShapeCandidate};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Run directory.
    pub out: String,
    /// Sharp `γ` (the flow uses it as the diffuse `γ`).
    pub gamma: f64,
    pub eps: f64,
    pub threads: usize,
    pub grid: GridSection,
    pub shape: ShapeSection,
    pub flow: FlowSection,
    pub construct: ConstructSection,
    pub stability: StabilitySection,
    pub scaling: ScalingSection,
    pub gamma_limit: GammaLimitSection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub sizes: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ShapeKind {
    Lamella,
    Ball,
    Cylinder,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ShapeSection {
    pub kind: ShapeKind,
    pub axis: usize,
    /// Empty means the torus centre.
    pub center: Vec<f64>,
    pub halfwidth: f64,
    pub radius: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FlowSection {
    /// Defaults to `ε²`.
    pub dt: Option<f64>,
    /// Defaults to `2/ε`.
    pub stabilizer: Option<f64>,
    pub max_steps: usize,
    pub energy_tolerance: f64,
    pub dt_backoff: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConstructSection {
    pub gamma_bar: f64,
    pub ks: Vec<usize>,
    pub family_steps: usize,
    pub perturbation: f64,
    pub escape_distance: f64,
    pub mesh_resolution: usize,
    pub probes: usize,
    pub probe_amplitude: usize,
    pub rng_seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StabilitySection {
    pub gammas: Vec<f64>,
    pub q_max: i64,
    pub resolution: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScalingSection {
    pub ks: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GammaLimitSection {
    pub eps_list: Vec<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            out: "okpattern-run".into(),
            gamma: 1.0,
            eps: 0.04,
            threads: 1,
            grid: GridSection::default(),
            shape: ShapeSection::default(),
            flow: FlowSection::default(),
            construct: ConstructSection::default(),
            stability: StabilitySection::default(),
            scaling: ScalingSection::default(),
            gamma_limit: GammaLimitSection::default(),
        }
    }
}

impl Default for GridSection {
    fn default() -> Self {
        Self { sizes: vec![64, 64] }
    }
}

impl Default for ShapeSection {
    fn default() -> Self {
        Self { kind: ShapeKind::Lamella, axis: 0, center: vec![], halfwidth: 0.25, radius: 0.25 }
    }
}

impl Default for FlowSection {
    fn default() -> Self {
        Self { dt: None, stabilizer: None, max_steps: 2000, energy_tolerance: 1e-12, dt_backoff: 0.5 }
    }
}

impl Default for ConstructSection {
    fn default() -> Self {
        Self {
            gamma_bar: 40.0,
            ks: vec![1, 2, 4],
            family_steps: 4,
            perturbation: 1e-2,
            escape_distance: 0.05,
            mesh_resolution: 32,
            probes: 200,
            probe_amplitude: 3,
            rng_seed: 0,
        }
    }
}

impl Default for StabilitySection {
    fn default() -> Self {
        Self { gammas: vec![0.0, 1.0, 10.0, 50.0, 100.0], q_max: 8, resolution: 32 }
    }
}

impl Default for ScalingSection {
    fn default() -> Self {
        Self { ks: vec![1, 2, 4] }
    }
}

impl Default for GammaLimitSection {
    fn default() -> Self {
        Self { eps_list: vec![0.08, 0.04, 0.02, 0.01] }
    }
}

fn config_error(key: &str, message: impl ToString) -> Error {
    Error::Config { key: key.to_string(), message: message.to_string() }
}

fn require(ok: bool, key: &str, message: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(config_error(key, message))
    }
}

impl RunConfig {
    /// Parses TOML, naming the offending key on failure.
    pub fn from_toml(text: &str) -> Result<Self> {
        let de = toml::Deserializer::new(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let key = e.path().to_string();
            config_error(&key, e.into_inner().message())
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn grid_spec(&self) -> Result<GridSpec> {
        GridSpec::new(&self.grid.sizes).map_err(|e| config_error("grid.sizes", e))
    }

    pub fn shape_candidate(&self) -> Result<ShapeCandidate> {
        let dim = self.grid.sizes.len();
        let s = &self.shape;
        let center = |n: usize| -> Result<Vec<f64>> {
            match s.center.len() {
                0 => Ok(vec![0.5; n]),
                m if m == n => Ok(s.center.clone()),
                m => Err(config_error("shape.center", format!("expected {n} entries, got {m}"))),
            }
        };
        let shape = match s.kind {
            ShapeKind::Lamella => ShapeCandidate::lamella(s.axis, center(1)?[0], s.halfwidth),
            ShapeKind::Ball => ShapeCandidate::ball(&center(dim)?, s.radius),
            ShapeKind::Cylinder => {
                let c = center(2)?;
                ShapeCandidate::cylinder(s.axis, [c[0], c[1]], s.radius)
            }
        };
        shape.validate(dim).map_err(|e| config_error("shape", e))?;
        Ok(shape)
    }

    pub fn flow_config(&self) -> FlowConfig {
        let mut cfg = FlowConfig::new(self.eps, self.gamma);
        if let Some(dt) = self.flow.dt {
            cfg.dt = dt;
        }
        if let Some(c) = self.flow.stabilizer {
            cfg.stabilizer = c;
        }
        cfg.max_steps = self.flow.max_steps;
        cfg.energy_tolerance = self.flow.energy_tolerance;
        cfg.dt_backoff = self.flow.dt_backoff;
        cfg
    }

    /// Checks every constraint the downstream modules impose. Interface
    /// widths are checked against the grid only by [`RunConfig::validate_for`]
    /// for the subcommands that use them.
    pub fn validate(&self) -> Result<()> {
        let spec = self.grid_spec()?;
        self.shape_candidate()?;
        require(self.gamma >= 0.0 && self.gamma.is_finite(), "gamma", "must be finite and nonnegative")?;
        require(self.eps > 0.0 && self.eps.is_finite(), "eps", "must be positive")?;
        require(self.threads >= 1, "threads", "must be at least 1")?;
        require(self.flow.dt.is_none_or(|d| d > 0.0 && d.is_finite()), "flow.dt", "must be positive")?;
        require(self.flow.stabilizer.is_none_or(|c| c >= 0.0 && c.is_finite()), "flow.stabilizer", "must be nonnegative")?;
        require(self.flow.energy_tolerance >= 0.0, "flow.energy_tolerance", "must be nonnegative")?;
        require(self.flow.dt_backoff > 0.0 && self.flow.dt_backoff < 1.0, "flow.dt_backoff", "must lie in (0, 1)")?;
        let divides = |ks: &[usize], key: &str| -> Result<()> {
            require(!ks.is_empty(), key, "must not be empty")?;
            for &k in ks {
                require(k > 0 && spec.coarsened(k).is_ok(), key, &format!("grid {:?} cannot be coarsened by {k}", spec.sizes()))?;
            }
            Ok(())
        };
        let c = &self.construct;
        require(c.gamma_bar > 0.0 && c.gamma_bar.is_finite(), "construct.gamma_bar", "must be positive")?;
        divides(&c.ks, "construct.ks")?;
        require(c.family_steps >= 1, "construct.family_steps", "must be at least 1")?;
        require(c.perturbation >= 0.0 && c.perturbation.is_finite(), "construct.perturbation", "must be nonnegative")?;
        require(c.escape_distance > 0.0, "construct.escape_distance", "must be positive")?;
        require(c.mesh_resolution >= 8 && c.mesh_resolution.is_multiple_of(2), "construct.mesh_resolution", "must be even and at least 8")?;
        require(c.probe_amplitude <= 3, "construct.probe_amplitude", "must be at most 3 cells")?;
        let s = &self.stability;
        require(!s.gammas.is_empty(), "stability.gammas", "must not be empty")?;
        require(s.gammas.iter().all(|g| *g >= 0.0 && g.is_finite()), "stability.gammas", "must be finite and nonnegative")?;
        require(s.q_max >= 1, "stability.q_max", "must be at least 1")?;
        require(s.resolution >= 16 && s.resolution.is_multiple_of(2), "stability.resolution", "must be even and at least 16")?;
        divides(&self.scaling.ks, "scaling.ks")?;
        let e = &self.gamma_limit.eps_list;
        require(e.len() >= 2, "gamma_limit.eps_list", "needs at least two values")?;
        require(e.iter().all(|&eps| eps > 0.0 && eps.is_finite()), "gamma_limit.eps_list", "entries must be positive")?;
        Ok(())
    }

    /// [`RunConfig::validate`] plus the grid-resolution checks of `command`.
    pub fn validate_for(&self, command: &str) -> Result<()> {
        self.validate()?;
        let spec = self.grid_spec()?;
        match command {
            "flow" | "construct" => check_resolvable(&spec, self.eps).map_err(|e| config_error("eps", e)),
            "gamma-limit" => self
                .gamma_limit
                .eps_list
                .iter()
                .try_for_each(|&eps| check_resolvable(&spec, eps))
                .map_err(|e| config_error("gamma_limit.eps_list", e)),
            _ => Ok(()),
        }
    }
}
