use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sharp_energy::sharp_energy;
use crate::spectral::SpectralWorkspace;
use crate::torus_field::{FieldKind, ScalarField};

/// Largest probe amplitude, in cells.
pub const MAX_PROBE_AMPLITUDE: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbeConfig {
    pub n_probes: usize,
    /// Swapped cells lie within this many cells of the interface.
    pub amplitude: usize,
    /// Each probe swaps between one and this many pairs per period cell.
    pub max_pairs: usize,
    pub rng_seed: u64,
}

impl ProbeConfig {
    pub fn new(n_probes: usize, amplitude: usize) -> Self {
        Self { n_probes, amplitude, max_pairs: 3, rng_seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeReport {
    pub base_energy: f64,
    /// `F^γ̄(probe) - F^γ̄(F)` for each evaluated probe.
    pub gaps: Vec<f64>,
    /// Probes that found no cell on one side of the interface.
    pub skipped: usize,
}

impl ProbeReport {
    pub fn min_gap(&self) -> f64 {
        self.gaps.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Random volume-preserving `1/k`-periodic rearrangements of `F`: each probe
/// swaps inside and outside cells near the interface of one period cell and
/// copies the swap to every period cell.
pub fn local_minimality_probe(f: &ScalarField, gamma_bar: f64, k: usize, cfg: &ProbeConfig) -> Result<ProbeReport> {
    f.require_kind(FieldKind::Indicator)?;
    if cfg.amplitude > MAX_PROBE_AMPLITUDE {
        return Err(Error::Invalid(format!("probe amplitude is at most {MAX_PROBE_AMPLITUDE} cells")));
    }
    if cfg.max_pairs == 0 {
        return Err(Error::Invalid("max_pairs must be positive".into()));
    }
    let spec = f.spec();
    let block = spec.coarsened(k)?;
    if !is_periodic(f, k) {
        return Err(Error::Invalid(format!("field is not 1/{k}-periodic")));
    }
    let ws = SpectralWorkspace::new(spec);
    let base_energy = sharp_energy(f, gamma_bar, &ws)?.total;
    if cfg.amplitude == 0 {
        return Ok(ProbeReport { base_energy, gaps: vec![0.0; cfg.n_probes], skipped: 0 });
    }

    let near = |flat: usize| -> bool {
        let idx = spec.unravel(flat);
        let own = f.values()[flat];
        let r = cfg.amplitude as i64;
        let dim = spec.dim();
        let width = 2 * r + 1;
        (0..width.pow(dim as u32)).any(|code| {
            let mut c = code;
            let moved: Vec<usize> = (0..dim)
                .map(|a| {
                    let d = c % width - r;
                    c /= width;
                    (idx[a] as i64 + d).rem_euclid(spec.sizes()[a] as i64) as usize
                })
                .collect();
            f.values()[spec.ravel(&moved)] != own
        })
    };
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    for cell in 0..block.len() {
        let flat = spec.ravel(&block.unravel(cell));
        if near(flat) {
            if f.values()[flat] > 0.0 {
                inside.push(flat);
            } else {
                outside.push(flat);
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let copies = periodic_copies(spec.sizes(), block.sizes());
    let mut gaps = Vec::with_capacity(cfg.n_probes);
    let mut skipped = 0;
    for _ in 0..cfg.n_probes {
        let pairs = rng.gen_range(1..=cfg.max_pairs).min(inside.len()).min(outside.len());
        if pairs == 0 {
            skipped += 1;
            continue;
        }
        let mut values = f.values().to_vec();
        let ins: Vec<usize> = inside.choose_multiple(&mut rng, pairs).copied().collect();
        let outs: Vec<usize> = outside.choose_multiple(&mut rng, pairs).copied().collect();
        for &cell in ins.iter().chain(&outs) {
            let idx = spec.unravel(cell);
            for offset in &copies {
                let at: Vec<usize> = idx.iter().zip(offset).map(|(i, o)| i + o).collect();
                let flat = spec.ravel(&at);
                values[flat] = -values[flat];
            }
        }
        let probe = ScalarField::new(spec.clone(), values, FieldKind::Indicator)?;
        gaps.push(sharp_energy(&probe, gamma_bar, &ws)?.total - base_energy);
    }
    Ok(ProbeReport { base_energy, gaps, skipped })
}

fn periodic_copies(sizes: &[usize], block: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for (&n, &b) in sizes.iter().zip(block) {
        out = out
            .into_iter()
            .flat_map(|p| (0..n / b).map(move |j| [p.clone(), vec![j * b]].concat()))
            .collect();
    }
    out
}

fn is_periodic(f: &ScalarField, k: usize) -> bool {
    let spec = f.spec();
    let dim = spec.dim();
    (0..dim).all(|a| {
        let mut by = vec![0i64; dim];
        by[a] = (spec.sizes()[a] / k) as i64;
        f.shifted(&by).values() == f.values()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus_field::{rasterize, GridSpec, ShapeCandidate};

    fn tiled_lamella(n: usize, k: usize) -> ScalarField {
        let g = GridSpec::cubic(2, n).unwrap();
        rasterize(&ShapeCandidate::lamella(0, 0.5, 0.25), &g).unwrap().tile(k).unwrap()
    }

    #[test]
    fn zero_amplitude_gives_zero_gaps() {
        let f = tiled_lamella(32, 2);
        let r = local_minimality_probe(&f, 1.0, 2, &ProbeConfig::new(5, 0)).unwrap();
        assert_eq!(r.gaps, vec![0.0; 5]);
    }

    #[test]
    fn lamella_probes_raise_the_energy() {
        let f = tiled_lamella(32, 2);
        for amplitude in 1..=3 {
            let r = local_minimality_probe(&f, 1.0, 2, &ProbeConfig::new(40, amplitude)).unwrap();
            assert_eq!(r.skipped, 0);
            assert!(r.min_gap() >= -1e-12, "amplitude {amplitude}: {}", r.min_gap());
        }
    }

    #[test]
    fn probes_are_deterministic_and_need_periodic_input() {
        let f = tiled_lamella(32, 2);
        let cfg = ProbeConfig::new(10, 2);
        assert_eq!(
            local_minimality_probe(&f, 1.0, 2, &cfg).unwrap(),
            local_minimality_probe(&f, 1.0, 2, &cfg).unwrap()
        );
        let g = GridSpec::cubic(2, 32).unwrap();
        let single = rasterize(&ShapeCandidate::lamella(0, 0.4, 0.2), &g).unwrap();
        assert!(local_minimality_probe(&single, 1.0, 2, &cfg).is_err());
        assert!(local_minimality_probe(&f, 1.0, 2, &ProbeConfig::new(1, 4)).is_err());
    }
}
