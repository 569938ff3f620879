use std::f64::consts::{FRAC_PI_2, TAU};

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::noise::{apply_noise, apply_readout_error, NoiseModel};
use super::sampling::{sample_counts, Counts};
use crate::analytic::{visibility, IntensityPair};
use crate::circuit::{build, Scheme, PARTNER, SYSTEM};
use crate::quantum::Distribution;
use crate::{tol, Error, Result};

pub const DEFAULT_SHOTS: u64 = 8192;
pub const DEFAULT_REPETITIONS: u64 = 3;
pub const DEFAULT_PHI_STEPS: usize = 21;
const DEFAULT_ALPHA_STEPS: usize = 5;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Density-matrix expectation values.
    #[default]
    Exact,
    /// Finite-shot estimates drawn from the outcome distribution.
    Sampled,
}

impl Mode {
    pub fn label(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Sampled => "sampled",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "sampled" => Ok(Mode::Sampled),
            other => Err(Error::domain("mode", format!("unknown mode `{other}`"))),
        }
    }
}

fn default_shots() -> u64 {
    DEFAULT_SHOTS
}

fn default_repetitions() -> u64 {
    DEFAULT_REPETITIONS
}

/// Everything needed to reproduce a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub scheme: Scheme,
    pub alpha_values: Vec<f64>,
    pub phi_values: Vec<f64>,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default = "default_shots")]
    pub shots: u64,
    #[serde(default = "default_repetitions")]
    pub repetitions: u64,
    #[serde(default)]
    pub seed: u64,
    /// Restricts EA-QDCE sweeps to one post-selection branch.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<u8>,
    #[serde(default)]
    pub noise: Option<NoiseModel>,
}

impl SweepConfig {
    /// Exact sweep over the default grids.
    pub fn new(scheme: Scheme) -> Self {
        Self {
            scheme,
            alpha_values: alpha_grid(DEFAULT_ALPHA_STEPS),
            phi_values: phi_grid(DEFAULT_PHI_STEPS),
            mode: Mode::Exact,
            shots: DEFAULT_SHOTS,
            repetitions: DEFAULT_REPETITIONS,
            seed: 0,
            branch: None,
            noise: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (field, values) in [("alpha_values", &self.alpha_values), ("phi_values", &self.phi_values)] {
            if values.is_empty() {
                return Err(Error::domain(field, "must not be empty"));
            }
            if let Some(v) = values.iter().find(|v| !v.is_finite()) {
                return Err(Error::domain(field, format!("{v} is not finite")));
            }
        }
        if self.mode == Mode::Sampled {
            if self.shots == 0 {
                return Err(Error::domain("shots", "sampled mode needs at least 1 shot"));
            }
            if self.repetitions == 0 {
                return Err(Error::domain("repetitions", "sampled mode needs at least 1 repetition"));
            }
        }
        if let Some(b) = self.branch {
            if self.scheme != Scheme::EaQdce {
                return Err(Error::domain("branch", "only EA-QDCE sweeps post-select"));
            }
            if b > 1 {
                return Err(Error::domain("branch", format!("{b} is not a bit")));
            }
        }
        if let Some(noise) = &self.noise {
            noise.validate()?;
            noise.covers(&build(self.scheme, 0.0, 0.0))?;
        }
        Ok(())
    }

    fn branches(&self) -> Vec<Option<u8>> {
        match (self.scheme, self.branch) {
            (Scheme::Qdce, _) => vec![None],
            (Scheme::EaQdce, Some(b)) => vec![Some(b)],
            (Scheme::EaQdce, None) => vec![Some(0), Some(1)],
        }
    }
}

/// One sweep point: detector intensities for a given `(α, φ[, branch])`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntensityRecord {
    pub scheme: Scheme,
    pub alpha: f64,
    pub phi: f64,
    pub branch: Option<u8>,
    pub mode: Mode,
    /// Conditional intensities when post-selected.
    pub e0: f64,
    pub e1: f64,
    pub joint_e0: Option<f64>,
    pub branch_prob: Option<f64>,
    /// Shots behind the estimate; for post-selected records, the shots that
    /// landed in the branch.
    pub shots_used: Option<u64>,
    pub stderr0: Option<f64>,
    pub stderr1: Option<f64>,
}

/// `n` evenly spaced phases covering `[0, 2π]` inclusive.
pub fn phi_grid(n: usize) -> Vec<f64> {
    linspace(0.0, TAU, n)
}

/// `n` phases `2πk/n`, one full period without repeating the endpoint.
pub fn periodic_phi_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| TAU * k as f64 / n as f64).collect()
}

/// `n` evenly spaced ancilla angles covering `[0, π/2]` inclusive.
pub fn alpha_grid(n: usize) -> Vec<f64> {
    linspace(0.0, FRAC_PI_2, n)
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|k| {
                if k == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * k as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// Runs every `(α, φ)` point of the sweep.
///
/// Points are evaluated in parallel. Each point seeds its own generator from
/// `(seed, point index)`, so output never depends on scheduling.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<IntensityRecord>> {
    config.validate()?;
    let n_phi = config.phi_values.len();
    let points: Vec<(usize, f64, f64)> = config
        .alpha_values
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| {
            config
                .phi_values
                .iter()
                .enumerate()
                .map(move |(j, &p)| (i * n_phi + j, a, p))
        })
        .collect();

    let per_point: Vec<Vec<IntensityRecord>> = points
        .par_iter()
        .map(|&(index, alpha, phi)| evaluate_point(config, index as u64, alpha, phi))
        .collect::<Result<_>>()?;
    Ok(per_point.into_iter().flatten().collect())
}

fn evaluate_point(config: &SweepConfig, index: u64, alpha: f64, phi: f64) -> Result<Vec<IntensityRecord>> {
    let circuit = build(config.scheme, phi, alpha);
    let record = |branch, pair: IntensityPair| IntensityRecord {
        scheme: config.scheme,
        alpha,
        phi,
        branch,
        mode: config.mode,
        e0: pair.e0,
        e1: pair.e1,
        joint_e0: None,
        branch_prob: None,
        shots_used: None,
        stderr0: None,
        stderr1: None,
    };

    match (config.mode, &config.noise) {
        (Mode::Exact, None) => {
            let state = circuit.simulate()?;
            config
                .branches()
                .into_iter()
                .map(|branch| match branch {
                    None => Ok(record(None, IntensityPair::from_system(&state.to_density())?)),
                    Some(b) => {
                        let (rest, p) = state.post_select(PARTNER, b)?;
                        let cond = IntensityPair::from_system(&rest.to_density())?;
                        Ok(IntensityRecord {
                            joint_e0: Some(cond.e0 * p),
                            branch_prob: Some(p),
                            ..record(Some(b), cond)
                        })
                    }
                })
                .collect()
        }
        (Mode::Exact, Some(noise)) => {
            let dist = apply_readout_error(&apply_noise(&circuit, noise)?.measure_probabilities(), noise);
            config
                .branches()
                .into_iter()
                .map(|branch| match branch {
                    None => Ok(record(
                        None,
                        IntensityPair {
                            e0: dist.marginal(SYSTEM, 0)?,
                            e1: dist.marginal(SYSTEM, 1)?,
                        },
                    )),
                    Some(b) => {
                        let p = dist.marginal(PARTNER, b)?;
                        if p < tol::IMPOSSIBLE_BRANCH {
                            return Err(Error::ImpossibleBranch {
                                qubit: PARTNER,
                                outcome: b,
                                probability: p,
                            });
                        }
                        let j0 = dist.joint(SYSTEM, 0, PARTNER, b)?;
                        let j1 = dist.joint(SYSTEM, 1, PARTNER, b)?;
                        Ok(IntensityRecord {
                            joint_e0: Some(j0),
                            branch_prob: Some(p),
                            ..record(Some(b), IntensityPair { e0: j0 / p, e1: j1 / p })
                        })
                    }
                })
                .collect()
        }
        (Mode::Sampled, noise) => {
            let dist = match noise {
                Some(noise) => {
                    apply_readout_error(&apply_noise(&circuit, noise)?.measure_probabilities(), noise)
                }
                None => circuit.simulate()?.measure_probabilities(),
            };
            let counts = draw(config, index, &dist)?;
            let total = counts.total();
            config
                .branches()
                .into_iter()
                .map(|branch| {
                    let (hits, pool) = match branch {
                        None => (counts.matching(&[(SYSTEM, 0)]), total),
                        Some(b) => (
                            counts.matching(&[(SYSTEM, 0), (PARTNER, b)]),
                            counts.matching(&[(PARTNER, b)]),
                        ),
                    };
                    if pool == 0 {
                        return Err(Error::ImpossibleBranch {
                            qubit: PARTNER,
                            outcome: branch.unwrap_or(0),
                            probability: 0.0,
                        });
                    }
                    let e0 = hits as f64 / pool as f64;
                    let se = (e0 * (1.0 - e0) / pool as f64).sqrt();
                    let mut r = record(branch, IntensityPair { e0, e1: 1.0 - e0 });
                    if branch.is_some() {
                        r.joint_e0 = Some(hits as f64 / total as f64);
                        r.branch_prob = Some(pool as f64 / total as f64);
                    }
                    r.shots_used = Some(pool);
                    r.stderr0 = Some(se);
                    r.stderr1 = Some(se);
                    Ok(r)
                })
                .collect()
        }
    }
}

fn draw(config: &SweepConfig, index: u64, dist: &Distribution) -> Result<Counts> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index);
    let mut counts = sample_counts(dist, config.shots, &mut rng)?;
    for _ in 1..config.repetitions {
        counts.merge(&sample_counts(dist, config.shots, &mut rng)?);
    }
    Ok(counts)
}

/// Fringe visibility of one `(α, branch)` curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VisibilityPoint {
    pub alpha: f64,
    pub branch: Option<u8>,
    pub e_max: f64,
    pub e_min: f64,
    pub visibility: f64,
}

/// Groups records by `(α, branch)` in order of first appearance and computes
/// the `e0` visibility of each group over its phases.
pub fn visibility_by_alpha(records: &[IntensityRecord]) -> Result<Vec<VisibilityPoint>> {
    type Group = ((f64, Option<u8>), Vec<(f64, f64)>);
    let mut groups: Vec<Group> = Vec::new();
    for r in records {
        let key = (r.alpha, r.branch);
        match groups.iter_mut().find(|(k, _)| k.0.to_bits() == key.0.to_bits() && k.1 == key.1) {
            Some((_, curve)) => curve.push((r.phi, r.e0)),
            None => groups.push((key, vec![(r.phi, r.e0)])),
        }
    }
    groups
        .into_iter()
        .map(|((alpha, branch), curve)| {
            let e_max = curve.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
            let e_min = curve.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
            Ok(VisibilityPoint {
                alpha,
                branch,
                e_max,
                e_min,
                visibility: visibility(&curve)?,
            })
        })
        .collect()
}
