//! Ensemble ground-state search: many independent chains from uniform random
//! starts, aggregated into an occupancy profile of their final states.
//!
//! Chain `j` draws from a ChaCha8 stream seeded with `seed ^ j`, so a chain's
//! trajectory depends only on the model, the configuration and its own index.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::dynamics::{glauber_step_in_place, sca_step_in_place, Kernel};
use crate::error::{Error, Result};
use crate::model::{IsingModel, SpinConfiguration};

/// Piecewise-constant inverse-temperature schedule.
///
/// Breakpoint `(step, β)` sets the inverse temperature used from that step
/// until the next breakpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(u64, f64)>", into = "Vec<(u64, f64)>")]
pub struct Schedule {
    breakpoints: Vec<(u64, f64)>,
}

impl Schedule {
    pub fn new(breakpoints: Vec<(u64, f64)>) -> Result<Self> {
        let Some(&(first, _)) = breakpoints.first() else {
            return Err(Error::InvalidSchedule("schedule has no breakpoints".into()));
        };
        if first != 0 {
            return Err(Error::InvalidSchedule(format!(
                "breakpoint 0 starts at step {first}; the first breakpoint must be at step 0"
            )));
        }
        for (i, &(step, beta)) in breakpoints.iter().enumerate() {
            if !beta.is_finite() || beta < 0.0 {
                return Err(Error::InvalidSchedule(format!(
                    "breakpoint {i} (step {step}) has beta {beta}; beta must be finite and nonnegative"
                )));
            }
            if i > 0 && step <= breakpoints[i - 1].0 {
                return Err(Error::InvalidSchedule(format!(
                    "breakpoint {i} (step {step}) does not come after step {}",
                    breakpoints[i - 1].0
                )));
            }
        }
        Ok(Self { breakpoints })
    }

    pub fn breakpoints(&self) -> &[(u64, f64)] {
        &self.breakpoints
    }

    /// β in effect at `step`.
    pub fn beta_at(&self, step: u64) -> f64 {
        let i = self.breakpoints.partition_point(|&(s, _)| s <= step);
        self.breakpoints[i - 1].1
    }
}

impl TryFrom<Vec<(u64, f64)>> for Schedule {
    type Error = Error;

    fn try_from(v: Vec<(u64, f64)>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Schedule> for Vec<(u64, f64)> {
    fn from(s: Schedule) -> Self {
        s.breakpoints
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Constant β, ignored when a schedule is given.
    pub beta: f64,
    pub q: f64,
    /// SCA: full sweeps. Glauber: single-site updates.
    pub n_steps: u64,
    pub n_chains: u64,
    pub seed: u64,
    pub record_trace: bool,
    pub schedule: Option<Schedule>,
    #[serde(default)]
    pub kernel: Kernel,
}

impl SearchConfig {
    pub fn new(beta: f64, q: f64, n_steps: u64, n_chains: u64, seed: u64) -> Self {
        Self {
            beta,
            q,
            n_steps,
            n_chains,
            seed,
            record_trace: false,
            schedule: None,
            kernel: Kernel::Sca,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [("beta", self.beta), ("q", self.q)] {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and nonnegative, got {value}"
                )));
            }
        }
        if self.n_chains == 0 {
            return Err(Error::InvalidParameter("n_chains must be positive".into()));
        }
        Ok(())
    }

    fn beta_at(&self, step: u64) -> f64 {
        self.schedule.as_ref().map_or(self.beta, |s| s.beta_at(step))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub step: u64,
    pub energy: f64,
    pub flips: usize,
}

/// Result of a single chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainOutcome {
    pub final_state: SpinConfiguration,
    pub best_state: SpinConfiguration,
    pub best_energy: f64,
    pub total_flips: u64,
    pub trace: Option<Vec<TracePoint>>,
    autocorr: (f64, f64),
}

/// Runs chain `chain_index` for `config.n_steps` steps from a uniform start.
pub fn run_chain(model: &IsingModel, config: &SearchConfig, chain_index: u64) -> Result<ChainOutcome> {
    config.validate()?;
    let n = model.n_vertices();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ chain_index);
    let spins: Vec<i8> = (0..n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
    let mut sigma = SpinConfiguration::new(spins)?;

    let mut energy = model.energy_unchecked(sigma.spins());
    let mut best_state = sigma.clone();
    let mut best_energy = energy;
    let mut total_flips = 0u64;
    let mut trace = config.record_trace.then(|| {
        vec![TracePoint {
            step: 0,
            energy,
            flips: 0,
        }]
    });
    let mut energies = Vec::with_capacity(config.n_steps as usize);
    let mut scratch = Vec::with_capacity(n);

    for step in 0..config.n_steps {
        let beta = config.beta_at(step);
        let stats = match config.kernel {
            Kernel::Sca => sca_step_in_place(model, beta, config.q, &mut sigma, &mut scratch, &mut rng),
            Kernel::Glauber => glauber_step_in_place(model, beta, &mut sigma, &mut rng),
        };
        energy = stats.energy_after;
        total_flips += stats.flips as u64;
        energies.push(energy);
        if energy < best_energy {
            best_energy = energy;
            best_state.clone_from(&sigma);
        }
        if let Some(t) = trace.as_mut() {
            t.push(TracePoint {
                step: step + 1,
                energy,
                flips: stats.flips,
            });
        }
    }

    Ok(ChainOutcome {
        final_state: sigma,
        best_state,
        best_energy,
        total_flips,
        trace,
        autocorr: lag1_sums(&energies),
    })
}

/// Numerator and denominator of the lag-1 autocorrelation about the series mean.
fn lag1_sums(series: &[f64]) -> (f64, f64) {
    if series.len() < 2 {
        return (0.0, 0.0);
    }
    let mean = series.iter().sum::<f64>() / series.len() as f64;
    let den = series.iter().map(|e| (e - mean).powi(2)).sum();
    let num = series.windows(2).map(|w| (w[0] - mean) * (w[1] - mean)).sum();
    (num, den)
}

/// Orders configurations by their binary encoding (vertex `|V|-1` most significant).
pub fn encoding_cmp(a: &SpinConfiguration, b: &SpinConfiguration) -> Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| a.spins().iter().rev().cmp(b.spins().iter().rev()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct ByEncoding(SpinConfiguration);

impl Ord for ByEncoding {
    fn cmp(&self, other: &Self) -> Ordering {
        encoding_cmp(&self.0, &other.0)
    }
}

impl PartialOrd for ByEncoding {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Occupancy of the chains' final states plus the best state seen anywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleProfile {
    pub n_vertices: usize,
    pub n_chains: u64,
    pub n_steps: u64,
    pub kernel: Kernel,
    counts: BTreeMap<ByEncoding, u64>,
    /// Most frequent final states, ascending by encoding.
    pub candidates: Vec<SpinConfiguration>,
    pub best_state: SpinConfiguration,
    pub best_energy: f64,
    /// Mean spins changed per step (per site update for Glauber).
    pub flips_per_update: f64,
    /// Mean spins changed per `|V|` site updates (per sweep for SCA).
    pub flips_per_sweep: f64,
    /// Pooled lag-1 autocorrelation of the energy series, a mixing diagnostic.
    pub energy_lag1_autocorrelation: Option<f64>,
    pub traces: Option<Vec<Vec<TracePoint>>>,
}

impl EnsembleProfile {
    /// `(configuration, count)` ascending by encoding.
    pub fn counts(&self) -> impl Iterator<Item = (&SpinConfiguration, u64)> {
        self.counts.iter().map(|(k, &c)| (&k.0, c))
    }

    pub fn count(&self, sigma: &SpinConfiguration) -> u64 {
        self.counts.get(&ByEncoding(sigma.clone())).copied().unwrap_or(0)
    }

    /// Counts keyed by the integer index, for models with at most 64 spins.
    pub fn counts_by_index(&self) -> Option<BTreeMap<u64, u64>> {
        (self.n_vertices <= 64).then(|| self.counts().map(|(s, c)| (s.index(), c)).collect())
    }

    /// JSON form: `{"counts": {index: count}, "candidates": [index], "best": {"index", "energy"}}`.
    ///
    /// Above 64 spins indices are written as `+`/`-` strings.
    pub fn to_json(&self) -> Value {
        let label = |s: &SpinConfiguration| -> Value {
            if self.n_vertices <= 64 {
                json!(s.index())
            } else {
                json!(s.to_string())
            }
        };
        let key = |s: &SpinConfiguration| -> String {
            if self.n_vertices <= 64 {
                s.index().to_string()
            } else {
                s.to_string()
            }
        };
        let counts: serde_json::Map<String, Value> = self.counts().map(|(s, c)| (key(s), json!(c))).collect();
        json!({
            "n_vertices": self.n_vertices,
            "n_chains": self.n_chains,
            "n_steps": self.n_steps,
            "kernel": self.kernel,
            "counts": counts,
            "candidates": self.candidates.iter().map(label).collect::<Vec<_>>(),
            "best": { "index": label(&self.best_state), "energy": self.best_energy },
            "diagnostics": {
                "flips_per_update": self.flips_per_update,
                "flips_per_sweep": self.flips_per_sweep,
                "energy_lag1_autocorrelation": self.energy_lag1_autocorrelation,
            },
        })
    }

    /// Writes recorded traces as CSV with header `chain,step,energy,flips`.
    pub fn write_trace_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "chain,step,energy,flips")?;
        for (chain, trace) in self.traces.iter().flatten().enumerate() {
            for p in trace {
                writeln!(out, "{chain},{},{},{}", p.step, p.energy, p.flips)?;
            }
        }
        Ok(())
    }
}

/// Runs all chains (in parallel on the current rayon pool) and aggregates them.
pub fn ensemble_search(model: &IsingModel, config: &SearchConfig) -> Result<EnsembleProfile> {
    config.validate()?;
    let outcomes: Vec<ChainOutcome> = (0..config.n_chains)
        .into_par_iter()
        .map(|j| run_chain(model, config, j))
        .collect::<Result<_>>()?;
    Ok(aggregate(model, config, outcomes))
}

fn aggregate(model: &IsingModel, config: &SearchConfig, outcomes: Vec<ChainOutcome>) -> EnsembleProfile {
    let n = model.n_vertices();
    let mut counts: BTreeMap<ByEncoding, u64> = BTreeMap::new();
    let mut best: Option<(f64, &SpinConfiguration)> = None;
    let (mut num, mut den, mut flips) = (0.0, 0.0, 0u64);
    for o in &outcomes {
        *counts.entry(ByEncoding(o.final_state.clone())).or_default() += 1;
        if best.is_none_or(|(e, _)| o.best_energy < e) {
            best = Some((o.best_energy, &o.best_state));
        }
        num += o.autocorr.0;
        den += o.autocorr.1;
        flips += o.total_flips;
    }
    let top = counts.values().copied().max().unwrap_or(0);
    let candidates = counts
        .iter()
        .filter(|(_, &c)| c == top)
        .map(|(k, _)| k.0.clone())
        .collect();
    let (best_energy, best_state) = best.map(|(e, s)| (e, s.clone())).expect("at least one chain");

    let updates = (config.n_steps * config.n_chains) as f64;
    let flips_per_update = if updates > 0.0 { flips as f64 / updates } else { 0.0 };
    let flips_per_sweep = match config.kernel {
        Kernel::Sca => flips_per_update,
        Kernel::Glauber => flips_per_update * n as f64,
    };
    let traces = config
        .record_trace
        .then(|| outcomes.into_iter().map(|o| o.trace.unwrap_or_default()).collect());

    EnsembleProfile {
        n_vertices: n,
        n_chains: config.n_chains,
        n_steps: config.n_steps,
        kernel: config.kernel,
        counts,
        candidates,
        best_state,
        best_energy,
        flips_per_update,
        flips_per_sweep,
        energy_lag1_autocorrelation: (den > 0.0).then(|| num / den),
        traces,
    }
}
