//! One-step transitions for Glauber dynamics and stochastic cellular automata.
//!
//! Glauber picks one vertex uniformly and flips it with the heat-bath
//! probability `1 / (1 + e^{2β h̃_x σ_x})`. SCA redraws every spin
//! simultaneously from fields frozen at the incoming configuration; spin `x`
//! flips with probability `1 / (1 + e^{β h̃_x σ_x + 2q})`.
//!
//! Randomness is consumed in a fixed order so that a seeded generator yields
//! the same trajectory on every run: Glauber draws the vertex and then one
//! uniform variate; SCA draws one uniform variate per vertex in order
//! `0..|V|`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{IsingModel, SpinConfiguration};
use crate::numeric::{log_2cosh, logistic_complement};

/// Inverse temperature and pinning parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerParams {
    pub beta: f64,
    pub q: f64,
}

impl SamplerParams {
    pub fn new(beta: f64, q: f64) -> Result<Self> {
        for (name, value) in [("beta", beta), ("q", q)] {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and nonnegative, got {value}"
                )));
            }
        }
        Ok(Self { beta, q })
    }

    /// Glauber ignores `q`.
    pub fn glauber(beta: f64) -> Result<Self> {
        Self::new(beta, 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepStats {
    /// Spins changed by this step.
    pub flips: usize,
    pub energy_after: f64,
}

/// Which kernel a chain runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Kernel {
    Glauber,
    #[default]
    Sca,
}

/// Probability that the Glauber kernel flips `x` once `x` has been chosen.
#[inline]
pub(crate) fn glauber_flip_probability(beta: f64, cavity: f64, spin: i8) -> f64 {
    logistic_complement(2.0 * beta * cavity * f64::from(spin))
}

/// Probability that SCA flips spin `x`.
#[inline]
pub(crate) fn sca_flip_probability(beta: f64, q: f64, cavity: f64, spin: i8) -> f64 {
    logistic_complement(beta * cavity * f64::from(spin) + 2.0 * q)
}

/// One Glauber update. Reports `flips ∈ {0, 1}`.
pub fn glauber_step<R: Rng + ?Sized>(
    model: &IsingModel,
    params: &SamplerParams,
    sigma: &SpinConfiguration,
    rng: &mut R,
) -> Result<(SpinConfiguration, StepStats)> {
    model.check_len(sigma)?;
    let mut next = sigma.clone();
    let stats = glauber_step_in_place(model, params.beta, &mut next, rng);
    Ok((next, stats))
}

pub(crate) fn glauber_step_in_place<R: Rng + ?Sized>(
    model: &IsingModel,
    beta: f64,
    sigma: &mut SpinConfiguration,
    rng: &mut R,
) -> StepStats {
    let n = model.n_vertices();
    let x = rng.gen_range(0..n);
    let s = sigma.spins();
    let p = glauber_flip_probability(beta, model.cavity_field_unchecked(s, x), s[x]);
    let u: f64 = rng.gen();
    let flips = if u < p {
        sigma.flip(x);
        1
    } else {
        0
    };
    StepStats {
        flips,
        energy_after: model.energy_unchecked(sigma.spins()),
    }
}

/// One synchronous SCA update: every spin is redrawn from fields read off the
/// incoming configuration.
pub fn sca_step<R: Rng + ?Sized>(
    model: &IsingModel,
    params: &SamplerParams,
    sigma: &SpinConfiguration,
    rng: &mut R,
) -> Result<(SpinConfiguration, StepStats)> {
    model.check_len(sigma)?;
    let mut next = sigma.clone();
    let mut scratch = Vec::with_capacity(model.n_vertices());
    let stats = sca_step_in_place(model, params.beta, params.q, &mut next, &mut scratch, rng);
    Ok((next, stats))
}

pub(crate) fn sca_step_in_place<R: Rng + ?Sized>(
    model: &IsingModel,
    beta: f64,
    q: f64,
    sigma: &mut SpinConfiguration,
    flip_probs: &mut Vec<f64>,
    rng: &mut R,
) -> StepStats {
    let n = model.n_vertices();
    flip_probs.clear();
    {
        let s = sigma.spins();
        flip_probs.extend((0..n).map(|x| sca_flip_probability(beta, q, model.cavity_field_unchecked(s, x), s[x])));
    }
    let spins = sigma.spins_mut();
    let mut flips = 0;
    for (s, &p) in spins.iter_mut().zip(flip_probs.iter()) {
        let u: f64 = rng.gen();
        if u < p {
            *s = -*s;
            flips += 1;
        }
    }
    StepStats {
        flips,
        energy_after: model.energy_unchecked(sigma.spins()),
    }
}

/// The per-spin factorisation of the SCA flip probability into a
/// selection probability `epsilon` and a heat-bath probability `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlipFactors {
    /// `e^{-q} cosh(β h̃/2) / cosh(β h̃/2 + q σ)`.
    pub epsilon: f64,
    /// `e^{-β h̃ σ/2} / (2 cosh(β h̃/2))`.
    pub p: f64,
}

impl FlipFactors {
    pub fn product(&self) -> f64 {
        self.epsilon * self.p
    }
}

/// `(ε_x, p_x)` for every vertex; `ε_x p_x` is the SCA flip probability of `x`.
pub fn sca_flip_factors(
    model: &IsingModel,
    params: &SamplerParams,
    sigma: &SpinConfiguration,
) -> Result<Vec<FlipFactors>> {
    let fields = model.cavity_fields(sigma)?;
    Ok(fields
        .iter()
        .zip(sigma.spins())
        .map(|(&h, &s)| {
            let half = 0.5 * params.beta * h;
            let sign = f64::from(s);
            let log_eps = -params.q + log_2cosh(half) - log_2cosh(half + params.q * sign);
            FlipFactors {
                epsilon: log_eps.exp(),
                p: logistic_complement(params.beta * h * sign),
            }
        })
        .collect())
}

/// `(1/|V|) Σ_x 1 / (e^{2β h̃_x σ_x} + 1)`: the mean number of spins a single
/// Glauber update changes.
pub fn expected_flips_glauber(model: &IsingModel, beta: f64, sigma: &SpinConfiguration) -> Result<f64> {
    let fields = model.cavity_fields(sigma)?;
    let total: f64 = fields
        .iter()
        .zip(sigma.spins())
        .map(|(&h, &s)| glauber_flip_probability(beta, h, s))
        .sum();
    Ok(total / model.n_vertices() as f64)
}

/// `Σ_x 1 / (e^{β h̃_x σ_x + 2q} + 1)`: the mean number of spins one SCA update
/// changes.
pub fn expected_flips_sca(model: &IsingModel, beta: f64, q: f64, sigma: &SpinConfiguration) -> Result<f64> {
    let fields = model.cavity_fields(sigma)?;
    Ok(fields
        .iter()
        .zip(sigma.spins())
        .map(|(&h, &s)| sca_flip_probability(beta, q, h, s))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pair() -> IsingModel {
        IsingModel::new(2, &[(0, 1, 1.0)], vec![0.0, 0.0]).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(SamplerParams::new(-0.1, 0.0).is_err());
        assert!(SamplerParams::new(0.0, f64::NAN).is_err());
        assert!(SamplerParams::new(1.0, 2.0).is_ok());
    }

    #[test]
    fn glauber_flip_probabilities() {
        // β=0: one half regardless of the field.
        assert_eq!(glauber_flip_probability(0.0, 3.0, 1), 0.5);
        // zero field: one half at any β.
        assert_eq!(glauber_flip_probability(7.0, 0.0, -1), 0.5);
        // pair, β=1, σ=(+,+): (1/2) e^{-1} / (2 cosh 1)
        let p = 0.5 * glauber_flip_probability(1.0, 1.0, 1);
        assert!((p - 0.059_601_461_011_058_78).abs() < 1e-15);
    }

    #[test]
    fn sca_flip_probability_examples() {
        for q in [0.0f64, 0.3, 2.0] {
            let want = 1.0 / ((2.0 * q).exp() + 1.0);
            assert!((sca_flip_probability(0.0, q, 5.0, 1) - want).abs() < 1e-15);
        }
        // 1 vertex, h=1, β=2, q=1: (e^4 + 1)^{-1}
        let p = sca_flip_probability(2.0, 1.0, 1.0, 1);
        assert!((p - 0.017_986_209_962_091_56).abs() < 1e-15);
    }

    #[test]
    fn flip_factor_examples() {
        let m = IsingModel::new(3, &[(0, 1, 1.0), (1, 2, -0.5)], vec![0.2, 0.0, -1.0]).unwrap();
        let s = SpinConfiguration::new(vec![1, -1, 1]).unwrap();
        let f = sca_flip_factors(&m, &SamplerParams::new(1.3, 0.0).unwrap(), &s).unwrap();
        assert!(f.iter().all(|ff| (ff.epsilon - 1.0).abs() < 1e-15));

        let q: f64 = 0.7;
        let f = sca_flip_factors(&m, &SamplerParams::new(0.0, q).unwrap(), &s).unwrap();
        for ff in &f {
            assert_eq!(ff.p, 0.5);
            assert!((ff.product() - 1.0 / ((2.0 * q).exp() + 1.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn expected_flip_examples() {
        let m = pair();
        let up = SpinConfiguration::all_up(2);
        assert_eq!(expected_flips_glauber(&m, 0.0, &up).unwrap(), 0.5);
        let lone = IsingModel::empty(1).unwrap();
        assert_eq!(
            expected_flips_glauber(&lone, 4.0, &SpinConfiguration::all_up(1)).unwrap(),
            0.5
        );
        let g = expected_flips_glauber(&m, 1.0, &up).unwrap();
        assert!((g - 0.119_202_922_022_117_56).abs() < 1e-15);

        assert_eq!(expected_flips_sca(&m, 0.0, 0.0, &up).unwrap(), 1.0);
        assert!(expected_flips_sca(&m, 0.5, 20.0, &up).unwrap() < 1e-15 * 2.0);
        let s = expected_flips_sca(&m, 1.0, 0.2, &up).unwrap();
        assert!((s - 0.395_632_222_882_836_5).abs() < 1e-14);
    }

    #[test]
    fn glauber_reports_at_most_one_flip_and_energy() {
        let m = pair();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut s = SpinConfiguration::all_up(2);
        for _ in 0..200 {
            let (next, stats) = glauber_step(&m, &SamplerParams::glauber(0.4).unwrap(), &s, &mut rng).unwrap();
            assert!(stats.flips <= 1);
            assert_eq!(stats.flips, next.hamming(&s));
            assert_eq!(stats.energy_after, m.hamiltonian(&next).unwrap());
            s = next;
        }
    }

    #[test]
    fn sca_reads_fields_from_incoming_state() {
        // At q=0 and huge β, each spin aligns with its incoming field, so a
        // ferromagnetic pair in (+,-) swaps to (-,+) rather than settling.
        let m = pair();
        let params = SamplerParams::new(1e6, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = SpinConfiguration::new(vec![1, -1]).unwrap();
        let (next, stats) = sca_step(&m, &params, &s, &mut rng).unwrap();
        assert_eq!(next.spins(), &[-1, 1]);
        assert_eq!(stats.flips, 2);
    }

    #[test]
    fn seeded_steps_are_reproducible() {
        let m = IsingModel::new(4, &[(0, 1, 1.0), (1, 2, -1.0), (2, 3, 0.5)], vec![0.1; 4]).unwrap();
        let params = SamplerParams::new(0.8, 0.3).unwrap();
        let run = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut s = SpinConfiguration::all_down(4);
            let mut out = Vec::new();
            for _ in 0..50 {
                let (n, _) = sca_step(&m, &params, &s, &mut rng).unwrap();
                let (n, _) = glauber_step(&m, &params, &n, &mut rng).unwrap();
                out.push(n.index());
                s = n;
            }
            out
        };
        assert_eq!(run(9), run(9));
        assert_ne!(run(9), run(10));
    }
}
