//! Shared fixtures: a seeded corpus of small models and independent reference
//! computations used to check the library.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sca_ising::{IsingModel, SpinConfiguration};
use statrs::distribution::{ChiSquared, ContinuousCDF};

pub const CORPUS_BETAS: [f64; 4] = [0.0, 0.5, 1.0, 2.0];
pub const CORPUS_QS: [f64; 4] = [0.0, 0.5, 1.0, 3.0];

pub struct CorpusModel {
    pub name: String,
    pub model: IsingModel,
}

/// Random graph on `n` vertices: each pair coupled with probability
/// `density`, couplings and fields uniform in `[-scale, scale]`.
pub fn random_model(rng: &mut ChaCha8Rng, n: usize, density: f64, scale: f64) -> IsingModel {
    let mut edges = Vec::new();
    for x in 0..n {
        for y in (x + 1)..n {
            if rng.gen::<f64>() < density {
                edges.push((x, y, rng.gen_range(-scale..=scale)));
            }
        }
    }
    let fields = (0..n).map(|_| rng.gen_range(-scale..=scale)).collect();
    IsingModel::new(n, &edges, fields).unwrap()
}

/// 24 models, |V| in 2..=8, couplings and fields within [-2, 2].
pub fn corpus() -> Vec<CorpusModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ca_1517);
    let densities = [0.3, 0.6, 1.0];
    let scales = [0.25, 0.5, 1.0, 2.0];
    (0..24)
        .map(|i| {
            let n = 2 + i % 7;
            let density = densities[i % 3];
            let scale = scales[(i / 3) % 4];
            let model = random_model(&mut rng, n, density, scale);
            CorpusModel {
                name: format!("m{i:02}(n={n},d={density},s={scale})"),
                model,
            }
        })
        .collect()
}

/// Field-dominated models large enough that ε√v > 2K̄ for ε ≤ 1.
pub fn wide_corpus() -> Vec<CorpusModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xf1e1d);
    [10usize, 12, 14, 16, 18]
        .into_iter()
        .map(|n| {
            let mut edges = Vec::new();
            for x in 0..n - 1 {
                edges.push((x, x + 1, rng.gen_range(-0.05..=0.05)));
            }
            let fields = (0..n)
                .map(|_| {
                    let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                    sign * rng.gen_range(0.8..=1.0)
                })
                .collect();
            CorpusModel {
                name: format!("wide(n={n})"),
                model: IsingModel::new(n, &edges, fields).unwrap(),
            }
        })
        .collect()
}

pub fn pair() -> IsingModel {
    IsingModel::new(2, &[(0, 1, 1.0)], vec![0.0, 0.0]).unwrap()
}

pub fn triangle() -> IsingModel {
    IsingModel::new(3, &[(0, 1, -1.0), (1, 2, -1.0), (0, 2, -1.0)], vec![0.0; 3]).unwrap()
}

pub fn configurations(n: usize) -> impl Iterator<Item = SpinConfiguration> {
    (0..1u64 << n).map(move |i| SpinConfiguration::from_index(n, i))
}

/// Energy by the double sum over ordered pairs, independent of the library's
/// edge-list evaluation.
pub fn energy_by_double_sum(model: &IsingModel, s: &SpinConfiguration) -> f64 {
    let n = model.n_vertices();
    let mut pair = 0.0;
    for x in 0..n {
        for y in 0..n {
            pair += model.coupling(x, y) * f64::from(s.spin(x) * s.spin(y));
        }
    }
    let field: f64 = (0..n).map(|x| model.fields()[x] * f64::from(s.spin(x))).sum();
    -0.5 * pair - field
}

/// All-pairs order-preservation margin, `O(4^|V|)`.
pub fn naive_margin(log_probs: &[f64], energies: &[f64], slack: f64) -> f64 {
    let mut margin = f64::NEG_INFINITY;
    for s in 0..log_probs.len() {
        for t in 0..log_probs.len() {
            if log_probs[s] >= log_probs[t] {
                margin = margin.max(energies[s] - energies[t] - slack);
            }
        }
    }
    margin
}

/// Pearson chi-square goodness of fit. Bins whose expected count is below 5
/// are pooled. Returns `(statistic, critical value at alpha, dof)`.
pub fn chi_square(observed: &[u64], expected_probs: &[f64], alpha: f64) -> (f64, f64, usize) {
    let total: u64 = observed.iter().sum();
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut pooled_o, mut pooled_e) = (0.0, 0.0);
    for (&o, &p) in observed.iter().zip(expected_probs) {
        let e = p * total as f64;
        if e < 5.0 {
            pooled_o += o as f64;
            pooled_e += e;
        } else {
            bins.push((o as f64, e));
        }
    }
    if pooled_e > 0.0 || pooled_o > 0.0 {
        bins.push((pooled_o, pooled_e.max(f64::MIN_POSITIVE)));
    }
    let stat: f64 = bins.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    let dof = bins.len().saturating_sub(1).max(1);
    let critical = ChiSquared::new(dof as f64).unwrap().inverse_cdf(1.0 - alpha);
    (stat, critical, dof)
}
