//! Exact enumeration over `{±1}^V` for small instances.
//!
//! Configurations are indexed by the integer whose bit `x` is set iff
//! `σ_x = +1`. Every distribution and kernel in this module uses that order.
//! Weights are handled in the log domain throughout.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dynamics::{glauber_flip_probability, Kernel, SamplerParams};
use crate::error::{Error, Result};
use crate::model::{decode_into, IsingModel, SpinConfiguration, DEFAULT_ENUMERATION_CAP};
use crate::numeric::{log1p_exp, log_sum_exp, logistic_complement, pairwise_sum_by};

/// Default vertex cap for explicit `2^|V| x 2^|V|` kernels.
pub const DEFAULT_MATRIX_CAP: usize = 12;

/// Absolute tolerance (log-probability or energy units, scaled by the
/// magnitude involved) under which two values count as tied.
const TIE_TOLERANCE: f64 = 1e-12;

/// Vertex caps for enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub distribution: usize,
    pub matrix: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            distribution: DEFAULT_ENUMERATION_CAP,
            matrix: DEFAULT_MATRIX_CAP,
        }
    }
}

/// An explicit probability vector over all `2^|V|` configurations, stored as
/// log-probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteDistribution {
    #[serde(rename = "n")]
    n_vertices: usize,
    #[serde(serialize_with = "ser_log_probs", deserialize_with = "de_log_probs")]
    log_probs: Vec<f64>,
}

fn ser_log_probs<S: Serializer>(v: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|&x| if x == f64::NEG_INFINITY { None } else { Some(x) }))
}

fn de_log_probs<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<f64>, D::Error> {
    let raw: Vec<Option<f64>> = Vec::deserialize(d)?;
    Ok(raw.into_iter().map(|x| x.unwrap_or(f64::NEG_INFINITY)).collect())
}

impl DiscreteDistribution {
    /// Normalises arbitrary log-weights with log-sum-exp.
    pub fn from_log_weights(n_vertices: usize, mut log_weights: Vec<f64>) -> Result<Self> {
        if log_weights.len() as u64 != 1u64 << n_vertices {
            return Err(Error::InvalidParameter(format!(
                "{} weights for {n_vertices} vertices",
                log_weights.len()
            )));
        }
        if log_weights.iter().any(|w| w.is_nan() || *w == f64::INFINITY) {
            return Err(Error::InvalidParameter("log-weights must not be NaN or +inf".into()));
        }
        let log_z = log_sum_exp(&log_weights);
        if log_z == f64::NEG_INFINITY {
            return Err(Error::InvalidParameter("all weights are zero".into()));
        }
        log_weights.iter_mut().for_each(|w| *w -= log_z);
        Ok(Self {
            n_vertices,
            log_probs: log_weights,
        })
    }

    pub fn uniform(n_vertices: usize) -> Self {
        let len = 1usize << n_vertices;
        Self {
            n_vertices,
            log_probs: vec![-(len as f64).ln(); len],
        }
    }

    pub fn point_mass(n_vertices: usize, index: u64) -> Self {
        let mut log_probs = vec![f64::NEG_INFINITY; 1usize << n_vertices];
        log_probs[index as usize] = 0.0;
        Self { n_vertices, log_probs }
    }

    /// Empirical distribution of observed configuration indices.
    pub fn empirical(n_vertices: usize, counts: impl IntoIterator<Item = (u64, u64)>) -> Result<Self> {
        let mut weights = vec![0.0f64; 1usize << n_vertices];
        for (index, c) in counts {
            let slot = weights.get_mut(index as usize).ok_or_else(|| {
                Error::InvalidParameter(format!("index {index} out of range for {n_vertices} vertices"))
            })?;
            *slot += c as f64;
        }
        Self::from_log_weights(n_vertices, weights.into_iter().map(f64::ln).collect())
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn len(&self) -> usize {
        self.log_probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_probs.is_empty()
    }

    pub fn log_probs(&self) -> &[f64] {
        &self.log_probs
    }

    pub fn prob(&self, index: u64) -> f64 {
        self.log_probs[index as usize].exp()
    }

    pub fn probs(&self) -> Vec<f64> {
        self.log_probs.iter().map(|l| l.exp()).collect()
    }

    /// Re-normalises after a lossy round trip (e.g. through JSON).
    pub fn renormalized(&self) -> Result<Self> {
        Self::from_log_weights(self.n_vertices, self.log_probs.clone())
    }

    /// All indices attaining the maximum probability, ascending.
    pub fn modes(&self) -> Vec<u64> {
        let max = self.log_probs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let tol = TIE_TOLERANCE * max.abs().max(1.0);
        self.log_probs
            .iter()
            .enumerate()
            .filter(|(_, &l)| l >= max - tol)
            .map(|(i, _)| i as u64)
            .collect()
    }
}

/// `½ Σ |μ - ν|`.
pub fn tv_distance(mu: &DiscreteDistribution, nu: &DiscreteDistribution) -> Result<f64> {
    if mu.len() != nu.len() {
        return Err(Error::DimensionMismatch {
            expected: mu.len(),
            actual: nu.len(),
        });
    }
    let diffs: Vec<f64> = mu
        .log_probs
        .iter()
        .zip(&nu.log_probs)
        .map(|(a, b)| (a.exp() - b.exp()).abs())
        .collect();
    Ok((0.5 * pairwise_sum_by(&diffs, |d| d)).min(1.0))
}

/// `H̃(σ, τ) = -½ Σ_{x,y} J_xy σ_x τ_y - ½ Σ_x h_x (σ_x + τ_x)`, the double
/// sum running over ordered pairs.
pub fn tilde_hamiltonian(model: &IsingModel, sigma: &SpinConfiguration, tau: &SpinConfiguration) -> Result<f64> {
    model.check_len(sigma)?;
    model.check_len(tau)?;
    Ok(tilde_unchecked(model, sigma.spins(), tau.spins()))
}

fn tilde_unchecked(model: &IsingModel, s: &[i8], t: &[i8]) -> f64 {
    let pair: f64 = model
        .edges()
        .iter()
        .map(|&(x, y, j)| j * f64::from(s[x] * t[y] + s[y] * t[x]))
        .sum();
    let field: f64 = model
        .fields()
        .iter()
        .enumerate()
        .map(|(x, h)| h * f64::from(s[x] + t[x]))
        .sum();
    -0.5 * pair - 0.5 * field
}

/// `log w^SCA(σ)` from the closed product form
/// `-βH(σ) + |V|q + Σ_x log(1 + e^{-2q} e^{-β h̃_x σ_x})`.
pub fn sca_weight(model: &IsingModel, beta: f64, q: f64, sigma: &SpinConfiguration) -> Result<f64> {
    model.check_len(sigma)?;
    Ok(sca_log_weight_unchecked(model, beta, q, sigma.spins()))
}

fn sca_log_weight_unchecked(model: &IsingModel, beta: f64, q: f64, s: &[i8]) -> f64 {
    let n = model.n_vertices();
    let corrections: f64 = (0..n)
        .map(|x| log1p_exp(-2.0 * q - beta * model.cavity_field_unchecked(s, x) * f64::from(s[x])))
        .sum();
    -beta * model.energy_unchecked(s) + n as f64 * q + corrections
}

/// `log Σ_τ exp(-β H̃(σ, τ) + q Σ_x σ_x τ_x)`, summed over all `2^|V|` targets.
pub fn sca_log_weight_by_enumeration(model: &IsingModel, beta: f64, q: f64, sigma: &SpinConfiguration) -> Result<f64> {
    model.check_len(sigma)?;
    let n = model.n_vertices();
    check_cap("brute-force SCA weight", n, DEFAULT_ENUMERATION_CAP)?;
    let s = sigma.spins();
    let mut t = vec![0i8; n];
    let terms: Vec<f64> = (0..1u64 << n)
        .map(|tau| {
            decode_into(tau, &mut t);
            let overlap: i32 = s.iter().zip(&t).map(|(&a, &b)| i32::from(a * b)).sum();
            -beta * tilde_unchecked(model, s, &t) + q * f64::from(overlap)
        })
        .collect();
    Ok(log_sum_exp(&terms))
}

fn check_cap(what: &'static str, n_vertices: usize, cap: usize) -> Result<()> {
    if n_vertices > cap {
        return Err(Error::Capacity { what, n_vertices, cap });
    }
    Ok(())
}

/// A model together with the energies of all its configurations.
#[derive(Debug, Clone)]
pub struct Enumeration<'a> {
    model: &'a IsingModel,
    energies: Vec<f64>,
    caps: Caps,
}

impl<'a> Enumeration<'a> {
    pub fn new(model: &'a IsingModel, caps: Caps) -> Result<Self> {
        check_cap("exact enumeration", model.n_vertices(), caps.distribution)?;
        Ok(Self {
            model,
            energies: model.all_energies(caps.distribution)?,
            caps,
        })
    }

    pub fn model(&self) -> &IsingModel {
        self.model
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn n_states(&self) -> usize {
        self.energies.len()
    }

    pub fn ground_energy(&self) -> f64 {
        self.energies.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_energy(&self) -> f64 {
        self.energies.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `max H - min H`.
    pub fn range(&self) -> f64 {
        self.max_energy() - self.ground_energy()
    }

    /// Indices of every minimum-energy configuration, ascending.
    pub fn ground_state_indices(&self) -> Vec<u64> {
        let min = self.ground_energy();
        let tol = TIE_TOLERANCE * self.range().max(1.0);
        self.energies
            .iter()
            .enumerate()
            .filter(|(_, &e)| e <= min + tol)
            .map(|(i, _)| i as u64)
            .collect()
    }

    pub fn ground_states(&self) -> Vec<SpinConfiguration> {
        let n = self.model.n_vertices();
        self.ground_state_indices()
            .into_iter()
            .map(|i| SpinConfiguration::from_index(n, i))
            .collect()
    }

    /// `π^G_β ∝ e^{-βH}`.
    pub fn gibbs(&self, beta: f64) -> Result<DiscreteDistribution> {
        DiscreteDistribution::from_log_weights(
            self.model.n_vertices(),
            self.energies.iter().map(|e| -beta * e).collect(),
        )
    }

    /// `π^SCA_{β,q} ∝ w^SCA_{β,q}`, using the closed form for the weights.
    pub fn sca(&self, beta: f64, q: f64) -> Result<DiscreteDistribution> {
        let n = self.model.n_vertices();
        let mut s = vec![0i8; n];
        let weights = (0..self.n_states() as u64)
            .map(|i| {
                decode_into(i, &mut s);
                sca_log_weight_unchecked(self.model, beta, q, &s)
            })
            .collect();
        DiscreteDistribution::from_log_weights(n, weights)
    }

    /// Mean of `H` and of `H²` under the uniform distribution.
    pub fn uniform_moments(&self) -> (f64, f64) {
        let len = self.n_states() as f64;
        (
            pairwise_sum_by(&self.energies, |e| e) / len,
            pairwise_sum_by(&self.energies, |e| e * e) / len,
        )
    }

    /// Checks `μ(σ) ≥ μ(τ) ⇒ H(σ) ≤ H(τ) + ε r_h` over all ordered pairs.
    ///
    /// Configurations are visited by increasing `μ`, one tie group at a time;
    /// the running minimum of `H` over everything visited so far (ties
    /// included) is the best `τ` for every `σ` in the current group.
    pub fn check_order_preservation(
        &self,
        mu: &DiscreteDistribution,
        epsilon: f64,
        r_h: f64,
    ) -> Result<ClosenessReport> {
        if mu.len() != self.n_states() {
            return Err(Error::DimensionMismatch {
                expected: self.n_states(),
                actual: mu.len(),
            });
        }
        if epsilon.is_nan() || epsilon < 0.0 || r_h.is_nan() || r_h < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "epsilon and r_h must be nonnegative, got {epsilon} and {r_h}"
            )));
        }
        let lp = mu.log_probs();
        let mut order: Vec<usize> = (0..lp.len()).collect();
        order.sort_by(|&a, &b| {
            lp[a]
                .total_cmp(&lp[b])
                .then(self.energies[a].total_cmp(&self.energies[b]))
        });

        let slack = epsilon * r_h;
        let mut best_tau = order[0];
        let mut margin = f64::NEG_INFINITY;
        let mut worst = (order[0], order[0]);
        let mut start = 0;
        while start < order.len() {
            let mut end = start + 1;
            while end < order.len() && lp[order[end]] == lp[order[start]] {
                end += 1;
            }
            let group = &order[start..end];
            for &i in group {
                if self.energies[i] < self.energies[best_tau] {
                    best_tau = i;
                }
            }
            for &i in group {
                let m = self.energies[i] - self.energies[best_tau] - slack;
                if m > margin {
                    margin = m;
                    worst = (i, best_tau);
                }
            }
            start = end;
        }
        let is_close = margin <= 0.0;
        Ok(ClosenessReport {
            is_close,
            epsilon,
            margin,
            worst_pair: (!is_close).then_some((worst.0 as u64, worst.1 as u64)),
        })
    }

    /// The exact kernel of the given chain as a `2^|V| x 2^|V|` matrix.
    pub fn transition_matrix(&self, params: &SamplerParams, kind: Kernel) -> Result<TransitionMatrix> {
        let n = self.model.n_vertices();
        check_cap("an explicit transition matrix", n, self.caps.matrix)?;
        let size = self.n_states();
        let mut log_entries = vec![f64::NEG_INFINITY; size * size];
        let mut s = vec![0i8; n];
        for (i, row) in log_entries.chunks_mut(size).enumerate() {
            decode_into(i as u64, &mut s);
            match kind {
                Kernel::Glauber => glauber_row(self.model, params.beta, &s, i, row),
                Kernel::Sca => sca_row(self.model, params.beta, params.q, &s, row),
            }
        }
        Ok(TransitionMatrix { size, log_entries })
    }
}

fn glauber_row(model: &IsingModel, beta: f64, s: &[i8], index: usize, row: &mut [f64]) {
    let n = model.n_vertices();
    let inv_n = 1.0 / n as f64;
    let mut stay = 0.0;
    for x in 0..n {
        let cavity = model.cavity_field_unchecked(s, x);
        let p_flip = glauber_flip_probability(beta, cavity, s[x]);
        row[index ^ (1 << x)] = (inv_n * p_flip).ln();
        stay += inv_n * logistic_complement(-2.0 * beta * cavity * f64::from(s[x]));
    }
    row[index] = stay.ln();
}

/// Fills the product kernel by doubling: after processing vertex `x` the first
/// `2^{x+1}` slots hold the log-probabilities of the low `x+1` target spins.
fn sca_row(model: &IsingModel, beta: f64, q: f64, s: &[i8], row: &mut [f64]) {
    row[0] = 0.0;
    for x in 0..s.len() {
        let a = beta * model.cavity_field_unchecked(s, x) * f64::from(s[x]) + 2.0 * q;
        let log_flip = -log1p_exp(a);
        let log_stay = -log1p_exp(-a);
        let (log_up, log_down) = if s[x] == 1 {
            (log_stay, log_flip)
        } else {
            (log_flip, log_stay)
        };
        let half = 1usize << x;
        for t in 0..half {
            let base = row[t];
            row[t] = base + log_down;
            row[t + half] = base + log_up;
        }
    }
}

/// Row-stochastic kernel stored as log-probabilities, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    size: usize,
    log_entries: Vec<f64>,
}

impl TransitionMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn log_prob(&self, from: usize, to: usize) -> f64 {
        self.log_entries[from * self.size + to]
    }

    pub fn prob(&self, from: usize, to: usize) -> f64 {
        self.log_prob(from, to).exp()
    }

    pub fn log_row(&self, from: usize) -> &[f64] {
        &self.log_entries[from * self.size..(from + 1) * self.size]
    }

    pub fn row(&self, from: usize) -> Vec<f64> {
        self.log_row(from).iter().map(|l| l.exp()).collect()
    }

    /// Largest `|Σ_τ P(σ, τ) - 1|` over rows.
    pub fn max_row_sum_error(&self) -> f64 {
        (0..self.size)
            .map(|i| (pairwise_sum_by(self.log_row(i), f64::exp) - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Largest relative violation of `π(σ)P(σ,τ) = π(τ)P(τ,σ)`, evaluated in
    /// the log domain so tiny entries do not underflow.
    pub fn detailed_balance_residual(&self, pi: &DiscreteDistribution) -> Result<f64> {
        self.check_dim(pi)?;
        let lp = pi.log_probs();
        let mut worst = 0.0f64;
        for i in 0..self.size {
            for j in (i + 1)..self.size {
                let a = lp[i] + self.log_prob(i, j);
                let b = lp[j] + self.log_prob(j, i);
                let r = match (a == f64::NEG_INFINITY, b == f64::NEG_INFINITY) {
                    (true, true) => 0.0,
                    (true, false) | (false, true) => 1.0,
                    _ => -(-(a - b).abs()).exp_m1(),
                };
                worst = worst.max(r);
            }
        }
        Ok(worst)
    }

    /// `‖πP - π‖_∞`.
    pub fn stationarity_residual(&self, pi: &DiscreteDistribution) -> Result<f64> {
        self.check_dim(pi)?;
        let p = pi.probs();
        let mut next = vec![0.0; self.size];
        for (i, &pi_i) in p.iter().enumerate() {
            for (slot, l) in next.iter_mut().zip(self.log_row(i)) {
                *slot += pi_i * l.exp();
            }
        }
        Ok(next.iter().zip(&p).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }

    fn check_dim(&self, pi: &DiscreteDistribution) -> Result<()> {
        if pi.len() != self.size {
            return Err(Error::DimensionMismatch {
                expected: self.size,
                actual: pi.len(),
            });
        }
        Ok(())
    }
}

/// Outcome of an order-preservation check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosenessReport {
    pub is_close: bool,
    pub epsilon: f64,
    /// `max H(σ) - H(τ) - ε r_h` over ordered pairs with `μ(σ) ≥ μ(τ)`.
    pub margin: f64,
    /// `(σ, τ)` indices attaining the margin, when it is positive.
    pub worst_pair: Option<(u64, u64)>,
}

pub fn gibbs_distribution(model: &IsingModel, beta: f64) -> Result<DiscreteDistribution> {
    Enumeration::new(model, Caps::default())?.gibbs(beta)
}

pub fn sca_distribution(model: &IsingModel, beta: f64, q: f64) -> Result<DiscreteDistribution> {
    Enumeration::new(model, Caps::default())?.sca(beta, q)
}

pub fn transition_matrix(model: &IsingModel, params: &SamplerParams, kind: Kernel) -> Result<TransitionMatrix> {
    check_cap("an explicit transition matrix", model.n_vertices(), DEFAULT_MATRIX_CAP)?;
    Enumeration::new(model, Caps::default())?.transition_matrix(params, kind)
}

pub fn check_order_preservation(
    model: &IsingModel,
    mu: &DiscreteDistribution,
    epsilon: f64,
    r_h: f64,
) -> Result<ClosenessReport> {
    Enumeration::new(model, Caps::default())?.check_order_preservation(mu, epsilon, r_h)
}

pub fn ground_states(model: &IsingModel) -> Result<Vec<SpinConfiguration>> {
    Ok(Enumeration::new(model, Caps::default())?.ground_states())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(j: f64) -> IsingModel {
        IsingModel::new(2, &[(0, 1, j)], vec![0.0, 0.0]).unwrap()
    }

    fn triangle() -> IsingModel {
        IsingModel::new(3, &[(0, 1, -1.0), (1, 2, -1.0), (0, 2, -1.0)], vec![0.0; 3]).unwrap()
    }

    fn lone(h: f64) -> IsingModel {
        IsingModel::with_fields(vec![h]).unwrap()
    }

    #[test]
    fn gibbs_examples() {
        let m = triangle();
        let g = gibbs_distribution(&m, 0.0).unwrap();
        assert!(g.probs().iter().all(|p| (p - 0.125).abs() < 1e-15));

        let g = gibbs_distribution(&lone(1.0), 1.0).unwrap();
        assert!((g.prob(1) - 0.880_797_077_977_882_4).abs() < 1e-15);

        let g = gibbs_distribution(&pair(1.0), 50.0).unwrap();
        assert!((g.prob(0b11) - 0.5).abs() < 1e-15);
        assert!((g.prob(0b00) - 0.5).abs() < 1e-15);
        assert_eq!(g.modes(), vec![0, 3]);
    }

    #[test]
    fn tilde_hamiltonian_examples() {
        let m = IsingModel::new(3, &[(0, 1, 0.7), (1, 2, -1.3)], vec![0.2, -0.4, 0.9]).unwrap();
        for i in 0..8 {
            let s = SpinConfiguration::from_index(3, i);
            assert!((tilde_hamiltonian(&m, &s, &s).unwrap() - m.hamiltonian(&s).unwrap()).abs() < 1e-14);
            for j in 0..8 {
                let t = SpinConfiguration::from_index(3, j);
                assert_eq!(
                    tilde_hamiltonian(&m, &s, &t).unwrap(),
                    tilde_hamiltonian(&m, &t, &s).unwrap()
                );
            }
        }
        let s = SpinConfiguration::new(vec![1, 1]).unwrap();
        let t = SpinConfiguration::new(vec![1, -1]).unwrap();
        assert_eq!(tilde_hamiltonian(&pair(1.0), &s, &t).unwrap(), 0.0);
    }

    #[test]
    fn sca_weight_examples() {
        let m = IsingModel::new(3, &[(0, 1, 0.7), (1, 2, -1.3)], vec![0.2, -0.4, 0.9]).unwrap();
        let q: f64 = 0.8;
        let want = 3.0 * (2.0 * q.cosh()).ln();
        for i in 0..8 {
            let s = SpinConfiguration::from_index(3, i);
            assert!((sca_weight(&m, 0.0, q, &s).unwrap() - want).abs() < 1e-14);
        }
        // q = 0, lone spin h=1, σ=+: w = e^β + 1
        let beta: f64 = 1.7;
        let w = sca_weight(&lone(1.0), beta, 0.0, &SpinConfiguration::all_up(1)).unwrap();
        assert!((w.exp() - (beta.exp() + 1.0)).abs() < 1e-12);
        let brute = sca_log_weight_by_enumeration(&lone(1.0), beta, 0.0, &SpinConfiguration::all_up(1)).unwrap();
        assert!((brute - w).abs() < 1e-14);
    }

    #[test]
    fn sca_distribution_examples() {
        let m = triangle();
        let d = sca_distribution(&m, 0.0, 1.3).unwrap();
        assert!(d.probs().iter().all(|p| (p - 0.125).abs() < 1e-15));

        let f = pair(1.0);
        let tv = tv_distance(
            &sca_distribution(&f, 1.0, 30.0).unwrap(),
            &gibbs_distribution(&f, 1.0).unwrap(),
        )
        .unwrap();
        assert!(tv < 1e-10);

        // lone spin h=1, β=1, q=1: ratio from the 2-term τ-sum per σ
        let d = sca_distribution(&lone(1.0), 1.0, 1.0).unwrap();
        let ratio = d.prob(1) / d.prob(0);
        assert!((ratio - 5.670_774_270_471_605).abs() < 1e-12);
    }

    #[test]
    fn transition_matrix_examples() {
        let m = pair(1.0);
        let p = transition_matrix(&m, &SamplerParams::glauber(0.0).unwrap(), Kernel::Glauber).unwrap();
        for i in 0..4 {
            assert!((p.prob(i, i) - 0.5).abs() < 1e-15);
            assert!((p.prob(i, i ^ 1) - 0.25).abs() < 1e-15);
            assert!((p.prob(i, i ^ 2) - 0.25).abs() < 1e-15);
            assert_eq!(p.prob(i, i ^ 3), 0.0);
        }
        let p = transition_matrix(&m, &SamplerParams::glauber(1.0).unwrap(), Kernel::Glauber).unwrap();
        assert!((p.prob(3, 2) - 0.059_601_461_011_058_78).abs() < 1e-15);
        assert!(p.max_row_sum_error() < 1e-12);

        let p = transition_matrix(&lone(1.0), &SamplerParams::new(2.0, 1.0).unwrap(), Kernel::Sca).unwrap();
        assert!((p.prob(1, 0) - 0.017_986_209_962_091_56).abs() < 1e-15);

        let big = IsingModel::empty(13).unwrap();
        assert!(matches!(
            transition_matrix(&big, &SamplerParams::glauber(0.0).unwrap(), Kernel::Sca),
            Err(Error::Capacity { cap: 12, .. })
        ));
    }

    #[test]
    fn sca_kernel_matches_unreduced_form() {
        let m = IsingModel::new(3, &[(0, 1, 0.7), (1, 2, -1.3), (0, 2, 0.4)], vec![0.2, -0.4, 0.9]).unwrap();
        let (beta, q) = (1.1, 0.6);
        let p = transition_matrix(&m, &SamplerParams::new(beta, q).unwrap(), Kernel::Sca).unwrap();
        assert!(p.max_row_sum_error() < 1e-12);
        for i in 0..8 {
            let s = SpinConfiguration::from_index(3, i);
            let log_w = sca_weight(&m, beta, q, &s).unwrap();
            for j in 0..8 {
                let t = SpinConfiguration::from_index(3, j);
                let overlap: i32 = s.spins().iter().zip(t.spins()).map(|(&a, &b)| i32::from(a * b)).sum();
                let direct = (-beta * tilde_hamiltonian(&m, &s, &t).unwrap() + q * f64::from(overlap) - log_w).exp();
                assert!((p.prob(i as usize, j as usize) - direct).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn tv_examples() {
        let u = DiscreteDistribution::uniform(2);
        assert_eq!(tv_distance(&u, &u).unwrap(), 0.0);
        let a = DiscreteDistribution::point_mass(2, 0);
        let b = DiscreteDistribution::point_mass(2, 3);
        assert_eq!(tv_distance(&a, &b).unwrap(), 1.0);
        assert!((tv_distance(&u, &a).unwrap() - 0.75).abs() < 1e-15);
        assert!(tv_distance(&u, &DiscreteDistribution::uniform(3)).is_err());
    }

    #[test]
    fn order_preservation_examples() {
        let m = IsingModel::new(3, &[(0, 1, 0.7), (1, 2, -1.3)], vec![0.2, -0.4, 0.9]).unwrap();
        let ex = Enumeration::new(&m, Caps::default()).unwrap();
        let r_h = ex.range();

        let u = DiscreteDistribution::uniform(3);
        let rep = ex.check_order_preservation(&u, 1.0, r_h).unwrap();
        assert!(rep.is_close);
        assert!(rep.worst_pair.is_none());

        let rep = ex.check_order_preservation(&ex.gibbs(0.7).unwrap(), 0.0, r_h).unwrap();
        assert!(rep.is_close);

        let rep = ex.check_order_preservation(&u, 0.3, r_h).unwrap();
        assert!(!rep.is_close);
        let (s, t) = rep.worst_pair.unwrap();
        let gap = ex.energies()[s as usize] - ex.energies()[t as usize];
        assert!((gap - r_h).abs() < 1e-12);
        assert!((rep.margin - 0.7 * r_h).abs() < 1e-12);
    }

    #[test]
    fn ground_state_examples() {
        let gs = ground_states(&pair(1.0)).unwrap();
        assert_eq!(gs, vec![SpinConfiguration::all_down(2), SpinConfiguration::all_up(2)]);
        assert_eq!(ground_states(&lone(1.0)).unwrap(), vec![SpinConfiguration::all_up(1)]);
        let tri = triangle();
        let ex = Enumeration::new(&tri, Caps::default()).unwrap();
        assert_eq!(ex.ground_state_indices().len(), 6);
        assert_eq!(ex.ground_energy(), -1.0);
        assert!(matches!(
            ground_states(&IsingModel::empty(21).unwrap()),
            Err(Error::Capacity { cap: 20, .. })
        ));
    }

    #[test]
    fn distribution_json_round_trip() {
        let d = DiscreteDistribution::point_mass(2, 1);
        let text = serde_json::to_string(&d).unwrap();
        assert_eq!(text, r#"{"n":2,"log_probs":[null,0.0,null,null]}"#);
        let back: DiscreteDistribution = serde_json::from_str(&text).unwrap();
        assert_eq!(back, d);

        let g = gibbs_distribution(&triangle(), 0.9).unwrap();
        let back: DiscreteDistribution = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        let total: f64 = back.renormalized().unwrap().probs().iter().sum();
        assert!((total - 1.0).abs() < 1e-10);
    }
}
