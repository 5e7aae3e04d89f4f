//! Stochastic cellular automata (SCA) and Glauber dynamics for finite Ising
//! models.
//!
//! * [`model`]: instances, configurations, energies and cavity fields.
//! * [`dynamics`]: one-step Glauber and SCA kernels and their expected flip counts.
//! * [`oracle`]: exact enumeration of equilibria, kernels, total variation and
//!   the order-preservation closeness check.
//! * [`bounds`]: the admissible interval for the pinning parameter `q` and the
//!   temperature ceiling under which it is nonempty.
//! * [`search`]: ensemble ground-state search over many independent chains.
//! * [`cli`]: the `sca` command-line tool.

pub mod bounds;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod model;
pub mod numeric;
pub mod oracle;
pub mod search;

pub use bounds::{beta_ceiling, plan, q_lower_close, q_upper_flips, ParameterPlan};
pub use dynamics::{
    expected_flips_glauber, expected_flips_sca, glauber_step, sca_flip_factors, sca_step, FlipFactors, Kernel,
    SamplerParams, StepStats,
};
pub use error::{Error, Result};
pub use model::{compute_constants, IsingModel, ModelConstants, SpinConfiguration};
pub use oracle::{
    check_order_preservation, gibbs_distribution, ground_states, sca_distribution, sca_weight, tilde_hamiltonian,
    transition_matrix, tv_distance, Caps, ClosenessReport, DiscreteDistribution, Enumeration, TransitionMatrix,
};
pub use search::{ensemble_search, run_chain, EnsembleProfile, Schedule, SearchConfig};
