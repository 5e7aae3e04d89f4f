//! Ensemble search on a 14-spin random model, compared against the exact
//! ground energy, for both kernels.
//!
//! cargo run --release --example ground_state_search

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sca_ising::{ensemble_search, Caps, Enumeration, IsingModel, Kernel, SearchConfig};

fn main() -> sca_ising::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let n = 14;
    let mut edges = Vec::new();
    for x in 0..n {
        for y in (x + 1)..n {
            if rng.gen_bool(0.3) {
                edges.push((x, y, rng.gen_range(-1.0..1.0)));
            }
        }
    }
    let model = IsingModel::new(n, &edges, (0..n).map(|_| rng.gen_range(-0.2..0.2)).collect())?;
    let exact = Enumeration::new(&model, Caps::default())?;
    println!("exact ground energy {:.4}", exact.ground_energy());

    let sca = SearchConfig::new(2.0, 0.5, 200, 2000, 1);
    let mut glauber = SearchConfig::new(2.0, 0.0, 200 * n as u64, 2000, 1);
    glauber.kernel = Kernel::Glauber;

    for (name, config) in [("sca", sca), ("glauber", glauber)] {
        let profile = ensemble_search(&model, &config)?;
        let top = &profile.candidates[0];
        println!(
            "{name:>8}: best seen {:.4}, top candidate {top} with {} of {} chains (H = {:.4}), {:.2} flips per sweep",
            profile.best_energy,
            profile.count(top),
            profile.n_chains,
            model.hamiltonian(top)?,
            profile.flips_per_sweep,
        );
    }
    Ok(())
}
