//! A piecewise-constant β schedule and the mean energy trace it produces.
//!
//! cargo run --release --example annealing_schedule > trace.csv

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sca_ising::{ensemble_search, IsingModel, Schedule, SearchConfig};

fn main() -> sca_ising::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 30;
    let mut edges = Vec::new();
    for x in 0..n {
        for y in (x + 1)..n {
            if rng.gen_bool(0.15) {
                edges.push((x, y, if rng.gen_bool(0.5) { 1.0 } else { -1.0 }));
            }
        }
    }
    let model = IsingModel::new(n, &edges, vec![0.0; n])?;

    let mut config = SearchConfig::new(0.0, 0.4, 400, 64, 11);
    config.schedule = Some(Schedule::new(vec![(0, 0.2), (100, 0.6), (200, 1.2), (300, 2.5)])?);
    config.record_trace = true;
    let profile = ensemble_search(&model, &config)?;

    let traces = profile.traces.as_ref().expect("traces recorded");
    println!("step,beta,mean_energy");
    for step in (0..=config.n_steps as usize).step_by(10) {
        let mean = traces.iter().map(|t| t[step].energy).sum::<f64>() / traces.len() as f64;
        let beta = config.schedule.as_ref().unwrap().beta_at(step.saturating_sub(1) as u64);
        println!("{step},{beta},{mean:.4}");
    }
    eprintln!("best energy seen {:.1}", profile.best_energy);
    Ok(())
}
