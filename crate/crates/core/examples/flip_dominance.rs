//! Expected spins changed per update, Glauber against SCA, for every
//! configuration of a small random model as q crosses q_upper_flips.
//!
//! cargo run --example flip_dominance

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sca_ising::SpinConfiguration;
use sca_ising::{compute_constants, expected_flips_glauber, expected_flips_sca, q_upper_flips, IsingModel};

fn main() -> sca_ising::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 8;
    let mut edges = Vec::new();
    for x in 0..n {
        for y in (x + 1)..n {
            if rng.gen_bool(0.4) {
                edges.push((x, y, rng.gen_range(-0.5..0.5)));
            }
        }
    }
    let fields = (0..n).map(|_| rng.gen_range(-0.3..0.3)).collect();
    let model = IsingModel::new(n, &edges, fields)?;

    let beta = 0.8;
    let c = compute_constants(&model, false)?;
    let q_max = q_upper_flips(&c, n, beta);
    println!("K̄ = {:.3}, q_upper_flips(β={beta}) = {q_max:.4}\n", c.k_bar);
    println!("  q/q_upper   min SCA - Glauber   violations");
    for frac in [0.25, 0.5, 1.0, 1.5, 3.0, 6.0] {
        let q = frac * q_max;
        let mut worst = f64::INFINITY;
        let mut violations = 0;
        for i in 0..1u64 << n {
            let s = SpinConfiguration::from_index(n, i);
            let gap = expected_flips_sca(&model, beta, q, &s)? - expected_flips_glauber(&model, beta, &s)?;
            worst = worst.min(gap);
            violations += usize::from(gap < 0.0);
        }
        println!("  {frac:>9}   {worst:>17.5}   {violations:>10}");
    }
    Ok(())
}
