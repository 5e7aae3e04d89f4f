//! Single steps of both samplers from a fixed configuration: empirical flip
//! counts against their expectations, and the SCA flip factors.
//!
//! cargo run --release --example sampler_steps

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sca_ising::{
    expected_flips_glauber, expected_flips_sca, glauber_step, sca_flip_factors, sca_step, IsingModel, SamplerParams,
    SpinConfiguration,
};

fn main() -> sca_ising::Result<()> {
    let model = IsingModel::new(
        4,
        &[(0, 1, 1.0), (1, 2, 0.5), (2, 3, -0.7), (0, 3, 0.3)],
        vec![0.2, 0.0, -0.1, 0.4],
    )?;
    let sigma = SpinConfiguration::new(vec![1, -1, 1, 1])?;
    let params = SamplerParams::new(1.0, 0.3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);

    println!("σ = {sigma}, H = {}", model.hamiltonian(&sigma)?);
    for f in sca_flip_factors(&model, &params, &sigma)? {
        println!(
            "  ε = {:.4}  p = {:.4}  flip probability {:.4}",
            f.epsilon,
            f.p,
            f.product()
        );
    }

    let draws = 200_000;
    let (mut sca_flips, mut glauber_flips) = (0usize, 0usize);
    for _ in 0..draws {
        sca_flips += sca_step(&model, &params, &sigma, &mut rng)?.1.flips;
        glauber_flips += glauber_step(&model, &params, &sigma, &mut rng)?.1.flips;
    }
    println!(
        "\nSCA     mean flips {:.4}  expected {:.4}",
        sca_flips as f64 / draws as f64,
        expected_flips_sca(&model, params.beta, params.q, &sigma)?
    );
    println!(
        "Glauber mean flips {:.4}  expected {:.4}",
        glauber_flips as f64 / draws as f64,
        expected_flips_glauber(&model, params.beta, &sigma)?
    );
    Ok(())
}
