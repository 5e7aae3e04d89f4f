//! Exact Gibbs and SCA measures of a frustrated triangle, with the
//! order-preservation check and the distance between the two measures.
//!
//! cargo run --example exact_oracle

use sca_ising::{tv_distance, Caps, Enumeration, IsingModel, Kernel, SamplerParams};

fn main() -> sca_ising::Result<()> {
    let triangle = IsingModel::new(3, &[(0, 1, -1.0), (1, 2, -1.0), (0, 2, -1.0)], vec![0.0, 0.0, 0.2])?;
    let e = Enumeration::new(&triangle, Caps::default())?;
    let beta = 1.5;

    println!("ground energy {}  range {}", e.ground_energy(), e.range());
    for s in e.ground_states() {
        println!("  ground state {s}");
    }

    let gibbs = e.gibbs(beta)?;
    println!("\n   q   TV(SCA, Gibbs)  close at eps=0.05");
    for q in [0.0, 0.5, 1.0, 2.0, 4.0, 8.0] {
        let sca = e.sca(beta, q)?;
        let report = e.check_order_preservation(&sca, 0.05, e.range())?;
        println!("{q:>4}   {:.3e}       {}", tv_distance(&sca, &gibbs)?, report.is_close);
    }

    let params = SamplerParams::new(beta, 1.0)?;
    let p = e.transition_matrix(&params, Kernel::Sca)?;
    let pi = e.sca(beta, 1.0)?;
    println!(
        "\nSCA kernel at q=1: detailed balance residual {:.1e}, stationarity residual {:.1e}",
        p.detailed_balance_residual(&pi)?,
        p.stationarity_residual(&pi)?
    );
    Ok(())
}
