//! Admissible pinning interval for a field-dominated chain as β grows to the
//! ceiling, and the empty interval beyond it.
//!
//! cargo run --example parameter_plan

use sca_ising::{plan, IsingModel};

fn main() -> sca_ising::Result<()> {
    let n = 16;
    let edges: Vec<_> = (0..n - 1).map(|x| (x, x + 1, 0.05)).collect();
    let fields = (0..n).map(|x| if x % 3 == 0 { -1.0 } else { 1.0 }).collect();
    let model = IsingModel::new(n, &edges, fields)?;
    let eps = 1.0;

    let ceiling = plan(&model, 0.0, eps)?.beta_max.expect("ε√v exceeds 2K̄ for this model");
    println!("K̄-limited temperature ceiling at ε={eps}: β* = {ceiling:.4}\n");
    println!("   β/β*     q_min_close   q_max_flips   recommended q");
    for frac in [0.0, 0.25, 0.5, 0.75, 0.99, 1.2] {
        let p = plan(&model, frac * ceiling, eps)?;
        let q = p.recommended_q.map_or("none".to_string(), |q| format!("{q:.4}"));
        println!(
            "   {frac:<6}   {:>11.4}   {:>11.4}   {q:>13}",
            p.q_min_close, p.q_max_flips
        );
    }
    println!(
        "\n{}",
        serde_json::to_string_pretty(&plan(&model, 0.5 * ceiling, eps)?).unwrap()
    );
    Ok(())
}
