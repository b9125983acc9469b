//! Winding generations and the nested beta sweep, both at criticality.
//!
//! cargo run --release --example windings_sweep

use brwlab::sim::{estimate_windings, nested_sweep, SimConfig};
use brwlab::ModelParams;

fn main() -> brwlab::Result<()> {
    let p = ModelParams::new(1.0, 4.0, 0.5)?;
    let cfg = SimConfig::default();
    let w = estimate_windings(&p, 3, 20_000, 5, &cfg)?;
    for (n, e) in w.w_plus.iter().enumerate() {
        println!("E W+({n}) in [{:.4}, {:.4}] ± {:.4}", e.bracket.0, e.bracket.1, e.std_error);
    }

    let betas = [0.5, 0.4, 0.3, 0.2, 0.1];
    let s = nested_sweep(&p, &betas, 20_000, 6, &cfg)?;
    for (b, e) in s.betas.iter().zip(&s.estimates) {
        println!("E+N-(0, {b}) = {:.4} ± {:.4}", e.mean, e.std_error);
    }
    println!("pathwise monotone in {} of replicates", s.pathwise_monotone_fraction);
    Ok(())
}
