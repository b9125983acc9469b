//! Derived constants and the spectrum at (1,1) across the three regimes.
//!
//! cargo run --example regimes

use brwlab::model::{derive_constants, gamma_eigenvalue, linearization_at_one_one};
use brwlab::ModelParams;

fn main() -> brwlab::Result<()> {
    for beta in [0.4, 0.5, 4.0] {
        let p = ModelParams::new(1.0, 4.0, beta)?;
        let d = derive_constants(&p);
        let s = linearization_at_one_one(&p);
        println!("beta = {beta}: {:?}, K+ = {}, K- = {}, m = {}", d.regime, d.k_plus, d.k_minus, d.m);
        println!("  eigenvalues {} and {}, discriminant {}", s.eigenvalues[0], s.eigenvalues[1], s.discriminant);
        if s.is_spiral() {
            println!("  spiral at (1,1): no real eigen-direction");
        }
        for v in &s.eigenvectors {
            println!("  eigen-direction ({:.5}, {:.5})", v[0], v[1]);
        }
        let mu = p.half_drift_gap();
        println!("  min gamma = gamma({mu}) = {} (-beta_c = {})", gamma_eigenvalue(&p, mu)?, -d.beta_c);
    }
    Ok(())
}
