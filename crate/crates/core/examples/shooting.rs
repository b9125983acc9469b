//! H+-(0) by shooting below and at criticality, and the endpoints of both curves.
//!
//! cargo run --example shooting

use brwlab::curves::{hmp_curve, hpm_at_zero, hpm_curve};
use brwlab::ModelParams;

fn main() -> brwlab::Result<()> {
    for beta in [0.3, 0.4, 0.5] {
        let p = ModelParams::new(1.0, 4.0, beta)?;
        let h = hpm_at_zero(&p, 1e-9)?;
        println!(
            "beta = {beta}: H+-(0) = {:.7} in [{:.9}, {:.9}] after {} bisections",
            h.value, h.bracket.0, h.bracket.1, h.iterations
        );
    }

    for beta in [0.5, 4.0] {
        let p = ModelParams::new(1.0, 4.0, beta)?;
        for c in [hpm_curve(&p)?, hmp_curve(&p)?] {
            let s = c.summary();
            println!(
                "beta = {beta}: {:?} by {:?}, value at 0 {:.5}, at 1- {:.5}, {} samples, exit {}",
                s.kind,
                s.method,
                s.value_at_0,
                s.value_at_1_minus,
                c.points.samples.len(),
                s.exit
            );
        }
    }
    Ok(())
}
