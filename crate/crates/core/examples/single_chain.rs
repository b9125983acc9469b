//! Functionals of one type-switching chain: first passage below 0 and
//! large-deviation frequencies against their Chernoff bound.
//!
//! cargo run --release --example single_chain

use brwlab::sim::{chain_functionals, ChainMode};
use brwlab::ModelParams;

fn main() -> brwlab::Result<()> {
    let p = ModelParams::new(1.0, 4.0, 0.5)?;
    let fp = chain_functionals(&p, &ChainMode::FirstPassageLaplace { horizon: 200.0 }, 50_000, 7)?;
    let e = fp[0].estimate;
    println!("E+ exp(-beta tau) = {:.5} ± {:.5}, a1 = {:.6}", e.mean, e.std_error, fp[0].analytic);

    let mode = ChainMode::LargeDeviationFreq { eps: 0.01, times: vec![5.0, 10.0, 20.0] };
    for r in chain_functionals(&p, &mode, 200_000, 8)? {
        println!(
            "t = {}: e^(beta t) P[X(t) <= eps t] = {:.4} ± {:.4}, bound {:.4}",
            r.t.unwrap(),
            r.estimate.mean,
            r.estimate.std_error,
            r.analytic
        );
    }
    Ok(())
}
