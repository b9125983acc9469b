//! Coefficients of A(y) and the offspring law they define.
//!
//! cargo run --example series_offspring

use brwlab::series::{a1_closed_form, compute_coeffs, offspring_distribution};
use brwlab::ModelParams;

fn main() -> brwlab::Result<()> {
    let p = ModelParams::new(1.0, 4.0, 4.0)?;
    let c = compute_coeffs(&p, 200)?;
    println!("a1 = {} (closed form {})", c.a1(), a1_closed_form(&p));
    for n in 1..=6 {
        println!("a{n} = {:.6e}", c.a[n]);
    }
    println!("sum of 200 terms {:.12} <= {:.12}", c.partial_sum, c.bound);
    for y in [0.1, 0.5, 0.9] {
        let v = c.evaluate(y)?;
        println!("A({y}) = {:.10} (tail about {:.1e})", v.value, v.tail_estimate);
    }

    let d = offspring_distribution(&c, &p);
    println!("P(C=1) = {:.5}, P(C=2) = {:.5}, P(C=3) = {:.5}", d.p[1], d.p[2], d.p[3]);
    println!("mass at infinity <= {:.5}, total {:.5}", d.p_inf, d.total + d.p_inf);
    Ok(())
}
