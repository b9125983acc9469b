//! Monte Carlo level counts at criticality against the closed forms, and one pgf
//! against the ODE.
//!
//! cargo run --release --example level_counts

use brwlab::curves::{curve_y_at_x, hmp_curve};
use brwlab::dynsys::{integrate, Controls, Direction, PhasePoint};
use brwlab::model::critical_means;
use brwlab::sim::{estimate_count_means, estimate_pgf, CountSign, SimConfig};
use brwlab::{ModelParams, ParticleType};

fn main() -> brwlab::Result<()> {
    let p = ModelParams::new(1.0, 4.0, 0.5)?;
    let cfg = SimConfig::default();
    let reps = 20_000;
    let phis = [0.0, 0.25, 0.5];
    let est = estimate_count_means(&p, ParticleType::Plus, CountSign::Plus, &phis, reps, 3, &cfg)?;
    for (phi, e) in phis.iter().zip(&est) {
        let exact = critical_means(&p, *phi)?.plus_plus;
        println!(
            "E+N+({phi}) = {:.4} ± {:.4}, bracket [{:.4}, {:.4}], closed form {exact:.4}",
            e.mean, e.std_error, e.bracket.0, e.bracket.1
        );
    }

    let theta = 0.5;
    let y = curve_y_at_x(&p, &hmp_curve(&p)?.points, theta)?;
    let ode = integrate(&p, PhasePoint::new(theta, y), Direction::Forward, 0.5, &Controls::default())?.end().x;
    let g = estimate_pgf(&p, ParticleType::Plus, 0.5, theta, reps, 4)?;
    println!("E+ 0.5^N+(0.5): MC in [{:.5}, {:.5}] ± {:.5}, ODE {ode:.5}", g.bracket.0, g.bracket.1, g.std_error);
    Ok(())
}
