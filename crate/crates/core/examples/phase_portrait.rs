//! Critical phase portrait written as an SVG next to the system temp dir.
//!
//! cargo run --example phase_portrait

use brwlab::curves::{hmp_curve, hpm_curve};
use brwlab::dynsys::{integrate, Controls, Direction, PhasePoint};
use brwlab::io::svg::{Portrait, Stroke};
use brwlab::ModelParams;

fn main() -> brwlab::Result<()> {
    let p = ModelParams::new(1.0, 4.0, 0.5)?;
    let mut svg = Portrait::new("q+ = 1, q- = 4, beta = 0.5");
    let ctl = Controls::default();
    for i in 1..=5 {
        for j in 1..=5 {
            let v = PhasePoint::new(i as f64 / 6.0, j as f64 / 6.0);
            let t = integrate(&p, v, Direction::Forward, 50.0, &ctl)?;
            svg.polyline(t.points(), Stroke::Thin, None);
        }
    }
    svg.polyline(hpm_curve(&p)?.points.points(), Stroke::Bold, Some("H+-"));
    svg.polyline(hmp_curve(&p)?.points.points(), Stroke::Bold, Some("H-+"));
    let m = p.m();
    svg.polyline([PhasePoint::new(1.0, 1.0), PhasePoint::new(1.0 - 1.0 / m, 0.0)], Stroke::Dashed, Some("slope m"));

    let path = std::env::temp_dir().join("brwlab_portrait.svg");
    std::fs::write(&path, svg.render("example"))?;
    println!("wrote {}", path.display());
    Ok(())
}
