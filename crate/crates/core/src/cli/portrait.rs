//! `brwlab portrait`: trajectory fan, probabilistic curves and one SVG.

use serde_json::json;

use super::commands::{compute_curve, curve_file, emit, manifest};
use super::*;
use crate::dynsys::{self, integrate, Controls, Direction, PhasePoint};
use crate::io::csv::row;
use crate::io::manifest::now_rfc3339;
use crate::io::svg::{Portrait, Stroke};
use crate::io::OutputDir;
use crate::model::Regime;

const FAN_HORIZON: f64 = 50.0;
const SHOOTING_TOL: f64 = 1e-9;

fn figure_params(a: &PortraitArgs) -> Result<ModelParams> {
    match a.paper_figure {
        None => a.model.params(),
        Some(fig) => {
            if a.model.q_plus.is_some() || a.model.q_minus.is_some() || a.model.beta.is_some() {
                return Err(Error::Domain("--paper-figure fixes the parameters; drop --q-plus/--q-minus/--beta".into()));
            }
            match fig {
                PaperFigure::Super => ModelParams::new(1.0, 4.0, 4.0),
                PaperFigure::Crit => ModelParams::new(1.0, 4.0, 0.5),
            }
        }
    }
}

pub(super) fn run(cli: &Cli, a: &PortraitArgs) -> Result<i32> {
    let p = figure_params(a)?;
    let horizon = cli.global.horizon.unwrap_or(FAN_HORIZON);
    let regime = p.regime();
    let mut out = OutputDir::create(&cli.global.out_dir)?;
    let mut svg = Portrait::new(&format!(
        "q+ = {}, q- = {}, beta = {} ({regime:?})",
        p.q_plus(),
        p.q_minus(),
        p.beta()
    ));
    let ctl = Controls::default();
    let mut lines = Vec::new();
    let mut fan = Vec::new();
    let n = a.grid;
    for i in 1..=n {
        for j in 1..=n {
            let start = PhasePoint::new(i as f64 / (n + 1) as f64, j as f64 / (n + 1) as f64);
            for (dir, tag) in [(Direction::Forward, "forward"), (Direction::Reversed, "reversed")] {
                let name = format!("fan_{i}_{j}_{tag}.csv");
                match integrate(&p, start, dir, horizon, &ctl) {
                    Ok(t) => {
                        out.write(&name, &t.to_csv())?;
                        svg.polyline(t.points(), Stroke::Thin, None);
                        fan.push(json!({ "file": name, "exit": t.exit }));
                    }
                    Err(e) => fan.push(json!({ "file": null, "start": [start.x, start.y], "error": e.to_string() })),
                }
            }
        }
    }

    let mut curves = Vec::new();
    for kind in [CurveChoice::Hpm, CurveChoice::Hmp] {
        let name = curve_file(kind);
        match compute_curve(&p, kind, SHOOTING_TOL, None) {
            Ok(r) => {
                out.write(&format!("{name}.csv"), &r.points.to_csv())?;
                svg.polyline(r.points.points(), Stroke::Bold, Some(name));
                let s = r.summary();
                lines.push(format!(
                    "{name}: value at 0 = {}, value at 1- = {}, exit {}",
                    s.value_at_0, s.value_at_1_minus, s.exit
                ));
                curves.push(json!({ "file": format!("{name}.csv"), "summary": s }));
            }
            Err(e) => {
                let at = if kind == CurveChoice::Hpm { 0.05 } else { 0.1 };
                svg.note(PhasePoint::new(0.05, at), &format!("{name} failed: {e}"));
                lines.push(format!("{name}: FAILED: {e}"));
                curves.push(json!({ "file": null, "kind": name, "error": e.to_string() }));
            }
        }
    }

    if regime == Regime::Critical {
        let m = p.m();
        let mut csv = String::from("x,y,slope\n");
        for (q, s) in dynsys::slope_along_eigen_segment(&p, 20) {
            csv.push_str(&row(&[q.x, q.y, s]));
        }
        out.write("segment.csv", &csv)?;
        svg.polyline([PhasePoint::CORNER, PhasePoint::new(1.0 - 1.0 / m, 0.0)], Stroke::Dashed, Some("slope m"));
    }

    let summary = json!({ "params": p, "regime": regime, "fan": fan, "curves": curves, "tolerance": { "rtol": ctl.rtol, "atol": ctl.atol, "bisection_tol": SHOOTING_TOL } });
    out.write("portrait.json", &(serde_json::to_string_pretty(&summary)? + "\n"))?;
    out.write("portrait.svg", &svg.render(&format!("generated {}", now_rfc3339())))?;
    let mut m = manifest(cli, Some(&p));
    m.tolerances.insert("rtol".into(), ctl.rtol);
    m.tolerances.insert("bisection_tol".into(), SHOOTING_TOL);
    let dir = out.path().display().to_string();
    out.finish(m)?;
    lines.push(format!("{} fan trajectories; files in {dir}", fan.len()));
    emit(cli, &summary, &lines);
    Ok(EXIT_OK)
}
