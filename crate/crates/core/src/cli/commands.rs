use serde_json::{json, Value};

use super::verify::{self, Battery, Fixture};
use super::*;
use crate::curves::{self, CurveResult, ShootingControls};
use crate::dynsys::Controls;
use crate::io::csv::fmt_f64;
use crate::io::{OutputDir, RunManifest};
use crate::model;
use crate::series;
use crate::sim::{self, estimate::csv_row, estimate::CSV_HEADER, ChainMode, McEstimate, SimConfig};

const DEFAULT_REPS: usize = 100_000;
const FAST_REPS: usize = 10_000;

pub(super) fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Params(a) => params(cli, a),
        Command::Portrait(a) => super::portrait::run(cli, a),
        Command::Series(a) => series_cmd(cli, a),
        Command::Curve(a) => curve(cli, a),
        Command::Simulate(a) => simulate(cli, a),
        Command::Sweep(a) => sweep(cli, a),
        Command::Chain(a) => chain(cli, a),
        Command::Verify(a) => verify_cmd(cli, a),
    }
}

pub(super) fn manifest(cli: &Cli, params: Option<&ModelParams>) -> RunManifest {
    let mut m = RunManifest::new(cli.command.name(), cli.effective_args(), cli.global.seed);
    m.params = params.map(|p| [p.q_plus(), p.q_minus(), p.beta()]);
    m
}

/// Prints `value` as JSON or, in text mode, each `lines` entry.
pub(super) fn emit(cli: &Cli, value: &Value, lines: &[String]) {
    if cli.global.json {
        println!("{}", serde_json::to_string_pretty(value).expect("report serializes"));
    } else {
        for l in lines {
            println!("{l}");
        }
    }
}

fn params(_cli: &Cli, a: &ModelArgs) -> Result<i32> {
    let p = a.params()?;
    let mu = p.half_drift_gap();
    let report = json!({
        "params": p,
        "derived": model::derive_constants(&p),
        "spectral": model::linearization_at_one_one(&p),
        "separatrix_slope": model::separatrix_slope(&p),
        "gamma_min": {
            "mu_star": mu,
            "gamma": model::gamma_eigenvalue(&p, mu)?,
        },
        "note": "closed forms evaluated in double precision",
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(EXIT_OK)
}

fn series_cmd(cli: &Cli, a: &SeriesArgs) -> Result<i32> {
    let p = a.model.params()?;
    let coeffs = series::compute_coeffs(&p, a.n_max)?;
    let summary = series::summary(&coeffs, &p);
    let values = a.at.iter().map(|&y| coeffs.evaluate(y)).collect::<Result<Vec<_>>>()?;
    let at: Vec<Value> = a.at.iter().zip(&values).map(|(y, v)| json!({ "y": y, "value": v })).collect();
    let report = json!({ "summary": summary, "values": at });
    let mut out = OutputDir::create(&cli.global.out_dir)?;
    out.write("series.csv", &coeffs.to_csv())?;
    out.write("series_summary.json", &(serde_json::to_string_pretty(&report)? + "\n"))?;
    out.finish(manifest(cli, Some(&p)))?;
    let mut lines = vec![
        format!("a1 = {}", summary.a1),
        format!(
            "sum of a_n (n <= {}) = {} <= bound {}",
            summary.n_max, summary.partial_sum, summary.bound
        ),
        format!("p_inf = {} (upper estimate)", summary.p_inf),
        format!("tail at y=1: {:e} ({})", summary.tail_at_one, summary.tail_note),
    ];
    for (y, v) in a.at.iter().zip(&values) {
        lines.push(format!("A({y}) = {} (tail estimate {:e})", v.value, v.tail_estimate));
    }
    emit(cli, &report, &lines);
    Ok(EXIT_OK)
}

fn tolerance_note(c: &Controls) -> Value {
    json!({ "rtol": c.rtol, "atol": c.atol, "ball_radius": c.ball_radius })
}

pub(super) fn curve_file(kind: CurveChoice) -> &'static str {
    match kind {
        CurveChoice::Hpm => "curve_hpm",
        CurveChoice::Hmp => "curve_hmp",
    }
}

pub(super) fn compute_curve(p: &ModelParams, kind: CurveChoice, tol: f64, horizon: Option<f64>) -> Result<CurveResult> {
    let mut sc = ShootingControls::default();
    if let Some(h) = horizon {
        sc.horizon = h;
    }
    match kind {
        CurveChoice::Hpm => curves::hpm_curve_with(p, tol, &sc),
        CurveChoice::Hmp => curves::hmp_curve_with(p, &sc.controls),
    }
}

fn curve(cli: &Cli, a: &CurveArgs) -> Result<i32> {
    let p = a.model.params()?;
    let r = compute_curve(&p, a.kind, a.tol, cli.global.horizon)?;
    let s = r.summary();
    let report = json!({ "summary": s, "tolerance": tolerance_note(&Controls::default()), "bisection_tol": a.tol });
    let name = curve_file(a.kind);
    let mut out = OutputDir::create(&cli.global.out_dir)?;
    out.write(&format!("{name}.csv"), &r.points.to_csv())?;
    out.write(&format!("{name}.json"), &(serde_json::to_string_pretty(&report)? + "\n"))?;
    let mut m = manifest(cli, Some(&p));
    m.tolerances.insert("bisection_tol".into(), a.tol);
    m.tolerances.insert("rtol".into(), Controls::default().rtol);
    out.finish(m)?;
    let mut lines = vec![
        format!("{:?} by {:?}: {} points, exit {}", s.kind, s.method, r.points.samples.len(), s.exit),
        format!("value at 0 = {}", s.value_at_0),
        format!("value at 1- = {}", s.value_at_1_minus),
    ];
    if let Some((lo, hi)) = s.bracket {
        lines.push(format!("bisection bracket [{lo}, {hi}] (width {:.1e})", hi - lo));
    }
    emit(cli, &report, &lines);
    Ok(EXIT_OK)
}

fn sim_config(cli: &Cli, a: &SimArgs) -> Result<SimConfig> {
    let cfg = SimConfig {
        horizon: cli.global.horizon.unwrap_or(SimConfig::default().horizon),
        budget: a.budget,
        release_eps: a.release_eps,
        release_cap: a.release_cap,
        pgf_floor: a.pgf_floor,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn sim_manifest(cli: &Cli, p: &ModelParams, cfg: &SimConfig) -> RunManifest {
    let mut m = manifest(cli, Some(p));
    m.tolerances.insert("release_eps".into(), cfg.release_eps);
    m.tolerances.insert("release_cap".into(), cfg.release_cap);
    m.tolerances.insert("pgf_floor".into(), cfg.pgf_floor);
    m
}

fn sign_char(s: Sign) -> char {
    match s {
        Sign::Plus => '+',
        Sign::Minus => '-',
    }
}

fn est_line(label: &str, e: &McEstimate) -> String {
    format!(
        "{label}: {} ± {} bracket [{}, {}] censored {}",
        e.mean, e.std_error, e.bracket.0, e.bracket.1, e.censor_fraction
    )
}

fn simulate(cli: &Cli, a: &SimulateArgs) -> Result<i32> {
    let p = a.model.params()?;
    let cfg = sim_config(cli, &a.sim)?;
    let reps = cli.global.reps.unwrap_or(DEFAULT_REPS);
    let seed = cli.global.seed;
    let mut out = OutputDir::create(&cli.global.out_dir)?;
    let (r, c) = (sign_char(a.root), sign_char(a.count));
    let mut csv = String::from(CSV_HEADER);
    let mut lines = Vec::new();
    let report = match a.quantity {
        Quantity::Means => {
            let est = sim::estimate_count_means(&p, a.root.particle(), a.count.count(), &a.phis, reps, seed, &cfg)?;
            let q = format!("E{r}N{c}");
            let mut closed = Vec::new();
            for (e, &phi) in est.iter().zip(&a.phis) {
                csv.push_str(&csv_row(&q, Some(phi), None, e));
                lines.push(est_line(&format!("{q}({phi})"), e));
                if p.regime() == model::Regime::Critical {
                    let cm = model::critical_means(&p, phi)?;
                    let v = match (a.root, a.count) {
                        (Sign::Plus, Sign::Plus) => cm.plus_plus,
                        (Sign::Minus, Sign::Plus) => cm.minus_plus,
                        (Sign::Plus, Sign::Minus) => cm.plus_minus,
                        (Sign::Minus, Sign::Minus) => cm.minus_minus,
                    };
                    closed.push(v);
                    lines.push(format!("  closed form at criticality: {v}"));
                }
            }
            json!({ "quantity": q, "phis": a.phis, "estimates": est, "closed_form": closed })
        }
        Quantity::Pgf => {
            let phi = a.phis[0];
            let e = sim::estimate_pgf_with(&p, a.root.particle(), a.count.count(), phi, a.theta, reps, seed, &cfg)?;
            let q = format!("E{r}theta^N{c}");
            csv.push_str(&csv_row(&q, Some(phi), Some(a.theta), &e));
            lines.push(est_line(&format!("{q}({phi}), theta={}", a.theta), &e));
            json!({ "quantity": q, "phi": phi, "theta": a.theta, "estimate": e })
        }
        Quantity::Windings => {
            let w = sim::estimate_windings(&p, a.generations, reps, seed, &cfg)?;
            for (n, (wp, wm)) in w.w_plus.iter().zip(&w.w_minus).enumerate() {
                csv.push_str(&csv_row(&format!("EW+({n})"), None, None, wp));
                csv.push_str(&csv_row(&format!("EW-({n})"), None, None, wm));
                lines.push(est_line(&format!("E W+({n})"), wp));
                lines.push(est_line(&format!("E W-({n})"), wm));
            }
            json!({ "quantity": "windings", "estimates": w })
        }
        Quantity::Left => {
            let e = sim::left_excursion_fraction(&p, reps, seed, &cfg)?;
            csv.push_str(&csv_row("P+[N-(0)>=1]", Some(0.0), None, &e));
            lines.push(est_line("P+[some particle left of 0]", &e));
            json!({ "quantity": "left_excursion", "estimate": e })
        }
        Quantity::Tree => {
            let t = sim::simulate_tree(&p, a.root.particle(), cfg.horizon, cfg.budget, seed, a.rep)?;
            let mut tree = String::from("id,parent,time,position,ptype\n");
            for rec in &t.records {
                let parent = rec.parent.map(|x| x.to_string()).unwrap_or_default();
                for &(time, pos, ty) in &rec.path {
                    tree.push_str(&format!("{},{parent},{},{},{}\n", rec.id, fmt_f64(time), fmt_f64(pos), sign_char(ty.into())));
                }
            }
            out.write("tree.csv", &tree)?;
            let lc = sim::level_counts(&t, &a.phis)?;
            lines.push(format!(
                "{} particles, {} alive at {}, {} splits, budget hit: {}",
                t.records.len(),
                t.alive_at_horizon(),
                t.horizon,
                t.splits(),
                t.budget_hit
            ));
            lines.push(format!("N+ at {:?}: {:?}; N- : {:?}", lc.phis, lc.n_plus, lc.n_minus));
            json!({ "particles": t.records.len(), "alive": t.alive_at_horizon(), "budget_hit": t.budget_hit, "level_counts": lc })
        }
    };
    if a.quantity != Quantity::Tree {
        out.write("estimates.csv", &csv)?;
    }
    out.finish(sim_manifest(cli, &p, &cfg))?;
    emit(cli, &report, &lines);
    Ok(EXIT_OK)
}

impl From<ParticleType> for Sign {
    fn from(t: ParticleType) -> Self {
        match t {
            ParticleType::Plus => Sign::Plus,
            ParticleType::Minus => Sign::Minus,
        }
    }
}

fn sweep(cli: &Cli, a: &SweepArgs) -> Result<i32> {
    let p = a.model.params()?;
    let cfg = sim_config(cli, &a.sim)?;
    let reps = cli.global.reps.unwrap_or(DEFAULT_REPS);
    let betas = if a.betas.is_empty() {
        [1.0, 0.9, 0.8, 0.6, 0.4, 0.2].iter().map(|f| f * p.beta()).collect()
    } else {
        a.betas.clone()
    };
    let s = sim::nested_sweep(&p, &betas, reps, cli.global.seed, &cfg)?;
    let mut csv = String::from(CSV_HEADER);
    let mut lines = Vec::new();
    for (b, e) in s.betas.iter().zip(&s.estimates) {
        csv.push_str(&csv_row(&format!("E+N-(0)@beta={b}"), Some(0.0), None, e));
        lines.push(est_line(&format!("beta {b}"), e));
    }
    lines.push(format!(
        "pathwise monotone fraction {}; means monotone: {}",
        s.pathwise_monotone_fraction,
        s.means_monotone()
    ));
    let mut out = OutputDir::create(&cli.global.out_dir)?;
    out.write("sweep.csv", &csv)?;
    out.finish(sim_manifest(cli, &p, &cfg))?;
    emit(cli, &json!({ "sweep": s, "means_monotone": s.means_monotone() }), &lines);
    Ok(EXIT_OK)
}

fn chain(cli: &Cli, a: &ChainArgs) -> Result<i32> {
    let p = a.model.params()?;
    let reps = cli.global.reps.unwrap_or(DEFAULT_REPS);
    let mode = match a.mode {
        ChainChoice::FirstPassage => ChainMode::FirstPassageLaplace {
            horizon: cli.global.horizon.unwrap_or(200.0),
        },
        ChainChoice::LargeDeviation => ChainMode::LargeDeviationFreq {
            eps: a.eps,
            times: a.times.clone(),
        },
    };
    let est = sim::chain_functionals(&p, &mode, reps, cli.global.seed)?;
    let mut csv = String::from(CSV_HEADER);
    let mut lines = Vec::new();
    for c in &est {
        let q = match c.t {
            None => "E+exp(-beta*tau)".to_string(),
            Some(t) => format!("exp(beta*t)P+[Phi(t)<=eps*t]@t={t}"),
        };
        csv.push_str(&csv_row(&q, None, None, &c.estimate));
        lines.push(est_line(&q, &c.estimate));
        lines.push(format!("  analytic: {}", c.analytic));
    }
    let mut out = OutputDir::create(&cli.global.out_dir)?;
    out.write("chain.csv", &csv)?;
    out.write("chain.json", &(serde_json::to_string_pretty(&json!({ "mode": mode, "estimates": est }))? + "\n"))?;
    out.finish(manifest(cli, Some(&p)))?;
    emit(cli, &json!({ "mode": mode, "estimates": est }), &lines);
    Ok(EXIT_OK)
}

fn verify_cmd(cli: &Cli, a: &VerifyArgs) -> Result<i32> {
    let fixture: Fixture = match &a.fixture {
        Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
        None => Fixture::default(),
    };
    if let Some(bad) = a.only.iter().find(|id| !(1..=verify::CRITERIA).contains(*id)) {
        return Err(Error::Domain(format!("no criterion {bad}; ids run from 1 to {}", verify::CRITERIA)));
    }
    let reps = cli.global.reps.unwrap_or(if a.fast { FAST_REPS } else { DEFAULT_REPS });
    let battery = Battery {
        fixture,
        only: a.only.clone(),
        ..Battery::new(reps, cli.global.seed)
    };
    let rows = match verify::run_battery(&battery) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: verification infrastructure: {e}");
            return Ok(EXIT_INTERNAL);
        }
    };
    let report = json!({ "reps": reps, "seed": battery.seed, "fixture": battery.fixture, "rows": rows });
    let mut out = OutputDir::create(&cli.global.out_dir)?;
    out.write("verify.json", &(serde_json::to_string_pretty(&report)? + "\n"))?;
    let mut m = manifest(cli, None);
    m.tolerances.insert("k_se".into(), battery.fixture.k_se);
    out.finish(m)?;
    if cli.global.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", verify::render(&rows));
    }
    Ok(if rows.iter().all(|r| r.pass) {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}
