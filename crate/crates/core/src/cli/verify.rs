//! The cross-engine verification battery behind `brwlab verify`.
//!
//! Every expected constant lives in [`Fixture`], which can be replaced from a
//! JSON file; a tampered constant must turn a passing row into a failure.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::curves::{self, curve_y_at_x};
use crate::dynsys::{self, integrate, Controls, Direction, PhasePoint};
use crate::error::Result;
use crate::model::{self, ModelParams, ParticleType};
use crate::series;
use crate::sim::{self, ChainMode, CountSign, McEstimate, SimConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Fixture {
    pub hpm_subcritical: f64,
    pub hpm_subcritical_tol: f64,
    pub shooting_seconds: f64,
    pub hpm_critical_range: (f64, f64),
    pub bracket_width: f64,
    pub series_slack: f64,
    pub on_curve_tol: f64,
    pub semigroup_tol: f64,
    pub field_floor: f64,
    pub double_root_betas: [f64; 2],
    pub spectral_tol: f64,
    pub gamma_tol: f64,
    /// `E⁺N⁺(0)`, `E⁻N⁺(0)`, `E⁺N⁻(0)`, `E⁺N⁺(½)` at criticality.
    pub critical_means: [f64; 4],
    pub mc_seconds: f64,
    pub k_se: f64,
    pub a1: f64,
    pub winding_mean: f64,
    pub left_super_min: f64,
    pub left_crit_max: f64,
    pub slope_point: (f64, f64),
    pub slope_at_point: f64,
}

impl Default for Fixture {
    fn default() -> Self {
        Fixture {
            hpm_subcritical: 0.6182,
            hpm_subcritical_tol: 5e-4,
            shooting_seconds: 60.0,
            hpm_critical_range: (0.6289, 0.6300),
            bracket_width: 1e-4,
            series_slack: 1e-12,
            on_curve_tol: 1e-6,
            semigroup_tol: 1e-8,
            field_floor: 1e-4,
            double_root_betas: [0.5, 4.5],
            spectral_tol: 1e-12,
            gamma_tol: 1e-12,
            critical_means: [1.0, 2.0, 0.5, 0.75f64.exp()],
            mc_seconds: 300.0,
            k_se: 3.0,
            a1: 0.190983,
            winding_mean: 1.0,
            left_super_min: 0.99,
            left_crit_max: 0.5,
            slope_point: (0.75, 0.5),
            slope_at_point: 2.545,
        }
    }
}

/// One line of the report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub id: u32,
    pub name: &'static str,
    pub measured: String,
    pub expected: String,
    pub bracket: Option<(f64, f64)>,
    pub pass: bool,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Battery {
    pub reps: usize,
    pub seed: u64,
    pub fixture: Fixture,
    /// Criterion ids to run; all when empty.
    pub only: Vec<u32>,
}

impl Battery {
    pub fn new(reps: usize, seed: u64) -> Self {
        Battery {
            reps,
            seed,
            fixture: Fixture::default(),
            only: Vec::new(),
        }
    }
}

pub const CRITERIA: u32 = 15;

fn p(qp: f64, qm: f64, b: f64) -> ModelParams {
    ModelParams::new(qp, qm, b).expect("battery parameters are valid")
}

fn est(e: &McEstimate) -> String {
    format!(
        "{:.5} ± {:.5} [{:.5}, {:.5}] cens {:.4}",
        e.mean, e.std_error, e.bracket.0, e.bracket.1, e.censor_fraction
    )
}

/// Runs the selected criteria in order.
pub fn run_battery(b: &Battery) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for id in 1..=CRITERIA {
        if !b.only.is_empty() && !b.only.contains(&id) {
            continue;
        }
        let t = Instant::now();
        let mut row = criterion(b, id)?;
        row.seconds = t.elapsed().as_secs_f64();
        rows.push(row);
    }
    Ok(rows)
}

fn row(id: u32, name: &'static str, measured: String, expected: String, pass: bool) -> Row {
    Row {
        id,
        name,
        measured,
        expected,
        bracket: None,
        pass,
        seconds: 0.0,
    }
}

fn criterion(b: &Battery, id: u32) -> Result<Row> {
    let f = &b.fixture;
    let k = f.k_se;
    let cfg = SimConfig::default();
    let crit = p(1.0, 4.0, 0.5);
    let sup = p(1.0, 4.0, 4.0);
    Ok(match id {
        1 => {
            let t = Instant::now();
            let h = curves::hpm_at_zero(&p(1.0, 4.0, 0.4), 1e-9)?;
            let secs = t.elapsed().as_secs_f64();
            let pass = (h.value - f.hpm_subcritical).abs() <= f.hpm_subcritical_tol && secs < f.shooting_seconds;
            Row {
                bracket: Some(h.bracket),
                ..row(
                    1,
                    "subcritical shooting H+-(0)",
                    format!("{:.7}", h.value),
                    format!("{} ± {:e}", f.hpm_subcritical, f.hpm_subcritical_tol),
                    pass,
                )
            }
        }
        2 => {
            let h = curves::hpm_at_zero(&crit, 1e-9)?;
            let width = h.bracket.1 - h.bracket.0;
            let (lo, hi) = f.hpm_critical_range;
            Row {
                bracket: Some(h.bracket),
                ..row(
                    2,
                    "critical shooting H+-(0)",
                    format!("{:.7} (bracket width {width:.1e})", h.value),
                    format!("in [{lo}, {hi}], width < {:e}", f.bracket_width),
                    h.value >= lo && h.value <= hi && width < f.bracket_width,
                )
            }
        }
        3 => {
            let mut worst = f64::NEG_INFINITY;
            let mut all_positive = true;
            for qp in [0.5, 1.0, 1.5, 2.0, 3.0] {
                for qm in [3.5, 4.0, 5.0, 8.0, 12.0] {
                    let base = p(qp, qm, 1.0);
                    for s in [0.1, 1.0, 3.0] {
                        let params = base.with_beta(s * base.beta_c())?;
                        let c = series::compute_coeffs(&params, 200)?;
                        all_positive &= c.a[1..].iter().all(|a| *a > 0.0);
                        worst = worst.max(c.partial_sum - c.bound);
                    }
                }
            }
            row(
                3,
                "series positivity and bound",
                format!("max(sum - bound) = {worst:.3e}, all a_n > 0: {all_positive}"),
                format!("sum <= q+/(q-+beta) + {:e}", f.series_slack),
                all_positive && worst <= f.series_slack,
            )
        }
        4 => {
            let mut worst: f64 = 0.0;
            for params in [crit, sup] {
                let c = series::compute_coeffs(&params, 400)?;
                for y0 in [0.1, 0.3, 0.5] {
                    let start = PhasePoint::new(c.value(y0), y0);
                    let traj = integrate(&params, start, Direction::Reversed, 1.0, &Controls::default())?;
                    for q in traj.points() {
                        worst = worst.max((q.x - c.value(q.y)).abs());
                    }
                }
            }
            row(
                4,
                "reversed flow stays on x = A(y)",
                format!("{worst:.3e}"),
                format!("< {:e}", f.on_curve_tol),
                worst < f.on_curve_tol,
            )
        }
        5 => {
            let mut rng = Xoshiro256PlusPlus::seed_from_u64(b.seed);
            let ctl = Controls::default();
            let mut worst: f64 = 0.0;
            for params in [crit, sup] {
                let mut done = 0;
                while done < 50 {
                    let v = PhasePoint::new(rng.random_range(0.05..0.95), rng.random_range(0.05..0.95));
                    let whole = integrate(&params, v, Direction::Forward, 0.4, &ctl)?;
                    if whole.end_phi() < 0.4 {
                        continue;
                    }
                    let half = integrate(&params, v, Direction::Forward, 0.2, &ctl)?;
                    let twice = integrate(&params, half.end(), Direction::Forward, 0.2, &ctl)?;
                    worst = worst.max(whole.end().dist(&twice.end()));
                    done += 1;
                }
            }
            row(
                5,
                "flow semigroup",
                format!("{worst:.3e}"),
                format!("< {:e}", f.semigroup_tol),
                worst < f.semigroup_tol,
            )
        }
        6 => {
            let m = dynsys::no_equilibria_check(&crit, 99)?.min(dynsys::no_equilibria_check(&sup, 99)?);
            row(
                6,
                "no interior equilibria",
                format!("min |field| = {m:.4e}"),
                format!("> {:e}", f.field_floor),
                m > f.field_floor,
            )
        }
        7 => {
            let d_sup = model::discriminant(&sup);
            let d0 = model::discriminant(&p(1.0, 4.0, f.double_root_betas[0]));
            let d1 = model::discriminant(&p(1.0, 4.0, f.double_root_betas[1]));
            row(
                7,
                "spectral discriminant",
                format!("(1,4,4): {d_sup}; zeros: {d0:e}, {d1:e}"),
                format!("< 0; |.| <= {:e}", f.spectral_tol),
                d_sup < 0.0 && d0.abs() <= f.spectral_tol && d1.abs() <= f.spectral_tol,
            )
        }
        8 => {
            let mut worst: f64 = 0.0;
            for qp in [0.5, 1.0, 1.5, 2.0, 3.0] {
                for qm in [3.5, 4.0, 5.0, 8.0, 12.0] {
                    for beta in [0.1, 1.0, 4.0] {
                        let params = p(qp, qm, beta);
                        let g = model::gamma_eigenvalue(&params, params.half_drift_gap())?;
                        worst = worst.max((g + params.beta_c()).abs());
                    }
                }
            }
            row(
                8,
                "gamma minimum equals -beta_c",
                format!("{worst:.3e}"),
                format!("<= {:e}", f.gamma_tol),
                worst <= f.gamma_tol,
            )
        }
        9 => {
            let t = Instant::now();
            let plus = sim::estimate_count_means(&crit, ParticleType::Plus, CountSign::Plus, &[0.0, 0.5], b.reps, b.seed, &cfg)?;
            let minus_root =
                sim::estimate_count_means(&crit, ParticleType::Minus, CountSign::Plus, &[0.0], b.reps, b.seed + 1, &cfg)?;
            let down = sim::estimate_count_means(&crit, ParticleType::Plus, CountSign::Minus, &[0.0], b.reps, b.seed + 2, &cfg)?;
            let secs = t.elapsed().as_secs_f64();
            let [e0, e1, e2, e3] = f.critical_means;
            let exact = plus[0].mean == e0 && plus[0].std_error == 0.0 && plus[0].width() == 0.0;
            let pass = exact
                && minus_root[0].consistent_with(e1, k)
                && down[0].consistent_with(e2, k)
                && plus[1].consistent_with(e3, k)
                && secs < f.mc_seconds;
            row(
                9,
                "critical mean counts",
                format!(
                    "E+N+(0) {}; E-N+(0) {}; E+N-(0) {}; E+N+(.5) {}",
                    plus[0].mean,
                    est(&minus_root[0]),
                    est(&down[0]),
                    est(&plus[1])
                ),
                format!("{e0} exactly; {e1}, {e2}, {e3:.5} within {k} se + bracket"),
                pass,
            )
        }
        10 => {
            let (phi, theta) = (0.5, 0.5);
            let hmp = curves::hmp_curve(&crit)?;
            let y = curve_y_at_x(&crit, &hmp.points, theta)?;
            let ode = integrate(&crit, PhasePoint::new(theta, y), Direction::Forward, phi, &Controls::default())?
                .end()
                .x;
            let g = sim::estimate_pgf(&crit, ParticleType::Plus, phi, theta, b.reps, b.seed)?;
            // composition: g(φ,θ) against g(φ/2, g(φ/2, θ))
            let inner = sim::estimate_pgf(&crit, ParticleType::Plus, phi / 2.0, theta, b.reps, b.seed + 1)?;
            let outer = sim::estimate_pgf(&crit, ParticleType::Plus, phi / 2.0, inner.mean, b.reps, b.seed + 2)?;
            let lip = (crit.half_drift_gap() * phi / 2.0).exp();
            let se = (g.std_error.powi(2) + outer.std_error.powi(2) + (lip * inner.std_error).powi(2)).sqrt();
            let slack = k * se + g.width() + outer.width() + lip * inner.width();
            let gap = (g.mean - outer.mean).abs();
            Row {
                bracket: Some(g.bracket),
                ..row(
                    10,
                    "pgf against ODE and composition law",
                    format!("MC {}; ODE {ode:.6}; composition gap {gap:.2e}", est(&g)),
                    format!("within {k} se + bracket; gap <= {slack:.2e}"),
                    g.consistent_with(ode, k) && gap <= slack,
                )
            }
        }
        11 => {
            let mode = ChainMode::FirstPassageLaplace { horizon: 200.0 };
            let e = sim::chain_functionals(&crit, &mode, b.reps, b.seed)?[0].estimate;
            Row {
                bracket: Some(e.bracket),
                ..row(
                    11,
                    "first-passage Laplace transform",
                    est(&e),
                    format!("{} within {k} se", f.a1),
                    e.consistent_with(f.a1, k),
                )
            }
        }
        12 => {
            let w = sim::estimate_windings(&crit, 2, b.reps, b.seed, &cfg)?;
            let e = w.w_plus[1];
            Row {
                bracket: Some(e.bracket),
                ..row(
                    12,
                    "winding generation mean",
                    format!("E W+(1) {}", est(&e)),
                    format!("{} within {k} se + bracket", f.winding_mean),
                    e.consistent_with(f.winding_mean, k),
                )
            }
        }
        13 => {
            let betas = [0.5, 0.45, 0.4, 0.3, 0.2, 0.1];
            let s = sim::nested_sweep(&crit, &betas, b.reps, b.seed, &cfg)?;
            let means: Vec<String> = s.estimates.iter().map(|e| format!("{:.4}", e.mean)).collect();
            row(
                13,
                "nested sweep monotonicity",
                format!("pathwise {}; means {}", s.pathwise_monotone_fraction, means.join(" ")),
                "pathwise fraction 1; means nondecreasing in beta".to_string(),
                s.pathwise_monotone_fraction == 1.0 && s.means_monotone(),
            )
        }
        14 => {
            let sup_reps = b.reps.min(10_000);
            let hi = sim::left_excursion_fraction(&sup, sup_reps, b.seed, &cfg)?;
            let lo = sim::left_excursion_fraction(&crit, b.reps, b.seed, &cfg)?;
            row(
                14,
                "left-excursion dichotomy",
                format!("(1,4,4) {}; (1,4,0.5) {}", est(&hi), est(&lo)),
                format!("> {}; <= {} + {k} se", f.left_super_min, f.left_crit_max),
                hi.bracket.0 > f.left_super_min
                    && lo.bracket.0 <= f.left_crit_max + k * lo.bracket_std_error.0,
            )
        }
        15 => {
            let m = crit.m();
            let seg = dynsys::slope_along_eigen_segment(&crit, 20);
            let min_slope = seg.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
            let (x, y) = f.slope_point;
            let (dx, dy) = dynsys::field_forward(&crit, PhasePoint::new(x, y));
            let hand = dy / dx;
            row(
                15,
                "slope comparison on the slope-m segment",
                format!("min slope {min_slope:.4}; at ({x},{y}) {hand:.4}"),
                format!("> m = {m}; {} at the hand point", f.slope_at_point),
                seg.len() == 20 && min_slope > m && hand > m && (hand - f.slope_at_point).abs() < 1e-3,
            )
        }
        _ => unreachable!("criterion ids run from 1 to {CRITERIA}"),
    })
}

/// Plain-text table.
pub fn render(rows: &[Row]) -> String {
    let mut out = String::new();
    for r in rows {
        out.push_str(&format!(
            "{:>2} {} {:<42} measured: {}\n   expected: {}{} ({:.1}s)\n",
            r.id,
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            r.measured,
            r.expected,
            r.bracket.map(|(a, b)| format!("; bracket [{a:.7}, {b:.7}]")).unwrap_or_default(),
            r.seconds
        ));
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    out.push_str(&format!("{} of {} criteria passed\n", rows.len() - failed, rows.len()));
    out
}
