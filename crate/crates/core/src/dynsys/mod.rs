//! The planar pgf dynamical system on the closed unit square.
//!
//! Forward time `φ` moves `(x, y) = (E⁺θ^{N⁺(φ)}, E⁻θ^{N⁺(φ)})`:
//!
//! ```text
//! x' =   q₊(y − x) + β(x² − x)
//! y' = −[q₋(x − y) + β(y² − y)]
//! ```
//!
//! The reversed system is its exact negation.

pub mod rk;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: f64,
    pub y: f64,
}

impl PhasePoint {
    pub const ORIGIN: PhasePoint = PhasePoint { x: 0.0, y: 0.0 };
    pub const CORNER: PhasePoint = PhasePoint { x: 1.0, y: 1.0 };

    pub fn new(x: f64, y: f64) -> Self {
        PhasePoint { x, y }
    }

    pub fn in_unit_square(&self) -> bool {
        (0.0..=1.0).contains(&self.x) && (0.0..=1.0).contains(&self.y)
    }

    pub fn dist(&self, other: &PhasePoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    fn as_array(&self) -> [f64; 2] {
        [self.x, self.y]
    }

    fn from_array(a: [f64; 2]) -> Self {
        PhasePoint { x: a[0], y: a[1] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Reversed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExitKind {
    InteriorAtHorizon,
    ReachedOriginBall,
    ReachedCornerBall,
    ExitLeft,
    ExitRight,
    ExitTop,
    ExitBottom,
}

impl ExitKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExitKind::InteriorAtHorizon => "interior_at_horizon",
            ExitKind::ReachedOriginBall => "reached_origin_ball",
            ExitKind::ReachedCornerBall => "reached_corner_ball",
            ExitKind::ExitLeft => "exit_left",
            ExitKind::ExitRight => "exit_right",
            ExitKind::ExitTop => "exit_top",
            ExitKind::ExitBottom => "exit_bottom",
        }
    }

    pub fn is_boundary_exit(&self) -> bool {
        matches!(
            self,
            ExitKind::ExitLeft | ExitKind::ExitRight | ExitKind::ExitTop | ExitKind::ExitBottom
        )
    }
}

impl std::fmt::Display for ExitKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub phi: f64,
    pub point: PhasePoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub direction: Direction,
    pub samples: Vec<Sample>,
    pub exit: ExitKind,
}

impl Trajectory {
    pub fn constant(direction: Direction, point: PhasePoint, exit: ExitKind) -> Self {
        Trajectory {
            direction,
            samples: vec![Sample { phi: 0.0, point }],
            exit,
        }
    }

    pub fn start(&self) -> PhasePoint {
        self.samples[0].point
    }

    pub fn end(&self) -> PhasePoint {
        self.samples[self.samples.len() - 1].point
    }

    pub fn end_phi(&self) -> f64 {
        self.samples[self.samples.len() - 1].phi
    }

    pub fn points(&self) -> impl Iterator<Item = PhasePoint> + '_ {
        self.samples.iter().map(|s| s.point)
    }

    /// `phi,x,y` rows followed by `# exit=<classification>`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("phi,x,y\n");
        for s in &self.samples {
            out.push_str(&crate::io::csv::row(&[s.phi, s.point.x, s.point.y]));
        }
        out.push_str(&format!("# exit={}\n", self.exit));
        out
    }
}

/// Integration tolerances, termination radii and sampling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Controls {
    pub rtol: f64,
    pub atol: f64,
    /// Radius of the terminating balls around `(0,0)` and `(1,1)`.
    pub ball_radius: f64,
    /// Width to which a boundary exit is located in `φ`.
    pub exit_tol: f64,
    /// Largest allowed step; every accepted step is emitted as a sample.
    pub emission_step: f64,
    pub min_step: f64,
}

impl Default for Controls {
    fn default() -> Self {
        Controls {
            rtol: 1e-10,
            atol: 1e-12,
            ball_radius: 1e-6,
            exit_tol: 1e-12,
            emission_step: 0.01,
            min_step: 1e-14,
        }
    }
}

pub fn field_forward(params: &ModelParams, p: PhasePoint) -> (f64, f64) {
    let (qp, qm, b) = (params.q_plus(), params.q_minus(), params.beta());
    let (x, y) = (p.x, p.y);
    let dx = qp * (y - x) + b * (x * x - x);
    let dy = -(qm * (x - y) + b * (y * y - y));
    (dx, dy)
}

pub fn field_reversed(params: &ModelParams, p: PhasePoint) -> (f64, f64) {
    let (dx, dy) = field_forward(params, p);
    (-dx, -dy)
}

pub fn field(params: &ModelParams, direction: Direction, p: PhasePoint) -> (f64, f64) {
    match direction {
        Direction::Forward => field_forward(params, p),
        Direction::Reversed => field_reversed(params, p),
    }
}

pub(crate) enum DriveEnd<const N: usize> {
    Horizon,
    Stopped,
    /// First state found outside the admissible region (the last sample is inside).
    Exited([f64; N]),
}

pub(crate) struct Drive<const N: usize> {
    pub samples: Vec<(f64, [f64; N])>,
    pub end: DriveEnd<N>,
}

/// Adaptive integration of an autonomous system from `y0` up to `horizon`.
/// Stops early when `stop` holds at an accepted state, or when a step leaves
/// the `inside` region, in which case the crossing is bisected in `φ`.
pub(crate) fn drive<const N: usize, F, I, S>(
    f: &F,
    y0: [f64; N],
    horizon: f64,
    controls: &Controls,
    inside: I,
    stop: S,
) -> Result<Drive<N>>
where
    F: Fn(&[f64; N]) -> [f64; N],
    I: Fn(&[f64; N]) -> bool,
    S: Fn(&[f64; N]) -> bool,
{
    let mut samples = vec![(0.0, y0)];
    if stop(&y0) {
        return Ok(Drive {
            samples,
            end: DriveEnd::Stopped,
        });
    }
    let mut phi = 0.0;
    let mut y = y0;
    let mut h = controls.emission_step.min(1e-3).min(horizon);

    while phi < horizon {
        h = h.min(controls.emission_step).min(horizon - phi);
        let (y1, err) = rk::dopri_step(f, &y, h);
        let e = rk::error_norm(&y, &y1, &err, controls.rtol, controls.atol);
        if !(e <= 1.0) {
            h *= if e.is_finite() { rk::step_factor(e) } else { 0.2 };
            if h < controls.min_step {
                return Err(Error::Stiffness {
                    phi,
                    x: y[0],
                    y: y[N - 1],
                });
            }
            continue;
        }

        if !inside(&y1) {
            let (mut lo, mut hi) = (0.0, h);
            let mut outside = y1;
            while hi - lo > controls.exit_tol {
                let mid = 0.5 * (lo + hi);
                let ym = rk::dopri_step(f, &y, mid).0;
                if inside(&ym) {
                    lo = mid;
                } else {
                    hi = mid;
                    outside = ym;
                }
            }
            if lo > 0.0 {
                samples.push((phi + lo, rk::dopri_step(f, &y, lo).0));
            }
            return Ok(Drive {
                samples,
                end: DriveEnd::Exited(outside),
            });
        }

        phi += h;
        y = y1;
        samples.push((phi, y));
        if stop(&y) {
            return Ok(Drive {
                samples,
                end: DriveEnd::Stopped,
            });
        }
        h *= rk::step_factor(e);
    }

    Ok(Drive {
        samples,
        end: DriveEnd::Horizon,
    })
}

/// Integrate from `start` in the given direction, stopping at `horizon`,
/// inside a ball around `(0,0)` or `(1,1)`, or at a located boundary exit.
pub fn integrate(
    params: &ModelParams,
    start: PhasePoint,
    direction: Direction,
    horizon: f64,
    controls: &Controls,
) -> Result<Trajectory> {
    if !start.in_unit_square() {
        return Err(Error::Domain(format!(
            "start ({}, {}) outside the unit square",
            start.x, start.y
        )));
    }
    if !(horizon > 0.0) {
        return Err(Error::Domain(format!("horizon must be > 0 (got {horizon})")));
    }
    let params = *params;
    let f = move |s: &[f64; 2]| {
        let (dx, dy) = field(&params, direction, PhasePoint::from_array(*s));
        [dx, dy]
    };
    let r = controls.ball_radius;
    let in_ball = |s: &[f64; 2]| {
        let p = PhasePoint::from_array(*s);
        p.dist(&PhasePoint::ORIGIN) < r || p.dist(&PhasePoint::CORNER) < r
    };
    let inside = |s: &[f64; 2]| PhasePoint::from_array(*s).in_unit_square();

    let run = drive(&f, start.as_array(), horizon, controls, inside, in_ball)?;
    let mut samples: Vec<Sample> = run
        .samples
        .into_iter()
        .map(|(phi, s)| Sample {
            phi,
            point: PhasePoint::from_array(s),
        })
        .collect();

    let exit = match run.end {
        DriveEnd::Horizon => ExitKind::InteriorAtHorizon,
        DriveEnd::Stopped => {
            let last = samples[samples.len() - 1].point;
            if last.dist(&PhasePoint::ORIGIN) < r {
                ExitKind::ReachedOriginBall
            } else {
                ExitKind::ReachedCornerBall
            }
        }
        DriveEnd::Exited(out) => {
            let last = samples.len() - 1;
            let p = &mut samples[last].point;
            p.x = p.x.clamp(0.0, 1.0);
            p.y = p.y.clamp(0.0, 1.0);
            classify_exit(PhasePoint::from_array(out))
        }
    };

    Ok(Trajectory {
        direction,
        samples,
        exit,
    })
}

fn classify_exit(out: PhasePoint) -> ExitKind {
    [
        (-out.x, ExitKind::ExitLeft),
        (out.x - 1.0, ExitKind::ExitRight),
        (-out.y, ExitKind::ExitBottom),
        (out.y - 1.0, ExitKind::ExitTop),
    ]
    .into_iter()
    .fold((0.0, ExitKind::InteriorAtHorizon), |best, cand| {
        if cand.0 > best.0 {
            cand
        } else {
            best
        }
    })
    .1
}

/// Minimum of `‖field_forward‖` over the strictly interior grid
/// `{(i/(n+1), j/(n+1)) : 1 ≤ i, j ≤ n}`.
pub fn no_equilibria_check(params: &ModelParams, grid_n: usize) -> Result<f64> {
    if grid_n < 2 {
        return Err(Error::Domain(format!("grid_n must be >= 2 (got {grid_n})")));
    }
    let d = (grid_n + 1) as f64;
    let mut min = f64::INFINITY;
    for i in 1..=grid_n {
        for j in 1..=grid_n {
            let (dx, dy) = field_forward(params, PhasePoint::new(i as f64 / d, j as f64 / d));
            min = min.min(dx.hypot(dy));
        }
    }
    Ok(min)
}

/// Points of the slope-`m` segment from `(1,1)` clipped to the unit square,
/// paired with the `dy/dx` slope of the forward field there. `n` points are
/// spaced evenly strictly inside the segment.
pub fn slope_along_eigen_segment(params: &ModelParams, n: usize) -> Vec<(PhasePoint, f64)> {
    let m = params.m();
    // for m > 1 the line y - 1 = m (x - 1) leaves the square through y = 0
    let end = PhasePoint::new(1.0 - 1.0 / m, 0.0);
    (1..=n)
        .map(|k| {
            let t = k as f64 / (n + 1) as f64;
            let p = PhasePoint::new(1.0 + t * (end.x - 1.0), 1.0 + t * (end.y - 1.0));
            let (dx, dy) = field_forward(params, p);
            (p, dy / dx)
        })
        .collect()
}
