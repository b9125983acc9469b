//! The probabilistic curves `x = H⁺⁻(y)` and `y = H⁻⁺(x)` and the boundary
//! solutions for `θ ∈ {0, 1}`.
//!
//! Below and at criticality `(1,1)` is a stable node of the reversed flow and
//! a whole fan of trajectories from the bottom edge runs into it. `H⁺⁻` is the
//! edge of that fan: the trajectory entering the corner along the fast (or, at
//! criticality, the unique) eigen-direction. Shooting therefore classifies a
//! corner arrival by the side of that eigenline it lands on, since near a
//! degenerate node the trajectories on the wrong side only swing out far
//! inside any practical terminating ball.

use serde::Serialize;

use crate::dynsys::{
    self, field_reversed, integrate, rk, Controls, Direction, ExitKind, PhasePoint, Sample,
    Trajectory,
};
use crate::error::{Error, Result};
use crate::model::{self, ModelParams, Regime};
use crate::series;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    HplusMinus,
    HminusPlus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveMethod {
    SeriesA,
    Shooting,
    ReverseFromCorner,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EndpointValues {
    pub value_at_0: f64,
    pub value_at_1_minus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveResult {
    pub points: Trajectory,
    pub kind: CurveKind,
    pub endpoint_values: EndpointValues,
    pub method: CurveMethod,
    /// Bisection bracket on `H⁺⁻(0)` for shooting results.
    pub bracket: Option<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveSummary {
    pub kind: CurveKind,
    pub value_at_0: f64,
    pub value_at_1_minus: f64,
    pub bracket: Option<(f64, f64)>,
    pub method: CurveMethod,
    pub exit: ExitKind,
}

impl CurveResult {
    pub fn summary(&self) -> CurveSummary {
        CurveSummary {
            kind: self.kind,
            value_at_0: self.endpoint_values.value_at_0,
            value_at_1_minus: self.endpoint_values.value_at_1_minus,
            bracket: self.bracket,
            method: self.method,
            exit: self.points.exit,
        }
    }
}

/// Settings for the shooting solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShootingControls {
    pub horizon: f64,
    pub controls: Controls,
    pub max_iter: usize,
}

impl Default for ShootingControls {
    fn default() -> Self {
        ShootingControls {
            horizon: 400.0,
            controls: Controls::default(),
            max_iter: 200,
        }
    }
}

/// Outcome of a single shot from `(x0, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Shot {
    /// Start lies left of `H⁺⁻(0)`: the trajectory enters `(1,1)` from inside the fan.
    Under,
    /// Start lies right of `H⁺⁻(0)`: the trajectory leaves through `x = 1`.
    Over,
}

/// `H⁺⁻(0)` with the bracket that certifies it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HpmAtZero {
    pub value: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
    pub regime: Regime,
}

pub fn classify_shot(
    params: &ModelParams,
    x0: f64,
    sc: &ShootingControls,
) -> Result<(Shot, Trajectory)> {
    let traj = integrate(
        params,
        PhasePoint::new(x0, 0.0),
        Direction::Reversed,
        sc.horizon,
        &sc.controls,
    )?;
    let shot = match traj.exit {
        ExitKind::ExitRight => Shot::Over,
        ExitKind::ExitTop | ExitKind::ExitLeft | ExitKind::ReachedOriginBall => Shot::Under,
        ExitKind::ExitBottom => Shot::Over,
        ExitKind::ReachedCornerBall => {
            let slope = model::separatrix_slope(params).ok_or_else(|| {
                Error::Spectral("corner reached in the spiral regime".to_string())
            })?;
            let end = traj.end();
            if (end.y - 1.0) - slope * (end.x - 1.0) >= 0.0 {
                Shot::Under
            } else {
                Shot::Over
            }
        }
        ExitKind::InteriorAtHorizon => {
            let end = traj.end();
            return Err(Error::HorizonTooShort {
                x0,
                horizon: sc.horizon,
                x: end.x,
                y: end.y,
            });
        }
    };
    Ok((shot, traj))
}

pub fn hpm_at_zero(params: &ModelParams, tol: f64) -> Result<HpmAtZero> {
    hpm_at_zero_with(params, tol, &ShootingControls::default())
}

/// Bisection on the start `x0` of reversed trajectories from the bottom edge.
/// Above criticality the value is `0` exactly.
pub fn hpm_at_zero_with(
    params: &ModelParams,
    tol: f64,
    sc: &ShootingControls,
) -> Result<HpmAtZero> {
    if !(tol >= 1e-10) {
        return Err(Error::Domain(format!("tol must be >= 1e-10 (got {tol})")));
    }
    let regime = params.regime();
    if regime == Regime::Supercritical {
        return Ok(HpmAtZero {
            value: 0.0,
            bracket: (0.0, 0.0),
            iterations: 0,
            regime,
        });
    }

    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut iterations = 0;
    while hi - lo >= tol {
        if iterations >= sc.max_iter {
            return Err(Error::Internal(format!(
                "bisection did not converge in {} iterations",
                sc.max_iter
            )));
        }
        let mid = 0.5 * (lo + hi);
        match classify_shot(params, mid, sc)?.0 {
            Shot::Under => lo = mid,
            Shot::Over => hi = mid,
        }
        iterations += 1;
    }
    Ok(HpmAtZero {
        value: 0.5 * (lo + hi),
        bracket: (lo, hi),
        iterations,
        regime,
    })
}

/// Independent route to `H⁺⁻(0)`: forward integration from just inside `(1,1)`
/// along the separatrix direction down to the bottom edge.
pub fn hpm_at_zero_from_corner(params: &ModelParams, offset: f64) -> Result<Trajectory> {
    let slope = model::separatrix_slope(params)
        .ok_or_else(|| Error::Spectral("no real eigen-direction at (1,1)".to_string()))?;
    let n = slope.hypot(1.0);
    let start = PhasePoint::new(1.0 - offset / n, 1.0 - offset * slope / n);
    let controls = Controls {
        ball_radius: offset * 1e-3,
        ..Controls::default()
    };
    let traj = integrate(params, start, Direction::Forward, 400.0, &controls)?;
    if traj.exit != ExitKind::ExitBottom {
        return Err(Error::Internal(format!(
            "corner-started trajectory ended with {}",
            traj.exit
        )));
    }
    Ok(traj)
}

/// `x = H⁺⁻(y)`: shooting below and at criticality, the series `x = A(y)` above.
pub fn hpm_curve(params: &ModelParams) -> Result<CurveResult> {
    hpm_curve_with(params, 1e-10, &ShootingControls::default())
}

pub fn hpm_curve_with(
    params: &ModelParams,
    tol: f64,
    sc: &ShootingControls,
) -> Result<CurveResult> {
    if params.regime() == Regime::Supercritical {
        return series_curve(params, &sc.controls);
    }
    let zero = hpm_at_zero_with(params, tol, sc)?;
    // the lower bracket end is certified to run into the corner
    let (shot, traj) = classify_shot(params, zero.bracket.0, sc)?;
    if shot != Shot::Under || traj.exit != ExitKind::ReachedCornerBall {
        return Err(Error::Internal(format!(
            "lower bracket end did not reach (1,1): {}",
            traj.exit
        )));
    }
    Ok(CurveResult {
        points: traj,
        kind: CurveKind::HplusMinus,
        endpoint_values: EndpointValues {
            value_at_0: zero.value,
            value_at_1_minus: 1.0,
        },
        method: CurveMethod::Shooting,
        bracket: Some(zero.bracket),
    })
}

/// The reversed motion along `x = A(y)` from the top edge into `(0,0)`,
/// driven by the autonomous `y' = q₋(A(y) − y) + β(y² − y)`.
fn series_curve(params: &ModelParams, controls: &Controls) -> Result<CurveResult> {
    let coeffs = series::compute_coeffs(params, series::DEFAULT_N_MAX)?;
    let (qm, b) = (params.q_minus(), params.beta());
    let f = |s: &[f64; 1]| {
        let y = s[0];
        [qm * (coeffs.value(y) - y) + b * (y * y - y)]
    };
    let r = controls.ball_radius;
    let run = dynsys::drive(
        &f,
        [1.0],
        400.0,
        controls,
        |s| (0.0..=1.0).contains(&s[0]),
        |s| coeffs.value(s[0]).hypot(s[0]) < r,
    )?;
    let exit = match run.end {
        dynsys::DriveEnd::Stopped => ExitKind::ReachedOriginBall,
        dynsys::DriveEnd::Horizon => ExitKind::InteriorAtHorizon,
        dynsys::DriveEnd::Exited(_) => ExitKind::ExitBottom,
    };
    let samples = run
        .samples
        .into_iter()
        .map(|(phi, s)| Sample {
            phi,
            point: PhasePoint::new(coeffs.value(s[0]), s[0]),
        })
        .collect();
    Ok(CurveResult {
        points: Trajectory {
            direction: Direction::Reversed,
            samples,
            exit,
        },
        kind: CurveKind::HplusMinus,
        endpoint_values: EndpointValues {
            value_at_0: 0.0,
            value_at_1_minus: coeffs.value(1.0),
        },
        method: CurveMethod::SeriesA,
        bracket: None,
    })
}

/// Eigen-direction at `(0,0)` carrying `y = H⁻⁺(x)`: among the directions
/// pointing into the square, the one with the eigenvalue of smaller modulus.
pub fn origin_slow_direction(params: &ModelParams) -> Result<([f64; 2], f64)> {
    let jac = [
        [-params.k_plus(), params.q_plus()],
        [-params.q_minus(), params.k_minus()],
    ];
    let tr = jac[0][0] + jac[1][1];
    let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
    let disc = 0.25 * tr * tr - det;
    if disc < 0.0 {
        return Err(Error::Spectral("complex eigenvalues at (0,0)".to_string()));
    }
    let r = disc.sqrt();
    let mut best: Option<([f64; 2], f64)> = None;
    for lambda in [0.5 * tr - r, 0.5 * tr + r] {
        let (vx, vy) = (jac[0][1], lambda - jac[0][0]);
        let n = vx.hypot(vy);
        let mut v = [vx / n, vy / n];
        if v[0] < 0.0 {
            v = [-v[0], -v[1]];
        }
        if v[0] > 0.0 && v[1] > 0.0 && best.is_none_or(|(_, l)| lambda.abs() < l.abs()) {
            best = Some((v, lambda));
        }
    }
    best.ok_or_else(|| Error::Spectral("no interior-pointing eigenvector at (0,0)".to_string()))
}

/// `y = H⁻⁺(x)`: reversed flow out of the origin along its slow eigen-direction.
pub fn hmp_curve(params: &ModelParams) -> Result<CurveResult> {
    hmp_curve_with(params, &Controls::default())
}

pub fn hmp_curve_with(params: &ModelParams, controls: &Controls) -> Result<CurveResult> {
    let (v, _) = origin_slow_direction(params)?;
    let r0 = 10.0 * controls.ball_radius;
    let start = PhasePoint::new(r0 * v[0], r0 * v[1]);
    let traj = integrate(params, start, Direction::Reversed, 400.0, controls)?;
    let value_at_1_minus = match traj.exit {
        ExitKind::ReachedCornerBall => 1.0,
        _ => traj.end().y,
    };
    Ok(CurveResult {
        points: traj,
        kind: CurveKind::HminusPlus,
        endpoint_values: EndpointValues {
            value_at_0: 0.0,
            value_at_1_minus,
        },
        method: CurveMethod::Shooting,
        bracket: None,
    })
}

/// Chord slope `dy/dx` from the last sample of a trajectory into `(1,1)`.
pub fn terminal_slope(traj: &Trajectory) -> f64 {
    let e = traj.end();
    (1.0 - e.y) / (1.0 - e.x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Theta {
    Zero,
    One,
}

/// Solutions of the reversed system with `θ = 0` (`(P⁺[N⁻(φ)=0], P⁻[N⁻(φ)=0])`)
/// and `θ = 1` (`(P⁺[N⁻(φ)<∞], P⁻[N⁻(φ)<∞])`).
pub fn boundary_solutions(params: &ModelParams, theta: Theta) -> Result<Trajectory> {
    let at_most_critical = params.regime().is_at_most_critical();
    match (theta, at_most_critical) {
        (Theta::Zero, false) => Ok(Trajectory::constant(
            Direction::Reversed,
            PhasePoint::ORIGIN,
            ExitKind::ReachedOriginBall,
        )),
        (Theta::One, true) => Ok(Trajectory::constant(
            Direction::Reversed,
            PhasePoint::CORNER,
            ExitKind::ReachedCornerBall,
        )),
        (Theta::Zero, true) | (Theta::One, false) => Ok(hpm_curve(params)?.points),
    }
}

/// `y` on a curve traced with `x` strictly increasing, located by bisecting
/// the integration step that straddles `x`.
pub fn curve_y_at_x(params: &ModelParams, curve: &Trajectory, x: f64) -> Result<f64> {
    let s = &curve.samples;
    let idx = s
        .windows(2)
        .position(|w| w[0].point.x <= x && x <= w[1].point.x)
        .ok_or_else(|| Error::Domain(format!("x={x} outside the traced curve")))?;
    let (a, b) = (s[idx], s[idx + 1]);
    let params = *params;
    let dir = curve.direction;
    let f = move |v: &[f64; 2]| {
        let (dx, dy) = dynsys::field(&params, dir, PhasePoint::new(v[0], v[1]));
        [dx, dy]
    };
    let (mut lo, mut hi) = (0.0, b.phi - a.phi);
    let y0 = [a.point.x, a.point.y];
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if rk::dopri_step(&f, &y0, mid).0[0] < x {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    Ok(rk::dopri_step(&f, &y0, 0.5 * (lo + hi)).0[1])
}

/// Whether two polylines properly intersect away from the two equilibria.
pub fn polylines_cross(a: &[PhasePoint], b: &[PhasePoint], corner_exclusion: f64) -> bool {
    let keep = |p: &PhasePoint| {
        p.dist(&PhasePoint::ORIGIN) > corner_exclusion && p.dist(&PhasePoint::CORNER) > corner_exclusion
    };
    let segs = |pts: &[PhasePoint]| -> Vec<(PhasePoint, PhasePoint)> {
        pts.windows(2)
            .filter(|w| keep(&w[0]) && keep(&w[1]))
            .map(|w| (w[0], w[1]))
            .collect()
    };
    let (sa, sb) = (segs(a), segs(b));
    let orient = |p: PhasePoint, q: PhasePoint, r: PhasePoint| {
        (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
    };
    for &(p1, p2) in &sa {
        let (ax0, ax1) = (p1.x.min(p2.x), p1.x.max(p2.x));
        let (ay0, ay1) = (p1.y.min(p2.y), p1.y.max(p2.y));
        for &(q1, q2) in &sb {
            if q1.x.max(q2.x) < ax0 || q1.x.min(q2.x) > ax1 || q1.y.max(q2.y) < ay0 || q1.y.min(q2.y) > ay1 {
                continue;
            }
            let d1 = orient(p1, p2, q1);
            let d2 = orient(p1, p2, q2);
            let d3 = orient(q1, q2, p1);
            let d4 = orient(q1, q2, p2);
            if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
                return true;
            }
        }
    }
    false
}

/// Largest mismatch between consecutive samples and a single reversed-field
/// step between them.
pub fn resubstitution_residual(params: &ModelParams, traj: &Trajectory) -> f64 {
    let params = *params;
    let dir = traj.direction;
    let f = move |v: &[f64; 2]| {
        let (dx, dy) = dynsys::field(&params, dir, PhasePoint::new(v[0], v[1]));
        [dx, dy]
    };
    traj.samples
        .windows(2)
        .map(|w| {
            let y0 = [w[0].point.x, w[0].point.y];
            let y1 = rk::dopri_step(&f, &y0, w[1].phi - w[0].phi).0;
            (y1[0] - w[1].point.x).abs().max((y1[1] - w[1].point.y).abs())
        })
        .fold(0.0, f64::max)
}

/// Reversed-field derivative at a point, exposed for curve diagnostics.
pub fn reversed_slope(params: &ModelParams, p: PhasePoint) -> f64 {
    let (dx, dy) = field_reversed(params, p);
    dy / dx
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(qp: f64, qm: f64, b: f64) -> ModelParams {
        ModelParams::new(qp, qm, b).unwrap()
    }

    #[test]
    fn supercritical_zero_is_exact() {
        let z = hpm_at_zero(&p(1.0, 4.0, 4.0), 1e-6).unwrap();
        assert_eq!(z.value, 0.0);
    }

    #[test]
    fn rejects_too_fine_tol() {
        assert!(matches!(hpm_at_zero(&p(1.0, 4.0, 0.4), 1e-12), Err(Error::Domain(_))));
    }

    #[test]
    fn short_horizon_is_reported() {
        let sc = ShootingControls {
            horizon: 0.1,
            ..ShootingControls::default()
        };
        let err = hpm_at_zero_with(&p(1.0, 4.0, 0.4), 1e-4, &sc).unwrap_err();
        assert!(matches!(err, Error::HorizonTooShort { .. }), "{err}");
    }

    #[test]
    fn origin_direction_is_slow_manifold() {
        let params = p(1.0, 4.0, 0.5);
        let (v, lambda) = origin_slow_direction(&params).unwrap();
        // slope q₋a₁/q₊
        let a1 = series::a1_closed_form(&params);
        assert!((v[1] / v[0] - 4.0 * a1).abs() < 1e-12);
        assert!(lambda < 0.0);
    }

    #[test]
    fn boundary_solutions_constant_cases() {
        let b = boundary_solutions(&p(1.0, 4.0, 4.0), Theta::Zero).unwrap();
        assert_eq!(b.samples.len(), 1);
        assert_eq!(b.start(), PhasePoint::ORIGIN);
        let c = boundary_solutions(&p(1.0, 4.0, 0.5), Theta::One).unwrap();
        assert_eq!(c.samples.len(), 1);
        assert_eq!(c.start(), PhasePoint::CORNER);
    }

    #[test]
    fn hpm_zero_critical_bracket() {
        let z = hpm_at_zero(&p(1.0, 4.0, 0.5), 1e-6).unwrap();
        assert!(z.bracket.1 - z.bracket.0 < 1e-6);
        assert!(z.value > 0.6289 && z.value < 0.6300, "{}", z.value);
    }

    #[test]
    fn bracket_ends_classify_oppositely() {
        let params = p(1.0, 4.0, 0.5);
        let sc = ShootingControls::default();
        let z = hpm_at_zero_with(&params, 1e-8, &sc).unwrap();
        assert_eq!(classify_shot(&params, z.bracket.0, &sc).unwrap().0, Shot::Under);
        assert_eq!(classify_shot(&params, z.bracket.1, &sc).unwrap().0, Shot::Over);
    }

    #[test]
    fn refining_tol_stays_in_bracket() {
        let params = p(1.0, 4.0, 0.3);
        let coarse = hpm_at_zero(&params, 1e-5).unwrap();
        let fine = hpm_at_zero(&params, 0.5e-5).unwrap();
        let w = coarse.bracket.1 - coarse.bracket.0;
        assert!((fine.value - coarse.value).abs() < w);
    }

    #[test]
    fn corner_route_agrees_with_shooting() {
        for b in [0.3, 0.5] {
            let params = p(1.0, 4.0, b);
            let z = hpm_at_zero(&params, 1e-10).unwrap();
            let x = hpm_at_zero_from_corner(&params, 1e-6).unwrap().end().x;
            assert!((x - z.value).abs() < 1e-7, "beta {b}: {x} vs {}", z.value);
        }
    }

    #[test]
    fn curves_monotone_and_disjoint() {
        for b in [0.3, 0.5, 4.0] {
            let params = p(1.0, 4.0, b);
            let hpm = hpm_curve(&params).unwrap();
            let hmp = hmp_curve(&params).unwrap();
            let a: Vec<_> = hpm.points.points().collect();
            let c: Vec<_> = hmp.points.points().collect();
            assert!(a.iter().all(PhasePoint::in_unit_square));
            assert!(c.iter().all(PhasePoint::in_unit_square));
            // hpm runs up in y (shooting) or down in y (series), either way strictly
            let dy: Vec<f64> = a.windows(2).map(|w| w[1].y - w[0].y).collect();
            assert!(dy.iter().all(|d| *d > 0.0) || dy.iter().all(|d| *d < 0.0));
            assert!(c.windows(2).all(|w| w[1].x > w[0].x));
            assert!(!polylines_cross(&a, &c, 1e-3), "beta {b}");
            assert_eq!(hmp.endpoint_values.value_at_0, 0.0);
        }
    }

    #[test]
    fn supercritical_endpoints() {
        let params = p(1.0, 4.0, 4.0);
        let hpm = hpm_curve(&params).unwrap();
        assert_eq!(hpm.method, CurveMethod::SeriesA);
        assert_eq!(hpm.endpoint_values.value_at_0, 0.0);
        assert!(hpm.endpoint_values.value_at_1_minus <= 0.125);
        let hmp = hmp_curve(&params).unwrap();
        assert_eq!(hmp.points.exit, ExitKind::ExitRight);
        assert!(hmp.endpoint_values.value_at_1_minus < 1.0);
    }

    #[test]
    fn critical_endpoints_and_slopes() {
        let params = p(1.0, 4.0, 0.5);
        let hpm = hpm_curve(&params).unwrap();
        assert_eq!(hpm.endpoint_values.value_at_1_minus, 1.0);
        assert!((terminal_slope(&hpm.points) - 2.0).abs() < 1e-6);
        let hmp = hmp_curve(&params).unwrap();
        assert_eq!(hmp.endpoint_values.value_at_1_minus, 1.0);
        // the degenerate node is approached with a logarithmic slope correction
        let slope_far = {
            let s = &hmp.points.samples;
            let far = s.iter().find(|q| q.point.dist(&PhasePoint::CORNER) < 1e-2).unwrap();
            (1.0 - far.point.y) / (1.0 - far.point.x)
        };
        let slope_near = terminal_slope(&hmp.points);
        assert!(slope_far < slope_near && slope_near < 2.0);
        assert!(2.0 - slope_near < 0.15);
    }

    #[test]
    fn curve_points_resubstitute() {
        for b in [0.5, 4.0] {
            let params = p(1.0, 4.0, b);
            let hmp = hmp_curve(&params).unwrap();
            assert!(resubstitution_residual(&params, &hmp.points) < 1e-8);
        }
        let params = p(1.0, 4.0, 0.5);
        let hpm = hpm_curve(&params).unwrap();
        assert!(resubstitution_residual(&params, &hpm.points) < 1e-8);
    }

    #[test]
    fn series_curve_lies_on_reversed_flow() {
        let params = p(1.0, 4.0, 4.0);
        let hpm = hpm_curve(&params).unwrap();
        let coeffs = series::compute_coeffs(&params, 200).unwrap();
        let start = hpm.points.samples[hpm.points.samples.len() / 3].point;
        let traj = integrate(&params, start, Direction::Reversed, 1.0, &Controls::default()).unwrap();
        for q in traj.points() {
            assert!((q.x - coeffs.value(q.y)).abs() < 1e-6);
        }
    }

    #[test]
    fn y_at_x_matches_samples() {
        let params = p(1.0, 4.0, 0.5);
        let hmp = hmp_curve(&params).unwrap();
        let s = hmp.points.samples[40];
        let y = curve_y_at_x(&params, &hmp.points, s.point.x).unwrap();
        assert!((y - s.point.y).abs() < 1e-12);
        let y5 = curve_y_at_x(&params, &hmp.points, 0.5).unwrap();
        assert!(y5 > 0.0 && y5 < 1.0);
    }

    #[test]
    fn crossing_detector() {
        let a = [PhasePoint::new(0.1, 0.1), PhasePoint::new(0.5, 0.5)];
        let b = [PhasePoint::new(0.1, 0.5), PhasePoint::new(0.5, 0.1)];
        let c = [PhasePoint::new(0.6, 0.1), PhasePoint::new(0.9, 0.1)];
        assert!(polylines_cross(&a, &b, 1e-3));
        assert!(!polylines_cross(&a, &c, 1e-3));
    }
}
