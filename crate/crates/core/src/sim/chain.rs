//! Functionals of a single non-branching chain `X` started in state Plus,
//! with `Φ_X(t) = ∫₀ᵗ V(X_s) ds` and `V(±) = ±1`.

use rand::Rng;
use rand_distr::Exp1;
use serde::Serialize;

use super::engine;
use super::estimate::{par_moments, McEstimate, RepValue};
use crate::error::{Error, Result};
use crate::model::{self, ModelParams, ParticleType};
use crate::series;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ChainMode {
    /// `E⁺ e^{−βτ}` with `τ` the first time `Φ_X < 0`; paths are cut at `horizon`.
    FirstPassageLaplace { horizon: f64 },
    /// `e^{βt} P⁺[Φ_X(t) ≤ εt]` for each `t` of an increasing grid.
    LargeDeviationFreq { eps: f64, times: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainEstimate {
    /// The time argument for large-deviation estimates.
    pub t: Option<f64>,
    pub estimate: McEstimate,
    /// Analytic comparison value: `a₁` for the Laplace transform, the
    /// Chernoff bound at `μ = ½(q₋−q₊)` for the frequencies.
    pub analytic: f64,
}

fn sojourn<R: Rng>(rng: &mut R, params: &ModelParams, ty: ParticleType) -> f64 {
    rng.sample::<f64, _>(Exp1) / params.flip_rate(ty)
}

/// First passage of `Φ_X` below 0 before `horizon`.
fn first_passage<R: Rng>(rng: &mut R, params: &ModelParams, horizon: f64) -> Option<f64> {
    let (mut t, mut pos, mut ty) = (0.0, 0.0, ParticleType::Plus);
    loop {
        let d = sojourn(rng, params, ty);
        if ty == ParticleType::Minus && pos - d < 0.0 {
            let tau = t + pos;
            return (tau < horizon).then_some(tau);
        }
        t += d;
        if t >= horizon {
            return None;
        }
        pos += ty.velocity() * d;
        ty = ty.flipped();
    }
}

/// `Φ_X` at each time of the increasing grid.
fn positions_at<R: Rng>(rng: &mut R, params: &ModelParams, times: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(times.len());
    let (mut t, mut pos, mut ty) = (0.0, 0.0, ParticleType::Plus);
    let mut k = 0;
    while k < times.len() {
        let d = sojourn(rng, params, ty);
        while k < times.len() && times[k] <= t + d {
            out.push(pos + ty.velocity() * (times[k] - t));
            k += 1;
        }
        t += d;
        pos += ty.velocity() * d;
        ty = ty.flipped();
    }
    out
}

pub fn chain_functionals(
    params: &ModelParams,
    mode: &ChainMode,
    reps: usize,
    seed: u64,
) -> Result<Vec<ChainEstimate>> {
    let beta = params.beta();
    match mode {
        ChainMode::FirstPassageLaplace { horizon } => {
            if !(*horizon > 0.0) {
                return Err(Error::Domain(format!("horizon must be > 0 (got {horizon})")));
            }
            let tail = (-beta * horizon).exp();
            let m = par_moments(reps, 1, |rep, m| {
                let mut rng = engine::rng_for(engine::replicate_key(seed, rep));
                m[0].push(match first_passage(&mut rng, params, *horizon) {
                    Some(tau) => RepValue::exact((-beta * tau).exp()),
                    None => RepValue {
                        value: 0.0,
                        low: 0.0,
                        high: tail,
                        censored: true,
                    },
                });
            });
            Ok(vec![ChainEstimate {
                t: None,
                estimate: m[0].estimate(),
                analytic: series::a1_closed_form(params),
            }])
        }
        ChainMode::LargeDeviationFreq { eps, times } => {
            if times.is_empty()
                || times[0] <= 0.0
                || times.windows(2).any(|w| w[0] >= w[1])
                || !eps.is_finite()
            {
                return Err(Error::Domain(
                    "times must be positive and strictly increasing, eps finite".to_string(),
                ));
            }
            let moments = par_moments(reps, times.len(), |rep, m| {
                let mut rng = engine::rng_for(engine::replicate_key(seed, rep));
                let path = positions_at(&mut rng, params, times);
                for (k, &t) in times.iter().enumerate() {
                    let hit = path[k] <= eps * t;
                    m[k].push(RepValue::exact(if hit { (beta * t).exp() } else { 0.0 }));
                }
            });
            let mu = params.half_drift_gap();
            times
                .iter()
                .zip(&moments)
                .map(|(&t, m)| {
                    Ok(ChainEstimate {
                        t: Some(t),
                        estimate: m.estimate(),
                        analytic: model::chernoff_bound(params, ParticleType::Plus, mu, *eps, t)?,
                    })
                })
                .collect()
        }
    }
}
