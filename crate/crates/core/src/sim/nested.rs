//! Nested models: one tree at `β₀` carries every `M_β`, `β ≤ β₀`.
//!
//! Each split draws a mark `U`; `M_β` erases the second child and its family
//! whenever `U > β/β₀`. A particle belongs to `M_β` iff the largest mark on
//! the second-child edges of its ancestry is at most `β/β₀`.

use serde::Serialize;

use super::counts::{first_open_level, reachable, sojourn_levels, CountSign, MeanBounds, SimConfig};
use super::engine::{self, Fate, Lineage, Observer};
use super::estimate::{par_reps, McEstimate, RepValue};
use crate::error::{Error, Result};
use crate::model::{ModelParams, ParticleType};

const LEVEL: [f64; 1] = [0.0];

struct NestedObserver {
    /// `β/β₀`, descending.
    ratios: Vec<f64>,
    /// Bound per β (infinite above criticality).
    bounds: Vec<MeanBounds>,
    release: Option<(MeanBounds, f64)>,
    horizon: f64,
    counts: Vec<u64>,
    residual: Vec<f64>,
    censored: Vec<bool>,
}

impl NestedObserver {
    /// Number of leading ratios whose sub-model contains the lineage.
    fn members(&self, lin: &Lineage) -> usize {
        self.ratios.partition_point(|&r| lin.u_max <= r)
    }
}

impl Observer for NestedObserver {
    fn enter(&mut self, lin: &Lineage) -> Fate {
        let members = self.members(lin);
        if members == 0 || first_open_level(CountSign::Minus, lin, &LEVEL) == 1 {
            return Fate::Drop;
        }
        if let Some((b, eps)) = self.release {
            let bound = b.minus(lin.ty, lin.pos, 0.0);
            if bound < eps {
                for k in 0..members {
                    self.residual[k] += bound;
                }
                return Fate::Drop;
            }
        }
        if !reachable(CountSign::Minus, lin, self.horizon, 0.0) {
            self.unresolved(lin);
            return Fate::Drop;
        }
        Fate::Follow
    }

    fn sojourn(&mut self, lin: &mut Lineage, dur: f64) {
        if !sojourn_levels(CountSign::Minus, lin, dur, &LEVEL).is_empty() {
            for k in 0..self.members(lin) {
                self.counts[k] += 1;
            }
        }
    }

    fn unresolved(&mut self, lin: &Lineage) {
        if first_open_level(CountSign::Minus, lin, &LEVEL) == 0 {
            for k in 0..self.members(lin) {
                self.censored[k] = true;
                self.residual[k] += self.bounds[k].minus(lin.ty, lin.pos, 0.0);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub betas: Vec<f64>,
    /// `E⁺N⁻(0,β)` per β.
    pub estimates: Vec<McEstimate>,
    /// Fraction of replicates whose counts are nonincreasing along the descending grid.
    pub pathwise_monotone_fraction: f64,
}

impl SweepResult {
    /// Means nondecreasing in β (the grid is descending).
    pub fn means_monotone(&self) -> bool {
        self.estimates.windows(2).all(|w| w[0].mean >= w[1].mean)
    }
}

/// `N⁻(0,β)` under a Plus root for every β of the descending grid `betas`,
/// all read off one tree per replicate simulated at `params.beta()`.
pub fn nested_sweep(
    params: &ModelParams,
    betas: &[f64],
    reps: usize,
    seed: u64,
    cfg: &SimConfig,
) -> Result<SweepResult> {
    cfg.validate()?;
    let beta0 = params.beta();
    if betas.is_empty()
        || betas.windows(2).any(|w| w[0] <= w[1])
        || betas.iter().any(|b| !(*b > 0.0 && *b <= beta0))
    {
        return Err(Error::Domain(format!(
            "betas must be strictly descending within (0, {beta0}]"
        )));
    }
    let sub: Vec<ModelParams> = betas
        .iter()
        .map(|&b| params.with_beta(b))
        .collect::<Result<_>>()?;
    let bounds: Vec<MeanBounds> = sub.iter().map(MeanBounds::new).collect();
    // releasing is only sound when every sub-model has a finite bound
    let release = (cfg.release_eps > 0.0 && bounds.iter().all(MeanBounds::is_finite))
        .then(|| (bounds[0], cfg.release_eps));
    let ratios: Vec<f64> = betas.iter().map(|b| b / beta0).collect();

    let outs = par_reps(reps, |rep| {
        let n = betas.len();
        let mut o = NestedObserver {
            ratios: ratios.clone(),
            bounds: bounds.clone(),
            release,
            horizon: cfg.horizon,
            counts: vec![0; n],
            residual: vec![0.0; n],
            censored: vec![false; n],
        };
        let key = engine::replicate_key(seed, rep);
        engine::run(params, ParticleType::Plus, cfg.horizon, cfg.budget, key, &mut o);
        (o.counts, o.residual, o.censored)
    });

    let monotone = outs
        .iter()
        .filter(|(c, _, _)| c.windows(2).all(|w| w[0] >= w[1]))
        .count();
    let estimates = (0..betas.len())
        .map(|k| {
            McEstimate::from_reps(outs.iter().map(|(c, r, cen)| {
                let v = c[k] as f64;
                RepValue {
                    value: v,
                    low: v,
                    high: v + r[k],
                    censored: cen[k],
                }
            }))
        })
        .collect();
    Ok(SweepResult {
        betas: betas.to_vec(),
        estimates,
        pathwise_monotone_fraction: monotone as f64 / reps.max(1) as f64,
    })
}
