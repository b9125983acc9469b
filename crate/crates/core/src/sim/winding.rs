//! Winding counts: generations of sign alternations of ancestral paths about 0.
//!
//! Stage `s` of a lineage is the number of alternations so far; an even stage
//! waits for the path to go below 0, an odd one for it to come back above.
//! `W⁺(n)` counts arrivals at stage `2n` and `W⁻(n)` at stage `2n+1`.

use serde::Serialize;

use super::counts::{reachable, CountSign, MeanBounds, SimConfig};
use super::engine::{self, Fate, Lineage, Observer};
use super::estimate::{par_reps, McEstimate, RepValue};
use crate::error::Result;
use crate::model::{ModelParams, ParticleType};

/// Whether a sojourn completes the alternation the lineage at `stage` waits for.
pub(crate) fn alternates(stage: u32, ty: ParticleType, pos: f64, dur: f64) -> bool {
    match (stage % 2, ty) {
        (0, ParticleType::Minus) => pos - dur < 0.0,
        (1, ParticleType::Plus) => pos + dur > 0.0,
        _ => false,
    }
}

/// Critical-mean bound on the expected number of arrivals at `target` from a
/// lineage at `stage < target`: the first alternation from `pos`, then a factor
/// `m` per odd stage crossed upward and `1/m` per even stage crossed downward.
fn stage_bound(b: &MeanBounds, m: f64, lin: &Lineage, target: u32) -> f64 {
    let first = if lin.stage.is_multiple_of(2) {
        b.minus(lin.ty, lin.pos, 0.0)
    } else {
        b.plus(lin.ty, lin.pos, 0.0)
    };
    (lin.stage + 1..target).fold(first, |acc, j| if j % 2 == 1 { acc * m } else { acc / m })
}

struct WindingObserver {
    max_stage: u32,
    bounds: MeanBounds,
    m: f64,
    release_eps: f64,
    release_cap: f64,
    horizon: f64,
    w: Vec<u64>,
    residual: Vec<f64>,
    censored: bool,
}

impl WindingObserver {
    fn open_bounds(&self, lin: &Lineage) -> impl Iterator<Item = (usize, f64)> + '_ {
        let lin = *lin;
        (lin.stage + 1..=self.max_stage).map(move |s| (s as usize, stage_bound(&self.bounds, self.m, &lin, s)))
    }
}

impl Observer for WindingObserver {
    fn enter(&mut self, lin: &Lineage) -> Fate {
        if lin.stage >= self.max_stage {
            return Fate::Drop;
        }
        if self.bounds.is_finite() {
            let total: f64 = self.open_bounds(lin).map(|(_, b)| b).sum();
            if total < self.release_eps || total > self.release_cap {
                let add: Vec<_> = self.open_bounds(lin).collect();
                for (s, b) in add {
                    self.residual[s] += b;
                }
                return Fate::Drop;
            }
        }
        let toward = if lin.stage.is_multiple_of(2) { CountSign::Minus } else { CountSign::Plus };
        if !reachable(toward, lin, self.horizon, 0.0) {
            self.unresolved(lin);
            return Fate::Drop;
        }
        Fate::Follow
    }

    fn sojourn(&mut self, lin: &mut Lineage, dur: f64) {
        if alternates(lin.stage, lin.ty, lin.pos, dur) {
            lin.stage += 1;
            self.w[lin.stage as usize] += 1;
        }
    }

    fn unresolved(&mut self, lin: &Lineage) {
        if lin.stage < self.max_stage {
            self.censored = true;
            let add: Vec<_> = self.open_bounds(lin).collect();
            for (s, b) in add {
                self.residual[s] += b;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindingEstimates {
    pub w_plus: Vec<McEstimate>,
    pub w_minus: Vec<McEstimate>,
}

/// Means of `W⁺(n)` and `W⁻(n)` for `n < n_gen` under a Plus root.
pub fn estimate_windings(
    params: &ModelParams,
    n_gen: usize,
    reps: usize,
    seed: u64,
    cfg: &SimConfig,
) -> Result<WindingEstimates> {
    cfg.validate()?;
    let max_stage = (2 * n_gen).saturating_sub(1) as u32;
    let outs = par_reps(reps, |rep| {
        let mut o = WindingObserver {
            max_stage,
            bounds: MeanBounds::new(params),
            m: params.m(),
            release_eps: cfg.release_eps,
            release_cap: cfg.release_cap,
            horizon: cfg.horizon,
            w: vec![0; max_stage as usize + 1],
            residual: vec![0.0; max_stage as usize + 1],
            censored: false,
        };
        o.w[0] = 1;
        let key = engine::replicate_key(seed, rep);
        engine::run(params, ParticleType::Plus, cfg.horizon, cfg.budget, key, &mut o);
        (o.w, o.residual, o.censored)
    });
    let est = |s: usize| {
        McEstimate::from_reps(outs.iter().map(|(w, r, c)| {
            let v = w[s] as f64;
            RepValue {
                value: v,
                low: v,
                high: v + r[s],
                censored: *c && r[s] > 0.0,
            }
        }))
    };
    Ok(WindingEstimates {
        w_plus: (0..n_gen).map(|n| est(2 * n)).collect(),
        w_minus: (0..n_gen).map(|n| est(2 * n + 1)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::tree::{simulate_tree, winding_counts};

    #[test]
    fn alternation_rules() {
        assert!(alternates(0, ParticleType::Minus, 0.5, 0.6));
        assert!(!alternates(0, ParticleType::Minus, 0.5, 0.4));
        assert!(!alternates(0, ParticleType::Plus, -0.5, 1.0));
        assert!(alternates(1, ParticleType::Plus, -0.5, 0.6));
        assert!(!alternates(1, ParticleType::Minus, -0.5, 0.6));
    }

    #[test]
    fn stage_bound_products() {
        let p = ModelParams::new(1.0, 4.0, 0.5).unwrap();
        let b = MeanBounds::new(&p);
        let lin = Lineage {
            id: 0,
            parent: None,
            key: 0,
            t: 0.0,
            pos: 0.0,
            ty: ParticleType::Plus,
            max: 0.0,
            min: 0.0,
            u_max: 0.0,
            mark: None,
            stage: 0,
        };
        assert!((stage_bound(&b, 2.0, &lin, 1) - 0.5).abs() < 1e-15);
        assert!((stage_bound(&b, 2.0, &lin, 2) - 1.0).abs() < 1e-15);
        assert!((stage_bound(&b, 2.0, &lin, 3) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn streaming_matches_tree_without_release() {
        let p = ModelParams::new(1.0, 4.0, 0.5).unwrap();
        let cfg = SimConfig {
            horizon: 6.0,
            release_eps: 0.0,
            release_cap: f64::INFINITY,
            ..SimConfig::default()
        };
        let est = estimate_windings(&p, 2, 60, 13, &cfg).unwrap();
        let mut sums = [0u64; 4];
        for rep in 0..60 {
            let t = simulate_tree(&p, ParticleType::Plus, 6.0, cfg.budget, 13, rep).unwrap();
            let w = winding_counts(&t, 2).unwrap();
            sums[0] += w.w_plus[0];
            sums[1] += w.w_minus[0];
            sums[2] += w.w_plus[1];
            sums[3] += w.w_minus[1];
        }
        assert_eq!(est.w_plus[0].mean, 1.0);
        assert_eq!(est.w_minus[0].mean * 60.0, sums[1] as f64);
        assert_eq!(est.w_plus[1].mean * 60.0, sums[2] as f64);
        assert_eq!(est.w_minus[1].mean * 60.0, sums[3] as f64);
    }
}
