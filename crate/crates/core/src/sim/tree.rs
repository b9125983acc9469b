//! Materialized family trees and counts read off them.

use serde::Serialize;

use super::counts::{first_open_level, sojourn_levels, CountSign};
use super::engine::{self, Lineage, Observer};
use super::winding::alternates;
use crate::error::{Error, Result};
use crate::model::{ModelParams, ParticleType};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParticleRecord {
    pub id: usize,
    pub parent: Option<usize>,
    pub ptype_at_birth: ParticleType,
    pub birth_time: f64,
    /// `None` when alive at the end of the run.
    pub death_time: Option<f64>,
    /// Breakpoints `(time, position, type)`: birth, every flip, and the end.
    pub path: Vec<(f64, f64, ParticleType)>,
    pub lineage_max: f64,
    pub lineage_min: f64,
    /// Mark drawn when a second child is born.
    pub mark: Option<f64>,
}

impl ParticleRecord {
    /// Sojourns `(start, type, duration)` in order.
    pub fn sojourns(&self) -> impl Iterator<Item = (f64, ParticleType, f64)> + '_ {
        self.path
            .windows(2)
            .map(|w| (w[0].1, w[0].2, w[1].0 - w[0].0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeLog {
    pub root: ParticleType,
    pub horizon: f64,
    /// Indexed by id; parents precede children.
    pub records: Vec<ParticleRecord>,
    /// Particle budget was exhausted; lineages cut by it end before the horizon.
    pub budget_hit: bool,
}

impl TreeLog {
    pub fn alive_at_horizon(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.death_time.is_none() && r.path.last().is_some_and(|p| p.0 == self.horizon))
            .count()
    }

    pub fn splits(&self) -> usize {
        self.records.iter().filter(|r| r.death_time.is_some()).count()
    }
}

struct Recorder {
    records: Vec<ParticleRecord>,
}

impl Observer for Recorder {
    fn birth(&mut self, lin: &Lineage) {
        debug_assert_eq!(lin.id, self.records.len());
        self.records.push(ParticleRecord {
            id: lin.id,
            parent: lin.parent,
            ptype_at_birth: lin.ty,
            birth_time: lin.t,
            death_time: None,
            path: vec![(lin.t, lin.pos, lin.ty)],
            lineage_max: lin.max,
            lineage_min: lin.min,
            mark: lin.mark,
        });
    }

    fn sojourn(&mut self, _lin: &mut Lineage, _dur: f64) {}

    fn flip(&mut self, lin: &Lineage) {
        self.records[lin.id].path.push((lin.t, lin.pos, lin.ty));
    }

    fn death(&mut self, lin: &Lineage) {
        let r = &mut self.records[lin.id];
        r.path.push((lin.t, lin.pos, lin.ty));
        r.death_time = Some(lin.t);
    }

    fn unresolved(&mut self, lin: &Lineage) {
        self.records[lin.id].path.push((lin.t, lin.pos, lin.ty));
    }
}

/// Exact simulation of the whole tree up to `horizon` (or the particle budget).
/// Replicate `rep` of `seed` yields the same tree the estimators see.
pub fn simulate_tree(
    params: &ModelParams,
    root_type: ParticleType,
    horizon: f64,
    budget: usize,
    seed: u64,
    rep: u64,
) -> Result<TreeLog> {
    if !(horizon > 0.0) || budget < 1 {
        return Err(Error::Domain(format!(
            "need horizon > 0 and budget >= 1 (got {horizon}, {budget})"
        )));
    }
    let mut rec = Recorder {
        records: Vec::new(),
    };
    let key = engine::replicate_key(seed, rep);
    let info = engine::run(params, root_type, horizon, budget, key, &mut rec);
    Ok(TreeLog {
        root: root_type,
        horizon,
        records: rec.records,
        budget_hit: info.budget_hit,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelCounts {
    pub phis: Vec<f64>,
    pub n_plus: Vec<u64>,
    pub n_minus: Vec<u64>,
    pub censored_plus: Vec<bool>,
    pub censored_minus: Vec<bool>,
    pub horizon_time: f64,
}

/// Replays every particle's path and counts both signs at the sorted `phis`.
pub fn level_counts(tree: &TreeLog, phis: &[f64]) -> Result<LevelCounts> {
    if phis.windows(2).any(|w| w[0] >= w[1]) || phis.iter().any(|p| !(*p >= 0.0)) {
        return Err(Error::Domain("levels must be >= 0 and strictly increasing".to_string()));
    }
    let n = phis.len();
    let mut out = LevelCounts {
        phis: phis.to_vec(),
        n_plus: vec![0; n],
        n_minus: vec![0; n],
        censored_plus: vec![false; n],
        censored_minus: vec![false; n],
        horizon_time: tree.horizon,
    };
    for r in &tree.records {
        let mut lin = replay_start(r);
        for (pos, ty, dur) in r.sojourns() {
            lin.pos = pos;
            lin.ty = ty;
            for k in sojourn_levels(CountSign::Plus, &lin, dur, phis) {
                out.n_plus[k] += 1;
            }
            for k in sojourn_levels(CountSign::Minus, &lin, dur, phis) {
                out.n_minus[k] += 1;
            }
            let end = pos + ty.velocity() * dur;
            lin.max = lin.max.max(end);
            lin.min = lin.min.min(end);
        }
        if r.death_time.is_none() {
            for k in first_open_level(CountSign::Plus, &lin, phis)..n {
                out.censored_plus[k] = true;
            }
            for k in first_open_level(CountSign::Minus, &lin, phis)..n {
                out.censored_minus[k] = true;
            }
        }
    }
    Ok(out)
}

fn replay_start(r: &ParticleRecord) -> Lineage {
    Lineage {
        id: r.id,
        parent: r.parent,
        key: 0,
        t: r.birth_time,
        pos: r.path[0].1,
        ty: r.ptype_at_birth,
        max: r.lineage_max,
        min: r.lineage_min,
        u_max: 0.0,
        mark: r.mark,
        stage: 0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindingCounts {
    /// `W⁺(n)`: particles alive at the `2n`-th sign alternation of their line.
    pub w_plus: Vec<u64>,
    /// `W⁻(n)`: the same at the `(2n+1)`-th alternation.
    pub w_minus: Vec<u64>,
    pub censored: bool,
}

/// Winding counts for generations `0..n_gen`, with `W⁺(0) = 1` for the root.
pub fn winding_counts(tree: &TreeLog, n_gen: usize) -> Result<WindingCounts> {
    if tree.root != ParticleType::Plus {
        return Err(Error::Domain("winding counts are defined under a Plus root".to_string()));
    }
    let max_stage = 2 * n_gen as u32;
    let mut w = vec![0u64; 2 * n_gen + 1];
    w[0] = 1;
    let mut stage_at_end = vec![0u32; tree.records.len()];
    let mut censored = false;
    for r in &tree.records {
        let mut stage = r.parent.map_or(0, |p| stage_at_end[p]);
        for (pos, ty, dur) in r.sojourns() {
            if alternates(stage, ty, pos, dur) {
                stage += 1;
                if (stage as usize) < w.len() {
                    w[stage as usize] += 1;
                }
            }
        }
        stage_at_end[r.id] = stage;
        if r.death_time.is_none() && stage < max_stage {
            censored = true;
        }
    }
    w.truncate(2 * n_gen);
    Ok(WindingCounts {
        w_plus: w.iter().step_by(2).copied().collect(),
        w_minus: w.iter().skip(1).step_by(2).copied().collect(),
        censored,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::counts::{count_replicate, SimConfig};

    fn crit() -> ModelParams {
        ModelParams::new(1.0, 4.0, 0.5).unwrap()
    }

    #[test]
    fn seed_determinism() {
        let a = simulate_tree(&crit(), ParticleType::Plus, 5.0, 10_000, 11, 4).unwrap();
        let b = simulate_tree(&crit(), ParticleType::Plus, 5.0, 10_000, 11, 4).unwrap();
        assert_eq!(a, b);
        let c = simulate_tree(&crit(), ParticleType::Plus, 5.0, 10_000, 11, 5).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn paths_are_continuous_with_unit_slopes() {
        let t = simulate_tree(&crit(), ParticleType::Minus, 6.0, 10_000, 2, 0).unwrap();
        for r in &t.records {
            if let Some(p) = r.parent {
                let end = *t.records[p].path.last().unwrap();
                assert_eq!((end.0, end.1), (r.path[0].0, r.path[0].1));
                assert_eq!(end.2, r.ptype_at_birth);
                assert!(r.lineage_max >= t.records[p].lineage_max);
                assert!(r.lineage_min <= t.records[p].lineage_min);
            }
            for w in r.path.windows(2) {
                let slope = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
                assert!((slope - w[0].2.velocity()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn streaming_counts_match_replay() {
        let cfg = SimConfig {
            horizon: 6.0,
            release_eps: 0.0,
            release_cap: f64::INFINITY,
            ..SimConfig::default()
        };
        let phis = [0.0, 0.25, 1.0];
        for rep in 0..100 {
            for root in [ParticleType::Plus, ParticleType::Minus] {
                let tree = simulate_tree(&crit(), root, cfg.horizon, cfg.budget, 9, rep).unwrap();
                let lc = level_counts(&tree, &phis).unwrap();
                let plus = count_replicate(&crit(), root, CountSign::Plus, &phis, &cfg, 9, rep).unwrap();
                let minus = count_replicate(&crit(), root, CountSign::Minus, &phis, &cfg, 9, rep).unwrap();
                assert_eq!(lc.n_plus, plus.obs);
                assert_eq!(lc.n_minus, minus.obs);
                assert_eq!(lc.censored_plus, plus.censored);
                assert_eq!(lc.censored_minus, minus.censored);
            }
        }
    }

    #[test]
    fn root_plus_has_one_plus_count_at_zero() {
        for rep in 0..50 {
            let t = simulate_tree(&crit(), ParticleType::Plus, 5.0, 10_000, 1, rep).unwrap();
            assert_eq!(level_counts(&t, &[0.0]).unwrap().n_plus[0], 1);
            assert_eq!(winding_counts(&t, 2).unwrap().w_plus[0], 1);
        }
    }

    #[test]
    fn first_winding_is_minus_count_at_zero() {
        for rep in 0..50 {
            let t = simulate_tree(&crit(), ParticleType::Plus, 5.0, 10_000, 8, rep).unwrap();
            let w = winding_counts(&t, 1).unwrap();
            assert_eq!(w.w_minus[0], level_counts(&t, &[0.0]).unwrap().n_minus[0]);
        }
    }
}
