//! Streaming level-crossing counts `N±(φ)` with censoring brackets.
//!
//! A Plus sojourn from `p` of length `Δ` under running max `M` puts its
//! particle in `S⁺(φ)` for every level `φ ∈ [M, p+Δ)`; the right end belongs
//! to whoever moves on from there. Minus sojourns mirror this with the
//! running min.
//!
//! At and below criticality the expected future counts of a lineage are
//! bounded by the critical means, `(1, m)·e^{λ(φ−p)}` for `N⁺(φ)` and
//! `(1/m, 1)·e^{−λ(p+φ)}` for `N⁻(φ)` with `λ = ½(q₋−q₊)`, exactly at `β_c`.
//! A lineage whose bound is tiny (far past the levels) or large (deep on the
//! wrong side of them) is released: its bound is charged to the residual and
//! it is not followed further. At `β_c` the charge is the exact conditional
//! mean, so observed-plus-residual stays unbiased while deep excursions no
//! longer make the count heavy-tailed.

use serde::{Deserialize, Serialize};

use super::engine::{self, Fate, Lineage, Observer, RunInfo};
use super::estimate::{par_reps, McEstimate, RepValue};
use crate::error::{Error, Result};
use crate::model::{ModelParams, ParticleType};

/// Which count: `N⁺` (new maxima, moving right) or `N⁻` (new minima, moving left).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountSign {
    Plus,
    Minus,
}

/// Truncation settings shared by the tree-based estimators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub horizon: f64,
    pub budget: usize,
    /// Release a lineage once its bound on further contributions drops below
    /// this; `0` follows every lineage to the horizon.
    pub release_eps: f64,
    /// Release a lineage once that bound exceeds this (deep excursions away
    /// from the counted levels); `f64::INFINITY` follows them.
    pub release_cap: f64,
    /// A pgf replicate stops once `θ^count` falls below this and reports the
    /// bracket `[0, θ^count]`.
    pub pgf_floor: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            horizon: 20.0,
            budget: 1_000_000,
            release_eps: 1e-3,
            release_cap: 30.0,
            pgf_floor: 1e-15,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.horizon > 0.0)
            || self.budget < 1
            || !(self.release_eps >= 0.0)
            || !(self.release_cap > self.release_eps)
            || !(self.pgf_floor > 0.0 && self.pgf_floor < 1.0)
        {
            return Err(Error::Domain(format!(
                "need horizon > 0, budget >= 1, 0 <= release_eps < release_cap, 0 < pgf_floor < 1 (got {self:?})"
            )));
        }
        Ok(())
    }
}

/// Critical-mean bounds on future counts; infinite above criticality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanBounds {
    lambda: f64,
    m: f64,
    valid: bool,
}

impl MeanBounds {
    pub fn new(params: &ModelParams) -> Self {
        MeanBounds {
            lambda: params.half_drift_gap(),
            m: params.m(),
            valid: params.regime().is_at_most_critical(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.valid
    }

    /// Bound on `E^τ N⁺(φ − p)`.
    pub fn plus(&self, ty: ParticleType, pos: f64, phi: f64) -> f64 {
        if !self.valid {
            return f64::INFINITY;
        }
        let c = match ty {
            ParticleType::Plus => 1.0,
            ParticleType::Minus => self.m,
        };
        c * (self.lambda * (phi - pos)).exp()
    }

    /// Bound on `E^τ N⁻(p + φ)`.
    pub fn minus(&self, ty: ParticleType, pos: f64, phi: f64) -> f64 {
        if !self.valid {
            return f64::INFINITY;
        }
        let c = match ty {
            ParticleType::Plus => 1.0 / self.m,
            ParticleType::Minus => 1.0,
        };
        c * (-self.lambda * (pos + phi)).exp()
    }

    /// Bound for either sign.
    pub fn for_sign(&self, sign: CountSign, ty: ParticleType, pos: f64, phi: f64) -> f64 {
        match sign {
            CountSign::Plus => self.plus(ty, pos, phi),
            CountSign::Minus => self.minus(ty, pos, phi),
        }
    }
}

/// Levels counted during one sojourn, as a range of indices into sorted `phis`.
pub(crate) fn sojourn_levels(
    sign: CountSign,
    lin: &Lineage,
    dur: f64,
    phis: &[f64],
) -> std::ops::Range<usize> {
    let (from, to) = match (sign, lin.ty) {
        (CountSign::Plus, ParticleType::Plus) => (lin.max, lin.pos + dur),
        (CountSign::Minus, ParticleType::Minus) => (-lin.min, dur - lin.pos),
        _ => return 0..0,
    };
    let a = phis.partition_point(|&phi| phi < from);
    let b = phis.partition_point(|&phi| phi < to);
    a..b.max(a)
}

/// First index of the levels a lineage can still be counted at.
pub(crate) fn first_open_level(sign: CountSign, lin: &Lineage, phis: &[f64]) -> usize {
    let reached = match sign {
        CountSign::Plus => lin.max,
        CountSign::Minus => -lin.min,
    };
    phis.partition_point(|&phi| phi < reached)
}

/// Whether a lineage moving at unit speed can still reach level `phi`
/// (`−phi` for minus counts) before `horizon`. A lineage that cannot is
/// unresolved at the horizon whatever it does, so it need not be followed.
pub(crate) fn reachable(sign: CountSign, lin: &Lineage, horizon: f64, phi: f64) -> bool {
    let reach = horizon - lin.t;
    match sign {
        CountSign::Plus => lin.pos + reach >= phi,
        CountSign::Minus => lin.pos - reach <= -phi,
    }
}

/// Result of one replicate.
#[derive(Debug, Clone, PartialEq)]
pub struct CountOutcome {
    pub obs: Vec<u64>,
    /// Bound on expected further counts from released or unresolved lineages.
    pub residual: Vec<f64>,
    /// Per level: some unresolved lineage could still have been counted.
    pub censored: Vec<bool>,
    pub run: RunInfo,
    /// The run stopped early on `stop_at`.
    pub stopped: bool,
}

struct CountObserver<'a> {
    sign: CountSign,
    phis: &'a [f64],
    bounds: MeanBounds,
    release_eps: f64,
    release_cap: f64,
    horizon: f64,
    stop_at: Option<u64>,
    obs: Vec<u64>,
    residual: Vec<f64>,
    censored: Vec<bool>,
}

impl Observer for CountObserver<'_> {
    fn enter(&mut self, lin: &Lineage) -> Fate {
        let k0 = first_open_level(self.sign, lin, self.phis);
        if k0 == self.phis.len() {
            return Fate::Drop;
        }
        if self.bounds.is_finite() && (self.release_eps > 0.0 || self.release_cap.is_finite()) {
            let open = &self.phis[k0..];
            let bound = |phi: f64| self.bounds.for_sign(self.sign, lin.ty, lin.pos, phi);
            let total: f64 = open.iter().map(|&phi| bound(phi)).sum();
            if total < self.release_eps || total > self.release_cap {
                for (k, &phi) in open.iter().enumerate() {
                    self.residual[k0 + k] += bound(phi);
                }
                return Fate::Drop;
            }
        }
        if !reachable(self.sign, lin, self.horizon, self.phis[k0]) {
            self.unresolved(lin);
            return Fate::Drop;
        }
        Fate::Follow
    }

    fn sojourn(&mut self, lin: &mut Lineage, dur: f64) {
        for k in sojourn_levels(self.sign, lin, dur, self.phis) {
            self.obs[k] += 1;
        }
    }

    fn unresolved(&mut self, lin: &Lineage) {
        let k0 = first_open_level(self.sign, lin, self.phis);
        for k in k0..self.phis.len() {
            self.censored[k] = true;
            self.residual[k] += self.bounds.for_sign(self.sign, lin.ty, lin.pos, self.phis[k]);
        }
    }

    fn finished(&self) -> bool {
        self.stop_at.is_some_and(|s| self.obs[0] >= s)
    }
}

fn check_levels(phis: &[f64]) -> Result<()> {
    if phis.is_empty()
        || phis.iter().any(|p| !(*p >= 0.0) || !p.is_finite())
        || phis.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(Error::Domain(
            "levels must be finite, >= 0 and strictly increasing".to_string(),
        ));
    }
    Ok(())
}

/// Counts for replicate `rep` at the sorted levels `phis`.
pub fn count_replicate(
    params: &ModelParams,
    root: ParticleType,
    sign: CountSign,
    phis: &[f64],
    cfg: &SimConfig,
    seed: u64,
    rep: u64,
) -> Result<CountOutcome> {
    check_levels(phis)?;
    cfg.validate()?;
    Ok(count_replicate_inner(params, root, sign, phis, cfg, None, seed, rep))
}

#[allow(clippy::too_many_arguments)]
fn count_replicate_inner(
    params: &ModelParams,
    root: ParticleType,
    sign: CountSign,
    phis: &[f64],
    cfg: &SimConfig,
    stop_at: Option<u64>,
    seed: u64,
    rep: u64,
) -> CountOutcome {
    let n = phis.len();
    let mut o = CountObserver {
        sign,
        phis,
        bounds: MeanBounds::new(params),
        release_eps: cfg.release_eps,
        release_cap: cfg.release_cap,
        horizon: cfg.horizon,
        stop_at,
        obs: vec![0; n],
        residual: vec![0.0; n],
        censored: vec![false; n],
    };
    let key = engine::replicate_key(seed, rep);
    // Depth-first order reaches early events late, so a run that may stop
    // early is retried on doubling horizons; trees agree on common times.
    let mut horizon = cfg.horizon;
    if stop_at.is_some() {
        while horizon > 0.5 {
            horizon *= 0.5;
        }
    }
    let run = loop {
        o.obs.fill(0);
        o.residual.fill(0.0);
        o.censored.fill(false);
        o.horizon = horizon;
        let run = engine::run(params, root, horizon, cfg.budget, key, &mut o);
        if o.finished() || horizon >= cfg.horizon {
            break run;
        }
        horizon = (2.0 * horizon).min(cfg.horizon);
    };
    let stopped = o.finished();
    CountOutcome {
        obs: o.obs,
        residual: o.residual,
        censored: o.censored,
        run,
        stopped,
    }
}

/// `E N±(φ)` at each level: mean of observed counts, bracket up to observed
/// plus the residual bound (infinite when the bound is unavailable).
pub fn estimate_count_means(
    params: &ModelParams,
    root: ParticleType,
    sign: CountSign,
    phis: &[f64],
    reps: usize,
    seed: u64,
    cfg: &SimConfig,
) -> Result<Vec<McEstimate>> {
    check_levels(phis)?;
    cfg.validate()?;
    let outcomes = par_reps(reps, |rep| {
        count_replicate_inner(params, root, sign, phis, cfg, None, seed, rep)
    });
    Ok((0..phis.len())
        .map(|k| {
            McEstimate::from_reps(outcomes.iter().map(|o| {
                let v = o.obs[k] as f64;
                RepValue {
                    value: v,
                    low: v,
                    high: v + o.residual[k],
                    censored: o.censored[k],
                }
            }))
        })
        .collect())
}

/// `E θ^{N⁺(φ)}`, the quantity whose graph the pgf dynamical system tracks.
pub fn estimate_pgf(
    params: &ModelParams,
    root: ParticleType,
    phi: f64,
    theta: f64,
    reps: usize,
    seed: u64,
) -> Result<McEstimate> {
    estimate_pgf_with(
        params,
        root,
        CountSign::Plus,
        phi,
        theta,
        reps,
        seed,
        &SimConfig::default(),
    )
}

/// `E θ^{N±(φ)}` with `θ ∈ [0,1)`. Per replicate the bracket is
/// `[θ^n·(1 − R)⁺, θ^n]` where `R` bounds the expected further count, since
/// `P[further ≥ 1] ≤ R`; without a finite bound the low end is 0.
#[allow(clippy::too_many_arguments)]
pub fn estimate_pgf_with(
    params: &ModelParams,
    root: ParticleType,
    sign: CountSign,
    phi: f64,
    theta: f64,
    reps: usize,
    seed: u64,
    cfg: &SimConfig,
) -> Result<McEstimate> {
    if !(0.0..1.0).contains(&theta) {
        return Err(Error::Domain(format!("theta must lie in [0,1) (got {theta})")));
    }
    let phis = [phi];
    check_levels(&phis)?;
    cfg.validate()?;
    let stop_at = if theta == 0.0 {
        1
    } else {
        (cfg.pgf_floor.ln() / theta.ln()).ceil().max(1.0) as u64
    };
    let reps_out = par_reps(reps, |rep| {
        let o = count_replicate_inner(params, root, sign, &phis, cfg, Some(stop_at), seed, rep);
        let v = theta.powi(o.obs[0].min(i32::MAX as u64) as i32);
        let low = if o.stopped {
            0.0
        } else {
            v * (1.0 - o.residual[0]).max(0.0)
        };
        RepValue {
            value: v,
            low,
            high: v,
            censored: o.censored[0] && !o.stopped,
        }
    });
    Ok(McEstimate::from_reps(reps_out))
}

/// Fraction of replicates (root Plus) in which some particle goes left of 0
/// by the horizon, i.e. `P⁺[N⁻(0) ≥ 1]` observed within the truncation.
pub fn left_excursion_fraction(
    params: &ModelParams,
    reps: usize,
    seed: u64,
    cfg: &SimConfig,
) -> Result<McEstimate> {
    let none = estimate_pgf_with(
        params,
        ParticleType::Plus,
        CountSign::Minus,
        0.0,
        0.0,
        reps,
        seed,
        cfg,
    )?;
    Ok(McEstimate {
        mean: 1.0 - none.mean,
        bracket: (1.0 - none.bracket.1, 1.0 - none.bracket.0),
        bracket_std_error: (none.bracket_std_error.1, none.bracket_std_error.0),
        ..none
    })
}
