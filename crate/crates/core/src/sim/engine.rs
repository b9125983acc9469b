//! Depth-first event-driven simulation of one family tree.
//!
//! Every particle owns an RNG stream keyed by its position in the genealogy,
//! so a subtree looks the same whether or not its siblings were followed.
//! That lets observers prune freely without perturbing what they do see.

use rand::{Rng, SeedableRng};
use rand_distr::Exp1;
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::model::{ModelParams, ParticleType};

/// SplitMix64 finalizer.
pub(crate) fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub(crate) fn replicate_key(seed: u64, rep: u64) -> u64 {
    mix(mix(seed) ^ mix(rep.wrapping_add(0x5851_F42D_4C95_7F2D)))
}

fn child_key(key: u64, which: u64) -> u64 {
    mix(key ^ mix(which))
}

pub(crate) fn rng_for(key: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(key)
}

/// State of the particle currently being followed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lineage {
    pub id: usize,
    pub parent: Option<usize>,
    pub key: u64,
    pub t: f64,
    pub pos: f64,
    pub ty: ParticleType,
    /// Running extrema of the ancestral path up to `t`.
    pub max: f64,
    pub min: f64,
    /// Largest mark over the second-child edges of the ancestry (0 at the root).
    pub u_max: f64,
    /// Mark drawn at the birth of a second child.
    pub mark: Option<f64>,
    /// Number of sign alternations of the ancestral path so far.
    pub stage: u32,
}

impl Lineage {
    fn advance(&mut self, dur: f64) {
        self.pos += self.ty.velocity() * dur;
        self.max = self.max.max(self.pos);
        self.min = self.min.min(self.pos);
        self.t += dur;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fate {
    Follow,
    Drop,
}

pub trait Observer {
    fn birth(&mut self, _lin: &Lineage) {}

    /// Called before every sojourn; `Drop` abandons the lineage and its future subtree.
    fn enter(&mut self, _lin: &Lineage) -> Fate {
        Fate::Follow
    }

    /// A sojourn of length `dur` in state `lin.ty` from `lin.pos`; the running
    /// extrema still hold their values from before the sojourn.
    fn sojourn(&mut self, lin: &mut Lineage, dur: f64);

    fn flip(&mut self, _lin: &Lineage) {}

    fn death(&mut self, _lin: &Lineage) {}

    /// The lineage is alive at the horizon or was cut by the particle budget.
    fn unresolved(&mut self, lin: &Lineage);

    fn finished(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunInfo {
    pub particles: usize,
    pub budget_hit: bool,
}

pub fn run<O: Observer>(
    params: &ModelParams,
    root: ParticleType,
    horizon: f64,
    budget: usize,
    key: u64,
    obs: &mut O,
) -> RunInfo {
    let beta = params.beta();
    let root = Lineage {
        id: 0,
        parent: None,
        key,
        t: 0.0,
        pos: 0.0,
        ty: root,
        max: 0.0,
        min: 0.0,
        u_max: 0.0,
        mark: None,
        stage: 0,
    };
    obs.birth(&root);
    let mut stack = vec![root];
    let mut particles = 1;
    let mut budget_hit = false;

    while let Some(mut lin) = stack.pop() {
        if obs.finished() {
            break;
        }
        let mut rng = rng_for(lin.key);
        loop {
            if obs.enter(&lin) == Fate::Drop {
                break;
            }
            let q = params.flip_rate(lin.ty);
            let rate = q + beta;
            let dt: f64 = rng.sample::<f64, _>(Exp1) / rate;
            if lin.t + dt >= horizon {
                let dur = horizon - lin.t;
                obs.sojourn(&mut lin, dur);
                lin.advance(dur);
                lin.t = horizon;
                obs.unresolved(&lin);
                break;
            }
            obs.sojourn(&mut lin, dt);
            lin.advance(dt);

            let u: f64 = rng.random();
            if u * rate < q {
                lin.ty = lin.ty.flipped();
                obs.flip(&lin);
                continue;
            }
            let mark: f64 = rng.random();
            if particles + 2 > budget {
                budget_hit = true;
                obs.unresolved(&lin);
                break;
            }
            obs.death(&lin);
            let first = Lineage {
                id: particles,
                parent: Some(lin.id),
                key: child_key(lin.key, 1),
                mark: None,
                ..lin
            };
            let second = Lineage {
                id: particles + 1,
                parent: Some(lin.id),
                key: child_key(lin.key, 2),
                u_max: lin.u_max.max(mark),
                mark: Some(mark),
                ..lin
            };
            particles += 2;
            obs.birth(&first);
            obs.birth(&second);
            stack.push(second);
            stack.push(first);
            break;
        }
    }
    RunInfo {
        particles,
        budget_hit,
    }
}
