//! Property tests for the structural invariants of the public types.

use brwlab::curves::{hmp_curve, hpm_curve, polylines_cross};
use brwlab::dynsys::{integrate, Controls, Direction, PhasePoint};
use brwlab::model::{derive_constants, linearization_at_one_one, Regime};
use brwlab::series::{compute_coeffs, offspring_distribution};
use brwlab::sim::{level_counts, simulate_tree, winding_counts, McEstimate, RepValue, TreeLog};
use brwlab::{ModelParams, ParticleType};
use num_complex::Complex64;
use proptest::prelude::*;

fn params() -> impl Strategy<Value = ModelParams> {
    (0.1f64..4.0, 1.05f64..8.0, 0.02f64..8.0).prop_map(|(qp, r, b)| ModelParams::new(qp, qp * r, b).unwrap())
}

fn position_at(tree: &TreeLog, id: usize, t: f64) -> f64 {
    let path = &tree.records[id].path;
    let w = path.windows(2).find(|w| w[0].0 <= t && t <= w[1].0).unwrap();
    w[0].1 + w[0].2.velocity() * (t - w[0].0)
}

/// Running max and min of the ancestral line of `id` over its whole life.
fn running_extrema(tree: &TreeLog, id: usize) -> (f64, f64) {
    let mut hi = f64::NEG_INFINITY;
    let mut lo = f64::INFINITY;
    let mut cur = Some(id);
    while let Some(i) = cur {
        for &(_, x, _) in &tree.records[i].path {
            hi = hi.max(x);
            lo = lo.min(x);
        }
        cur = tree.records[i].parent;
    }
    (hi, lo)
}

proptest! {
    #[test]
    fn construction_rejects_invalid_rates(qp in -2.0f64..4.0, qm in -2.0f64..4.0, b in -1.0f64..3.0) {
        let ok = ModelParams::new(qp, qm, b).is_ok();
        prop_assert_eq!(ok, qm > qp && qp > 0.0 && b > 0.0);
    }

    #[test]
    fn derived_constants_are_ordered(p in params()) {
        let d = derive_constants(&p);
        prop_assert!(d.k_minus > d.k_plus);
        prop_assert!(d.beta_c > 0.0 && d.m > 1.0);
        let gap = p.beta() - d.beta_c;
        if gap.abs() > 1e-6 * d.beta_c.max(1.0) {
            prop_assert_eq!(d.regime, if gap > 0.0 { Regime::Supercritical } else { Regime::Subcritical });
        }
        prop_assert_eq!(p.with_beta(d.beta_c).unwrap().regime(), Regime::Critical);
    }

    #[test]
    fn linearization_matches_its_closed_forms(p in params()) {
        let (qp, qm, b) = (p.q_plus(), p.q_minus(), p.beta());
        let s = linearization_at_one_one(&p);
        prop_assert_eq!(s.matrix, [[b - qp, qp], [-qm, qm - b]]);
        prop_assert!((s.discriminant - ((2.0 * b - qp - qm).powi(2) - 4.0 * qm * qp)).abs() <= 1e-9 * (1.0 + s.discriminant.abs()));
        for l in s.eigenvalues {
            let r = l * l + Complex64::from(qp - qm) * l + Complex64::from((qm + qp) * b - b * b);
            prop_assert!(r.norm() <= 1e-12 * (1.0 + (qm + qp + b).powi(2)));
        }
        let lo = 0.5 * (qm.sqrt() - qp.sqrt()).powi(2);
        let hi = 0.5 * (qm.sqrt() + qp.sqrt()).powi(2);
        if (b - lo).abs() > 1e-9 && (b - hi).abs() > 1e-9 {
            prop_assert_eq!(s.discriminant < 0.0, lo < b && b < hi);
        }
        let n = s.eigenvectors.len();
        let expected_dirs = if s.discriminant < 0.0 { n == 0 } else { n >= 1 };
        prop_assert!(expected_dirs);
        for v in &s.eigenvectors {
            prop_assert!(((v[0] * v[0] + v[1] * v[1]).sqrt() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn trajectories_sample_the_square_in_order(p in params(), x in 0.01f64..0.99, y in 0.01f64..0.99, fwd in any::<bool>()) {
        let dir = if fwd { Direction::Forward } else { Direction::Reversed };
        let ctl = Controls::default();
        let t = integrate(&p, PhasePoint::new(x, y), dir, 5.0, &ctl).unwrap();
        for q in t.points() {
            prop_assert!(q.in_unit_square(), "{q:?}");
        }
        for w in t.samples.windows(2) {
            prop_assert!(w[1].phi > w[0].phi);
            prop_assert!(w[1].phi - w[0].phi <= ctl.emission_step * (1.0 + 1e-12));
        }
    }

    #[test]
    fn series_coefficients_are_positive_and_bounded(p in params(), n in 2usize..300) {
        let c = compute_coeffs(&p, n).unwrap();
        prop_assert_eq!(c.a.len(), n + 1);
        prop_assert_eq!(c.a[0], 0.0);
        // positive until the recurrence underflows the f64 range, then zero
        let first_zero = c.a[1..].iter().position(|a| *a == 0.0).map_or(n + 1, |i| i + 1);
        prop_assert!(c.a[1..first_zero].iter().all(|a| *a > 0.0));
        prop_assert!(c.a[first_zero..].iter().all(|a| *a == 0.0));
        if first_zero <= n {
            prop_assert!(c.a[first_zero - 1] < 1e-300);
        }
        prop_assert!(c.partial_sum <= p.q_plus() / (p.q_minus() + p.beta()) + 1e-12);
        prop_assert!(c.a[1] > 0.0 && c.a[1] < 1.0);
    }

    #[test]
    fn offspring_law_sums_to_one(p in params(), n in 2usize..300) {
        let c = compute_coeffs(&p, n).unwrap();
        let d = offspring_distribution(&c, &p);
        let km = p.k_minus();
        for (k, pk) in d.p.iter().enumerate().skip(1) {
            let want = if k == 2 { (p.beta() + p.q_minus() * c.a[2]) / km } else { p.q_minus() * c.a[k] / km };
            prop_assert!((pk - want).abs() <= 1e-15);
            prop_assert!(*pk >= 0.0);
        }
        prop_assert!((d.total + d.p_inf - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn estimates_bracket_their_mean(
        reps in prop::collection::vec((0.0f64..5.0, 0.0f64..2.0, any::<bool>()), 2..80)
    ) {
        let e = McEstimate::from_reps(reps.iter().map(|&(v, extra, c)| RepValue { value: v, low: v, high: v + extra, censored: c }));
        prop_assert!(e.bracket.0 <= e.mean && e.mean <= e.bracket.1);
        let n = reps.len() as f64;
        let m = reps.iter().map(|r| r.0).sum::<f64>() / n;
        let sd = (reps.iter().map(|r| (r.0 - m).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        prop_assert!((e.std_error - sd / n.sqrt()).abs() <= 1e-12 * (1.0 + sd));
        prop_assert_eq!(e.n_reps, reps.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn family_trees_are_continuous(p in params(), seed in any::<u64>(), minus in any::<bool>()) {
        let root = if minus { ParticleType::Minus } else { ParticleType::Plus };
        let tree = simulate_tree(&p, root, 2.0, 2_000, seed, 0).unwrap();
        for r in &tree.records {
            for w in r.path.windows(2) {
                let slope = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
                prop_assert!((slope - w[0].2.velocity()).abs() < 1e-9);
            }
            prop_assert!(r.lineage_max >= r.path[0].1 && r.lineage_min <= r.path[0].1);
            if let Some(par) = r.parent {
                let parent = &tree.records[par];
                prop_assert_eq!(parent.death_time, Some(r.birth_time));
                prop_assert!((position_at(&tree, par, r.birth_time) - r.path[0].1).abs() < 1e-12);
                prop_assert!(r.lineage_max >= parent.lineage_max);
                prop_assert!(r.lineage_min <= parent.lineage_min);
            }
        }
    }

    #[test]
    fn open_levels_are_censored(p in params(), seed in any::<u64>()) {
        let tree = simulate_tree(&p, ParticleType::Plus, 1.5, 5_000, seed, 0).unwrap();
        let phis = [0.25, 0.5, 1.0, 2.0];
        let lc = level_counts(&tree, &phis).unwrap();
        prop_assert_eq!(lc.horizon_time, 1.5);
        for r in tree.records.iter().filter(|r| r.death_time.is_none()) {
            let (hi, lo) = running_extrema(&tree, r.id);
            for (k, &phi) in phis.iter().enumerate() {
                if hi < phi {
                    prop_assert!(lc.censored_plus[k], "level {phi} open for particle {}", r.id);
                }
                if lo > -phi {
                    prop_assert!(lc.censored_minus[k], "level -{phi} open for particle {}", r.id);
                }
            }
        }
    }

    #[test]
    fn one_root_is_winding_generation_zero(p in params(), seed in any::<u64>()) {
        let tree = simulate_tree(&p, ParticleType::Plus, 2.0, 2_000, seed, 0).unwrap();
        let w = winding_counts(&tree, 3).unwrap();
        prop_assert_eq!(w.w_plus[0], 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn probabilistic_curves_are_monotone_and_disjoint(qp in 0.3f64..2.0, r in 2.0f64..8.0, s in 0.2f64..3.0) {
        let base = ModelParams::new(qp, qp * r, 1.0).unwrap();
        let p = base.with_beta(s * base.beta_c()).unwrap();
        let hpm = hpm_curve(&p).unwrap();
        let hmp = hmp_curve(&p).unwrap();
        for c in [&hpm, &hmp] {
            for q in c.points.points() {
                prop_assert!(q.in_unit_square());
            }
        }
        let ys: Vec<f64> = hpm.points.points().map(|q| q.y).collect();
        prop_assert!(ys.windows(2).all(|w| w[0] < w[1]) || ys.windows(2).all(|w| w[0] > w[1]));
        let xs: Vec<f64> = hmp.points.points().map(|q| q.x).collect();
        prop_assert!(xs.windows(2).all(|w| w[0] < w[1]) || xs.windows(2).all(|w| w[0] > w[1]));
        let a: Vec<PhasePoint> = hpm.points.points().collect();
        let b: Vec<PhasePoint> = hmp.points.points().collect();
        prop_assert!(!polylines_cross(&a, &b, 1e-3));
    }
}
