use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::io::csv::fmt_f64;

/// One replicate's contribution: the censored-as-is value and the two ends of
/// what the truncated part could still have made of it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepValue {
    pub value: f64,
    pub low: f64,
    pub high: f64,
    pub censored: bool,
}

impl RepValue {
    pub fn exact(v: f64) -> Self {
        RepValue {
            value: v,
            low: v,
            high: v,
            censored: false,
        }
    }
}

/// Running sums; `merge` is associative, so blocks can be combined in any grouping.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    n: usize,
    censored: usize,
    sum: f64,
    sum_sq: f64,
    low: f64,
    low_sq: f64,
    high: f64,
    high_sq: f64,
}

impl Moments {
    pub fn push(&mut self, r: RepValue) {
        self.n += 1;
        self.censored += r.censored as usize;
        self.sum += r.value;
        self.sum_sq += r.value * r.value;
        self.low += r.low;
        self.low_sq += r.low * r.low;
        self.high += r.high;
        self.high_sq += r.high * r.high;
    }

    pub fn merge(&self, o: &Moments) -> Moments {
        Moments {
            n: self.n + o.n,
            censored: self.censored + o.censored,
            sum: self.sum + o.sum,
            sum_sq: self.sum_sq + o.sum_sq,
            low: self.low + o.low,
            low_sq: self.low_sq + o.low_sq,
            high: self.high + o.high,
            high_sq: self.high_sq + o.high_sq,
        }
    }

    pub fn estimate(&self) -> McEstimate {
        let n = self.n as f64;
        let se = |s: f64, s2: f64| {
            if self.n < 2 || !s.is_finite() {
                return if s.is_finite() { f64::NAN } else { 0.0 };
            }
            let mean = s / n;
            let var = ((s2 - n * mean * mean) / (n - 1.0)).max(0.0);
            (var / n).sqrt()
        };
        McEstimate {
            mean: self.sum / n,
            std_error: se(self.sum, self.sum_sq),
            n_reps: self.n,
            censor_fraction: self.censored as f64 / n,
            bracket: (self.low / n, self.high / n),
            bracket_std_error: (se(self.low, self.low_sq), se(self.high, self.high_sq)),
        }
    }
}

impl FromIterator<RepValue> for Moments {
    fn from_iter<I: IntoIterator<Item = RepValue>>(iter: I) -> Self {
        let mut m = Moments::default();
        for r in iter {
            m.push(r);
        }
        m
    }
}

/// Monte Carlo estimate with a censoring bracket.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_reps: usize,
    pub censor_fraction: f64,
    pub bracket: (f64, f64),
    /// Standard errors of the bracket ends.
    pub bracket_std_error: (f64, f64),
}

impl McEstimate {
    /// `low − k·se ≤ truth ≤ high + k·se`, each end with its own standard error.
    pub fn consistent_with(&self, truth: f64, k: f64) -> bool {
        let lo = self.bracket.0 - k * self.bracket_std_error.0;
        let hi = self.bracket.1 + k * self.bracket_std_error.1;
        lo <= truth && truth <= hi
    }

    pub fn width(&self) -> f64 {
        self.bracket.1 - self.bracket.0
    }

    pub fn from_reps<I: IntoIterator<Item = RepValue>>(reps: I) -> McEstimate {
        reps.into_iter().collect::<Moments>().estimate()
    }
}

/// Replicates `0..reps` evaluated in parallel, returned in replicate order.
/// Results depend only on the replicate index, never on scheduling.
pub fn par_reps<T, F>(reps: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    (0..reps as u64).into_par_iter().map(f).collect()
}

const CHUNK: u64 = 4096;

/// Moments of `width` quantities over replicates `0..reps` without keeping
/// the replicates. `f(rep, m)` pushes replicate `rep` into `m[0..width]`.
/// Fixed chunks merged in order keep the result independent of scheduling.
pub fn par_moments<F>(reps: usize, width: usize, f: F) -> Vec<Moments>
where
    F: Fn(u64, &mut [Moments]) + Sync + Send,
{
    let reps = reps as u64;
    let chunks: Vec<Vec<Moments>> = (0..reps.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut m = vec![Moments::default(); width];
            for rep in c * CHUNK..((c + 1) * CHUNK).min(reps) {
                f(rep, &mut m);
            }
            m
        })
        .collect();
    chunks.iter().fold(vec![Moments::default(); width], |acc, m| {
        acc.iter().zip(m).map(|(a, b)| a.merge(b)).collect()
    })
}

pub const CSV_HEADER: &str = "quantity,phi,theta,mean,se,low,high,censor_fraction,n_reps\n";

/// One row of the per-estimate CSV; `phi` and `theta` are left empty when not applicable.
pub fn csv_row(quantity: &str, phi: Option<f64>, theta: Option<f64>, e: &McEstimate) -> String {
    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    format!(
        "{quantity},{},{},{},{},{},{},{},{}\n",
        opt(phi),
        opt(theta),
        fmt_f64(e.mean),
        fmt_f64(e.std_error),
        fmt_f64(e.bracket.0),
        fmt_f64(e.bracket.1),
        fmt_f64(e.censor_fraction),
        e.n_reps
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_values_have_degenerate_bracket() {
        let e = McEstimate::from_reps([1.0, 2.0, 3.0].map(RepValue::exact));
        assert_eq!(e.mean, 2.0);
        assert_eq!(e.bracket, (2.0, 2.0));
        assert!((e.std_error - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(e.censor_fraction, 0.0);
    }

    #[test]
    fn infinite_high_end() {
        let e = McEstimate::from_reps([
            RepValue::exact(1.0),
            RepValue {
                value: 1.0,
                low: 1.0,
                high: f64::INFINITY,
                censored: true,
            },
        ]);
        assert_eq!(e.bracket.1, f64::INFINITY);
        assert_eq!(e.censor_fraction, 0.5);
        assert!(e.consistent_with(1e9, 3.0));
    }

    #[test]
    fn par_reps_keeps_order() {
        let v = par_reps(1000, |i| i * 2);
        assert!(v.iter().enumerate().all(|(i, x)| *x == 2 * i as u64));
    }

    #[test]
    fn csv_row_layout() {
        let e = McEstimate::from_reps([RepValue::exact(1.0), RepValue::exact(1.0)]);
        let row = csv_row("n_plus", Some(0.0), None, &e);
        assert_eq!(row.split(',').count(), 9);
        assert!(row.starts_with("n_plus,0.0000000000000000e0,,1.0000000000000000e0,"));
        assert!(row.ends_with(",2\n"));
    }

    proptest! {
        #[test]
        fn merge_matches_single_pass(xs in prop::collection::vec(0.0f64..10.0, 2..60), cut in 0usize..60) {
            let cut = cut.min(xs.len());
            let all: Moments = xs.iter().map(|&x| RepValue::exact(x)).collect();
            let a: Moments = xs[..cut].iter().map(|&x| RepValue::exact(x)).collect();
            let b: Moments = xs[cut..].iter().map(|&x| RepValue::exact(x)).collect();
            let (e1, e2) = (all.estimate(), a.merge(&b).estimate());
            prop_assert!((e1.mean - e2.mean).abs() < 1e-12);
            prop_assert!((e1.std_error - e2.std_error).abs() < 1e-9);
            prop_assert_eq!(e1.n_reps, e2.n_reps);
        }
    }
}
