//! Coefficients of the power series `A(y) = Σ aₙ yⁿ` whose graph `x = A(y)` is
//! an integral curve of the reversed system, and the offspring law of the
//! classical branching process driving the autonomous `y`-equation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::ModelParams;

pub const DEFAULT_N_MAX: usize = 200;

/// Compensated (Kahan) accumulator.
#[derive(Debug, Default, Clone, Copy)]
struct KahanSum {
    sum: f64,
    c: f64,
}

impl KahanSum {
    fn add(&mut self, v: f64) {
        let y = v - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Both algebraic forms of the smaller root of `q₋a² − (K₋+K₊)a + q₊ = 0`.
pub fn a1_forms(params: &ModelParams) -> (f64, f64) {
    let s = params.k_minus() + params.k_plus();
    let root = (s * s - 4.0 * params.q_minus() * params.q_plus()).sqrt();
    let direct = (s - root) / (2.0 * params.q_minus());
    let rationalized = 2.0 * params.q_plus() / (s + root);
    (direct, rationalized)
}

/// `a₁`, returned in the cancellation-free rationalized form.
pub fn a1_closed_form(params: &ModelParams) -> f64 {
    let (direct, rationalized) = a1_forms(params);
    // the direct form cancels, so its absolute error scales with (K₋+K₊)/q₋
    let scale = (params.k_minus() + params.k_plus()) / params.q_minus();
    debug_assert!(
        (direct - rationalized).abs() <= 1e-12 * scale,
        "a1 forms disagree: {direct} vs {rationalized}"
    );
    rationalized
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesCoeffs {
    /// `a[0..=n_max]`, with `a[0] = 0`.
    pub a: Vec<f64>,
    pub partial_sum: f64,
    pub n_max: usize,
    /// `q₊/(q₋+β)`, the bound on `Σ aₙ`.
    pub bound: f64,
}

/// Value of the truncated series together with a heuristic tail estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: f64,
    /// Geometric extrapolation from the last two coefficient ratios;
    /// reported only, never added to `value`. Infinite when the ratio test fails.
    pub tail_estimate: f64,
}

pub fn compute_coeffs(params: &ModelParams, n_max: usize) -> Result<SeriesCoeffs> {
    if n_max < 2 {
        return Err(Error::Domain(format!("n_max must be >= 2 (got {n_max})")));
    }
    let (qm, b) = (params.q_minus(), params.beta());
    let (kp, km) = (params.k_plus(), params.k_minus());
    let a1 = a1_closed_form(params);
    if !(a1 < kp / qm && a1 < km / qm) {
        return Err(Error::Internal(format!(
            "a1={a1} violates a1 < K/q_minus for {params:?}"
        )));
    }

    let mut a = vec![0.0; n_max + 1];
    a[1] = a1;
    for n in 2..=n_max {
        let divisor = kp + n as f64 * km - (n + 1) as f64 * qm * a1;
        if !(divisor > 0.0) {
            return Err(Error::Internal(format!(
                "recurrence divisor {divisor} <= 0 at n={n} for {params:?}"
            )));
        }
        let mut conv = KahanSum::default();
        for k in 1..n {
            conv.add(a[k] * a[n - k]);
        }
        let mut deriv = KahanSum::default();
        for k in 1..n.saturating_sub(1) {
            deriv.add((k + 1) as f64 * a[k + 1] * a[n - k]);
        }
        let rhs = b * conv.sum + qm * deriv.sum + b * (n - 1) as f64 * a[n - 1];
        a[n] = rhs / divisor;
    }

    let mut total = KahanSum::default();
    for v in &a {
        total.add(*v);
    }
    Ok(SeriesCoeffs {
        a,
        partial_sum: total.sum,
        n_max,
        bound: params.q_plus() / (params.q_minus() + params.beta()),
    })
}

impl SeriesCoeffs {
    pub fn a1(&self) -> f64 {
        self.a[1]
    }

    /// Horner evaluation of the degree-`n_max` truncation at `y ∈ [0,1]`.
    pub fn evaluate(&self, y: f64) -> Result<SeriesValue> {
        if !(0.0..=1.0).contains(&y) {
            return Err(Error::Domain(format!("y must lie in [0,1] (got {y})")));
        }
        let value = self.a.iter().rev().fold(0.0, |acc, c| acc * y + c);
        Ok(SeriesValue {
            value,
            tail_estimate: self.tail_estimate(y),
        })
    }

    /// `A(y)` without the tail report, for hot loops.
    pub fn value(&self, y: f64) -> f64 {
        self.a.iter().rev().fold(0.0, |acc, c| acc * y + c)
    }

    /// `A'(y)` of the truncation.
    pub fn derivative(&self, y: f64) -> f64 {
        self.a
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (n, c)| acc * y + n as f64 * c)
    }

    fn tail_estimate(&self, y: f64) -> f64 {
        let n = self.n_max;
        let (last, prev) = (self.a[n], self.a[n - 1]);
        if y == 0.0 || last == 0.0 {
            return 0.0;
        }
        let ratio = last / prev;
        let ry = ratio * y;
        if !(ry < 1.0) || !ratio.is_finite() {
            return f64::INFINITY;
        }
        last * y.powi(n as i32) * ry / (1.0 - ry)
    }

    /// `n,a_n` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,a_n\n");
        for (n, v) in self.a.iter().enumerate() {
            out.push_str(&format!("{n},{}\n", crate::io::csv::fmt_f64(*v)));
        }
        out
    }
}

/// Offspring law of the process `Z` that drives the autonomous `y`-equation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OffspringDist {
    /// `p[n] = P(C = n)` for `0 ≤ n ≤ n_max` (`p[0] = 0`).
    pub p: Vec<f64>,
    /// `q₋ a_∞ / K₋` with `a_∞` estimated by `1 − Σ_{n≤N} aₙ`.
    pub p_inf: f64,
    /// The truncated `a_∞` overestimates the true one, so `p_inf` is an upper estimate.
    pub p_inf_is_upper_estimate: bool,
    /// `Σ_{n≤N} p[n]`.
    pub total: f64,
}

pub fn offspring_distribution(coeffs: &SeriesCoeffs, params: &ModelParams) -> OffspringDist {
    let (qm, km, b) = (params.q_minus(), params.k_minus(), params.beta());
    let mut p: Vec<f64> = coeffs.a.iter().map(|a| qm * a / km).collect();
    p[2] = (b + qm * coeffs.a[2]) / km;
    let total = p.iter().sum();
    OffspringDist {
        p,
        p_inf: qm * (1.0 - coeffs.partial_sum) / km,
        p_inf_is_upper_estimate: true,
        total,
    }
}

/// Summary record written next to the coefficient CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesSummary {
    pub a1: f64,
    pub partial_sum: f64,
    pub bound: f64,
    pub p_inf: f64,
    pub n_max: usize,
    pub tail_at_one: f64,
    pub tail_note: &'static str,
}

pub fn summary(coeffs: &SeriesCoeffs, params: &ModelParams) -> SeriesSummary {
    SeriesSummary {
        a1: coeffs.a1(),
        partial_sum: coeffs.partial_sum,
        bound: coeffs.bound,
        p_inf: offspring_distribution(coeffs, params).p_inf,
        n_max: coeffs.n_max,
        tail_at_one: coeffs.tail_estimate(1.0),
        tail_note: "heuristic geometric extrapolation of the last coefficient ratio",
    }
}
