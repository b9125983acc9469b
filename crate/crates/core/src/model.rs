//! Model parameters, derived constants and the closed-form spectral facts of
//! the two-state chain and its linearization at the corner `(1,1)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A real 2x2 matrix in row-major order.
pub type Mat2 = [[f64; 2]; 2];

pub const IDENTITY: Mat2 = [[1.0, 0.0], [0.0, 1.0]];

/// Relative tolerance used to classify `beta` as critical.
pub const CRITICAL_REL_TOL: f64 = 1e-12;

/// Type of a particle: `Plus` moves right at unit speed, `Minus` moves left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParticleType {
    Plus,
    Minus,
}

impl ParticleType {
    pub fn flipped(self) -> Self {
        match self {
            ParticleType::Plus => ParticleType::Minus,
            ParticleType::Minus => ParticleType::Plus,
        }
    }

    /// Velocity of the position while in this state.
    pub fn velocity(self) -> f64 {
        match self {
            ParticleType::Plus => 1.0,
            ParticleType::Minus => -1.0,
        }
    }
}

/// Flip rates `q_plus < q_minus` and birth rate `beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct ModelParams {
    q_plus: f64,
    q_minus: f64,
    beta: f64,
}

#[derive(Deserialize)]
struct RawParams {
    q_plus: f64,
    q_minus: f64,
    beta: f64,
}

impl TryFrom<RawParams> for ModelParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        ModelParams::new(raw.q_plus, raw.q_minus, raw.beta)
    }
}

impl ModelParams {
    pub fn new(q_plus: f64, q_minus: f64, beta: f64) -> Result<Self> {
        if !(q_plus.is_finite() && q_minus.is_finite() && beta.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "rates must be finite (q_plus={q_plus}, q_minus={q_minus}, beta={beta})"
            )));
        }
        if q_plus <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "violates q_plus > 0 (q_plus={q_plus})"
            )));
        }
        if q_minus <= q_plus {
            return Err(Error::InvalidParams(format!(
                "violates q_minus > q_plus (q_plus={q_plus}, q_minus={q_minus})"
            )));
        }
        if beta <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "violates beta > 0 (beta={beta})"
            )));
        }
        Ok(ModelParams {
            q_plus,
            q_minus,
            beta,
        })
    }

    pub fn q_plus(&self) -> f64 {
        self.q_plus
    }

    pub fn q_minus(&self) -> f64 {
        self.q_minus
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Same flip rates with a different birth rate.
    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        ModelParams::new(self.q_plus, self.q_minus, beta)
    }

    pub fn flip_rate(&self, t: ParticleType) -> f64 {
        match t {
            ParticleType::Plus => self.q_plus,
            ParticleType::Minus => self.q_minus,
        }
    }

    pub fn k_plus(&self) -> f64 {
        self.q_plus + self.beta
    }

    pub fn k_minus(&self) -> f64 {
        self.q_minus + self.beta
    }

    /// `½(√q₋ − √q₊)²`.
    pub fn beta_c(&self) -> f64 {
        0.5 * (self.q_minus.sqrt() - self.q_plus.sqrt()).powi(2)
    }

    /// `√(q₋/q₊)`, slope of the critical eigen-direction at `(1,1)`.
    pub fn m(&self) -> f64 {
        (self.q_minus / self.q_plus).sqrt()
    }

    /// `½(q₋ − q₊)`: the minimizing tilt and the critical exponential rate.
    pub fn half_drift_gap(&self) -> f64 {
        0.5 * (self.q_minus - self.q_plus)
    }

    pub fn regime(&self) -> Regime {
        Regime::classify(self.beta, self.beta_c())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Subcritical,
    Critical,
    Supercritical,
}

impl Regime {
    pub fn classify(beta: f64, beta_c: f64) -> Regime {
        if (beta - beta_c).abs() <= CRITICAL_REL_TOL * beta_c.max(1.0) {
            Regime::Critical
        } else if beta > beta_c {
            Regime::Supercritical
        } else {
            Regime::Subcritical
        }
    }

    /// `beta <= beta_c`, the regime in which both pgf curves reach `(1,1)`.
    pub fn is_at_most_critical(self) -> bool {
        !matches!(self, Regime::Supercritical)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedConstants {
    pub k_plus: f64,
    pub k_minus: f64,
    pub beta_c: f64,
    pub regime: Regime,
    pub m: f64,
}

pub fn derive_constants(params: &ModelParams) -> DerivedConstants {
    DerivedConstants {
        k_plus: params.k_plus(),
        k_minus: params.k_minus(),
        beta_c: params.beta_c(),
        regime: params.regime(),
        m: params.m(),
    }
}

/// Linearization of the pgf dynamical system at `(1,1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralInfo {
    pub matrix: Mat2,
    #[serde(serialize_with = "serialize_complex_pair")]
    pub eigenvalues: [Complex64; 2],
    pub discriminant: f64,
    /// Unit directions; empty for a spiral, one for the defective double root.
    pub eigenvectors: Vec<[f64; 2]>,
}

fn serialize_complex_pair<S: serde::Serializer>(
    v: &[Complex64; 2],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(2))?;
    for z in v {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

impl SpectralInfo {
    pub fn is_spiral(&self) -> bool {
        self.eigenvectors.is_empty()
    }

    /// Characteristic polynomial `λ² + (q₊−q₋)λ + (q₋+q₊)β − β²` evaluated at `lambda`.
    pub fn char_poly(params: &ModelParams, lambda: Complex64) -> Complex64 {
        let (qp, qm, b) = (params.q_plus, params.q_minus, params.beta);
        lambda * lambda + lambda * (qp - qm) + ((qm + qp) * b - b * b)
    }
}

/// `[[β−q₊, q₊], [−q₋, q₋−β]]`.
pub fn linearization_matrix(params: &ModelParams) -> Mat2 {
    let (qp, qm, b) = (params.q_plus, params.q_minus, params.beta);
    [[b - qp, qp], [-qm, qm - b]]
}

/// `{2β − (q₊+q₋)}² − 4q₋q₊`.
pub fn discriminant(params: &ModelParams) -> f64 {
    let (qp, qm, b) = (params.q_plus, params.q_minus, params.beta);
    (2.0 * b - (qp + qm)).powi(2) - 4.0 * qm * qp
}

fn discriminant_scale(params: &ModelParams) -> f64 {
    (params.q_plus + params.q_minus + 2.0 * params.beta)
        .powi(2)
        .max(1.0)
}

pub fn linearization_at_one_one(params: &ModelParams) -> SpectralInfo {
    let matrix = linearization_matrix(params);
    let disc = discriminant(params);
    let half_trace = params.half_drift_gap();
    let defective = disc.abs() <= 1e-14 * discriminant_scale(params);

    let (eigenvalues, eigenvectors) = if defective {
        let lambda = half_trace;
        let v = eigen_direction(params, lambda);
        ([Complex64::new(lambda, 0.0); 2], vec![v])
    } else if disc > 0.0 {
        let r = 0.5 * disc.sqrt();
        let (lo, hi) = (half_trace - r, half_trace + r);
        (
            [Complex64::new(lo, 0.0), Complex64::new(hi, 0.0)],
            vec![eigen_direction(params, lo), eigen_direction(params, hi)],
        )
    } else {
        let w = 0.5 * (-disc).sqrt();
        (
            [Complex64::new(half_trace, -w), Complex64::new(half_trace, w)],
            Vec::new(),
        )
    };

    SpectralInfo {
        matrix,
        eigenvalues,
        discriminant: disc,
        eigenvectors,
    }
}

/// Unit eigenvector `(q₊, λ−β+q₊)` for a real eigenvalue, oriented with `x > 0`.
fn eigen_direction(params: &ModelParams, lambda: f64) -> [f64; 2] {
    let vx = params.q_plus;
    let vy = lambda - params.beta + params.q_plus;
    let n = vx.hypot(vy);
    [vx / n, vy / n]
}

/// Slope `dy/dx` of the eigen-direction at `(1,1)` that carries the curve
/// `x = H⁺⁻(y)` into the corner: the fast direction below criticality and the
/// unique direction `m` at criticality. `None` for a spiral.
pub fn separatrix_slope(params: &ModelParams) -> Option<f64> {
    match params.regime() {
        Regime::Supercritical => None,
        Regime::Critical => Some(params.m()),
        Regime::Subcritical => {
            let disc = discriminant(params).max(0.0);
            let lambda_fast = params.half_drift_gap() + 0.5 * disc.sqrt();
            Some((lambda_fast - params.beta + params.q_plus) / params.q_plus)
        }
    }
}

/// Top eigenvalue of the tilted generator `Q − μV`,
/// `−½(q₋+q₊) + ½√((q₋+q₊)² − 4(q₋−q₊)μ + 4μ²)`.
pub fn gamma_eigenvalue(params: &ModelParams, mu: f64) -> Result<f64> {
    if !(mu >= 0.0) {
        return Err(Error::Domain(format!("mu must be >= 0 (got {mu})")));
    }
    let (qp, qm) = (params.q_plus, params.q_minus);
    let s = qm + qp;
    let radicand = s * s - 4.0 * (qm - qp) * mu + 4.0 * mu * mu;
    Ok(-0.5 * s + 0.5 * radicand.sqrt())
}

/// Tilted generator `Q − μV` with `V = diag(1, −1)`.
pub fn tilted_generator(params: &ModelParams, mu: f64) -> Mat2 {
    let (qp, qm) = (params.q_plus, params.q_minus);
    [[-qp - mu, qp], [qm, -qm + mu]]
}

/// Chernoff upper bound on `e^{βt} P^{start}[Φ_X(t) ≤ εt]` at tilt `mu`:
/// `e^{(β+με)t} (exp{t(Q−μV)} 1)_{start}`.
pub fn chernoff_bound(
    params: &ModelParams,
    start: ParticleType,
    mu: f64,
    eps: f64,
    t: f64,
) -> Result<f64> {
    if !(mu >= 0.0) {
        return Err(Error::Domain(format!("mu must be >= 0 (got {mu})")));
    }
    let e = expm2(&tilted_generator(params, mu), t);
    let v = mat_vec(&e, [1.0, 1.0]);
    let idx = match start {
        ParticleType::Plus => 0,
        ParticleType::Minus => 1,
    };
    Ok(((params.beta + mu * eps) * t).exp() * v[idx])
}

/// `exp(t·A)` for a real 2x2 matrix through `A = sI + N` with `N² = δI`.
/// The nilpotent case `δ = 0` uses `e^{st}(I + tN)` exactly.
pub fn expm2(a: &Mat2, t: f64) -> Mat2 {
    let s = 0.5 * (a[0][0] + a[1][1]);
    let n = [[a[0][0] - s, a[0][1]], [a[1][0], a[1][1] - s]];
    let delta = n[0][0] * n[0][0] + n[0][1] * n[1][0];
    let scale = a
        .iter()
        .flatten()
        .fold(1.0_f64, |acc, v| acc.max(v.abs()))
        .powi(2);

    let (c, k) = if delta.abs() <= 1e-15 * scale {
        (1.0, t)
    } else if delta > 0.0 {
        let r = delta.sqrt();
        ((r * t).cosh(), (r * t).sinh() / r)
    } else {
        let w = (-delta).sqrt();
        ((w * t).cos(), (w * t).sin() / w)
    };

    let g = (s * t).exp();
    [
        [g * (c + k * n[0][0]), g * k * n[0][1]],
        [g * k * n[1][0], g * (c + k * n[1][1])],
    ]
}

pub fn mat_vec(a: &Mat2, v: [f64; 2]) -> [f64; 2] {
    [
        a[0][0] * v[0] + a[0][1] * v[1],
        a[1][0] * v[0] + a[1][1] * v[1],
    ]
}

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// `exp(φM)` with `M` the linearization matrix at `(1,1)`; it propagates the
/// mean counts `(E⁺N⁺(φ), E⁻N⁺(φ))`.
pub fn expectation_matrix_exp(params: &ModelParams, phi: f64) -> Result<Mat2> {
    if !(phi >= 0.0) {
        return Err(Error::Domain(format!("phi must be >= 0 (got {phi})")));
    }
    Ok(expm2(&linearization_matrix(params), phi))
}

/// The four mean level counts at criticality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalMeans {
    /// `E⁺N⁺(φ)`
    pub plus_plus: f64,
    /// `E⁻N⁺(φ)`
    pub minus_plus: f64,
    /// `E⁺N⁻(φ)`
    pub plus_minus: f64,
    /// `E⁻N⁻(φ)`
    pub minus_minus: f64,
}

/// Mean counts at `β = β_c`: `exp(φM)(1, m)` for the up-crossing counts and
/// `exp(−φM)(1/m, 1)` for the mirrored down-crossing counts.
pub fn critical_means(params: &ModelParams, phi: f64) -> Result<CriticalMeans> {
    if params.regime() != Regime::Critical {
        return Err(Error::Domain(format!(
            "closed-form means need beta = beta_c (beta={}, beta_c={})",
            params.beta,
            params.beta_c()
        )));
    }
    let m = params.m();
    let up = mat_vec(&expectation_matrix_exp(params, phi)?, [1.0, m]);
    let down = mat_vec(&expm2(&linearization_matrix(params), -phi), [1.0 / m, 1.0]);
    Ok(CriticalMeans {
        plus_plus: up[0],
        minus_plus: up[1],
        plus_minus: down[0],
        minus_minus: down[1],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn p(qp: f64, qm: f64, b: f64) -> ModelParams {
        ModelParams::new(qp, qm, b).unwrap()
    }

    #[test]
    fn derived_constants_at_the_standard_critical_point() {
        let d = derive_constants(&p(1.0, 4.0, 0.5));
        assert_eq!(d.beta_c, 0.5);
        assert_eq!(d.k_plus, 1.5);
        assert_eq!(d.k_minus, 4.5);
        assert_eq!(d.m, 2.0);
        assert_eq!(d.regime, Regime::Critical);
        assert_eq!(p(1.0, 4.0, 4.0).regime(), Regime::Supercritical);
        assert_eq!(p(1.0, 4.0, 0.4).regime(), Regime::Subcritical);
    }

    #[test]
    fn rejects_invalid_params() {
        let err = ModelParams::new(2.0, 2.0, 1.0).unwrap_err();
        assert!(err.to_string().contains("q_minus > q_plus"));
        assert!(ModelParams::new(4.0, 1.0, 1.0).is_err());
        assert!(ModelParams::new(0.0, 1.0, 1.0).is_err());
        assert!(ModelParams::new(1.0, 4.0, 0.0).is_err());
        assert!(ModelParams::new(1.0, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn deserialization_validates() {
        let ok: ModelParams =
            serde_json::from_str(r#"{"q_plus":1,"q_minus":4,"beta":0.5}"#).unwrap();
        assert_eq!(ok, p(1.0, 4.0, 0.5));
        assert!(serde_json::from_str::<ModelParams>(r#"{"q_plus":4,"q_minus":1,"beta":1}"#).is_err());
    }

    #[test]
    fn spiral_spectrum_in_supercritical_example() {
        let s = linearization_at_one_one(&p(1.0, 4.0, 4.0));
        assert_eq!(s.discriminant, -7.0);
        assert!(s.is_spiral());
        let r7 = 7.0_f64.sqrt() / 2.0;
        assert_abs_diff_eq!(s.eigenvalues[0].re, 1.5, epsilon = 1e-14);
        assert_abs_diff_eq!(s.eigenvalues[0].im.abs(), r7, epsilon = 1e-14);
        assert_abs_diff_eq!(s.eigenvalues[1].im.abs(), r7, epsilon = 1e-14);
    }

    #[test]
    fn defective_spectrum_at_criticality() {
        let s = linearization_at_one_one(&p(1.0, 4.0, 0.5));
        assert_eq!(s.discriminant, 0.0);
        assert_eq!(s.eigenvalues[0], Complex64::new(1.5, 0.0));
        assert_eq!(s.eigenvectors.len(), 1);
        let v = s.eigenvectors[0];
        assert_abs_diff_eq!(v[1] / v[0], 2.0, epsilon = 1e-14);
        assert_eq!(s.matrix, [[-0.5, 1.0], [-4.0, 3.5]]);
    }

    #[test]
    fn discriminant_vanishes_at_both_roots() {
        for (qp, qm) in [(1.0, 4.0), (0.3, 2.7), (2.0, 9.0)] {
            let lo = 0.5 * (f64::sqrt(qm) - f64::sqrt(qp)).powi(2);
            let hi = 0.5 * (f64::sqrt(qm) + f64::sqrt(qp)).powi(2);
            for b in [lo, hi] {
                let d = discriminant(&p(qp, qm, b));
                assert!(d.abs() < 1e-12 * (qp + qm).powi(2), "{qp} {qm} {b}: {d}");
            }
            let mid = 0.5 * (lo + hi);
            assert!(discriminant(&p(qp, qm, mid)) < 0.0);
        }
    }

    #[test]
    fn subcritical_has_two_real_eigenvectors() {
        let params = p(1.0, 4.0, 0.4);
        let s = linearization_at_one_one(&params);
        assert_eq!(s.eigenvectors.len(), 2);
        for (lam, v) in s.eigenvalues.iter().zip(&s.eigenvectors) {
            let mv = mat_vec(&s.matrix, *v);
            assert_abs_diff_eq!(mv[0], lam.re * v[0], epsilon = 1e-12);
            assert_abs_diff_eq!(mv[1], lam.re * v[1], epsilon = 1e-12);
        }
        let fast = separatrix_slope(&params).unwrap();
        assert!(fast > params.m());
    }

    #[test]
    fn gamma_examples() {
        let params = p(1.0, 4.0, 0.5);
        assert_eq!(gamma_eigenvalue(&params, 0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(gamma_eigenvalue(&params, 1.5).unwrap(), -0.5, epsilon = 1e-15);
        assert!(matches!(gamma_eigenvalue(&params, -0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn gamma_matches_tilted_generator_spectrum() {
        let params = p(1.0, 4.0, 0.5);
        for mu in [0.0, 0.3, 1.5, 2.7] {
            let a = tilted_generator(&params, mu);
            let tr = a[0][0] + a[1][1];
            let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
            let top = 0.5 * tr + (0.25 * tr * tr - det).sqrt();
            assert_abs_diff_eq!(gamma_eigenvalue(&params, mu).unwrap(), top, epsilon = 1e-12);
        }
    }

    #[test]
    fn expm_identity_and_critical_example() {
        let params = p(1.0, 4.0, 0.5);
        assert_eq!(expectation_matrix_exp(&params, 0.0).unwrap(), IDENTITY);
        let e = expectation_matrix_exp(&params, 1.0).unwrap();
        let v = mat_vec(&e, [1.0, 2.0]);
        assert_abs_diff_eq!(v[0], 1.5_f64.exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(v[1], 2.0 * 1.5_f64.exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(v[0], 4.4817, epsilon = 1e-4);
        assert_abs_diff_eq!(v[1], 8.9634, epsilon = 1e-4);
    }

    #[test]
    fn expm_matches_taylor_series() {
        // independent route: truncated power series
        for params in [p(1.0, 4.0, 0.5), p(1.0, 4.0, 4.0), p(1.0, 4.0, 0.2)] {
            let a = linearization_matrix(&params);
            let t = 0.7;
            let mut term = IDENTITY;
            let mut sum = IDENTITY;
            for k in 1..80 {
                term = mat_mul(&term, &a);
                for row in term.iter_mut() {
                    for v in row.iter_mut() {
                        *v *= t / k as f64;
                    }
                }
                for i in 0..2 {
                    for j in 0..2 {
                        sum[i][j] += term[i][j];
                    }
                }
            }
            let e = expm2(&a, t);
            for i in 0..2 {
                for j in 0..2 {
                    assert_abs_diff_eq!(e[i][j], sum[i][j], epsilon = 1e-11);
                }
            }
        }
    }

    #[test]
    fn balance_at_criticality() {
        let params = p(1.0, 4.0, 0.5);
        for phi in [0.0, 0.7, 2.0] {
            let c = critical_means(&params, phi).unwrap();
            assert_abs_diff_eq!(c.minus_plus * c.plus_minus, 1.0, epsilon = 1e-10);
            assert_abs_diff_eq!(c.plus_plus, (1.5 * phi).exp(), epsilon = 1e-10);
            assert_abs_diff_eq!(c.minus_minus, (-1.5 * phi).exp(), epsilon = 1e-10);
        }
        assert!(critical_means(&p(1.0, 4.0, 0.4), 1.0).is_err());
    }

    #[test]
    fn chernoff_bound_dominates_at_zero_tilt() {
        // mu = 0 reduces to e^{βt}
        let params = p(1.0, 4.0, 0.4);
        let b = chernoff_bound(&params, ParticleType::Plus, 0.0, 0.1, 3.0).unwrap();
        assert_abs_diff_eq!(b, (0.4_f64 * 3.0).exp(), epsilon = 1e-12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn params() -> impl Strategy<Value = ModelParams> {
            (0.05f64..5.0, 1.01f64..10.0, 0.01f64..10.0)
                .prop_map(|(qp, ratio, b)| ModelParams::new(qp, qp * ratio, b).unwrap())
        }

        proptest! {
            #[test]
            fn eigenvalues_solve_characteristic_polynomial(params in params()) {
                let s = linearization_at_one_one(&params);
                let scale = discriminant_scale(&params);
                for lam in s.eigenvalues {
                    let r = SpectralInfo::char_poly(&params, lam).norm();
                    prop_assert!(r < 1e-12 * scale, "residual {r}");
                }
            }

            #[test]
            fn gamma_minimum_is_minus_beta_c(params in params()) {
                let mu_star = params.half_drift_gap();
                let g = gamma_eigenvalue(&params, mu_star).unwrap();
                prop_assert!((g + params.beta_c()).abs() < 1e-12 * params.q_minus().max(1.0));
                // convexity and argmin on [0, q₋−q₊]
                let n = 200;
                let h = 2.0 * mu_star / n as f64;
                let vals: Vec<f64> = (0..=n)
                    .map(|i| gamma_eigenvalue(&params, i as f64 * h).unwrap())
                    .collect();
                for w in vals.windows(3) {
                    prop_assert!(w[0] - 2.0 * w[1] + w[2] >= -1e-12);
                }
                for v in &vals {
                    prop_assert!(*v >= g - 1e-12);
                }
            }

            #[test]
            fn expm_semigroup(params in params(), t1 in 0.0f64..1.5, t2 in 0.0f64..1.5) {
                let a = linearization_matrix(&params);
                let lhs = mat_mul(&expm2(&a, t1), &expm2(&a, t2));
                let rhs = expm2(&a, t1 + t2);
                for i in 0..2 {
                    for j in 0..2 {
                        let tol = 1e-10 * rhs[i][j].abs().max(1.0);
                        prop_assert!((lhs[i][j] - rhs[i][j]).abs() < tol);
                    }
                }
            }
        }
    }
}
