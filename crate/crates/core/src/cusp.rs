//! Envelopes of the Riemann map at an analytic cusp
//! `{0 < x < a, 0 < y < α(x)}`: the integral `F(t) = exp(-π ∫_t^a dr/(r α(r)))`,
//! its series expansion, and a sampled check for `F`-Hölder moduli.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::function::FunctionHandle;
use crate::quadrature::{integrate, QuadratureConfig};

/// Samples used to confirm `α > 0` on an interval.
const POSITIVITY_SAMPLES: usize = 1000;

/// A power-series cusp profile `α(x) = Σ_j a_j x^j` with leading exponent
/// `N ≥ 2`, together with the endpoint `a` of the envelope integral.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CuspProfile {
    /// `a_0, a_1, …`; entries below the leading exponent are zero.
    coefficients: Vec<f64>,
    leading: usize,
    endpoint: f64,
    validity_radius: f64,
}

impl CuspProfile {
    pub fn new(coefficients: Vec<f64>, endpoint: f64, validity_radius: f64) -> Result<Self> {
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("profile coefficients must be finite".into()));
        }
        let leading = coefficients.iter().position(|&c| c != 0.0).ok_or(Error::LeadingCoefficientZero)?;
        if leading < 2 {
            return Err(Error::InvalidInput(format!(
                "leading exponent {leading} < 2 describes a corner, not a cusp"
            )));
        }
        if !(endpoint > 0.0 && endpoint < validity_radius) {
            return Err(Error::InvalidInput(format!(
                "endpoint {endpoint} must lie in (0, {validity_radius})"
            )));
        }
        let p = CuspProfile { coefficients, leading, endpoint, validity_radius };
        p.check_positive(0.0, endpoint)?;
        Ok(p)
    }

    /// `α(x) = c x^N`, valid everywhere.
    pub fn monomial(c: f64, n: usize, endpoint: f64) -> Result<Self> {
        let mut coefficients = vec![0.0; n + 1];
        coefficients[n] = c;
        CuspProfile::new(coefficients, endpoint, f64::INFINITY)
    }

    pub fn alpha(&self, x: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn leading_exponent(&self) -> usize {
        self.leading
    }

    pub fn leading_coefficient(&self) -> f64 {
        self.coefficients[self.leading]
    }

    pub fn endpoint(&self) -> f64 {
        self.endpoint
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    fn check_positive(&self, lo: f64, hi: f64) -> Result<()> {
        for k in 1..=POSITIVITY_SAMPLES {
            let x = lo + (hi - lo) * k as f64 / POSITIVITY_SAMPLES as f64;
            if !(self.alpha(x) > 0.0) {
                return Err(Error::AlphaNonpositive(x));
            }
        }
        Ok(())
    }
}

/// `F(t) = exp(-π ∫_t^a dr/(r α(r)))` for `t ∈ (0, a]`. The integral is taken
/// in `s = 1/r`, where it reads `∫_{1/a}^{1/t} ds/(s α(1/s))`.
pub fn warschawski_envelope(profile: &CuspProfile, t: f64) -> Result<f64> {
    Ok((-PI * envelope_integral(profile, t)?).exp())
}

/// `∫_t^a dr/(r α(r))`.
pub fn envelope_integral(profile: &CuspProfile, t: f64) -> Result<f64> {
    let a = profile.endpoint;
    if !(t > 0.0 && t <= a) {
        return Err(Error::InvalidInput(format!("t = {t} outside (0, {a}]")));
    }
    if t == a {
        return Ok(0.0);
    }
    profile.check_positive(t, a)?;
    let cfg = QuadratureConfig { abs_tol: 0.0, rel_tol: 1e-13, max_intervals: 20_000, max_depth: 40 };
    let q = integrate(|s: f64| 1.0 / (s * profile.alpha(1.0 / s)), 1.0 / a, 1.0 / t, cfg)?;
    Ok(q.value)
}

/// Closed form of [`warschawski_envelope`] for `α(x) = c x^N`:
/// `exp(-(π/(N c)) (t^{-N} - a^{-N}))`.
pub fn monomial_envelope(c: f64, n: usize, t: f64, a: f64) -> f64 {
    let n_i = n as i32;
    (-(PI / (n as f64 * c)) * (t.powi(-n_i) - a.powi(-n_i))).exp()
}

/// Exponent data of `ln F(t) = const - Σ_{k<N} c_k t^{k-N} + λ ln t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KaiserLehnerForm {
    pub leading_exponent: usize,
    /// `c_0, …, c_{N-1}`.
    pub coefficients: Vec<f64>,
    /// Coefficient `λ` of `ln t`.
    pub log_coefficient: f64,
    /// The prefactor exponent `σ` is not determined by the profile alone.
    pub sigma: Option<f64>,
}

/// Expands `1/(r α(r)) = (1/(a_N r^{N+1})) Σ d_k r^k` and integrates term by
/// term: `c_k = (π/a_N) d_k/(N - k)`, so `c_0 = π/(N a_N)`, and
/// `λ = (π/a_N) d_N`.
pub fn kaiser_lehner_form(profile: &CuspProfile) -> Result<KaiserLehnerForm> {
    let n = profile.leading;
    let a_n = profile.leading_coefficient();
    if a_n == 0.0 {
        return Err(Error::LeadingCoefficientZero);
    }
    // α = a_N r^N (1 + Σ_{j≥1} b_j r^j).
    let b = |j: usize| profile.coefficients.get(n + j).map_or(0.0, |c| c / a_n);
    let mut d = vec![1.0];
    for k in 1..=n {
        let dk = -(1..=k).map(|j| b(j) * d[k - j]).sum::<f64>();
        d.push(dk);
    }
    let coefficients = (0..n).map(|k| PI / a_n * d[k] / (n - k) as f64).collect();
    Ok(KaiserLehnerForm { leading_exponent: n, coefficients, log_coefficient: PI / a_n * d[n], sigma: None })
}

/// An increasing modulus `F` for the class `sup F(1/|h|) |u(z+h) - u(z)| < ∞`.
#[derive(Clone)]
pub struct FHolderModulus {
    tag: String,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for FHolderModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FHolderModulus").field("tag", &self.tag).finish()
    }
}

impl FHolderModulus {
    /// Wraps `f` after checking it increases on `s = 2^k`, `k = -8..=16`, as
    /// far as it stays finite.
    pub fn new(tag: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        let tag = tag.into();
        let values: Vec<f64> = (-8..=16).map(|k| f(2f64.powi(k))).take_while(|v| v.is_finite()).collect();
        if values.len() < 2 || values.windows(2).any(|w| !(w[1] > w[0]) || !(w[0] > 0.0)) {
            return Err(Error::InvalidInput(format!("modulus {tag} is not positive and increasing")));
        }
        Ok(FHolderModulus { tag, f: Arc::new(f) })
    }

    /// `F(s) = s^p`, the classical Hölder (p < 1) or Lipschitz (p = 1) scale.
    pub fn power(p: f64) -> Result<Self> {
        FHolderModulus::new(format!("s^{p}"), move |s: f64| s.powf(p))
    }

    /// `F(s) = exp(c s²)`.
    pub fn exp_square(c: f64) -> Result<Self> {
        FHolderModulus::new(format!("exp({c} s^2)"), move |s: f64| (c * s * s).exp())
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn eval(&self, s: f64) -> f64 {
        (self.f)(s)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FHolderReport {
    pub sup_estimate: f64,
    pub ok: bool,
    pub threshold: f64,
    /// The pair attaining the supremum.
    pub worst_pair: Option<(Complex64, Complex64)>,
}

/// `max F(1/|h|) |u(z+h) - u(z)|` over the sample pairs `(z, z+h)`, compared
/// with `threshold`. Failing the threshold falsifies membership; passing it
/// proves nothing.
pub fn fholder_check(
    u: &FunctionHandle,
    modulus: &FHolderModulus,
    pairs: &[(Complex64, Complex64)],
    threshold: f64,
) -> FHolderReport {
    let mut sup = 0.0;
    let mut worst_pair = None;
    for &(z, w) in pairs {
        let h = (w - z).norm();
        if h == 0.0 {
            continue;
        }
        let diff = (u.eval(w) - u.eval(z)).norm();
        let value = if diff == 0.0 { 0.0 } else { modulus.eval(1.0 / h) * diff };
        if value > sup || value.is_nan() {
            sup = if value.is_nan() { f64::INFINITY } else { value };
            worst_pair = Some((z, w));
        }
    }
    FHolderReport { sup_estimate: sup, ok: sup < threshold, threshold, worst_pair }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_profile_matches_closed_form() {
        let p = CuspProfile::monomial(1.0, 2, 0.5).unwrap();
        let f = warschawski_envelope(&p, 0.1).unwrap();
        let exact = 3.23545240543893555e-66; // exp(-48π)
        assert!((f / exact - 1.0).abs() < 1e-10, "{f:e}");
        assert_eq!(warschawski_envelope(&p, 0.5).unwrap(), 1.0);
    }

    #[test]
    fn cubic_profile_matches_closed_form() {
        let p = CuspProfile::monomial(1.0, 3, 0.5).unwrap();
        let f = warschawski_envelope(&p, 0.25).unwrap();
        let exact = 3.40127224329672589e-26; // exp(-56π/3)
        assert!((f / exact - 1.0).abs() < 1e-10, "{f:e}");
    }

    #[test]
    fn envelope_increases() {
        let p = CuspProfile::new(vec![0.0, 0.0, 1.0, 0.5], 0.5, 1.0).unwrap();
        let v: Vec<f64> = (5..50).map(|k| warschawski_envelope(&p, 0.5 * k as f64 / 50.0).unwrap()).collect();
        assert!(v.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn profile_validation() {
        assert_eq!(CuspProfile::new(vec![0.0, 0.0, 0.0], 0.5, 1.0), Err(Error::LeadingCoefficientZero));
        assert!(CuspProfile::new(vec![0.0, 1.0], 0.5, 1.0).is_err());
        assert!(matches!(CuspProfile::new(vec![0.0, 0.0, 1.0, -4.0], 0.5, 1.0), Err(Error::AlphaNonpositive(_))));
    }

    #[test]
    fn kaiser_lehner_leading_terms() {
        let k = kaiser_lehner_form(&CuspProfile::monomial(1.0, 2, 0.5).unwrap()).unwrap();
        assert!((k.coefficients[0] - PI / 2.0).abs() < 1e-15);
        assert_eq!(k.coefficients[1], 0.0);
        assert_eq!(k.sigma, None);
        let k = kaiser_lehner_form(&CuspProfile::monomial(2.0, 2, 0.5).unwrap()).unwrap();
        assert!((k.coefficients[0] - PI / 4.0).abs() < 1e-15);
        // α = x² + x³: 1/(1+r) = 1 - r + r² gives c_1 = -π, λ = π.
        let k = kaiser_lehner_form(&CuspProfile::new(vec![0.0, 0.0, 1.0, 1.0], 0.5, 1.0).unwrap()).unwrap();
        assert!((k.coefficients[1] + PI).abs() < 1e-15 && (k.log_coefficient - PI).abs() < 1e-15);
    }

    #[test]
    fn kaiser_lehner_predicts_envelope_growth() {
        // ln F(t) + Σ c_k t^{k-N} - λ ln t is constant in t.
        let p = CuspProfile::new(vec![0.0, 0.0, 1.0, 1.0], 0.5, 1.0).unwrap();
        let k = kaiser_lehner_form(&p).unwrap();
        let rest = |t: f64| {
            let series: f64 = k.coefficients.iter().enumerate().map(|(j, c)| c * t.powi(j as i32 - 2)).sum();
            -PI * envelope_integral(&p, t).unwrap() + series - k.log_coefficient * t.ln()
        };
        let (r1, r2) = (rest(1e-3), rest(1e-4));
        assert!((r1 - r2).abs() < 5e-3, "{r1} vs {r2}");
    }

    #[test]
    fn fholder_examples() {
        let pairs: Vec<_> = (1..=30)
            .map(|k| {
                let h = 2f64.powi(-k);
                (Complex64::new(0.0, 0.0), Complex64::new(h, 0.0))
            })
            .collect();
        let id = FunctionHandle::new("z", |z| z);
        assert!(fholder_check(&id, &FHolderModulus::power(0.5).unwrap(), &pairs, 2.0).ok);
        let root = FunctionHandle::new("sqrt|z|", |z: Complex64| Complex64::new(z.norm().sqrt(), 0.0));
        let r = fholder_check(&root, &FHolderModulus::power(1.0).unwrap(), &pairs, 1e3);
        assert!(!r.ok && r.sup_estimate > 3e4);
        let env = FunctionHandle::new("envelope", |z: Complex64| {
            Complex64::new(if z.norm() == 0.0 { 0.0 } else { (-PI / (2.0 * z.norm_sqr())).exp() }, 0.0)
        });
        let far: Vec<_> = pairs.into_iter().take(4).collect();
        let r = fholder_check(&env, &FHolderModulus::exp_square(PI / 2.0).unwrap(), &far, 1.0 + 1e-9);
        assert!(r.ok && (r.sup_estimate - 1.0).abs() < 1e-9, "{r:?}");
    }
}
