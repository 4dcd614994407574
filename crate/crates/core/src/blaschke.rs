//! Blaschke factors and products with certified truncation, the Cayley map,
//! and the cusp sequence `a_{m,n} = 1/(m³ - i n³)` pulled back to the disc.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{counterexample_log_derivative, counterexample_value, FunctionHandle, ZeroRecord};
use crate::geometry::{ensure_finite, Region};

/// Compact-subset radius used when the caller gives none.
pub const DEFAULT_RHO: f64 = 0.95;

/// `(z - a)/(1 - conj(a) z)`.
pub fn blaschke_factor(a: Complex64, z: Complex64) -> Result<Complex64> {
    ensure_finite(a, "zero")?;
    ensure_finite(z, "argument")?;
    if !(a.norm() < 1.0) {
        return Err(Error::InvalidInput(format!("zero {a} is not inside the unit disc")));
    }
    let den = 1.0 - a.conj() * z;
    if den.norm() < 1e-300 {
        return Err(Error::PoleAtZ(z));
    }
    Ok((z - a) / den)
}

/// `-conj(a)/|a| · B_a(z)`, or `z` when `a = 0`. The factor is positive at
/// the origin, which makes infinite products converge.
pub fn normalized_factor(a: Complex64, z: Complex64) -> Result<Complex64> {
    if a == Complex64::new(0.0, 0.0) {
        return Ok(z);
    }
    Ok(-a.conj() / a.norm() * blaschke_factor(a, z)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CayleyDirection {
    ToDisc,
    ToHalfPlane,
}

/// `ψ(z) = (z - i)/(z + i)` and its inverse `i(1 + w)/(1 - w)`.
pub fn cayley(z: Complex64, direction: CayleyDirection) -> Result<Complex64> {
    ensure_finite(z, "argument")?;
    let i = Complex64::i();
    match direction {
        CayleyDirection::ToDisc => {
            if z == -i {
                return Err(Error::PoleInput(z));
            }
            Ok((z - i) / (z + i))
        }
        CayleyDirection::ToHalfPlane => {
            if z == Complex64::new(1.0, 0.0) {
                return Err(Error::PoleInput(z));
            }
            Ok(i * (1.0 + z) / (1.0 - z))
        }
    }
}

/// The doubly indexed sequence `a_{m,n} = 1/(m³ - i n³)`, `m ∈ ℤ`, `n ≥ 1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct CuspExampleSequence;

impl CuspExampleSequence {
    /// Upper half-plane point `a_{m,n}`.
    pub fn a(m: i64, n: u64) -> Complex64 {
        let (m3, n3) = ((m as f64).powi(3), (n as f64).powi(3));
        1.0 / Complex64::new(m3, -n3)
    }

    /// `α_{m,n} = ψ(a_{m,n})` from the closed form
    /// `(1 - m⁶ - n⁶ - 2i m³)/((1 + n³)² + m⁶)`.
    pub fn alpha(m: i64, n: u64) -> Complex64 {
        let (m3, n3) = ((m as f64).powi(3), (n as f64).powi(3));
        let den = (1.0 + n3).powi(2) + m3 * m3;
        Complex64::new(1.0 - m3 * m3 - n3 * n3, -2.0 * m3) / den
    }

    /// `1 - |α_{m,n}|²` without cancellation:
    /// `[4n³(m⁶ + n⁶ + n³) + 4(n⁶ + n³)] / (m⁶ + n⁶ + 2n³ + 1)²`.
    pub fn one_minus_modulus_sq(m: i64, n: u64) -> f64 {
        let (m6, n3) = ((m as f64).powi(6), (n as f64).powi(3));
        let n6 = n3 * n3;
        let num = 4.0 * n3 * (m6 + n6 + n3) + 4.0 * (n6 + n3);
        num / (m6 + n6 + 2.0 * n3 + 1.0).powi(2)
    }

    /// `1 - |α_{m,n}|`.
    pub fn one_minus_modulus(m: i64, n: u64) -> f64 {
        let d = Self::one_minus_modulus_sq(m, n);
        d / (1.0 + (1.0 - d).max(0.0).sqrt())
    }

    /// Exact integer test of `1 - |α|² < 4/(n³ + 1)`, i.e.
    /// `[4n³(m⁶+n⁶+n³) + 4(n⁶+n³)] (n³+1) < 4 (m⁶+n⁶+2n³+1)²`.
    /// `None` when the window is too large for 128-bit arithmetic.
    pub fn bound_holds_exactly(m: i64, n: u64) -> Option<bool> {
        let m = m.unsigned_abs() as u128;
        let n = n as u128;
        let m6 = m.checked_pow(6)?;
        let n3 = n.checked_pow(3)?;
        let n6 = n3.checked_mul(n3)?;
        let lhs = 4u128
            .checked_mul(n3)?
            .checked_mul(m6.checked_add(n6)?.checked_add(n3)?)?
            .checked_add(4u128.checked_mul(n6.checked_add(n3)?)?)?
            .checked_mul(n3.checked_add(1)?)?;
        let d = m6.checked_add(n6)?.checked_add(2u128.checked_mul(n3)?)?.checked_add(1)?;
        let rhs = 4u128.checked_mul(d.checked_mul(d)?)?;
        Some(lhs < rhs)
    }

    /// Window indices in the fixed order: `n` ascending, then `|m|`, then
    /// negative before positive.
    pub fn window(m_max: u64, n_max: u64) -> impl Iterator<Item = (i64, u64)> {
        (1..=n_max).flat_map(move |n| {
            (0..=m_max as i64).flat_map(move |m| {
                let signs: &[i64] = if m == 0 { &[0] } else { &[-1, 1] };
                signs.iter().map(move |s| (s * m, n))
            })
        })
    }
}

/// `∫_0^u dv/(1 + v⁶)`.
fn sextic_primitive(u: f64) -> f64 {
    let s3 = 3f64.sqrt();
    u.atan() / 3.0
        + ((2.0 * u + s3).atan() + (2.0 * u - s3).atan()) / 6.0
        + s3 / 12.0 * ((u * u + s3 * u + 1.0) / (u * u - s3 * u + 1.0)).ln()
}

/// `H(s) = ∫_s^∞ dv/(1 + v⁶)` for `s ≥ 0`.
pub fn sextic_tail(s: f64) -> f64 {
    if s >= 3.0 {
        // Σ (-1)^k s^{-(6k+5)}/(6k+5), alternating with ratio below 1/700.
        let x = s.powi(-6);
        let mut term = s.powi(-5);
        let mut total = 0.0;
        for k in 0..12 {
            let t = term / (6 * k + 5) as f64;
            total += if k % 2 == 0 { t } else { -t };
            term *= x;
        }
        total
    } else {
        PI / 3.0 - sextic_primitive(s)
    }
}

/// Upper bound on `Σ (1 - |α_{m,n}|)` over all `(m, n)` outside
/// `|m| ≤ M, n ≤ N`. With `A = n³ + 1`, each element is at most
/// `4A/(A² + m⁶)`; summing by integral comparison gives
/// `2/N² + (8π/3)/N` for `n > N` and `8 A^{-2/3} H(M A^{-1/3})` per `n ≤ N`.
pub fn cusp_tail_bound(m_max: u64, n_max: u64) -> f64 {
    let n_tail = 2.0 / (n_max as f64).powi(2) + 8.0 * PI / 3.0 / n_max as f64;
    let m_tail: f64 = (1..=n_max)
        .map(|n| {
            let a = (n as f64).powi(3) + 1.0;
            8.0 * a.powf(-2.0 / 3.0) * sextic_tail(m_max as f64 * a.powf(-1.0 / 3.0))
        })
        .sum();
    n_tail + m_tail
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub m: u64,
    pub n: u64,
}

/// Partial sum and certified tail of `Σ (1 - |α_{m,n}|)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceCertificate {
    pub window: Window,
    pub partial_sum: f64,
    pub tail_bound: f64,
    pub pointwise_bound_checked: bool,
    pub elements_checked: u64,
    /// Largest gap between the closed-form `α` and `ψ(a)`.
    pub alpha_discrepancy: f64,
}

impl ConvergenceCertificate {
    pub fn total(&self) -> f64 {
        self.partial_sum + self.tail_bound
    }
}

/// Checks `1 - |α|² < 4/(n³+1)` exactly at every window element, compares
/// the two routes to `α`, and returns the partial sum with its tail bound.
pub fn convergence_certificate(m_max: u64, n_max: u64) -> Result<ConvergenceCertificate> {
    if m_max < 1 || n_max < 1 {
        return Err(Error::InvalidInput(format!("window needs M, N >= 1, got M = {m_max}, N = {n_max}")));
    }
    let mut partial = 0.0;
    let mut checked = 0u64;
    let mut discrepancy: f64 = 0.0;
    for (m, n) in CuspExampleSequence::window(m_max, n_max) {
        match CuspExampleSequence::bound_holds_exactly(m, n) {
            Some(true) => {}
            Some(false) => return Err(Error::BoundViolated { m, n }),
            None => return Err(Error::InvalidInput(format!("window element ({m}, {n}) overflows exact arithmetic"))),
        }
        let via_map = cayley(CuspExampleSequence::a(m, n), CayleyDirection::ToDisc)?;
        discrepancy = discrepancy.max((via_map - CuspExampleSequence::alpha(m, n)).norm());
        partial += CuspExampleSequence::one_minus_modulus(m, n);
        checked += 1;
    }
    if discrepancy > 1e-12 {
        return Err(Error::InvalidInput(format!("closed-form alpha disagrees with the Cayley image by {discrepancy:e}")));
    }
    Ok(ConvergenceCertificate {
        window: Window { m: m_max, n: n_max },
        partial_sum: partial,
        tail_bound: cusp_tail_bound(m_max, n_max),
        pointwise_bound_checked: true,
        elements_checked: checked,
        alpha_discrepancy: discrepancy,
    })
}

/// Which zeros enter a product and how its remainder is bounded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BlaschkeSpec {
    /// Finitely many zeros; no remainder.
    Finite { zeros: Vec<Complex64> },
    /// A truncated sequence with a caller-certified bound on the omitted
    /// `Σ (1 - |a_j|)`.
    Truncated { zeros: Vec<Complex64>, tail: f64 },
    /// The cusp sequence on `|m| ≤ M, n ≤ N`.
    CuspWindow { m: u64, n: u64 },
    /// The cusp sequence on the smallest square window `M = N = 2^k`
    /// (`k ≤ 12`) whose remainder bound meets the requested error.
    CuspByTail { max_error: f64 },
}

/// A truncated product value and a bound on `|B(z) - value|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProductValue {
    pub value: Complex64,
    pub truncation_bound: f64,
}

/// `exp(tail (1+ρ)/(1-ρ)) - 1`, bounding the relative effect of the omitted
/// factors on `|z| ≤ ρ`, since `|1 - b_a(z)| ≤ (1-|a|)(1+|z|)/(1-|z|)`.
pub fn remainder_bound(tail: f64, rho: f64) -> f64 {
    (tail * (1.0 + rho) / (1.0 - rho)).exp_m1()
}

fn resolve(spec: &BlaschkeSpec, rho: f64) -> Result<(Vec<Complex64>, f64)> {
    let cusp = |m: u64, n: u64| -> Vec<Complex64> {
        CuspExampleSequence::window(m, n).map(|(m, n)| CuspExampleSequence::alpha(m, n)).collect()
    };
    match spec {
        BlaschkeSpec::Finite { zeros } => Ok((zeros.clone(), 0.0)),
        BlaschkeSpec::Truncated { zeros, tail } => {
            if !(*tail >= 0.0) {
                return Err(Error::InvalidInput(format!("tail must be nonnegative, got {tail}")));
            }
            Ok((zeros.clone(), *tail))
        }
        BlaschkeSpec::CuspWindow { m, n } => {
            if *m < 1 || *n < 1 {
                return Err(Error::InvalidInput("window needs M, N >= 1".into()));
            }
            Ok((cusp(*m, *n), cusp_tail_bound(*m, *n)))
        }
        BlaschkeSpec::CuspByTail { max_error } => {
            for k in 0..=12 {
                let side = 1u64 << k;
                let tail = cusp_tail_bound(side, side);
                if remainder_bound(tail, rho) <= *max_error {
                    return Ok((cusp(side, side), tail));
                }
            }
            Err(Error::TailNotCertified {
                bound: remainder_bound(cusp_tail_bound(4096, 4096), rho),
                requested: *max_error,
            })
        }
    }
}

/// Zeros of the truncated product, in evaluation order.
pub fn product_zeros(spec: &BlaschkeSpec) -> Result<Vec<Complex64>> {
    let zeros = resolve(spec, DEFAULT_RHO)?.0;
    for a in &zeros {
        ensure_finite(*a, "zero")?;
        if !(a.norm() < 1.0) {
            return Err(Error::InvalidInput(format!("zero {a} is not inside the unit disc")));
        }
    }
    Ok(zeros)
}

fn finite_product(zeros: &[Complex64], z: Complex64) -> Result<Complex64> {
    zeros.iter().try_fold(Complex64::new(1.0, 0.0), |acc, &a| Ok(acc * normalized_factor(a, z)?))
}

/// `∏ (-conj(a)/|a|) B_a(z)` over the truncation, for `|z| ≤ ρ < 1`. Fails
/// with [`Error::TailNotCertified`] when the remainder bound exceeds
/// `max_error`.
pub fn blaschke_product(spec: &BlaschkeSpec, z: Complex64, rho: f64, max_error: Option<f64>) -> Result<ProductValue> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::InvalidInput(format!("rho must lie in (0, 1), got {rho}")));
    }
    ensure_finite(z, "argument")?;
    if z.norm() > rho {
        return Err(Error::InvalidInput(format!("|z| = {} exceeds rho = {rho}", z.norm())));
    }
    let (zeros, tail) = resolve(spec, rho)?;
    let bound = remainder_bound(tail, rho);
    if let Some(eps) = max_error {
        if bound > eps {
            return Err(Error::TailNotCertified { bound, requested: eps });
        }
    }
    for a in &zeros {
        if !(a.norm() < 1.0) {
            return Err(Error::InvalidInput(format!("zero {a} is not inside the unit disc")));
        }
    }
    Ok(ProductValue { value: finite_product(&zeros, z)?, truncation_bound: bound })
}

/// `exp(-e^{iπ/4}/√z) · G(ψ(z))` on the closed upper half-plane minus 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AssembledValue {
    pub value: Complex64,
    /// `|exp(-e^{iπ/4}/√z)|`; `|value|` never exceeds it.
    pub envelope: f64,
    /// Remainder bound of `G` at `ψ(z)`, when `|ψ(z)| ≤ ρ`.
    pub truncation_bound: Option<f64>,
}

pub fn assembled_counterexample(z: Complex64, spec: &BlaschkeSpec, rho: f64) -> Result<AssembledValue> {
    ensure_finite(z, "argument")?;
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::OriginInput);
    }
    if z.im < 0.0 {
        return Err(Error::InvalidInput(format!("{z} is below the real axis")));
    }
    let w = cayley(z, CayleyDirection::ToDisc)?;
    let (zeros, tail) = resolve(spec, rho)?;
    let g = finite_product(&zeros, w)?;
    let e = counterexample_value(z);
    let truncation_bound = (w.norm() <= rho).then(|| remainder_bound(tail, rho));
    Ok(AssembledValue { value: e * g, envelope: e.norm(), truncation_bound })
}

/// The assembled function on the window `|m| ≤ M, n ≤ N` as a handle, with
/// exact log-derivative and the window points `a_{m,n}` inside the unit disc
/// as declared zeros.
pub fn cusp_product_function(m_max: u64, n_max: u64) -> Result<FunctionHandle> {
    let spec = BlaschkeSpec::CuspWindow { m: m_max, n: n_max };
    let zeros = product_zeros(&spec)?;
    let eval = {
        let zeros = zeros.clone();
        move |z: Complex64| {
            if z == Complex64::new(0.0, 0.0) {
                return Complex64::new(0.0, 0.0);
            }
            let w = (z - Complex64::i()) / (z + Complex64::i());
            let g = zeros.iter().fold(Complex64::new(1.0, 0.0), |acc, &a| {
                acc * if a.norm() == 0.0 { w } else { -a.conj() / a.norm() * (w - a) / (1.0 - a.conj() * w) }
            });
            counterexample_value(z) * g
        }
    };
    let log_derivative = {
        let zeros = zeros.clone();
        move |z: Complex64| {
            let i = Complex64::i();
            let w = (z - i) / (z + i);
            let dw = 2.0 * i / ((z + i) * (z + i));
            let s: Complex64 = zeros
                .iter()
                .map(|&a| 1.0 / (w - a) + a.conj() / (1.0 - a.conj() * w))
                .sum();
            counterexample_log_derivative(z) + s * dw
        }
    };
    let mut declared = Vec::new();
    for (m, n) in CuspExampleSequence::window(m_max, n_max) {
        let a = CuspExampleSequence::a(m, n);
        if a.norm() < 1.0 {
            declared.push(ZeroRecord::at(a, 1)?);
        }
    }
    declared.sort_by(|x, y| y.radius().total_cmp(&x.radius()));
    FunctionHandle::new(format!("cusp example product, window {m_max}x{n_max}"), eval)
        .with_log_derivative(log_derivative)
        .with_domain(Region::UpperHalfPlane)
        .with_declared_zeros(declared)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, QuadratureConfig};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn factor_examples() {
        assert_eq!(blaschke_factor(c(0.5, 0.0), c(0.5, 0.0)).unwrap(), c(0.0, 0.0));
        assert!((blaschke_factor(c(0.5, 0.0), c(1.0, 0.0)).unwrap().norm() - 1.0).abs() < 1e-15);
        assert!((blaschke_factor(c(0.0, 0.3), c(0.0, 0.0)).unwrap() - c(0.0, -0.3)).norm() < 1e-16);
        assert!(blaschke_factor(c(1.0, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn cayley_examples() {
        assert_eq!(cayley(Complex64::i(), CayleyDirection::ToDisc).unwrap(), c(0.0, 0.0));
        assert!((cayley(c(0.0, 0.0), CayleyDirection::ToDisc).unwrap() - c(-1.0, 0.0)).norm() < 1e-16);
        let a11 = cayley(c(0.5, 0.5), CayleyDirection::ToDisc).unwrap();
        assert!((a11 - c(-0.2, -0.4)).norm() < 1e-15);
        assert_eq!(cayley(-Complex64::i(), CayleyDirection::ToDisc), Err(Error::PoleInput(-Complex64::i())));
        assert!(cayley(c(1.0, 0.0), CayleyDirection::ToHalfPlane).is_err());
    }

    #[test]
    fn sequence_closed_forms() {
        assert!((CuspExampleSequence::a(1, 1) - c(0.5, 0.5)).norm() < 1e-16);
        assert!((CuspExampleSequence::alpha(1, 1) - c(-0.2, -0.4)).norm() < 1e-16);
        assert!((CuspExampleSequence::one_minus_modulus_sq(1, 1) - 0.8).abs() < 1e-15);
        assert!((CuspExampleSequence::one_minus_modulus(1, 1) - 0.552786404500042).abs() < 1e-15);
        assert_eq!(CuspExampleSequence::alpha(0, 1), c(0.0, 0.0));
        for (m, n) in CuspExampleSequence::window(7, 7) {
            let d = 1.0 - CuspExampleSequence::alpha(m, n).norm_sqr();
            assert!((d - CuspExampleSequence::one_minus_modulus_sq(m, n)).abs() < 1e-14);
            assert!(CuspExampleSequence::a(m, n).im > 0.0);
        }
    }

    #[test]
    fn window_order() {
        let w: Vec<_> = CuspExampleSequence::window(1, 2).collect();
        assert_eq!(w, vec![(0, 1), (-1, 1), (1, 1), (0, 2), (-1, 2), (1, 2)]);
    }

    #[test]
    fn sextic_tail_matches_quadrature() {
        let cfg = QuadratureConfig { abs_tol: 1e-16, rel_tol: 1e-13, ..Default::default() };
        for s in [0.0, 0.4, 1.0, 2.5, 2.999, 3.0, 5.0, 20.0] {
            // Substituting v = s + x/(1-x) maps the tail to [0, 1).
            let q = integrate(
                |x: f64| {
                    let v = s + x / (1.0 - x);
                    1.0 / (1.0 + v.powi(6)) / (1.0 - x).powi(2)
                },
                0.0,
                1.0 - 1e-9,
                cfg,
            )
            .unwrap();
            let h = sextic_tail(s);
            assert!((h - q.value).abs() < 1e-12 * h, "s = {s}: {h} vs {}", q.value);
        }
        assert!((sextic_tail(0.0) - PI / 3.0).abs() < 1e-15);
    }

    #[test]
    fn single_element_certificate() {
        let cert = convergence_certificate(1, 1).unwrap();
        assert_eq!(cert.elements_checked, 3);
        assert!(cert.pointwise_bound_checked);
        let expected = 1.0 + 2.0 * 0.552786404500042;
        assert!((cert.partial_sum - expected).abs() < 1e-14);
    }

    #[test]
    fn finite_products() {
        let spec = BlaschkeSpec::Finite { zeros: vec![c(0.5, 0.0)] };
        assert_eq!(blaschke_product(&spec, c(0.5, 0.0), DEFAULT_RHO, None).unwrap().value, c(0.0, 0.0));
        let v = blaschke_product(&spec, c(0.0, 0.0), DEFAULT_RHO, None).unwrap();
        assert!((v.value - c(0.5, 0.0)).norm() < 1e-16 && v.truncation_bound == 0.0);
    }

    #[test]
    fn uncertifiable_tail_is_reported() {
        let spec = BlaschkeSpec::CuspWindow { m: 4, n: 4 };
        assert!(matches!(
            blaschke_product(&spec, c(0.1, 0.0), DEFAULT_RHO, Some(1e-3)),
            Err(Error::TailNotCertified { .. })
        ));
    }

    #[test]
    fn assembled_examples() {
        let spec = BlaschkeSpec::CuspWindow { m: 3, n: 3 };
        for x in [0.1, 0.01, 0.001] {
            let v = assembled_counterexample(c(x, 0.0), &spec, DEFAULT_RHO).unwrap();
            assert!(v.value.norm() <= (-1.0 / (2.0 * x).sqrt()).exp() * (1.0 + 1e-12));
        }
        let at_zero = assembled_counterexample(c(0.5, 0.5), &spec, DEFAULT_RHO).unwrap();
        assert!(at_zero.value.norm() < 1e-15);
        let at_i = assembled_counterexample(Complex64::i(), &spec, DEFAULT_RHO).unwrap();
        assert!(at_i.value.norm() <= (-1f64).exp());
        assert_eq!(assembled_counterexample(c(0.0, 0.0), &spec, DEFAULT_RHO), Err(Error::OriginInput));
    }

    #[test]
    fn product_handle_log_derivative() {
        let f = cusp_product_function(2, 2).unwrap();
        for z in [c(0.3, 0.4), c(-0.2, 0.9), c(0.7, 0.1)] {
            let exact = f.log_derivative_at(z, false).unwrap();
            let approx = f.central_difference(z) / f.eval(z);
            assert!((exact - approx).norm() < 1e-5 * exact.norm(), "{exact} vs {approx}");
        }
    }
}
