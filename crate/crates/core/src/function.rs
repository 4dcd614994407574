//! Evaluatable holomorphic functions and their declared zeros.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ensure_finite, Region, BOUNDARY_TOL};

pub type ComplexMap = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// Where a zero sits relative to the upper half-disc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Placement {
    Interior,
    BoundaryDiameter,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub location: Complex64,
    pub multiplicity: u32,
    pub placement: Placement,
}

impl ZeroRecord {
    pub fn new(location: Complex64, multiplicity: u32, placement: Placement) -> Result<Self> {
        let rec = ZeroRecord { location, multiplicity, placement };
        rec.validate()?;
        Ok(rec)
    }

    /// Classifies the placement from the location using [`BOUNDARY_TOL`].
    pub fn at(location: Complex64, multiplicity: u32) -> Result<Self> {
        let placement = if location.im.abs() <= BOUNDARY_TOL {
            Placement::BoundaryDiameter
        } else {
            Placement::Interior
        };
        Self::new(location, multiplicity, placement)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite(self.location, "zero location")?;
        if self.multiplicity == 0 {
            return Err(Error::InvalidInput("multiplicity must be positive".into()));
        }
        let ok = match self.placement {
            Placement::Interior => self.location.im > BOUNDARY_TOL,
            Placement::BoundaryDiameter => self.location.im.abs() <= BOUNDARY_TOL,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "zero at {} inconsistent with placement {:?}",
                self.location, self.placement
            )))
        }
    }

    pub fn radius(&self) -> f64 {
        self.location.norm()
    }
}

/// Square root continuous on the closed upper half-plane minus the origin.
///
/// The branch cut runs along the negative imaginary axis, so arguments are
/// taken in `(-π/2, 3π/2]` and the negative real axis maps to `i√|z|`.
pub fn sqrt_upper(z: Complex64) -> Complex64 {
    let mut theta = z.im.atan2(z.re);
    if theta < -FRAC_PI_2 {
        theta += 2.0 * PI;
    }
    Complex64::from_polar(z.norm().sqrt(), 0.5 * theta)
}

/// `e^{iπ/4}`, the rotation in the exponent of the infinite-order example.
pub fn envelope_rotation() -> Complex64 {
    Complex64::from_polar(1.0, FRAC_PI_4)
}

/// `exp(-e^{iπ/4}/√z)` with the [`sqrt_upper`] branch.
pub fn counterexample_value(z: Complex64) -> Complex64 {
    (-envelope_rotation() / sqrt_upper(z)).exp()
}

/// Logarithmic derivative `(e^{iπ/4}/2) z^{-3/2}` of [`counterexample_value`].
pub fn counterexample_log_derivative(z: Complex64) -> Complex64 {
    envelope_rotation() * 0.5 / (z * sqrt_upper(z))
}

/// A holomorphic function with optional exact derivative data.
#[derive(Clone)]
pub struct FunctionHandle {
    name: String,
    evaluator: ComplexMap,
    derivative: Option<ComplexMap>,
    log_derivative: Option<ComplexMap>,
    declared_zeros: Option<Vec<ZeroRecord>>,
    domain: Region,
}

impl fmt::Debug for FunctionHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionHandle")
            .field("name", &self.name)
            .field("has_derivative", &self.derivative.is_some())
            .field("has_log_derivative", &self.log_derivative.is_some())
            .field("declared_zeros", &self.declared_zeros)
            .field("domain", &self.domain)
            .finish()
    }
}

impl FunctionHandle {
    pub fn new(name: impl Into<String>, f: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static) -> Self {
        FunctionHandle {
            name: name.into(),
            evaluator: Arc::new(f),
            derivative: None,
            log_derivative: None,
            declared_zeros: None,
            domain: Region::UpperHalfPlane,
        }
    }

    pub fn with_derivative(mut self, df: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static) -> Self {
        self.derivative = Some(Arc::new(df));
        self
    }

    /// Supplies `f'/f` directly; preferred over `f'` by the quadrature engine
    /// because it stays finite where `|f|` underflows.
    pub fn with_log_derivative(mut self, g: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static) -> Self {
        self.log_derivative = Some(Arc::new(g));
        self
    }

    pub fn with_domain(mut self, domain: Region) -> Self {
        self.domain = domain;
        self
    }

    /// Attaches a zero ledger. Each record must satisfy
    /// `|f(z)| < 1e-9 · local scale`, where the local scale is the largest
    /// modulus on a small ring around the zero.
    pub fn with_declared_zeros(mut self, zeros: Vec<ZeroRecord>) -> Result<Self> {
        for z in &zeros {
            z.validate()?;
            let value = self.eval(z.location).norm();
            let ring = 1e-3 * z.location.norm().max(1.0);
            let scale = (0..8)
                .map(|k| {
                    let p = z.location + Complex64::from_polar(ring, PI * k as f64 / 4.0);
                    self.eval(p).norm()
                })
                .fold(0.0, f64::max);
            if !(value < 1e-9 * scale) {
                return Err(Error::InvalidInput(format!(
                    "declared zero {} of {} has |f| = {value:e}",
                    z.location, self.name
                )));
            }
        }
        self.declared_zeros = Some(zeros);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> Region {
        self.domain
    }

    pub fn declared_zeros(&self) -> Option<&[ZeroRecord]> {
        self.declared_zeros.as_deref()
    }

    pub fn has_analytic_derivative(&self) -> bool {
        self.derivative.is_some() || self.log_derivative.is_some()
    }

    #[inline]
    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.evaluator)(z)
    }

    /// Central difference with step `max(1e-7, 1e-7 |z|)`. Accuracy is about
    /// `1e-7` relative for well-scaled functions and degrades near zeros.
    pub fn central_difference(&self, z: Complex64) -> Complex64 {
        let h = (1e-7 * z.norm()).max(1e-7);
        (self.eval(z + h) - self.eval(z - h)) / (2.0 * h)
    }

    /// `f'(z)`: the analytic derivative when known, otherwise the central
    /// difference if `allow_fallback`.
    pub fn derivative_at(&self, z: Complex64, allow_fallback: bool) -> Option<Complex64> {
        if let Some(df) = &self.derivative {
            return Some(df(z));
        }
        if let Some(g) = &self.log_derivative {
            return Some(g(z) * self.eval(z));
        }
        allow_fallback.then(|| self.central_difference(z))
    }

    /// `f'(z)/f(z)` from the most direct source available.
    pub fn log_derivative_at(&self, z: Complex64, allow_fallback: bool) -> Option<Complex64> {
        if let Some(g) = &self.log_derivative {
            return Some(g(z));
        }
        if let Some(df) = &self.derivative {
            return Some(df(z) / self.eval(z));
        }
        allow_fallback.then(|| self.central_difference(z) / self.eval(z))
    }

    /// `z ↦ c · f(z)`, keeping derivative data and zeros.
    pub fn scaled(&self, c: Complex64) -> FunctionHandle {
        let mut out = self.clone();
        let f = self.evaluator.clone();
        out.evaluator = Arc::new(move |z| c * f(z));
        if let Some(df) = &self.derivative {
            let df = df.clone();
            out.derivative = Some(Arc::new(move |z| c * df(z)));
        }
        out.name = format!("{}*({})", c, self.name);
        out
    }

    /// `z ↦ f(z)^k` for a positive integer `k`.
    pub fn power(&self, k: u32) -> FunctionHandle {
        let f = self.evaluator.clone();
        let mut out = FunctionHandle::new(format!("({})^{k}", self.name), move |z| f(z).powu(k))
            .with_domain(self.domain);
        if let Some(g) = &self.log_derivative {
            let g = g.clone();
            out.log_derivative = Some(Arc::new(move |z| g(z) * k as f64));
        } else if let Some(df) = &self.derivative {
            let (f, df) = (self.evaluator.clone(), df.clone());
            out.log_derivative = Some(Arc::new(move |z| df(z) / f(z) * k as f64));
        }
        out
    }

    /// `z ↦ z^k`.
    pub fn monomial(k: u32) -> FunctionHandle {
        let zeros = vec![ZeroRecord::at(Complex64::new(0.0, 0.0), k).expect("origin is a valid zero")];
        let mut h = FunctionHandle::new(format!("z^{k}"), move |z| z.powu(k))
            .with_log_derivative(move |z| k as f64 / z)
            .with_domain(Region::UpperHalfPlane);
        h.declared_zeros = Some(zeros);
        h
    }

    /// `z ↦ exp(-e^{iπ/4}/√z)`, holomorphic on the upper half-plane and
    /// vanishing to infinite order at the origin.
    pub fn counterexample() -> FunctionHandle {
        FunctionHandle::new("exp(-e^{i pi/4}/sqrt z)", counterexample_value)
            .with_log_derivative(counterexample_log_derivative)
            .with_domain(Region::UpperHalfPlane)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn sqrt_branch_is_continuous_on_upper_half_plane() {
        let neg = sqrt_upper(Complex64::new(-4.0, 0.0));
        assert_abs_diff_eq!((neg - Complex64::new(0.0, 2.0)).norm(), 0.0, epsilon = 1e-15);
        let neg_zero = sqrt_upper(Complex64::new(-4.0, -0.0));
        assert_abs_diff_eq!((neg_zero - Complex64::new(0.0, 2.0)).norm(), 0.0, epsilon = 1e-15);
        let i = sqrt_upper(Complex64::i());
        assert_abs_diff_eq!((i - envelope_rotation()).norm(), 0.0, epsilon = 1e-15);
        for k in 0..=100 {
            let z = Complex64::from_polar(0.3, PI * k as f64 / 100.0);
            let s = sqrt_upper(z);
            assert_abs_diff_eq!((s * s - z).norm(), 0.0, epsilon = 1e-15);
            assert!(s.re >= -1e-17 && s.im >= 0.0);
        }
    }

    #[test]
    fn zero_record_placement() {
        assert!(ZeroRecord::new(Complex64::new(0.5, 0.0), 1, Placement::BoundaryDiameter).is_ok());
        assert!(ZeroRecord::new(Complex64::new(0.5, 0.0), 1, Placement::Interior).is_err());
        assert!(ZeroRecord::new(Complex64::new(0.5, 0.1), 1, Placement::BoundaryDiameter).is_err());
        assert!(ZeroRecord::new(Complex64::new(0.5, 0.1), 0, Placement::Interior).is_err());
        assert_eq!(ZeroRecord::at(Complex64::new(0.0, 0.3), 2).unwrap().placement, Placement::Interior);
    }

    #[test]
    fn declared_zeros_are_checked() {
        let f = FunctionHandle::new("z^2-1/4", |z| z * z - 0.25);
        let good = vec![ZeroRecord::at(Complex64::new(0.5, 0.0), 1).unwrap()];
        assert!(f.clone().with_declared_zeros(good).is_ok());
        let bad = vec![ZeroRecord::at(Complex64::new(0.4, 0.0), 1).unwrap()];
        assert!(f.with_declared_zeros(bad).is_err());
    }

    #[test]
    fn counterexample_log_derivative_matches_difference() {
        let f = FunctionHandle::counterexample();
        for z in [Complex64::new(0.3, 0.2), Complex64::new(-0.5, 0.1), Complex64::new(0.0, 0.8)] {
            let exact = f.log_derivative_at(z, false).unwrap();
            let fd = f.central_difference(z) / f.eval(z);
            assert!((exact - fd).norm() < 1e-6 * exact.norm());
        }
    }

    #[test]
    fn fallback_is_opt_in() {
        let f = FunctionHandle::new("exp", |z: Complex64| z.exp());
        assert!(f.derivative_at(Complex64::new(0.1, 0.1), false).is_none());
        let d = f.derivative_at(Complex64::new(0.1, 0.1), true).unwrap();
        assert!((d - Complex64::new(0.1, 0.1).exp()).norm() < 1e-7);
    }
}
