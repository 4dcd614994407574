//! Test functions with prescribed zeros: `∏ (z - α_j)^{l_j} · φ(z)` with a
//! zero-free cofactor `φ`, so the zero ledger is known exactly.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::boundary::cone_certify;
use crate::error::{Error, Result};
use crate::function::{counterexample_log_derivative, counterexample_value, FunctionHandle, ZeroRecord};
use crate::geometry::Region;
use crate::profile::ZeroLedger;

/// The zero-free factor multiplying the prescribed zeros.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Cofactor {
    Constant { value: Complex64 },
    /// `exp(c_0 + c_1 z + … + c_d z^d)`.
    ExpPoly { coefficients: Vec<Complex64> },
    /// `exp(-e^{iπ/4}/√z)`, `√` continuous on the closed upper half-plane.
    CounterexampleEnvelope,
}

impl Cofactor {
    fn validate(&self) -> Result<()> {
        match self {
            Cofactor::Constant { value } if value.norm() == 0.0 || !value.norm().is_finite() => {
                Err(Error::DegenerateSpec(format!("constant cofactor {value} is not a nonzero number")))
            }
            Cofactor::ExpPoly { coefficients } if coefficients.iter().any(|c| !c.norm().is_finite()) => {
                Err(Error::DegenerateSpec("exp-poly coefficients must be finite".into()))
            }
            _ => Ok(()),
        }
    }

    fn value(&self, z: Complex64) -> Complex64 {
        match self {
            Cofactor::Constant { value } => *value,
            Cofactor::ExpPoly { coefficients } => horner(coefficients, z).exp(),
            Cofactor::CounterexampleEnvelope => counterexample_value(z),
        }
    }

    fn log_derivative(&self, z: Complex64) -> Complex64 {
        match self {
            Cofactor::Constant { .. } => Complex64::new(0.0, 0.0),
            Cofactor::ExpPoly { coefficients } => {
                let d: Vec<Complex64> =
                    coefficients.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect();
                horner(&d, z)
            }
            Cofactor::CounterexampleEnvelope => counterexample_log_derivative(z),
        }
    }

    /// Whether `φ` takes real values on the real axis.
    fn is_real(&self) -> bool {
        match self {
            Cofactor::Constant { value } => value.im == 0.0,
            Cofactor::ExpPoly { coefficients } => coefficients.iter().all(|c| c.im == 0.0),
            Cofactor::CounterexampleEnvelope => false,
        }
    }
}

fn horner(coefficients: &[Complex64], z: Complex64) -> Complex64 {
    coefficients.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorySpec {
    /// Zeros in the closed upper half-plane, listed by nonincreasing modulus.
    pub zeros: Vec<ZeroRecord>,
    pub cofactor: Cofactor,
    #[serde(default)]
    pub target_region: Option<Region>,
    /// Also place a zero at `conj(α)` for every interior zero `α`, so a real
    /// cofactor gives real boundary values.
    #[serde(default)]
    pub conjugate_reflection: bool,
}

impl FactorySpec {
    pub fn new(zeros: Vec<ZeroRecord>, cofactor: Cofactor) -> Self {
        FactorySpec { zeros, cofactor, target_region: None, conjugate_reflection: false }
    }

    /// Zeros with their reflections below the axis; boundary values are real.
    pub fn conjugate_symmetric(zeros: Vec<ZeroRecord>) -> Self {
        FactorySpec { conjugate_reflection: true, ..FactorySpec::new(zeros, Cofactor::Constant { value: 1.0.into() }) }
    }

    pub fn validate(&self) -> Result<()> {
        for z in &self.zeros {
            z.validate().map_err(|e| Error::DegenerateSpec(e.to_string()))?;
        }
        if self.zeros.windows(2).any(|w| w[1].radius() > w[0].radius()) {
            return Err(Error::DegenerateSpec("zero plan must list radii in decreasing order".into()));
        }
        for (i, a) in self.zeros.iter().enumerate() {
            if self.zeros[..i].iter().any(|b| b.location == a.location) {
                return Err(Error::DegenerateSpec(format!("zero {} listed twice", a.location)));
            }
        }
        self.cofactor.validate()
    }

    /// The exact ledger of zero counts on radii in `(0, 1)`.
    pub fn ledger(&self) -> Result<ZeroLedger> {
        self.validate()?;
        ZeroLedger::from_declared(&build(self)?)
    }

    /// Whether boundary values on the real axis are real by construction.
    pub fn has_real_boundary_values(&self) -> bool {
        let paired = self.conjugate_reflection || self.zeros.iter().all(|z| z.location.im == 0.0);
        paired && self.cofactor.is_real()
    }
}

/// Builds `∏ (z - α_j)^{l_j} · φ(z)` with log-derivative
/// `Σ l_j/(z - α_j) + φ'/φ` and the plan as declared zeros.
pub fn build(spec: &FactorySpec) -> Result<FunctionHandle> {
    spec.validate()?;
    // Reflected pairs multiply as the real quadratic z² - 2 Re α z + |α|².
    let mut linear = Vec::new();
    let mut quadratic = Vec::new();
    for z in &spec.zeros {
        let (a, l) = (z.location, z.multiplicity);
        if spec.conjugate_reflection && a.im != 0.0 {
            quadratic.push((a, l));
        } else {
            linear.push((a, l));
        }
    }
    let cofactor = spec.cofactor.clone();
    let eval = {
        let (linear, quadratic, cofactor) = (linear.clone(), quadratic.clone(), cofactor.clone());
        move |z: Complex64| {
            let mut p = cofactor.value(z);
            for &(a, l) in &linear {
                p *= (z - a).powu(l);
            }
            for &(a, l) in &quadratic {
                p *= (z * z - 2.0 * a.re * z + a.norm_sqr()).powu(l);
            }
            p
        }
    };
    let log_derivative = move |z: Complex64| {
        let mut g = cofactor.log_derivative(z);
        for &(a, l) in &linear {
            g += l as f64 / (z - a);
        }
        for &(a, l) in &quadratic {
            g += l as f64 / (z - a) + l as f64 / (z - a.conj());
        }
        g
    };
    let name = format!("factory[{} zeros, {:?}]", spec.zeros.len(), spec.cofactor);
    FunctionHandle::new(name, eval)
        .with_log_derivative(log_derivative)
        .with_domain(spec.target_region.unwrap_or(Region::UpperHalfPlane))
        .with_declared_zeros(spec.zeros.clone())
}

/// Candidate count and grid used by [`perturb_to_cone`].
#[derive(Debug, Clone, Copy)]
pub struct SearchBudget {
    pub candidates: usize,
    /// Boundary samples per cone certification.
    pub samples: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { candidates: 72 * 9, samples: 801 }
    }
}

/// Multiplies the cofactor by `exp(iθ + i b z)` over the grid
/// `θ = kπ/36`, `b ∈ {0, ±0.5, ±1, …}` until the boundary image of the
/// interval certifies into `region`. The unperturbed spec is tried first.
pub fn perturb_to_cone(spec: &FactorySpec, interval: (f64, f64), region: &Region, budget: SearchBudget) -> Result<FactorySpec> {
    if !matches!(region, Region::Cone { .. } | Region::ConeInfinity | Region::SlitPlane) {
        return Err(Error::UnsupportedRegion);
    }
    spec.validate()?;
    let base: Vec<Complex64> = match &spec.cofactor {
        Cofactor::Constant { value } => vec![value.ln()],
        Cofactor::ExpPoly { coefficients } => coefficients.clone(),
        Cofactor::CounterexampleEnvelope => {
            return Err(Error::DegenerateSpec("the envelope cofactor has no adjustable coefficients".into()))
        }
    };
    let slopes = (0..9).map(|j| if j % 2 == 0 { -0.25 * j as f64 } else { 0.25 * (j + 1) as f64 });
    let mut tried = 0;
    for b in slopes {
        for k in 0..72 {
            if tried >= budget.candidates {
                return Err(Error::BudgetExhausted(tried));
            }
            tried += 1;
            let theta = PI * k as f64 / 36.0;
            let candidate = if k == 0 && b == 0.0 {
                spec.clone()
            } else {
                let mut c = base.clone();
                c.resize(c.len().max(2), Complex64::new(0.0, 0.0));
                c[0] += Complex64::new(0.0, theta);
                c[1] += Complex64::new(0.0, b);
                FactorySpec { cofactor: Cofactor::ExpPoly { coefficients: c }, ..spec.clone() }
            };
            if cone_certify(&build(&candidate)?, interval, region, budget.samples)?.ok {
                return Ok(candidate);
            }
        }
    }
    Err(Error::BudgetExhausted(tried))
}

fn zero(re: f64, im: f64, l: u32) -> ZeroRecord {
    ZeroRecord::at(Complex64::new(re, im), l).expect("fixture zeros are valid")
}

/// A named test function with the radius whose jump it exercises.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub spec: FactorySpec,
    pub radius: f64,
}

fn exp_poly(c: &[(f64, f64)]) -> Cofactor {
    Cofactor::ExpPoly { coefficients: c.iter().map(|&(re, im)| Complex64::new(re, im)).collect() }
}

/// Fixtures covering interior simple, paired boundary simple, boundary double
/// and mixed-radius zeros.
pub fn jump_suite() -> Vec<Fixture> {
    let polar = |r: f64, t: f64, l: u32| {
        let p = Complex64::from_polar(r, t);
        zero(p.re, p.im, l)
    };
    let one = Cofactor::Constant { value: 1.0.into() };
    let fx = |name, zeros, cofactor, radius| Fixture { name, spec: FactorySpec::new(zeros, cofactor), radius };
    let sym = |name, zeros, radius| Fixture { name, spec: FactorySpec::conjugate_symmetric(zeros), radius };
    vec![
        fx("interior simple", vec![polar(0.5, PI / 3.0, 1)], exp_poly(&[(0.0, 0.0), (1.0, 0.0)]), 0.5),
        fx("interior simple, rotated cofactor", vec![polar(0.4, 2.0, 1)], exp_poly(&[(0.0, 0.3), (0.0, 0.7)]), 0.4),
        fx("interior double", vec![polar(0.3, 0.2, 2)], exp_poly(&[(0.0, 0.0), (1.0, 0.0)]), 0.3),
        fx("boundary simple pair", vec![zero(0.5, 0.0, 1), zero(-0.5, 0.0, 1)], one.clone(), 0.5),
        fx("boundary simple pair, exp cofactor", vec![zero(0.6, 0.0, 1), zero(-0.6, 0.0, 1)], exp_poly(&[(0.0, 0.0), (0.5, 0.5)]), 0.6),
        fx("boundary single", vec![zero(-0.45, 0.0, 1)], one.clone(), 0.45),
        fx("boundary double", vec![zero(0.5, 0.0, 2)], one.clone(), 0.5),
        fx("boundary double pair", vec![zero(0.35, 0.0, 2), zero(-0.35, 0.0, 1)], exp_poly(&[(0.0, 0.0), (0.0, 1.0)]), 0.35),
        fx("mixed radius", vec![polar(0.5, 1.0, 1), zero(0.5, 0.0, 1), zero(-0.5, 0.0, 2)], one.clone(), 0.5),
        fx("mixed radius, two interior", vec![polar(0.7, 0.5, 1), polar(0.7, 2.5, 1), zero(-0.7, 0.0, 1)], exp_poly(&[(0.2, 0.0), (0.3, 0.0)]), 0.7),
        sym("symmetric interior", vec![polar(0.5, 1.2, 1)], 0.5),
        sym("symmetric mixed", vec![polar(0.6, 0.8, 1), zero(0.6, 0.0, 1), zero(-0.6, 0.0, 1)], 0.6),
    ]
}

/// Conjugate-symmetric fixtures (real boundary values) with several radii.
pub fn symmetric_suite() -> Vec<FactorySpec> {
    let polar = |r: f64, t: f64, l: u32| {
        let p = Complex64::from_polar(r, t);
        zero(p.re, p.im, l)
    };
    vec![
        FactorySpec::conjugate_symmetric(vec![zero(0.5, 0.0, 1), zero(-0.5, 0.0, 1)]),
        FactorySpec::conjugate_symmetric(vec![polar(0.5, 1.2, 1)]),
        FactorySpec::conjugate_symmetric(vec![polar(0.7, 0.4, 1), zero(0.4, 0.0, 2), polar(0.2, 2.0, 1)]),
        FactorySpec::conjugate_symmetric(vec![zero(0.8, 0.0, 1), polar(0.5, 2.8, 2), zero(-0.3, 0.0, 1)]),
    ]
}

/// Zeros on radii `0.5, 0.3, 0.2`, closed by an empty radius `0.1`.
pub fn three_radius_spec() -> FactorySpec {
    FactorySpec {
        zeros: vec![
            zero(0.5, 0.0, 1),
            zero(-0.5, 0.0, 1),
            zero(0.0, 0.3, 1),
            zero(0.2 * 2.2f64.cos(), 0.2 * 2.2f64.sin(), 1),
            zero(0.2, 0.0, 1),
        ],
        cofactor: exp_poly(&[(0.0, 0.0), (1.0, 0.0)]),
        target_region: None,
        conjugate_reflection: false,
    }
}
