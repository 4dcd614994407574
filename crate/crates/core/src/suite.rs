//! Verification suites and their machine-readable reports.
//!
//! Every suite returns a [`Report`]: a list of check records plus optional
//! tabular data. Reports carry no timestamps, so identical configurations
//! produce byte-identical output.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::blaschke::{
    assembled_counterexample, blaschke_factor, blaschke_product, convergence_certificate, cusp_product_function,
    BlaschkeSpec, CuspExampleSequence, DEFAULT_RHO,
};
use crate::boundary::{cone_certify, infinitesimal_wrt, vanishing_order, Classification};
use crate::contour::{closed_path_zero_count, index_of_image};
use crate::cusp::{kaiser_lehner_form, monomial_envelope, warschawski_envelope, CuspProfile};
use crate::error::{Error, Result};
use crate::factory::{build, jump_suite, symmetric_suite, three_radius_spec, Cofactor, FactorySpec};
use crate::function::{FunctionHandle, ZeroRecord};
use crate::geometry::{PathSpec, Region};
use crate::profile::{
    annulus_oscillations, geometric_grid, j_profile, jump_at, profile, radial_identity_check, summation_relation,
    LedgerEntry, ZeroLedger, DEFAULT_DELTA,
};

pub const SCHEMA_VERSION: u32 = 1;

/// Allowed range of the engine tolerance.
pub const TOLERANCE_RANGE: (f64, f64) = (1e-12, 1e-2);

/// `1/(√2 π)`, the constant in `I(r) = r^{-1/2}/(√2 π)` for the infinite-order example.
pub fn counterexample_profile_constant() -> f64 {
    1.0 / (2f64.sqrt() * PI)
}

/// `J(r)` of the profile `t^{-1/2}/(√2 π)`: `(2/(√2 π)) (r^{-1/2} - 1)/ln(1/r)`.
pub fn counterexample_log_average(r: f64) -> f64 {
    2.0 * counterexample_profile_constant() * (r.powf(-0.5) - 1.0) / (1.0 / r).ln()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    /// Which identity or hypothesis the check exercises.
    pub paper_anchor: String,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRecord {
    /// `|measured - expected| <= tolerance`.
    pub fn near(name: impl Into<String>, anchor: &str, measured: f64, expected: f64, tolerance: f64) -> Self {
        let pass = (measured - expected).abs() <= tolerance;
        CheckRecord { name: name.into(), paper_anchor: anchor.into(), measured, expected, tolerance, pass }
    }

    /// `measured < bound`; the tolerance field records the bound's slack.
    pub fn below(name: impl Into<String>, anchor: &str, measured: f64, bound: f64) -> Self {
        CheckRecord {
            name: name.into(),
            paper_anchor: anchor.into(),
            measured,
            expected: bound,
            tolerance: 0.0,
            pass: measured < bound,
        }
    }

    /// A boolean outcome recorded as `1` (true) or `0` (false).
    pub fn holds(name: impl Into<String>, anchor: &str, outcome: bool, wanted: bool) -> Self {
        let v = |b: bool| if b { 1.0 } else { 0.0 };
        CheckRecord {
            name: name.into(),
            paper_anchor: anchor.into(),
            measured: v(outcome),
            expected: v(wanted),
            tolerance: 0.0,
            pass: outcome == wanted,
        }
    }

    /// A check that could not be computed.
    pub fn errored(name: impl Into<String>, anchor: &str, err: &Error) -> Self {
        CheckRecord {
            name: format!("{} [error: {err}]", name.into()),
            paper_anchor: anchor.into(),
            measured: f64::NAN,
            expected: f64::NAN,
            tolerance: 0.0,
            pass: false,
        }
    }
}

/// Rows of numbers under a header.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub tolerance: f64,
    pub pass: bool,
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Table>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub data: Value,
}

impl Report {
    fn new(command: Command, tolerance: f64, checks: Vec<CheckRecord>, table: Option<Table>, data: Value) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Report { schema: SCHEMA_VERSION, command: command.name().into(), tolerance, pass, checks, table, data }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    /// The table when present, otherwise the check records; floats carry 17
    /// significant digits.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        match &self.table {
            Some(t) => {
                w.write_record(&t.columns).expect("in-memory write");
                for row in &t.rows {
                    w.write_record(row.iter().map(|x| fmt_float(*x))).expect("in-memory write");
                }
            }
            None => {
                w.write_record(["name", "paper_anchor", "measured", "expected", "tolerance", "pass"])
                    .expect("in-memory write");
                for c in &self.checks {
                    w.write_record([
                        c.name.clone(),
                        c.paper_anchor.clone(),
                        fmt_float(c.measured),
                        fmt_float(c.expected),
                        fmt_float(c.tolerance),
                        c.pass.to_string(),
                    ])
                    .expect("in-memory write");
                }
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }

    /// Failed checks, one per line.
    pub fn failures(&self) -> String {
        let mut out = String::new();
        for c in self.checks.iter().filter(|c| !c.pass) {
            let _ = writeln!(out, "FAIL {}: measured {:e}, expected {:e} (tolerance {:e})", c.name, c.measured, c.expected, c.tolerance);
        }
        out
    }
}

pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    IndexProfile,
    JumpCheck,
    SummationCheck,
    JProfile,
    BlaschkeEval,
    BlaschkeCert,
    CuspEnvelope,
    VanishingOrder,
    ConeCertify,
    VerifyAll,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::IndexProfile => "index-profile",
            Command::JumpCheck => "jump-check",
            Command::SummationCheck => "summation-check",
            Command::JProfile => "j-profile",
            Command::BlaschkeEval => "blaschke-eval",
            Command::BlaschkeCert => "blaschke-cert",
            Command::CuspEnvelope => "cusp-envelope",
            Command::VanishingOrder => "vanishing-order",
            Command::ConeCertify => "cone-certify",
            Command::VerifyAll => "verify-all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    Counterexample,
    CuspExampleProduct,
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "counterexample" => Ok(Builtin::Counterexample),
            "cusp-example-product" => Ok(Builtin::CuspExampleProduct),
            _ => Err(Error::InvalidInput(format!("unknown builtin {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSource {
    Builtin(Builtin),
    Spec(FactorySpec),
}

/// `geometric:start:end:count`, `count ≥ 2` points.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::InvalidInput(format!("grid {s:?} is not geometric:start:end:count"));
    match parts.as_slice() {
        ["geometric", a, b, n] => {
            let (a, b) = (a.parse::<f64>().map_err(|_| bad())?, b.parse::<f64>().map_err(|_| bad())?);
            let n = n.parse::<usize>().map_err(|_| bad())?;
            if n < 2 {
                return Err(bad());
            }
            geometric_grid(a, b, n - 1)
        }
        _ => Err(bad()),
    }
}

/// Everything a suite run needs.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub tolerance: f64,
    pub source: Option<FunctionSource>,
    pub grid: Option<Vec<f64>>,
    /// Blaschke window `|m| ≤ M`, `n ≤ N`.
    pub window: (u64, u64),
    pub region: Region,
    pub interval: (f64, f64),
    pub samples: usize,
    pub n_max: u32,
    /// Cusp profile coefficients `a_0, a_1, …` and endpoint `a`.
    pub alpha: Vec<f64>,
    pub endpoint: f64,
    pub inject_failure: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            tolerance: 1e-8,
            source: None,
            grid: None,
            window: (20, 20),
            region: Region::ConeInfinity,
            interval: (-0.99, 0.99),
            samples: 2001,
            n_max: 40,
            alpha: vec![0.0, 0.0, 1.0],
            endpoint: 0.5,
            inject_failure: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = TOLERANCE_RANGE;
        if !(self.tolerance >= lo && self.tolerance <= hi) {
            return Err(Error::InvalidInput(format!("tolerance {} outside [{lo:e}, {hi:e}]", self.tolerance)));
        }
        if self.window.0 < 1 || self.window.1 < 1 {
            return Err(Error::InvalidInput("window needs M, N >= 1".into()));
        }
        Ok(())
    }

    fn function(&self) -> Result<FunctionHandle> {
        match &self.source {
            None | Some(FunctionSource::Builtin(Builtin::Counterexample)) => Ok(FunctionHandle::counterexample()),
            Some(FunctionSource::Builtin(Builtin::CuspExampleProduct)) => cusp_product_function(self.window.0, self.window.1),
            Some(FunctionSource::Spec(spec)) => build(spec),
        }
    }

    fn is_counterexample(&self) -> bool {
        matches!(self.source, None | Some(FunctionSource::Builtin(Builtin::Counterexample)))
    }
}

/// Runs the configured suite. Engine failures inside a suite become failed
/// check records; configuration errors are returned.
pub fn run(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    match cfg.command {
        Command::IndexProfile => index_profile_suite(cfg),
        Command::JumpCheck => jump_suite_run(cfg),
        Command::SummationCheck => summation_suite(cfg),
        Command::JProfile => j_profile_suite(cfg),
        Command::BlaschkeEval => blaschke_eval_suite(cfg),
        Command::BlaschkeCert => blaschke_cert_suite(cfg),
        Command::CuspEnvelope => cusp_envelope_suite(cfg),
        Command::VanishingOrder => vanishing_suite(cfg),
        Command::ConeCertify => cone_suite(cfg),
        Command::VerifyAll => verify_all(cfg),
    }
}

const ANCHOR_WINDING: &str = "winding index and argument principle";
const ANCHOR_CLOSED_FORM: &str = "infinite-order example index profile";
const ANCHOR_JUMP: &str = "jump law I(r+) - I(r-) = kappa + kappa~/2";
const ANCHOR_OSCILLATION: &str = "oscillation bound |I(r) - I(r')| < 2";
const ANCHOR_TELESCOPE: &str = "telescoped jump relation with segment indices";
const ANCHOR_RADIAL: &str = "index as angular mean of r d/dr ln|f|";
const ANCHOR_DIVERGENCE: &str = "log-averaged index diverges";
const ANCHOR_CERTIFICATE: &str = "1 - |alpha|^2 < 4/(n^3+1) and summable tail";
const ANCHOR_PRODUCT: &str = "Blaschke product convergence";
const ANCHOR_ENVELOPE: &str = "Riemann map envelope at a cusp";
const ANCHOR_VANISHING: &str = "vanishing order and infinitesimal comparison";
const ANCHOR_CONE: &str = "boundary image hypothesis";

fn index_profile_suite(cfg: &RunConfig) -> Result<Report> {
    let f = cfg.function()?;
    let grid = match &cfg.grid {
        Some(g) => g.clone(),
        None => parse_grid("geometric:0.25:0.001:12")?,
    };
    let p = profile(&f, &grid, cfg.tolerance, DEFAULT_DELTA)?;
    let mut table = Table::new(&["r", "I", "err", "I_sqrt_r"]);
    let mut checks = Vec::new();
    let c = counterexample_profile_constant();
    for ((r, v), e) in p.radii.iter().zip(&p.values).zip(&p.errors) {
        table.rows.push(vec![*r, *v, *e, v * r.sqrt()]);
        if cfg.is_counterexample() {
            checks.push(CheckRecord::near(format!("I(r) sqrt(r) at r = {r}"), ANCHOR_CLOSED_FORM, v * r.sqrt(), c, 1e-6 * c));
        }
    }
    Ok(Report::new(cfg.command, cfg.tolerance, checks, Some(table), json!({ "source": p.source })))
}

fn jump_checks(fixtures: &[(String, FactorySpec, f64, Option<ZeroLedger>)], tol: f64) -> Vec<CheckRecord> {
    fixtures
        .par_iter()
        .map(|(name, spec, radius, ledger)| {
            let label = format!("jump law: {name} at r = {radius}");
            let outcome = build(spec).and_then(|f| {
                let ledger = match ledger {
                    Some(l) => l.clone(),
                    None => spec.ledger()?,
                };
                jump_at(&f, *radius, &ledger, DEFAULT_DELTA, tol)
            });
            match outcome {
                Ok(j) => CheckRecord::near(label, ANCHOR_JUMP, j.jump, j.expected, 1e-3),
                Err(e) => CheckRecord::errored(label, ANCHOR_JUMP, &e),
            }
        })
        .collect()
}

fn suite_fixtures() -> Vec<(String, FactorySpec, f64, Option<ZeroLedger>)> {
    jump_suite().into_iter().map(|f| (f.name.to_string(), f.spec, f.radius, None)).collect()
}

/// `(z - 1/2)(z + 1/2)` with a ledger that undercounts its boundary zeros.
pub fn injected_jump_fixture() -> (String, FactorySpec, f64, Option<ZeroLedger>) {
    let zeros = vec![
        ZeroRecord::at(Complex64::new(0.5, 0.0), 1).expect("valid zero"),
        ZeroRecord::at(Complex64::new(-0.5, 0.0), 1).expect("valid zero"),
    ];
    let wrong = ZeroLedger::new(vec![LedgerEntry { radius: 0.5, interior: 0, boundary: 1, boundary_distinct: 1 }])
        .expect("valid ledger");
    (
        "injected failure: miscounted boundary zeros".into(),
        FactorySpec::new(zeros, Cofactor::Constant { value: 1.0.into() }),
        0.5,
        Some(wrong),
    )
}

fn jump_suite_run(cfg: &RunConfig) -> Result<Report> {
    let fixtures = match &cfg.source {
        Some(FunctionSource::Spec(spec)) => {
            let ledger = spec.ledger()?;
            ledger.entries().iter().map(|e| ("spec".to_string(), spec.clone(), e.radius, None)).collect()
        }
        Some(FunctionSource::Builtin(_)) => {
            return Err(Error::InvalidInput("jump-check needs a factory spec or the built-in suite".into()))
        }
        None => suite_fixtures(),
    };
    let mut checks = jump_checks(&fixtures, cfg.tolerance);
    if cfg.inject_failure {
        checks.extend(jump_checks(&[injected_jump_fixture()], cfg.tolerance));
    }
    Ok(Report::new(cfg.command, cfg.tolerance, checks, None, Value::Null))
}

/// The three-radius fixture's ledger closed by an empty radius `0.1`.
pub fn three_radius_ledger() -> Result<ZeroLedger> {
    let mut e = three_radius_spec().ledger()?.entries().to_vec();
    e.push(LedgerEntry { radius: 0.1, interior: 0, boundary: 0, boundary_distinct: 0 });
    ZeroLedger::new(e)
}

fn summation_checks(spec: &FactorySpec, ledger: &ZeroLedger, tol: f64) -> (Vec<CheckRecord>, Value) {
    let n = ledger.len().saturating_sub(1);
    let label = format!("telescoped relation over {n} radii");
    match build(spec).and_then(|f| summation_relation(&f, ledger, n, DEFAULT_DELTA, tol)) {
        Ok(r) => (
            vec![CheckRecord::near(label, ANCHOR_TELESCOPE, r.residual, 0.0, 1e-3)],
            serde_json::to_value(&r).expect("serializable"),
        ),
        Err(e) => (vec![CheckRecord::errored(label, ANCHOR_TELESCOPE, &e)], Value::Null),
    }
}

fn summation_suite(cfg: &RunConfig) -> Result<Report> {
    let (spec, ledger) = match &cfg.source {
        Some(FunctionSource::Spec(spec)) => {
            let mut e = spec.ledger()?.entries().to_vec();
            let last = e.last().map_or(0.5, |x| x.radius);
            e.push(LedgerEntry { radius: 0.5 * last, interior: 0, boundary: 0, boundary_distinct: 0 });
            (spec.clone(), ZeroLedger::new(e)?)
        }
        Some(FunctionSource::Builtin(_)) => {
            return Err(Error::InvalidInput("summation-check needs a factory spec or the built-in fixture".into()))
        }
        None => (three_radius_spec(), three_radius_ledger()?),
    };
    let (checks, data) = summation_checks(&spec, &ledger, cfg.tolerance);
    Ok(Report::new(cfg.command, cfg.tolerance, checks, None, data))
}

/// Profile grid from `1` down to `4^{-8}` with `40` steps per factor of `4`.
pub fn default_j_grid() -> Result<Vec<f64>> {
    geometric_grid(1.0, 4f64.powi(-8), 320)
}

fn j_checks(f: &FunctionHandle, grid: &[f64], tol: f64, counterexample: bool) -> Result<(Vec<CheckRecord>, Table)> {
    let p = profile(f, grid, tol, DEFAULT_DELTA)?;
    let mut table = Table::new(&["r", "J", "err"]);
    let mut quarter_nodes = Vec::new();
    for (i, &r) in p.radii.iter().enumerate().skip(2).step_by(2) {
        let j = j_profile(&p, r)?;
        table.rows.push(vec![r, j.value, j.error]);
        let k = (-r.ln() / 4f64.ln()).round();
        if k >= 1.0 && (r - 4f64.powf(-k)).abs() <= 1e-12 * r {
            quarter_nodes.push((k as i32, i, j.value));
        }
    }
    let mut checks = Vec::new();
    if counterexample {
        for &(k, _, v) in &quarter_nodes {
            let exact = counterexample_log_average(4f64.powi(-k));
            checks.push(CheckRecord::near(format!("J(4^-{k}) closed form"), ANCHOR_DIVERGENCE, v, exact, 1e-4 * exact));
        }
        let increasing = quarter_nodes.windows(2).all(|w| w[1].2 > w[0].2);
        checks.push(CheckRecord::holds("J(4^-k) strictly increasing", ANCHOR_DIVERGENCE, increasing, true));
        // The growth ratio is asserted over the full range 4^-1 .. 4^-8.
        if let (Some(first), Some(last)) = (quarter_nodes.first().filter(|q| q.0 == 1), quarter_nodes.last().filter(|q| q.0 >= 8)) {
            checks.push(CheckRecord {
                name: format!("J(4^-{})/J(4^-{}) > 10", last.0, first.0),
                paper_anchor: ANCHOR_DIVERGENCE.into(),
                measured: last.2 / first.2,
                expected: 10.0,
                tolerance: 0.0,
                pass: last.2 / first.2 > 10.0,
            });
        }
    }
    Ok((checks, table))
}

fn j_profile_suite(cfg: &RunConfig) -> Result<Report> {
    let f = cfg.function()?;
    let grid = match &cfg.grid {
        Some(g) => g.clone(),
        None => default_j_grid()?,
    };
    let (checks, table) = j_checks(&f, &grid, cfg.tolerance, cfg.is_counterexample())?;
    Ok(Report::new(cfg.command, cfg.tolerance, checks, Some(table), Value::Null))
}

/// Points of the `20 × 20` lattice on `[-0.9, 0.9]²` inside `|z| ≤ 0.9`.
pub fn disc_grid() -> Vec<Complex64> {
    let mut out = Vec::new();
    for i in 0..20 {
        for j in 0..20 {
            let z = Complex64::new(-0.9 + 1.8 * i as f64 / 19.0, -0.9 + 1.8 * j as f64 / 19.0);
            if z.norm() <= 0.9 {
                out.push(z);
            }
        }
    }
    out
}

fn product_checks(m: u64, n: u64) -> Result<(Vec<CheckRecord>, Table)> {
    let spec = BlaschkeSpec::CuspWindow { m, n };
    let mut table = Table::new(&["re_z", "im_z", "re_B", "im_B", "abs_B", "bound"]);
    let mut worst: f64 = f64::NEG_INFINITY;
    let values = disc_grid()
        .par_iter()
        .map(|&z| blaschke_product(&spec, z, DEFAULT_RHO, None).map(|v| (z, v)))
        .collect::<Result<Vec<_>>>()?;
    for (z, v) in &values {
        worst = worst.max(v.value.norm() - (1.0 + v.truncation_bound));
        table.rows.push(vec![z.re, z.im, v.value.re, v.value.im, v.value.norm(), v.truncation_bound]);
    }
    let mut checks = vec![CheckRecord::below("|B(z)| - (1 + bound) on the |z| <= 0.9 grid", ANCHOR_PRODUCT, worst, 1e-15)];
    let at_zero = blaschke_product(&spec, CuspExampleSequence::alpha(1, 1), DEFAULT_RHO, None)?;
    checks.push(CheckRecord {
        name: "|B(alpha_{1,1})| within truncation bound".into(),
        paper_anchor: ANCHOR_PRODUCT.into(),
        measured: at_zero.value.norm(),
        expected: at_zero.truncation_bound,
        tolerance: 0.0,
        pass: at_zero.value.norm() <= at_zero.truncation_bound,
    });
    Ok((checks, table))
}

/// A deterministic spread of `(a, θ)` pairs with `|a| < 1`.
pub fn unimodularity_samples(count: usize) -> Vec<(Complex64, f64)> {
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    (0..count)
        .map(|k| {
            let u = (k as f64 * golden).fract();
            let v = (k as f64 * golden * golden + 0.5).fract();
            let w = (k as f64 * 0.7548776662466927).fract();
            (Complex64::from_polar(0.999 * u.sqrt(), 2.0 * PI * v), 2.0 * PI * w)
        })
        .collect()
}

fn unimodularity_check() -> CheckRecord {
    let worst = unimodularity_samples(100)
        .iter()
        .map(|&(a, t)| match blaschke_factor(a, Complex64::from_polar(1.0, t)) {
            Ok(b) => (b.norm() - 1.0).abs(),
            Err(_) => f64::INFINITY,
        })
        .fold(0.0, f64::max);
    CheckRecord::near("| |B_a(e^{it})| - 1 | over 100 factors", ANCHOR_PRODUCT, worst, 0.0, 1e-12)
}

fn blaschke_eval_suite(cfg: &RunConfig) -> Result<Report> {
    let (mut checks, table) = product_checks(cfg.window.0, cfg.window.1)?;
    checks.push(unimodularity_check());
    Ok(Report::new(cfg.command, cfg.tolerance, checks, Some(table), Value::Null))
}

fn certificate_checks(m: u64, n: u64) -> Result<(Vec<CheckRecord>, Value)> {
    let small = convergence_certificate(m, n)?;
    let big = convergence_certificate(2 * m, 2 * n)?;
    let checks = vec![
        CheckRecord::holds(
            format!("pointwise bound at all {} elements", small.elements_checked),
            ANCHOR_CERTIFICATE,
            small.pointwise_bound_checked,
            true,
        ),
        CheckRecord::below(
            "growth of certified total under window doubling",
            ANCHOR_CERTIFICATE,
            big.total() - small.total(),
            1e-12,
        ),
        CheckRecord::holds("partial sum nondecreasing under doubling", ANCHOR_CERTIFICATE, big.partial_sum >= small.partial_sum, true),
        CheckRecord::holds("tail bound nonincreasing under doubling", ANCHOR_CERTIFICATE, big.tail_bound <= small.tail_bound, true),
    ];
    Ok((checks, json!({ "certificate": small, "doubled": big })))
}

fn blaschke_cert_suite(cfg: &RunConfig) -> Result<Report> {
    let (checks, data) = certificate_checks(cfg.window.0, cfg.window.1)?;
    Ok(Report::new(cfg.command, cfg.tolerance, checks, None, data))
}

/// The ten `(t, a)` pairs used for the square-profile envelope check.
pub fn envelope_grid() -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for a in [0.3, 0.5] {
        for frac in [0.2, 0.35, 0.5, 0.7, 0.9] {
            out.push((frac * a, a));
        }
    }
    out
}

/// Coefficients of `1/(1 + Σ b_j r^j)` by the Cauchy integral on `|r| = ρ`
/// with `m` trapezoid nodes; independent of the recursive series division.
pub fn inverse_series_by_contour(b: &[f64], terms: usize, rho: f64, m: usize) -> Vec<f64> {
    (0..terms)
        .map(|k| {
            let s: Complex64 = (0..m)
                .map(|j| {
                    let w = Complex64::from_polar(rho, 2.0 * PI * j as f64 / m as f64);
                    let den = b.iter().enumerate().fold(Complex64::new(1.0, 0.0), |acc, (i, c)| acc + c * w.powu(i as u32 + 1));
                    1.0 / den / w.powu(k as u32)
                })
                .sum();
            (s / m as f64).re
        })
        .collect()
}

fn envelope_checks() -> Result<Vec<CheckRecord>> {
    let mut checks = Vec::new();
    for (t, a) in envelope_grid() {
        let p = CuspProfile::monomial(1.0, 2, a)?;
        let v = warschawski_envelope(&p, t)?;
        let exact = monomial_envelope(1.0, 2, t, a);
        checks.push(CheckRecord::near(format!("x^2 envelope at t = {t}, a = {a}"), ANCHOR_ENVELOPE, v / exact, 1.0, 1e-8));
    }
    let profiles: [(&str, Vec<f64>); 3] = [
        ("x^2 + x^3", vec![0.0, 0.0, 1.0, 1.0]),
        ("2x^2 - x^3/2 + x^4/4", vec![0.0, 0.0, 2.0, -0.5, 0.25]),
        ("x^3 + 3x^4 - x^5", vec![0.0, 0.0, 0.0, 1.0, 3.0, -1.0]),
    ];
    for (name, coeffs) in profiles {
        let p = CuspProfile::new(coeffs.clone(), 0.1, 0.2)?;
        let form = kaiser_lehner_form(&p)?;
        let n = p.leading_exponent();
        let a_n = p.leading_coefficient();
        let b: Vec<f64> = coeffs[n + 1..].iter().map(|c| c / a_n).collect();
        let d = inverse_series_by_contour(&b, n, 0.05, 256);
        for (k, dk) in d.iter().enumerate() {
            let oracle = PI / a_n * dk / (n - k) as f64;
            checks.push(CheckRecord::near(format!("{name}: c_{k} series vs contour"), ANCHOR_ENVELOPE, form.coefficients[k], oracle, 1e-10));
        }
        checks.push(CheckRecord::near(
            format!("{name}: c_0 = pi/(N a_N)"),
            ANCHOR_ENVELOPE,
            form.coefficients[0],
            PI / (n as f64 * a_n),
            1e-15,
        ));
    }
    Ok(checks)
}

fn cusp_envelope_suite(cfg: &RunConfig) -> Result<Report> {
    let p = CuspProfile::new(cfg.alpha.clone(), cfg.endpoint, f64::INFINITY)?;
    let a = p.endpoint();
    let grid = match &cfg.grid {
        Some(g) => g.clone(),
        None => geometric_grid(a, a / 10.0, 9)?,
    };
    let mut table = Table::new(&["t", "F"]);
    for &t in &grid {
        table.rows.push(vec![t, warschawski_envelope(&p, t)?]);
    }
    let form = kaiser_lehner_form(&p)?;
    let checks = vec![CheckRecord::near(
        "c_0 = pi/(N a_N)",
        ANCHOR_ENVELOPE,
        form.coefficients[0],
        PI / (p.leading_exponent() as f64 * p.leading_coefficient()),
        1e-15,
    )];
    Ok(Report::new(cfg.command, cfg.tolerance, checks, Some(table), json!({ "kaiser_lehner": form })))
}

fn radial_approach() -> Result<PathSpec> {
    PathSpec::segment(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
}

fn vanishing_suite(cfg: &RunConfig) -> Result<Report> {
    let f = cfg.function()?;
    let report = vanishing_order(&f, Complex64::new(0.0, 0.0), &radial_approach()?, cfg.n_max)?;
    let mut checks = Vec::new();
    if cfg.is_counterexample() {
        checks.push(CheckRecord::holds(
            format!("counterexample infinite order up to {}", cfg.n_max),
            ANCHOR_VANISHING,
            report.classification == Classification::InfiniteOrderUpTo { n_max: cfg.n_max },
            true,
        ));
    }
    Ok(Report::new(cfg.command, cfg.tolerance, checks, None, serde_json::to_value(&report).expect("serializable")))
}

fn cone_suite(cfg: &RunConfig) -> Result<Report> {
    let f = cfg.function()?;
    let cert = cone_certify(&f, cfg.interval, &cfg.region, cfg.samples)?;
    let checks = vec![CheckRecord::holds(format!("boundary image in {}", cfg.region), ANCHOR_CONE, cert.ok, true)];
    Ok(Report::new(cfg.command, cfg.tolerance, checks, None, serde_json::to_value(&cert).expect("serializable")))
}

fn exp_gaussian(c: f64) -> FunctionHandle {
    FunctionHandle::new(format!("exp(-{c}/|z|^2)"), move |z: Complex64| Complex64::new((-c / z.norm_sqr()).exp(), 0.0))
}

/// `exp(-π/(2|z|²))`, the square-cusp envelope as a function of `|z|`.
pub fn square_cusp_envelope() -> FunctionHandle {
    exp_gaussian(FRAC_PI_2)
}

/// Functions that do not vanish on `0.15 ≤ |z| ≤ 0.85`.
pub fn zero_free_fixtures() -> Vec<(String, FunctionHandle)> {
    let mut out = vec![
        ("exp(z)".to_string(), FunctionHandle::new("exp(z)", |z: Complex64| z.exp()).with_log_derivative(|_| Complex64::new(1.0, 0.0))),
        ("z^2".to_string(), FunctionHandle::monomial(2)),
        ("counterexample".to_string(), FunctionHandle::counterexample()),
    ];
    let specs = [
        (
            "exp((0.3+0.2i) z^2 - iz)",
            FactorySpec::new(vec![], Cofactor::ExpPoly {
                coefficients: vec![0.0.into(), Complex64::new(0.0, -1.0), Complex64::new(0.3, 0.2)],
            }),
        ),
        (
            "(z - 1.2i)(z + 1.3)",
            FactorySpec::new(
                vec![
                    ZeroRecord::at(Complex64::new(-1.3, 0.0), 1).expect("valid zero"),
                    ZeroRecord::at(Complex64::new(0.0, 1.2), 1).expect("valid zero"),
                ],
                Cofactor::Constant { value: 1.0.into() },
            ),
        ),
    ];
    for (name, spec) in specs {
        out.push((name.to_string(), build(&spec).expect("fixture builds")));
    }
    out
}

fn catch(name: &str, anchor: &str, r: Result<Vec<CheckRecord>>) -> Vec<CheckRecord> {
    r.unwrap_or_else(|e| vec![CheckRecord::errored(name, anchor, &e)])
}

fn verify_all(cfg: &RunConfig) -> Result<Report> {
    let tol = cfg.tolerance;
    let mut checks = Vec::new();

    checks.extend(catch("winding exactness", ANCHOR_WINDING, (|| {
        let mut out = Vec::new();
        for k in 1..=6u32 {
            let f = FunctionHandle::monomial(k);
            let half = index_of_image(&f, &PathSpec::semicircle(0.5)?, tol.min(1e-10))?.value;
            out.push(CheckRecord::near(format!("z^{k} over the upper semicircle"), ANCHOR_WINDING, half, k as f64 / 2.0, 1e-9));
            let full = closed_path_zero_count(&f, &PathSpec::circle(Complex64::new(0.0, 0.0), 0.5)?, 1e-9)?;
            out.push(CheckRecord::near(format!("z^{k} over the full circle"), ANCHOR_WINDING, full, k as f64, 1e-9));
        }
        Ok(out)
    })()));

    checks.extend(catch("counterexample closed form", ANCHOR_CLOSED_FORM, (|| {
        let f = FunctionHandle::counterexample();
        let radii = [0.25, 0.04, 0.01, 0.0025];
        let p = profile(&f, &radii, tol, DEFAULT_DELTA)?;
        Ok(radii
            .iter()
            .zip(&p.values)
            .map(|(&r, &v)| {
                let exact = counterexample_profile_constant() / r.sqrt();
                CheckRecord::near(format!("I({r}) = r^(-1/2)/(sqrt2 pi)"), ANCHOR_CLOSED_FORM, v, exact, 1e-6 * exact)
            })
            .collect())
    })()));

    checks.extend(jump_checks(&suite_fixtures(), tol));

    checks.extend(catch("oscillation", ANCHOR_OSCILLATION, (|| {
        let mut out = Vec::new();
        for (i, spec) in symmetric_suite().iter().enumerate() {
            let f = build(spec)?;
            for a in annulus_oscillations(&f, &spec.ledger()?, 50, 1e-3, 2.0, 1e-3, tol)? {
                out.push(CheckRecord::below(
                    format!("symmetric fixture {i}: oscillation on ({:.4}, {:.4})", a.inner, a.outer),
                    ANCHOR_OSCILLATION,
                    a.oscillation,
                    2.0 - 1e-3,
                ));
            }
        }
        Ok(out)
    })()));

    checks.extend(catch("telescoped relation", ANCHOR_TELESCOPE, (|| Ok(summation_checks(&three_radius_spec(), &three_radius_ledger()?, tol).0))()));

    checks.extend(catch("radial identity", ANCHOR_RADIAL, (|| {
        let mut out = Vec::new();
        for (name, f) in zero_free_fixtures() {
            for r in [0.2, 0.5, 0.8] {
                let c = radial_identity_check(&f, r, tol)?;
                out.push(CheckRecord::near(format!("{name} at r = {r}"), ANCHOR_RADIAL, c.residual, 0.0, 1e-5));
            }
        }
        Ok(out)
    })()));

    checks.extend(catch("log-averaged index", ANCHOR_DIVERGENCE, (|| {
        Ok(j_checks(&FunctionHandle::counterexample(), &default_j_grid()?, tol, true)?.0)
    })()));

    checks.extend(catch("Blaschke certificate", ANCHOR_CERTIFICATE, (|| Ok(certificate_checks(50, 50)?.0))()));

    checks.extend(catch("Blaschke product", ANCHOR_PRODUCT, (|| {
        let mut out = product_checks(8, 8)?.0;
        out.push(unimodularity_check());
        let v = assembled_counterexample(Complex64::i(), &BlaschkeSpec::CuspWindow { m: 8, n: 8 }, DEFAULT_RHO)?;
        out.push(CheckRecord::below("assembled |f(i)| against e^-1", ANCHOR_PRODUCT, v.value.norm(), (-1f64).exp() + 1e-15));
        Ok(out)
    })()));

    checks.extend(catch("cusp envelope", ANCHOR_ENVELOPE, envelope_checks()));

    checks.extend(catch("vanishing classification", ANCHOR_VANISHING, (|| {
        let mut out = Vec::new();
        let approach = radial_approach()?;
        let origin = Complex64::new(0.0, 0.0);
        for k in [1u32, 2, 3, 5] {
            let r = vanishing_order(&FunctionHandle::monomial(k), origin, &approach, 40)?;
            out.push(CheckRecord::holds(format!("z^{k} has order {k}"), ANCHOR_VANISHING, r.classification == Classification::Order { k }, true));
        }
        let r = vanishing_order(&FunctionHandle::counterexample(), origin, &approach, 40)?;
        out.push(CheckRecord::holds(
            "counterexample vanishes to order beyond 40",
            ANCHOR_VANISHING,
            r.classification == Classification::InfiniteOrderUpTo { n_max: 40 },
            true,
        ));
        let g = square_cusp_envelope();
        for c in [FRAC_PI_4, FRAC_PI_2 + 0.1, 2.0] {
            let one = infinitesimal_wrt(&exp_gaussian(c), &g, origin, &approach, 1)?;
            out.push(CheckRecord::holds(format!("exp(-{c:.4}/t^2) vs envelope at N = 1"), ANCHOR_VANISHING, one.holds, c > FRAC_PI_2));
            let all = infinitesimal_wrt(&exp_gaussian(c), &g, origin, &approach, 40)?;
            out.push(CheckRecord::holds(format!("exp(-{c:.4}/t^2) vs envelope for all N <= 40"), ANCHOR_VANISHING, all.holds, false));
        }
        Ok(out)
    })()));

    checks.extend(catch("negative controls", ANCHOR_CONE, (|| {
        let iz = FunctionHandle::new("iz", |z: Complex64| Complex64::i() * z);
        let cert = cone_certify(&iz, (-0.9, 0.9), &Region::ConeInfinity, 101)?;
        Ok(vec![CheckRecord::holds("iz rejected by the cone-infinity certificate", ANCHOR_CONE, cert.ok, false)])
    })()));

    if cfg.inject_failure {
        checks.extend(jump_checks(&[injected_jump_fixture()], tol));
    }
    Ok(Report::new(cfg.command, tol, checks, None, Value::Null))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_syntax() {
        let g = parse_grid("geometric:0.25:0.001:12").unwrap();
        assert_eq!(g.len(), 12);
        assert!((g[0] - 0.25).abs() < 1e-16 && (g[11] - 0.001).abs() < 1e-15);
        assert!(parse_grid("linear:0:1:3").is_err());
        assert!(parse_grid("geometric:1:0.1:1").is_err());
    }

    #[test]
    fn csv_has_seventeen_digits() {
        assert_eq!(fmt_float(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_float(1.0 / 3.0).split('e').next().unwrap().replace('.', "").len(), 17);
    }

    #[test]
    fn tolerance_range_is_enforced() {
        let mut cfg = RunConfig::new(Command::BlaschkeCert);
        cfg.tolerance = 1e-13;
        assert!(run(&cfg).is_err());
        cfg.tolerance = 0.1;
        assert!(run(&cfg).is_err());
    }

    #[test]
    fn contour_oracle_inverts_series() {
        // 1/(1 + r) = 1 - r + r² - …
        let d = inverse_series_by_contour(&[1.0], 4, 0.1, 64);
        for (k, v) in d.iter().enumerate() {
            assert!((v - (-1f64).powi(k as i32)).abs() < 1e-11);
        }
    }
}
