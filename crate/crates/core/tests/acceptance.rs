//! One test per acceptance criterion. Each prints a single PASS/FAIL line
//! with the measured quantity before asserting.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::process::Command;

use argus_core::blaschke::{blaschke_factor, blaschke_product, convergence_certificate, BlaschkeSpec, CuspExampleSequence, DEFAULT_RHO};
use argus_core::boundary::{cone_certify, infinitesimal_wrt, vanishing_order, Classification};
use argus_core::contour::closed_path_zero_count;
use argus_core::cusp::{kaiser_lehner_form, warschawski_envelope, CuspProfile};
use argus_core::factory::{build, jump_suite, symmetric_suite, three_radius_spec, Cofactor, FactorySpec};
use argus_core::profile::{
    annulus_oscillations, geometric_grid, j_profile, jump_at, profile, radial_identity_check, semicircle_index,
    summation_relation, LedgerEntry, ZeroLedger, DEFAULT_DELTA,
};
use argus_core::{FunctionHandle, PathSpec, Placement, Region, ZeroRecord};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-8;

fn report(n: u32, title: &str, pass: bool, detail: String) {
    println!("criterion {n:2} {}: {title} ({detail})", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {n} failed: {detail}");
}

fn origin() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn radial() -> PathSpec {
    PathSpec::segment(Complex64::new(1.0, 0.0), origin()).unwrap()
}

/// `1/(√2 π)`.
fn profile_constant() -> f64 {
    1.0 / (2f64.sqrt() * PI)
}

#[test]
fn criterion_01_winding_exactness() {
    let mut worst_half: f64 = 0.0;
    let mut worst_full: f64 = 0.0;
    for k in 1..=6u32 {
        let f = FunctionHandle::monomial(k);
        let half = semicircle_index(&f, 0.5, 1e-10).unwrap();
        worst_half = worst_half.max((half - k as f64 / 2.0).abs());
        let full = closed_path_zero_count(&f, &PathSpec::circle(origin(), 0.5).unwrap(), 1e-9).unwrap();
        assert_eq!(full.round() as u32, k);
        worst_full = worst_full.max((full - k as f64).abs());
    }
    report(
        1,
        "z^k semicircle index k/2, full-circle count k",
        worst_half < 1e-9 && worst_full < 1e-9,
        format!("worst semicircle error {worst_half:.2e}, worst count residual {worst_full:.2e}"),
    );
}

#[test]
fn criterion_02_counterexample_closed_form() {
    let f = FunctionHandle::counterexample();
    let radii = [0.25, 0.04, 0.01, 0.0025];
    let p = profile(&f, &radii, TOL, DEFAULT_DELTA).unwrap();
    let worst = radii
        .iter()
        .zip(&p.values)
        .map(|(r, v)| (v / (profile_constant() / r.sqrt()) - 1.0).abs())
        .fold(0.0, f64::max);
    report(2, "I(r) = r^(-1/2)/(sqrt2 pi)", worst < 1e-6, format!("worst relative error {worst:.2e}"));
}

#[test]
fn criterion_03_jump_law() {
    let suite = jump_suite();
    let mut covers_interior = false;
    let mut covers_boundary_simple_pair = false;
    let mut covers_boundary_double = false;
    let mut covers_mixed = false;
    let mut worst: f64 = 0.0;
    for fx in &suite {
        let f = build(&fx.spec).unwrap();
        let ledger = fx.spec.ledger().unwrap();
        let e = ledger.entry_at(fx.radius).unwrap();
        covers_interior |= e.interior > 0 && e.boundary == 0;
        covers_boundary_simple_pair |= e.interior == 0 && e.boundary == 2 && e.boundary_distinct == 2;
        covers_mixed |= e.interior > 0 && e.boundary > 0;
        covers_boundary_double |= fx
            .spec
            .zeros
            .iter()
            .any(|z| z.placement == Placement::BoundaryDiameter && z.multiplicity == 2);
        let j = jump_at(&f, fx.radius, &ledger, DEFAULT_DELTA, TOL).unwrap();
        assert_eq!(j.expected, e.interior as f64 + e.boundary as f64 / 2.0);
        worst = worst.max((j.jump - j.expected).abs());
    }
    let covered = suite.len() >= 10 && covers_interior && covers_boundary_simple_pair && covers_boundary_double && covers_mixed;
    report(
        3,
        "jump equals kappa + kappa~/2",
        covered && worst < 1e-3,
        format!("{} fixtures, coverage {covered}, worst residual {worst:.2e}", suite.len()),
    );
}

#[test]
fn criterion_04_oscillation_bound() {
    let mut worst: f64 = 0.0;
    let mut annuli = 0;
    for spec in symmetric_suite() {
        assert!(spec.has_real_boundary_values());
        let f = build(&spec).unwrap();
        for a in annulus_oscillations(&f, &spec.ledger().unwrap(), 50, 1e-3, 2.0, 1e-3, TOL).unwrap() {
            worst = worst.max(a.oscillation);
            annuli += 1;
        }
    }
    report(4, "oscillation in zero-free annuli below 2", worst < 2.0 - 1e-3, format!("{annuli} annuli, largest {worst:.4}"));
}

#[test]
fn criterion_05_telescoped_relation() {
    let spec = three_radius_spec();
    let mut entries = spec.ledger().unwrap().entries().to_vec();
    assert_eq!(entries.len(), 3);
    entries.push(LedgerEntry { radius: 0.1, interior: 0, boundary: 0, boundary_distinct: 0 });
    let ledger = ZeroLedger::new(entries).unwrap();
    let f = build(&spec).unwrap();
    let r = summation_relation(&f, &ledger, 3, DEFAULT_DELTA, TOL).unwrap();
    report(5, "telescoped jump relation over three radii", r.residual.abs() < 1e-3, format!("residual {:.2e}", r.residual));
}

#[test]
fn criterion_06_radial_identity() {
    let mut fixtures: Vec<FunctionHandle> = vec![
        FunctionHandle::new("exp(z)", |z: Complex64| z.exp()).with_log_derivative(|_| Complex64::new(1.0, 0.0)),
        FunctionHandle::new("exp(w z^2)", |z: Complex64| (Complex64::new(0.3, 0.2) * z * z).exp())
            .with_log_derivative(|z| 2.0 * Complex64::new(0.3, 0.2) * z),
        FunctionHandle::counterexample(),
        FunctionHandle::monomial(2),
    ];
    let outside = FactorySpec::new(
        vec![
            ZeroRecord::at(Complex64::new(-1.25, 0.0), 2).unwrap(),
            ZeroRecord::at(Complex64::new(0.4, 1.1), 1).unwrap(),
        ],
        Cofactor::Constant { value: Complex64::new(1.0, 0.0) },
    );
    fixtures.push(build(&outside).unwrap());
    let mut worst: f64 = 0.0;
    for f in &fixtures {
        for r in [0.2, 0.5, 0.8] {
            worst = worst.max(radial_identity_check(f, r, TOL).unwrap().residual.abs());
        }
    }
    report(6, "index equals angular mean of r d/dr ln|f|", worst < 1e-5, format!("15 evaluations, worst {worst:.2e}"));
}

#[test]
fn criterion_07_log_average_divergence() {
    let f = FunctionHandle::counterexample();
    let grid = geometric_grid(1.0, 4f64.powi(-8), 320).unwrap();
    let p = profile(&f, &grid, TOL, DEFAULT_DELTA).unwrap();
    let j: Vec<f64> = (1..=8).map(|k| j_profile(&p, grid[40 * k]).unwrap().value).collect();
    let increasing = j.windows(2).all(|w| w[1] > w[0]);
    let ratio = j[7] / j[0];
    let worst = (1..=8)
        .map(|k| {
            let r = 4f64.powi(-k);
            let exact = 2.0 * profile_constant() * (r.powf(-0.5) - 1.0) / (1.0 / r).ln();
            (j[k as usize - 1] / exact - 1.0).abs()
        })
        .fold(0.0, f64::max);
    report(
        7,
        "J(4^-k) increasing without bound",
        increasing && ratio > 10.0 && worst < 1e-4,
        format!("increasing {increasing}, ratio {ratio:.2}, worst closed-form error {worst:.2e}"),
    );
}

#[test]
fn criterion_08_blaschke_certificate() {
    let c = convergence_certificate(50, 50).unwrap();
    // Independent float check with margin, on top of the exact one.
    let float_ok = CuspExampleSequence::window(50, 50).all(|(m, n)| {
        let lhs = 1.0 - CuspExampleSequence::alpha(m, n).norm_sqr();
        lhs < 4.0 / ((n as f64).powi(3) + 1.0)
    });
    let d = convergence_certificate(100, 100).unwrap();
    let consistent = d.partial_sum >= c.partial_sum && d.total() <= c.total() + 1e-12;
    report(
        8,
        "pointwise bound on the window, tail consistent under doubling",
        c.pointwise_bound_checked && float_ok && consistent && c.elements_checked == 101 * 50,
        format!(
            "{} elements, totals {:.12} -> {:.12}",
            c.elements_checked,
            c.total(),
            d.total()
        ),
    );
}

#[test]
fn criterion_09_blaschke_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut unimodular: f64 = 0.0;
    for _ in 0..100 {
        let a = Complex64::from_polar(rng.gen_range(0.0..0.999), rng.gen_range(0.0..2.0 * PI));
        let z = Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI));
        unimodular = unimodular.max((blaschke_factor(a, z).unwrap().norm() - 1.0).abs());
    }
    let spec = BlaschkeSpec::CuspWindow { m: 8, n: 8 };
    let mut bounded = true;
    for i in 0..20 {
        for k in 0..20 {
            let z = Complex64::new(-0.9 + 1.8 * i as f64 / 19.0, -0.9 + 1.8 * k as f64 / 19.0);
            if z.norm() <= 0.9 {
                let v = blaschke_product(&spec, z, DEFAULT_RHO, None).unwrap();
                bounded &= v.value.norm() <= 1.0 + v.truncation_bound;
            }
        }
    }
    let at = blaschke_product(&spec, CuspExampleSequence::alpha(1, 1), DEFAULT_RHO, None).unwrap();
    let at_zero = at.value.norm() <= at.truncation_bound;
    report(
        9,
        "unimodular factors, bounded product, vanishing at alpha_{1,1}",
        unimodular < 1e-12 && bounded && at_zero,
        format!("unimodularity {unimodular:.2e}, grid bounded {bounded}, |B(alpha_11)| = {:.2e}", at.value.norm()),
    );
}

/// Power series of `1/(1 + b_1 r + b_2 r^2 + ...)` by long division.
fn reciprocal_series(b: &[f64], terms: usize) -> Vec<f64> {
    let mut d = vec![0.0; terms];
    for k in 0..terms {
        let mut s = if k == 0 { 1.0 } else { 0.0 };
        for j in 1..=k.min(b.len()) {
            s -= b[j - 1] * d[k - j];
        }
        d[k] = s;
    }
    d
}

#[test]
fn criterion_10_cusp_envelope() {
    let mut worst_env: f64 = 0.0;
    for a in [0.3, 0.5] {
        for frac in [0.2, 0.35, 0.5, 0.7, 0.9] {
            let t = frac * a;
            let p = CuspProfile::new(vec![0.0, 0.0, 1.0], a, f64::INFINITY).unwrap();
            let exact = (FRAC_PI_2 * (1.0 / (a * a) - 1.0 / (t * t))).exp();
            worst_env = worst_env.max((warschawski_envelope(&p, t).unwrap() / exact - 1.0).abs());
        }
    }
    let mut worst_kl: f64 = 0.0;
    for coeffs in [vec![0.0, 0.0, 1.0, 1.0], vec![0.0, 0.0, 2.0, -0.5, 0.25], vec![0.0, 0.0, 0.0, 1.0, 3.0, -1.0]] {
        let p = CuspProfile::new(coeffs.clone(), 0.1, 0.2).unwrap();
        let n = coeffs.iter().position(|c| *c != 0.0).unwrap();
        let b: Vec<f64> = coeffs[n + 1..].iter().map(|c| c / coeffs[n]).collect();
        let d = reciprocal_series(&b, n);
        let form = kaiser_lehner_form(&p).unwrap();
        for k in 0..n {
            let oracle = PI / coeffs[n] * d[k] / (n - k) as f64;
            worst_kl = worst_kl.max((form.coefficients[k] - oracle).abs());
        }
        worst_kl = worst_kl.max((form.coefficients[0] - PI / (n as f64 * coeffs[n])).abs());
    }
    report(
        10,
        "square-cusp envelope closed form, expansion coefficients",
        worst_env < 1e-8 && worst_kl < 1e-10,
        format!("envelope relative error {worst_env:.2e}, coefficient error {worst_kl:.2e}"),
    );
}

fn gaussian(c: f64) -> FunctionHandle {
    FunctionHandle::new("exp(-c/|z|^2)", move |z: Complex64| Complex64::new((-c / z.norm_sqr()).exp(), 0.0))
}

#[test]
fn criterion_11_vanishing_classification() {
    let mut ok = true;
    let mut notes = Vec::new();
    for k in [1u32, 2, 3, 5] {
        let c = vanishing_order(&FunctionHandle::monomial(k), origin(), &radial(), 40).unwrap().classification;
        ok &= c == Classification::Order { k };
    }
    let c = vanishing_order(&FunctionHandle::counterexample(), origin(), &radial(), 40).unwrap().classification;
    ok &= c == Classification::InfiniteOrderUpTo { n_max: 40 };
    notes.push(format!("counterexample {c:?}"));
    let envelope = gaussian(FRAC_PI_2);
    for c in [FRAC_PI_4, FRAC_PI_2 + 0.1, 2.0] {
        let first = infinitesimal_wrt(&gaussian(c), &envelope, origin(), &radial(), 1).unwrap().holds;
        let all = infinitesimal_wrt(&gaussian(c), &envelope, origin(), &radial(), 40).unwrap().holds;
        ok &= first == (c > FRAC_PI_2) && !all;
        notes.push(format!("C = {c:.4}: {first}"));
    }
    report(11, "vanishing orders and comparison with the cusp envelope", ok, notes.join(", "));
}

#[test]
fn criterion_12_negative_controls() {
    let iz = FunctionHandle::new("iz", |z: Complex64| Complex64::i() * z);
    let cert = cone_certify(&iz, (-0.9, 0.9), &Region::ConeInfinity, 101).unwrap();
    let bin = env!("CARGO_BIN_EXE_argus");
    let injected = Command::new(bin).args(["verify-all", "--inject-failure"]).output().unwrap();
    let clean = Command::new(bin).args(["verify-all", "--tolerance", "1e-8"]).output().unwrap();
    report(
        12,
        "iz rejected, injected jump violation fails verify-all",
        !cert.ok && !injected.status.success() && clean.status.success(),
        format!(
            "iz certified {}, injected exit {:?}, clean exit {:?}",
            cert.ok,
            injected.status.code(),
            clean.status.code()
        ),
    );
}
