use std::ffi::{c_char, CStr, CString};
use std::ptr;

use argus_ffi::*;

fn c(re: f64, im: f64) -> ArgusComplex {
    ArgusComplex { re, im }
}

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 512];
    assert_eq!(unsafe { argus_last_error_message(buf.as_mut_ptr(), buf.len()) }, ARGUS_OK);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

fn builtin(name: &str) -> *mut ArgusFunction {
    let name = CString::new(name).unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { argus_function_builtin(name.as_ptr(), &mut f) }, ARGUS_OK);
    assert!(!f.is_null());
    f
}

#[test]
fn monomial_semicircle_index_is_half_degree() {
    for k in 1..=4 {
        let f = builtin(&format!("monomial:{k}"));
        let mut v = f64::NAN;
        assert_eq!(unsafe { argus_semicircle_index(f, 0.5, 1e-10, &mut v) }, ARGUS_OK);
        assert!((v - k as f64 / 2.0).abs() < 1e-9);
        let mut n = f64::NAN;
        assert_eq!(unsafe { argus_circle_zero_count(f, c(0.0, 0.0), 0.5, 1e-9, &mut n) }, ARGUS_OK);
        assert!((n - k as f64).abs() < 1e-9);
        unsafe { argus_function_free(f) };
    }
}

#[test]
fn counterexample_profile_through_the_abi() {
    let f = builtin("counterexample");
    let radii = [0.25, 0.04, 0.01];
    let mut out = [0.0; 3];
    assert_eq!(unsafe { argus_index_profile(f, radii.as_ptr(), 3, 1e-8, 1e-4, out.as_mut_ptr()) }, ARGUS_OK);
    let k = 1.0 / (2f64.sqrt() * std::f64::consts::PI);
    for (r, v) in radii.iter().zip(out) {
        assert!((v * r.sqrt() / k - 1.0).abs() < 1e-6);
    }
    let mut van = ArgusVanishing { kind: ArgusVanishingKind::Nonvanishing, order: 0 };
    assert_eq!(unsafe { argus_vanishing_order(f, 40, &mut van) }, ARGUS_OK);
    assert_eq!(van, ArgusVanishing { kind: ArgusVanishingKind::InfiniteOrderUpTo, order: 40 });
    unsafe { argus_function_free(f) };
}

#[test]
fn spec_handle_reports_boundary_jump() {
    let json = CString::new(
        r#"{"zeros":[{"location":[0.5,0.0],"multiplicity":1,"placement":"boundary-diameter"},
                     {"location":[-0.5,0.0],"multiplicity":1,"placement":"boundary-diameter"}],
            "cofactor":{"kind":"constant","value":[1.0,0.0]}}"#,
    )
    .unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { argus_function_from_spec(json.as_ptr(), &mut f) }, ARGUS_OK);
    let mut j = ArgusJump { radius: 0.0, left: 0.0, right: 0.0, jump: 0.0, expected: 0.0, residual: 0.0 };
    assert_eq!(unsafe { argus_jump(f, 0.5, 1e-4, 1e-8, &mut j) }, ARGUS_OK);
    assert_eq!(j.expected, 1.0);
    assert!(j.residual.abs() < 1e-3);
    unsafe { argus_function_free(f) };
}

#[test]
fn factor_cayley_and_certificate() {
    let mut w = c(0.0, 0.0);
    assert_eq!(unsafe { argus_blaschke_factor(c(0.3, 0.4), c(0.6, 0.8), &mut w) }, ARGUS_OK);
    assert!(((w.re * w.re + w.im * w.im).sqrt() - 1.0).abs() < 1e-14);
    assert_eq!(unsafe { argus_blaschke_factor(c(0.0, 0.0), c(0.25, -0.5), &mut w) }, ARGUS_OK);
    assert_eq!(w, c(0.25, -0.5));

    let mut d = c(0.0, 0.0);
    let mut back = c(0.0, 0.0);
    assert_eq!(unsafe { argus_cayley(c(0.3, 2.0), ArgusCayleyDirection::ToDisc, &mut d) }, ARGUS_OK);
    assert_eq!(unsafe { argus_cayley(d, ArgusCayleyDirection::ToHalfPlane, &mut back) }, ARGUS_OK);
    assert!((back.re - 0.3).abs() < 1e-13 && (back.im - 2.0).abs() < 1e-13);

    let mut cert = ArgusCertificate { partial_sum: 0.0, tail_bound: 0.0, total: 0.0, elements_checked: 0, pointwise_bound_checked: 0 };
    assert_eq!(unsafe { argus_blaschke_certificate(20, 20, &mut cert) }, ARGUS_OK);
    assert_eq!(cert.pointwise_bound_checked, 1);
    assert_eq!(cert.elements_checked, 41 * 20);
    assert!((cert.total - cert.partial_sum - cert.tail_bound).abs() < 1e-15);
}

#[test]
fn square_cusp_envelope_matches_closed_form() {
    let coeffs = [0.0, 0.0, 1.0];
    let (a, t) = (0.5, 0.2);
    let mut v = 0.0;
    assert_eq!(unsafe { argus_cusp_envelope(coeffs.as_ptr(), 3, a, t, &mut v) }, ARGUS_OK);
    let exact = (std::f64::consts::FRAC_PI_2 * (1.0 / (a * a) - 1.0 / (t * t))).exp();
    assert!((v / exact - 1.0).abs() < 1e-8);
}

#[test]
fn errors_carry_codes_and_messages() {
    let mut w = c(0.0, 0.0);
    let code = unsafe { argus_blaschke_factor(c(1.5, 0.0), c(0.0, 0.0), &mut w) };
    assert_eq!(code, 1);
    assert!(last_error().contains("invalid input"));

    let code = unsafe { argus_cayley(c(0.0, -1.0), ArgusCayleyDirection::ToDisc, &mut w) };
    assert_eq!(code, 14);

    assert_eq!(unsafe { argus_blaschke_factor(c(0.1, 0.0), c(0.0, 0.0), ptr::null_mut()) }, ARGUS_ERR_NULL_POINTER);
    assert_eq!(unsafe { argus_semicircle_index(ptr::null(), 0.5, 1e-8, &mut 0.0) }, ARGUS_ERR_NULL_POINTER);
    let mut f = ptr::null_mut();
    let bad = CString::new("nope").unwrap();
    assert_eq!(unsafe { argus_function_builtin(bad.as_ptr(), &mut f) }, 1);
    assert!(f.is_null());

    let mut tiny = [0 as c_char; 2];
    assert_eq!(unsafe { argus_last_error_message(tiny.as_mut_ptr(), 2) }, ARGUS_ERR_BUFFER_TOO_SMALL);
    unsafe { argus_function_free(ptr::null_mut()) };
}

#[test]
fn zero_on_path_is_reported() {
    let f = builtin("monomial:2");
    let mut v = 0.0;
    let code = unsafe { argus_circle_zero_count(f, c(0.5, 0.0), 0.5, 1e-8, &mut v) };
    assert!(code > 0, "got {code}");
    assert!(!last_error().is_empty());
    unsafe { argus_function_free(f) };
}
