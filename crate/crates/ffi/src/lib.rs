//! C interface to argus-core.
//!
//! Every entry point returns an `int32_t` status: `ARGUS_OK` (0) on success,
//! a negative code for interface misuse, or the positive core error code.
//! The message of the most recent failure on the calling thread is available
//! through [`argus_last_error_message`]. Functions are exposed through the
//! opaque `ArgusFunction` handle, released with [`argus_function_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use argus_core::blaschke::{blaschke_factor, cayley, convergence_certificate, CayleyDirection};
use argus_core::boundary::{vanishing_order, Classification};
use argus_core::cusp::{warschawski_envelope, CuspProfile};
use argus_core::factory::{build, FactorySpec};
use argus_core::profile::{jump_at, profile, semicircle_index, ZeroLedger};
use argus_core::{Error, FunctionHandle, PathSpec};
use num_complex::Complex64;

pub const ARGUS_OK: i32 = 0;
pub const ARGUS_ERR_NULL_POINTER: i32 = -1;
pub const ARGUS_ERR_PANIC: i32 = -2;
pub const ARGUS_ERR_UTF8: i32 = -3;
pub const ARGUS_ERR_BUFFER_TOO_SMALL: i32 = -4;

/// Opaque holomorphic function handle.
pub struct ArgusFunction {
    inner: FunctionHandle,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArgusComplex {
    pub re: f64,
    pub im: f64,
}

impl From<ArgusComplex> for Complex64 {
    fn from(c: ArgusComplex) -> Self {
        Complex64::new(c.re, c.im)
    }
}

impl From<Complex64> for ArgusComplex {
    fn from(c: Complex64) -> Self {
        ArgusComplex { re: c.re, im: c.im }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArgusCayleyDirection {
    /// Upper half-plane to unit disc.
    ToDisc = 0,
    /// Unit disc to upper half-plane.
    ToHalfPlane = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArgusJump {
    pub radius: f64,
    pub left: f64,
    pub right: f64,
    pub jump: f64,
    pub expected: f64,
    pub residual: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArgusCertificate {
    pub partial_sum: f64,
    pub tail_bound: f64,
    pub total: f64,
    pub elements_checked: u64,
    /// 1 when the pointwise bound held at every window element.
    pub pointwise_bound_checked: i32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArgusVanishingKind {
    Order = 0,
    InfiniteOrderUpTo = 1,
    Nonvanishing = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArgusVanishing {
    pub kind: ArgusVanishingKind,
    /// The order for `Order`, the tested ceiling for `InfiniteOrderUpTo`, 0 otherwise.
    pub order: u32,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

struct Fail(i32);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        set_error(e.to_string());
        Fail(e.code())
    }
}

fn null(what: &str) -> Fail {
    set_error(format!("null pointer: {what}"));
    Fail(ARGUS_ERR_NULL_POINTER)
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> i32 {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => ARGUS_OK,
        Ok(Err(Fail(code))) => code,
        Err(_) => {
            set_error("internal panic".into());
            ARGUS_ERR_PANIC
        }
    }
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn handle<'a>(f: *const ArgusFunction) -> Result<&'a FunctionHandle, Fail> {
    f.as_ref().map(|h| &h.inner).ok_or_else(|| null("function"))
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error(format!("{what} is not UTF-8"));
        Fail(ARGUS_ERR_UTF8)
    })
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn publish(f: FunctionHandle, out_fn: &mut *mut ArgusFunction) {
    *out_fn = Box::into_raw(Box::new(ArgusFunction { inner: f }));
}

/// Copies the last error message on this thread into `buf` as a
/// NUL-terminated string. Returns `ARGUS_ERR_BUFFER_TOO_SMALL` and writes
/// nothing when `len` is smaller than the message plus terminator.
///
/// # Safety
/// `buf` must be valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn argus_last_error_message(buf: *mut c_char, len: usize) -> i32 {
    if buf.is_null() {
        return ARGUS_ERR_NULL_POINTER;
    }
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if msg.len() + 1 > len {
            return ARGUS_ERR_BUFFER_TOO_SMALL;
        }
        ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), msg.len());
        *buf.add(msg.len()) = 0;
        ARGUS_OK
    })
}

/// Built-in function by name: `counterexample`, or `monomial:K` for `z^K`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out_fn` writable.
#[no_mangle]
pub unsafe extern "C" fn argus_function_builtin(name: *const c_char, out_fn: *mut *mut ArgusFunction) -> i32 {
    guard(|| {
        let name = text(name, "name")?;
        let slot = out(out_fn, "out_fn")?;
        let f = match name.split_once(':') {
            None if name == "counterexample" => FunctionHandle::counterexample(),
            Some(("monomial", k)) => match k.parse::<u32>() {
                Ok(k) if k >= 1 => FunctionHandle::monomial(k),
                _ => return Err(Error::InvalidInput(format!("bad monomial degree {k:?}")).into()),
            },
            _ => return Err(Error::InvalidInput(format!("unknown builtin {name:?}")).into()),
        };
        publish(f, slot);
        Ok(())
    })
}

/// Builds a function from a JSON factory spec.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out_fn` writable.
#[no_mangle]
pub unsafe extern "C" fn argus_function_from_spec(json: *const c_char, out_fn: *mut *mut ArgusFunction) -> i32 {
    guard(|| {
        let json = text(json, "json")?;
        let slot = out(out_fn, "out_fn")?;
        let spec: FactorySpec =
            serde_json::from_str(json).map_err(|e| Error::InvalidInput(format!("bad spec: {e}")))?;
        publish(build(&spec)?, slot);
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `f` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn argus_function_free(f: *mut ArgusFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// # Safety
/// `f` must be a live handle and `out_value` writable.
#[no_mangle]
pub unsafe extern "C" fn argus_function_eval(f: *const ArgusFunction, z: ArgusComplex, out_value: *mut ArgusComplex) -> i32 {
    guard(|| {
        *out(out_value, "out_value")? = handle(f)?.eval(z.into()).into();
        Ok(())
    })
}

/// Index of the image of the upper semicircle of radius `r`.
///
/// # Safety
/// `f` must be a live handle and `out_index` writable.
#[no_mangle]
pub unsafe extern "C" fn argus_semicircle_index(f: *const ArgusFunction, r: f64, tol: f64, out_index: *mut f64) -> i32 {
    guard(|| {
        *out(out_index, "out_index")? = semicircle_index(handle(f)?, r, tol)?;
        Ok(())
    })
}

/// Zero count inside the circle `|z - center| = radius` by the argument principle.
///
/// # Safety
/// `f` must be a live handle and `out_count` writable.
#[no_mangle]
pub unsafe extern "C" fn argus_circle_zero_count(
    f: *const ArgusFunction,
    center: ArgusComplex,
    radius: f64,
    tol: f64,
    out_count: *mut f64,
) -> i32 {
    guard(|| {
        let path = PathSpec::circle(center.into(), radius)?;
        *out(out_count, "out_count")? = argus_core::contour::closed_path_zero_count(handle(f)?, &path, tol)?;
        Ok(())
    })
}

/// Semicircle index at each of `len` strictly decreasing radii.
///
/// # Safety
/// `radii` and `out_values` must each hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn argus_index_profile(
    f: *const ArgusFunction,
    radii: *const f64,
    len: usize,
    tol: f64,
    delta: f64,
    out_values: *mut f64,
) -> i32 {
    guard(|| {
        let grid = slice(radii, len, "radii")?;
        if len > 0 && out_values.is_null() {
            return Err(null("out_values"));
        }
        let p = profile(handle(f)?, grid, tol, delta)?;
        for (i, v) in p.values.iter().enumerate() {
            *out_values.add(i) = *v;
        }
        Ok(())
    })
}

/// Jump of the index across radius `r`, compared with the function's declared zeros.
///
/// # Safety
/// `f` must be a live handle and `out_jump` writable.
#[no_mangle]
pub unsafe extern "C" fn argus_jump(f: *const ArgusFunction, r: f64, delta: f64, tol: f64, out_jump: *mut ArgusJump) -> i32 {
    guard(|| {
        let f = handle(f)?;
        let slot = out(out_jump, "out_jump")?;
        let j = jump_at(f, r, &ZeroLedger::from_declared(f)?, delta, tol)?;
        *slot = ArgusJump {
            radius: j.radius,
            left: j.left,
            right: j.right,
            jump: j.jump,
            expected: j.expected,
            residual: j.residual,
        };
        Ok(())
    })
}

/// Normalized factor `(-ā/|a|)(z - a)/(1 - ā z)`, or `z` when `a = 0`.
///
/// # Safety
/// `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn argus_blaschke_factor(a: ArgusComplex, z: ArgusComplex, out_value: *mut ArgusComplex) -> i32 {
    guard(|| {
        *out(out_value, "out_value")? = blaschke_factor(a.into(), z.into())?.into();
        Ok(())
    })
}

/// # Safety
/// `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn argus_cayley(z: ArgusComplex, direction: ArgusCayleyDirection, out_value: *mut ArgusComplex) -> i32 {
    guard(|| {
        let d = match direction {
            ArgusCayleyDirection::ToDisc => CayleyDirection::ToDisc,
            ArgusCayleyDirection::ToHalfPlane => CayleyDirection::ToHalfPlane,
        };
        *out(out_value, "out_value")? = cayley(z.into(), d)?.into();
        Ok(())
    })
}

/// Certificate for the cusp-example zero sequence on `|m| <= m_max`, `n <= n_max`.
///
/// # Safety
/// `out_cert` must be writable.
#[no_mangle]
pub unsafe extern "C" fn argus_blaschke_certificate(m_max: u64, n_max: u64, out_cert: *mut ArgusCertificate) -> i32 {
    guard(|| {
        let slot = out(out_cert, "out_cert")?;
        let c = convergence_certificate(m_max, n_max)?;
        *slot = ArgusCertificate {
            partial_sum: c.partial_sum,
            tail_bound: c.tail_bound,
            total: c.total(),
            elements_checked: c.elements_checked,
            pointwise_bound_checked: i32::from(c.pointwise_bound_checked),
        };
        Ok(())
    })
}

/// Riemann-map envelope at `t` for the cusp profile with Taylor
/// coefficients `coefficients[0..len]` on `(0, endpoint]`.
///
/// # Safety
/// `coefficients` must hold `len` doubles and `out_value` be writable.
#[no_mangle]
pub unsafe extern "C" fn argus_cusp_envelope(
    coefficients: *const f64,
    len: usize,
    endpoint: f64,
    t: f64,
    out_value: *mut f64,
) -> i32 {
    guard(|| {
        let c = slice(coefficients, len, "coefficients")?.to_vec();
        let slot = out(out_value, "out_value")?;
        *slot = warschawski_envelope(&CuspProfile::new(c, endpoint, f64::INFINITY)?, t)?;
        Ok(())
    })
}

/// Vanishing order at the origin along the segment from 1.
///
/// # Safety
/// `f` must be a live handle and `out_result` writable.
#[no_mangle]
pub unsafe extern "C" fn argus_vanishing_order(f: *const ArgusFunction, n_max: u32, out_result: *mut ArgusVanishing) -> i32 {
    guard(|| {
        let f = handle(f)?;
        let slot = out(out_result, "out_result")?;
        let approach = PathSpec::segment(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))?;
        let r = vanishing_order(f, Complex64::new(0.0, 0.0), &approach, n_max)?;
        *slot = match r.classification {
            Classification::Order { k } => ArgusVanishing { kind: ArgusVanishingKind::Order, order: k },
            Classification::InfiniteOrderUpTo { n_max } => {
                ArgusVanishing { kind: ArgusVanishingKind::InfiniteOrderUpTo, order: n_max }
            }
            Classification::Nonvanishing => ArgusVanishing { kind: ArgusVanishingKind::Nonvanishing, order: 0 },
        };
        Ok(())
    })
}
