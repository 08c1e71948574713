//! C ABI over the `flatcheck` library.
//!
//! Every fallible function returns a [`FlatcheckStatus`]. On failure the
//! message is available from [`flatcheck_last_error_message`] on the same
//! thread until the next call into the library. Strings returned through
//! `char **` out-parameters are owned by the caller and must be released with
//! [`flatcheck_string_free`]; chart handles are released with
//! [`flatcheck_chart_free`].

use flatcheck::algebra::Rational;
use flatcheck::arrows::{g3_compose, g3_invert, schwarzian_defect, G3Jet};
use flatcheck::catalog;
use flatcheck::field::Stencil;
use flatcheck::forms::identities::{identity_report, BackendChoice, ReportConfig, ReportError};
use flatcheck::frames::ChartSpec;
use flatcheck::io;
use flatcheck::jetcore::{compose_truncated, invert_truncated};
use flatcheck::liepair::{order_of, Order};
use num::{BigInt, ToPrimitive};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlatcheckStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    /// Malformed or semantically invalid input document or name.
    InvalidInput = 3,
    /// The computation ran but an identity residual or the sign calibration failed.
    CheckFailed = 4,
    /// An exact result does not fit the fixed-width output type.
    Overflow = 5,
    /// The jet or group element is not invertible.
    NotInvertible = 6,
    Panic = 7,
}

/// Opaque parsed chart.
pub struct FlatcheckChart {
    spec: ChartSpec,
}

/// `num / den` with `den > 0`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlatcheckRational {
    pub num: i64,
    pub den: i64,
}

/// Element `(a1, a2, a3)` of the order-three jet group of the line.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlatcheckG3 {
    pub a1: FlatcheckRational,
    pub a2: FlatcheckRational,
    pub a3: FlatcheckRational,
}

/// Report parameters; pass `NULL` for the defaults.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct FlatcheckReportOptions {
    pub tol: f64,
    pub tol2: f64,
    pub grid: u32,
    pub fd_step: f64,
    pub fd_step2: f64,
    /// 0 = automatic, 1 = exact, 2 = numeric.
    pub backend: u32,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl std::fmt::Display) {
    let text = msg.to_string().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).unwrap_or_default());
}

fn fail(status: FlatcheckStatus, msg: impl std::fmt::Display) -> FlatcheckStatus {
    set_error(msg);
    status
}

/// Runs `f`, clearing the error slot first and turning a panic into `Panic`.
fn guard(f: impl FnOnce() -> FlatcheckStatus) -> FlatcheckStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "internal panic".into());
            fail(FlatcheckStatus::Panic, msg)
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, FlatcheckStatus> {
    if p.is_null() {
        return Err(fail(FlatcheckStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(FlatcheckStatus::InvalidUtf8, "argument is not valid UTF-8"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> FlatcheckStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            FlatcheckStatus::Ok
        }
        Err(_) => fail(FlatcheckStatus::Panic, "output contains an interior NUL"),
    }
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

fn to_rational(q: &FlatcheckRational) -> Result<Rational, FlatcheckStatus> {
    if q.den == 0 {
        return Err(fail(FlatcheckStatus::InvalidInput, "zero denominator"));
    }
    Ok(Rational::new(BigInt::from(q.num), BigInt::from(q.den)))
}

fn from_rational(q: &Rational) -> Result<FlatcheckRational, FlatcheckStatus> {
    match (q.numer().to_i64(), q.denom().to_i64()) {
        (Some(num), Some(den)) => Ok(FlatcheckRational { num, den }),
        _ => Err(fail(FlatcheckStatus::Overflow, format!("{q} does not fit in 64-bit integers"))),
    }
}

fn to_g3(g: &FlatcheckG3) -> Result<G3Jet, FlatcheckStatus> {
    G3Jet::new(to_rational(&g.a1)?, to_rational(&g.a2)?, to_rational(&g.a3)?)
        .map_err(|e| fail(FlatcheckStatus::NotInvertible, e))
}

fn from_g3(g: &G3Jet) -> Result<FlatcheckG3, FlatcheckStatus> {
    Ok(FlatcheckG3 { a1: from_rational(&g.a1)?, a2: from_rational(&g.a2)?, a3: from_rational(&g.a3)? })
}

/// Message describing the last failure on this thread; empty after a success.
/// The pointer stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn flatcheck_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string produced by this library. `NULL` is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn flatcheck_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Looks up a built-in chart by name.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn flatcheck_chart_builtin(name: *const c_char, out: *mut *mut FlatcheckChart) -> FlatcheckStatus {
    guard(|| {
        if out.is_null() {
            return fail(FlatcheckStatus::NullArgument, "null output pointer");
        }
        let name = try_status!(read_str(name));
        match catalog::chart(name) {
            Ok(spec) => {
                *out = Box::into_raw(Box::new(FlatcheckChart { spec }));
                FlatcheckStatus::Ok
            }
            Err(e) => fail(FlatcheckStatus::InvalidInput, e),
        }
    })
}

/// Parses a chart document (explicit frame or `{"builtin": …}`).
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn flatcheck_chart_from_json(json: *const c_char, out: *mut *mut FlatcheckChart) -> FlatcheckStatus {
    guard(|| {
        if out.is_null() {
            return fail(FlatcheckStatus::NullArgument, "null output pointer");
        }
        let text = try_status!(read_str(json));
        match io::chart_from_str(text) {
            Ok(spec) => {
                *out = Box::into_raw(Box::new(FlatcheckChart { spec }));
                FlatcheckStatus::Ok
            }
            Err(e) => fail(FlatcheckStatus::InvalidInput, e),
        }
    })
}

/// Releases a chart handle. `NULL` is ignored.
///
/// # Safety
/// `chart` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn flatcheck_chart_free(chart: *mut FlatcheckChart) {
    if !chart.is_null() {
        drop(Box::from_raw(chart));
    }
}

/// Dimension of the chart, or 0 for `NULL`.
///
/// # Safety
/// `chart` must be `NULL` or a live handle.
#[no_mangle]
pub unsafe extern "C" fn flatcheck_chart_dim(chart: *const FlatcheckChart) -> usize {
    chart.as_ref().map_or(0, |c| c.spec.n())
}

/// Writes the residual report as JSON. Returns `CheckFailed` (with the JSON
/// still written) when an identity residual exceeds its tolerance, and also
/// `CheckFailed` (with a calibration document) when the sign calibration fails.
///
/// # Safety
/// `chart` must be a live handle, `options` `NULL` or valid, `out_json` valid.
#[no_mangle]
pub unsafe extern "C" fn flatcheck_report_json(
    chart: *const FlatcheckChart,
    options: *const FlatcheckReportOptions,
    out_json: *mut *mut c_char,
) -> FlatcheckStatus {
    guard(|| {
        let Some(chart) = chart.as_ref() else {
            return fail(FlatcheckStatus::NullArgument, "null chart");
        };
        if out_json.is_null() {
            return fail(FlatcheckStatus::NullArgument, "null output pointer");
        }
        let mut cfg = ReportConfig::default();
        if let Some(o) = options.as_ref() {
            let positive = [o.tol, o.tol2, o.fd_step, o.fd_step2].iter().all(|x| x.is_finite() && *x > 0.0);
            if !positive || o.grid < 2 {
                return fail(FlatcheckStatus::InvalidInput, "tolerances and steps must be positive and grid >= 2");
            }
            cfg = ReportConfig {
                tol: o.tol,
                tol2: o.tol2,
                grid: o.grid as usize,
                step: o.fd_step,
                nested_step: o.fd_step2,
                stencil: Stencil::Seven,
                backend: match o.backend {
                    0 => BackendChoice::Auto,
                    1 => BackendChoice::Exact,
                    2 => BackendChoice::Numeric,
                    b => return fail(FlatcheckStatus::InvalidInput, format!("unknown backend {b}")),
                },
            };
        }
        match identity_report(&chart.spec, &cfg) {
            Ok(r) => {
                let status = write_string(out_json, io::to_json(&io::report_doc(&r)));
                if status == FlatcheckStatus::Ok && !r.identities_hold() {
                    return fail(FlatcheckStatus::CheckFailed, "an identity residual exceeds its tolerance");
                }
                status
            }
            Err(ReportError::Calibration { chart, reference, plus, minus }) => {
                let doc = serde_like_calibration(&chart, reference, &plus, &minus);
                let status = write_string(out_json, doc);
                if status != FlatcheckStatus::Ok {
                    return status;
                }
                fail(FlatcheckStatus::CheckFailed, format!("sign calibration failed on `{chart}`"))
            }
            Err(e) => fail(FlatcheckStatus::InvalidInput, e),
        }
    })
}

fn serde_like_calibration(
    chart: &str,
    reference: i32,
    plus: &flatcheck::forms::identities::Residuals,
    minus: &flatcheck::forms::identities::Residuals,
) -> String {
    let p = io::to_json(&io::residuals_doc(plus));
    let m = io::to_json(&io::residuals_doc(minus));
    format!(
        "{{\"error\": \"calibration\", \"chart\": {}, \"reference_sign\": {reference}, \"plus\": {}, \"minus\": {}}}\n",
        io::to_json(&chart).trim_end(),
        p.trim_end(),
        m.trim_end()
    )
}

/// Composes two jet documents, `outer ∘ inner`, and writes the result as JSON.
///
/// # Safety
/// Both inputs must be NUL-terminated strings and `out_json` valid.
#[no_mangle]
pub unsafe extern "C" fn flatcheck_jet_compose_json(
    outer: *const c_char,
    inner: *const c_char,
    out_json: *mut *mut c_char,
) -> FlatcheckStatus {
    guard(|| {
        if out_json.is_null() {
            return fail(FlatcheckStatus::NullArgument, "null output pointer");
        }
        let parse = |p| -> Result<_, FlatcheckStatus> {
            let text = read_str(p)?;
            let v = io::parse_json(text).map_err(|e| fail(FlatcheckStatus::InvalidInput, e))?;
            io::jet_from_value(&v, "").map_err(|e| fail(FlatcheckStatus::InvalidInput, e))
        };
        let f = try_status!(parse(outer));
        let g = try_status!(parse(inner));
        match compose_truncated(&f, &g) {
            Ok(h) => write_string(out_json, io::to_json(&io::jet_doc(&h))),
            Err(e) => fail(FlatcheckStatus::InvalidInput, e),
        }
    })
}

/// Inverts a jet document.
///
/// # Safety
/// `jet` must be a NUL-terminated string and `out_json` valid.
#[no_mangle]
pub unsafe extern "C" fn flatcheck_jet_invert_json(jet: *const c_char, out_json: *mut *mut c_char) -> FlatcheckStatus {
    guard(|| {
        if out_json.is_null() {
            return fail(FlatcheckStatus::NullArgument, "null output pointer");
        }
        let text = try_status!(read_str(jet));
        let f = match io::parse_json(text).and_then(|v| io::jet_from_value(&v, "")) {
            Ok(f) => f,
            Err(e) => return fail(FlatcheckStatus::InvalidInput, e),
        };
        match invert_truncated(&f) {
            Ok(g) => write_string(out_json, io::to_json(&io::jet_doc(&g))),
            Err(e) => fail(FlatcheckStatus::NotInvertible, e),
        }
    })
}

/// `out = a · b`, the jet of `a ∘ b`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn flatcheck_g3_compose(
    a: *const FlatcheckG3,
    b: *const FlatcheckG3,
    out: *mut FlatcheckG3,
) -> FlatcheckStatus {
    guard(|| {
        let (Some(a), Some(b)) = (a.as_ref(), b.as_ref()) else {
            return fail(FlatcheckStatus::NullArgument, "null input");
        };
        if out.is_null() {
            return fail(FlatcheckStatus::NullArgument, "null output pointer");
        }
        let c = g3_compose(&try_status!(to_g3(a)), &try_status!(to_g3(b)));
        *out = try_status!(from_g3(&c));
        FlatcheckStatus::Ok
    })
}

/// Group inverse in G3(1).
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn flatcheck_g3_invert(a: *const FlatcheckG3, out: *mut FlatcheckG3) -> FlatcheckStatus {
    guard(|| {
        let Some(a) = a.as_ref() else {
            return fail(FlatcheckStatus::NullArgument, "null input");
        };
        if out.is_null() {
            return fail(FlatcheckStatus::NullArgument, "null output pointer");
        }
        *out = try_status!(from_g3(&g3_invert(&try_status!(to_g3(a)))));
        FlatcheckStatus::Ok
    })
}

/// Schwarzian defect of `a`: zero exactly on jets of Möbius maps.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn flatcheck_g3_schwarzian(a: *const FlatcheckG3, out: *mut FlatcheckRational) -> FlatcheckStatus {
    guard(|| {
        let Some(a) = a.as_ref() else {
            return fail(FlatcheckStatus::NullArgument, "null input");
        };
        if out.is_null() {
            return fail(FlatcheckStatus::NullArgument, "null output pointer");
        }
        *out = try_status!(from_rational(&schwarzian_defect(&try_status!(to_g3(a)))));
        FlatcheckStatus::Ok
    })
}

fn write_order(order: Order, out: *mut i64) -> FlatcheckStatus {
    let v = match order {
        Order::Finite(k) => k as i64,
        Order::Ineffective(_) => -1,
    };
    // SAFETY: checked non-null by the callers
    unsafe { *out = v };
    FlatcheckStatus::Ok
}

/// Order of a Lie pair document; `-1` when the pair is ineffective.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out_order` valid.
#[no_mangle]
pub unsafe extern "C" fn flatcheck_liepair_order_json(json: *const c_char, out_order: *mut i64) -> FlatcheckStatus {
    guard(|| {
        if out_order.is_null() {
            return fail(FlatcheckStatus::NullArgument, "null output pointer");
        }
        let text = try_status!(read_str(json));
        match io::lie_pair_from_str(text) {
            Ok((g, h)) => write_order(order_of(&g, &h), out_order),
            Err(e) => fail(FlatcheckStatus::InvalidInput, e),
        }
    })
}

/// Order of a built-in Lie pair; `-1` when the pair is ineffective.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out_order` valid.
#[no_mangle]
pub unsafe extern "C" fn flatcheck_liepair_builtin_order(name: *const c_char, out_order: *mut i64) -> FlatcheckStatus {
    guard(|| {
        if out_order.is_null() {
            return fail(FlatcheckStatus::NullArgument, "null output pointer");
        }
        let name = try_status!(read_str(name));
        match catalog::lie_pair(name) {
            Ok((g, h)) => write_order(order_of(&g, &h), out_order),
            Err(e) => fail(FlatcheckStatus::InvalidInput, e),
        }
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn flatcheck_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}
