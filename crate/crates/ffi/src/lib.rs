//! C ABI for `ratsing`.
//!
//! Graphs and groups are opaque handles owned by the caller and released
//! with the matching `*_free` function. Every function returns a
//! [`RatsingStatus`]; results come back through out-parameters, which are
//! left untouched on failure. After a failure,
//! [`ratsing_last_error_message`] describes it.
//!
//! Strings returned through `char **` out-parameters are NUL-terminated
//! UTF-8 and must be released with [`ratsing_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_traits::ToPrimitive;
use ratsing::classgrp::class_group;
use ratsing::dualgraph::{gen_ade, gen_hj, validate, DynkinType};
use ratsing::dualizing::{dualizing_report, SurfaceSpec};
use ratsing::perversity::{check_perverse, parse_strata};
use ratsing::surfhom::local_homology_rational;
use ratsing::{catalog, Coefficients, DualGraph, Error, FgAbGroup, Prime};

/// Result code of every `ratsing_*` call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RatsingStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Malformed JSON or a JSON document of the wrong shape.
    ParseError = 3,
    /// A referenced file could not be read.
    IoError = 4,
    /// No catalog graph of that name.
    UnknownGraph = 5,
    /// An argument is out of its documented range (non-prime ell,
    /// non-coprime HJ parameters, bad vertex data, ...).
    InvalidArgument = 6,
    /// The input is well formed but the operation does not apply to it
    /// (not negative definite, divisibility violated, ...).
    DomainError = 7,
    /// Graph validation failed; the message lists the failing checks.
    ValidationFailed = 8,
    /// A value does not fit the requested C integer type.
    Overflow = 9,
    /// An index is past the end.
    OutOfRange = 10,
    /// Internal error; the library state is unaffected.
    Panic = 99,
}

/// A weighted dual graph.
pub struct RatsingGraph(DualGraph);

/// A finitely generated abelian group `Z/d_1 ⊕ … ⊕ Z/d_k ⊕ Z^r`.
pub struct RatsingGroup(FgAbGroup);

struct Failure {
    status: RatsingStatus,
    message: String,
}

impl Failure {
    fn new(status: RatsingStatus, message: impl Into<String>) -> Self {
        Failure {
            status,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        use RatsingStatus as S;
        let status = match &e {
            Error::Json(_) | Error::DimensionMismatch { .. } => S::ParseError,
            Error::Io { .. } => S::IoError,
            Error::UnknownCatalogGraph(_) => S::UnknownGraph,
            Error::NotPrime(_)
            | Error::NotCoprime { .. }
            | Error::UnsupportedIndex { .. }
            | Error::NonPositive { .. }
            | Error::DuplicateVertex(_)
            | Error::UnknownVertex(_)
            | Error::SelfLoop(_)
            | Error::DuplicateEdge(..)
            | Error::DuplicatePoint(_)
            | Error::InvalidDelta { .. }
            | Error::InvalidInvariantFactors(_)
            | Error::ZeroTorsionExponent
            | Error::WrongLength(_)
            | Error::LengthMismatch { .. }
            | Error::EmptyInput => S::InvalidArgument,
            Error::ValidationFailed(_) | Error::PointValidationFailed { .. } => S::ValidationFailed,
            _ => S::DomainError,
        };
        let message = match &e {
            Error::ValidationFailed(report) => format!("{e}\n{report}"),
            Error::PointValidationFailed { report, .. } => format!("{e}\n{report}"),
            _ => e.to_string(),
        };
        Failure { status, message }
    }
}

type FfiResult<T> = Result<T, Failure>;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', "\\0")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> FfiResult<()>) -> RatsingStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RatsingStatus::Ok,
        Ok(Err(failure)) => {
            set_last_error(&failure.message);
            failure.status
        }
        Err(_) => {
            set_last_error("internal panic");
            RatsingStatus::Panic
        }
    }
}

fn non_null<T>(p: *const T, what: &str) -> FfiResult<()> {
    if p.is_null() {
        Err(Failure::new(
            RatsingStatus::NullPointer,
            format!("`{what}` is NULL"),
        ))
    } else {
        Ok(())
    }
}

/// # Safety
/// `p` is NULL or a valid NUL-terminated string.
unsafe fn input_str<'a>(p: *const c_char, what: &str) -> FfiResult<&'a str> {
    non_null(p, what)?;
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::new(RatsingStatus::InvalidUtf8, format!("`{what}` is not UTF-8")))
}

/// # Safety
/// `p` is NULL or a pointer returned by this library and not yet freed.
unsafe fn handle<'a, T>(p: *const T, what: &str) -> FfiResult<&'a T> {
    non_null(p, what)?;
    Ok(&*p)
}

/// # Safety
/// `out` is NULL or valid for writes.
unsafe fn put<T>(out: *mut T, value: T) {
    out.write(value);
}

fn c_string(s: String) -> FfiResult<*mut c_char> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure::new(RatsingStatus::InvalidArgument, "output contains a NUL byte"))
}

fn prime(ell: u64) -> FfiResult<Prime> {
    Ok(Prime::new(ell)?)
}

fn json<T: serde::Serialize>(value: &T) -> FfiResult<*mut c_char> {
    let mut text = serde_json::to_string_pretty(value).map_err(Error::from)?;
    text.push('\n');
    c_string(text)
}

fn new_graph(out: *mut *mut RatsingGraph, g: DualGraph) {
    // SAFETY: callers check `out` first.
    unsafe { put(out, Box::into_raw(Box::new(RatsingGraph(g)))) }
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn ratsing_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the most recent failure on this thread, or NULL if none.
/// Valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ratsing_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` is NULL or was returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ratsing_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a graph from its JSON form.
///
/// # Safety
/// `json` is a NUL-terminated string; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ratsing_graph_from_json(
    json: *const c_char,
    out: *mut *mut RatsingGraph,
) -> RatsingStatus {
    guard(|| {
        non_null(out, "out")?;
        let g = DualGraph::parse_json(input_str(json, "json")?)?;
        new_graph(out, g);
        Ok(())
    })
}

/// Loads a catalog graph by name (`"E8"`, `"HJ7_3"`, …). Honors
/// `RATSING_CATALOG_DIR`.
///
/// # Safety
/// `name` is a NUL-terminated string; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ratsing_graph_from_catalog(
    name: *const c_char,
    out: *mut *mut RatsingGraph,
) -> RatsingStatus {
    guard(|| {
        non_null(out, "out")?;
        let g = catalog::load(input_str(name, "name")?)?;
        new_graph(out, g);
        Ok(())
    })
}

/// Generates the ADE graph of `type` (`"A5"`, `"D4"`, `"E8"`, …).
///
/// # Safety
/// `type_name` is a NUL-terminated string; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ratsing_graph_ade(
    type_name: *const c_char,
    out: *mut *mut RatsingGraph,
) -> RatsingStatus {
    guard(|| {
        non_null(out, "out")?;
        let t: DynkinType = input_str(type_name, "type_name")?
            .parse()
            .map_err(|e: String| Failure::new(RatsingStatus::InvalidArgument, e))?;
        new_graph(out, gen_ade(t.family, t.n)?);
        Ok(())
    })
}

/// Generates the Hirzebruch–Jung chain of the cyclic quotient `1/k(1, a)`.
///
/// # Safety
/// `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ratsing_graph_hj(
    k: i64,
    a: i64,
    out: *mut *mut RatsingGraph,
) -> RatsingStatus {
    guard(|| {
        non_null(out, "out")?;
        new_graph(out, gen_hj(k, a)?);
        Ok(())
    })
}

/// Releases a graph. NULL is ignored.
///
/// # Safety
/// `graph` is NULL or was returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ratsing_graph_free(graph: *mut RatsingGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// # Safety
/// `graph` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ratsing_graph_vertex_count(
    graph: *const RatsingGraph,
    out: *mut usize,
) -> RatsingStatus {
    guard(|| {
        let g = handle(graph, "graph")?;
        non_null(out, "out")?;
        put(out, g.0.len());
        Ok(())
    })
}

/// Serializes a graph to JSON.
///
/// # Safety
/// `graph` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ratsing_graph_to_json(
    graph: *const RatsingGraph,
    out: *mut *mut c_char,
) -> RatsingStatus {
    guard(|| {
        let g = handle(graph, "graph")?;
        non_null(out, "out")?;
        put(out, c_string(g.0.to_json())?);
        Ok(())
    })
}

/// Runs the validation checks at the prime `ell`. `passed` receives the
/// overall verdict; if `report_json` is non-NULL it receives the full
/// report. A failing verdict is not an error.
///
/// # Safety
/// `graph` is a live handle; `passed` is valid for writes; `report_json`
/// is NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ratsing_graph_validate(
    graph: *const RatsingGraph,
    ell: u64,
    passed: *mut bool,
    report_json: *mut *mut c_char,
) -> RatsingStatus {
    guard(|| {
        let g = handle(graph, "graph")?;
        non_null(passed, "passed")?;
        let report = validate(&g.0, prime(ell)?);
        if !report_json.is_null() {
            put(report_json, json(&report)?);
        }
        put(passed, report.overall);
        Ok(())
    })
}

/// Computes the divisor class group of the singularity.
///
/// # Safety
/// `graph` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ratsing_class_group(
    graph: *const RatsingGraph,
    out: *mut *mut RatsingGroup,
) -> RatsingStatus {
    guard(|| {
        let g = handle(graph, "graph")?;
        non_null(out, "out")?;
        let cl = class_group(&g.0)?;
        put(out, Box::into_raw(Box::new(RatsingGroup(cl))));
        Ok(())
    })
}

/// Releases a group. NULL is ignored.
///
/// # Safety
/// `group` is NULL or was returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ratsing_group_free(group: *mut RatsingGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

/// # Safety
/// `group` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ratsing_group_free_rank(
    group: *const RatsingGroup,
    out: *mut usize,
) -> RatsingStatus {
    guard(|| {
        let g = handle(group, "group")?;
        non_null(out, "out")?;
        put(out, g.0.free_rank());
        Ok(())
    })
}

/// Number of invariant factors `d_1 | d_2 | … | d_k`, all greater than 1.
///
/// # Safety
/// `group` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ratsing_group_factor_count(
    group: *const RatsingGroup,
    out: *mut usize,
) -> RatsingStatus {
    guard(|| {
        let g = handle(group, "group")?;
        non_null(out, "out")?;
        put(out, g.0.invariant_factors().len());
        Ok(())
    })
}

/// The invariant factor at `index`. Returns `Overflow` if it does not fit
/// an `int64_t`; use [`ratsing_group_to_string`] for those.
///
/// # Safety
/// `group` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ratsing_group_factor(
    group: *const RatsingGroup,
    index: usize,
    out: *mut i64,
) -> RatsingStatus {
    guard(|| {
        let g = handle(group, "group")?;
        non_null(out, "out")?;
        let factors = g.0.invariant_factors();
        let f = factors.get(index).ok_or_else(|| {
            Failure::new(
                RatsingStatus::OutOfRange,
                format!("factor {index} of {}", factors.len()),
            )
        })?;
        let v = f
            .to_i64()
            .ok_or_else(|| Failure::new(RatsingStatus::Overflow, format!("{f} exceeds int64_t")))?;
        put(out, v);
        Ok(())
    })
}

/// Group order, or `Overflow` if the group is infinite or the order does
/// not fit an `int64_t`.
///
/// # Safety
/// `group` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ratsing_group_order(
    group: *const RatsingGroup,
    out: *mut i64,
) -> RatsingStatus {
    guard(|| {
        let g = handle(group, "group")?;
        non_null(out, "out")?;
        let order =
            g.0.order()
                .ok_or_else(|| Failure::new(RatsingStatus::Overflow, "group is infinite"))?;
        let v = order.to_i64().ok_or_else(|| {
            Failure::new(RatsingStatus::Overflow, format!("{order} exceeds int64_t"))
        })?;
        put(out, v);
        Ok(())
    })
}

/// Text form, e.g. `"Z/2 ⊕ Z/2"` or `"0"`.
///
/// # Safety
/// `group` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ratsing_group_to_string(
    group: *const RatsingGroup,
    out: *mut *mut c_char,
) -> RatsingStatus {
    guard(|| {
        let g = handle(group, "group")?;
        non_null(out, "out")?;
        put(out, c_string(g.0.to_string())?);
        Ok(())
    })
}

/// Local homology profile `H_0 … H_5` over `Z_ell` (or `Q_ell` when
/// `rational` is true), as JSON.
///
/// # Safety
/// `graph` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ratsing_homology_json(
    graph: *const RatsingGraph,
    ell: u64,
    rational: bool,
    out: *mut *mut c_char,
) -> RatsingStatus {
    guard(|| {
        let g = handle(graph, "graph")?;
        non_null(out, "out")?;
        let mode = if rational {
            Coefficients::Rational
        } else {
            Coefficients::Integral
        };
        let profile = local_homology_rational(&g.0, prime(ell)?, mode)?;
        put(out, json(&profile)?);
        Ok(())
    })
}

/// Dualizing-complex report for a surface document. String graph
/// references resolve as `catalog:NAME` or file paths.
///
/// # Safety
/// `surface_json` is a NUL-terminated string; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ratsing_dualizing_report_json(
    surface_json: *const c_char,
    out: *mut *mut c_char,
) -> RatsingStatus {
    guard(|| {
        non_null(out, "out")?;
        let spec =
            SurfaceSpec::from_json(input_str(surface_json, "surface_json")?, catalog::resolve)?;
        let report = dualizing_report(&spec)?;
        put(out, json(&report)?);
        Ok(())
    })
}

/// Perversity verdict `{left_ok, right_ok, perverse}` for a strata
/// document, as JSON.
///
/// # Safety
/// `strata_json` is a NUL-terminated string; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ratsing_perversity_json(
    strata_json: *const c_char,
    out: *mut *mut c_char,
) -> RatsingStatus {
    guard(|| {
        non_null(out, "out")?;
        let strata = parse_strata(input_str(strata_json, "strata_json")?)?;
        let verdict = check_perverse(&strata)?;
        put(out, json(&verdict)?);
        Ok(())
    })
}
