//! C ABI for the `multibracket` crate.
//!
//! Objects cross the boundary as opaque handles created by `*_from_json`,
//! `mb_semigroup_gen_se`, `mb_expand` and friends, and released with the
//! matching `*_free`. Every fallible function returns an [`MbStatus`]; on
//! anything but `MB_OK` a description is available from
//! [`mb_last_error_message`] on the same thread. Strings handed out by the
//! library must be released with [`mb_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{self, AssertUnwindSafe};
use std::ptr;

use multibracket::expansion::{s_expand, zero_reduce, ExpandedAlgebra};
use multibracket::formats;
use multibracket::realization::{extract_constants, verify_identity, MatrixRep};
use multibracket::semigroup::{gen_se, Semigroup};
use multibracket::{Error, MultiAlgebra};

/// A validated finite Abelian semigroup.
pub struct MbSemigroup(Semigroup);

/// A multialgebra given by its structure constants.
pub struct MbAlgebra(MultiAlgebra);

/// An S-expanded algebra together with its semigroup and pair basis.
pub struct MbExpanded(ExpandedAlgebra);

/// A list of square rational matrices.
pub struct MbRep(MatrixRep);

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MbStatus {
    MbOk = 0,
    /// A check ran and did not hold.
    MbFail = 1,
    MbNullPointer = 2,
    MbInvalidUtf8 = 3,
    /// Malformed JSON or a file that does not describe a valid object.
    MbParseError = 4,
    /// Arguments out of range or of the wrong shape.
    MbInvalidArgument = 5,
    MbNoZeroElement = 6,
    /// The matrices are linearly dependent or their brackets leave their span.
    MbNotExtractable = 7,
    MbUnsupportedOrder = 8,
    MbInternalError = 9,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(text).ok());
}

fn status_of(e: &Error) -> MbStatus {
    match e {
        Error::Parse(_) | Error::InvalidSemigroup(_) | Error::Antisymmetry(_) => MbStatus::MbParseError,
        Error::NoZeroElement => MbStatus::MbNoZeroElement,
        Error::Rank { .. } | Error::Closure(_) => MbStatus::MbNotExtractable,
        Error::OddOrderUnsupported(_) => MbStatus::MbUnsupportedOrder,
        Error::NotReducible { .. } | Error::NotResonant(_) => MbStatus::MbFail,
        _ => MbStatus::MbInvalidArgument,
    }
}

/// Runs `body`, recording errors and turning panics into `MB_INTERNAL_ERROR`.
fn guard(body: impl FnOnce() -> Result<MbStatus, (MbStatus, String)>) -> MbStatus {
    match panic::catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal error");
            MbStatus::MbInternalError
        }
    }
}

fn fail(e: Error) -> (MbStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (MbStatus, String) {
    (MbStatus::MbNullPointer, format!("{what} is null"))
}

/// # Safety
/// `p` must be null or point to a live `T`.
unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, (MbStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

/// # Safety
/// `p` must be null or a NUL-terminated string.
unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, (MbStatus, String)> {
    if p.is_null() {
        return Err(null("string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (MbStatus::MbInvalidUtf8, "string is not valid UTF-8".into()))
}

/// # Safety
/// `out` must be null or writable.
unsafe fn put<T>(out: *mut T, value: T) -> Result<MbStatus, (MbStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(MbStatus::MbOk)
}

/// # Safety
/// `out` must be null or writable.
unsafe fn put_boxed<T>(out: *mut *mut T, value: T) -> Result<MbStatus, (MbStatus, String)> {
    put(out, Box::into_raw(Box::new(value)))
}

/// # Safety
/// `out` must be null or writable.
unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<MbStatus, (MbStatus, String)> {
    let c = CString::new(s).map_err(|_| (MbStatus::MbInternalError, "output contains NUL".to_string()))?;
    put(out, c.into_raw())
}

/// Message describing the last failure on this thread, or null. The pointer
/// stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn mb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a string obtained from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `p` must be null or a pointer produced by `Box::into_raw`, not yet released.
unsafe fn release<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// The handle must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn mb_semigroup_free(handle: *mut MbSemigroup) {
    release(handle)
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// The handle must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn mb_algebra_free(handle: *mut MbAlgebra) {
    release(handle)
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// The handle must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn mb_expanded_free(handle: *mut MbExpanded) {
    release(handle)
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// The handle must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn mb_rep_free(handle: *mut MbRep) {
    release(handle)
}

/// Parses and validates a semigroup file.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mb_semigroup_from_json(json: *const c_char, out: *mut *mut MbSemigroup) -> MbStatus {
    guard(|| {
        let s = formats::semigroup_from_json(text(json)?).map_err(fail)?;
        put_boxed(out, MbSemigroup(s))
    })
}

/// The semigroup S_E^(n) with elements 0..=n+1.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mb_semigroup_gen_se(n: usize, out: *mut *mut MbSemigroup) -> MbStatus {
    guard(|| put_boxed(out, MbSemigroup(gen_se(n))))
}

/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mb_semigroup_to_json(s: *const MbSemigroup, out: *mut *mut c_char) -> MbStatus {
    guard(|| put_string(out, formats::semigroup_to_json(&get(s, "semigroup")?.0)))
}

/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mb_semigroup_order(s: *const MbSemigroup, out: *mut usize) -> MbStatus {
    guard(|| put(out, get(s, "semigroup")?.0.order()))
}

/// Index of the product of elements `a` and `b`.
///
/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mb_semigroup_product(s: *const MbSemigroup, a: usize, b: usize, out: *mut usize) -> MbStatus {
    guard(|| put(out, get(s, "semigroup")?.0.product(a, b).map_err(fail)?))
}

/// Index of the absorbing element, or `MB_NO_ZERO_ELEMENT`.
///
/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mb_semigroup_zero_element(s: *const MbSemigroup, out: *mut usize) -> MbStatus {
    guard(|| {
        let zero = get(s, "semigroup")?.0.zero_element().ok_or_else(|| fail(Error::NoZeroElement))?;
        put(out, zero)
    })
}

/// Parses an algebra file, bringing lower index tuples into canonical order.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mb_algebra_from_json(json: *const c_char, out: *mut *mut MbAlgebra) -> MbStatus {
    guard(|| put_boxed(out, MbAlgebra(formats::algebra_from_json(text(json)?).map_err(fail)?)))
}

/// # Safety
/// `a` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mb_algebra_to_json(a: *const MbAlgebra, out: *mut *mut c_char) -> MbStatus {
    guard(|| put_string(out, formats::algebra_to_json(&get(a, "algebra")?.0)))
}

/// # Safety
/// `a` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mb_algebra_dim(a: *const MbAlgebra, out: *mut usize) -> MbStatus {
    guard(|| put(out, get(a, "algebra")?.0.dim()))
}

/// # Safety
/// `a` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mb_algebra_order(a: *const MbAlgebra, out: *mut usize) -> MbStatus {
    guard(|| put(out, get(a, "algebra")?.0.order()))
}

/// Checks the generalized Jacobi identity. Writes the number of violating
/// `(tuple, upper index)` pairs to `violations` and returns `MB_OK` when
/// there are none, `MB_FAIL` otherwise.
///
/// # Safety
/// `a` must be a live handle and `violations` writable.
#[no_mangle]
pub unsafe extern "C" fn mb_algebra_check_gji(a: *const MbAlgebra, violations: *mut u64) -> MbStatus {
    guard(|| {
        let report = get(a, "algebra")?.0.check_gji().map_err(fail)?;
        let count = report.violations.len() as u64;
        put(violations, count)?;
        if count == 0 {
            Ok(MbStatus::MbOk)
        } else {
            set_error(format!("{count} generalized Jacobi violations"));
            Ok(MbStatus::MbFail)
        }
    })
}

/// The S-expansion of `a` by `s`.
///
/// # Safety
/// `a` and `s` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mb_expand(a: *const MbAlgebra, s: *const MbSemigroup, out: *mut *mut MbExpanded) -> MbStatus {
    guard(|| {
        let e = s_expand(&get(a, "algebra")?.0, &get(s, "semigroup")?.0);
        put_boxed(out, MbExpanded(e))
    })
}

/// Reads an expanded algebra file produced with semigroup `s`.
///
/// # Safety
/// `json` must be a NUL-terminated string, `s` a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mb_expanded_from_json(
    json: *const c_char,
    s: *const MbSemigroup,
    out: *mut *mut MbExpanded,
) -> MbStatus {
    guard(|| {
        let e = formats::expanded_from_json(text(json)?, &get(s, "semigroup")?.0).map_err(fail)?;
        put_boxed(out, MbExpanded(e))
    })
}

/// # Safety
/// `e` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mb_expanded_to_json(e: *const MbExpanded, out: *mut *mut c_char) -> MbStatus {
    guard(|| put_string(out, formats::expanded_to_json(&get(e, "expanded algebra")?.0)))
}

/// A copy of the underlying algebra, as a separate handle.
///
/// # Safety
/// `e` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mb_expanded_algebra(e: *const MbExpanded, out: *mut *mut MbAlgebra) -> MbStatus {
    guard(|| put_boxed(out, MbAlgebra(get(e, "expanded algebra")?.0.algebra().clone())))
}

/// Removes every generator carrying the semigroup's zero element.
///
/// # Safety
/// `e` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mb_zero_reduce(e: *const MbExpanded, out: *mut *mut MbExpanded) -> MbStatus {
    guard(|| put_boxed(out, MbExpanded(zero_reduce(&get(e, "expanded algebra")?.0).map_err(fail)?)))
}

/// Parses a matrix representation file.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mb_rep_from_json(json: *const c_char, out: *mut *mut MbRep) -> MbStatus {
    guard(|| put_boxed(out, MbRep(formats::rep_from_json(text(json)?).map_err(fail)?)))
}

/// Structure constants of the `n`-bracket in the span of the matrices.
///
/// # Safety
/// `rep` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mb_extract(rep: *const MbRep, n: usize, out: *mut *mut MbAlgebra) -> MbStatus {
    guard(|| put_boxed(out, MbAlgebra(extract_constants(&get(rep, "representation")?.0, n).map_err(fail)?)))
}

/// Checks the nested-bracket identity on `trials` sampled tuples (0 means
/// all). Writes the number of failing tuples and returns `MB_OK` or `MB_FAIL`.
///
/// # Safety
/// `rep` must be a live handle and `violations` writable.
#[no_mangle]
pub unsafe extern "C" fn mb_verify_identity(
    rep: *const MbRep,
    n: usize,
    trials: usize,
    seed: u64,
    violations: *mut u64,
) -> MbStatus {
    guard(|| {
        let report = verify_identity(&get(rep, "representation")?.0, n, trials, seed).map_err(fail)?;
        let count = report.violations.len() as u64;
        put(violations, count)?;
        Ok(if count == 0 { MbStatus::MbOk } else { MbStatus::MbFail })
    })
}
