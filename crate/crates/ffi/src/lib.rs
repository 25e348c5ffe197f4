//! C ABI over the `ruelle` library.
//!
//! Every fallible call returns a [`RuelleStatus`] and writes its result through
//! an out-pointer. On failure the message is kept per thread and can be read
//! with [`ruelle_last_error`]. Handles are opaque and must be released with the
//! matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use ruelle::cover::{build_cover, intersecting_families, zeta_via_cover};
use ruelle::exactmat::SignedIntMatrix;
use ruelle::expmap::{make_circle_map, toral_count};
use ruelle::sft::SubshiftOfFiniteType;
use ruelle::zetafn::{counts_from_zeta, fit_rational_zeta, radius_and_entropy, zeta_from_sft, CountSequence, RationalFunction};
use ruelle::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuelleStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    GuardExceeded = 4,
    NotExpanding = 5,
    Precondition = 6,
    /// A result does not fit the output type.
    Overflow = 7,
    Failure = 8,
    Panic = 9,
}

/// Square integer matrix.
pub struct RuelleMatrix {
    inner: SignedIntMatrix,
}

/// Rational zeta function `num(z) / den(z)`.
pub struct RuelleZeta {
    inner: RationalFunction,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> RuelleStatus {
    match e {
        Error::Parse(_) => RuelleStatus::Parse,
        Error::GuardExceeded(_) => RuelleStatus::GuardExceeded,
        Error::NotExpanding(_) => RuelleStatus::NotExpanding,
        Error::Precondition(_) => RuelleStatus::Precondition,
        Error::InvalidMatrix(_) | Error::SymbolOutOfRange { .. } | Error::Config(_) => RuelleStatus::InvalidArgument,
        _ => RuelleStatus::Failure,
    }
}

struct Fail(RuelleStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null() -> Fail {
    Fail(RuelleStatus::NullPointer, "null pointer argument".into())
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> RuelleStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            RuelleStatus::Ok
        }
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            RuelleStatus::Panic
        }
    }
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(null)
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(null)
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(RuelleStatus::Parse, "string is not UTF-8".into()))
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

fn to_u64(x: &BigInt) -> Result<u64, Fail> {
    x.to_u64()
        .ok_or_else(|| Fail(RuelleStatus::Overflow, format!("{x} does not fit in 64 bits")))
}

/// Message for the last failed call on this thread, or NULL. Valid until the next call.
#[no_mangle]
pub extern "C" fn ruelle_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static version string.
#[no_mangle]
pub extern "C" fn ruelle_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must come from a `ruelle_*` function returning an owned string, and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ruelle_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a `dim x dim` matrix from row-major entries.
///
/// # Safety
/// `entries` must point to `dim * dim` readable values; `out_m` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ruelle_matrix_new(dim: usize, entries: *const i64, out_m: *mut *mut RuelleMatrix) -> RuelleStatus {
    guard(|| {
        let slot = out(out_m)?;
        if entries.is_null() {
            return Err(null());
        }
        let n = dim
            .checked_mul(dim)
            .filter(|&n| n > 0)
            .ok_or_else(|| Fail(RuelleStatus::InvalidArgument, format!("bad dimension {dim}")))?;
        let vals = std::slice::from_raw_parts(entries, n);
        let inner = SignedIntMatrix::new(dim, vals.iter().map(|&v| v.into()).collect())?;
        *slot = boxed(RuelleMatrix { inner });
        Ok(())
    })
}

/// Parses the text format: a dimension line, then one line per row.
///
/// # Safety
/// `src` must be a NUL-terminated string; `out_m` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ruelle_matrix_parse(src: *const c_char, out_m: *mut *mut RuelleMatrix) -> RuelleStatus {
    guard(|| {
        let slot = out(out_m)?;
        let inner = SignedIntMatrix::parse(text(src)?)?;
        *slot = boxed(RuelleMatrix { inner });
        Ok(())
    })
}

/// # Safety
/// `m` must be NULL or a live handle from `ruelle_matrix_new` / `ruelle_matrix_parse`.
#[no_mangle]
pub unsafe extern "C" fn ruelle_matrix_free(m: *mut RuelleMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// `N_n = tr(A^n)` for a 0/1 transition matrix.
///
/// # Safety
/// `m` must be a live handle; `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ruelle_sft_count_periodic(m: *const RuelleMatrix, n: u64, count: *mut u64) -> RuelleStatus {
    guard(|| {
        let slot = out(count)?;
        let s = SubshiftOfFiniteType::new(handle(m)?.inner.clone())?;
        *slot = to_u64(&s.count_periodic_trace(n)?)?;
        Ok(())
    })
}

/// Entropy `log lambda` of an irreducible shift with its certified bracket.
///
/// # Safety
/// `m` must be a live handle; the three outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn ruelle_sft_entropy(
    m: *const RuelleMatrix,
    value: *mut f64,
    lower: *mut f64,
    upper: *mut f64,
) -> RuelleStatus {
    guard(|| {
        let (v, l, u) = (out(value)?, out(lower)?, out(upper)?);
        let e = SubshiftOfFiniteType::new(handle(m)?.inner.clone())?.sft_entropy()?;
        (*v, *l, *u) = (e.value, e.lower, e.upper);
        Ok(())
    })
}

/// `|det(M^n - I)|` for a 2x2 integer matrix.
///
/// # Safety
/// `m` must be a live handle; `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ruelle_toral_count(m: *const RuelleMatrix, n: u64, count: *mut u64) -> RuelleStatus {
    guard(|| {
        let slot = out(count)?;
        *slot = to_u64(&toral_count(&handle(m)?.inner, n)?)?;
        Ok(())
    })
}

/// `det(I - zA)^-1` for a transition matrix.
///
/// # Safety
/// `m` must be a live handle; `out_z` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ruelle_zeta_from_sft(m: *const RuelleMatrix, out_z: *mut *mut RuelleZeta) -> RuelleStatus {
    guard(|| {
        let slot = out(out_z)?;
        let inner = zeta_from_sft(&handle(m)?.inner)?;
        *slot = boxed(RuelleZeta { inner });
        Ok(())
    })
}

/// Zeta of `x -> kx mod 1` from the uniform cover with `4k` arcs.
///
/// # Safety
/// `out_z` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ruelle_zeta_circle(k: u32, out_z: *mut *mut RuelleZeta) -> RuelleStatus {
    guard(|| {
        let slot = out(out_z)?;
        let map = make_circle_map(k)?;
        let mesh = ruelle::cli::text::parse_rational(&format!("1/{}", 4 * k as u64))?;
        let fam = intersecting_families(&build_cover(&map, &mesh)?)?;
        *slot = boxed(RuelleZeta {
            inner: zeta_via_cover(&fam)?,
        });
        Ok(())
    })
}

/// Zeta of a toral endomorphism, fitted to `order` determinant counts.
///
/// # Safety
/// `m` must be a live handle; `out_z` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ruelle_zeta_toral(m: *const RuelleMatrix, order: usize, out_z: *mut *mut RuelleZeta) -> RuelleStatus {
    guard(|| {
        let slot = out(out_z)?;
        let a = &handle(m)?.inner;
        let counts = (1..=order as u64).map(|n| toral_count(a, n)).collect::<ruelle::Result<Vec<_>>>()?;
        let inner = fit_rational_zeta(&CountSequence::new(counts)?)?;
        *slot = boxed(RuelleZeta { inner });
        Ok(())
    })
}

/// Parses `"num: c0 c1 ... / den: c0 c1 ..."`.
///
/// # Safety
/// `src` must be a NUL-terminated string; `out_z` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ruelle_zeta_parse(src: *const c_char, out_z: *mut *mut RuelleZeta) -> RuelleStatus {
    guard(|| {
        let slot = out(out_z)?;
        let inner = RationalFunction::parse(text(src)?)?;
        *slot = boxed(RuelleZeta { inner });
        Ok(())
    })
}

/// # Safety
/// `z` must be NULL or a live zeta handle.
#[no_mangle]
pub unsafe extern "C" fn ruelle_zeta_free(z: *mut RuelleZeta) {
    if !z.is_null() {
        drop(Box::from_raw(z));
    }
}

/// Writes `N_1 .. N_len` into `counts`.
///
/// # Safety
/// `z` must be a live handle; `counts` must have room for `len` values.
#[no_mangle]
pub unsafe extern "C" fn ruelle_zeta_counts(z: *const RuelleZeta, len: usize, counts: *mut u64) -> RuelleStatus {
    guard(|| {
        let z = handle(z)?;
        if counts.is_null() {
            return Err(null());
        }
        let seq = counts_from_zeta(&z.inner, len)?;
        let dst = std::slice::from_raw_parts_mut(counts, len);
        for (d, c) in dst.iter_mut().zip(seq.counts()) {
            *d = to_u64(c)?;
        }
        Ok(())
    })
}

/// Radius of convergence and periodic entropy; `rho` is `+inf` when there is no pole.
///
/// # Safety
/// `z` must be a live handle; both outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn ruelle_zeta_radius(z: *const RuelleZeta, rho: *mut f64, entropy: *mut f64) -> RuelleStatus {
    guard(|| {
        let (r, h) = (out(rho)?, out(entropy)?);
        let re = radius_and_entropy(&handle(z)?.inner)?;
        (*r, *h) = (re.rho(), re.periodic_entropy());
        Ok(())
    })
}

/// Human-readable form such as `1/(1 - z - z^2)`. Free with `ruelle_string_free`.
///
/// # Safety
/// `z` must be a live handle; `out_s` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ruelle_zeta_to_string(z: *const RuelleZeta, out_s: *mut *mut c_char) -> RuelleStatus {
    guard(|| {
        let slot = out(out_s)?;
        let s = CString::new(handle(z)?.inner.to_string()).map_err(|e| Fail(RuelleStatus::Failure, e.to_string()))?;
        *slot = s.into_raw();
        Ok(())
    })
}
