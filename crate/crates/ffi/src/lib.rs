//! C ABI for `adic-shifts`.
//!
//! Spaces and operators are opaque heap handles released with their `_free`
//! function. Every fallible call returns an [`AdicStatus`]; on failure
//! [`adic_last_error`] describes the most recent error on the calling thread.
//! Strings returned by the library are released with [`adic_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use adic_shifts::adic::{ShiftKind, Vertex};
use adic_shifts::harness::{self, opspec, CheckParams, Report, ReportFormat};
use adic_shifts::hilbert::{TruncatedOperator, TruncatedSpace};
use adic_shifts::shifts::{make_shift, make_shift_adjoint};
use adic_shifts::Error;
use num_complex::Complex64;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdicStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidBase = 2,
    InvalidArgument = 3,
    OutOfRange = 4,
    Mismatch = 5,
    NotConverged = 6,
    ParseError = 7,
    UnknownCheck = 8,
    Infeasible = 9,
    Io = 10,
    Panic = 11,
}

/// The shifts.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdicShift {
    U = 0,
    V = 1,
    S = 2,
    W = 3,
}

impl From<AdicShift> for ShiftKind {
    fn from(k: AdicShift) -> Self {
        match k {
            AdicShift::U => ShiftKind::U,
            AdicShift::V => ShiftKind::V,
            AdicShift::S => ShiftKind::S,
            AdicShift::W => ShiftKind::W,
        }
    }
}

/// A truncated tree Hilbert space.
pub struct AdicSpace(TruncatedSpace);

/// An operator on a truncated space.
pub struct AdicOperator(TruncatedOperator);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn status_of(e: &Error) -> AdicStatus {
    match e {
        Error::InvalidBase(_) => AdicStatus::InvalidBase,
        Error::InvalidVertex { .. }
        | Error::LevelOutOfRange { .. }
        | Error::IndexOutOfRange { .. }
        | Error::PrefixTooLong { .. }
        | Error::WindowTooSmall { .. }
        | Error::WindowOverflow { .. }
        | Error::TableSize { .. }
        | Error::LiftBelowDepth { .. } => AdicStatus::OutOfRange,
        Error::BaseMismatch(..) | Error::SpaceMismatch => AdicStatus::Mismatch,
        Error::NormNotConverged { .. } => AdicStatus::NotConverged,
        Error::OpSpec(_) => AdicStatus::ParseError,
        Error::UnknownCheck(_) => AdicStatus::UnknownCheck,
        Error::Infeasible { .. } => AdicStatus::Infeasible,
        Error::Io { .. } => AdicStatus::Io,
        _ => AdicStatus::InvalidArgument,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), AdicStatus>) -> AdicStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AdicStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic");
            AdicStatus::Panic
        }
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, AdicStatus>;
}

impl<T> OrStatus<T> for adic_shifts::Result<T> {
    fn or_status(self) -> Result<T, AdicStatus> {
        self.map_err(|e| {
            set_error(e.to_string());
            status_of(&e)
        })
    }
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, AdicStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("null pointer argument");
        AdicStatus::NullPointer
    })
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, AdicStatus> {
    p.as_mut().ok_or_else(|| {
        set_error("null output pointer");
        AdicStatus::NullPointer
    })
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, AdicStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(AdicStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        AdicStatus::InvalidArgument
    })
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

fn boxed_op(op: TruncatedOperator) -> *mut AdicOperator {
    Box::into_raw(Box::new(AdicOperator(op)))
}

/// Message for the last failed call on this thread. Valid until the next
/// failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn adic_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static description of a status code; do not free.
#[no_mangle]
pub extern "C" fn adic_status_message(status: AdicStatus) -> *const c_char {
    let msg: &'static CStr = match status {
        AdicStatus::Ok => c"ok",
        AdicStatus::NullPointer => c"null pointer",
        AdicStatus::InvalidBase => c"invalid base",
        AdicStatus::InvalidArgument => c"invalid argument",
        AdicStatus::OutOfRange => c"out of range",
        AdicStatus::Mismatch => c"mismatched operands",
        AdicStatus::NotConverged => c"norm iteration did not converge",
        AdicStatus::ParseError => c"cannot parse operator spec",
        AdicStatus::UnknownCheck => c"unknown check",
        AdicStatus::Infeasible => c"infeasible parameters",
        AdicStatus::Io => c"i/o error",
        AdicStatus::Panic => c"internal panic",
    };
    msg.as_ptr()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn adic_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates the space spanned by tree vertices of level `0..=depth`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn adic_space_new(s: u32, depth: u32, out: *mut *mut AdicSpace) -> AdicStatus {
    guard(|| {
        let out = self::out(out)?;
        let space = TruncatedSpace::new(s, depth).or_status()?;
        *out = Box::into_raw(Box::new(AdicSpace(space)));
        Ok(())
    })
}

/// # Safety
/// `space` must come from [`adic_space_new`] and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn adic_space_free(space: *mut AdicSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Dimension of the space, or 0 for a null handle.
///
/// # Safety
/// `space` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn adic_space_dim(space: *const AdicSpace) -> usize {
    space.as_ref().map_or(0, |s| s.0.dim())
}

/// Level-lex position of the basis vector `E_(level,index)`.
///
/// # Safety
/// Handles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn adic_space_index(
    space: *const AdicSpace,
    level: u32,
    index: u64,
    out: *mut usize,
) -> AdicStatus {
    guard(|| {
        let space = deref(space)?;
        *self::out(out)? = space.0.index(Vertex { level, index }).or_status()?;
        Ok(())
    })
}

/// The shift `kind`, or its adjoint when `adjoint` is true.
///
/// # Safety
/// Handles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn adic_shift_new(
    space: *const AdicSpace,
    kind: AdicShift,
    adjoint: bool,
    out: *mut *mut AdicOperator,
) -> AdicStatus {
    guard(|| {
        let space = deref(space)?.0;
        let out = self::out(out)?;
        let op = if adjoint {
            make_shift_adjoint(space, kind.into())
        } else {
            make_shift(space, kind.into())
        };
        *out = boxed_op(op);
        Ok(())
    })
}

/// Builds an operator from an expression such as `"I - U.U*"`; see the CLI
/// documentation for the factor names.
///
/// # Safety
/// Handles, `spec` and `out` must be valid; `spec` is NUL-terminated UTF-8.
#[no_mangle]
pub unsafe extern "C" fn adic_operator_parse(
    space: *const AdicSpace,
    spec: *const c_char,
    out: *mut *mut AdicOperator,
) -> AdicStatus {
    guard(|| {
        let space = deref(space)?.0;
        let spec = text(spec)?;
        let out = self::out(out)?;
        *out = boxed_op(opspec::parse(space, spec).or_status()?);
        Ok(())
    })
}

/// # Safety
/// `op` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn adic_operator_free(op: *mut AdicOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// `a b` (apply `b` first).
///
/// # Safety
/// Handles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn adic_operator_mul(
    a: *const AdicOperator,
    b: *const AdicOperator,
    out: *mut *mut AdicOperator,
) -> AdicStatus {
    guard(|| {
        let (a, b) = (deref(a)?, deref(b)?);
        let out = self::out(out)?;
        *out = boxed_op(a.0.mul(&b.0).or_status()?);
        Ok(())
    })
}

/// `a + (re + i im) b`.
///
/// # Safety
/// Handles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn adic_operator_add_scaled(
    a: *const AdicOperator,
    b: *const AdicOperator,
    re: f64,
    im: f64,
    out: *mut *mut AdicOperator,
) -> AdicStatus {
    guard(|| {
        let (a, b) = (deref(a)?, deref(b)?);
        let out = self::out(out)?;
        *out = boxed_op(a.0.add_scaled(&b.0, Complex64::new(re, im)).or_status()?);
        Ok(())
    })
}

/// # Safety
/// Handles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn adic_operator_adjoint(a: *const AdicOperator, out: *mut *mut AdicOperator) -> AdicStatus {
    guard(|| {
        let a = deref(a)?;
        let out = self::out(out)?;
        *out = boxed_op(a.0.adjoint());
        Ok(())
    })
}

/// `<E_row, a E_col>` split into real and imaginary parts.
///
/// # Safety
/// Handles and output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn adic_operator_entry(
    a: *const AdicOperator,
    row_level: u32,
    row_index: u64,
    col_level: u32,
    col_index: u64,
    re: *mut f64,
    im: *mut f64,
) -> AdicStatus {
    guard(|| {
        let a = deref(a)?;
        let (re, im) = (out(re)?, out(im)?);
        let v = a
            .0
            .entry(
                Vertex {
                    level: row_level,
                    index: row_index,
                },
                Vertex {
                    level: col_level,
                    index: col_index,
                },
            )
            .or_status()?;
        *re = v.re;
        *im = v.im;
        Ok(())
    })
}

/// Number of stored nonzero entries, or 0 for a null handle.
///
/// # Safety
/// `a` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn adic_operator_nnz(a: *const AdicOperator) -> usize {
    a.as_ref().map_or(0, |a| a.0.nnz())
}

/// Largest singular value to relative tolerance `tol`.
///
/// # Safety
/// Handles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn adic_operator_norm(a: *const AdicOperator, tol: f64, out: *mut f64) -> AdicStatus {
    guard(|| {
        let a = deref(a)?;
        let out = self::out(out)?;
        *out = a.0.spectral_norm(tol).or_status()?;
        Ok(())
    })
}

/// The operator's nonzero entries as text; free with [`adic_string_free`].
///
/// # Safety
/// Handles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn adic_operator_dump(a: *const AdicOperator, out: *mut *mut c_char) -> AdicStatus {
    guard(|| {
        let a = deref(a)?;
        let out = self::out(out)?;
        *out = owned_string(a.0.dump());
        Ok(())
    })
}

fn params(s: u32, depth: u32, seed: u64, tol: f64) -> CheckParams {
    let p = CheckParams::new(s, depth).with_seed(seed);
    if tol > 0.0 {
        p.with_tol(tol)
    } else {
        p
    }
}

/// Runs one named check. A `tol` of 0 keeps the check's own tolerance.
///
/// # Safety
/// `name` is NUL-terminated UTF-8; output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn adic_run_check(
    name: *const c_char,
    s: u32,
    depth: u32,
    seed: u64,
    tol: f64,
    pass: *mut bool,
    max_residual: *mut f64,
) -> AdicStatus {
    guard(|| {
        let name = text(name)?;
        let (pass, max_residual) = (out(pass)?, out(max_residual)?);
        let r = harness::run_check(name, &params(s, depth, seed, tol)).or_status()?;
        *pass = r.pass;
        *max_residual = r.max_residual;
        Ok(())
    })
}

/// Runs the checks matching `filter` and returns the JSON report; free it
/// with [`adic_string_free`]. `passed` receives the overall verdict.
///
/// # Safety
/// `filter` is NUL-terminated UTF-8; output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn adic_run_suite_json(
    filter: *const c_char,
    s: u32,
    depth: u32,
    seed: u64,
    passed: *mut bool,
    report: *mut *mut c_char,
) -> AdicStatus {
    guard(|| {
        let filter = text(filter)?;
        let (passed, report) = (out(passed)?, out(report)?);
        let p = params(s, depth, seed, 0.0);
        let results = harness::run_suite(filter, &p).or_status()?;
        let r = Report::new(filter, s, depth, &results);
        *passed = r.passed;
        *report = owned_string(r.render(ReportFormat::Json));
        Ok(())
    })
}

/// Default seed used by the harness.
#[no_mangle]
pub extern "C" fn adic_default_seed() -> u64 {
    harness::DEFAULT_SEED
}
