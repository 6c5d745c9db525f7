//! C ABI for fibrator. Objects cross the boundary as opaque handles that
//! the caller frees with the matching `*_free`. Every fallible call
//! returns a `FibStatus`; the message of the last failure on the calling
//! thread is available through `fib_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use fibrator::fiber::FiberGroup;
use fibrator::functor::FunctorSpec;
use fibrator::group::{build_group, GroupHandle, SubgroupRef};
use fibrator::pairs::pair_classes;
use fibrator::plus::plus_basis;
use fibrator::seed::{make_seed, parse_family, restrict_minus, Selector};
use fibrator::verify::{mark_matrix, run_suite, Options};
use fibrator::Error;

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FibStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidGroup = 4,
    NotSubgroup = 5,
    NotInSeed = 6,
    Precondition = 7,
    Unsupported = 8,
    Mismatch = 9,
    InvalidFunctor = 10,
    BufferTooSmall = 11,
    NotInteger = 12,
    Internal = 13,
    Panic = 14,
}

/// A finite group.
pub struct FibGroup {
    inner: SubgroupRef,
}

/// A functor on a seed over a family of groups.
pub struct FibFunctor {
    inner: Arc<FunctorSpec>,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(e: &Error) -> FibStatus {
    match e {
        Error::Parse(_) => FibStatus::Parse,
        Error::InvalidGroup(_) => FibStatus::InvalidGroup,
        Error::NotSubgroup(_) | Error::NotNormal(_) => FibStatus::NotSubgroup,
        Error::NotInSeed(_) => FibStatus::NotInSeed,
        Error::Precondition(_) | Error::Bound(_) => FibStatus::Precondition,
        Error::Unsupported(_) | Error::NoGreen => FibStatus::Unsupported,
        Error::GroupMismatch(_) | Error::FiberMismatch | Error::RingMismatch => FibStatus::Mismatch,
        Error::InvalidFunctor(_) => FibStatus::InvalidFunctor,
        Error::Invariant(_) => FibStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> Result<(), FibStatus>) -> FibStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FibStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside fibrator");
            FibStatus::Panic
        }
    }
}

fn lift<T>(r: fibrator::Result<T>) -> Result<T, FibStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, FibStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(FibStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not UTF-8");
        FibStatus::InvalidUtf8
    })
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, FibStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("null handle");
        FibStatus::NullPointer
    })
}

unsafe fn write<T>(out: *mut T, v: T) -> Result<(), FibStatus> {
    if out.is_null() {
        set_error("null output pointer");
        return Err(FibStatus::NullPointer);
    }
    out.write(v);
    Ok(())
}

/// Copies the last error message of this thread into `buf` (NUL
/// terminated, truncated to `len`). Returns the full message length.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn fib_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Builds a group from a spec such as `S3`, `C2xC2` or `D8`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fib_group_new(spec: *const c_char, out: *mut *mut FibGroup) -> FibStatus {
    guard(|| {
        let g = lift(build_group(text(spec)?))?.whole();
        write(out, Box::into_raw(Box::new(FibGroup { inner: g })))
    })
}

/// # Safety
/// `g` must be null or a handle from `fib_group_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fib_group_free(g: *mut FibGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live group handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fib_group_order(g: *const FibGroup, out: *mut usize) -> FibStatus {
    guard(|| write(out, handle(g)?.inner.order()))
}

/// Number of conjugacy classes of fibered pairs over `left × right`.
///
/// # Safety
/// Handles must be live, `fiber` a NUL-terminated string such as `"2"`.
#[no_mangle]
pub unsafe extern "C" fn fib_pair_class_count(
    left: *const FibGroup,
    right: *const FibGroup,
    fiber: *const c_char,
    out: *mut usize,
) -> FibStatus {
    guard(|| {
        let a = lift(FiberGroup::parse(text(fiber)?))?;
        let n = lift(pair_classes(&handle(left)?.inner, &handle(right)?.inner, &a))?.len();
        write(out, n)
    })
}

/// Builds the `trivial` or `burnside` functor over a family spec such as
/// `S3-closure`. The trivial functor uses the k2only seed restricted to
/// full left projection; Burnside uses the selector-all seed.
///
/// # Safety
/// Strings must be NUL-terminated and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fib_functor_new(
    kind: *const c_char,
    family: *const c_char,
    fiber: *const c_char,
    out: *mut *mut FibFunctor,
) -> FibStatus {
    guard(|| {
        let a = lift(FiberGroup::parse(text(fiber)?))?;
        let fam = lift(parse_family(text(family)?))?;
        let f = match text(kind)? {
            "trivial" => lift(FunctorSpec::trivial(&lift(restrict_minus(&lift(make_seed(fam, &a, Selector::K2Only))?))?))?,
            "burnside" => FunctorSpec::burnside(&lift(make_seed(fam, &a, Selector::All))?),
            other => {
                set_error(format!("unknown functor '{other}'"));
                return Err(FibStatus::Parse);
            }
        };
        write(out, Box::into_raw(Box::new(FibFunctor { inner: f })))
    })
}

/// # Safety
/// `f` must be null or a handle from `fib_functor_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fib_functor_free(f: *mut FibFunctor) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Rank of `F₊(G)`.
///
/// # Safety
/// Handles must be live and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fib_plus_rank(f: *const FibFunctor, g: *const FibGroup, out: *mut usize) -> FibStatus {
    guard(|| {
        let n = lift(plus_basis(&handle(f)?.inner, &handle(g)?.inner))?.len();
        write(out, n)
    })
}

/// Mark matrix of `F` at `G`, row-major into `data`. The dimensions are
/// always written; `BufferTooSmall` is returned when `cap < rows·cols`.
///
/// # Safety
/// Handles must be live, `rows`/`cols` valid, `data` null or `cap` slots.
#[no_mangle]
pub unsafe extern "C" fn fib_mark_matrix(
    f: *const FibFunctor,
    g: *const FibGroup,
    rows: *mut usize,
    cols: *mut usize,
    data: *mut i64,
    cap: usize,
) -> FibStatus {
    guard(|| {
        let (f, g) = (&handle(f)?.inner, &handle(g)?.inner);
        let m = lift(mark_matrix(f, g))?;
        write(rows, m.rows)?;
        write(cols, m.cols)?;
        if data.is_null() || cap < m.rows * m.cols {
            set_error(format!("need {} slots", m.rows * m.cols));
            return Err(FibStatus::BufferTooSmall);
        }
        for (i, row) in m.to_rows().into_iter().enumerate() {
            for (j, c) in row.into_iter().enumerate() {
                if !c.is_integer() {
                    set_error(format!("entry {c} is not an integer"));
                    return Err(FibStatus::NotInteger);
                }
                *data.add(i * m.cols + j) = *c.numer();
            }
        }
        Ok(())
    })
}

/// Runs a verification suite with default options over fiber `fiber` and
/// seed `seed`. Writes the number of failing cases to `failed` and, when
/// `report` is non-null, a JSON-lines report the caller frees with
/// `fib_string_free`.
///
/// # Safety
/// Strings must be NUL-terminated; `failed` valid; `report` null or valid.
#[no_mangle]
pub unsafe extern "C" fn fib_verify(
    suite: *const c_char,
    fiber: *const c_char,
    seed: u64,
    failed: *mut usize,
    report: *mut *mut c_char,
) -> FibStatus {
    guard(|| {
        let o = Options { fiber: lift(FiberGroup::parse(text(fiber)?))?, seed, ..Options::default() };
        let cases = lift(run_suite(text(suite)?, &o))?;
        write(failed, cases.iter().filter(|c| !c.pass).count())?;
        if !report.is_null() {
            let lines: Vec<String> = cases.iter().map(|c| serde_json::to_string(c).expect("case serializes")).collect();
            let s = CString::new(lines.join("\n")).expect("no interior NUL");
            report.write(s.into_raw());
        }
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fib_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
