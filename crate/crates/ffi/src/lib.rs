//! C ABI over `scpir`.
//!
//! Every function returns a [`ScpirStatus`]; results come back through out
//! pointers. Handles are opaque and must be released with the matching
//! `_free` function. On failure, [`scpir_last_error_message`] describes the
//! most recent error on the calling thread.

use std::cell::RefCell;
use std::os::raw::c_char;
use std::panic::{self, AssertUnwindSafe};
use std::ptr;

use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use scpir::scpir::{self as sc, Method, Scheme};
use scpir::sda::{self, StorageDesignArray};
use scpir::{audit, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScpirStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Degenerate = 3,
    Divisibility = 4,
    BudgetExceeded = 5,
    ProtocolViolation = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScpirMethod {
    Equal = 0,
    Greedy = 1,
    Improved = 2,
}

impl From<ScpirMethod> for Method {
    fn from(m: ScpirMethod) -> Method {
        match m {
            ScpirMethod::Equal => Method::Equal,
            ScpirMethod::Greedy => Method::Greedy,
            ScpirMethod::Improved => Method::Improved,
        }
    }
}

/// A storage design array.
pub struct ScpirSda {
    inner: StorageDesignArray,
}

/// A planned deployment with its seeded file library.
pub struct ScpirScheme {
    inner: Scheme,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

struct Failure(ScpirStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::DegenerateRetrieval => ScpirStatus::Degenerate,
            Error::Divisibility { .. } => ScpirStatus::Divisibility,
            Error::BudgetExceeded(_) => ScpirStatus::BudgetExceeded,
            Error::ProtocolViolation(_) => ScpirStatus::ProtocolViolation,
            _ => ScpirStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(ScpirStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> ScpirStatus {
    match panic::catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ScpirStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            ScpirStatus::Panic
        }
    }
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

/// Copies `bytes` plus a terminating NUL into `buf`. `out_len`, if given,
/// receives the length without the NUL even when `cap` is too small.
unsafe fn write_c_string(bytes: &[u8], buf: *mut c_char, cap: usize, out_len: *mut usize) -> Result<(), Failure> {
    if !out_len.is_null() {
        out_len.write(bytes.len());
    }
    if buf.is_null() || cap < bytes.len() + 1 {
        return Err(Failure(
            ScpirStatus::BufferTooSmall,
            format!("need {} bytes, have {cap}", bytes.len() + 1),
        ));
    }
    ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), bytes.len());
    buf.add(bytes.len()).write(0);
    Ok(())
}

/// Message for the last failed call on this thread.
///
/// # Safety
/// `buf` must be valid for `cap` bytes; `out_len` may be null.
#[no_mangle]
pub unsafe extern "C" fn scpir_last_error_message(buf: *mut c_char, cap: usize, out_len: *mut usize) -> ScpirStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    // reporting must not overwrite the message being reported
    match write_c_string(msg.as_bytes(), buf, cap, out_len) {
        Ok(()) => ScpirStatus::Ok,
        Err(Failure(status, _)) => status,
    }
}

/// # Safety
/// `out` must be a valid pointer; the handle it receives is owned by the
/// caller.
#[no_mangle]
pub unsafe extern "C" fn scpir_sda_build(n: usize, m: usize, method: ScpirMethod, out: *mut *mut ScpirSda) -> ScpirStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = Method::from(method).build(n, m)?;
        put(out, Box::into_raw(Box::new(ScpirSda { inner })), "out")
    })
}

/// # Safety
/// `sda` must come from `scpir_sda_build` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn scpir_sda_free(sda: *mut ScpirSda) {
    if !sda.is_null() {
        drop(Box::from_raw(sda));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn scpir_sda_eta(sda: *const ScpirSda, out: *mut usize) -> ScpirStatus {
    guard(|| put(out, get(sda, "sda")?.inner.eta(), "out"))
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn scpir_sda_dims(sda: *const ScpirSda, rows: *mut usize, cols: *mut usize) -> ScpirStatus {
    guard(|| {
        let a = &get(sda, "sda")?.inner;
        put(rows, a.rows(), "rows")?;
        put(cols, a.cols(), "cols")
    })
}

/// Zero-based cell lookup.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn scpir_sda_cell(sda: *const ScpirSda, row: usize, col: usize, out: *mut bool) -> ScpirStatus {
    guard(|| {
        let a = &get(sda, "sda")?.inner;
        if row >= a.rows() || col >= a.cols() {
            return Err(Failure(
                ScpirStatus::InvalidArgument,
                format!("cell ({row},{col}) outside {}x{}", a.rows(), a.cols()),
            ));
        }
        put(out, a.get(row, col), "out")
    })
}

/// ASCII form, NUL-terminated.
///
/// # Safety
/// `buf` must be valid for `cap` bytes; `out_len` may be null.
#[no_mangle]
pub unsafe extern "C" fn scpir_sda_to_ascii(
    sda: *const ScpirSda,
    buf: *mut c_char,
    cap: usize,
    out_len: *mut usize,
) -> ScpirStatus {
    guard(|| write_c_string(get(sda, "sda")?.inner.to_ascii().as_bytes(), buf, cap, out_len))
}

/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn scpir_eta_recursion(n: usize, m: usize, out: *mut usize) -> ScpirStatus {
    guard(|| put(out, sda::eta_recursion(n, m)?, "out"))
}

/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn scpir_eta_lower_bound(n: usize, m: usize, out: *mut usize) -> ScpirStatus {
    guard(|| put(out, sda::eta_lower_bound(n, m)?, "out"))
}

/// Builds a scheme with files of `l_mult * N(M-1)/gcd(N,M)` bytes.
///
/// # Safety
/// `out` must be valid; the handle it receives is owned by the caller.
#[no_mangle]
pub unsafe extern "C" fn scpir_scheme_new(
    n: usize,
    m: usize,
    k: usize,
    l_mult: usize,
    method: ScpirMethod,
    seed: u64,
    out: *mut *mut ScpirScheme,
) -> ScpirStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = Scheme::build(n, m, k, l_mult, method.into(), seed)?;
        put(out, Box::into_raw(Box::new(ScpirScheme { inner })), "out")
    })
}

/// # Safety
/// `scheme` must come from `scpir_scheme_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn scpir_scheme_free(scheme: *mut ScpirScheme) {
    if !scheme.is_null() {
        drop(Box::from_raw(scheme));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn scpir_scheme_file_len(scheme: *const ScpirScheme, out: *mut usize) -> ScpirStatus {
    guard(|| put(out, get(scheme, "scheme")?.inner.layout.file_len, "out"))
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn scpir_scheme_subpacketization(scheme: *const ScpirScheme, out: *mut usize) -> ScpirStatus {
    guard(|| put(out, sc::subpacketization(&get(scheme, "scheme")?.inner.layout), "out"))
}

/// Expected download per retrieval as a reduced fraction.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn scpir_scheme_average_download(
    scheme: *const ScpirScheme,
    numer: *mut u64,
    denom: *mut u64,
) -> ScpirStatus {
    guard(|| {
        let s = &get(scheme, "scheme")?.inner;
        let avg = sc::average_download(&s.layout, s.k());
        let overflow = || Failure(ScpirStatus::InvalidArgument, "download does not fit in 64 bits".into());
        put(numer, avg.numer().to_u64().ok_or_else(overflow)?, "numer")?;
        put(denom, avg.denom().to_u64().ok_or_else(overflow)?, "denom")
    })
}

/// Retrieves file `theta` (1-based) with base vectors drawn from `seed`,
/// writing the decoded file into `buf`.
///
/// # Safety
/// `buf` must be valid for `cap` bytes; `downloaded` may be null.
#[no_mangle]
pub unsafe extern "C" fn scpir_scheme_retrieve(
    scheme: *const ScpirScheme,
    theta: usize,
    seed: u64,
    buf: *mut u8,
    cap: usize,
    downloaded: *mut u64,
) -> ScpirStatus {
    guard(|| {
        let s = &get(scheme, "scheme")?.inner;
        if theta == 0 || theta > s.k() {
            return Err(Failure(
                ScpirStatus::InvalidArgument,
                format!("theta must be in 1..={}", s.k()),
            ));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        if cap < s.layout.file_len {
            return Err(Failure(
                ScpirStatus::BufferTooSmall,
                format!("need {} bytes, have {cap}", s.layout.file_len),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bases = sc::random_bases(&s.layout, s.k(), &mut rng);
        let t = sc::retrieve(theta, &s.plan, &s.layout, &s.library, &bases)?;
        ptr::copy_nonoverlapping(t.decoded_file.as_ptr(), buf, t.decoded_file.len());
        if !downloaded.is_null() {
            downloaded.write(t.downloaded_symbols);
        }
        Ok(())
    })
}

/// Copies file `theta` (1-based) of the library into `buf`.
///
/// # Safety
/// `buf` must be valid for `cap` bytes.
#[no_mangle]
pub unsafe extern "C" fn scpir_scheme_file(scheme: *const ScpirScheme, theta: usize, buf: *mut u8, cap: usize) -> ScpirStatus {
    guard(|| {
        let file = get(scheme, "scheme")?.inner.library.file(theta)?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        if cap < file.len() {
            return Err(Failure(ScpirStatus::BufferTooSmall, format!("need {} bytes", file.len())));
        }
        ptr::copy_nonoverlapping(file.as_ptr(), buf, file.len());
        Ok(())
    })
}

/// Runs every exhaustive audit; `pass` receives the overall verdict.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn scpir_scheme_audit(scheme: *const ScpirScheme, pass: *mut bool) -> ScpirStatus {
    guard(|| {
        let report = audit::audit_scheme(&get(scheme, "scheme")?.inner)?;
        if !report.pass() {
            set_error(report.to_csv());
        }
        put(pass, report.pass(), "pass")
    })
}
