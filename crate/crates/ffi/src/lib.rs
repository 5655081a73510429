//! C ABI over `sigma-race`.
//!
//! Every fallible call returns an [`SrStatus`]; on failure the message is
//! kept per thread and read back with [`sr_last_error_message`]. Handles are
//! opaque and must be released with their `_free` function. Strings returned
//! through `char **` belong to the caller and go back through
//! [`sr_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_bigint::BigUint;
use sigma_race::numerics::Exponent;
use sigma_race::params::one_change_params;
use sigma_race::race::{first_crossing, scan_constancy, Direction, RaceSpec};
use sigma_race::sigma::{factorize, sigma_s};
use sigma_race::witness::{
    certify_omega, certify_ratio, construct_newman_witness, verify_document, Artifact, Document, Verdict,
};
use sigma_race::{Error, RunConfig};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    Precondition = 5,
    WrongRegime = 6,
    Resource = 7,
    PrecisionUnreachable = 8,
    Undecided = 9,
    PartialFactorization = 10,
    Budget = 11,
    NoSolution = 12,
    Verification = 13,
    Io = 14,
    Json = 15,
    Panic = 16,
}

impl From<&Error> for SrStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Domain(_) => SrStatus::Domain,
            Error::Precondition(_) => SrStatus::Precondition,
            Error::WrongRegime(_) => SrStatus::WrongRegime,
            Error::Resource(_) => SrStatus::Resource,
            Error::PrecisionUnreachable { .. } => SrStatus::PrecisionUnreachable,
            Error::Undecided { .. } => SrStatus::Undecided,
            Error::PartialFactorization { .. } => SrStatus::PartialFactorization,
            Error::Budget(_) => SrStatus::Budget,
            Error::NoSolution(_) => SrStatus::NoSolution,
            Error::Verification(_) => SrStatus::Verification,
            Error::Parse(_) => SrStatus::Parse,
            Error::Io(_) => SrStatus::Io,
            Error::Json(_) => SrStatus::Json,
        }
    }
}

/// Run configuration.
pub struct SrConfig(RunConfig);

/// A race `σ_s(an+b)` against `σ_s(cn+d)` with a direction.
pub struct SrRace(RaceSpec);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(SrStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure((&e).into(), e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', "?")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Outcome) -> SrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            SrStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            SrStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(SrStatus::NullPointer, "null pointer argument".into())
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(SrStatus::InvalidUtf8, "argument is not UTF-8".into()))
}

unsafe fn put<T>(out: *mut T, v: T) -> Outcome {
    if out.is_null() {
        return Err(null());
    }
    out.write(v);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', "?")).unwrap_or_default().into_raw()
}

fn config_or_default<'a>(cfg: *const SrConfig, fallback: &'a RunConfig) -> &'a RunConfig {
    // SAFETY: callers pass either null or a live handle from `sr_config_new`.
    unsafe { cfg.as_ref().map_or(fallback, |c| &c.0) }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (truncated and
/// NUL-terminated) and returns the full message length without the NUL.
///
/// # Safety
/// `buf` must be null or point to at least `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn sr_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let bytes = e.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must be null or a pointer previously returned through a `char **`
/// out-parameter of this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// A configuration with the library defaults.
#[no_mangle]
pub extern "C" fn sr_config_new() -> *mut SrConfig {
    Box::into_raw(Box::new(SrConfig(RunConfig::default())))
}

/// Parses a TOML configuration; absent keys keep their defaults.
///
/// # Safety
/// `toml` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sr_config_from_toml(toml: *const c_char, out: *mut *mut SrConfig) -> SrStatus {
    guard(|| {
        let cfg = RunConfig::from_toml_str(text(toml)?)?;
        put(out, Box::into_raw(Box::new(SrConfig(cfg))))
    })
}

/// # Safety
/// `cfg` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sr_config_free(cfg: *mut SrConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sr_config_set_parallelism(cfg: *mut SrConfig, threads: usize) -> SrStatus {
    guard(|| {
        let c = cfg.as_mut().ok_or_else(null)?;
        let mut next = c.0.clone();
        next.parallelism = threads;
        next.validate()?;
        c.0 = next;
        Ok(())
    })
}

/// Sets the working precision, raising the cap if needed.
///
/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sr_config_set_precision(cfg: *mut SrConfig, bits: u32) -> SrStatus {
    guard(|| {
        let c = cfg.as_mut().ok_or_else(null)?;
        let mut next = c.0.clone();
        next.precision = bits;
        next.precision_cap = next.precision_cap.max(bits);
        next.validate()?;
        c.0 = next;
        Ok(())
    })
}

/// Creates a race. `s` accepts `2`, `-1`, `1/2`, `0.75`; `greater` selects
/// `σ_s(an+b) > σ_s(cn+d)` as the sought inequality.
///
/// # Safety
/// `s` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sr_race_new(
    a: u64,
    b: u64,
    c: u64,
    d: u64,
    s: *const c_char,
    greater: bool,
    out: *mut *mut SrRace,
) -> SrStatus {
    guard(|| {
        let s: Exponent = text(s)?.parse()?;
        let dir = if greater { Direction::Gt } else { Direction::Lt };
        let spec = RaceSpec::new(a, b, c, d, s, dir)?;
        put(out, Box::into_raw(Box::new(SrRace(spec))))
    })
}

/// # Safety
/// `race` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sr_race_free(race: *mut SrRace) {
    if !race.is_null() {
        drop(Box::from_raw(race));
    }
}

/// First `n <= limit` where the race's inequality holds. `cfg` may be null
/// for defaults. `*found` is false when there is none.
///
/// # Safety
/// `race` must be a live handle, `cfg` null or live, outputs writable.
#[no_mangle]
pub unsafe extern "C" fn sr_race_first_crossing(
    race: *const SrRace,
    cfg: *const SrConfig,
    limit: u64,
    found: *mut bool,
    n: *mut u64,
) -> SrStatus {
    guard(|| {
        let race = race.as_ref().ok_or_else(null)?;
        if found.is_null() || n.is_null() {
            return Err(null());
        }
        let fallback = RunConfig::default();
        let hit = first_crossing(&race.0, limit, config_or_default(cfg, &fallback))?;
        put(found, hit.is_some())?;
        put(n, hit.map_or(0, |h| h.n))
    })
}

/// Checks the race's inequality for every `n <= limit`; `*first_violation`
/// is 0 when it holds throughout.
///
/// # Safety
/// `race` must be a live handle, `cfg` null or live, output writable.
#[no_mangle]
pub unsafe extern "C" fn sr_race_scan(
    race: *const SrRace,
    cfg: *const SrConfig,
    limit: u64,
    first_violation: *mut u64,
) -> SrStatus {
    guard(|| {
        let race = race.as_ref().ok_or_else(null)?;
        if first_violation.is_null() {
            return Err(null());
        }
        let fallback = RunConfig::default();
        let rep = scan_constancy(&race.0, limit, config_or_default(cfg, &fallback))?;
        put(first_violation, rep.first_violation.unwrap_or(0))
    })
}

/// `σ_s(n)` for a decimal `n`, rendered exactly (`p/q`) when the value is
/// rational and otherwise to 30 significant digits.
///
/// # Safety
/// `n`, `s` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sr_sigma(
    n: *const c_char,
    s: *const c_char,
    cfg: *const SrConfig,
    out: *mut *mut c_char,
) -> SrStatus {
    guard(|| {
        let n: BigUint = text(n)?
            .parse()
            .map_err(|_| Failure(SrStatus::Parse, "n must be a decimal integer".into()))?;
        let s: Exponent = text(s)?.parse()?;
        let fallback = RunConfig::default();
        let cfg = config_or_default(cfg, &fallback);
        if out.is_null() {
            return Err(null());
        }
        let f = factorize(&n, None, cfg.rho_budget, cfg.seed)?;
        let v = sigma_s(&f, &s, cfg.precision)?;
        let rendered = match v.as_exact() {
            Some(r) => sigma_race::codec::format_ratio(r),
            None => v.display(30),
        };
        put(out, owned_string(rendered))
    })
}

/// Builds a witness document as JSON, with a ratio certificate when `s` is
/// non-null.
///
/// # Safety
/// `s` must be null or NUL-terminated; `cfg` null or live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sr_witness_newman(
    a: u64,
    b: u64,
    c: u64,
    d: u64,
    k: usize,
    s: *const c_char,
    cfg: *const SrConfig,
    out: *mut *mut c_char,
) -> SrStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let fallback = RunConfig::default();
        let cfg = config_or_default(cfg, &fallback);
        let s: Option<Exponent> = if s.is_null() { None } else { Some(text(s)?.parse()?) };
        let w = construct_newman_witness(a, b, c, d, k, cfg.prime_budget)?;
        let certificate = match &s {
            Some(s) => Some(certify_ratio(&w, s, cfg.precision)?),
            None => None,
        };
        let omega = certify_omega(&w)?;
        let doc = Document::new(Artifact::Newman {
            witness: w,
            certificate,
            omega,
        });
        put(out, owned_string(doc.to_json()?))
    })
}

/// Re-verifies a witness document. Returns `SR_STATUS_VERIFICATION` on any
/// mismatch; `*certified` reports a reproduced `certified_less` verdict.
///
/// # Safety
/// `json` must be NUL-terminated; `cfg` null or live; `certified` writable.
#[no_mangle]
pub unsafe extern "C" fn sr_witness_verify(json: *const c_char, cfg: *const SrConfig, certified: *mut bool) -> SrStatus {
    guard(|| {
        if certified.is_null() {
            return Err(null());
        }
        let fallback = RunConfig::default();
        let cfg = config_or_default(cfg, &fallback);
        let doc = Document::from_json(text(json)?)?;
        let rep = verify_document(&doc, &cfg.precision_ladder())?;
        put(certified, rep.verdict == Some(Verdict::CertifiedLess))
    })
}

/// `d = (M + q1/q2)(a-c) + b` and the least integer `s0` beyond which the
/// single crossing sits at `n = M + 1`.
///
/// # Safety
/// `cfg` null or live; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn sr_one_change_params(
    m: u64,
    a: u64,
    b: u64,
    c: u64,
    q1: u64,
    q2: u64,
    cfg: *const SrConfig,
    d_out: *mut u64,
    s0_out: *mut i64,
) -> SrStatus {
    guard(|| {
        if d_out.is_null() || s0_out.is_null() {
            return Err(null());
        }
        let fallback = RunConfig::default();
        let cfg = config_or_default(cfg, &fallback);
        let p = one_change_params(m, a, b, c, q1, q2, false, cfg.zeta_terms_cap)?;
        let s0 = p.s0.as_integer().expect("integer threshold");
        put(d_out, p.d)?;
        put(s0_out, s0)
    })
}
