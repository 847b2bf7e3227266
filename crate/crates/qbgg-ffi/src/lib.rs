//! C ABI for the exact checks of the `qbgg` crate.
//!
//! Conventions:
//! - Every fallible function returns a [`QbggStatus`]; on failure the message
//!   is available from [`qbgg_last_error`] on the same thread.
//! - Objects are opaque handles created by `*_new`/computing functions and
//!   released by the matching `*_free`; passing NULL to a `*_free` is a no-op.
//! - Rationals cross the boundary as strings `"p/q"` or `"p"`; lists as
//!   comma-separated strings. Returned strings are owned by the caller and
//!   released with [`qbgg_string_free`].
//! - Panics never unwind into C; they surface as [`QbggStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use qbgg::cli::suites::criterion;
use qbgg::cli::{parse_list, run_suite, Params, Suite};
use qbgg::coeff::{format_rational, parse_rational};
use qbgg::error::QbggError;
use qbgg::report::{CheckReport, Status};
use qbgg::transfer::cases::{module_lax, q_subset};
use qbgg::transfer::finite::{build_finite_module, transfer_finite};
use qbgg::transfer::twist::TwistSpec;
use qbgg::transfer::Twisted;
use qbgg::transfer::TensorOperator;
use qbgg::weyl::{check_dominant, weyl_character, AlgebraType, ModuleCase};

/// Result codes of every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QbggStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Parameters violate an admissibility rule.
    InvalidParameter = 3,
    /// A number or list could not be parsed.
    Parse = 4,
    /// The highest weight is not dominant integral.
    NotDominant = 5,
    /// Division by zero, or a twist hitting a pole of a trace or character.
    Degenerate = 6,
    /// A rational power has no rational value.
    InexactRoot = 7,
    /// Operators that must commute do not.
    NonCommuting = 8,
    /// Any other failure of the computation.
    Internal = 9,
    /// A panic was caught at the boundary.
    Panic = 10,
}

impl From<&QbggError> for QbggStatus {
    fn from(e: &QbggError) -> Self {
        match e {
            QbggError::InvalidParameter(_) | QbggError::DimensionMismatch { .. } => QbggStatus::InvalidParameter,
            QbggError::Parse(_) => QbggStatus::Parse,
            QbggError::NotDominant(_) => QbggStatus::NotDominant,
            QbggError::DivisionByZero | QbggError::DivergentTrace(_) | QbggError::DegenerateTwist(_) => {
                QbggStatus::Degenerate
            }
            QbggError::InexactRoot(_) => QbggStatus::InexactRoot,
            QbggError::NonCommuting(_) => QbggStatus::NonCommuting,
            _ => QbggStatus::Internal,
        }
    }
}

/// Opaque twist `τ` tied to an algebra.
pub struct QbggTwist(TwistSpec);

/// Opaque operator on the quantum space, split into formal `τ`-classes.
pub struct QbggOperator(Twisted<TensorOperator>);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(QbggStatus, String);

impl From<QbggError> for Failure {
    fn from(e: QbggError) -> Self {
        Failure(QbggStatus::from(&e), e.to_string())
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> QbggStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            QbggStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("panic: {message}"));
            QbggStatus::Panic
        }
    }
}

fn null(name: &str) -> Failure {
    Failure(QbggStatus::NullPointer, format!("{name} is NULL"))
}

/// Borrows a C string argument.
///
/// # Safety
/// `p` must be NULL or point to a NUL-terminated string.
unsafe fn text<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(QbggStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

/// Writes an owned string to an out-pointer.
///
/// # Safety
/// `out` must be valid for writes.
unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(s).map_err(|_| Failure(QbggStatus::Internal, "interior NUL in output".into()))?;
    *out = c.into_raw();
    Ok(())
}

/// Parses a module case: `rect:<a>`, `symplectic`, `spinor`, `spinor-odd` or `vector`.
fn parse_case(s: &str, alg: &AlgebraType) -> Result<ModuleCase, QbggError> {
    let case = match s {
        "symplectic" => ModuleCase::Symplectic,
        "spinor" => ModuleCase::Spinor { odd: false },
        "spinor-odd" => ModuleCase::Spinor { odd: true },
        "vector" => ModuleCase::Vector,
        other => match other.strip_prefix("rect:").map(str::parse) {
            Some(Ok(a)) => ModuleCase::Rect { a },
            _ => return Err(QbggError::Parse(format!("unknown module case {other}"))),
        },
    };
    case.validate(alg)?;
    Ok(case)
}

fn twist_ref<'a>(twist: *const QbggTwist) -> Result<&'a TwistSpec, Failure> {
    // SAFETY: handles are only created by `qbgg_twist_new` and stay valid until freed.
    unsafe { twist.as_ref() }.map(|t| &t.0).ok_or_else(|| null("twist"))
}

fn put_operator(out: *mut *mut QbggOperator, op: Twisted<TensorOperator>) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    // SAFETY: checked non-NULL; the caller provides a writable slot.
    unsafe { *out = Box::into_raw(Box::new(QbggOperator(op))) };
    Ok(())
}

/// Version of the library as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qbgg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread (empty after success).
/// The pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn qbgg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by the library.
///
/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qbgg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates a twist for the algebra `letter` (`A`, `B`, `C`, `D`, or `BD`
/// with `size` the dimension K) of the given size and comma-separated `tau`.
/// Non-generic twists are rejected with [`QbggStatus::Degenerate`].
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qbgg_twist_new(
    letter: *const c_char,
    size: usize,
    tau: *const c_char,
    out: *mut *mut QbggTwist,
) -> QbggStatus {
    guard(|| {
        let letter = text(letter, "letter")?;
        let tau = parse_list(text(tau, "tau")?)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let by_dimension = letter.eq_ignore_ascii_case("BD");
        let alg = AlgebraType::from_letter(&letter.to_ascii_uppercase(), size, by_dimension)?;
        *out = Box::into_raw(Box::new(QbggTwist(TwistSpec::new(alg, tau)?)));
        Ok(())
    })
}

/// Releases a twist.
///
/// # Safety
/// `twist` must be NULL or a handle from [`qbgg_twist_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qbgg_twist_free(twist: *mut QbggTwist) {
    if !twist.is_null() {
        drop(Box::from_raw(twist));
    }
}

/// Character of the finite-dimensional module of `case` at parameter `t`,
/// evaluated at the twist, as a rational string.
///
/// # Safety
/// `twist` must be a live handle; strings NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qbgg_character(
    twist: *const QbggTwist,
    case: *const c_char,
    t: *const c_char,
    out: *mut *mut c_char,
) -> QbggStatus {
    guard(|| {
        let twist = twist_ref(twist)?;
        let alg = *twist.alg();
        let case = parse_case(text(case, "case")?, &alg)?;
        let t = parse_rational(text(t, "t")?)?;
        let hw = case.highest_weight(&alg, &t);
        check_dominant(&alg, &hw)?;
        put_string(out, format_rational(&weyl_character(&alg, &hw, twist.tau())?))
    })
}

/// Transfer matrix of the finite-dimensional module of `case` at `t` on `sites` sites.
///
/// # Safety
/// `twist` must be a live handle; strings NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qbgg_transfer_finite(
    twist: *const QbggTwist,
    case: *const c_char,
    t: *const c_char,
    sites: usize,
    out: *mut *mut QbggOperator,
) -> QbggStatus {
    guard(|| {
        let twist = twist_ref(twist)?;
        let alg = *twist.alg();
        let case = parse_case(text(case, "case")?, &alg)?;
        let t = parse_rational(text(t, "t")?)?;
        check_dominant(&alg, &case.highest_weight(&alg, &t))?;
        let module = build_finite_module(&module_lax(&alg, &case, &t)?)?;
        put_operator(out, transfer_finite(&module, twist, sites)?)
    })
}

/// Q-operator `Q_I` of `gl_n` for the 1-based subset `I` (`subset[0..len]`)
/// on `sites` sites; the twist must be of type A.
///
/// # Safety
/// `twist` must be a live handle; `subset` valid for `len` reads; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qbgg_q_subset(
    twist: *const QbggTwist,
    subset: *const usize,
    len: usize,
    sites: usize,
    out: *mut *mut QbggOperator,
) -> QbggStatus {
    guard(|| {
        let twist = twist_ref(twist)?;
        let AlgebraType::A(n) = *twist.alg() else {
            return Err(QbggError::InvalidParameter(format!("Q_I needs a type A twist, not {}", twist.alg())).into());
        };
        if subset.is_null() && len > 0 {
            return Err(null("subset"));
        }
        let subset = if len == 0 { &[][..] } else { std::slice::from_raw_parts(subset, len) };
        let op = q_subset(n, subset, twist, sites)?;
        put_operator(out, Twisted::plain(twist.tau(), op))
    })
}

/// Operator as JSON: `[{"class": [...], "operator": {"N", "K", "coeffs"}}]`.
///
/// # Safety
/// `op` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qbgg_operator_to_json(op: *const QbggOperator, out: *mut *mut c_char) -> QbggStatus {
    guard(|| {
        let op = op.as_ref().ok_or_else(|| null("op"))?;
        let terms: Vec<String> = op
            .0
            .terms()
            .iter()
            .map(|(class, o)| {
                let class: Vec<String> = class.iter().map(|c| format!("\"{}\"", format_rational(c))).collect();
                format!("{{\"class\":[{}],\"operator\":{}}}", class.join(","), o.to_json())
            })
            .collect();
        put_string(out, format!("[{}]", terms.join(",")))
    })
}

/// True (1) when two operators agree exactly, class by class.
///
/// # Safety
/// Both handles must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qbgg_operator_equal(a: *const QbggOperator, b: *const QbggOperator, out: *mut bool) -> QbggStatus {
    guard(|| {
        let a = a.as_ref().ok_or_else(|| null("a"))?;
        let b = b.as_ref().ok_or_else(|| null("b"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = a.0 == b.0;
        Ok(())
    })
}

/// Releases an operator.
///
/// # Safety
/// `op` must be NULL or a handle returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qbgg_operator_free(op: *mut QbggOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

fn write_reports(reports: &[CheckReport], json_lines: *mut *mut c_char, failures: *mut usize) -> Result<(), Failure> {
    let text: String = reports.iter().map(|r| r.to_json_line() + "\n").collect();
    // SAFETY: the caller passes a writable slot (or NULL, rejected inside).
    unsafe { put_string(json_lines, text)? };
    if !failures.is_null() {
        // SAFETY: checked non-NULL.
        unsafe { *failures = reports.iter().filter(|r| r.status == Status::Fail).count() };
    }
    Ok(())
}

/// Runs a named suite (`rtt`, `bgg`, `det`, …, as in the command line) over its
/// acceptance grid with the given seed. Writes the JSON-lines report stream
/// and, if `failures` is non-NULL, the number of failed checks.
/// The floating-point `oracle` suite runs only when `allow_oracle` is true.
///
/// # Safety
/// `suite` NUL-terminated; `json_lines` writable; `failures` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn qbgg_run_suite(
    suite: *const c_char,
    seed: u64,
    allow_oracle: bool,
    json_lines: *mut *mut c_char,
    failures: *mut usize,
) -> QbggStatus {
    guard(|| {
        let name = text(suite, "suite")?;
        let suite: Suite = name
            .parse()
            .map_err(|_| Failure(QbggStatus::InvalidParameter, format!("unknown suite {name}")))?;
        let reports = run_suite(suite, &Params::default(), seed, false, allow_oracle)?;
        write_reports(&reports, json_lines, failures)
    })
}

/// Runs acceptance criterion `number` (1–9); output as for [`qbgg_run_suite`].
///
/// # Safety
/// `json_lines` writable; `failures` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn qbgg_run_criterion(
    number: usize,
    seed: u64,
    json_lines: *mut *mut c_char,
    failures: *mut usize,
) -> QbggStatus {
    guard(|| {
        if !(1..=9).contains(&number) {
            return Err(Failure(QbggStatus::InvalidParameter, format!("criterion {number} outside 1..=9")));
        }
        write_reports(&criterion(number, seed, false), json_lines, failures)
    })
}
