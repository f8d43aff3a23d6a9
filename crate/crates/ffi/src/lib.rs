//! C ABI for the guarded lambda calculus toolkit.
//!
//! Programs are opaque handles. Every function returns a [`GlcStatus`];
//! on failure [`glc_last_error`] describes the error. Strings returned
//! through out-parameters are owned by the caller and released with
//! [`glc_string_free`]. Handles are not thread-safe and must be used on
//! the thread that created them.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use glc::adequacy::check_fundamental;
use glc::bde::{check_equations, BdeError, Session};
use glc::denote::{denote_closed, render};
use glc::eval::{eval, force_coinductive_stream, force_guarded_stream, Budget, EvalError};
use glc::parser::{parse_program_with, pretty_term};
use glc::prelude::load_prelude;
use glc::samples::Sampler;
use glc::typecheck::{check_program_with, Program};
use glc::{Term, Type};

/// Result of every call; the values match the exit codes of `glc`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GlcStatus {
    Ok = 0,
    TypeError = 1,
    ParseError = 2,
    BudgetExceeded = 3,
    PropertyFailure = 4,
    InvalidArgument = 5,
    Internal = 6,
}

/// A checked program: the prelude plus any parsed definitions.
pub struct GlcProgram {
    program: Program,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

type Res<T> = Result<T, (GlcStatus, String)>;

fn guard(f: impl FnOnce() -> Res<()>) -> GlcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            GlcStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal error");
            GlcStatus::Internal
        }
    }
}

fn invalid(msg: &str) -> (GlcStatus, String) {
    (GlcStatus::InvalidArgument, msg.to_string())
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Res<&'a str> {
    if s.is_null() {
        return Err(invalid(&format!("{what} is null")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| invalid(&format!("{what} is not UTF-8")))
}

unsafe fn program<'a>(p: *const GlcProgram) -> Res<&'a Program> {
    p.as_ref()
        .map(|p| &p.program)
        .ok_or_else(|| invalid("program is null"))
}

fn lookup(program: &Program, name: &str) -> Res<(Term, Type)> {
    program
        .get(name)
        .map(|d| (d.term.clone(), d.ty.clone()))
        .ok_or_else(|| {
            (
                GlcStatus::TypeError,
                format!("no definition named `{name}`"),
            )
        })
}

fn eval_failure(e: EvalError) -> (GlcStatus, String) {
    match e {
        EvalError::BudgetExceeded { .. } => (GlcStatus::BudgetExceeded, e.to_string()),
        EvalError::Stuck(_) => (GlcStatus::TypeError, e.to_string()),
    }
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Res<()> {
    if out.is_null() {
        return Err(invalid("output pointer is null"));
    }
    *out = CString::new(s.replace('\0', " "))
        .unwrap_or_default()
        .into_raw();
    Ok(())
}

unsafe fn put_program(out: *mut *mut GlcProgram, program: Program) -> Res<()> {
    if out.is_null() {
        return Err(invalid("output pointer is null"));
    }
    *out = Box::into_raw(Box::new(GlcProgram { program }));
    Ok(())
}

/// Message of the last failed call on this thread, empty after success.
/// The pointer is valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn glc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Load the shipped prelude.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn glc_load_prelude(out: *mut *mut GlcProgram) -> GlcStatus {
    guard(|| put_program(out, load_prelude()))
}

/// Parse and check `source` on top of the prelude.
///
/// # Safety
/// `source` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn glc_parse(source: *const c_char, out: *mut *mut GlcProgram) -> GlcStatus {
    guard(|| {
        let src = text(source, "source")?;
        let prelude = load_prelude();
        let parsed = parse_program_with(src, "<source>", &prelude.aliases)
            .map_err(|e| (GlcStatus::ParseError, format!("{}: {e}", e.span)))?;
        let checked = check_program_with(&prelude, &parsed)
            .map_err(|e| (GlcStatus::TypeError, e.render("<source>")))?;
        put_program(out, checked)
    })
}

/// Release a program. Null is ignored.
///
/// # Safety
/// `p` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn glc_program_free(p: *mut GlcProgram) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn glc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Write the first `n` elements of the stream `name` to `buf`.
///
/// # Safety
/// `buf` must be valid for `n` writes.
#[no_mangle]
pub unsafe extern "C" fn glc_take(
    p: *const GlcProgram,
    name: *const c_char,
    n: usize,
    budget: u64,
    buf: *mut u64,
) -> GlcStatus {
    guard(|| {
        let (t, ty) = lookup(program(p)?, text(name, "name")?)?;
        if buf.is_null() && n > 0 {
            return Err(invalid("buffer is null"));
        }
        let mut b = Budget::new(budget);
        let prefix = if ty == Type::guarded_stream() {
            force_guarded_stream(&t, n, &mut b)
        } else if ty == Type::stream() {
            force_coinductive_stream(&t, n, &mut b)
        } else {
            return Err((GlcStatus::TypeError, format!("{ty} is not a stream type")));
        }
        .map_err(eval_failure)?;
        for (k, x) in prefix.into_iter().enumerate() {
            *buf.add(k) = x;
        }
        Ok(())
    })
}

/// Evaluate `name` and print its value.
///
/// # Safety
/// Pointers must be valid; `out` receives a string to free.
#[no_mangle]
pub unsafe extern "C" fn glc_eval(
    p: *const GlcProgram,
    name: *const c_char,
    budget: u64,
    out: *mut *mut c_char,
) -> GlcStatus {
    guard(|| {
        let (t, _) = lookup(program(p)?, text(name, "name")?)?;
        let ev = eval(&t, budget).map_err(eval_failure)?;
        put_string(out, pretty_term(&ev.value))
    })
}

/// Render the denotation of `name` at `index`.
///
/// # Safety
/// Pointers must be valid; `out` receives a string to free.
#[no_mangle]
pub unsafe extern "C" fn glc_denote(
    p: *const GlcProgram,
    name: *const c_char,
    index: usize,
    out: *mut *mut c_char,
) -> GlcStatus {
    guard(|| {
        if index == 0 {
            return Err(invalid("index must be positive"));
        }
        let (t, _) = lookup(program(p)?, text(name, "name")?)?;
        let a = denote_closed(&t, index).map_err(|e| (GlcStatus::TypeError, e.to_string()))?;
        put_string(out, render(&a, index))
    })
}

/// Check that `name` is related to its denotation at `index`. A failed
/// check returns `PropertyFailure`; `exact` reports whether no sampling
/// was needed.
///
/// # Safety
/// Pointers must be valid; `exact` may be null.
#[no_mangle]
pub unsafe extern "C" fn glc_adequacy(
    p: *const GlcProgram,
    name: *const c_char,
    index: usize,
    exact: *mut bool,
) -> GlcStatus {
    guard(|| {
        if index == 0 {
            return Err(invalid("index must be positive"));
        }
        let (t, ty) = lookup(program(p)?, text(name, "name")?)?;
        let v = check_fundamental(&t, &ty, index, &Sampler::new());
        if !exact.is_null() {
            *exact = v.mode == glc::denote::Mode::Exact;
        }
        if v.inconclusive {
            Err((
                GlcStatus::BudgetExceeded,
                "evaluation exhausted its budget".into(),
            ))
        } else if v.holds {
            Ok(())
        } else {
            Err((GlcStatus::PropertyFailure, v.witness.unwrap_or_default()))
        }
    })
}

/// Compile a stream-equation specification. With `depth > 0` the equations
/// are checked on sample streams to that depth. `out` receives the
/// compiled definitions.
///
/// # Safety
/// Pointers must be valid; `out` receives a string to free.
#[no_mangle]
pub unsafe extern "C" fn glc_bde(
    spec: *const c_char,
    depth: usize,
    out: *mut *mut c_char,
) -> GlcStatus {
    guard(|| {
        let src = text(spec, "spec")?;
        let mut session = Session::new();
        session.compile_file(src).map_err(|e| match e {
            BdeError::Parse(e) => (GlcStatus::ParseError, format!("{}: {e}", e.span)),
            BdeError::Spec(e) => (GlcStatus::TypeError, format!("{}: {}", e.span, e.message)),
            BdeError::Internal(e) => (GlcStatus::Internal, e.to_string()),
        })?;
        if depth > 0 {
            for c in &session.compiled {
                let report =
                    check_equations(&session, &c.spec, &c.lifted, depth).map_err(eval_failure)?;
                if let Some(m) = report.mismatch {
                    return Err((GlcStatus::PropertyFailure, format!("{}: {m}", c.spec.name)));
                }
            }
        }
        let source: String = session.compiled.iter().map(|c| c.source.as_str()).collect();
        put_string(out, source)
    })
}
