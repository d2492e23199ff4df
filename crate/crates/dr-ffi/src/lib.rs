//! C ABI for the dr checker/evaluator.
//!
//! A session owns a parsed and checked signature behind an opaque handle.
//! Every function returns a status code (mirroring the CLI exit codes)
//! and reports results/diagnostics through caller-freed C strings. See
//! include/dr.h for the C declarations.

use std::ffi::{c_char, c_int, CStr, CString};
use std::ptr;

use dr_core::equality::{def_eq, EqEnv};
use dr_core::parse::{parse_entries, parse_expr};
use dr_core::print::{print_roles, print_term};
use dr_core::reduce::{reduce, StepOutcome, DEFAULT_FUEL};
use dr_core::roles::{role_path, Role};
use dr_core::syntax::{erase, Ctx, Signature};
use dr_core::typecheck::{check_entry, infer};

pub const DR_OK: c_int = 0;
pub const DR_REJECTED: c_int = 1;
pub const DR_UNKNOWN: c_int = 2;
pub const DR_USAGE: c_int = 64;
pub const DR_PARSE_ERROR: c_int = 65;

pub const DR_ROLE_NOM: c_int = 0;
pub const DR_ROLE_REP: c_int = 1;

/// Opaque session handle: a parsed, well-formed signature.
pub struct DrSession {
    sig: Signature,
}

fn set_out(slot: *mut *mut c_char, text: &str) {
    if slot.is_null() {
        return;
    }
    let c = CString::new(text.replace('\0', " ")).unwrap_or_default();
    unsafe { *slot = c.into_raw() };
}

fn role_of(raw: c_int) -> Option<Role> {
    match raw {
        DR_ROLE_NOM => Some(Role::Nom),
        DR_ROLE_REP => Some(Role::Rep),
        _ => None,
    }
}

unsafe fn str_arg<'a>(ptr: *const c_char) -> Option<&'a str> {
    if ptr.is_null() {
        return None;
    }
    CStr::from_ptr(ptr).to_str().ok()
}

/// Parse and check a signature, returning a session handle. On failure
/// returns null and writes a diagnostic to `err_out`.
///
/// # Safety
/// `source` must be a valid NUL-terminated string; `err_out`, when
/// non-null, must point to a writable `char*` slot. The returned handle
/// must be released with `dr_session_free`, and any `*err_out` string
/// with `dr_string_free`.
#[no_mangle]
pub unsafe extern "C" fn dr_session_open(
    source: *const c_char,
    err_out: *mut *mut c_char,
) -> *mut DrSession {
    let Some(src) = str_arg(source) else {
        set_out(err_out, "source must be valid UTF-8");
        return ptr::null_mut();
    };
    let entries = match parse_entries(src) {
        Ok(entries) => entries,
        Err(e) => {
            set_out(err_out, &e.to_string());
            return ptr::null_mut();
        }
    };
    let sig = match Signature::from_entries(entries) {
        Ok(sig) => sig,
        Err(e) => {
            set_out(err_out, &e.to_string());
            return ptr::null_mut();
        }
    };
    for entry in sig.iter() {
        if let Err(e) = check_entry(&sig, entry) {
            set_out(err_out, &e.to_string());
            return ptr::null_mut();
        }
    }
    Box::into_raw(Box::new(DrSession { sig }))
}

/// Release a session handle.
///
/// # Safety
/// `session` must be null or a handle returned by `dr_session_open` that
/// has not been freed.
#[no_mangle]
pub unsafe extern "C" fn dr_session_free(session: *mut DrSession) {
    if !session.is_null() {
        drop(Box::from_raw(session));
    }
}

/// Check a signature source, writing per-declaration verdicts to
/// `report_out`. Returns DR_OK, DR_REJECTED or DR_PARSE_ERROR.
///
/// # Safety
/// As for `dr_session_open`.
#[no_mangle]
pub unsafe extern "C" fn dr_check(
    source: *const c_char,
    report_out: *mut *mut c_char,
) -> c_int {
    let Some(src) = str_arg(source) else {
        set_out(report_out, "source must be valid UTF-8");
        return DR_USAGE;
    };
    let entries = match parse_entries(src) {
        Ok(entries) => entries,
        Err(e) => {
            set_out(report_out, &e.to_string());
            return DR_PARSE_ERROR;
        }
    };
    let sig = match Signature::from_entries(entries) {
        Ok(sig) => sig,
        Err(e) => {
            set_out(report_out, &e.to_string());
            return DR_REJECTED;
        }
    };
    let mut report = String::new();
    let mut ok = true;
    for entry in sig.iter() {
        match check_entry(&sig, entry) {
            Ok(()) => report.push_str(&format!("{}: ok\n", entry.name())),
            Err(e) => {
                ok = false;
                report.push_str(&format!("{}: error: {e}\n", entry.name()));
            }
        }
    }
    set_out(report_out, &report);
    if ok {
        DR_OK
    } else {
        DR_REJECTED
    }
}

/// Typecheck and evaluate an expression; writes the normal form (or a
/// diagnostic) to `out`. Returns DR_OK, DR_REJECTED, DR_UNKNOWN (fuel) or
/// DR_PARSE_ERROR.
///
/// # Safety
/// `session` must be a live handle from `dr_session_open`; string and out
/// parameters as for `dr_session_open`. `fuel` of 0 means the default.
#[no_mangle]
pub unsafe extern "C" fn dr_eval(
    session: *const DrSession,
    expr: *const c_char,
    role: c_int,
    fuel: u64,
    out: *mut *mut c_char,
) -> c_int {
    let Some(session) = session.as_ref() else {
        set_out(out, "null session");
        return DR_USAGE;
    };
    let Some(role) = role_of(role) else {
        set_out(out, "role must be DR_ROLE_NOM or DR_ROLE_REP");
        return DR_USAGE;
    };
    let Some(src) = str_arg(expr) else {
        set_out(out, "expr must be valid UTF-8");
        return DR_USAGE;
    };
    let term = match parse_expr(&session.sig, src) {
        Ok(t) => t,
        Err(e) => {
            set_out(out, &e.to_string());
            return DR_PARSE_ERROR;
        }
    };
    if let Err(e) = infer(&session.sig, &Ctx::new(), &term) {
        set_out(out, &e.to_string());
        return DR_REJECTED;
    }
    let fuel = if fuel == 0 { DEFAULT_FUEL } else { fuel };
    let res = reduce(&session.sig, role, &erase(&term), fuel);
    set_out(out, &print_term(&res.term));
    if res.exhausted {
        return DR_UNKNOWN;
    }
    if matches!(res.outcome, StepOutcome::Stuck(_)) {
        return DR_REJECTED;
    }
    DR_OK
}

/// Decide definitional equality of two expressions at a role. Returns
/// DR_OK (equal), DR_REJECTED (not equal or ill-typed), DR_UNKNOWN
/// (fuel), or DR_PARSE_ERROR; a diagnostic or verdict goes to `out`.
///
/// # Safety
/// As for `dr_eval`.
#[no_mangle]
pub unsafe extern "C" fn dr_equal(
    session: *const DrSession,
    expr_a: *const c_char,
    expr_b: *const c_char,
    role: c_int,
    fuel: u64,
    out: *mut *mut c_char,
) -> c_int {
    let Some(session) = session.as_ref() else {
        set_out(out, "null session");
        return DR_USAGE;
    };
    let Some(role) = role_of(role) else {
        set_out(out, "role must be DR_ROLE_NOM or DR_ROLE_REP");
        return DR_USAGE;
    };
    let (Some(a_src), Some(b_src)) = (str_arg(expr_a), str_arg(expr_b)) else {
        set_out(out, "exprs must be valid UTF-8");
        return DR_USAGE;
    };
    let mut terms = Vec::new();
    for src in [a_src, b_src] {
        match parse_expr(&session.sig, src) {
            Ok(t) => terms.push(t),
            Err(e) => {
                set_out(out, &e.to_string());
                return DR_PARSE_ERROR;
            }
        }
    }
    let mut tys = Vec::new();
    for t in &terms {
        match infer(&session.sig, &Ctx::new(), t) {
            Ok(ty) => tys.push(ty),
            Err(e) => {
                set_out(out, &e.to_string());
                return DR_REJECTED;
            }
        }
    }
    let mut env = EqEnv::new(&session.sig);
    if fuel != 0 {
        env.fuel = fuel;
    }
    match def_eq(&env, Role::Rep, &tys[0], &tys[1]) {
        Ok(true) => {}
        Ok(false) => {
            set_out(out, "the expressions do not share a type");
            return DR_REJECTED;
        }
        Err(_) => {
            set_out(out, "unknown (fuel)");
            return DR_UNKNOWN;
        }
    }
    match def_eq(&env, role, &erase(&terms[0]), &erase(&terms[1])) {
        Ok(true) => {
            set_out(out, "equal");
            DR_OK
        }
        Ok(false) => {
            set_out(out, "not-equal");
            DR_REJECTED
        }
        Err(_) => {
            set_out(out, "unknown (fuel)");
            DR_UNKNOWN
        }
    }
}

/// Print the declared roles still expected by a constant-headed path, or
/// report that the expression is not one.
///
/// # Safety
/// As for `dr_eval`.
#[no_mangle]
pub unsafe extern "C" fn dr_roles(
    session: *const DrSession,
    expr: *const c_char,
    out: *mut *mut c_char,
) -> c_int {
    let Some(session) = session.as_ref() else {
        set_out(out, "null session");
        return DR_USAGE;
    };
    let Some(src) = str_arg(expr) else {
        set_out(out, "expr must be valid UTF-8");
        return DR_USAGE;
    };
    let term = match parse_expr(&session.sig, src) {
        Ok(t) => t,
        Err(e) => {
            set_out(out, &e.to_string());
            return DR_PARSE_ERROR;
        }
    };
    match role_path(&session.sig, &erase(&term)) {
        Some(roles) => set_out(out, &print_roles(&roles)),
        None => set_out(out, "not a constant-headed path"),
    }
    DR_OK
}

/// Free a string returned through any `*_out` parameter.
///
/// # Safety
/// `s` must be null or a pointer produced by this library that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn dr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
