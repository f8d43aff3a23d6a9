use std::ffi::{c_char, CStr, CString};
use std::ptr;

use glc_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take_string(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    glc_string_free(s);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(glc_last_error())
        .to_str()
        .unwrap()
        .to_string()
}

#[test]
fn prelude_streams() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(glc_load_prelude(&mut p), GlcStatus::Ok);
        let mut buf = [0u64; 8];
        let name = c("paperfolds");
        assert_eq!(
            glc_take(p, name.as_ptr(), 8, 1_000_000, buf.as_mut_ptr()),
            GlcStatus::Ok
        );
        assert_eq!(buf, [1, 1, 0, 1, 1, 0, 0, 1]);
        let mut s = ptr::null_mut();
        assert_eq!(
            glc_denote(p, c("toggle").as_ptr(), 3, &mut s),
            GlcStatus::Ok
        );
        assert_eq!(take_string(s), "(1, 0, 1)");
        let mut exact = false;
        assert_eq!(
            glc_adequacy(p, c("paperfolds").as_ptr(), 3, &mut exact),
            GlcStatus::Ok
        );
        assert!(exact);
        glc_program_free(p);
    }
}

#[test]
fn parse_and_eval() {
    unsafe {
        let mut p = ptr::null_mut();
        let src = c("def two : Nat = second (box nats) + 1;");
        assert_eq!(glc_parse(src.as_ptr(), &mut p), GlcStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(glc_eval(p, c("two").as_ptr(), 1000, &mut s), GlcStatus::Ok);
        assert_eq!(take_string(s), "2");
        assert_eq!(
            glc_eval(p, c("two").as_ptr(), 3, &mut s),
            GlcStatus::BudgetExceeded
        );
        assert_eq!(
            glc_eval(p, c("three").as_ptr(), 1000, &mut s),
            GlcStatus::TypeError
        );
        assert!(last_error().contains("three"));
        glc_program_free(p);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(
            glc_parse(c("def x : Nat = ;").as_ptr(), &mut p),
            GlcStatus::ParseError
        );
        assert!(p.is_null());
        let bad = c("def bad : StrG -> |>StrG = \\s. next (prev iota. tlg s);");
        assert_eq!(glc_parse(bad.as_ptr(), &mut p), GlcStatus::TypeError);
        assert!(
            last_error().contains("nonconstant-context"),
            "{}",
            last_error()
        );
        let mut s = ptr::null_mut();
        assert_eq!(
            glc_denote(ptr::null(), c("x").as_ptr(), 1, &mut s),
            GlcStatus::InvalidArgument
        );
    }
}

#[test]
fn stream_equations() {
    unsafe {
        let spec = c("bde plus(2) { head = x1 + x2; tail = f(z1, z2); }");
        let mut s = ptr::null_mut();
        assert_eq!(glc_bde(spec.as_ptr(), 4, &mut s), GlcStatus::Ok);
        assert!(take_string(s).starts_with("def plusg : StrG -> StrG -> StrG ="));
        let bad = c("bde plus(2) { head = x1 + y2; tail = f(z1, z2); }");
        assert_eq!(glc_bde(bad.as_ptr(), 4, &mut s), GlcStatus::TypeError);
        assert!(last_error().contains("y2"));
    }
}

#[test]
fn header_is_generated() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/glc.h")).unwrap();
    for sym in [
        "glc_load_prelude",
        "glc_parse",
        "glc_take",
        "glc_bde",
        "GLC_STATUS_BUDGET_EXCEEDED",
        "typedef struct GlcProgram GlcProgram",
    ] {
        assert!(header.contains(sym), "{sym}");
    }
}
