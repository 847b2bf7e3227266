//! The C ABI, exercised from Rust and from a C client built against the
//! generated header.

use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use qbgg_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { qbgg_string_free(s) };
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(qbgg_last_error()) }.to_str().unwrap().to_owned()
}

fn twist(letter: &str, size: usize, tau: &str) -> *mut QbggTwist {
    let mut out = ptr::null_mut();
    let status = unsafe { qbgg_twist_new(c(letter).as_ptr(), size, c(tau).as_ptr(), &mut out) };
    assert_eq!(status, QbggStatus::Ok, "{}", last_error());
    out
}

#[test]
fn characters_cross_the_boundary_as_rationals() {
    let tw = twist("D", 3, "4,9,25");
    let mut out = ptr::null_mut();
    let status = unsafe { qbgg_character(tw, c("spinor").as_ptr(), c("1/2").as_ptr(), &mut out) };
    assert_eq!(status, QbggStatus::Ok, "{}", last_error());
    assert_eq!(take(out), "469/15");
    assert_eq!(last_error(), "");
    unsafe { qbgg_twist_free(tw) };
}

#[test]
fn errors_map_to_status_codes_with_messages() {
    let mut tw = ptr::null_mut();
    let repeated = unsafe { qbgg_twist_new(c("A").as_ptr(), 2, c("3,3").as_ptr(), &mut tw) };
    assert_eq!(repeated, QbggStatus::Degenerate);
    assert!(tw.is_null());
    assert!(!last_error().is_empty());
    let unparsable = unsafe { qbgg_twist_new(c("A").as_ptr(), 2, c("3,x").as_ptr(), &mut tw) };
    assert_eq!(unparsable, QbggStatus::Parse);
    let missing = unsafe { qbgg_twist_new(ptr::null(), 2, c("2,3").as_ptr(), &mut tw) };
    assert_eq!(missing, QbggStatus::NullPointer);

    let tw = twist("A", 2, "2,7");
    let mut out = ptr::null_mut();
    let status = unsafe { qbgg_character(tw, c("rect:1").as_ptr(), c("1/2").as_ptr(), &mut out) };
    assert_eq!(status, QbggStatus::NotDominant);
    assert!(last_error().contains("dominant"));
    let status = unsafe { qbgg_character(tw, c("rect:2").as_ptr(), c("1").as_ptr(), &mut out) };
    assert_eq!(status, QbggStatus::InvalidParameter);
    let mut q = ptr::null_mut();
    let status = unsafe { qbgg_q_subset(tw, ptr::null(), 1, 1, &mut q) };
    assert_eq!(status, QbggStatus::NullPointer);
    unsafe { qbgg_twist_free(tw) };
    unsafe { qbgg_twist_free(ptr::null_mut()) };
    unsafe { qbgg_operator_free(ptr::null_mut()) };
    unsafe { qbgg_string_free(ptr::null_mut()) };
}

#[test]
fn operators_are_opaque_handles() {
    let tw = twist("A", 2, "2,7");
    let mut finite = ptr::null_mut();
    let status = unsafe { qbgg_transfer_finite(tw, c("rect:1").as_ptr(), c("1").as_ptr(), 1, &mut finite) };
    assert_eq!(status, QbggStatus::Ok, "{}", last_error());
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { qbgg_operator_to_json(finite, &mut json) }, QbggStatus::Ok);
    let json = take(json);
    assert!(json.starts_with("[{\"class\":[\"0/1\",\"0/1\"],\"operator\":{"), "{json}");
    assert!(json.contains("\"K\":2"));

    let subset = [1usize];
    let mut q1 = ptr::null_mut();
    let mut q1_again = ptr::null_mut();
    unsafe {
        assert_eq!(qbgg_q_subset(tw, subset.as_ptr(), 1, 2, &mut q1), QbggStatus::Ok);
        assert_eq!(qbgg_q_subset(tw, subset.as_ptr(), 1, 2, &mut q1_again), QbggStatus::Ok);
    }
    let mut same = false;
    unsafe {
        assert_eq!(qbgg_operator_equal(q1, q1_again, &mut same), QbggStatus::Ok);
        assert!(same);
        assert_eq!(qbgg_operator_equal(q1, finite, &mut same), QbggStatus::Ok);
        assert!(!same);
        qbgg_operator_free(q1);
        qbgg_operator_free(q1_again);
        qbgg_operator_free(finite);
        qbgg_twist_free(tw);
    }
}

#[test]
fn suites_and_criteria_report_json_lines() {
    let mut lines = ptr::null_mut();
    let mut failures = usize::MAX;
    let status = unsafe { qbgg_run_suite(c("det").as_ptr(), 42, false, &mut lines, &mut failures) };
    assert_eq!(status, QbggStatus::Ok, "{}", last_error());
    assert_eq!(failures, 0);
    let text = take(lines);
    assert!(text.lines().count() >= 4);
    assert!(text.lines().all(|l| l.contains("\"status\":\"pass\"")));

    let status = unsafe { qbgg_run_suite(c("oracle").as_ptr(), 42, false, &mut lines, &mut failures) };
    assert_eq!(status, QbggStatus::InvalidParameter);
    let status = unsafe { qbgg_run_suite(c("nope").as_ptr(), 42, false, &mut lines, &mut failures) };
    assert_eq!(status, QbggStatus::InvalidParameter);

    let status = unsafe { qbgg_run_criterion(8, 42, &mut lines, ptr::null_mut()) };
    assert_eq!(status, QbggStatus::Ok);
    assert!(take(lines).contains("\"check\":\"limit\""));
    assert_eq!(unsafe { qbgg_run_criterion(10, 42, &mut lines, ptr::null_mut()) }, QbggStatus::InvalidParameter);
}

#[test]
fn header_declares_every_exported_function() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/qbgg.h")).unwrap();
    for name in [
        "qbgg_version",
        "qbgg_last_error",
        "qbgg_string_free",
        "qbgg_twist_new",
        "qbgg_twist_free",
        "qbgg_character",
        "qbgg_transfer_finite",
        "qbgg_q_subset",
        "qbgg_operator_to_json",
        "qbgg_operator_equal",
        "qbgg_operator_free",
        "qbgg_run_suite",
        "qbgg_run_criterion",
    ] {
        assert!(header.contains(&format!("{name}(")), "{name} missing from qbgg.h");
    }
    assert!(header.contains("typedef struct QbggTwist QbggTwist;"));
    assert!(header.contains("QBGG_STATUS_NOT_DOMINANT = 5"));
}

/// Compiles the C example against the header and the static library, when a
/// C compiler is available.
#[test]
fn c_client_links_and_runs() {
    let Ok(exe) = std::env::current_exe() else { return };
    let profile_dir = exe.parent().and_then(|d| d.parent()).map(PathBuf::from).unwrap();
    let lib = profile_dir.join("libqbgg_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no static library or C compiler");
        return;
    }
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let bin = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("qbgg_smoke");
    let status = Command::new("cc")
        .arg(manifest.join("examples/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C client failed to build");
    let out = Command::new(&bin).output().unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{stdout}{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout.contains("character 28/3"));
}
