use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use sethforge_ffi::*;

const FORMULA: &str = "p cnf 2 1\n1 -2 0\n";

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(sf_last_error()) }.to_string_lossy().into_owned()
}

fn parse(text: &str) -> *mut SfFormula {
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { sf_formula_parse(cstr(text).as_ptr(), &mut f) }, SfStatus::Ok);
    f
}

#[test]
fn reduce_and_solve_round_trip() {
    let f = parse(FORMULA);
    let mut sat = false;
    assert_eq!(unsafe { sf_formula_satisfiable(f, &mut sat) }, SfStatus::Ok);
    assert!(sat);
    for problem in ["is", "maxcut", "packing"] {
        let mut inst = ptr::null_mut();
        assert_eq!(unsafe { sf_reduce(f, cstr(problem).as_ptr(), 1, 3, &mut inst) }, SfStatus::Ok, "{problem}");
        let mut info = SfInstanceInfo::default();
        assert_eq!(unsafe { sf_instance_info(inst, &mut info) }, SfStatus::Ok);
        assert!(info.has_target && info.width <= info.width_bound);
        let mut ans = SfAnswer::default();
        assert_eq!(unsafe { sf_solve(inst, SfOracle::Dp, 0, &mut ans) }, SfStatus::Ok);
        assert!(ans.verdict && ans.has_optimum && ans.max_states > 0, "{problem}");
        unsafe { sf_instance_free(inst) };
    }
    unsafe { sf_formula_free(f) };
}

#[test]
fn bundle_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let f = parse(FORMULA);
    let mut inst = ptr::null_mut();
    assert_eq!(unsafe { sf_reduce(f, cstr("is").as_ptr(), 1, 3, &mut inst) }, SfStatus::Ok);
    let d = cstr(dir.path().to_str().unwrap());
    assert_eq!(unsafe { sf_bundle_write(inst, d.as_ptr(), cstr("x").as_ptr()) }, SfStatus::Ok);
    let mut back = ptr::null_mut();
    let base = cstr(dir.path().join("x.gr").to_str().unwrap());
    assert_eq!(unsafe { sf_bundle_read(base.as_ptr(), &mut back) }, SfStatus::Ok);
    let (mut a, mut b) = (SfInstanceInfo::default(), SfInstanceInfo::default());
    unsafe {
        sf_instance_info(inst, &mut a);
        sf_instance_info(back, &mut b);
    }
    assert_eq!((a.vertices, a.edges, a.width, a.target), (b.vertices, b.edges, b.width, b.target));

    let missing = cstr(dir.path().join("nope").to_str().unwrap());
    let mut none = ptr::null_mut();
    assert_eq!(unsafe { sf_bundle_read(missing.as_ptr(), &mut none) }, SfStatus::Io);
    assert!(none.is_null());
    unsafe {
        sf_instance_free(inst);
        sf_instance_free(back);
        sf_formula_free(f);
    }
}

#[test]
fn errors_map_to_status_codes() {
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { sf_formula_parse(ptr::null(), &mut f) }, SfStatus::NullPointer);
    assert_eq!(unsafe { sf_formula_parse(cstr("p cnf x").as_ptr(), &mut f) }, SfStatus::Parse);
    assert!(f.is_null());
    assert!(!last_error().is_empty());

    let bad = [0xffu8, 0];
    assert_eq!(unsafe { sf_formula_parse(bad.as_ptr().cast(), &mut f) }, SfStatus::InvalidUtf8);

    let g = parse(FORMULA);
    let mut inst = ptr::null_mut();
    assert_eq!(unsafe { sf_reduce(g, cstr("clique").as_ptr(), 1, 3, &mut inst) }, SfStatus::InvalidParameter);
    assert!(last_error().contains("clique"));
    assert_eq!(unsafe { sf_reduce(g, cstr("qcol").as_ptr(), 1, 2, &mut inst) }, SfStatus::InvalidParameter);

    let empty = parse("p cnf 0 0\n");
    assert_eq!(unsafe { sf_reduce(empty, cstr("is").as_ptr(), 1, 3, &mut inst) }, SfStatus::DegenerateInput);

    assert_eq!(unsafe { sf_reduce(g, cstr("ds").as_ptr(), 1, 3, &mut inst) }, SfStatus::Ok);
    let mut ans = SfAnswer::default();
    assert_eq!(unsafe { sf_solve(inst, SfOracle::Brute, 0, &mut ans) }, SfStatus::SizeCap);
    assert_eq!(unsafe { sf_solve(inst, SfOracle::Dp, 1, &mut ans) }, SfStatus::StateCap);
    assert_eq!(unsafe { sf_solve(ptr::null(), SfOracle::Dp, 0, &mut ans) }, SfStatus::NullPointer);
    unsafe {
        sf_instance_free(inst);
        sf_formula_free(g);
        sf_formula_free(empty);
        sf_formula_free(ptr::null_mut());
    }
}

#[test]
fn version_matches_package() {
    let v = unsafe { CStr::from_ptr(sf_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn header() -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/sethforge.h")).unwrap()
}

#[test]
fn header_declares_the_abi() {
    let h = header();
    for name in [
        "sf_formula_parse",
        "sf_formula_free",
        "sf_formula_satisfiable",
        "sf_reduce",
        "sf_instance_free",
        "sf_instance_info",
        "sf_solve",
        "sf_bundle_write",
        "sf_bundle_read",
        "sf_last_error",
        "sf_version",
        "typedef struct SfFormula SfFormula;",
        "typedef struct SfInstance SfInstance;",
        "SF_STATUS_STATE_CAP = 7",
    ] {
        assert!(h.contains(name), "{name}");
    }
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "sethforge.h"
int main(void) {
    SfFormula *f = NULL;
    SfInstance *i = NULL;
    SfAnswer a;
    if (sf_formula_parse("p cnf 2 1\n1 -2 0\n", &f) != SF_STATUS_OK) return 1;
    if (sf_reduce(f, "maxcut", 1, 3, &i) != SF_STATUS_OK) return 2;
    if (sf_solve(i, SF_ORACLE_DP, 0, &a) != SF_STATUS_OK) return 3;
    if (sf_reduce(f, "nope", 1, 3, &i) != SF_STATUS_INVALID_PARAMETER) return 4;
    printf("%d %lld %s\n", a.verdict, (long long)a.optimum, sf_last_error());
    sf_instance_free(i);
    sf_formula_free(f);
    return 0;
}
"#;

/// Links a C program against the static library; skipped when no C compiler
/// or built archive is around.
#[test]
fn c_program_links_against_staticlib() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let exe_dir = std::env::current_exe().unwrap();
    let profile_dir = exe_dir.parent().and_then(Path::parent).unwrap();
    let lib = profile_dir.join("libsethforge_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no staticlib or C compiler");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let bin = dir.path().join("main");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "{out:?}");
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("1 "), "{text}");
    assert!(text.contains("nope"), "{text}");
}
