//! Calls through the C ABI from Rust, and from a C program built against the
//! generated header.

use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use dtree_ffi::*;

const SPLIT: &str = include_str!("../../dtree/tests/data/split_example.dtree");
const ENSPLIT: &str = include_str!("../../dtree/tests/data/ensplit_example.dtree");
const UNIT: &str = include_str!("../../dtree/tests/data/decomposition_unit_example.dtree");

fn parse_ok(text: &str) -> *mut DtreeTree {
    let c = CString::new(text).unwrap();
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { dtree_parse(c.as_ptr(), &mut t) }, DtreeStatus::Ok);
    assert!(!t.is_null());
    t
}

/// Copies and frees a string returned by the library.
fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { dtree_string_free(s) };
    out
}

fn last_error() -> String {
    let p = dtree_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn invariant(t: *const DtreeTree, which: DtreeInvariant) -> i64 {
    let mut v = 0;
    assert_eq!(
        unsafe { dtree_invariant_i64(t, which, &mut v) },
        DtreeStatus::Ok
    );
    v
}

#[test]
fn invariants_of_the_split_example() {
    let t = parse_ok(SPLIT);
    assert_eq!(invariant(t, DtreeInvariant::M), -9);
    assert_eq!(invariant(t, DtreeInvariant::F), 5);
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { dtree_invariant(t, DtreeInvariant::Delta, &mut s) },
        DtreeStatus::Ok
    );
    assert_eq!(take(s), "7");
    assert!(dtree_last_error().is_null());
    unsafe { dtree_free(t) };
}

#[test]
fn edge_split_gives_degree_and_pieces() {
    let t = parse_ok(SPLIT);
    let (a, b) = (CString::new("B").unwrap(), CString::new("C").unwrap());
    let (mut t1, mut t2, mut d) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
    let st = unsafe { dtree_split_edge(t, a.as_ptr(), b.as_ptr(), &mut t1, &mut t2, &mut d) };
    assert_eq!(st, DtreeStatus::Ok);
    assert_eq!(take(d), "3");
    assert_eq!(
        (
            invariant(t1, DtreeInvariant::M),
            invariant(t1, DtreeInvariant::F)
        ),
        (0, 6)
    );
    assert_eq!(
        (
            invariant(t2, DtreeInvariant::M),
            invariant(t2, DtreeInvariant::F)
        ),
        (-9, 5)
    );
    unsafe {
        dtree_free(t1);
        dtree_free(t2);
        dtree_free(t);
    }
}

#[test]
fn en_split_reports_type() {
    let t = parse_ok(ENSPLIT);
    let (a, b) = (CString::new("Q").unwrap(), CString::new("R").unwrap());
    let (mut t1, mut t2, mut d, mut k) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut(), -1i8);
    let st =
        unsafe { dtree_ensplit_edge(t, a.as_ptr(), b.as_ptr(), &mut t1, &mut t2, &mut d, &mut k) };
    assert_eq!(st, DtreeStatus::Ok);
    assert_eq!(take(d), "2");
    assert_eq!(k, 0);
    let mut ms = [
        invariant(t1, DtreeInvariant::M),
        invariant(t2, DtreeInvariant::M),
    ];
    ms.sort();
    assert_eq!(ms, [-244, -29]);
    unsafe {
        dtree_free(t1);
        dtree_free(t2);
        dtree_free(t);
    }
}

#[test]
fn serialization_round_trips_through_handles() {
    let t = parse_ok(UNIT);
    assert!(unsafe { dtree_is_rooted(t) });
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { dtree_serialize(t, &mut s) }, DtreeStatus::Ok);
    let text = take(s);
    let back = parse_ok(&text);
    let mut s2 = ptr::null_mut();
    assert_eq!(unsafe { dtree_serialize(back, &mut s2) }, DtreeStatus::Ok);
    assert_eq!(take(s2), text);
    unsafe {
        dtree_free(back);
        dtree_free(t);
    }
}

#[test]
fn genus_formula_balances_on_rooted_fixture() {
    let t = parse_ok(UNIT);
    let (mut g, mut rhs) = (ptr::null_mut(), ptr::null_mut());
    assert_eq!(
        unsafe { dtree_genus_formula(t, &mut g, &mut rhs) },
        DtreeStatus::Ok
    );
    assert_eq!(take(g), take(rhs));
    unsafe { dtree_free(t) };
}

#[test]
fn rooted_operations_on_unrooted_tree_fail() {
    let t = parse_ok(SPLIT);
    let mut v = 0;
    assert_eq!(
        unsafe { dtree_invariant_i64(t, DtreeInvariant::Degree, &mut v) },
        DtreeStatus::NotRooted
    );
    let (mut g, mut rhs) = (ptr::null_mut(), ptr::null_mut());
    assert_eq!(
        unsafe { dtree_genus_formula(t, &mut g, &mut rhs) },
        DtreeStatus::NotRooted
    );
    assert!(g.is_null() && rhs.is_null());
    unsafe { dtree_free(t) };
}

#[test]
fn errors_map_to_status_codes() {
    let mut t = ptr::null_mut();
    let bad = CString::new("vertex A\nfrobnicate\n").unwrap();
    assert_eq!(
        unsafe { dtree_parse(bad.as_ptr(), &mut t) },
        DtreeStatus::Parse
    );
    assert!(t.is_null());
    assert!(last_error().contains("line 2"));

    assert_eq!(
        unsafe { dtree_parse(ptr::null(), &mut t) },
        DtreeStatus::NullArgument
    );
    let text = CString::new("vertex A\n").unwrap();
    assert_eq!(
        unsafe { dtree_parse(text.as_ptr(), ptr::null_mut()) },
        DtreeStatus::NullArgument
    );

    let bytes = [0xffu8, 0];
    assert_eq!(
        unsafe { dtree_parse(bytes.as_ptr().cast(), &mut t) },
        DtreeStatus::InvalidUtf8
    );

    let tree = parse_ok(SPLIT);
    let (a, b) = (CString::new("A").unwrap(), CString::new("E").unwrap());
    let (mut t1, mut t2, mut d) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
    let st = unsafe { dtree_split_edge(tree, a.as_ptr(), b.as_ptr(), &mut t1, &mut t2, &mut d) };
    assert_eq!(st, DtreeStatus::UnknownEdge);
    assert!(t1.is_null() && t2.is_null() && d.is_null());

    let z = CString::new("zz").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { dtree_multiplicity(tree, z.as_ptr(), &mut s) },
        DtreeStatus::UnknownNode
    );
    unsafe { dtree_free(tree) };
}

#[test]
fn multiplicity_and_dot_output() {
    let t = parse_ok(SPLIT);
    let a = CString::new("A").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { dtree_multiplicity(t, a.as_ptr(), &mut s) },
        DtreeStatus::Ok
    );
    assert_eq!(take(s), "0");
    assert_eq!(
        unsafe { dtree_to_dot(t, true, true, &mut s) },
        DtreeStatus::Ok
    );
    let dot = take(s);
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("\"A\" [xlabel=\"A\", style=filled"));
    unsafe { dtree_free(t) };
}

#[test]
fn normalize_keeps_invariants() {
    let t = parse_ok(ENSPLIT);
    let mut n = ptr::null_mut();
    assert_eq!(unsafe { dtree_normalize(t, &mut n) }, DtreeStatus::Ok);
    for w in [DtreeInvariant::M, DtreeInvariant::F] {
        assert_eq!(invariant(n, w), invariant(t, w));
    }
    unsafe {
        dtree_free(n);
        dtree_free(t);
    }
}

#[test]
fn suites_run_through_the_abi() {
    let name = CString::new("parity").unwrap();
    let mut failures = 99;
    assert_eq!(
        unsafe { dtree_check_suite(name.as_ptr(), 7, 200, &mut failures) },
        DtreeStatus::Ok
    );
    assert_eq!(failures, 0);
    let name = CString::new("no-such-suite").unwrap();
    assert_eq!(
        unsafe { dtree_check_suite(name.as_ptr(), 7, 10, &mut failures) },
        DtreeStatus::UnknownSuite
    );
}

#[test]
fn null_handles_are_ignored_by_free() {
    unsafe {
        dtree_free(ptr::null_mut());
        dtree_string_free(ptr::null_mut());
    }
    assert!(!unsafe { dtree_is_rooted(ptr::null()) });
    assert!(!dtree_version().is_null());
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "dtree.h"

int main(void) {
    const char *text =
        "vertex A\nvertex B\nvertex C\nvertex D\nvertex E\n"
        "arrow a0 f=0\narrow d0 f=0\narrow e0 f=0\n"
        "edge A B qA=-1\nedge B C\nedge C D qA=2 qB=-4\nedge C E qB=-7\n"
        "edge A a0\nedge D d0\nedge E e0\n"
        "bundle A n=3\nbundle D n=1\nbundle E n=1\n";
    DtreeTree *t = NULL;
    if (dtree_parse(text, &t) != DTREE_STATUS_OK) { fprintf(stderr, "%s\n", dtree_last_error()); return 1; }
    int64_t m = 0;
    if (dtree_invariant_i64(t, DTREE_INVARIANT_M, &m) != DTREE_STATUS_OK || m != -9) return 2;
    DtreeTree *t1 = NULL, *t2 = NULL;
    char *d = NULL;
    if (dtree_split_edge(t, "B", "C", &t1, &t2, &d) != DTREE_STATUS_OK) return 3;
    if (strcmp(d, "3") != 0) return 4;
    dtree_string_free(d);
    dtree_free(t1);
    dtree_free(t2);
    if (dtree_parse("vertex A\nbogus\n", &t1) != DTREE_STATUS_PARSE || t1 != NULL) return 5;
    if (dtree_last_error() == NULL) return 6;
    dtree_free(t);
    printf("ok\n");
    return 0;
}
"#;

#[test]
fn c_program_links_against_the_static_library() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".to_string());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no C compiler available; skipping");
        return;
    }
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let profile_dir = std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf();
    let lib = profile_dir.join("libdtree_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let work = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("dtree_ffi_c");
    std::fs::create_dir_all(&work).unwrap();
    let src = work.join("main.c");
    let exe = work.join("main");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(
        out.status.success(),
        "C program exited with {:?}",
        out.status.code()
    );
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok\n");
}
