use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use ltl_tasks_ffi::*;

fn parse(text: &str) -> *mut LtltFormula {
    let c = CString::new(text).unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(
        unsafe { ltlt_formula_parse(c.as_ptr(), &mut f) },
        LtltStatus::Ok
    );
    f
}

/// Takes ownership of a library string.
fn take(s: *mut c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { ltlt_string_free(s) };
    out
}

fn render(f: *const LtltFormula, notation: LtltNotation) -> String {
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { ltlt_formula_render(f, notation, &mut s) },
        LtltStatus::Ok
    );
    take(s)
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ltlt_last_error()) }
        .to_str()
        .unwrap()
        .to_owned()
}

#[test]
fn parse_render_progress_round_trip() {
    let f = parse("F (R & F G)");
    assert_eq!(render(f, LtltNotation::Infix), "F (R & F G)");
    assert_eq!(render(f, LtltNotation::Prefix), "F & R F G");
    assert_eq!(unsafe { ltlt_formula_size(f) }, 5);

    let sigma = CString::new("R").unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { ltlt_formula_progress(f, sigma.as_ptr(), &mut g) },
        LtltStatus::Ok
    );
    assert_eq!(render(g, LtltNotation::Infix), "F G");
    assert_eq!(unsafe { ltlt_formula_reward(g) }, 0);

    let sigma = CString::new("{G}").unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(
        unsafe { ltlt_formula_progress(g, sigma.as_ptr(), &mut h) },
        LtltStatus::Ok
    );
    assert_eq!(unsafe { ltlt_formula_reward(h) }, 1);
    // the input handle is untouched
    assert_eq!(render(f, LtltNotation::Infix), "F (R & F G)");
    unsafe {
        ltlt_formula_free(f);
        ltlt_formula_free(g);
        ltlt_formula_free(h);
    }
}

#[test]
fn falsified_task_rewards_minus_one() {
    let f = parse("!a U b");
    let sigma = CString::new("a").unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { ltlt_formula_progress(f, sigma.as_ptr(), &mut g) },
        LtltStatus::Ok
    );
    assert_eq!(unsafe { ltlt_formula_reward(g) }, -1);
    unsafe {
        ltlt_formula_free(f);
        ltlt_formula_free(g);
    }
}

#[test]
fn errors_set_status_and_message() {
    let bad = CString::new("F (a &").unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(
        unsafe { ltlt_formula_parse(bad.as_ptr(), &mut f) },
        LtltStatus::Syntax
    );
    assert!(f.is_null());
    assert!(last_error().contains("syntax error"));

    assert_eq!(
        unsafe { ltlt_formula_parse(ptr::null(), &mut f) },
        LtltStatus::NullPointer
    );
    let ok = CString::new("a").unwrap();
    assert_eq!(
        unsafe { ltlt_formula_parse(ok.as_ptr(), ptr::null_mut()) },
        LtltStatus::NullPointer
    );

    let invalid = [0xffu8, 0];
    assert_eq!(
        unsafe { ltlt_formula_parse(invalid.as_ptr().cast(), &mut f) },
        LtltStatus::InvalidUtf8
    );

    let mut s = ptr::null_mut();
    let name = CString::new("no-such-preset").unwrap();
    assert_eq!(
        unsafe { ltlt_count_tasks(name.as_ptr(), &mut s) },
        LtltStatus::InvalidArgument
    );
    assert!(s.is_null());
    assert!(last_error().contains("no-such-preset"));
}

#[test]
fn null_handles_are_harmless() {
    unsafe {
        ltlt_formula_free(ptr::null_mut());
        ltlt_string_free(ptr::null_mut());
        assert_eq!(ltlt_formula_reward(ptr::null()), 0);
        assert_eq!(ltlt_formula_size(ptr::null()), 0);
    }
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { ltlt_formula_render(ptr::null(), LtltNotation::Infix, &mut s) },
        LtltStatus::NullPointer
    );
}

#[test]
fn count_matches_core() {
    let name = CString::new("letterworld-avoid").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { ltlt_count_tasks(name.as_ptr(), &mut s) },
        LtltStatus::Ok
    );
    let expected =
        ltl_tasks::taskgen::count_tasks(&ltl_tasks::taskgen::preset("letterworld-avoid").unwrap())
            .unwrap();
    assert_eq!(take(s), expected.to_string());
}

#[test]
fn graph_and_classification_json() {
    let f = parse("!r U (j & (!p U k))");
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { ltlt_formula_graph_json(f, ptr::null(), &mut s) },
        LtltStatus::Ok
    );
    let g: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(g["nodes"].as_array().unwrap().len(), 9);
    assert_eq!(g["edges"].as_array().unwrap().len(), 17);

    let vocab = CString::new("r,j,p,k").unwrap();
    assert_eq!(
        unsafe { ltlt_formula_classify_json(f, vocab.as_ptr(), &mut s) },
        LtltStatus::Ok
    );
    let c: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(c["j"], "progress");
    assert_eq!(c["r"], "falsify");
    assert_eq!(c["p"], "no_effect");
    assert_eq!(c["k"], "no_effect");

    let unknown = CString::new("r,j").unwrap();
    assert_ne!(
        unsafe { ltlt_formula_graph_json(f, unknown.as_ptr(), &mut s) },
        LtltStatus::Ok
    );
    unsafe { ltlt_formula_free(f) };

    let t = parse("true");
    assert_eq!(
        unsafe { ltlt_formula_classify_json(t, ptr::null(), &mut s) },
        LtltStatus::Resolved
    );
    unsafe { ltlt_formula_free(t) };
}

#[test]
fn header_declares_api_and_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/ltl_tasks.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for sym in [
        "ltlt_formula_parse",
        "ltlt_formula_render",
        "ltlt_formula_progress",
        "ltlt_formula_free",
        "ltlt_string_free",
        "ltlt_last_error",
        "ltlt_count_tasks",
        "ltlt_formula_graph_json",
        "ltlt_formula_classify_json",
        "typedef struct LtltFormula LtltFormula",
    ] {
        assert!(text.contains(sym), "header lacks {sym}");
    }
    // a C compiler is optional in the build environment
    let Ok(status) = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-x", "c"])
        .arg(&header)
        .status()
    else {
        return;
    };
    assert!(status.success(), "header does not compile as C99");
}

#[test]
fn c_program_links_against_static_library() {
    let deps = std::env::current_exe().unwrap();
    let profile_dir = deps.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libltl_tasks_ffi.a");
    let crate_dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        return;
    }
    let exe = profile_dir.join("ltl_tasks_ffi_smoke");
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror"])
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(crate_dir.join("tests/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "smoke program failed to build");
    let out = Command::new(&exe).output().unwrap();
    assert!(
        out.status.success(),
        "smoke program exited with {:?}",
        out.status
    );
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "510287712");
}
