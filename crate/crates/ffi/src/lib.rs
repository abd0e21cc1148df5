//! C bindings for `ltl-tasks`.
//!
//! All exported symbols are prefixed `ltlt_`. Formulas cross the boundary
//! as opaque `LtltFormula` handles; strings returned to the caller are
//! heap-allocated, NUL-terminated UTF-8 and must be released with
//! [`ltlt_string_free`]. Fallible calls return an [`LtltStatus`] and write
//! their result through an out-pointer; on failure the out-pointer is left
//! untouched and [`ltlt_last_error`] describes what went wrong.

#![deny(unsafe_op_in_unsafe_fn)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use ltl_tasks::export::{formula_to_graph, NodeFeatureMode};
use ltl_tasks::guidance::classify_propositions;
use ltl_tasks::ltl::{parse, progress, render, Notation};
use ltl_tasks::product::reward_of;
use ltl_tasks::taskgen::{count_tasks, preset};
use ltl_tasks::{Error, Formula, TruthAssignment, Vocabulary};

/// Result codes for every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LtltStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Syntax = 3,
    UnknownProposition = 4,
    InvalidArgument = 5,
    CapExceeded = 6,
    Resolved = 7,
    Panic = 8,
    Other = 9,
}

/// Rendering style for [`ltlt_formula_render`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LtltNotation {
    Infix = 0,
    Prefix = 1,
}

/// Opaque handle to an immutable formula.
pub struct LtltFormula(Formula);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> LtltStatus {
    match e {
        Error::Syntax { .. } => LtltStatus::Syntax,
        Error::UnknownProposition(_) | Error::UnknownToken(_) => LtltStatus::UnknownProposition,
        Error::InvalidProposition(_)
        | Error::DuplicateProposition(_)
        | Error::InvalidParams(_)
        | Error::UnknownPreset(_)
        | Error::VocabularyTooSmall { .. } => LtltStatus::InvalidArgument,
        Error::ClosureCapExceeded { .. }
        | Error::StateCapExceeded { .. }
        | Error::BudgetExceeded { .. } => LtltStatus::CapExceeded,
        Error::ResolvedFormula(_) => LtltStatus::Resolved,
        _ => LtltStatus::Other,
    }
}

/// Runs `body`, translating errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), (LtltStatus, String)>) -> LtltStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => LtltStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            LtltStatus::Panic
        }
    }
}

fn domain(e: Error) -> (LtltStatus, String) {
    (status_of(&e), e.to_string())
}

/// # Safety
/// `p` is null or a valid NUL-terminated string.
unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (LtltStatus, String)> {
    if p.is_null() {
        return Err((LtltStatus::NullPointer, format!("{what} is null")));
    }
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| (LtltStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

/// # Safety
/// `f` is null or a live handle.
unsafe fn read_formula<'a>(f: *const LtltFormula) -> Result<&'a Formula, (LtltStatus, String)> {
    unsafe { f.as_ref() }
        .map(|f| &f.0)
        .ok_or((LtltStatus::NullPointer, "formula handle is null".into()))
}

fn check_out<T>(out: *mut T) -> Result<(), (LtltStatus, String)> {
    if out.is_null() {
        Err((LtltStatus::NullPointer, "output pointer is null".into()))
    } else {
        Ok(())
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior NUL").into_raw()
}

/// Comma-separated vocabulary, or the formula's propositions in name
/// order when `csv` is null.
///
/// # Safety
/// `csv` is null or a valid NUL-terminated string.
unsafe fn vocab_for(f: &Formula, csv: *const c_char) -> Result<Vocabulary, (LtltStatus, String)> {
    if csv.is_null() {
        let mut props = f.propositions();
        props.sort();
        return Vocabulary::new(props.iter().map(|p| p.name())).map_err(domain);
    }
    let csv = unsafe { read_str(csv, "vocabulary") }?;
    Vocabulary::new(csv.split(',').map(str::trim).filter(|s| !s.is_empty())).map_err(domain)
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ltlt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses infix text. The formula is kept as written; progression
/// results are simplified.
///
/// # Safety
/// `text` is a valid NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ltlt_formula_parse(
    text: *const c_char,
    out: *mut *mut LtltFormula,
) -> LtltStatus {
    guard(|| {
        check_out(out)?;
        let text = unsafe { read_str(text, "formula text") }?;
        let f = parse(text).map_err(domain)?;
        unsafe { *out = Box::into_raw(Box::new(LtltFormula(f))) };
        Ok(())
    })
}

/// Releases a handle. Null is a no-op.
///
/// # Safety
/// `f` is null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ltlt_formula_free(f: *mut LtltFormula) {
    if !f.is_null() {
        drop(unsafe { Box::from_raw(f) });
    }
}

/// Renders a formula; free the result with [`ltlt_string_free`].
///
/// # Safety
/// `f` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ltlt_formula_render(
    f: *const LtltFormula,
    notation: LtltNotation,
    out: *mut *mut c_char,
) -> LtltStatus {
    guard(|| {
        check_out(out)?;
        let f = unsafe { read_formula(f) }?;
        let notation = match notation {
            LtltNotation::Infix => Notation::Infix,
            LtltNotation::Prefix => Notation::Prefix,
        };
        unsafe { *out = into_c_string(render(f, notation)) };
        Ok(())
    })
}

/// Progresses `f` by one truth assignment, given as comma- or
/// space-separated proposition names (`""` or `"{}"` for none). The
/// input handle is left unchanged; the result is a new handle.
///
/// # Safety
/// `f` is a live handle, `assignment` a valid string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ltlt_formula_progress(
    f: *const LtltFormula,
    assignment: *const c_char,
    out: *mut *mut LtltFormula,
) -> LtltStatus {
    guard(|| {
        check_out(out)?;
        let f = unsafe { read_formula(f) }?;
        let sigma = TruthAssignment::parse(unsafe { read_str(assignment, "assignment") }?)
            .map_err(domain)?;
        unsafe { *out = Box::into_raw(Box::new(LtltFormula(progress(&sigma, f)))) };
        Ok(())
    })
}

/// Reward for reaching this formula: 1 if it is `true`, −1 if `false`,
/// 0 otherwise. A null handle yields 0.
///
/// # Safety
/// `f` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ltlt_formula_reward(f: *const LtltFormula) -> i32 {
    unsafe { f.as_ref() }.map_or(0, |f| reward_of(&f.0) as i32)
}

/// Number of AST nodes.
///
/// # Safety
/// `f` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ltlt_formula_size(f: *const LtltFormula) -> usize {
    unsafe { f.as_ref() }.map_or(0, |f| f.0.size())
}

/// Labeled AST graph as JSON with one-hot node features. `vocab` is a
/// comma-separated proposition list or null for the formula's own.
///
/// # Safety
/// `f` is a live handle, `vocab` null or a valid string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ltlt_formula_graph_json(
    f: *const LtltFormula,
    vocab: *const c_char,
    out: *mut *mut c_char,
) -> LtltStatus {
    guard(|| {
        check_out(out)?;
        let f = unsafe { read_formula(f) }?;
        let vocab = unsafe { vocab_for(f, vocab) }?;
        let g = formula_to_graph(f, &vocab, NodeFeatureMode::OneHot).map_err(domain)?;
        let json = serde_json::to_string(&g).map_err(|e| (LtltStatus::Other, e.to_string()))?;
        unsafe { *out = into_c_string(json) };
        Ok(())
    })
}

/// Per-proposition effect (`progress`, `no_effect`, `falsify`) as a JSON
/// object. Fails with `Resolved` on `true`/`false`.
///
/// # Safety
/// As [`ltlt_formula_graph_json`].
#[no_mangle]
pub unsafe extern "C" fn ltlt_formula_classify_json(
    f: *const LtltFormula,
    vocab: *const c_char,
    out: *mut *mut c_char,
) -> LtltStatus {
    guard(|| {
        check_out(out)?;
        let f = unsafe { read_formula(f) }?;
        let vocab = unsafe { vocab_for(f, vocab) }?;
        let c = classify_propositions(f, &vocab).map_err(domain)?;
        let json = serde_json::to_string(&c).map_err(|e| (LtltStatus::Other, e.to_string()))?;
        unsafe { *out = into_c_string(json) };
        Ok(())
    })
}

/// Exact number of distinct tasks of a named preset, as a decimal string.
///
/// # Safety
/// `preset_name` is a valid string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ltlt_count_tasks(
    preset_name: *const c_char,
    out: *mut *mut c_char,
) -> LtltStatus {
    guard(|| {
        check_out(out)?;
        let name = unsafe { read_str(preset_name, "preset name") }?;
        let count = count_tasks(&preset(name).map_err(domain)?).map_err(domain)?;
        unsafe { *out = into_c_string(count.to_string()) };
        Ok(())
    })
}

/// Releases a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` is null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ltlt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
