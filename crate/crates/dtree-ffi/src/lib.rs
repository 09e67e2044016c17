//! C ABI for the `dtree` library.
//!
//! Trees are passed as opaque `DtreeTree` handles created by [`dtree_parse`]
//! and released with [`dtree_free`]. Every fallible function returns a
//! [`DtreeStatus`]; on failure the out-parameters are set to null and a
//! message is available from [`dtree_last_error`] on the calling thread.
//! Integers that may exceed 64 bits are returned as decimal strings, which
//! the caller releases with [`dtree_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dtree::genus::genus_formula_check;
use dtree::harness::{default_params, run_suite};
use dtree::invariants::multiplicities;
use dtree::rooted::degree;
use dtree::simplify::normalize;
use dtree::split::{ensplit_at_edge, split_at_edge};
use dtree::textio::{serialize_parsed, to_dot, DotOptions};
use dtree::{parse, summary, BigInt, Edge, Error, Parsed, SplitOutcome};

/// Status code returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DtreeStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The text is not in the `.dtree` format.
    Parse = 3,
    /// The text describes a structure that is not a decorated tree.
    InvalidTree = 4,
    /// A node id does not occur in the tree.
    UnknownNode = 5,
    /// Two nodes are not joined by an edge.
    UnknownEdge = 6,
    /// The input does not meet the precondition of the operation.
    Precondition = 7,
    /// The operation needs a tree with a `root` line.
    NotRooted = 8,
    /// The value does not fit in a signed 64-bit integer.
    Overflow = 9,
    /// No suite has the given name.
    UnknownSuite = 10,
    /// A property suite found a counterexample.
    SuiteFailed = 11,
    /// An internal consistency check failed.
    Internal = 12,
    /// The library panicked.
    Panic = 13,
}

/// Which global invariant to read.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DtreeInvariant {
    /// `M(T)`.
    M = 0,
    /// `F(T)`.
    F = 1,
    /// `g(T) = (2 - M - F)/2`.
    Genus = 2,
    /// `δ(T) = (F - M)/2`.
    Delta = 3,
    /// The degree of a rooted tree.
    Degree = 4,
}

/// Opaque handle to a decorated tree, possibly with a root.
pub struct DtreeTree {
    inner: Parsed,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    let c = CString::new(msg).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Fail(DtreeStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse { .. } => DtreeStatus::Parse,
            Error::Invalid(_) => DtreeStatus::InvalidTree,
            Error::UnknownNode(_) => DtreeStatus::UnknownNode,
            Error::UnknownEdge(..) => DtreeStatus::UnknownEdge,
            Error::Internal(_) => DtreeStatus::Internal,
            _ => DtreeStatus::Precondition,
        };
        Fail(status, e.to_string())
    }
}

fn fail(status: DtreeStatus, msg: impl Into<String>) -> Fail {
    Fail(status, msg.into())
}

/// Runs `body`, records any error or panic, and converts the outcome to a status.
fn guard(body: impl FnOnce() -> Result<(), Fail>) -> DtreeStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            clear_error();
            DtreeStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(format!("panic: {msg}"));
            DtreeStatus::Panic
        }
    }
}

unsafe fn tree_ref<'a>(tree: *const DtreeTree) -> Result<&'a DtreeTree, Fail> {
    tree.as_ref()
        .ok_or_else(|| fail(DtreeStatus::NullArgument, "tree handle is null"))
}

unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(fail(DtreeStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        fail(
            DtreeStatus::InvalidUtf8,
            format!("{what} is not valid UTF-8"),
        )
    })
}

unsafe fn reset<T>(out: *mut *mut T) {
    if !out.is_null() {
        *out = ptr::null_mut();
    }
}

fn require_out<T>(out: *mut T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        Err(fail(DtreeStatus::NullArgument, format!("{what} is null")))
    } else {
        Ok(())
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .expect("interior nul removed")
        .into_raw()
}

fn into_handle(p: Parsed) -> *mut DtreeTree {
    Box::into_raw(Box::new(DtreeTree { inner: p }))
}

fn invariant_value(tree: &DtreeTree, which: DtreeInvariant) -> Result<BigInt, Fail> {
    if which == DtreeInvariant::Degree {
        let r = tree
            .inner
            .rooted()
            .ok_or_else(|| fail(DtreeStatus::NotRooted, "the tree has no root"))?;
        return Ok(degree(r));
    }
    let s = summary(tree.inner.tree())?;
    Ok(match which {
        DtreeInvariant::M => s.m,
        DtreeInvariant::F => s.f,
        DtreeInvariant::Genus => s.g,
        DtreeInvariant::Delta => s.delta,
        DtreeInvariant::Degree => unreachable!("handled above"),
    })
}

/// Message describing the last failure on the calling thread, or null.
///
/// The pointer stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn dtree_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Version string of the library. The pointer is static.
#[no_mangle]
pub extern "C" fn dtree_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses `.dtree` text into a new handle stored in `*out`.
///
/// # Safety
///
/// `text` must be null or a nul-terminated string; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn dtree_parse(text: *const c_char, out: *mut *mut DtreeTree) -> DtreeStatus {
    reset(out);
    guard(|| {
        require_out(out, "out")?;
        let text = str_arg(text, "text")?;
        let parsed = parse(text)?;
        *out = into_handle(parsed);
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
///
/// `tree` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn dtree_free(tree: *mut DtreeTree) {
    if !tree.is_null() {
        drop(Box::from_raw(tree));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
///
/// `s` must be null or a string from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn dtree_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Writes the tree in `.dtree` format to `*out`.
///
/// # Safety
///
/// `tree` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn dtree_serialize(
    tree: *const DtreeTree,
    out: *mut *mut c_char,
) -> DtreeStatus {
    reset(out);
    guard(|| {
        require_out(out, "out")?;
        let t = tree_ref(tree)?;
        *out = into_c_string(serialize_parsed(&t.inner));
        Ok(())
    })
}

/// Writes the tree in DOT format to `*out`.
///
/// # Safety
///
/// `tree` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn dtree_to_dot(
    tree: *const DtreeTree,
    fill_zero_multiplicity: bool,
    show_ids: bool,
    out: *mut *mut c_char,
) -> DtreeStatus {
    reset(out);
    guard(|| {
        require_out(out, "out")?;
        let t = tree_ref(tree)?;
        let opts = DotOptions {
            fill_zero_multiplicity,
            show_ids,
        };
        *out = into_c_string(to_dot(t.inner.tree(), opts));
        Ok(())
    })
}

/// Whether the handle carries a root. Null gives false.
///
/// # Safety
///
/// `tree` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dtree_is_rooted(tree: *const DtreeTree) -> bool {
    tree.as_ref().is_some_and(|t| t.inner.rooted().is_some())
}

/// Writes a global invariant as a decimal string to `*out`.
///
/// # Safety
///
/// `tree` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn dtree_invariant(
    tree: *const DtreeTree,
    which: DtreeInvariant,
    out: *mut *mut c_char,
) -> DtreeStatus {
    reset(out);
    guard(|| {
        require_out(out, "out")?;
        let v = invariant_value(tree_ref(tree)?, which)?;
        *out = into_c_string(v.to_string());
        Ok(())
    })
}

/// Writes a global invariant to `*out` if it fits in 64 bits.
///
/// # Safety
///
/// `tree` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn dtree_invariant_i64(
    tree: *const DtreeTree,
    which: DtreeInvariant,
    out: *mut i64,
) -> DtreeStatus {
    guard(|| {
        require_out(out, "out")?;
        let v = invariant_value(tree_ref(tree)?, which)?;
        *out = i64::try_from(&v).map_err(|_| {
            fail(
                DtreeStatus::Overflow,
                format!("{v} does not fit in 64 bits"),
            )
        })?;
        Ok(())
    })
}

/// Writes the multiplicity `N` of a vertex or zero arrow as a decimal string to `*out`.
///
/// # Safety
///
/// `tree` must be null or a live handle; `node` must be null or a nul-terminated
/// string; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn dtree_multiplicity(
    tree: *const DtreeTree,
    node: *const c_char,
    out: *mut *mut c_char,
) -> DtreeStatus {
    reset(out);
    guard(|| {
        require_out(out, "out")?;
        let t = tree_ref(tree)?;
        let node = str_arg(node, "node")?;
        let n = multiplicities(t.inner.tree())
            .remove(node)
            .ok_or_else(|| Fail::from(Error::UnknownNode(node.to_string())))?;
        *out = into_c_string(n.to_string());
        Ok(())
    })
}

/// Applies the simplification rules until none applies and stores the result in `*out`.
///
/// The result carries no root.
///
/// # Safety
///
/// `tree` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn dtree_normalize(
    tree: *const DtreeTree,
    out: *mut *mut DtreeTree,
) -> DtreeStatus {
    reset(out);
    guard(|| {
        require_out(out, "out")?;
        let t = tree_ref(tree)?;
        *out = into_handle(Parsed::Plain(normalize(t.inner.tree())));
        Ok(())
    })
}

/// Checks the genus formula on a rooted tree and writes both sides to `*genus` and `*formula`.
///
/// # Safety
///
/// `tree` must be null or a live handle; `genus` and `formula` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn dtree_genus_formula(
    tree: *const DtreeTree,
    genus: *mut *mut c_char,
    formula: *mut *mut c_char,
) -> DtreeStatus {
    reset(genus);
    reset(formula);
    guard(|| {
        require_out(genus, "genus")?;
        require_out(formula, "formula")?;
        let t = tree_ref(tree)?;
        let r = t
            .inner
            .rooted()
            .ok_or_else(|| fail(DtreeStatus::NotRooted, "the tree has no root"))?;
        let (g, rhs) = genus_formula_check(r)?;
        *genus = into_c_string(g.to_string());
        *formula = into_c_string(rhs.to_string());
        Ok(())
    })
}

unsafe fn split_common(
    tree: *const DtreeTree,
    a: *const c_char,
    b: *const c_char,
    t1: *mut *mut DtreeTree,
    t2: *mut *mut DtreeTree,
    degree_out: *mut *mut c_char,
    op: fn(&dtree::DecoratedTree, &Edge) -> dtree::Result<SplitOutcome>,
) -> Result<SplitOutcome, Fail> {
    require_out(t1, "t1")?;
    require_out(t2, "t2")?;
    require_out(degree_out, "degree")?;
    let t = tree_ref(tree)?;
    let a = str_arg(a, "a")?;
    let b = str_arg(b, "b")?;
    let s = op(t.inner.tree(), &Edge::new(a, b))?;
    *t1 = into_handle(Parsed::Plain(s.t1.clone()));
    *t2 = into_handle(Parsed::Plain(s.t2.clone()));
    *degree_out = into_c_string(s.degree.to_string());
    Ok(s)
}

/// Splits at the edge joining `a` and `b`.
///
/// The two pieces go to `*t1` and `*t2` and the degree, as a decimal string, to `*degree`.
///
/// # Safety
///
/// `tree` must be null or a live handle; `a` and `b` must be null or
/// nul-terminated strings; the out-parameters must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn dtree_split_edge(
    tree: *const DtreeTree,
    a: *const c_char,
    b: *const c_char,
    t1: *mut *mut DtreeTree,
    t2: *mut *mut DtreeTree,
    degree: *mut *mut c_char,
) -> DtreeStatus {
    reset(t1);
    reset(t2);
    reset(degree);
    guard(|| split_common(tree, a, b, t1, t2, degree, split_at_edge).map(|_| ()))
}

/// EN-splits at the edge joining `a` and `b`.
///
/// The two pieces go to `*t1` and `*t2`, the degree to `*degree` and the type to `*kind`.
///
/// # Safety
///
/// `tree` must be null or a live handle; `a` and `b` must be null or
/// nul-terminated strings; the out-parameters must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn dtree_ensplit_edge(
    tree: *const DtreeTree,
    a: *const c_char,
    b: *const c_char,
    t1: *mut *mut DtreeTree,
    t2: *mut *mut DtreeTree,
    degree: *mut *mut c_char,
    kind: *mut i8,
) -> DtreeStatus {
    reset(t1);
    reset(t2);
    reset(degree);
    guard(|| {
        require_out(kind, "kind")?;
        let s = split_common(tree, a, b, t1, t2, degree, ensplit_at_edge)?;
        *kind = s.kind.unwrap_or(0);
        Ok(())
    })
}

/// Runs a named property suite on `count` random trees from `seed`.
///
/// The number of failing instances goes to `*failures`. A suite that fails
/// returns `DTREE_STATUS_SUITE_FAILED` and leaves its report in the last error.
///
/// # Safety
///
/// `name` must be null or a nul-terminated string; `failures` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn dtree_check_suite(
    name: *const c_char,
    seed: u64,
    count: usize,
    failures: *mut u64,
) -> DtreeStatus {
    guard(|| {
        require_out(failures, "failures")?;
        let name = str_arg(name, "name")?;
        let params = default_params(name, seed)
            .ok_or_else(|| fail(DtreeStatus::UnknownSuite, format!("unknown suite `{name}`")))?;
        let report = run_suite(name, &params, count)?;
        *failures = report.failures as u64;
        if report.passed() {
            Ok(())
        } else {
            Err(fail(DtreeStatus::SuiteFailed, report.to_string()))
        }
    })
}
