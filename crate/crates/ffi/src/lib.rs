//! C ABI over `gqflag`.
//!
//! Objects are opaque heap handles owned by the caller and released with the
//! matching `*_free`. Every fallible call returns a [`GqfStatus`]; on failure
//! the message is available from [`gqf_last_error_message`] on the same
//! thread until the next failing call. Out-parameters are written only on
//! success.
//!
//! Every `unsafe` entry point expects: handles that came from this library
//! and were not freed, out-pointers valid for writes, and NUL-terminated
//! paths. A scheme handle passed as `*mut` caches its intersection numbers
//! and must not be used from two threads at once.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::ptr;

use gqflag::error::{FormatError, GqError, ReconstructError, SchemeError};
use gqflag::flags::{build_flag_scheme, Flag, FLAG_CLASSES};
use gqflag::format::{load_scheme, save_scheme};
use gqflag::fusion::{fuse, IndexPartition};
use gqflag::gq::{
    build_grid, build_symplectic, dualize, load_structure, save_structure, verify_gq, IncidenceStructure,
};
use gqflag::reconstruct::{
    reconstruct_from_4class, reconstruct_from_7class, relabel_fused_to_canonical, relabel_to_canonical, FUSED_CLASSES,
};
use gqflag::scheme::{verify_scheme, IntersectionTensor, SchemeMatrix};
use gqflag::scramble::Scramble;
use gqflag::tables::{fused_p_poly, p_poly, FOUR_CLASS_BLOCKS};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GqfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfRange = 3,
    CompositeParameter = 4,
    AxiomFailure = 5,
    NotAScheme = 6,
    ParseError = 7,
    IoError = 8,
    ReconstructionFailed = 9,
}

/// Opaque incidence structure.
pub struct GqfStructure {
    inner: IncidenceStructure,
}

/// Opaque relation matrix; the intersection numbers are computed on first use.
pub struct GqfScheme {
    matrix: SchemeMatrix,
    flags: Option<Vec<Flag>>,
    tensor: Option<IntersectionTensor>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn fail(status: GqfStatus, message: impl ToString) -> GqfStatus {
    let text = message.to_string().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
    status
}

fn gq_status(e: GqError) -> GqfStatus {
    let status = match &e {
        GqError::CompositeParameter(_) => GqfStatus::CompositeParameter,
        GqError::ParameterTooSmall { .. } => GqfStatus::InvalidArgument,
        GqError::InvalidIncidence(_) => GqfStatus::InvalidArgument,
        GqError::Gq1Violation(_) | GqError::Gq2Violation(_) | GqError::Gq3Violation(_) => GqfStatus::AxiomFailure,
        GqError::Parse { .. } => GqfStatus::ParseError,
        GqError::Io { .. } => GqfStatus::IoError,
    };
    fail(status, e)
}

fn format_status(e: FormatError) -> GqfStatus {
    let status = match &e {
        FormatError::Parse { .. } => GqfStatus::ParseError,
        FormatError::Io { .. } => GqfStatus::IoError,
    };
    fail(status, e)
}

fn scheme_status(e: SchemeError) -> GqfStatus {
    fail(GqfStatus::NotAScheme, e)
}

fn reconstruct_status(e: ReconstructError) -> GqfStatus {
    fail(GqfStatus::ReconstructionFailed, e)
}

/// Moves `value` to the heap and stores the handle in `out`.
unsafe fn emit<T>(out: *mut *mut T, value: T) -> GqfStatus {
    *out = Box::into_raw(Box::new(value));
    GqfStatus::Ok
}

unsafe fn path_arg(path: *const c_char) -> Result<PathBuf, GqfStatus> {
    if path.is_null() {
        return Err(fail(GqfStatus::NullPointer, "path is null"));
    }
    CStr::from_ptr(path).to_str().map(PathBuf::from).map_err(|_| fail(GqfStatus::InvalidArgument, "path is not UTF-8"))
}

macro_rules! non_null {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            return fail(GqfStatus::NullPointer, concat!(stringify!($p), " is null"));
        })+
    };
}

/// Message of the last failure on this thread, or null. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn gqf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

unsafe fn build_with(out: *mut *mut GqfStructure, built: Result<IncidenceStructure, GqError>) -> GqfStatus {
    non_null!(out);
    match built {
        Ok(inner) => emit(out, GqfStructure { inner }),
        Err(e) => gq_status(e),
    }
}

/// `(s+1) x (s+1)` grid, order `(s, 1)`.
#[no_mangle]
pub unsafe extern "C" fn gqf_structure_build_grid(s: u64, out: *mut *mut GqfStructure) -> GqfStatus {
    build_with(out, build_grid(s))
}

/// Dual grid, order `(1, t)`.
#[no_mangle]
pub unsafe extern "C" fn gqf_structure_build_dual_grid(t: u64, out: *mut *mut GqfStructure) -> GqfStatus {
    build_with(out, build_grid(t).map(|g| dualize(&g)))
}

/// Symplectic quadrangle of order `(q, q)` for prime `q`.
#[no_mangle]
pub unsafe extern "C" fn gqf_structure_build_symplectic(q: u64, out: *mut *mut GqfStructure) -> GqfStatus {
    build_with(out, build_symplectic(q))
}

/// Reads a JSON structure file.
#[no_mangle]
pub unsafe extern "C" fn gqf_structure_load(path: *const c_char, out: *mut *mut GqfStructure) -> GqfStatus {
    non_null!(out);
    let path = match path_arg(path) {
        Ok(p) => p,
        Err(status) => return status,
    };
    build_with(out, load_structure(&path))
}

#[no_mangle]
pub unsafe extern "C" fn gqf_structure_save(handle: *const GqfStructure, path: *const c_char) -> GqfStatus {
    non_null!(handle);
    let path = match path_arg(path) {
        Ok(p) => p,
        Err(status) => return status,
    };
    match save_structure(&(*handle).inner, &path) {
        Ok(()) => GqfStatus::Ok,
        Err(e) => gq_status(e),
    }
}

/// Checks the quadrangle axioms and writes the order.
#[no_mangle]
pub unsafe extern "C" fn gqf_structure_verify(handle: *const GqfStructure, s: *mut u64, t: *mut u64) -> GqfStatus {
    non_null!(handle, s, t);
    match verify_gq(&(*handle).inner) {
        Ok(order) => {
            *s = order.s;
            *t = order.t;
            GqfStatus::Ok
        }
        Err(e) => gq_status(e),
    }
}

#[no_mangle]
pub unsafe extern "C" fn gqf_structure_counts(
    handle: *const GqfStructure,
    points: *mut usize,
    lines: *mut usize,
    flags: *mut usize,
) -> GqfStatus {
    non_null!(handle, points, lines, flags);
    let s = &(*handle).inner;
    *points = s.num_points();
    *lines = s.num_lines();
    *flags = s.incidence().len();
    GqfStatus::Ok
}

/// Points and lines swapped.
#[no_mangle]
pub unsafe extern "C" fn gqf_structure_dualize(handle: *const GqfStructure, out: *mut *mut GqfStructure) -> GqfStatus {
    non_null!(handle, out);
    emit(out, GqfStructure { inner: dualize(&(*handle).inner) })
}

#[no_mangle]
pub unsafe extern "C" fn gqf_structure_free(handle: *mut GqfStructure) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

fn new_scheme(matrix: SchemeMatrix, flags: Option<Vec<Flag>>) -> GqfScheme {
    GqfScheme { matrix, flags, tensor: None }
}

impl GqfScheme {
    fn tensor(&mut self) -> Result<&IntersectionTensor, SchemeError> {
        if self.tensor.is_none() {
            self.tensor = Some(verify_scheme(&self.matrix)?);
        }
        Ok(self.tensor.as_ref().expect("just set"))
    }
}

/// Seven-class flag scheme of a quadrangle; fails unless the axioms hold.
#[no_mangle]
pub unsafe extern "C" fn gqf_scheme_from_structure(
    structure: *const GqfStructure,
    out: *mut *mut GqfScheme,
) -> GqfStatus {
    non_null!(structure, out);
    match build_flag_scheme(&(*structure).inner) {
        Ok(data) => emit(out, new_scheme(data.matrix, Some(data.flags))),
        Err(e) => gq_status(e),
    }
}

/// Reads a relation-matrix file.
#[no_mangle]
pub unsafe extern "C" fn gqf_scheme_load(path: *const c_char, out: *mut *mut GqfScheme) -> GqfStatus {
    non_null!(out);
    let path = match path_arg(path) {
        Ok(p) => p,
        Err(status) => return status,
    };
    match load_scheme(&path) {
        Ok(f) => emit(out, new_scheme(f.matrix, f.flags)),
        Err(e) => format_status(e),
    }
}

#[no_mangle]
pub unsafe extern "C" fn gqf_scheme_save(handle: *const GqfScheme, path: *const c_char) -> GqfStatus {
    non_null!(handle);
    let path = match path_arg(path) {
        Ok(p) => p,
        Err(status) => return status,
    };
    let h = &*handle;
    match save_scheme(&h.matrix, h.flags.as_deref(), &path) {
        Ok(()) => GqfStatus::Ok,
        Err(e) => format_status(e),
    }
}

/// Number of vertices and of non-identity classes.
#[no_mangle]
pub unsafe extern "C" fn gqf_scheme_dimensions(handle: *const GqfScheme, n: *mut usize, d: *mut usize) -> GqfStatus {
    non_null!(handle, n, d);
    *n = (*handle).matrix.order();
    *d = (*handle).matrix.num_classes();
    GqfStatus::Ok
}

/// Class of the ordered pair `(x, y)`.
#[no_mangle]
pub unsafe extern "C" fn gqf_scheme_relation(
    handle: *const GqfScheme,
    x: usize,
    y: usize,
    out: *mut usize,
) -> GqfStatus {
    non_null!(handle, out);
    let m = &(*handle).matrix;
    if x >= m.order() || y >= m.order() {
        return fail(GqfStatus::OutOfRange, format!("vertex pair ({x},{y}) outside 0..{}", m.order()));
    }
    *out = m.get(x, y);
    GqfStatus::Ok
}

unsafe fn with_tensor(handle: *mut GqfScheme, f: impl FnOnce(&IntersectionTensor) -> GqfStatus) -> GqfStatus {
    non_null!(handle);
    match (*handle).tensor() {
        Ok(t) => f(t),
        Err(e) => scheme_status(e),
    }
}

/// Counted intersection number `p[k][i][j]`; verifies the scheme axioms on first use.
#[no_mangle]
pub unsafe extern "C" fn gqf_scheme_intersection_number(
    handle: *mut GqfScheme,
    k: usize,
    i: usize,
    j: usize,
    out: *mut i64,
) -> GqfStatus {
    non_null!(out);
    with_tensor(handle, |t| {
        let d = t.num_classes();
        if k > d || i > d || j > d {
            return fail(GqfStatus::OutOfRange, format!("index outside 0..={d}"));
        }
        *out = t.get(k, i, j);
        GqfStatus::Ok
    })
}

#[no_mangle]
pub unsafe extern "C" fn gqf_scheme_valency(handle: *mut GqfScheme, i: usize, out: *mut i64) -> GqfStatus {
    non_null!(out);
    with_tensor(handle, |t| {
        if i > t.num_classes() {
            return fail(GqfStatus::OutOfRange, format!("class {i} outside 0..={}", t.num_classes()));
        }
        *out = t.valency(i);
        GqfStatus::Ok
    })
}

/// Merges a seven-class scheme into four classes: `{1,2}`, `{3,4}`, `{5,6}`, `{7}`.
#[no_mangle]
pub unsafe extern "C" fn gqf_scheme_fuse_four_class(handle: *mut GqfScheme, out: *mut *mut GqfScheme) -> GqfStatus {
    non_null!(handle, out);
    if (*handle).matrix.num_classes() != FLAG_CLASSES {
        return fail(GqfStatus::InvalidArgument, "four-class fusion needs a seven-class scheme");
    }
    let blocks = FOUR_CLASS_BLOCKS[1..].iter().map(|b| b.to_vec()).collect();
    let part = IndexPartition::new(FLAG_CLASSES, blocks).expect("fixed partition is valid");
    let matrix = (*handle).matrix.clone();
    with_tensor(handle, |t| match fuse(&matrix, t, &part) {
        Ok(fused) => emit(out, new_scheme(fused, None)),
        Err(e) => fail(GqfStatus::NotAScheme, e),
    })
}

/// Seeded random vertex order and class names (class 0 kept).
#[no_mangle]
pub unsafe extern "C" fn gqf_scheme_scramble(
    handle: *const GqfScheme,
    seed: u64,
    out: *mut *mut GqfScheme,
) -> GqfStatus {
    non_null!(handle, out);
    let m = &(*handle).matrix;
    let s = Scramble::new(seed, m.order(), m.num_classes());
    emit(out, new_scheme(s.apply(m), None))
}

/// Rebuilds the quadrangle from seven-class data. Class names are used as
/// given when they fit the table; otherwise they are relabeled, and for
/// `s != t` the orientation `(target_s, target_t)` is used when both are
/// nonzero.
#[no_mangle]
pub unsafe extern "C" fn gqf_reconstruct_7class(
    handle: *const GqfScheme,
    target_s: u64,
    target_t: u64,
    out: *mut *mut GqfStructure,
) -> GqfStatus {
    non_null!(handle, out);
    let m = &(*handle).matrix;
    let target = (target_s > 0 && target_t > 0).then(|| gqflag::GqOrder::new(target_s, target_t));
    let direct = reconstruct_from_7class(m);
    let rec = match direct {
        Ok(rec) if target.is_none_or(|o| o == rec.order) => Ok(rec),
        Ok(_) | Err(ReconstructError::ParameterMismatch(_)) => {
            relabel_to_canonical(m, target).and_then(|r| reconstruct_from_7class(&r.matrix))
        }
        Err(e) => Err(e),
    };
    match rec {
        Ok(rec) => emit(out, GqfStructure { inner: rec.structure }),
        Err(e) => reconstruct_status(e),
    }
}

/// Rebuilds a quadrangle of order `(s, s)` from four-class fused data, with
/// class names restored first.
#[no_mangle]
pub unsafe extern "C" fn gqf_reconstruct_4class(handle: *const GqfScheme, out: *mut *mut GqfStructure) -> GqfStatus {
    non_null!(handle, out);
    let m = &(*handle).matrix;
    if m.num_classes() != FUSED_CLASSES {
        return fail(GqfStatus::InvalidArgument, format!("expected {FUSED_CLASSES} classes, got {}", m.num_classes()));
    }
    match relabel_fused_to_canonical(m).and_then(|r| reconstruct_from_4class(&r.matrix)) {
        Ok(rec) => emit(out, GqfStructure { inner: rec.structure }),
        Err(e) => reconstruct_status(e),
    }
}

#[no_mangle]
pub unsafe extern "C" fn gqf_scheme_free(handle: *mut GqfScheme) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Closed-form flag intersection number `p[k][i][j]` at `(s, t)`.
#[no_mangle]
pub unsafe extern "C" fn gqf_flag_number(k: usize, i: usize, j: usize, s: i64, t: i64, out: *mut i64) -> GqfStatus {
    non_null!(out);
    if k > FLAG_CLASSES || i > FLAG_CLASSES || j > FLAG_CLASSES {
        return fail(GqfStatus::OutOfRange, format!("index outside 0..={FLAG_CLASSES}"));
    }
    *out = p_poly(k, i, j).eval(s, t);
    GqfStatus::Ok
}

/// Closed-form four-class intersection number `p[k][i][j]` at `s`.
#[no_mangle]
pub unsafe extern "C" fn gqf_fused_number(k: usize, i: usize, j: usize, s: i64, out: *mut i64) -> GqfStatus {
    non_null!(out);
    if k > FUSED_CLASSES || i > FUSED_CLASSES || j > FUSED_CLASSES {
        return fail(GqfStatus::OutOfRange, format!("index outside 0..={FUSED_CLASSES}"));
    }
    *out = fused_p_poly(k, i, j).eval(s, s);
    GqfStatus::Ok
}
