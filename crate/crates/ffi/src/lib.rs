//! C interface.
//!
//! Every fallible function returns an `MdscStatus` code; on failure the
//! message is kept per thread and can be read with `mdsc_last_error`.
//! Objects cross the boundary as opaque handles released by their `_free`
//! function. Panics are caught and reported as `MDSC_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use mdsc::catalog;
use mdsc::code_model::{
    build_md_matrix, BaseGrid, CodeParams, DesignTriple, LiftingMatrix, PartitionMatrix, RelocationMatrix,
    SparseBinaryMatrix,
};
use mdsc::flcount::{count_objects_md_direct, count_objects_sc, ObjectKind};
use mdsc::grade::{forecast, run_md_grade, GradeConfig, GradeResult, GradeTarget};
use mdsc::Error;

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MdscStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Dimension = 3,
    OutOfRange = 4,
    Unsupported = 5,
    TooLarge = 6,
    NonFinite = 7,
    Parse = 8,
    Io = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

/// Targeted objects.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MdscObjectKind {
    Cycle4 = 0,
    Cycle6 = 1,
    Cycle8 = 2,
    Cfg66 = 3,
    Cfg68 = 4,
    Cfg88 = 5,
}

/// Grade objectives.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MdscTarget {
    Cycle6 = 0,
    Cycle8 = 1,
    Concat = 2,
}

/// A code: parameters with partition, lifting and relocation matrices.
pub struct MdscCode {
    params: CodeParams,
    triple: DesignTriple,
}

/// Result of one distributor run.
pub struct MdscGrade {
    result: GradeResult,
}

/// A sparse binary parity-check matrix.
pub struct MdscMatrix {
    h: SparseBinaryMatrix,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn status_of(e: &Error) -> MdscStatus {
    match e {
        Error::InvalidParams(_) => MdscStatus::InvalidArgument,
        Error::Dimension { .. } => MdscStatus::Dimension,
        Error::OutOfRange { .. } => MdscStatus::OutOfRange,
        Error::Unsupported(_) => MdscStatus::Unsupported,
        Error::TooLarge(_) => MdscStatus::TooLarge,
        Error::NonFinite { .. } => MdscStatus::NonFinite,
        Error::Parse(_) | Error::Json(_) => MdscStatus::Parse,
        Error::Io(_) => MdscStatus::Io,
    }
}

enum Fail {
    Status(MdscStatus, String),
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

fn null(what: &str) -> Fail {
    Fail::Status(MdscStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> MdscStatus {
    let (status, msg) = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => (MdscStatus::Ok, String::new()),
        Ok(Err(Fail::Status(s, m))) => (s, m),
        Ok(Err(Fail::Core(e))) => (status_of(&e), e.to_string()),
        Err(p) => {
            let m = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            (MdscStatus::Panic, m)
        }
    };
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
    status
}

unsafe fn cref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    unsafe { p.as_mut() }.ok_or_else(|| null(what))
}

unsafe fn grid(data: *const u32, rows: usize, cols: usize, what: &str) -> Result<BaseGrid, Fail> {
    if data.is_null() {
        return Err(null(what));
    }
    let v = unsafe { slice::from_raw_parts(data, rows * cols) }.to_vec();
    Ok(BaseGrid::new(rows, cols, v)?)
}

/// Copies `text` plus a terminating NUL into `buf` when it fits; always
/// reports the required size (including the NUL) in `needed`.
unsafe fn write_text(text: &str, buf: *mut c_char, cap: usize, needed: *mut usize) -> Result<(), Fail> {
    if let Some(n) = unsafe { needed.as_mut() } {
        *n = text.len() + 1;
    }
    if buf.is_null() {
        return if cap == 0 { Ok(()) } else { Err(null("buf")) };
    }
    if cap < text.len() + 1 {
        return Err(Fail::Status(MdscStatus::BufferTooSmall, format!("need {} bytes, have {cap}", text.len() + 1)));
    }
    unsafe {
        ptr::copy_nonoverlapping(text.as_ptr() as *const c_char, buf, text.len());
        *buf.add(text.len()) = 0;
    }
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mdsc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the last failed call on this thread. `needed` receives the
/// size including the NUL; pass a null `buf` with `cap` 0 to query it.
///
/// # Safety
/// `buf` must point to `cap` writable bytes or be null.
#[no_mangle]
pub unsafe extern "C" fn mdsc_last_error(buf: *mut c_char, cap: usize, needed: *mut usize) -> MdscStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    let (status, text) = match unsafe { write_text(&msg, buf, cap, needed) } {
        Ok(()) => (MdscStatus::Ok, msg),
        Err(Fail::Status(s, _)) => (s, msg),
        Err(Fail::Core(e)) => (status_of(&e), msg),
    };
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
    status
}

/// Loads a published code by name (`md1`, `md2`, `md6`, `md7`).
///
/// # Safety
/// `name` must be a NUL-terminated string; `code` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mdsc_code_catalog(name: *const c_char, code: *mut *mut MdscCode) -> MdscStatus {
    guard(|| {
        if name.is_null() {
            return Err(null("name"));
        }
        let slot = unsafe { out(code, "code") }?;
        let name = unsafe { CStr::from_ptr(name) }.to_string_lossy();
        let c = catalog::by_name(&name)
            .ok_or_else(|| Fail::Status(MdscStatus::InvalidArgument, format!("unknown catalog code {name:?}")))?;
        *slot = Box::into_raw(Box::new(MdscCode { params: c.params, triple: c.triple }));
        Ok(())
    })
}

/// Builds a code from row-major `gamma × kappa` matrices. A null `relocation`
/// means no relocation.
///
/// # Safety
/// Non-null matrix pointers must reference `gamma * kappa` values; `code`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn mdsc_code_new(
    gamma: usize,
    kappa: usize,
    z: usize,
    coupling: usize,
    m: usize,
    aux: usize,
    partition: *const u32,
    lifting: *const u32,
    relocation: *const u32,
    code: *mut *mut MdscCode,
) -> MdscStatus {
    guard(|| {
        let slot = unsafe { out(code, "code") }?;
        let params = CodeParams::new(gamma, kappa, z, coupling, m, aux)?;
        let k = PartitionMatrix::new(unsafe { grid(partition, gamma, kappa, "partition") }?, m)?;
        let lf = LiftingMatrix::new(unsafe { grid(lifting, gamma, kappa, "lifting") }?, z)?;
        let mr = if relocation.is_null() {
            RelocationMatrix::zeros(gamma, kappa, aux)
        } else {
            RelocationMatrix::new(unsafe { grid(relocation, gamma, kappa, "relocation") }?, aux)?
        };
        let triple = DesignTriple::new(k, lf, mr);
        triple.validate(&params)?;
        *slot = Box::into_raw(Box::new(MdscCode { params, triple }));
        Ok(())
    })
}

/// Releases a code; null is ignored.
///
/// # Safety
/// `code` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mdsc_code_free(code: *mut MdscCode) {
    if !code.is_null() {
        drop(unsafe { Box::from_raw(code) });
    }
}

/// Writes `(γ, κ, z, L, m, M)` into `params[0..6]`.
///
/// # Safety
/// `params` must reference six writable values.
#[no_mangle]
pub unsafe extern "C" fn mdsc_code_params(code: *const MdscCode, params: *mut usize) -> MdscStatus {
    guard(|| {
        let c = unsafe { cref(code, "code") }?;
        if params.is_null() {
            return Err(null("params"));
        }
        let p = &c.params;
        let v = [p.gamma, p.kappa, p.z, p.coupling, p.m, p.aux];
        unsafe { ptr::copy_nonoverlapping(v.as_ptr(), params, 6) };
        Ok(())
    })
}

fn kind(k: MdscObjectKind) -> ObjectKind {
    ObjectKind::ALL[k as usize]
}

/// Exact count of one object kind in the MD-SC graph, or in the underlying
/// SC graph when `sc` is nonzero.
///
/// # Safety
/// `code` must be a live handle; `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mdsc_count(
    code: *const MdscCode,
    object: MdscObjectKind,
    sc: bool,
    count: *mut u64,
) -> MdscStatus {
    guard(|| {
        let c = unsafe { cref(code, "code") }?;
        let slot = unsafe { out(count, "count") }?;
        let k = kind(object);
        let map = if sc {
            count_objects_sc(&c.triple.partition, &c.triple.lifting, &c.params, &[k])?
        } else {
            count_objects_md_direct(&c.triple, &c.params, &[k])?
        };
        *slot = map[&k];
        Ok(())
    })
}

/// Runs the distributor with row targets `pstar[0..len]` and density cap `tmax`.
///
/// # Safety
/// `pstar` must reference `len` values; `grade` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mdsc_grade_run(
    code: *const MdscCode,
    target: MdscTarget,
    pstar: *const f64,
    len: usize,
    tmax: f64,
    grade: *mut *mut MdscGrade,
) -> MdscStatus {
    guard(|| {
        let c = unsafe { cref(code, "code") }?;
        let slot = unsafe { out(grade, "grade") }?;
        if pstar.is_null() {
            return Err(null("pstar"));
        }
        let ps = unsafe { slice::from_raw_parts(pstar, len) };
        let target = match target {
            MdscTarget::Cycle6 => GradeTarget::Cycle6,
            MdscTarget::Cycle8 => GradeTarget::Cycle8,
            MdscTarget::Concat => GradeTarget::Concat,
        };
        let cfg = GradeConfig { tmax, ..GradeConfig::for_target(target) };
        let result = run_md_grade(&c.params, ps, &cfg)?;
        *slot = Box::into_raw(Box::new(MdscGrade { result }));
        Ok(())
    })
}

/// Copies the row-major distribution into `p[0..cap]`; `rows` and `cols`
/// receive its shape.
///
/// # Safety
/// `p` must reference `cap` writable values; `rows` and `cols` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mdsc_grade_distribution(
    grade: *const MdscGrade,
    p: *mut f64,
    cap: usize,
    rows: *mut usize,
    cols: *mut usize,
) -> MdscStatus {
    guard(|| {
        let g = unsafe { cref(grade, "grade") }?;
        let r = g.result.p.len();
        let c = g.result.p.first().map_or(0, Vec::len);
        *unsafe { out(rows, "rows") }? = r;
        *unsafe { out(cols, "cols") }? = c;
        if cap < r * c {
            return Err(Fail::Status(MdscStatus::BufferTooSmall, format!("need {} values, have {cap}", r * c)));
        }
        if p.is_null() {
            return Err(null("p"));
        }
        let flat: Vec<f64> = g.result.p.iter().flatten().copied().collect();
        unsafe { ptr::copy_nonoverlapping(flat.as_ptr(), p, flat.len()) };
        Ok(())
    })
}

/// Final objective, iteration count and relocation density of a run.
///
/// # Safety
/// Output pointers must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn mdsc_grade_summary(
    grade: *const MdscGrade,
    objective: *mut f64,
    iterations: *mut usize,
    density: *mut f64,
) -> MdscStatus {
    guard(|| {
        let g = unsafe { cref(grade, "grade") }?;
        unsafe {
            if let Some(o) = objective.as_mut() {
                *o = g.result.objective;
            }
            if let Some(i) = iterations.as_mut() {
                *i = g.result.iterations;
            }
            if let Some(d) = density.as_mut() {
                *d = g.result.md_density;
            }
        }
        Ok(())
    })
}

/// # Safety
/// `grade` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mdsc_grade_free(grade: *mut MdscGrade) {
    if !grade.is_null() {
        drop(unsafe { Box::from_raw(grade) });
    }
}

/// Forecast of the cycle-`len` count (6 or 8) from `n` expected candidates.
///
/// # Safety
/// `bounds` must reference three writable values: estimate, lower, upper.
#[no_mangle]
pub unsafe extern "C" fn mdsc_forecast(code: *const MdscCode, n: f64, len: u32, bounds: *mut f64) -> MdscStatus {
    guard(|| {
        let c = unsafe { cref(code, "code") }?;
        if bounds.is_null() {
            return Err(null("bounds"));
        }
        let f = forecast(n, len as usize, &c.params)?;
        unsafe { ptr::copy_nonoverlapping([f.estimate, f.lower, f.upper].as_ptr(), bounds, 3) };
        Ok(())
    })
}

/// Parity-check matrix of the MD-SC code.
///
/// # Safety
/// `code` must be a live handle; `matrix` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mdsc_matrix_build(code: *const MdscCode, matrix: *mut *mut MdscMatrix) -> MdscStatus {
    guard(|| {
        let c = unsafe { cref(code, "code") }?;
        let slot = unsafe { out(matrix, "matrix") }?;
        let h = build_md_matrix(&c.triple, &c.params)?;
        *slot = Box::into_raw(Box::new(MdscMatrix { h }));
        Ok(())
    })
}

/// Rows, columns and number of ones.
///
/// # Safety
/// Output pointers must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn mdsc_matrix_shape(
    matrix: *const MdscMatrix,
    rows: *mut usize,
    cols: *mut usize,
    nnz: *mut usize,
) -> MdscStatus {
    guard(|| {
        let m = unsafe { cref(matrix, "matrix") }?;
        unsafe {
            if let Some(r) = rows.as_mut() {
                *r = m.h.rows();
            }
            if let Some(c) = cols.as_mut() {
                *c = m.h.cols();
            }
            if let Some(n) = nnz.as_mut() {
                *n = m.h.nnz();
            }
        }
        Ok(())
    })
}

/// Alist text of the matrix; see `mdsc_last_error` for the buffer protocol.
///
/// # Safety
/// `buf` must reference `cap` writable bytes or be null with `cap` 0.
#[no_mangle]
pub unsafe extern "C" fn mdsc_matrix_alist(
    matrix: *const MdscMatrix,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> MdscStatus {
    guard(|| {
        let m = unsafe { cref(matrix, "matrix") }?;
        unsafe { write_text(&m.h.to_alist(), buf, cap, needed) }
    })
}

/// # Safety
/// `matrix` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mdsc_matrix_free(matrix: *mut MdscMatrix) {
    if !matrix.is_null() {
        drop(unsafe { Box::from_raw(matrix) });
    }
}
