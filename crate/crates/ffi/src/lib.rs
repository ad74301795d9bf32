//! C ABI over `lqg-core`.
//!
//! Objects cross the boundary as opaque handles returned through `out`
//! parameters and released with the matching `*_free`. Every
//! fallible call returns an [`LqgStatus`]; on failure a description is
//! available from [`lqg_last_error`] on the same thread. Output parameters
//! are written only on success.

use lqg_core::exponents::{kpz, parameter_triple, QuantumDimension};
use lqg_core::field::{mollify, sample_continuum_gff, sample_discrete_gff, FieldGrid};
use lqg_core::lfpp::{
    across_distance, around_distance, build_metric, crossing_distance, distance_map, AnnulusSpec, Connectivity,
    LfppMetric,
};
use lqg_core::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LqgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfBounds = 3,
    Unreachable = 4,
    BufferTooSmall = 5,
    Io = 6,
    Panic = 7,
}

/// Kind of a KPZ result.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LqgDimensionKind {
    Finite = 0,
    /// `Δ₀ = Q²/2`.
    Boundary = 1,
    /// `Δ₀ > Q²/2`; the value is unset.
    Infinite = 2,
}

/// Jointly consistent parameters `(γ, ξ, Q, d_γ, c_M)`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LqgParameterTriple {
    pub gamma: f64,
    pub xi: f64,
    pub q: f64,
    pub d: f64,
    pub c_m: f64,
}

/// Square lattice field.
pub struct LqgField(FieldGrid);

/// LFPP metric of a mollified field.
pub struct LqgMetric(LfppMetric);

/// Shortest-path distances and predecessors from a source set.
pub struct LqgDistanceMap {
    dist: Vec<f64>,
    pred: Vec<usize>,
}

const NO_PRED: usize = usize::MAX;

/// Distance stored for vertices no path reaches.
pub const LQG_UNREACHABLE: f64 = 1.7976931348623157e308;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> LqgStatus {
    match e {
        Error::OutOfBounds(_) => LqgStatus::OutOfBounds,
        Error::Unreachable(_) => LqgStatus::Unreachable,
        Error::Io(_) | Error::Format(_) => LqgStatus::Io,
        _ => LqgStatus::InvalidArgument,
    }
}

fn fail(status: LqgStatus, msg: &str) -> LqgStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> Result<(), LqgStatus>) -> LqgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            LqgStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => fail(LqgStatus::Panic, "internal panic"),
    }
}

fn lift<T>(r: lqg_core::Result<T>) -> Result<T, LqgStatus> {
    r.map_err(|e| fail(status_of(&e), &e.to_string()))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, LqgStatus> {
    p.as_ref().ok_or_else(|| fail(LqgStatus::NullPointer, &format!("{what} is null")))
}

fn check_out<T>(p: *mut T, what: &str) -> Result<(), LqgStatus> {
    if p.is_null() {
        Err(fail(LqgStatus::NullPointer, &format!("{what} is null")))
    } else {
        Ok(())
    }
}

unsafe fn copy_out(src: &[f64], buf: *mut f64, len: usize) -> Result<(), LqgStatus> {
    check_out(buf, "output buffer")?;
    if len < src.len() {
        return Err(fail(
            LqgStatus::BufferTooSmall,
            &format!("buffer holds {len} values, {} needed", src.len()),
        ));
    }
    std::ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lqg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Description of the last failed call on this thread; empty after a
/// success. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn lqg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static name of a status code; unknown codes map to "unknown status".
#[no_mangle]
pub extern "C" fn lqg_status_name(status: i32) -> *const c_char {
    let s: &'static CStr = match status {
        0 => c"ok",
        1 => c"null pointer",
        2 => c"invalid argument",
        3 => c"out of bounds",
        4 => c"unreachable",
        5 => c"buffer too small",
        6 => c"i/o or format error",
        7 => c"internal panic",
        _ => c"unknown status",
    };
    s.as_ptr()
}

/// Samples a zero-boundary discrete GFF on an `n × n` grid. With
/// `continuum` nonzero the field is scaled so that `Var h_ε ≈ log(1/ε)`.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn lqg_field_sample_gff(
    n: usize,
    spacing: f64,
    seed: u64,
    continuum: bool,
    out: *mut *mut LqgField,
) -> LqgStatus {
    guard(|| {
        check_out(out, "out")?;
        let f = if continuum {
            lift(sample_continuum_gff(n, spacing, seed))?
        } else {
            lift(sample_discrete_gff(n, spacing, seed))?
        };
        *out = Box::into_raw(Box::new(LqgField(f)));
        Ok(())
    })
}

/// Builds a field from `n²` row-major values.
///
/// # Safety
/// `values` must point to `n * n` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lqg_field_from_values(
    n: usize,
    spacing: f64,
    values: *const f64,
    out: *mut *mut LqgField,
) -> LqgStatus {
    guard(|| {
        check_out(out, "out")?;
        let _ = deref(values, "values")?;
        let len = n.checked_mul(n).ok_or_else(|| fail(LqgStatus::InvalidArgument, "n * n overflows"))?;
        let v = std::slice::from_raw_parts(values, len).to_vec();
        *out = Box::into_raw(Box::new(LqgField(lift(FieldGrid::from_values(n, spacing, v))?)));
        Ok(())
    })
}

/// Side length of a field, or 0 for a null handle.
///
/// # Safety
/// `field` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lqg_field_n(field: *const LqgField) -> usize {
    field.as_ref().map_or(0, |f| f.0.n())
}

/// Copies the `n²` row-major values into `buf` of capacity `len`.
///
/// # Safety
/// `field` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn lqg_field_values(field: *const LqgField, buf: *mut f64, len: usize) -> LqgStatus {
    guard(|| copy_out(deref(field, "field")?.0.values(), buf, len))
}

/// New field equal to `field + c`.
///
/// # Safety
/// `field` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lqg_field_add_constant(field: *const LqgField, c: f64, out: *mut *mut LqgField) -> LqgStatus {
    guard(|| {
        let f = deref(field, "field")?;
        check_out(out, "out")?;
        *out = Box::into_raw(Box::new(LqgField(f.0.add_constant(c))));
        Ok(())
    })
}

/// Releases a field handle. Null is ignored.
///
/// # Safety
/// `field` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lqg_field_free(field: *mut LqgField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Mollifies `field` at scale `epsilon` and builds the LFPP metric with
/// exponent `xi`. `connectivity` is 4 (axis neighbours) or 8 (king moves).
///
/// # Safety
/// `field` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lqg_metric_build(
    field: *const LqgField,
    epsilon: f64,
    xi: f64,
    connectivity: u32,
    out: *mut *mut LqgMetric,
) -> LqgStatus {
    guard(|| {
        let f = deref(field, "field")?;
        check_out(out, "out")?;
        let conn = match connectivity {
            4 => Connectivity::Axis4,
            8 => Connectivity::King8,
            c => return Err(fail(LqgStatus::InvalidArgument, &format!("connectivity must be 4 or 8, got {c}"))),
        };
        let m = lift(mollify(&f.0, epsilon))?;
        *out = Box::into_raw(Box::new(LqgMetric(lift(build_metric(&m, xi, conn))?)));
        Ok(())
    })
}

/// Left-right crossing distance of the grid.
///
/// # Safety
/// `metric` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lqg_metric_crossing_distance(metric: *const LqgMetric, out: *mut f64) -> LqgStatus {
    guard(|| {
        let m = deref(metric, "metric")?;
        check_out(out, "out")?;
        *out = crossing_distance(&m.0);
        Ok(())
    })
}

/// Across- and around-distances of the closed annulus
/// `r_in ≤ |v − (row, col)| ≤ r_out`.
///
/// # Safety
/// `metric` must be a live handle; both outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn lqg_metric_annulus(
    metric: *const LqgMetric,
    row: usize,
    col: usize,
    r_in: f64,
    r_out: f64,
    across: *mut f64,
    around: *mut f64,
) -> LqgStatus {
    guard(|| {
        let m = deref(metric, "metric")?;
        check_out(across, "across")?;
        check_out(around, "around")?;
        let spec = lift(AnnulusSpec::new(row, col, r_in, r_out))?;
        let a = lift(across_distance(&m.0, &spec))?;
        let b = lift(around_distance(&m.0, &spec))?;
        *across = a;
        *around = b;
        Ok(())
    })
}

/// Releases a metric handle. Null is ignored.
///
/// # Safety
/// `metric` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lqg_metric_free(metric: *mut LqgMetric) {
    if !metric.is_null() {
        drop(Box::from_raw(metric));
    }
}

/// Dijkstra distances from `count` source vertices (row-major indices).
/// The result does not borrow the metric.
///
/// # Safety
/// `metric` must be a live handle, `sources` valid for `count` reads and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lqg_distance_map(
    metric: *const LqgMetric,
    sources: *const usize,
    count: usize,
    out: *mut *mut LqgDistanceMap,
) -> LqgStatus {
    guard(|| {
        let m = deref(metric, "metric")?;
        let _ = deref(sources, "sources")?;
        check_out(out, "out")?;
        let src = std::slice::from_raw_parts(sources, count);
        let d = lift(distance_map(&m.0, src))?;
        let pred = (0..m.0.len()).map(|v| d.pred(v).unwrap_or(NO_PRED)).collect();
        *out = Box::into_raw(Box::new(LqgDistanceMap { dist: d.distances().to_vec(), pred }));
        Ok(())
    })
}

/// Number of vertices covered by a distance map, or 0 for null.
///
/// # Safety
/// `dmap` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lqg_distance_map_len(dmap: *const LqgDistanceMap) -> usize {
    dmap.as_ref().map_or(0, |d| d.dist.len())
}

/// Copies all distances; unreached vertices hold [`LQG_UNREACHABLE`].
///
/// # Safety
/// `dmap` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn lqg_distance_map_distances(dmap: *const LqgDistanceMap, buf: *mut f64, len: usize) -> LqgStatus {
    guard(|| copy_out(&deref(dmap, "distance map")?.dist, buf, len))
}

/// Writes the geodesic from a source to `target` into `buf` (source first)
/// and its vertex count into `out_len`. When `cap` is too small the required
/// count is still stored in `out_len` and `BufferTooSmall` is returned.
///
/// # Safety
/// `dmap` must be a live handle, `buf` valid for `cap` writes (may be null
/// when `cap` is 0) and `out_len` writable.
#[no_mangle]
pub unsafe extern "C" fn lqg_distance_map_geodesic(
    dmap: *const LqgDistanceMap,
    target: usize,
    buf: *mut usize,
    cap: usize,
    out_len: *mut usize,
) -> LqgStatus {
    guard(|| {
        let d = deref(dmap, "distance map")?;
        check_out(out_len, "out_len")?;
        if target >= d.dist.len() {
            return Err(fail(LqgStatus::InvalidArgument, &format!("target {target} out of range")));
        }
        if d.dist[target] == LQG_UNREACHABLE {
            return Err(fail(LqgStatus::Unreachable, &format!("vertex {target} is not reachable")));
        }
        let mut path = vec![target];
        let mut v = target;
        while d.pred[v] != NO_PRED {
            v = d.pred[v];
            path.push(v);
        }
        *out_len = path.len();
        if cap < path.len() {
            return Err(fail(
                LqgStatus::BufferTooSmall,
                &format!("geodesic has {} vertices, buffer holds {cap}", path.len()),
            ));
        }
        check_out(buf, "buf")?;
        for (i, &v) in path.iter().rev().enumerate() {
            *buf.add(i) = v;
        }
        Ok(())
    })
}

/// Releases a distance map. Null is ignored.
///
/// # Safety
/// `dmap` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lqg_distance_map_free(dmap: *mut LqgDistanceMap) {
    if !dmap.is_null() {
        drop(Box::from_raw(dmap));
    }
}

/// Parameters for `gamma` in `(0, 2]` using the built-in dimension table.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lqg_parameter_triple(gamma: f64, out: *mut LqgParameterTriple) -> LqgStatus {
    guard(|| {
        check_out(out, "out")?;
        let t = lift(parameter_triple(gamma))?;
        *out = LqgParameterTriple { gamma: t.gamma, xi: t.xi, q: t.q, d: t.d, c_m: t.c_m };
        Ok(())
    })
}

/// KPZ relation `Δ = (Q − √(Q² − 2Δ₀))/ξ`. `value` is left untouched when
/// the result is infinite.
///
/// # Safety
/// `kind` and `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lqg_kpz(
    delta0: f64,
    xi: f64,
    q: f64,
    kind: *mut LqgDimensionKind,
    value: *mut f64,
) -> LqgStatus {
    guard(|| {
        check_out(kind, "kind")?;
        check_out(value, "value")?;
        match lift(kpz(delta0, xi, q))? {
            QuantumDimension::Finite(v) => {
                *kind = LqgDimensionKind::Finite;
                *value = v;
            }
            QuantumDimension::Boundary(v) => {
                *kind = LqgDimensionKind::Boundary;
                *value = v;
            }
            QuantumDimension::Infinite => *kind = LqgDimensionKind::Infinite,
        }
        Ok(())
    })
}
