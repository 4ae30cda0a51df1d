//! C ABI over `spandisc`.
//!
//! Graphs and colourings cross the boundary as opaque handles owned by the
//! caller and released with the matching `*_free`. Every function returns an
//! [`SdStatus`]; on failure a message is kept per thread and can be read with
//! [`sd_last_error`]. Panics are caught and reported as `SD_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use spandisc::discrepancy::{boost_forest, BoostParams, BoostStatus};
use spandisc::generators::{gen_gnm, gen_gnp, rho_fixed_point, GnpParams};
use spandisc::io::{load_edge_list, save_edge_list};
use spandisc::oracles::{make_coloring, AdversaryKind, AdversarySpec};
use spandisc::perturb::{is_three_connected, separation_number_exact};
use spandisc::{EdgeColoring, Error, Graph};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Disconnected = 3,
    TooLarge = 4,
    Infeasible = 5,
    Io = 6,
    Parse = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SdAdversary {
    UniformRandom = 0,
    BalancedLocal = 1,
    CutColoring = 2,
    AdaptiveRecolor = 3,
}

/// Opaque graph handle.
pub struct SdGraph(Graph);

/// Opaque edge colouring handle.
pub struct SdColoring(EdgeColoring);

/// Outcome of [`sd_boost`].
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SdBoostResult {
    pub signed_sum: i64,
    pub abs_discrepancy: u64,
    pub leaf_count: usize,
    pub swaps_applied: usize,
    pub case_tag: u8,
    /// 0 boosted, 1 already discrepant, 2 infeasible.
    pub status: u8,
    pub swap_identity_holds: bool,
    pub epsilon_achieved: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SdStatus {
    match e {
        Error::Disconnected => SdStatus::Disconnected,
        Error::TooLarge { .. } | Error::BudgetExceeded(_) => SdStatus::TooLarge,
        Error::ContextInfeasible(_) => SdStatus::Infeasible,
        Error::Io(_) => SdStatus::Io,
        Error::Parse { .. } => SdStatus::Parse,
        _ => SdStatus::InvalidArgument,
    }
}

fn guard<F>(f: F) -> SdStatus
where
    F: FnOnce() -> Result<(), SdStatus>,
{
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SdStatus::Ok,
        Ok(Err(s)) => s,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            SdStatus::Panic
        }
    }
}

fn lib<T>(r: spandisc::Result<T>) -> Result<T, SdStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

fn null(what: &str) -> SdStatus {
    set_error(format!("{what} is null"));
    SdStatus::NullPointer
}

unsafe fn graph_ref<'a>(g: *const SdGraph) -> Result<&'a Graph, SdStatus> {
    g.as_ref().map(|g| &g.0).ok_or_else(|| null("graph"))
}

unsafe fn path_arg(path: *const c_char) -> Result<String, SdStatus> {
    if path.is_null() {
        return Err(null("path"));
    }
    CStr::from_ptr(path).to_str().map(str::to_owned).map_err(|_| {
        set_error("path is not UTF-8".into());
        SdStatus::InvalidArgument
    })
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), SdStatus> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn sd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sd_graph_gnp(n: usize, p: f64, seed: u64, out: *mut *mut SdGraph) -> SdStatus {
    guard(|| {
        let g = lib(GnpParams::new(n, p, seed).and_then(|params| gen_gnp(&params)))?;
        write_out(out, Box::into_raw(Box::new(SdGraph(g))))
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sd_graph_gnm(n: usize, m: usize, seed: u64, out: *mut *mut SdGraph) -> SdStatus {
    guard(|| {
        let g = lib(gen_gnm(n, m, seed))?;
        write_out(out, Box::into_raw(Box::new(SdGraph(g))))
    })
}

/// Graph from `m` pairs laid out as `u0, v0, u1, v1, ...`.
///
/// # Safety
/// `pairs` must point to `2 * m` readable values; `out` must be valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn sd_graph_from_edges(
    n: usize,
    pairs: *const usize,
    m: usize,
    out: *mut *mut SdGraph,
) -> SdStatus {
    guard(|| {
        let flat: &[usize] = if m == 0 {
            &[]
        } else if pairs.is_null() {
            return Err(null("pairs"));
        } else {
            std::slice::from_raw_parts(pairs, 2 * m)
        };
        let g = lib(Graph::from_edges(n, flat.chunks_exact(2).map(|c| (c[0], c[1]))))?;
        write_out(out, Box::into_raw(Box::new(SdGraph(g))))
    })
}

/// Load an edge list. When the file carries colours and `coloring_out` is
/// non-NULL, the colouring is returned too; otherwise `*coloring_out` is NULL.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid for writes and
/// `coloring_out` NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sd_graph_load(
    path: *const c_char,
    out: *mut *mut SdGraph,
    coloring_out: *mut *mut SdColoring,
) -> SdStatus {
    guard(|| {
        let path = path_arg(path)?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let (g, chi) = lib(load_edge_list(path))?;
        if !coloring_out.is_null() {
            let c = chi.map_or(ptr::null_mut(), |c| Box::into_raw(Box::new(SdColoring(c))));
            coloring_out.write(c);
        }
        write_out(out, Box::into_raw(Box::new(SdGraph(g))))
    })
}

/// # Safety
/// `g` must be a live handle, `coloring` NULL or a live handle, `path` a
/// NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sd_graph_save(
    g: *const SdGraph,
    coloring: *const SdColoring,
    path: *const c_char,
) -> SdStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let path = path_arg(path)?;
        let chi = coloring.as_ref().map(|c| &c.0);
        lib(save_edge_list(g, chi, path))
    })
}

/// # Safety
/// `g` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sd_graph_free(g: *mut SdGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle; `n_out` and `m_out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sd_graph_counts(g: *const SdGraph, n_out: *mut usize, m_out: *mut usize) -> SdStatus {
    guard(|| {
        let g = graph_ref(g)?;
        write_out(n_out, g.n())?;
        write_out(m_out, g.m())
    })
}

/// # Safety
/// `g` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sd_graph_is_connected(g: *const SdGraph, out: *mut bool) -> SdStatus {
    guard(|| {
        let g = graph_ref(g)?;
        write_out(out, g.is_connected())
    })
}

/// Colouring of `g` chosen by an adversary. `rounds` is used by the adaptive
/// adversary only and must be at least 1.
///
/// # Safety
/// `g` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sd_coloring_make(
    g: *const SdGraph,
    kind: SdAdversary,
    seed: u64,
    rounds: usize,
    out: *mut *mut SdColoring,
) -> SdStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let kind = match kind {
            SdAdversary::UniformRandom => AdversaryKind::UniformRandom,
            SdAdversary::BalancedLocal => AdversaryKind::BalancedLocal,
            SdAdversary::CutColoring => AdversaryKind::CutColoring,
            SdAdversary::AdaptiveRecolor => AdversaryKind::AdaptiveRecolor,
        };
        let spec = AdversarySpec { kind, seed, rounds };
        let boost = lib(BoostParams::new(0.02, 0.15, seed))?;
        let chi = lib(make_coloring(g, &spec, &boost))?;
        write_out(out, Box::into_raw(Box::new(SdColoring(chi))))
    })
}

/// Sum of the colours over all edges.
///
/// # Safety
/// `c` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sd_coloring_sum(c: *const SdColoring, out: *mut i64) -> SdStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(|| null("coloring"))?;
        write_out(out, c.0.colors().iter().map(|s| s.value()).sum())
    })
}

/// # Safety
/// `c` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sd_coloring_free(c: *mut SdColoring) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Run the discrepancy boost on `g` under `coloring`.
///
/// # Safety
/// `g` and `coloring` must be live handles; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sd_boost(
    g: *const SdGraph,
    coloring: *const SdColoring,
    delta: f64,
    alpha: f64,
    seed: u64,
    out: *mut SdBoostResult,
) -> SdStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let chi = &coloring.as_ref().ok_or_else(|| null("coloring"))?.0;
        let params = lib(BoostParams::new(delta, alpha, seed))?;
        let r = lib(boost_forest(g, chi, &params))?;
        write_out(
            out,
            SdBoostResult {
                signed_sum: r.signed_sum,
                abs_discrepancy: r.abs_discrepancy,
                leaf_count: r.leaf_count,
                swaps_applied: r.swaps_applied,
                case_tag: r.case_tag,
                status: match r.status {
                    BoostStatus::Boosted => 0,
                    BoostStatus::AlreadyDiscrepant => 1,
                    BoostStatus::Infeasible => 2,
                },
                swap_identity_holds: r.swap_identity_holds,
                epsilon_achieved: r.epsilon_achieved,
            },
        )
    })
}

/// Solution of `rho = exp(-c (1 - rho))` in `[0, 1)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sd_rho(c: f64, tol: f64, out: *mut f64) -> SdStatus {
    guard(|| write_out(out, lib(rho_fixed_point(c, tol))?))
}

/// # Safety
/// `g` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sd_is_three_connected(g: *const SdGraph, out: *mut bool) -> SdStatus {
    guard(|| {
        let g = graph_ref(g)?;
        write_out(out, lib(is_three_connected(g))?)
    })
}

/// Exact separation number; only small graphs are accepted.
///
/// # Safety
/// `g` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sd_separation_number_exact(g: *const SdGraph, out: *mut usize) -> SdStatus {
    guard(|| {
        let g = graph_ref(g)?;
        write_out(out, lib(separation_number_exact(g))?)
    })
}
