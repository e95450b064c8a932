//! C ABI over `planar-color`.
//!
//! Every fallible function returns a [`PcStatus`]. On failure a message is
//! kept per thread and can be read with [`pc_last_error`]. Handles are
//! opaque and must be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use planar_color::generators::{generate, Family, GenSpec};
use planar_color::io::parse_graph;
use planar_color::pipeline::{color_graph, ColorReport};
use planar_color::{check_proper, Error, Graph, Preset};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PcStatus {
    Ok = 0,
    VerificationFailed = 1,
    InputError = 2,
    InternalError = 3,
    NullArgument = 4,
    Panic = 5,
}

/// An undirected simple graph on 64-bit vertex ids.
pub struct PcGraph(Graph);

/// The result of a coloring run.
pub struct PcColoring(ColorReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PcStatus {
    match e.exit_code() {
        1 => PcStatus::VerificationFailed,
        2 => PcStatus::InputError,
        _ => PcStatus::InternalError,
    }
}

fn guard<F: FnOnce() -> Result<(), (PcStatus, String)>>(f: F) -> PcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PcStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            PcStatus::Panic
        }
    }
}

fn lib(e: Error) -> (PcStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(name: &str) -> (PcStatus, String) {
    (PcStatus::NullArgument, format!("{name} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, (PcStatus, String)> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (PcStatus::InputError, format!("{name} is not valid UTF-8")))
}

fn preset_of(palette: u32) -> Result<Preset, (PcStatus, String)> {
    match palette {
        4 => Ok(Preset::FourColor),
        6 => Ok(Preset::SixColor),
        k => Err((PcStatus::InputError, format!("palette must be 4 or 6, got {k}"))),
    }
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn pc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Creates an empty graph.
///
/// # Safety
/// `out` must be null or point to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn pc_graph_new(out: *mut *mut PcGraph) -> PcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = Box::into_raw(Box::new(PcGraph(Graph::new())));
        Ok(())
    })
}

/// Parses a graph from JSON or edge-list text.
///
/// # Safety
/// `text` must be null or a nul-terminated string; `out` as for
/// [`pc_graph_new`].
#[no_mangle]
pub unsafe extern "C" fn pc_graph_parse(text: *const c_char, out: *mut *mut PcGraph) -> PcStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let g = parse_graph(text).map_err(lib)?;
        *out = Box::into_raw(Box::new(PcGraph(g)));
        Ok(())
    })
}

/// Generates a graph from a named family such as `"grid"`.
///
/// # Safety
/// `family` must be null or a nul-terminated string; `out` as for
/// [`pc_graph_new`].
#[no_mangle]
pub unsafe extern "C" fn pc_graph_generate(
    family: *const c_char,
    n: usize,
    seed: u64,
    out: *mut *mut PcGraph,
) -> PcStatus {
    guard(|| {
        let family: Family = str_arg(family, "family")?.parse().map_err(lib)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let g = generate(&GenSpec::new(family, n, seed)).map_err(lib)?;
        *out = Box::into_raw(Box::new(PcGraph(g)));
        Ok(())
    })
}

/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn pc_graph_add_vertex(g: *mut PcGraph, v: u64) -> PcStatus {
    guard(|| {
        let g = g.as_mut().ok_or_else(|| null("g"))?;
        g.0.add_vertex(v);
        Ok(())
    })
}

/// Adds the edge `{u, v}`, creating missing endpoints.
///
/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn pc_graph_add_edge(g: *mut PcGraph, u: u64, v: u64) -> PcStatus {
    guard(|| {
        let g = g.as_mut().ok_or_else(|| null("g"))?;
        g.0.add_edge(u, v).map_err(lib)
    })
}

/// Vertex count, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn pc_graph_vertex_count(g: *const PcGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.n())
}

/// Edge count, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn pc_graph_edge_count(g: *const PcGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.edge_count())
}

/// # Safety
/// `g` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pc_graph_free(g: *mut PcGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Colors `g` with `palette` colors: 4 for triangle-free planar graphs, 6 for
/// planar graphs.
///
/// # Safety
/// `g` must be null or a live graph handle; `out` must be null or point to
/// writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn pc_color(g: *const PcGraph, palette: u32, out: *mut *mut PcColoring) -> PcStatus {
    guard(|| {
        let g = g.as_ref().ok_or_else(|| null("g"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let report = color_graph(&g.0, preset_of(palette)?).map_err(lib)?;
        *out = Box::into_raw(Box::new(PcColoring(report)));
        Ok(())
    })
}

/// Writes the color of `v` to `color`.
///
/// # Safety
/// `c` must be null or a live coloring handle; `color` null or writable.
#[no_mangle]
pub unsafe extern "C" fn pc_coloring_get(c: *const PcColoring, v: u64, color: *mut u32) -> PcStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(|| null("c"))?;
        let color = color.as_mut().ok_or_else(|| null("color"))?;
        *color =
            c.0.coloring
                .get(v)
                .ok_or_else(|| (PcStatus::InputError, format!("vertex {v} is not colored")))?;
        Ok(())
    })
}

/// Communication rounds the coloring used, or 0 for a null handle.
///
/// # Safety
/// `c` must be null or a live coloring handle.
#[no_mangle]
pub unsafe extern "C" fn pc_coloring_rounds(c: *const PcColoring) -> usize {
    c.as_ref().map_or(0, |c| c.0.rounds())
}

/// Number of distinct colors used, or 0 for a null handle.
///
/// # Safety
/// `c` must be null or a live coloring handle.
#[no_mangle]
pub unsafe extern "C" fn pc_coloring_colors(c: *const PcColoring) -> usize {
    c.as_ref().map_or(0, |c| c.0.coloring.distinct_colors())
}

/// Checks that `c` colors every vertex of `g` properly from `1..=palette`.
///
/// # Safety
/// Both handles must be null or live.
#[no_mangle]
pub unsafe extern "C" fn pc_verify(g: *const PcGraph, c: *const PcColoring, palette: u32) -> PcStatus {
    guard(|| {
        let g = g.as_ref().ok_or_else(|| null("g"))?;
        let c = c.as_ref().ok_or_else(|| null("c"))?;
        let mut colors = c.0.coloring.clone();
        colors.palette = palette;
        check_proper(&g.0, &colors, true).map_err(|v| (PcStatus::VerificationFailed, v.to_string()))
    })
}

/// # Safety
/// `c` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pc_coloring_free(c: *mut PcColoring) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}
