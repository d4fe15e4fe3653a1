// SPDX-License-Identifier: Apache-2.0

//! C ABI over the aigsynth engine.
//!
//! Graphs and the rewrite library are opaque heap handles owned by the
//! caller and released with the matching `*_free`. Every fallible call
//! returns an [`AigStatus`]; on failure a message is kept per thread and
//! read with [`aig_last_error`]. Strings returned through `char **` are
//! owned by the caller and released with [`aig_string_free`]. Panics never
//! cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use aigsynth::aig::Aig;
use aigsynth::bench::{parse_bench, write_bench};
use aigsynth::equiv::{check_equiv, DEFAULT_EXHAUSTIVE_LIMIT};
use aigsynth::graphml::write_graphml;
use aigsynth::pipeline::{run_recipe, VERIFY_RANDOM_WORDS};
use aigsynth::recipe::parse_recipe;
use aigsynth::transforms::NpnLibrary;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AigStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    RecipeError = 4,
    EquivError = 5,
    Internal = 6,
}

/// Opaque combinational graph.
pub struct AigHandle {
    aig: Aig,
}

/// Opaque shared rewrite library.
pub struct AigLibrary {
    lib: Arc<NpnLibrary>,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AigStats {
    pub pis: usize,
    pub pos: usize,
    pub nodes: usize,
    pub edges: usize,
    pub inverters: usize,
    pub depth: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

/// Runs `f`, recording its error message and converting panics.
fn guard(f: impl FnOnce() -> Result<(), (AigStatus, String)>) -> AigStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            AigStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            AigStatus::Internal
        }
    }
}

fn null() -> (AigStatus, String) {
    (AigStatus::NullPointer, "null pointer argument".into())
}

/// # Safety
/// `p` is null or a valid NUL-terminated string.
unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, (AigStatus, String)> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| (AigStatus::InvalidUtf8, e.to_string()))
}

/// # Safety
/// `p` is null or points to a live handle.
unsafe fn graph<'a>(p: *const AigHandle) -> Result<&'a Aig, (AigStatus, String)> {
    p.as_ref().map(|h| &h.aig).ok_or_else(null)
}

/// # Safety
/// `out` is null or writable.
unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), (AigStatus, String)> {
    if out.is_null() {
        return Err(null());
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// # Safety
/// `out` is null or writable.
unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), (AigStatus, String)> {
    if out.is_null() {
        return Err(null());
    }
    let c = CString::new(s).map_err(|e| (AigStatus::Internal, e.to_string()))?;
    *out = c.into_raw();
    Ok(())
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call on the same thread.
#[no_mangle]
pub extern "C" fn aig_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses BENCH text into a new graph.
///
/// # Safety
/// `text` is a NUL-terminated string and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn aig_parse_bench(text: *const c_char, out: *mut *mut AigHandle) -> AigStatus {
    guard(|| {
        let text = read_str(text)?;
        let aig = parse_bench(text).map_err(|e| (AigStatus::ParseError, e.to_string()))?;
        put(out, AigHandle { aig })
    })
}

/// Releases a graph. Null is ignored.
///
/// # Safety
/// `handle` is null or came from this library and is not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn aig_free(handle: *mut AigHandle) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// # Safety
/// `handle` is a live graph and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn aig_stats(handle: *const AigHandle, out: *mut AigStats) -> AigStatus {
    guard(|| {
        let s = graph(handle)?.stats();
        let out = out.as_mut().ok_or_else(null)?;
        *out = AigStats {
            pis: s.pi_count,
            pos: s.po_count,
            nodes: s.and_count,
            edges: s.edge_count,
            inverters: s.inverted_edge_count,
            depth: s.depth,
        };
        Ok(())
    })
}

/// # Safety
/// `handle` is a live graph and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn aig_write_bench(handle: *const AigHandle, out: *mut *mut c_char) -> AigStatus {
    guard(|| put_string(out, write_bench(graph(handle)?)))
}

/// # Safety
/// `handle` is a live graph and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn aig_write_graphml(handle: *const AigHandle, out: *mut *mut c_char) -> AigStatus {
    guard(|| put_string(out, write_graphml(graph(handle)?)))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` is null or came from this library and is not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn aig_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Handle to the process-wide rewrite library, built on first use.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn aig_library_new(out: *mut *mut AigLibrary) -> AigStatus {
    guard(|| put(out, AigLibrary { lib: NpnLibrary::shared() }))
}

/// # Safety
/// `lib` is null or came from [`aig_library_new`] and is not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn aig_library_free(lib: *mut AigLibrary) {
    if !lib.is_null() {
        drop(Box::from_raw(lib));
    }
}

/// Applies a recipe such as `"b; rw; rf -z"` and returns the final graph as
/// a new handle. The input graph is unchanged.
///
/// # Safety
/// `handle` and `lib` are live, `recipe` is a NUL-terminated string and
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn aig_apply_recipe(
    handle: *const AigHandle,
    lib: *const AigLibrary,
    recipe: *const c_char,
    out: *mut *mut AigHandle,
) -> AigStatus {
    guard(|| {
        let aig = graph(handle)?;
        let lib = lib.as_ref().ok_or_else(null)?;
        let tokens = parse_recipe(read_str(recipe)?).map_err(|e| (AigStatus::RecipeError, e.to_string()))?;
        let snaps = run_recipe(aig, &tokens, &lib.lib, None).map_err(|e| (AigStatus::Internal, e.to_string()))?;
        let last = snaps.into_iter().last().map(|s| s.aig).unwrap_or_else(|| aig.clone());
        put(out, AigHandle { aig: last })
    })
}

/// Combinational equivalence by name-matched inputs and outputs:
/// exhaustive up to 16 inputs, random simulation above.
///
/// # Safety
/// `a` and `b` are live graphs and `equivalent` is writable.
#[no_mangle]
pub unsafe extern "C" fn aig_equiv(a: *const AigHandle, b: *const AigHandle, equivalent: *mut bool) -> AigStatus {
    guard(|| {
        let (a, b) = (graph(a)?, graph(b)?);
        let report = check_equiv(a, b, DEFAULT_EXHAUSTIVE_LIMIT, VERIFY_RANDOM_WORDS, 0)
            .map_err(|e| (AigStatus::EquivError, e.to_string()))?;
        *equivalent.as_mut().ok_or_else(null)? = report.equivalent;
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const CHAIN: &str = "INPUT(a)\nINPUT(b)\nINPUT(c)\nINPUT(d)\nOUTPUT(y)\nt1 = AND(a, b)\nt2 = AND(t1, c)\ny = AND(t2, d)\n";

    fn parse(text: &str) -> *mut AigHandle {
        let c = CString::new(text).unwrap();
        let mut h = ptr::null_mut();
        assert_eq!(unsafe { aig_parse_bench(c.as_ptr(), &mut h) }, AigStatus::Ok);
        h
    }

    #[test]
    fn parse_stats_free() {
        let h = parse(CHAIN);
        let mut s = AigStats::default();
        assert_eq!(unsafe { aig_stats(h, &mut s) }, AigStatus::Ok);
        assert_eq!(s, AigStats { pis: 4, pos: 1, nodes: 3, edges: 7, inverters: 0, depth: 3 });
        assert!(aig_last_error().is_null());
        unsafe { aig_free(h) };
    }

    #[test]
    fn errors_set_message() {
        let c = CString::new("INPUT(a)\nOUTPUT(y)\ny = FOO(a)\n").unwrap();
        let mut h = ptr::null_mut();
        assert_eq!(unsafe { aig_parse_bench(c.as_ptr(), &mut h) }, AigStatus::ParseError);
        assert!(h.is_null());
        let msg = unsafe { CStr::from_ptr(aig_last_error()) }.to_str().unwrap();
        assert!(msg.contains("FOO"), "{msg}");
        assert_eq!(unsafe { aig_parse_bench(ptr::null(), &mut h) }, AigStatus::NullPointer);
        assert_eq!(unsafe { aig_stats(ptr::null(), ptr::null_mut()) }, AigStatus::NullPointer);
        unsafe {
            aig_free(ptr::null_mut());
            aig_string_free(ptr::null_mut());
        }
    }

    #[test]
    fn recipe_and_equiv() {
        let h = parse(CHAIN);
        let mut lib = ptr::null_mut();
        let mut out = ptr::null_mut();
        unsafe {
            assert_eq!(aig_library_new(&mut lib), AigStatus::Ok);
            let r = CString::new("b; rw").unwrap();
            assert_eq!(aig_apply_recipe(h, lib, r.as_ptr(), &mut out), AigStatus::Ok);
            let mut s = AigStats::default();
            aig_stats(out, &mut s);
            assert_eq!(s.depth, 2);
            let mut eq = false;
            assert_eq!(aig_equiv(h, out, &mut eq), AigStatus::Ok);
            assert!(eq);
            let bad = CString::new("b; zz").unwrap();
            let mut none = ptr::null_mut();
            assert_eq!(aig_apply_recipe(h, lib, bad.as_ptr(), &mut none), AigStatus::RecipeError);
            aig_free(out);
            aig_library_free(lib);
            aig_free(h);
        }
    }

    #[test]
    fn writers_round_trip() {
        let h = parse(CHAIN);
        let mut text = ptr::null_mut();
        let mut xml = ptr::null_mut();
        unsafe {
            assert_eq!(aig_write_bench(h, &mut text), AigStatus::Ok);
            assert_eq!(aig_write_graphml(h, &mut xml), AigStatus::Ok);
            let back = parse(CStr::from_ptr(text).to_str().unwrap());
            let mut eq = false;
            aig_equiv(h, back, &mut eq);
            assert!(eq);
            assert!(CStr::from_ptr(xml).to_str().unwrap().contains("<graphml"));
            aig_string_free(text);
            aig_string_free(xml);
            aig_free(back);
            aig_free(h);
        }
    }
}
