//! C ABI for the beam library: opaque field handles, status codes, and a
//! small evaluation surface so other languages can bind without knowing any
//! Rust. The header `include/kgbeam.h` is generated by cbindgen at build time.
//!
//! Ownership: constructors return a heap-allocated handle through an out
//! pointer; `kgb_field_free` releases it. All evaluation entry points are
//! safe to call from multiple threads on the same handle.

use std::collections::BTreeMap;
use std::ffi::{c_char, CStr};
use std::ptr;

use kgbeam::coords::SpacetimePoint;
use kgbeam::verify::{kg_residual, FdSpec};
use kgbeam::Beam;

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KgbStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidParameter = 2,
    Utf8 = 3,
    EvalFailed = 4,
}

/// Opaque beam-field handle.
pub struct KgbField {
    beam: Beam,
}

/// Field descriptor consumed by `kgb_field_create`. Only the members the
/// chosen family uses are read; the rest are ignored. See `kgb_field_create`
/// for the family ids and their parameters.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct KgbBeamDesc {
    /// Radial index (lg).
    pub n: i32,
    /// Angular order (lg, bessel, bg; may be negative for bessel).
    pub l: i32,
    /// Hermite index in x (hg).
    pub mx: i32,
    /// Hermite index in y (hg).
    pub ny: i32,
    /// Derivative order (exp).
    pub k: i32,
    /// Longitudinal wavenumber (g_exp, exp).
    pub q: f64,
    /// Transverse momentum (g_b, bessel).
    pub p_perp: f64,
    /// Longitudinal momentum (g_b, bessel).
    pub p_z: f64,
    /// Displacement parameter (g_bg, bg).
    pub b: f64,
    /// Kernel angle parameter (g_b, g_bg).
    pub varphi: f64,
    /// Energy parameter E.
    pub energy: f64,
    /// Mass m.
    pub mass: f64,
    /// Waist w0.
    pub waist: f64,
}

impl Default for KgbBeamDesc {
    fn default() -> Self {
        KgbBeamDesc {
            n: 0,
            l: 0,
            mx: 0,
            ny: 0,
            k: 1,
            q: 1.0,
            p_perp: 1.0,
            p_z: 1.0,
            b: 1.0,
            varphi: 0.0,
            energy: 2.0,
            mass: 1.0,
            waist: 1.0,
        }
    }
}

/// A descriptor filled with the library defaults (E = 2, m = 1, w0 = 1, …).
#[no_mangle]
pub extern "C" fn kgb_beam_desc_default() -> KgbBeamDesc {
    KgbBeamDesc::default()
}

fn desc_to_params(family: &str, d: &KgbBeamDesc) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    let mut put = |k: &str, v: String| {
        m.insert(k.to_string(), v);
    };
    match family {
        "lg" => {
            put("n", d.n.to_string());
            put("l", d.l.to_string());
        }
        "hg" => {
            put("mx", d.mx.to_string());
            put("ny", d.ny.to_string());
        }
        "g_exp" => put("q", format!("{:?}", d.q)),
        "exp" => {
            put("k", d.k.to_string());
            put("q", format!("{:?}", d.q));
        }
        "g_b" | "bessel" => {
            put("p_perp", format!("{:?}", d.p_perp));
            put("p_z", format!("{:?}", d.p_z));
            put("l", d.l.to_string());
            put("varphi", format!("{:?}", d.varphi));
        }
        "g_bg" => {
            put("b", format!("{:?}", d.b));
            put("varphi", format!("{:?}", d.varphi));
        }
        "bg" => {
            put("b", format!("{:?}", d.b));
            put("l", d.l.to_string());
        }
        _ => {}
    }
    put("E", format!("{:?}", d.energy));
    put("m", format!("{:?}", d.mass));
    put("w0", format!("{:?}", d.waist));
    m
}

/// Create a field handle. `family` is one of: `g_lg`, `lg`, `g_hg`, `hg`,
/// `g_exp`, `exp`, `g_md`, `g_b`, `bessel`, `g_bg`, `bg`.
///
/// # Safety
/// `family` must be a valid NUL-terminated string; `desc` and `out` must be
/// valid pointers. On success `*out` owns the handle until `kgb_field_free`.
#[no_mangle]
pub unsafe extern "C" fn kgb_field_create(
    family: *const c_char,
    desc: *const KgbBeamDesc,
    out: *mut *mut KgbField,
) -> KgbStatus {
    if family.is_null() || desc.is_null() || out.is_null() {
        return KgbStatus::NullArgument;
    }
    unsafe { *out = ptr::null_mut() };
    let family = match unsafe { CStr::from_ptr(family) }.to_str() {
        Ok(s) => s,
        Err(_) => return KgbStatus::Utf8,
    };
    let params = desc_to_params(family, unsafe { &*desc });
    match Beam::from_params(family, &params) {
        Ok(beam) => {
            unsafe { *out = Box::into_raw(Box::new(KgbField { beam })) };
            KgbStatus::Ok
        }
        Err(_) => KgbStatus::InvalidParameter,
    }
}

/// Evaluate the field at one spacetime point.
///
/// # Safety
/// `field`, `out_re`, `out_im` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn kgb_field_eval(
    field: *const KgbField,
    t: f64,
    x: f64,
    y: f64,
    z: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> KgbStatus {
    if field.is_null() || out_re.is_null() || out_im.is_null() {
        return KgbStatus::NullArgument;
    }
    let field = unsafe { &*field };
    match field.beam.eval(SpacetimePoint::new(t, x, y, z)) {
        Ok(v) => {
            unsafe {
                *out_re = v.re;
                *out_im = v.im;
            }
            KgbStatus::Ok
        }
        Err(_) => KgbStatus::EvalFailed,
    }
}

/// Evaluate the field at `count` points given as interleaved `(t, x, y, z)`
/// quadruples; writes interleaved `(re, im)` pairs.
///
/// # Safety
/// `points` must hold `4·count` doubles and `out` must have room for
/// `2·count` doubles.
#[no_mangle]
pub unsafe extern "C" fn kgb_field_eval_many(
    field: *const KgbField,
    points: *const f64,
    count: usize,
    out: *mut f64,
) -> KgbStatus {
    if field.is_null() || (count > 0 && (points.is_null() || out.is_null())) {
        return KgbStatus::NullArgument;
    }
    let field = unsafe { &*field };
    let pts = unsafe { std::slice::from_raw_parts(points, 4 * count) };
    let dst = unsafe { std::slice::from_raw_parts_mut(out, 2 * count) };
    for i in 0..count {
        let p = SpacetimePoint::new(pts[4 * i], pts[4 * i + 1], pts[4 * i + 2], pts[4 * i + 3]);
        match field.beam.eval(p) {
            Ok(v) => {
                dst[2 * i] = v.re;
                dst[2 * i + 1] = v.im;
            }
            Err(_) => return KgbStatus::EvalFailed,
        }
    }
    KgbStatus::Ok
}

/// Relative wave-operator residual of the field at one point, using a
/// central finite-difference stencil of the given even order (2, 4, 6, 8)
/// and step.
///
/// # Safety
/// `field` and `out_relative` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn kgb_field_kg_residual(
    field: *const KgbField,
    t: f64,
    x: f64,
    y: f64,
    z: f64,
    fd_order: u32,
    fd_step: f64,
    out_relative: *mut f64,
) -> KgbStatus {
    if field.is_null() || out_relative.is_null() {
        return KgbStatus::NullArgument;
    }
    let field = unsafe { &*field };
    let fd = match FdSpec::new(fd_order as usize, fd_step) {
        Ok(fd) => fd,
        Err(_) => return KgbStatus::InvalidParameter,
    };
    match kg_residual(
        &field.beam,
        SpacetimePoint::new(t, x, y, z),
        field.beam.mass(),
        &fd,
    ) {
        Ok(r) => {
            unsafe { *out_relative = r.relative };
            KgbStatus::Ok
        }
        Err(_) => KgbStatus::EvalFailed,
    }
}

/// Release a field handle. Passing NULL is a no-op.
///
/// # Safety
/// `field` must be a pointer previously returned by `kgb_field_create` and
/// not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kgb_field_free(field: *mut KgbField) {
    if !field.is_null() {
        drop(unsafe { Box::from_raw(field) });
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn kgb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Human-readable description of a status code (static string).
#[no_mangle]
pub extern "C" fn kgb_status_message(status: KgbStatus) -> *const c_char {
    let s: &'static str = match status {
        KgbStatus::Ok => "ok\0",
        KgbStatus::NullArgument => "null argument\0",
        KgbStatus::InvalidParameter => "invalid parameter\0",
        KgbStatus::Utf8 => "family id is not valid UTF-8\0",
        KgbStatus::EvalFailed => "field evaluation failed\0",
    };
    s.as_ptr() as *const c_char
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    fn create(family: &str, desc: KgbBeamDesc) -> (KgbStatus, *mut KgbField) {
        let family = CString::new(family).unwrap();
        let mut handle: *mut KgbField = ptr::null_mut();
        let status = unsafe { kgb_field_create(family.as_ptr(), &desc, &mut handle) };
        (status, handle)
    }

    #[test]
    fn create_eval_free_roundtrip() {
        let (status, handle) = create("lg", KgbBeamDesc::default());
        assert_eq!(status, KgbStatus::Ok);
        assert!(!handle.is_null());

        let (mut re, mut im) = (0.0f64, 0.0f64);
        let status = unsafe { kgb_field_eval(handle, 0.0, 0.0, 0.0, 0.0, &mut re, &mut im) };
        assert_eq!(status, KgbStatus::Ok);
        // lg with n = l = 0 at the origin with defaults is exactly 1
        assert_eq!(re, 1.0);
        assert_eq!(im, 0.0);

        unsafe { kgb_field_free(handle) };
    }

    #[test]
    fn eval_many_matches_eval() {
        let (status, handle) = create("bg", {
            let mut d = KgbBeamDesc::default();
            d.b = 1.5;
            d.l = 2;
            d
        });
        assert_eq!(status, KgbStatus::Ok);

        let pts = [0.1, 1.0, 0.5, -0.3, 0.7, -0.4, 0.2, 1.1];
        let mut out = [0.0f64; 4];
        let status = unsafe { kgb_field_eval_many(handle, pts.as_ptr(), 2, out.as_mut_ptr()) };
        assert_eq!(status, KgbStatus::Ok);

        let (mut re, mut im) = (0.0f64, 0.0f64);
        unsafe { kgb_field_eval(handle, 0.1, 1.0, 0.5, -0.3, &mut re, &mut im) };
        assert_eq!(out[0], re);
        assert_eq!(out[1], im);

        unsafe { kgb_field_free(handle) };
    }

    #[test]
    fn residual_entry_point() {
        let (status, handle) = create("g_b", KgbBeamDesc::default());
        assert_eq!(status, KgbStatus::Ok);
        let mut rel = f64::NAN;
        let status = unsafe {
            kgb_field_kg_residual(handle, 0.2, 0.4, -0.1, 0.9, 8, 0.01, &mut rel)
        };
        assert_eq!(status, KgbStatus::Ok);
        assert!(rel < 1e-10, "plane-wave kernel residual {rel:.3e}");

        // bad stencil order is rejected
        let status = unsafe {
            kgb_field_kg_residual(handle, 0.2, 0.4, -0.1, 0.9, 3, 0.01, &mut rel)
        };
        assert_eq!(status, KgbStatus::InvalidParameter);
        unsafe { kgb_field_free(handle) };
    }

    #[test]
    fn error_paths() {
        let (status, handle) = create("warp_drive", KgbBeamDesc::default());
        assert_eq!(status, KgbStatus::InvalidParameter);
        assert!(handle.is_null());

        let mut d = KgbBeamDesc::default();
        d.mass = 0.0;
        let (status, _) = create("g_md", d);
        assert_eq!(status, KgbStatus::InvalidParameter);

        let mut out: *mut KgbField = ptr::null_mut();
        let status =
            unsafe { kgb_field_create(ptr::null(), &KgbBeamDesc::default(), &mut out) };
        assert_eq!(status, KgbStatus::NullArgument);

        unsafe { kgb_field_free(ptr::null_mut()) }; // must be a no-op
    }

    #[test]
    fn version_and_messages_are_nul_terminated() {
        let v = unsafe { CStr::from_ptr(kgb_version()) };
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
        let m = unsafe { CStr::from_ptr(kgb_status_message(KgbStatus::EvalFailed)) };
        assert!(!m.to_str().unwrap().is_empty());
    }
}
