use std::ffi::{c_int, c_void, CStr};
use std::process::Command;
use std::ptr;

use ssarc_ffi::*;

fn last_error() -> String {
    let p = ssarc_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn builtin_problem_solves() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(ssarc_problem_builtin(c"HS28".as_ptr(), &mut p), SsarcCode::Ok);
        assert_eq!((ssarc_problem_n(p), ssarc_problem_m(p)), (3, 1));
        let mut r = ptr::null_mut();
        assert_eq!(ssarc_solve(p, ptr::null(), &mut r), SsarcCode::Ok);
        assert_eq!(ssarc_report_status(r), SsarcStatus::Converged);
        assert!(ssarc_report_res(r) <= 1e-8);
        assert_eq!(ssarc_report_nig(r), ssarc_report_nit(r) + 1);
        assert!(ssarc_report_nif(r) > ssarc_report_nit(r));
        let mut x = [0.0; 3];
        assert_eq!(ssarc_report_x(r, x.as_mut_ptr(), 3), SsarcCode::Ok);
        let expected = [0.5, -0.5, 0.5];
        assert!(x.iter().zip(expected).all(|(a, b)| (a - b).abs() < 1e-5), "{x:?}");
        assert_eq!(ssarc_report_x(r, x.as_mut_ptr(), 2), SsarcCode::BufferTooSmall);
        ssarc_report_free(r);
        ssarc_problem_free(p);
    }
}

#[test]
fn config_round_trip_and_validation() {
    unsafe {
        let c = ssarc_config_new();
        let mut v = 0.0;
        assert_eq!(ssarc_config_get(c, c"beta0".as_ptr(), &mut v), SsarcCode::Ok);
        assert_eq!(v, 1.0);
        assert_eq!(ssarc_config_set(c, c"max_outer".as_ptr(), 1.0), SsarcCode::Ok);
        assert_eq!(ssarc_config_get(c, c"max_outer".as_ptr(), &mut v), SsarcCode::Ok);
        assert_eq!(v, 1.0);
        assert_eq!(ssarc_config_set(c, c"reorthogonalize".as_ptr(), 1.0), SsarcCode::Ok);
        assert_eq!(ssarc_config_set(c, c"max_inner".as_ptr(), 40.0), SsarcCode::Ok);

        assert_eq!(ssarc_config_set(c, c"gamma1".as_ptr(), 2.0), SsarcCode::InvalidArgument);
        assert!(last_error().contains("gamma1"));
        assert_eq!(ssarc_config_set(c, c"nonsense".as_ptr(), 2.0), SsarcCode::InvalidArgument);
        assert_eq!(ssarc_config_set(ptr::null_mut(), c"beta0".as_ptr(), 2.0), SsarcCode::NullPointer);

        let mut p = ptr::null_mut();
        assert_eq!(ssarc_problem_builtin(c"hs6".as_ptr(), &mut p), SsarcCode::Ok);
        let mut r = ptr::null_mut();
        assert_eq!(ssarc_solve(p, c, &mut r), SsarcCode::Ok);
        assert_eq!(ssarc_report_status(r), SsarcStatus::IterationCap);
        assert_eq!(ssarc_report_nit(r), 1);
        ssarc_report_free(r);
        ssarc_problem_free(p);
        ssarc_config_free(c);
    }
}

#[test]
fn unknown_problem_reports_error() {
    unsafe {
        let mut p = ptr::dangling_mut::<SsarcProblem>();
        assert_eq!(ssarc_problem_builtin(c"NOSUCH".as_ptr(), &mut p), SsarcCode::UnknownProblem);
        assert!(p.is_null());
        assert!(last_error().contains("NOSUCH"));
        assert_eq!(ssarc_problem_builtin(ptr::null(), &mut p), SsarcCode::NullPointer);
    }
}

// min x1² + x2² subject to x1 + x2 = 2, scaled by the user value.
unsafe extern "C" fn objective(user: *mut c_void, x: *const f64, out: *mut f64) -> c_int {
    let w = *(user as *const f64);
    let x = std::slice::from_raw_parts(x, 2);
    *out = w * (x[0] * x[0] + x[1] * x[1]);
    0
}

unsafe extern "C" fn gradient(user: *mut c_void, x: *const f64, out: *mut f64) -> c_int {
    let w = *(user as *const f64);
    let x = std::slice::from_raw_parts(x, 2);
    let out = std::slice::from_raw_parts_mut(out, 2);
    out[0] = 2.0 * w * x[0];
    out[1] = 2.0 * w * x[1];
    0
}

unsafe extern "C" fn constraints(_: *mut c_void, x: *const f64, out: *mut f64) -> c_int {
    let x = std::slice::from_raw_parts(x, 2);
    *out = x[0] + x[1] - 2.0;
    0
}

unsafe extern "C" fn jacobian(_: *mut c_void, _: *const f64, out: *mut f64) -> c_int {
    let out = std::slice::from_raw_parts_mut(out, 2);
    out.fill(1.0);
    0
}

unsafe extern "C" fn hessian(user: *mut c_void, _: *const f64, _: *const f64, out: *mut f64) -> c_int {
    let w = *(user as *const f64);
    let out = std::slice::from_raw_parts_mut(out, 4);
    out.copy_from_slice(&[2.0 * w, 0.0, 0.0, 2.0 * w]);
    0
}

unsafe extern "C" fn failing(_: *mut c_void, _: *const f64, _: *mut f64) -> c_int {
    1
}

fn callbacks() -> SsarcCallbacks {
    SsarcCallbacks {
        objective: Some(objective),
        gradient: Some(gradient),
        constraints: Some(constraints),
        jacobian: Some(jacobian),
        lagrangian_hessian: Some(hessian),
    }
}

#[test]
fn callback_problem_solves() {
    let mut weight = 3.0f64;
    let user = &mut weight as *mut f64 as *mut c_void;
    let x0 = [5.0, -1.0];
    unsafe {
        let mut p = ptr::null_mut();
        let cb = callbacks();
        assert_eq!(ssarc_problem_new(c"pair".as_ptr(), 2, 1, x0.as_ptr(), &cb, user, &mut p), SsarcCode::Ok);
        let mut r = ptr::null_mut();
        assert_eq!(ssarc_solve(p, ptr::null(), &mut r), SsarcCode::Ok);
        assert_eq!(ssarc_report_status(r), SsarcStatus::Converged);
        let mut x = [0.0; 2];
        assert_eq!(ssarc_report_x(r, x.as_mut_ptr(), 2), SsarcCode::Ok);
        assert!((x[0] - 1.0).abs() < 1e-8 && (x[1] - 1.0).abs() < 1e-8, "{x:?}");
        ssarc_report_free(r);
        ssarc_problem_free(p);
    }
}

#[test]
fn failing_callback_is_an_evaluation_error() {
    let mut weight = 1.0f64;
    let user = &mut weight as *mut f64 as *mut c_void;
    let x0 = [5.0, -1.0];
    unsafe {
        let mut cb = callbacks();
        cb.objective = Some(failing);
        let mut p = ptr::null_mut();
        assert_eq!(ssarc_problem_new(c"bad".as_ptr(), 2, 1, x0.as_ptr(), &cb, user, &mut p), SsarcCode::Ok);
        let mut r = ptr::null_mut();
        assert_eq!(ssarc_solve(p, ptr::null(), &mut r), SsarcCode::Ok);
        assert_eq!(ssarc_report_status(r), SsarcStatus::EvaluationError);
        ssarc_report_free(r);
        ssarc_problem_free(p);
    }
}

#[test]
fn callback_problem_rejects_bad_shapes() {
    let x0 = [0.0; 2];
    unsafe {
        let mut p = ptr::null_mut();
        let cb = callbacks();
        let code = ssarc_problem_new(c"wide".as_ptr(), 2, 3, x0.as_ptr(), &cb, ptr::null_mut(), &mut p);
        assert_eq!(code, SsarcCode::InvalidArgument);
        let mut cb = callbacks();
        cb.jacobian = None;
        let code = ssarc_problem_new(c"nojac".as_ptr(), 2, 1, x0.as_ptr(), &cb, ptr::null_mut(), &mut p);
        assert_eq!(code, SsarcCode::NullPointer);
        assert!(p.is_null());
    }
}

#[test]
fn header_compiles_as_c_and_cpp() {
    let include = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include <ssarc.h>\n\
         int main(void) {\n\
           SsarcConfig *c = ssarc_config_new();\n\
           SsarcCode code = ssarc_config_set(c, \"beta0\", 2.0);\n\
           ssarc_config_free(c);\n\
           return code == SSARC_CODE_OK ? 0 : 1;\n\
         }\n",
    )
    .unwrap();
    for (compiler, lang) in [("cc", "c"), ("c++", "c++")] {
        let out = Command::new(compiler)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang, "-I", include])
            .arg(&src)
            .output()
            .expect("a C compiler is available");
        assert!(out.status.success(), "{compiler}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn version_is_set() {
    let v = unsafe { CStr::from_ptr(ssarc_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
