use flatcheck_ffi::*;
use std::ffi::{CStr, CString};
use std::ptr;

fn last_error() -> String {
    unsafe { CStr::from_ptr(flatcheck_last_error_message()) }.to_string_lossy().into_owned()
}

fn take(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_string_lossy().into_owned();
    unsafe { flatcheck_string_free(s) };
    out
}

fn q(num: i64, den: i64) -> FlatcheckRational {
    FlatcheckRational { num, den }
}

#[test]
fn builtin_chart_report() {
    let name = CString::new("heisenberg3").unwrap();
    let mut chart = ptr::null_mut();
    assert_eq!(unsafe { flatcheck_chart_builtin(name.as_ptr(), &mut chart) }, FlatcheckStatus::Ok);
    assert_eq!(unsafe { flatcheck_chart_dim(chart) }, 3);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { flatcheck_report_json(chart, ptr::null(), &mut json) }, FlatcheckStatus::Ok);
    let text = take(json);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["locally_homogeneous"], true);
    assert_eq!(v["backend"], "exact");
    unsafe { flatcheck_chart_free(chart) };
}

#[test]
fn chart_errors_are_reported() {
    let name = CString::new("nope").unwrap();
    let mut chart = ptr::null_mut();
    assert_eq!(unsafe { flatcheck_chart_builtin(name.as_ptr(), &mut chart) }, FlatcheckStatus::InvalidInput);
    assert!(last_error().contains("available"));
    assert!(chart.is_null());
    assert_eq!(unsafe { flatcheck_chart_builtin(ptr::null(), &mut chart) }, FlatcheckStatus::NullArgument);

    let singular = CString::new(r#"{"name":"s","n":2,"domain":[[-1,1],[-1,1]],"frame":[["x1","0"],["0","1"]]}"#).unwrap();
    assert_eq!(unsafe { flatcheck_chart_from_json(singular.as_ptr(), &mut chart) }, FlatcheckStatus::Ok);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { flatcheck_report_json(chart, ptr::null(), &mut json) }, FlatcheckStatus::InvalidInput);
    assert!(last_error().contains("singular"), "{}", last_error());
    unsafe { flatcheck_chart_free(chart) };
}

#[test]
fn report_options_select_numeric_backend() {
    let doc = CString::new(r#"{"builtin":"deformed2"}"#).unwrap();
    let mut chart = ptr::null_mut();
    assert_eq!(unsafe { flatcheck_chart_from_json(doc.as_ptr(), &mut chart) }, FlatcheckStatus::Ok);
    let opts = FlatcheckReportOptions { tol: 1e-6, tol2: 1e-4, grid: 3, fd_step: 1e-4, fd_step2: 1e-3, backend: 2 };
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { flatcheck_report_json(chart, &opts, &mut json) }, FlatcheckStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
    assert_eq!(v["backend"], "numeric");
    assert_eq!(v["locally_homogeneous"], false);
    let bad = FlatcheckReportOptions { grid: 1, ..opts };
    assert_eq!(unsafe { flatcheck_report_json(chart, &bad, &mut json) }, FlatcheckStatus::InvalidInput);
    unsafe { flatcheck_chart_free(chart) };
}

#[test]
fn g3_group_law() {
    let a = FlatcheckG3 { a1: q(2, 1), a2: q(1, 1), a3: q(0, 1) };
    let b = FlatcheckG3 { a1: q(1, 2), a2: q(-1, 3), a3: q(1, 1) };
    let mut ab = FlatcheckG3 { a1: q(0, 1), a2: q(0, 1), a3: q(0, 1) };
    assert_eq!(unsafe { flatcheck_g3_compose(&a, &b, &mut ab) }, FlatcheckStatus::Ok);
    // a1 = 1, a2 = 2(-1/3) + 1(1/4) = -5/12, a3 = 2 + 3·1·(1/2)(-1/3) + 0 = 3/2
    assert_eq!(ab.a1, q(1, 1));
    assert_eq!(ab.a2, q(-5, 12));
    assert_eq!(ab.a3, q(3, 2));
    let mut inv = ab;
    assert_eq!(unsafe { flatcheck_g3_invert(&a, &mut inv) }, FlatcheckStatus::Ok);
    let mut e = ab;
    assert_eq!(unsafe { flatcheck_g3_compose(&inv, &a, &mut e) }, FlatcheckStatus::Ok);
    assert_eq!(e, FlatcheckG3 { a1: q(1, 1), a2: q(0, 1), a3: q(0, 1) });

    // f(z) = z/(1 - z): 1, 2, 6
    let mobius = FlatcheckG3 { a1: q(1, 1), a2: q(2, 1), a3: q(6, 1) };
    let mut s = q(7, 1);
    assert_eq!(unsafe { flatcheck_g3_schwarzian(&mobius, &mut s) }, FlatcheckStatus::Ok);
    assert_eq!(s, q(0, 1));
    let singular = FlatcheckG3 { a1: q(0, 1), ..mobius };
    assert_eq!(unsafe { flatcheck_g3_schwarzian(&singular, &mut s) }, FlatcheckStatus::NotInvertible);
    let zero_den = FlatcheckG3 { a2: q(1, 0), ..mobius };
    assert_eq!(unsafe { flatcheck_g3_schwarzian(&zero_den, &mut s) }, FlatcheckStatus::InvalidInput);
}

#[test]
fn jets_through_json() {
    let f = CString::new(r#"{"n":1,"k":2,"components":[[{"multiindex":[1],"num":"1","den":"1"},{"multiindex":[2],"num":"1","den":"1"}]]}"#).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { flatcheck_jet_invert_json(f.as_ptr(), &mut out) }, FlatcheckStatus::Ok);
    let inv = CString::new(take(out)).unwrap();
    assert_eq!(unsafe { flatcheck_jet_compose_json(f.as_ptr(), inv.as_ptr(), &mut out) }, FlatcheckStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["components"][0], serde_json::json!([{"multiindex": [1], "num": "1", "den": "1"}]));
    let broken = CString::new("{").unwrap();
    assert_eq!(unsafe { flatcheck_jet_invert_json(broken.as_ptr(), &mut out) }, FlatcheckStatus::InvalidInput);
    assert!(last_error().contains("line"));
}

#[test]
fn lie_pair_orders() {
    let mut k = 0i64;
    let name = CString::new("sl2/borel").unwrap();
    assert_eq!(unsafe { flatcheck_liepair_builtin_order(name.as_ptr(), &mut k) }, FlatcheckStatus::Ok);
    assert_eq!(k, 2);
    let heis = CString::new(r#"{"dim":3,"brackets":[{"i":0,"j":1,"coeffs":["0","0","1"]}],"subalgebra":[["0","0","1"]]}"#).unwrap();
    assert_eq!(unsafe { flatcheck_liepair_order_json(heis.as_ptr(), &mut k) }, FlatcheckStatus::Ok);
    assert_eq!(k, -1);
    assert!(last_error().is_empty());
}

#[test]
fn header_is_generated_and_compiles() {
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/flatcheck.h");
    let text = std::fs::read_to_string(&header).expect("header written by the build script");
    for symbol in ["flatcheck_chart_builtin", "flatcheck_report_json", "FlatcheckG3", "FLATCHECK_STATUS_OK", "flatcheck_last_error_message"] {
        assert!(text.contains(symbol), "{symbol} missing from header");
    }
    let Ok(status) = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"])
        .arg(&header)
        .status()
    else {
        return;
    };
    assert!(status.success(), "header does not compile as C");
}

#[test]
fn c_program_links_against_staticlib() {
    let Ok(exe) = std::env::current_exe() else { return };
    // target/<profile>/deps/abi-… → target/<profile>
    let Some(profile_dir) = exe.parent().and_then(|d| d.parent()) else { return };
    let lib = profile_dir.join("libflatcheck_ffi.a");
    if !lib.exists() {
        // test builds only produce the rlib; build the static archive with the same profile
        let cargo = std::env::var("CARGO").unwrap_or_else(|_| "cargo".into());
        let _ = std::process::Command::new(cargo)
            .args(["build", "-q", "-p", "flatcheck-ffi", "--lib", "--profile", "test"])
            .current_dir(env!("CARGO_MANIFEST_DIR"))
            .status();
    }
    if !lib.exists() {
        eprintln!("skipping: {} not built", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("smoke");
    let manifest = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let Ok(status) = std::process::Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
    else {
        eprintln!("skipping: no C compiler");
        return;
    };
    assert!(status.success(), "C smoke program failed to build");
    let out = std::process::Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
