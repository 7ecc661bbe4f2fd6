use std::ffi::{c_char, CStr, CString};
use std::ptr;

use frlim_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    frlim_string_free(s);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(frlim_last_error()).to_str().unwrap().to_string()
}

#[test]
fn limits_round_trip() {
    unsafe {
        let mut code = ptr::null_mut();
        assert_eq!(frlim_code_parse(cstr("rr + fff").as_ptr(), &mut code), FrlimStatus::Ok);
        let mut text = ptr::null_mut();
        assert_eq!(frlim_code_render(code, &mut text), FrlimStatus::Ok);
        assert_eq!(take(text), "rr+fff");
        assert_eq!(frlim_code_faithful_depth(code), 2);

        let mut group = ptr::null_mut();
        assert_eq!(frlim_group_open(cstr("z2").as_ptr(), 0, &mut group), FrlimStatus::Ok);
        assert_eq!((frlim_group_order(group), frlim_group_rank(group)), (2, 1));

        let mut opts = frlim_options_default();
        opts.top_degree = 3;
        opts.checks = true;
        let mut report = ptr::null_mut();
        assert_eq!(frlim_limits(code, group, &opts, &mut report), FrlimStatus::Ok);
        assert_eq!(frlim_report_top_degree(report), 3);
        assert_eq!(frlim_report_truncation(report), 2);

        let mut s = ptr::null_mut();
        assert_eq!(frlim_report_lim(report, 1, &mut s), FrlimStatus::Ok);
        assert_eq!(take(s), "Z/2");
        let mut rank = 99;
        assert_eq!(frlim_report_lim_rank(report, 2, &mut rank), FrlimStatus::Ok);
        assert_eq!(rank, 0);
        let mut factors = [0u64; 4];
        let mut count = 0;
        assert_eq!(frlim_report_lim_torsion(report, 2, factors.as_mut_ptr(), 4, &mut count), FrlimStatus::Ok);
        assert_eq!((count, factors[0]), (1, 2));
        assert_eq!(frlim_report_lim_torsion(report, 2, ptr::null_mut(), 0, &mut count), FrlimStatus::Ok);
        assert_eq!(count, 1);

        let mut json = ptr::null_mut();
        assert_eq!(frlim_report_json(report, &mut json), FrlimStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(v["lims"][2]["group"], "Z/2");

        assert_eq!(frlim_report_lim(report, 7, &mut s), FrlimStatus::OutOfRange);
        frlim_report_free(report);
        frlim_group_free(group);
        frlim_code_free(code);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut code = ptr::null_mut();
        assert_eq!(frlim_code_parse(cstr("rq").as_ptr(), &mut code), FrlimStatus::Syntax);
        assert!(code.is_null());
        assert!(last_error().contains("byte 1"));
        assert_eq!(frlim_code_parse(ptr::null(), &mut code), FrlimStatus::NullArgument);
        assert_eq!(frlim_code_parse(cstr("r").as_ptr(), ptr::null_mut()), FrlimStatus::NullArgument);
        let bad = [0xffu8, 0];
        assert_eq!(frlim_code_parse(bad.as_ptr().cast(), &mut code), FrlimStatus::InvalidUtf8);

        let mut group = ptr::null_mut();
        assert_eq!(frlim_group_from_json(cstr("{oops").as_ptr(), 0, &mut group), FrlimStatus::InvalidGroup);
        assert_eq!(frlim_group_open(cstr("nonesuch").as_ptr(), 0, &mut group), FrlimStatus::InvalidGroup);
        assert_eq!(frlim_group_open(cstr("s3").as_ptr(), 5, &mut group), FrlimStatus::CapExceeded);

        assert_eq!(frlim_code_parse(cstr("rrr").as_ptr(), &mut code), FrlimStatus::Ok);
        assert_eq!(frlim_group_open(cstr("s3").as_ptr(), 0, &mut group), FrlimStatus::Ok);
        let mut opts = frlim_options_default();
        opts.cap_rank = 40;
        let mut report = ptr::null_mut();
        assert_eq!(frlim_limits(code, group, &opts, &mut report), FrlimStatus::CapExceeded);
        opts.cap_rank = 0;
        assert_eq!(frlim_limits(code, group, &opts, &mut report), FrlimStatus::Precondition);
        assert_eq!(frlim_limits(ptr::null(), group, ptr::null(), &mut report), FrlimStatus::NullArgument);
        assert!(report.is_null());
        assert_eq!(frlim_group_order(ptr::null()), 0);
        frlim_report_free(ptr::null_mut());
        frlim_group_free(group);
        frlim_code_free(code);
        frlim_string_free(ptr::null_mut());
    }
}

#[test]
fn group_from_json_text() {
    unsafe {
        let spec = cstr(r#"{"name":"Z3","generators":["x"],"images":[[2,3,1]],"order":3,"relators":["x^3"]}"#);
        let mut group = ptr::null_mut();
        assert_eq!(frlim_group_from_json(spec.as_ptr(), 0, &mut group), FrlimStatus::Ok);
        assert_eq!(frlim_group_order(group), 3);
        let mut code = ptr::null_mut();
        assert_eq!(frlim_code_parse(cstr("r").as_ptr(), &mut code), FrlimStatus::Ok);
        let mut report = ptr::null_mut();
        assert_eq!(frlim_limits(code, group, ptr::null(), &mut report), FrlimStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(frlim_report_lim(report, 1, &mut s), FrlimStatus::Ok);
        assert_eq!(take(s), "Z^2");
        frlim_report_free(report);
        frlim_code_free(code);
        frlim_group_free(group);
        assert!(!CStr::from_ptr(frlim_version()).to_bytes().is_empty());
    }
}

/// The generated header compiles as C and as C++.
#[test]
fn header_compiles() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include/frlim.h");
    assert!(header.exists());
    let tmp = tempfile::tempdir().unwrap();
    let src = tmp.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"frlim.h\"\nint main(void) {\n  FrlimCode *c = 0;\n  FrlimOptions o = frlim_options_default();\n  (void)o;\n  return frlim_code_parse(\"r\", &c) == FRLIM_STATUS_OK ? 0 : 1;\n}\n",
    )
    .unwrap();
    for (compiler, extra) in [("cc", vec!["-std=c99"]), ("c++", vec!["-x", "c++"])] {
        let status = std::process::Command::new(compiler)
            .args(extra)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-I"])
            .arg(dir.join("include"))
            .arg(&src)
            .status();
        match status {
            Ok(s) => assert!(s.success(), "{compiler} rejected the header"),
            Err(_) => eprintln!("{compiler} not available; skipping"),
        }
    }
}
