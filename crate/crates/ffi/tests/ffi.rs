use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use o2deg_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(o2deg_last_error()) }.to_string_lossy().into_owned()
}

unsafe fn render(a: *const O2degElement) -> String {
    let mut s = ptr::null_mut();
    assert_eq!(o2deg_element_to_string(a, &mut s), O2degStatus::Ok);
    let out = CStr::from_ptr(s).to_string_lossy().into_owned();
    o2deg_string_free(s);
    out
}

#[test]
fn basic_degree_squares_to_unit() {
    unsafe {
        let mut e = ptr::null_mut();
        assert_eq!(o2deg_engine_new(O2degGroupKind::Dihedral, 8, 0, 1, &mut e), O2degStatus::Ok);
        let mut level = 0;
        assert_eq!(o2deg_engine_level(e, &mut level), O2degStatus::Ok);
        assert_eq!(level, 32);
        let mut count = 0;
        assert_eq!(o2deg_engine_irrep_count(e, &mut count), O2degStatus::Ok);
        assert_eq!(count, 7);
        let (mut d, mut sq, mut unit) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
        assert_eq!(o2deg_basic_degree(e, 0, 4, &mut d), O2degStatus::Ok);
        assert_eq!(render(d), "(G) - (O(2) × D2d) - (O(2) × D2td) + (O(2) × Z2m)");
        let mut len = 0;
        assert_eq!(o2deg_element_len(d, &mut len), O2degStatus::Ok);
        assert_eq!(len, 4);
        assert_eq!(o2deg_element_multiply(e, d, d, &mut sq), O2degStatus::Ok);
        assert_eq!(o2deg_element_unit(e, &mut unit), O2degStatus::Ok);
        let mut eq = false;
        assert_eq!(o2deg_element_equal(sq, unit, &mut eq), O2degStatus::Ok);
        assert!(eq);
        for p in [d, sq, unit] {
            o2deg_element_free(p);
        }
        o2deg_engine_free(e);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut e = ptr::null_mut();
        assert_eq!(o2deg_engine_new(O2degGroupKind::Dihedral, 0, 0, 1, &mut e), O2degStatus::InvalidArgument);
        assert!(!last_error().is_empty());
        assert_eq!(o2deg_engine_new(O2degGroupKind::Dihedral, 2, 0, 0, ptr::null_mut()), O2degStatus::NullPointer);
        assert_eq!(o2deg_engine_new(O2degGroupKind::Dihedral, 2, 0, 0, &mut e), O2degStatus::Ok);
        assert!(last_error().is_empty());
        let mut d = ptr::null_mut();
        assert_eq!(o2deg_basic_degree(e, 0, 50, &mut d), O2degStatus::InvalidArgument);
        assert!(last_error().contains("out of range"));
        o2deg_engine_free(e);
        o2deg_engine_free(ptr::null_mut());
        o2deg_element_free(ptr::null_mut());
        o2deg_string_free(ptr::null_mut());
        let bad = CString::new("{\"schema\": 1}").unwrap();
        let (mut rep, mut outcome) = (ptr::null_mut(), O2degOutcome::NoCertificates);
        assert_eq!(o2deg_analyze_json(bad.as_ptr(), false, &mut rep, &mut outcome), O2degStatus::Config);
        assert!(rep.is_null());
    }
}

#[test]
fn analyze_paper_config() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/configs/d8_flower.json")).unwrap();
    let cfg = CString::new(text).unwrap();
    unsafe {
        let (mut rep, mut outcome) = (ptr::null_mut(), O2degOutcome::Certificates);
        assert_eq!(o2deg_analyze_json(cfg.as_ptr(), false, &mut rep, &mut outcome), O2degStatus::Ok);
        assert_eq!(outcome, O2degOutcome::HypothesesFailed);
        let json: serde_json::Value = serde_json::from_str(CStr::from_ptr(rep).to_str().unwrap()).unwrap();
        assert!(json["degrees"].is_null());
        o2deg_string_free(rep);
        assert_eq!(o2deg_analyze_json(cfg.as_ptr(), true, &mut rep, &mut outcome), O2degStatus::Ok);
        assert_eq!(outcome, O2degOutcome::Certificates);
        let json: serde_json::Value = serde_json::from_str(CStr::from_ptr(rep).to_str().unwrap()).unwrap();
        assert_eq!(json["certificates"].as_array().unwrap().len(), 3);
        assert_eq!(json["watermark"], "hypotheses unverified");
        o2deg_string_free(rep);
    }
}

#[test]
fn domain_handle() {
    let spec = CString::new(
        r#"{"eta": {"terms": [{"c": 2, "p": 4, "q": 0, "phase": "cos"}, {"c": -1, "p": 4, "q": 8, "phase": "cos"}, {"c": -1, "p": 0, "q": 0, "phase": "cos"}]}, "symmetry": 8, "radius": 1}"#,
    )
    .unwrap();
    unsafe {
        let mut d = ptr::null_mut();
        assert_eq!(o2deg_domain_from_json(spec.as_ptr(), &mut d), O2degStatus::Ok);
        let mut v = 0.0;
        assert_eq!(o2deg_domain_boundary_radius(d, 0.0, &mut v), O2degStatus::Ok);
        assert!((v - 1.0).abs() < 1e-12);
        assert_eq!(o2deg_domain_curvature(d, 0.0, &mut v), O2degStatus::Ok);
        assert!((v - 17.0).abs() < 1e-9);
        assert_eq!(o2deg_domain_grad_norm(d, 0.0, &mut v), O2degStatus::Ok);
        assert!((v - 4.0).abs() < 1e-9);
        o2deg_domain_free(d);
        let outside = CString::new(r#"{"eta": {"terms": [{"c": 1, "p": 0, "q": 0, "phase": "cos"}]}, "symmetry": 8, "radius": 1}"#).unwrap();
        assert_eq!(o2deg_domain_from_json(outside.as_ptr(), &mut d), O2degStatus::Config);
        assert!(last_error().contains("eta4"));
    }
}

#[test]
fn header_lists_every_export() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/o2deg.h")).unwrap();
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let exports: Vec<&str> = src.lines().filter_map(|l| l.split("extern \"C\" fn ").nth(1)).map(|l| l.split('(').next().unwrap()).collect();
    assert!(exports.len() >= 15);
    for f in exports {
        assert!(h.contains(&format!("{f}(")), "{f} missing from header");
    }
}

/// Compiles and runs a C program against the generated header and the
/// static library.
#[test]
fn c_program_links() {
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|p| p.parent()).unwrap();
    let lib = profile_dir.join("libo2deg_ffi.a");
    assert!(lib.exists(), "static library not built at {}", lib.display());
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let out = std::env::temp_dir().join(format!("o2deg_smoke_{}", std::process::id()));
    let status = Command::new("cc")
        .arg(dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .expect("C compiler");
    assert!(status.success());
    let run = Command::new(&out).output().unwrap();
    let _ = std::fs::remove_file(&out);
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(run.status.success(), "{stdout}\n{}", String::from_utf8_lossy(&run.stderr));
    assert!(stdout.contains("level=32 square_is_unit=1"), "{stdout}");
    assert!(stdout.contains("error=irrep index 99 out of range"), "{stdout}");
}
