use std::ffi::CStr;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use mre_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(mre_last_error_message()) }.to_string_lossy().into_owned()
}

fn quick() -> MreOptimizerConfig {
    MreOptimizerConfig {
        restarts: 4,
        max_iterations: 300,
        ..mre_optimizer_config_default()
    }
}

struct Handle(*mut MreState);

impl Drop for Handle {
    fn drop(&mut self) {
        unsafe { mre_state_free(self.0) }
    }
}

fn werner(f: f64) -> Handle {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { mre_state_werner(f, &mut s) }, MreStatus::Ok);
    Handle(s)
}

#[test]
fn pure_state_measures() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let re = [h, 0.0, 0.0, h];
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { mre_state_from_pure(re.as_ptr(), ptr::null(), &mut s) }, MreStatus::Ok);
    let s = Handle(s);
    let (mut c, mut ef, mut ent, mut ppt) = (0.0, 0.0, 1.0, true);
    unsafe {
        assert_eq!(mre_concurrence(s.0, &mut c), MreStatus::Ok);
        assert_eq!(mre_ef_wootters(s.0, &mut ef), MreStatus::Ok);
        assert_eq!(mre_von_neumann_entropy(s.0, &mut ent), MreStatus::Ok);
        assert_eq!(mre_ppt_separable(s.0, &mut ppt), MreStatus::Ok);
    }
    assert!((c - 1.0).abs() < 1e-12 && (ef - 1.0).abs() < 1e-12);
    assert!(ent.abs() < 1e-12);
    assert!(!ppt);
    assert_eq!(last_error(), "");
}

#[test]
fn matrix_round_trip() {
    let mut re = [0.0; 16];
    re[0] = 0.5;
    re[15] = 0.5;
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { mre_state_from_matrix(re.as_ptr(), ptr::null(), &mut s) }, MreStatus::Ok);
    let s = Handle(s);
    let (mut out_re, mut out_im) = ([1.0; 16], [1.0; 16]);
    assert_eq!(unsafe { mre_state_matrix(s.0, out_re.as_mut_ptr(), out_im.as_mut_ptr()) }, MreStatus::Ok);
    assert_eq!(out_re, re);
    assert_eq!(out_im, [0.0; 16]);

    let mut res = std::mem::MaybeUninit::<MreOptResult>::uninit();
    assert_eq!(unsafe { mre_optimize(s.0, &quick(), res.as_mut_ptr()) }, MreStatus::Ok);
    let res = unsafe { res.assume_init() };
    assert!(res.best_value < 1e-9);
    let total: f64 = res.weights[..res.ensemble_size as usize].iter().sum();
    assert!((total - 1.0).abs() < 1e-9);
}

#[test]
fn errors_are_reported() {
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(mre_state_werner(1.5, &mut s), MreStatus::InvalidArgument);
        assert!(s.is_null());
        assert!(last_error().contains("F"), "{}", last_error());

        let b = [0.5, 0.5, 0.5, 0.5];
        let c = [0.0; 4];
        assert_eq!(mre_state_ext_werner(b.as_ptr(), c.as_ptr(), &mut s), MreStatus::InvalidArgument);

        let re = [1.0, 1.0, 0.0, 0.0];
        assert_eq!(mre_state_from_pure(re.as_ptr(), ptr::null(), &mut s), MreStatus::InvalidState);

        assert_eq!(mre_state_from_matrix(ptr::null(), ptr::null(), &mut s), MreStatus::NullPointer);
        let mut v = 0.0;
        assert_eq!(mre_ef_wootters(ptr::null(), &mut v), MreStatus::NullPointer);
        let w = werner(0.5);
        assert_eq!(mre_ef_wootters(w.0, ptr::null_mut()), MreStatus::NullPointer);

        let bad = MreOptimizerConfig { restarts: 0, ..quick() };
        let mut res = std::mem::MaybeUninit::<MreOptResult>::uninit();
        assert_eq!(mre_optimize(w.0, &bad, res.as_mut_ptr()), MreStatus::InvalidArgument);
        assert!(last_error().contains("restarts"));

        mre_state_free(ptr::null_mut());
    }
}

#[test]
fn werner_values() {
    let mut v = 0.0;
    unsafe {
        assert_eq!(mre_werner_mre(0.25, &mut v), MreStatus::Ok);
        assert_eq!(v, 0.0);
        assert_eq!(mre_werner_mre(1.0, &mut v), MreStatus::Ok);
        assert!((v - 1.0).abs() < 1e-12);
    }
    let w = werner(0.4);
    let mut bound = f64::NAN;
    assert_eq!(unsafe { mre_re_upper_bound(w.0, &quick(), &mut bound) }, MreStatus::Ok);
    assert!((0.0..=1e-3).contains(&bound), "{bound}");
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn header_compiles_and_links_from_c() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler");
        return;
    }
    let lib = target_dir().join("libmre_ffi.a");
    if !lib.exists() {
        eprintln!("skipping: {} not built", lib.display());
        return;
    }
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let out = Path::new(env!("CARGO_TARGET_TMPDIR")).join("mre_ffi_smoke");
    let status = Command::new(&cc)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let run = Command::new(&out).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
}
