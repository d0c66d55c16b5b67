use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use lgsim_ffi::*;

fn rtn() -> *mut LgChannel {
    let mut ch = ptr::null_mut();
    assert_eq!(unsafe { lg_channel_rtn(0.05, 0.001, &mut ch) }, LgStatus::Ok);
    assert!(!ch.is_null());
    ch
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(lg_last_error_message()) }.to_string_lossy().into_owned()
}

#[test]
fn constructors_validate_parameters() {
    let mut ch = ptr::null_mut();
    unsafe {
        assert_eq!(lg_channel_rtn(-1.0, 0.001, &mut ch), LgStatus::InvalidParams);
        assert!(ch.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(lg_channel_oun(0.1, 0.0, &mut ch), LgStatus::InvalidParams);
        assert_eq!(lg_channel_unitary(1.0, ptr::null_mut()), LgStatus::NullPointer);
        lg_channel_free(ptr::null_mut());
    }
}

#[test]
fn decoherence_and_regime() {
    let ch = rtn();
    let mut d = f64::NAN;
    let mut regime = LgRegime::Unitary;
    unsafe {
        assert_eq!(lg_channel_decoherence(ch, 0.0, &mut d), LgStatus::Ok);
        assert_eq!(d, 1.0);
        assert_eq!(lg_channel_decoherence(ch, -1.0, &mut d), LgStatus::InvalidTimes);
        assert_eq!(lg_channel_regime(ch, &mut regime), LgStatus::Ok);
        assert_eq!(regime, LgRegime::NonMarkovian);
        assert_eq!(lg_channel_regime(ptr::null(), &mut regime), LgStatus::NullPointer);
        assert_eq!(last_error(), "channel is null");
        lg_channel_free(ch);
    }
}

#[test]
fn chain_matches_closed_form() {
    let ch = rtn();
    let bloch = [0.3, -0.2, 0.5];
    let (mut chain, mut closed) = (0.0, 0.0);
    unsafe {
        assert_eq!(lg_correlator_chain(ch, 0.7, 0.3, bloch.as_ptr(), 10.0, 25.0, &mut chain), LgStatus::Ok);
        assert_eq!(lg_correlator_closed(ch, 0.7, 10.0, 25.0, &mut closed), LgStatus::Ok);
        assert!((chain - closed).abs() < 1e-12);
        let outside = [1.0, 1.0, 0.0];
        assert_eq!(
            lg_correlator_chain(ch, 0.7, 0.3, outside.as_ptr(), 0.0, 1.0, &mut chain),
            LgStatus::InvalidState
        );
        assert_eq!(lg_correlator_closed(ch, 0.7, 2.0, 1.0, &mut closed), LgStatus::InvalidTimes);
        lg_channel_free(ch);
    }
}

#[test]
fn k3_result_fields() {
    let mut ch = ptr::null_mut();
    let mut r = LgK3Result::default();
    let omega = 2.0;
    let dt = std::f64::consts::FRAC_PI_3 / omega;
    unsafe {
        assert_eq!(lg_channel_unitary(omega, &mut ch), LgStatus::Ok);
        assert_eq!(lg_k3(ch, std::f64::consts::FRAC_PI_2, 0.0, dt, &mut r), LgStatus::Ok);
        assert!((r.k3 - 1.5).abs() < 1e-12);
        assert_eq!(r.k3, r.c01 + r.c12 - r.c02);
        assert!((lg_k3_unitary(omega, dt) - r.k3).abs() < 1e-12);
        assert_eq!(lg_k3(ch, 0.0, 0.0, 0.0, &mut r), LgStatus::InvalidTimes);
        lg_channel_free(ch);
    }
}

#[test]
fn extremum_buffer_protocol() {
    let ch = rtn();
    let mut count = 0usize;
    unsafe {
        let status = lg_solve_extremum(ch, 0.0, 1000.0, ptr::null_mut(), 0, &mut count);
        assert_eq!(status, LgStatus::BufferTooSmall);
        assert!(count > 10);
        let mut buf = vec![
            LgRoot {
                family: LgRootFamily::Condition,
                dt: 0.0,
                nu: 0.0,
                residual: 0.0,
                k3: 0.0,
                dk3: 0.0,
                is_maximum: false,
                stationary: false,
            };
            count
        ];
        let mut again = 0usize;
        assert_eq!(lg_solve_extremum(ch, 0.0, 1000.0, buf.as_mut_ptr(), buf.len(), &mut again), LgStatus::Ok);
        assert_eq!(again, count);
        assert!(buf.iter().all(|r| r.stationary && r.residual < 1e-9 && (r.nu - 0.001 * r.dt).abs() < 1e-12));
        assert!(buf.iter().any(|r| r.family == LgRootFamily::SinZero));
        lg_channel_free(ch);
    }

    let mut oun = ptr::null_mut();
    let mut root = [LgRoot {
        family: LgRootFamily::SinZero,
        dt: 0.0,
        nu: 0.0,
        residual: 0.0,
        k3: 0.0,
        dk3: 0.0,
        is_maximum: false,
        stationary: false,
    }];
    unsafe {
        lg_channel_oun(0.1, 0.01, &mut oun);
        assert_eq!(lg_solve_extremum(oun, 0.0, 200.0, root.as_mut_ptr(), 1, &mut count), LgStatus::Ok);
        assert_eq!(count, 1);
        assert!(root[0].nu.is_nan() && root[0].is_maximum);
        lg_channel_free(oun);

        let mut u = ptr::null_mut();
        lg_channel_unitary(1.0, &mut u);
        assert_eq!(lg_solve_extremum(u, 0.0, 1.0, ptr::null_mut(), 0, &mut count), LgStatus::Unsupported);
        lg_channel_free(u);
    }
}

#[test]
fn status_names() {
    let name = unsafe { CStr::from_ptr(lg_status_name(LgStatus::BufferTooSmall)) };
    assert_eq!(name.to_str().unwrap(), "buffer too small");
}

fn header() -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/lgsim.h");
    std::fs::read_to_string(path).expect("header generated by the build script")
}

#[test]
fn header_declares_the_interface() {
    let h = header();
    for name in [
        "typedef struct LgChannel LgChannel;",
        "lg_channel_rtn(",
        "lg_channel_oun(",
        "lg_channel_unitary(",
        "lg_channel_free(",
        "lg_channel_decoherence(",
        "lg_channel_regime(",
        "lg_correlator_closed(",
        "lg_correlator_chain(",
        "lg_k3(",
        "lg_k3_unitary(",
        "lg_solve_extremum(",
        "lg_last_error_message(",
        "lg_status_name(",
        "LG_STATUS_BUFFER_TOO_SMALL = 7",
    ] {
        assert!(h.contains(name), "missing {name}");
    }
}

const C_SMOKE: &str = r#"
#include <math.h>
#include <stdio.h>
#include "lgsim.h"

int main(void) {
    LgChannel *ch = NULL;
    if (lg_channel_rtn(0.05, 0.001, &ch) != LG_STATUS_OK) return 1;
    LgK3Result r;
    if (lg_k3(ch, 1.5707963267948966, 0.0, 12.0, &r) != LG_STATUS_OK) return 2;
    if (!(r.k3 > 1.0)) return 3;
    double c;
    if (lg_correlator_closed(ch, 0.0, 2.0, 1.0, &c) != LG_STATUS_INVALID_TIMES) return 4;
    if (lg_last_error_message()[0] == '\0') return 5;
    lg_channel_free(ch);
    printf("%.6f\n", r.k3);
    return 0;
}
"#;

#[test]
fn c_program_links_against_static_library() {
    // target/<profile>/deps/<test> -> target/<profile>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("liblgsim_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library at {}", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let bin = dir.path().join("smoke");
    std::fs::write(&src, C_SMOKE).unwrap();
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("1.4"));
}
