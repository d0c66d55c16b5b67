//! C interface to the `lgsim` library.
//!
//! Every fallible function returns an [`LgStatus`] and writes results
//! through out-pointers. On failure a description is available from
//! [`lg_last_error_message`] on the same thread. Channels are opaque
//! handles created by `lg_channel_*` and released with
//! [`lg_channel_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use lgsim::extrema::{solve_extremum, ExtremumCondition, RootFamily};
use lgsim::{
    correlator_chain, correlator_closed, k3, k3_unitary, DensityMatrix, LgError, MeasurementSetting,
    NoiseChannel, RegimeTag,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParams = 2,
    InvalidTimes = 3,
    InvalidState = 4,
    InvalidBracket = 5,
    Unsupported = 6,
    BufferTooSmall = 7,
    Numerical = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LgRegime {
    Markovian = 0,
    NonMarkovian = 1,
    Intermediate = 2,
    Unitary = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LgRootFamily {
    Condition = 0,
    SinZero = 1,
}

/// Correlators and LG parameters at t0 = 0, t1 = dt, t2 = 2 dt.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LgK3Result {
    pub dt: f64,
    pub c01: f64,
    pub c12: f64,
    pub c02: f64,
    pub k3: f64,
    pub k3_prime: f64,
}

/// A stationary point of K3 along dt. `nu` is NaN for channels without
/// a dimensionless time.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LgRoot {
    pub family: LgRootFamily,
    pub dt: f64,
    pub nu: f64,
    pub residual: f64,
    pub k3: f64,
    pub dk3: f64,
    pub is_maximum: bool,
    pub stationary: bool,
}

/// Opaque channel handle.
pub struct LgChannel(NoiseChannel);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &LgError) -> LgStatus {
    match e {
        LgError::InvalidParams(_) | LgError::InvalidGrid(_) | LgError::InvalidProjector(_) => {
            LgStatus::InvalidParams
        }
        LgError::InvalidTimes(_) => LgStatus::InvalidTimes,
        LgError::InvalidState(_) => LgStatus::InvalidState,
        LgError::InvalidBracket { .. } => LgStatus::InvalidBracket,
        LgError::Unsupported(_) => LgStatus::Unsupported,
        LgError::IncompleteKraus { .. } | LgError::ZeroProbability => LgStatus::Numerical,
    }
}

/// Runs `f`, recording any error or panic for `lg_last_error_message`.
fn guard(f: impl FnOnce() -> Result<(), (LgStatus, String)>) -> LgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LgStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            LgStatus::Panic
        }
    }
}

fn lib<T>(r: lgsim::Result<T>) -> Result<T, (LgStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (LgStatus, String) {
    (LgStatus::NullPointer, format!("{what} is null"))
}

unsafe fn channel_ref<'a>(ch: *const LgChannel) -> Result<&'a NoiseChannel, (LgStatus, String)> {
    ch.as_ref().map(|c| &c.0).ok_or_else(|| null("channel"))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), (LgStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn make_channel(out: *mut *mut LgChannel, ch: lgsim::Result<NoiseChannel>) -> LgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let ch = lib(ch)?;
        out.write(Box::into_raw(Box::new(LgChannel(ch))));
        Ok(())
    })
}

/// Random telegraph noise with coupling `a` and switching rate `gamma`.
///
/// # Safety
/// `out` must be valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn lg_channel_rtn(a: f64, gamma: f64, out: *mut *mut LgChannel) -> LgStatus {
    make_channel(out, NoiseChannel::rtn(a, gamma))
}

/// Ornstein-Uhlenbeck noise with relaxation rate `big_gamma` and
/// bandwidth `gamma`.
///
/// # Safety
/// `out` must be valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn lg_channel_oun(big_gamma: f64, gamma: f64, out: *mut *mut LgChannel) -> LgStatus {
    make_channel(out, NoiseChannel::oun(big_gamma, gamma))
}

/// Noise-free precession at frequency `omega`.
///
/// # Safety
/// `out` must be valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn lg_channel_unitary(omega: f64, out: *mut *mut LgChannel) -> LgStatus {
    make_channel(out, NoiseChannel::unitary(omega))
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `ch` must come from an `lg_channel_*` constructor and not be used again.
#[no_mangle]
pub unsafe extern "C" fn lg_channel_free(ch: *mut LgChannel) {
    if !ch.is_null() {
        drop(Box::from_raw(ch));
    }
}

/// Coherence factor of the channel after time `t`.
///
/// # Safety
/// `ch` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn lg_channel_decoherence(ch: *const LgChannel, t: f64, out: *mut f64) -> LgStatus {
    guard(|| {
        let ch = channel_ref(ch)?;
        if !(t.is_finite() && t >= 0.0) {
            return Err((LgStatus::InvalidTimes, format!("time must be non-negative, got {t}")));
        }
        write(out, ch.decoherence(t), "out")
    })
}

/// # Safety
/// `ch` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn lg_channel_regime(ch: *const LgChannel, out: *mut LgRegime) -> LgStatus {
    guard(|| {
        let regime = match channel_ref(ch)?.regime() {
            RegimeTag::Markovian => LgRegime::Markovian,
            RegimeTag::NonMarkovian => LgRegime::NonMarkovian,
            RegimeTag::Intermediate => LgRegime::Intermediate,
            RegimeTag::Unitary => LgRegime::Unitary,
        };
        write(out, regime, "out")
    })
}

/// Closed-form two-time correlator for 0 <= ti <= tj.
///
/// # Safety
/// `ch` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn lg_correlator_closed(
    ch: *const LgChannel,
    theta: f64,
    ti: f64,
    tj: f64,
    out: *mut f64,
) -> LgStatus {
    guard(|| {
        let ch = channel_ref(ch)?;
        write(out, lib(correlator_closed(ch, theta, ti, tj))?, "out")
    })
}

/// Two-time correlator from the measurement chain, starting from the
/// state with Bloch vector `bloch[0..3]`.
///
/// # Safety
/// `ch` must be a live handle, `bloch` must point to three doubles and
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn lg_correlator_chain(
    ch: *const LgChannel,
    theta: f64,
    phi: f64,
    bloch: *const f64,
    ti: f64,
    tj: f64,
    out: *mut f64,
) -> LgStatus {
    guard(|| {
        let ch = channel_ref(ch)?;
        if bloch.is_null() {
            return Err(null("bloch"));
        }
        let r = [*bloch, *bloch.add(1), *bloch.add(2)];
        let rho = lib(DensityMatrix::from_bloch(r))?;
        let c = lib(correlator_chain(ch, &MeasurementSetting::new(theta, phi), &rho, ti, tj))?;
        write(out, c, "out")
    })
}

/// K3 and K3' for equally spaced measurements separated by `dt` > 0.
///
/// # Safety
/// `ch` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn lg_k3(
    ch: *const LgChannel,
    theta: f64,
    phi: f64,
    dt: f64,
    out: *mut LgK3Result,
) -> LgStatus {
    guard(|| {
        let ch = channel_ref(ch)?;
        let r = lib(k3(ch, &MeasurementSetting::new(theta, phi), dt))?;
        let result = LgK3Result {
            dt: r.dt,
            c01: r.triple.c01,
            c12: r.triple.c12,
            c02: r.triple.c02,
            k3: r.k3,
            k3_prime: r.k3_prime,
        };
        write(out, result, "out")
    })
}

/// 2 cos(omega dt) - cos(2 omega dt).
#[no_mangle]
pub extern "C" fn lg_k3_unitary(omega: f64, dt: f64) -> f64 {
    k3_unitary(omega, dt)
}

/// Stationary points of K3 at theta = pi/2 with dt in (lo, hi].
///
/// Writes up to `capacity` roots to `roots` and the total count to
/// `count`. Returns `LG_STATUS_BUFFER_TOO_SMALL` when the count exceeds
/// the capacity; call again with a larger buffer. `roots` may be null
/// when `capacity` is 0.
///
/// # Safety
/// `ch` must be a live handle, `roots` valid for `capacity` writes and
/// `count` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn lg_solve_extremum(
    ch: *const LgChannel,
    lo: f64,
    hi: f64,
    roots: *mut LgRoot,
    capacity: usize,
    count: *mut usize,
) -> LgStatus {
    guard(|| {
        let ch = channel_ref(ch)?;
        if count.is_null() {
            return Err(null("count"));
        }
        if roots.is_null() && capacity > 0 {
            return Err(null("roots"));
        }
        let cond = lib(ExtremumCondition::for_channel(ch))?;
        let found = lib(solve_extremum(&cond, (lo, hi)))?;
        count.write(found.len());
        for (i, r) in found.iter().take(capacity).enumerate() {
            roots.add(i).write(LgRoot {
                family: match r.family {
                    RootFamily::Condition => LgRootFamily::Condition,
                    RootFamily::SinZero => LgRootFamily::SinZero,
                },
                dt: r.dt,
                nu: r.nu.unwrap_or(f64::NAN),
                residual: r.residual,
                k3: r.k3,
                dk3: r.dk3,
                is_maximum: r.is_maximum,
                stationary: r.stationary,
            });
        }
        if found.len() > capacity {
            return Err((
                LgStatus::BufferTooSmall,
                format!("{} roots found, buffer holds {capacity}", found.len()),
            ));
        }
        Ok(())
    })
}

/// Message for the most recent failure on this thread, or "". The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn lg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn lg_status_name(status: LgStatus) -> *const c_char {
    let s: &'static CStr = match status {
        LgStatus::Ok => c"ok",
        LgStatus::NullPointer => c"null pointer",
        LgStatus::InvalidParams => c"invalid parameters",
        LgStatus::InvalidTimes => c"invalid times",
        LgStatus::InvalidState => c"invalid state",
        LgStatus::InvalidBracket => c"invalid bracket",
        LgStatus::Unsupported => c"unsupported",
        LgStatus::BufferTooSmall => c"buffer too small",
        LgStatus::Numerical => c"numerical failure",
        LgStatus::Panic => c"panic",
    };
    s.as_ptr()
}
