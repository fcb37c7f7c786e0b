//! C ABI for `qwalk`.
//!
//! Objects are opaque handles created by `*_new`/`*_build`/`qwalk_walk`-style
//! constructors and released with the matching `*_free`. Every fallible call
//! returns a [`QwalkStatus`]; on failure `qwalk_last_error()` describes the
//! problem. Angles are in radians. Handles are not thread-safe; distinct
//! handles may be used from different threads.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qwalk::decoherence::{classical_walk, run_ensemble, DephasingConfig};
use qwalk::optics::{build_network, NetworkLayout};
use qwalk::stats::tv_distance;
use qwalk::walk::hwp_coin;
use qwalk::{Distribution, Error, InitialSpec, WalkState};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QwalkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Capacity = 3,
    NonUnitary = 4,
    Layout = 5,
    Panic = 6,
}

/// Walker state with a fixed step capacity.
pub struct QwalkState {
    inner: WalkState,
}

/// Probability distribution over positions, with per-position standard errors
/// when it comes from an ensemble.
pub struct QwalkDistribution {
    inner: Distribution,
    std_error: Option<Vec<f64>>,
}

/// Optical network for a fixed number of steps.
pub struct QwalkNetwork {
    inner: NetworkLayout,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> QwalkStatus {
    match e {
        Error::Capacity { .. } => QwalkStatus::Capacity,
        Error::NonUnitary { .. } => QwalkStatus::NonUnitary,
        Error::Layout(_) => QwalkStatus::Layout,
        Error::InvalidArgument(_) | Error::StepMismatch { .. } => QwalkStatus::InvalidArgument,
    }
}

enum Failure {
    Null(&'static str),
    Invalid(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> QwalkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QwalkStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("{what} is null"));
            QwalkStatus::NullPointer
        }
        Ok(Err(Failure::Invalid(msg))) => {
            set_error(msg);
            QwalkStatus::InvalidArgument
        }
        Ok(Err(Failure::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            QwalkStatus::Panic
        }
    }
}

unsafe fn as_ref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn as_mut<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null("out"));
    }
    out.write(value);
    Ok(())
}

fn boxed_distribution(inner: Distribution, std_error: Option<Vec<f64>>) -> *mut QwalkDistribution {
    Box::into_raw(Box::new(QwalkDistribution { inner, std_error }))
}

fn initial(theta: f64, phi: f64, start: i64) -> Result<InitialSpec, Failure> {
    if !theta.is_finite() || !phi.is_finite() {
        return Err(Failure::Invalid(format!(
            "initial angles must be finite, got theta={theta} phi={phi}"
        )));
    }
    Ok(InitialSpec::new(theta, phi).at(start))
}

fn coin(axis: f64) -> Result<qwalk::CoinOperator, Failure> {
    if !axis.is_finite() {
        return Err(Failure::Invalid(format!(
            "coin axis must be finite, got {axis}"
        )));
    }
    Ok(hwp_coin(axis))
}

/// Message for the most recent failure on this thread, or null if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qwalk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qwalk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates a state `cos(theta)|H> + e^{i phi} sin(theta)|V>` at `start`,
/// able to take up to `capacity` steps.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qwalk_state_new(
    theta: f64,
    phi: f64,
    start: i64,
    capacity: usize,
    out: *mut *mut QwalkState,
) -> QwalkStatus {
    guard(|| {
        let spec = initial(theta, phi, start)?;
        let state = Box::new(QwalkState {
            inner: WalkState::new(&spec, capacity),
        });
        write_out(out, Box::into_raw(state))
    })
}

/// Takes `steps` steps with the half-wave-plate coin at `coin_axis`. Fails
/// without changing the state if the capacity would be exceeded.
///
/// # Safety
/// `state` must be a live handle from `qwalk_state_new`.
#[no_mangle]
pub unsafe extern "C" fn qwalk_state_evolve(
    state: *mut QwalkState,
    coin_axis: f64,
    steps: usize,
) -> QwalkStatus {
    guard(|| {
        let s = as_mut(state, "state")?;
        s.inner.evolve(&coin(coin_axis)?, steps)?;
        Ok(())
    })
}

/// # Safety
/// `state` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qwalk_state_step_count(
    state: *const QwalkState,
    out: *mut usize,
) -> QwalkStatus {
    guard(|| write_out(out, as_ref(state, "state")?.inner.step_count()))
}

/// # Safety
/// `state` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qwalk_state_norm(state: *const QwalkState, out: *mut f64) -> QwalkStatus {
    guard(|| write_out(out, as_ref(state, "state")?.inner.norm_sqr()))
}

/// Position distribution of the current state. The result is a new handle.
///
/// # Safety
/// `state` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qwalk_state_distribution(
    state: *const QwalkState,
    out: *mut *mut QwalkDistribution,
) -> QwalkStatus {
    guard(|| {
        let d = as_ref(state, "state")?.inner.distribution();
        write_out(out, boxed_distribution(d, None))
    })
}

/// # Safety
/// `state` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qwalk_state_free(state: *mut QwalkState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Coherent walk from the origin in one call.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qwalk_walk(
    theta: f64,
    phi: f64,
    coin_axis: f64,
    steps: usize,
    out: *mut *mut QwalkDistribution,
) -> QwalkStatus {
    guard(|| {
        let d = qwalk::walk::run_walk(&initial(theta, phi, 0)?, &coin(coin_axis)?, steps)?;
        write_out(out, boxed_distribution(d, None))
    })
}

/// Exact unbiased classical walk of `steps` steps from `start`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qwalk_classical_walk(
    steps: usize,
    start: i64,
    out: *mut *mut QwalkDistribution,
) -> QwalkStatus {
    guard(|| write_out(out, boxed_distribution(classical_walk(steps, start), None)))
}

/// Mean of `trajectories` dephased trajectories from the origin. Output is
/// bit-identical for equal arguments whatever the number of threads.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qwalk_ensemble_run(
    theta: f64,
    phi: f64,
    coin_axis: f64,
    steps: usize,
    gamma: f64,
    trajectories: usize,
    seed: u64,
    out: *mut *mut QwalkDistribution,
) -> QwalkStatus {
    guard(|| {
        let cfg = DephasingConfig::new(gamma, trajectories, seed)?;
        let r = run_ensemble(&initial(theta, phi, 0)?, &coin(coin_axis)?, steps, &cfg)?;
        write_out(out, boxed_distribution(r.mean, Some(r.std_error)))
    })
}

/// Number of positions stored, `2 * steps + 1`, starting at
/// `qwalk_distribution_min_position`.
///
/// # Safety
/// `d` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qwalk_distribution_len(
    d: *const QwalkDistribution,
    out: *mut usize,
) -> QwalkStatus {
    guard(|| write_out(out, as_ref(d, "distribution")?.inner.probabilities().len()))
}

/// # Safety
/// `d` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qwalk_distribution_min_position(
    d: *const QwalkDistribution,
    out: *mut i64,
) -> QwalkStatus {
    guard(|| write_out(out, as_ref(d, "distribution")?.inner.min_position()))
}

/// Probability at `position`; zero outside the stored range.
///
/// # Safety
/// `d` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qwalk_distribution_get(
    d: *const QwalkDistribution,
    position: i64,
    out: *mut f64,
) -> QwalkStatus {
    guard(|| write_out(out, as_ref(d, "distribution")?.inner.get(position)))
}

/// Copies all stored probabilities into `buf`, which must hold at least
/// `qwalk_distribution_len` values.
///
/// # Safety
/// `d` must be a live handle; `buf` must be valid for `buf_len` writes.
#[no_mangle]
pub unsafe extern "C" fn qwalk_distribution_copy(
    d: *const QwalkDistribution,
    buf: *mut f64,
    buf_len: usize,
) -> QwalkStatus {
    guard(|| {
        let p = as_ref(d, "distribution")?.inner.probabilities();
        if buf.is_null() {
            return Err(Failure::Null("buf"));
        }
        if buf_len < p.len() {
            return Err(Failure::Invalid(format!(
                "buffer holds {buf_len} values, distribution has {}",
                p.len()
            )));
        }
        ptr::copy_nonoverlapping(p.as_ptr(), buf, p.len());
        Ok(())
    })
}

/// # Safety
/// `d` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qwalk_distribution_std_dev(
    d: *const QwalkDistribution,
    out: *mut f64,
) -> QwalkStatus {
    guard(|| write_out(out, as_ref(d, "distribution")?.inner.std_dev()))
}

/// Standard error of the ensemble mean at `position`. Fails with
/// `InvalidArgument` for distributions that do not come from an ensemble.
///
/// # Safety
/// `d` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qwalk_distribution_std_error(
    d: *const QwalkDistribution,
    position: i64,
    out: *mut f64,
) -> QwalkStatus {
    guard(|| {
        let d = as_ref(d, "distribution")?;
        let se = d
            .std_error
            .as_ref()
            .ok_or_else(|| Failure::Invalid("distribution has no standard errors".into()))?;
        let i = position - d.inner.min_position();
        let value = usize::try_from(i)
            .ok()
            .and_then(|i| se.get(i))
            .copied()
            .unwrap_or(0.0);
        write_out(out, value)
    })
}

/// Total-variation distance between two distributions.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qwalk_tv_distance(
    a: *const QwalkDistribution,
    b: *const QwalkDistribution,
    out: *mut f64,
) -> QwalkStatus {
    guard(|| {
        let (a, b) = (as_ref(a, "a")?, as_ref(b, "b")?);
        write_out(out, tv_distance(&a.inner, &b.inner))
    })
}

/// # Safety
/// `d` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qwalk_distribution_free(d: *mut QwalkDistribution) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Builds the optical network for `steps` steps with coin plates at
/// `coin_axis`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qwalk_network_build(
    steps: usize,
    coin_axis: f64,
    out: *mut *mut QwalkNetwork,
) -> QwalkStatus {
    guard(|| {
        let inner = build_network(steps, coin_axis)?;
        write_out(out, Box::into_raw(Box::new(QwalkNetwork { inner })))
    })
}

/// Sends one photon in polarization `cos(theta)|H> + e^{i phi} sin(theta)|V>`
/// through the network; the result holds the detector probabilities.
///
/// # Safety
/// `net` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qwalk_network_propagate(
    net: *const QwalkNetwork,
    theta: f64,
    phi: f64,
    out: *mut *mut QwalkDistribution,
) -> QwalkStatus {
    guard(|| {
        let net = as_ref(net, "network")?;
        let d = net.inner.propagate(initial(theta, phi, 0)?.coin_vector())?;
        write_out(out, boxed_distribution(d, None))
    })
}

/// Text dump of the network layout. Release with `qwalk_string_free`.
///
/// # Safety
/// `net` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qwalk_network_dump(
    net: *const QwalkNetwork,
    out: *mut *mut c_char,
) -> QwalkStatus {
    guard(|| {
        let dump = as_ref(net, "network")?.inner.dump();
        let c = CString::new(dump).map_err(|e| Failure::Invalid(e.to_string()))?;
        write_out(out, c.into_raw())
    })
}

/// # Safety
/// `net` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qwalk_network_free(net: *mut QwalkNetwork) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qwalk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Reads the last error as an owned string; for Rust-side callers and tests.
pub fn last_error_string() -> Option<String> {
    let p = qwalk_last_error();
    if p.is_null() {
        None
    } else {
        Some(unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
    }
}
