//! C ABI for `mre-core`.
//!
//! States are opaque `MreState` handles created by the `mre_state_*`
//! constructors and released with [`mre_state_free`]. Every fallible call
//! returns an [`MreStatus`]; on failure [`mre_last_error_message`] describes
//! what went wrong on the calling thread. Infinite entropies come back as
//! `INFINITY`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use mre_core::closedform::werner_mre;
use mre_core::decomp::{optimize_mre, re_upper_bound, OptimizerConfig};
use mre_core::measures::{ef_wootters, ppt_separable, von_neumann_entropy};
use mre_core::qmat::{ComplexMatrix, C64};
use mre_core::states::{
    ext_werner, validate_density, werner, DensityMatrix, ExtWernerParams, PureState, DENSITY_TOL,
};

/// Largest ensemble an [`MreOptResult`] can hold.
pub const MRE_MAX_ENSEMBLE: usize = 8;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MreStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidState = 3,
    Panic = 4,
}

/// A validated two-qubit density matrix.
pub struct MreState {
    rho: DensityMatrix,
}

/// Search settings. `ensemble_size = 0` picks the default size.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct MreOptimizerConfig {
    pub restarts: u32,
    pub max_iterations: u32,
    pub ensemble_size: u32,
    pub tolerance: f64,
    pub seed: u64,
}

/// Outcome of [`mre_optimize`]. Only the first `ensemble_size` rows of
/// `weights` and the amplitude arrays are meaningful.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct MreOptResult {
    pub best_value: f64,
    pub seed_value: f64,
    pub evaluations: u64,
    pub converged: bool,
    pub ensemble_size: u32,
    pub weights: [f64; MRE_MAX_ENSEMBLE],
    pub amplitudes_re: [[f64; 4]; MRE_MAX_ENSEMBLE],
    pub amplitudes_im: [[f64; 4]; MRE_MAX_ENSEMBLE],
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(MreStatus, String);

impl From<mre_core::Error> for Failure {
    fn from(e: mre_core::Error) -> Self {
        use mre_core::Error::*;
        let status = match e {
            NotHermitian(_) | Trace(_) | NegativeEigenvalue(_) | NotNormalized(_) => MreStatus::InvalidState,
            _ => MreStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(name: &str) -> Failure {
    Failure(MreStatus::NullPointer, format!("{name} is null"))
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> MreStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            MreStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(&format!("internal error: {message}"));
            MreStatus::Panic
        }
    }
}

/// # Safety
/// `p` must be null or valid for reads of `n` values.
unsafe fn read<'a>(p: *const f64, n: usize, name: &str) -> Result<&'a [f64], Failure> {
    if p.is_null() {
        return Err(null(name));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

/// # Safety
/// `out` must be null or valid for a write.
unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(value);
    Ok(())
}

/// # Safety
/// `state` must be null or a live handle.
unsafe fn state<'a>(state: *const MreState) -> Result<&'a DensityMatrix, Failure> {
    state.as_ref().map(|s| &s.rho).ok_or_else(|| null("state"))
}

/// # Safety
/// `out` must be null or valid for a write.
unsafe fn emit(rho: DensityMatrix, out: *mut *mut MreState) -> Result<(), Failure> {
    write(out, Box::into_raw(Box::new(MreState { rho })))
}

fn complex(re: &[f64], im: Option<&[f64]>) -> Vec<C64> {
    re.iter()
        .enumerate()
        .map(|(k, &r)| C64::new(r, im.map_or(0.0, |i| i[k])))
        .collect()
}

/// Builds a state from a row-major 4x4 matrix. `im` may be null for a real matrix.
///
/// # Safety
/// `re` (and `im` unless null) must point to 16 doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mre_state_from_matrix(re: *const f64, im: *const f64, out: *mut *mut MreState) -> MreStatus {
    guard(|| {
        let re = read(re, 16, "re")?;
        let im = if im.is_null() { None } else { Some(read(im, 16, "im")?) };
        let m = ComplexMatrix::new(4, &complex(re, im))?;
        emit(validate_density(&m, DENSITY_TOL)?, out)
    })
}

/// Builds `|psi><psi|` from four amplitudes in the order `|00>, |01>, |10>, |11>`.
/// `im` may be null.
///
/// # Safety
/// `re` (and `im` unless null) must point to 4 doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mre_state_from_pure(re: *const f64, im: *const f64, out: *mut *mut MreState) -> MreStatus {
    guard(|| {
        let re = read(re, 4, "re")?;
        let im = if im.is_null() { None } else { Some(read(im, 4, "im")?) };
        let a = complex(re, im);
        emit(PureState::new([a[0], a[1], a[2], a[3]])?.projector(), out)
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mre_state_werner(fidelity: f64, out: *mut *mut MreState) -> MreStatus {
    guard(|| emit(werner(fidelity)?, out))
}

/// `b` weights the Bell states `Phi+, Phi-, Psi+, Psi-`; `c` weights `|00>, |01>, |10>, |11>`.
///
/// # Safety
/// `b` and `c` must point to 4 doubles each; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mre_state_ext_werner(b: *const f64, c: *const f64, out: *mut *mut MreState) -> MreStatus {
    guard(|| {
        let b = read(b, 4, "b")?;
        let c = read(c, 4, "c")?;
        let p = ExtWernerParams::new([b[0], b[1], b[2], b[3]], [c[0], c[1], c[2], c[3]])?;
        emit(ext_werner(&p)?, out)
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `state` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mre_state_free(state: *mut MreState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Copies the matrix out in row-major order.
///
/// # Safety
/// `s` must be a live handle; `re` and `im` must have room for 16 doubles.
#[no_mangle]
pub unsafe extern "C" fn mre_state_matrix(s: *const MreState, re: *mut f64, im: *mut f64) -> MreStatus {
    guard(|| {
        let rho = state(s)?;
        if re.is_null() || im.is_null() {
            return Err(null("output buffer"));
        }
        for r in 0..4 {
            for c in 0..4 {
                let z = rho.get(r, c);
                re.add(4 * r + c).write(z.re);
                im.add(4 * r + c).write(z.im);
            }
        }
        Ok(())
    })
}

/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mre_von_neumann_entropy(s: *const MreState, out: *mut f64) -> MreStatus {
    guard(|| write(out, von_neumann_entropy(state(s)?).bits()))
}

/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mre_concurrence(s: *const MreState, out: *mut f64) -> MreStatus {
    guard(|| write(out, ef_wootters(state(s)?).concurrence))
}

/// Entanglement of formation from the Wootters concurrence.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mre_ef_wootters(s: *const MreState, out: *mut f64) -> MreStatus {
    guard(|| write(out, ef_wootters(state(s)?).ef.bits()))
}

/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mre_ppt_separable(s: *const MreState, out: *mut bool) -> MreStatus {
    guard(|| write(out, ppt_separable(state(s)?)))
}

#[no_mangle]
pub extern "C" fn mre_optimizer_config_default() -> MreOptimizerConfig {
    let d = OptimizerConfig::default();
    MreOptimizerConfig {
        restarts: d.restarts as u32,
        max_iterations: d.max_iterations as u32,
        ensemble_size: 0,
        tolerance: d.tolerance,
        seed: d.seed,
    }
}

/// # Safety
/// `cfg` must be null or readable.
unsafe fn config(cfg: *const MreOptimizerConfig) -> OptimizerConfig {
    let c = cfg.as_ref().copied().unwrap_or_else(|| mre_optimizer_config_default());
    OptimizerConfig {
        restarts: c.restarts as usize,
        max_iterations: c.max_iterations as usize,
        ensemble_size: (c.ensemble_size != 0).then_some(c.ensemble_size as usize),
        tolerance: c.tolerance,
        seed: c.seed,
    }
}

/// Minimizes the MRE objective over ensembles of the state. A null `cfg`
/// uses [`mre_optimizer_config_default`].
///
/// # Safety
/// `s` must be a live handle; `cfg` null or readable; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mre_optimize(
    s: *const MreState,
    cfg: *const MreOptimizerConfig,
    out: *mut MreOptResult,
) -> MreStatus {
    guard(|| {
        let r = optimize_mre(state(s)?, &config(cfg))?;
        let mut res = MreOptResult {
            best_value: r.best_value.bits(),
            seed_value: r.seed_value.bits(),
            evaluations: r.evaluations as u64,
            converged: r.converged,
            ensemble_size: r.best_decomposition.len() as u32,
            weights: [0.0; MRE_MAX_ENSEMBLE],
            amplitudes_re: [[0.0; 4]; MRE_MAX_ENSEMBLE],
            amplitudes_im: [[0.0; 4]; MRE_MAX_ENSEMBLE],
        };
        for (k, (p, psi)) in r.best_decomposition.terms().iter().enumerate() {
            res.weights[k] = *p;
            res.amplitudes_re[k] = psi.amplitudes().map(|z| z.re);
            res.amplitudes_im[k] = psi.amplitudes().map(|z| z.im);
        }
        write(out, res)
    })
}

/// Upper bound on the relative entropy of entanglement from a search over
/// separable states. A null `cfg` uses the defaults.
///
/// # Safety
/// `s` must be a live handle; `cfg` null or readable; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mre_re_upper_bound(s: *const MreState, cfg: *const MreOptimizerConfig, out: *mut f64) -> MreStatus {
    guard(|| write(out, re_upper_bound(state(s)?, &config(cfg))?.bits()))
}

/// Closed-form MRE of the Werner state with fidelity `F`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mre_werner_mre(fidelity: f64, out: *mut f64) -> MreStatus {
    guard(|| write(out, werner_mre(fidelity)?.bits()))
}

/// Message for the last failed call on this thread, or an empty string.
/// The pointer stays valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn mre_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
