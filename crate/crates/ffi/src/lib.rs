//! C ABI over `statdist`.
//!
//! Objects are opaque handles created by `*_new`/constructor functions and
//! released with the matching `*_free`. Every fallible call returns a
//! [`StatdistStatus`] and writes its result through an out-pointer; on
//! failure `statdist_last_error` returns a message for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use statdist::channels::{channel_similarity, ChannelBank, ChannelVector};
use statdist::distance::{closed_form_distance, fisher_information, fisher_limit_ratio, statistical_distance};
use statdist::finite::{count_distinguishable, SampleSize};
use statdist::hilbert::{device_distance, hilbert_distance, optimize_basis, random_basis, random_state, MeasurementBasis, OptimizerSettings, PureState};
use statdist::num_complex::Complex64;
use statdist::{Error, ResponseLaw};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum StatdistStatus {
    Ok = 0,
    /// Null pointer, bad length or non-UTF-8 string.
    InvalidArgument = 1,
    /// The inputs violate a precondition.
    Validation = 2,
    /// The computation hit a singular or non-identifiable case.
    Numeric = 3,
    /// An internal panic was caught at the boundary.
    Panic = 4,
}

/// A response law `p(θ)`.
pub struct StatdistLaw(ResponseLaw);
/// A normalized pure state.
pub struct StatdistState(PureState);
/// An orthonormal analyzer basis.
pub struct StatdistBasis(MeasurementBasis);
/// A cos² channel bank.
pub struct StatdistBank(ChannelBank);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

enum Failure {
    Argument(&'static str),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<(), Failure>;

fn guard(f: impl FnOnce() -> Outcome) -> StatdistStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            StatdistStatus::Ok
        }
        Ok(Err(Failure::Argument(msg))) => {
            set_error(msg);
            StatdistStatus::InvalidArgument
        }
        Ok(Err(Failure::Core(e))) => {
            set_error(&e.to_string());
            if e.is_validation() {
                StatdistStatus::Validation
            } else {
                StatdistStatus::Numeric
            }
        }
        Err(_) => {
            set_error("internal panic");
            StatdistStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Argument(what))
}

unsafe fn write<T>(out: *mut T, value: T) -> Outcome {
    if out.is_null() {
        return Err(Failure::Argument("output pointer is null"));
    }
    out.write(value);
    Ok(())
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &'static str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::Argument(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn boxed<T>(out: *mut *mut T, value: T) -> Outcome {
    write(out, Box::into_raw(Box::new(value)))
}

/// Message describing the last failure on this thread. Empty after a
/// successful call. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn statdist_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// The `cos²θ` law on `[0, π/2]`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn statdist_law_cos2(out: *mut *mut StatdistLaw) -> StatdistStatus {
    guard(|| boxed(out, StatdistLaw(ResponseLaw::cos2())))
}

/// Law from a spec string: `cos2`, `cos2:<w>` or `table:<path>`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn statdist_law_from_spec(spec: *const c_char, out: *mut *mut StatdistLaw) -> StatdistStatus {
    guard(|| {
        if spec.is_null() {
            return Err(Failure::Argument("spec is null"));
        }
        let text = CStr::from_ptr(spec).to_str().map_err(|_| Failure::Argument("spec is not UTF-8"))?;
        boxed(out, StatdistLaw(ResponseLaw::parse_spec(text)?))
    })
}

/// Piecewise-linear law through `len` samples `(thetas[i], probs[i])`.
///
/// # Safety
/// `thetas` and `probs` must point to `len` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn statdist_law_tabulated(
    thetas: *const f64,
    probs: *const f64,
    len: usize,
    out: *mut *mut StatdistLaw,
) -> StatdistStatus {
    guard(|| {
        let t = slice(thetas, len, "thetas is null")?;
        let p = slice(probs, len, "probs is null")?;
        let samples: Vec<(f64, f64)> = t.iter().copied().zip(p.iter().copied()).collect();
        boxed(out, StatdistLaw(ResponseLaw::tabulated(&samples)?))
    })
}

/// # Safety
/// `law` must come from a `statdist_law_*` constructor, or be null.
#[no_mangle]
pub unsafe extern "C" fn statdist_law_free(law: *mut StatdistLaw) {
    if !law.is_null() {
        drop(Box::from_raw(law));
    }
}

/// `p(θ)`.
///
/// # Safety
/// `law` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn statdist_probability(law: *const StatdistLaw, theta: f64, out: *mut f64) -> StatdistStatus {
    guard(|| write(out, deref(law, "law is null")?.0.probability(theta)?))
}

/// Statistical distance between `theta1` and `theta2` by quadrature.
///
/// # Safety
/// `law` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn statdist_distance(law: *const StatdistLaw, theta1: f64, theta2: f64, out: *mut f64) -> StatdistStatus {
    guard(|| write(out, statistical_distance(&deref(law, "law is null")?.0, theta1, theta2)?.value))
}

/// Statistical distance from the closed form.
///
/// # Safety
/// `law` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn statdist_closed_form_distance(
    law: *const StatdistLaw,
    theta1: f64,
    theta2: f64,
    out: *mut f64,
) -> StatdistStatus {
    guard(|| write(out, closed_form_distance(&deref(law, "law is null")?.0, theta1, theta2)?.value))
}

/// Number of orientations between `theta1` and `theta2` distinguishable in
/// `n` trials.
///
/// # Safety
/// `law` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn statdist_count_distinguishable(
    law: *const StatdistLaw,
    theta1: f64,
    theta2: f64,
    n: u64,
    out: *mut u64,
) -> StatdistStatus {
    guard(|| {
        let law = &deref(law, "law is null")?.0;
        write(out, count_distinguishable(law, theta1, theta2, SampleSize::new(n)?)?)
    })
}

/// Fisher information per trial at `theta`.
///
/// # Safety
/// `law` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn statdist_fisher_information(law: *const StatdistLaw, theta: f64, out: *mut f64) -> StatdistStatus {
    guard(|| write(out, fisher_information(&deref(law, "law is null")?.0, theta)?))
}

/// `W² / ((Δθ²/4)·I)` for the Bernoulli pair at `theta` and `theta + delta`.
///
/// # Safety
/// `law` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn statdist_fisher_limit_ratio(
    law: *const StatdistLaw,
    theta: f64,
    delta: f64,
    out: *mut f64,
) -> StatdistStatus {
    guard(|| write(out, fisher_limit_ratio(&deref(law, "law is null")?.0, theta, delta)?.ratio))
}

/// State with amplitudes `re[i] + i·im[i]`, normalized to within 1e-12.
///
/// # Safety
/// `re` and `im` must point to `dim` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn statdist_state_new(
    re: *const f64,
    im: *const f64,
    dim: usize,
    out: *mut *mut StatdistState,
) -> StatdistStatus {
    guard(|| {
        let re = slice(re, dim, "re is null")?;
        let im = slice(im, dim, "im is null")?;
        let amps = re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        boxed(out, StatdistState(PureState::new(amps)?))
    })
}

/// Haar-random state, deterministic in `seed`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn statdist_state_random(dim: usize, seed: u64, out: *mut *mut StatdistState) -> StatdistStatus {
    guard(|| boxed(out, StatdistState(random_state(dim, seed)?)))
}

/// # Safety
/// `state` must come from a `statdist_state_*` constructor, or be null.
#[no_mangle]
pub unsafe extern "C" fn statdist_state_free(state: *mut StatdistState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// `arccos |⟨ψ1, ψ2⟩|`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn statdist_hilbert_distance(
    psi1: *const StatdistState,
    psi2: *const StatdistState,
    out: *mut f64,
) -> StatdistStatus {
    guard(|| {
        let (a, b) = (deref(psi1, "psi1 is null")?, deref(psi2, "psi2 is null")?);
        write(out, hilbert_distance(&a.0, &b.0)?)
    })
}

/// Random orthonormal basis, deterministic in `seed`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn statdist_basis_random(dim: usize, seed: u64, out: *mut *mut StatdistBasis) -> StatdistStatus {
    guard(|| boxed(out, StatdistBasis(random_basis(dim, seed)?)))
}

/// The standard basis of dimension `dim`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn statdist_basis_computational(dim: usize, out: *mut *mut StatdistBasis) -> StatdistStatus {
    guard(|| boxed(out, StatdistBasis(MeasurementBasis::computational(dim)?)))
}

/// # Safety
/// `basis` must come from a `statdist_basis_*` constructor, or be null.
#[no_mangle]
pub unsafe extern "C" fn statdist_basis_free(basis: *mut StatdistBasis) {
    if !basis.is_null() {
        drop(Box::from_raw(basis));
    }
}

/// Statistical distance between the outcome distributions of `basis`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn statdist_device_distance(
    basis: *const StatdistBasis,
    psi1: *const StatdistState,
    psi2: *const StatdistState,
    out: *mut f64,
) -> StatdistStatus {
    guard(|| {
        let basis = deref(basis, "basis is null")?;
        let (a, b) = (deref(psi1, "psi1 is null")?, deref(psi2, "psi2 is null")?);
        write(out, device_distance(&basis.0, &a.0, &b.0)?)
    })
}

/// Best analyzer distance over both optimization routes. `converged` is set
/// to 1 when the numeric route met its step tolerance, else 0; it may be null.
///
/// # Safety
/// `psi1`, `psi2` and `d_max` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn statdist_optimize_basis(
    psi1: *const StatdistState,
    psi2: *const StatdistState,
    restarts: usize,
    seed: u64,
    d_max: *mut f64,
    converged: *mut i32,
) -> StatdistStatus {
    guard(|| {
        let (a, b) = (deref(psi1, "psi1 is null")?, deref(psi2, "psi2 is null")?);
        let settings = OptimizerSettings {
            restarts,
            ..Default::default()
        };
        let opt = optimize_basis(&a.0, &b.0, settings, seed)?;
        if !converged.is_null() {
            converged.write(i32::from(opt.numeric.converged));
        }
        write(d_max, opt.d_a_max)
    })
}

/// Bank of `k` channels centered evenly on `[lo, hi]`. A non-positive
/// `width` selects the default `π/(3·spacing)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn statdist_bank_new(k: usize, lo: f64, hi: f64, width: f64, out: *mut *mut StatdistBank) -> StatdistStatus {
    guard(|| {
        let width = (width > 0.0).then_some(width);
        boxed(out, StatdistBank(ChannelBank::new(k, lo, hi, width)?))
    })
}

/// # Safety
/// `bank` must come from `statdist_bank_new`, or be null.
#[no_mangle]
pub unsafe extern "C" fn statdist_bank_free(bank: *mut StatdistBank) {
    if !bank.is_null() {
        drop(Box::from_raw(bank));
    }
}

/// Number of channels, or 0 for a null bank.
///
/// # Safety
/// `bank` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn statdist_bank_len(bank: *const StatdistBank) -> usize {
    bank.as_ref().map_or(0, |b| b.0.len())
}

/// Writes the `len` activations for `theta` into `out`.
///
/// # Safety
/// `bank` must be valid and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn statdist_bank_encode(bank: *const StatdistBank, theta: f64, out: *mut f64, len: usize) -> StatdistStatus {
    guard(|| {
        let bank = &deref(bank, "bank is null")?.0;
        if len != bank.len() || out.is_null() {
            return Err(Failure::Argument("output buffer must hold one value per channel"));
        }
        let v = bank.encode(theta)?;
        ptr::copy_nonoverlapping(v.activations().as_ptr(), out, len);
        Ok(())
    })
}

/// Decodes `len` activations back to an orientation.
///
/// # Safety
/// `bank` and `out` must be valid; `activations` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn statdist_bank_decode(
    bank: *const StatdistBank,
    activations: *const f64,
    len: usize,
    out: *mut f64,
) -> StatdistStatus {
    guard(|| {
        let bank = &deref(bank, "bank is null")?.0;
        let v = ChannelVector::new(slice(activations, len, "activations is null")?.to_vec())?;
        write(out, bank.decode(&v)?)
    })
}

/// Bhattacharyya angle between two L1-normalized activation vectors.
///
/// # Safety
/// `a` and `b` must hold `len` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn statdist_channel_similarity(a: *const f64, b: *const f64, len: usize, out: *mut f64) -> StatdistStatus {
    guard(|| {
        let va = ChannelVector::new(slice(a, len, "a is null")?.to_vec())?;
        let vb = ChannelVector::new(slice(b, len, "b is null")?.to_vec())?;
        write(out, channel_similarity(&va, &vb)?)
    })
}
