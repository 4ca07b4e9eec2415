//! C ABI for the eisreg library: scalar special functions, Eisenstein-series
//! evaluation through an opaque handle, regularized integrals of the named
//! built-in test functions, and the unipotent coset normal form.
//!
//! Conventions:
//! * every function returns an `EisregStatus` code; outputs go through
//!   pointers, complex numbers as separate re/im doubles;
//! * handles are created and released by the paired `_new`/`_free` calls and
//!   must not be shared across threads;
//! * on a non-zero status, `eisreg_last_error` returns a message valid until
//!   the next failing call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use eisreg::eisenstein::{EisSpec, Evaluator, Point, Variant};
use eisreg::regint::{phi_by_name, Engine};
use eisreg::Cplx;

/// Status codes of every C-ABI call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum EisregStatus {
    Ok = 0,
    /// A pole, divergence or accuracy failure in the mathematics.
    Numerical = 1,
    /// Malformed input (null pointer, bad name, non-unimodular matrix, ...).
    InvalidInput = 2,
    /// An internal panic was caught at the boundary.
    Internal = 3,
}

/// Variant selector for the Eisenstein evaluator.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum EisregVariant {
    Plain = 0,
    Star = 1,
    Regularized = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Message of the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn eisreg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

fn wrap(f: impl FnOnce() -> Result<(), EisregStatus> + std::panic::UnwindSafe) -> EisregStatus {
    match catch_unwind(f) {
        Ok(Ok(())) => EisregStatus::Ok,
        Ok(Err(code)) => code,
        Err(_) => {
            set_error("internal panic");
            EisregStatus::Internal
        }
    }
}

fn to_numerical(e: eisreg::Error) -> EisregStatus {
    set_error(&e.to_string());
    match e {
        eisreg::Error::InvalidInput(_) | eisreg::Error::InvalidConfig(_) => {
            EisregStatus::InvalidInput
        }
        _ => EisregStatus::Numerical,
    }
}

unsafe fn write_complex(v: Cplx, out_re: *mut f64, out_im: *mut f64) -> Result<(), EisregStatus> {
    if out_re.is_null() || out_im.is_null() {
        set_error("null output pointer");
        return Err(EisregStatus::InvalidInput);
    }
    *out_re = v.re;
    *out_im = v.im;
    Ok(())
}

/// Riemann zeta at re + im*i.
///
/// # Safety
/// `out_re` and `out_im` must point to writable doubles.
#[no_mangle]
pub unsafe extern "C" fn eisreg_zeta(
    re: f64,
    im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> EisregStatus {
    wrap(AssertUnwindSafe(|| {
        let v = eisreg::special::zeta(Cplx::new(re, im)).map_err(to_numerical)?;
        write_complex(v, out_re, out_im)
    }))
}

/// Complex Gamma function.
///
/// # Safety
/// `out_re` and `out_im` must point to writable doubles.
#[no_mangle]
pub unsafe extern "C" fn eisreg_gamma(
    re: f64,
    im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> EisregStatus {
    wrap(AssertUnwindSafe(|| {
        let v = eisreg::special::gamma(Cplx::new(re, im)).map_err(to_numerical)?;
        write_complex(v, out_re, out_im)
    }))
}

/// Completed zeta pi^(-s/2) Gamma(s/2) zeta(s).
///
/// # Safety
/// `out_re` and `out_im` must point to writable doubles.
#[no_mangle]
pub unsafe extern "C" fn eisreg_lambda_complete(
    re: f64,
    im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> EisregStatus {
    wrap(AssertUnwindSafe(|| {
        let v = eisreg::special::lambda_complete(Cplx::new(re, im)).map_err(to_numerical)?;
        write_complex(v, out_re, out_im)
    }))
}

/// Modified Bessel function K_nu(y) for y > 0 (underflows to 0 silently).
///
/// # Safety
/// `out_re` and `out_im` must point to writable doubles.
#[no_mangle]
pub unsafe extern "C" fn eisreg_bessel_k(
    nu_re: f64,
    nu_im: f64,
    y: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> EisregStatus {
    wrap(AssertUnwindSafe(|| {
        let v = eisreg::special::bessel_k(Cplx::new(nu_re, nu_im), y).map_err(to_numerical)?;
        write_complex(v, out_re, out_im)
    }))
}

/// Volume of the quotient (pi/3 over the rationals).
///
/// # Safety
/// `out` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn eisreg_volume(out: *mut f64) -> EisregStatus {
    wrap(AssertUnwindSafe(|| {
        if out.is_null() {
            set_error("null output pointer");
            return Err(EisregStatus::InvalidInput);
        }
        let (v, _) = eisreg::scalars::volume_pgl2().map_err(to_numerical)?;
        *out = v;
        Ok(())
    }))
}

/// Residue at 0 of Lambda(-2s)/Lambda(2+2s) (3/pi over the rationals).
///
/// # Safety
/// `out` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn eisreg_lambda_residue(out: *mut f64) -> EisregStatus {
    wrap(AssertUnwindSafe(|| {
        if out.is_null() {
            set_error("null output pointer");
            return Err(EisregStatus::InvalidInput);
        }
        let jet = eisreg::scalars::lambda_jet(0).map_err(to_numerical)?;
        *out = jet.residue().re;
        Ok(())
    }))
}

/// Opaque Eisenstein-series evaluator (a frozen spectral parameter,
/// derivative order and variant).
pub struct EisregEvaluator {
    inner: Evaluator,
}

/// Create an evaluator; returns null on failure (see `eisreg_last_error`).
#[no_mangle]
pub extern "C" fn eisreg_evaluator_new(
    s_re: f64,
    s_im: f64,
    deriv: usize,
    variant: EisregVariant,
) -> *mut EisregEvaluator {
    let variant = match variant {
        EisregVariant::Plain => Variant::Plain,
        EisregVariant::Star => Variant::Star,
        EisregVariant::Regularized => Variant::Regularized,
    };
    let spec = EisSpec {
        s0: Cplx::new(s_re, s_im),
        deriv,
        variant,
        fourier_terms: 0,
    };
    match catch_unwind(|| Evaluator::new(spec)) {
        Ok(Ok(inner)) => Box::into_raw(Box::new(EisregEvaluator { inner })),
        Ok(Err(e)) => {
            set_error(&e.to_string());
            std::ptr::null_mut()
        }
        Err(_) => {
            set_error("internal panic");
            std::ptr::null_mut()
        }
    }
}

/// Evaluate at x + iy (y > 0; the point is reduced internally).
///
/// # Safety
/// `handle` must come from `eisreg_evaluator_new` and not have been freed;
/// `out_re`, `out_im` must point to writable doubles.
#[no_mangle]
pub unsafe extern "C" fn eisreg_evaluator_eval(
    handle: *const EisregEvaluator,
    x: f64,
    y: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> EisregStatus {
    wrap(AssertUnwindSafe(|| {
        let Some(ev) = handle.as_ref() else {
            set_error("null handle");
            return Err(EisregStatus::InvalidInput);
        };
        let p = Point::new(x, y).map_err(to_numerical)?;
        let v = ev.inner.eval(p).map_err(to_numerical)?;
        write_complex(v, out_re, out_im)
    }))
}

/// Release an evaluator.
///
/// # Safety
/// `handle` must come from `eisreg_evaluator_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn eisreg_evaluator_free(handle: *mut EisregEvaluator) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Opaque regularized-integral engine.
pub struct EisregEngine {
    inner: Engine,
}

/// Create an engine with the default quadrature; null on failure.
#[no_mangle]
pub extern "C" fn eisreg_engine_new() -> *mut EisregEngine {
    match catch_unwind(Engine::with_defaults) {
        Ok(Ok(inner)) => Box::into_raw(Box::new(EisregEngine { inner })),
        Ok(Err(e)) => {
            set_error(&e.to_string());
            std::ptr::null_mut()
        }
        Err(_) => {
            set_error("internal panic");
            std::ptr::null_mut()
        }
    }
}

/// Regularized integral of a named built-in test function
/// ("one", "eisprod", "cusp", "ereg", "eprime2"). Outputs the principal and
/// degenerate parts and their sum, as re/im pairs.
///
/// # Safety
/// `handle` must come from `eisreg_engine_new`; `phi_name` must be a valid
/// NUL-terminated string; the six output pointers must be writable doubles.
#[no_mangle]
pub unsafe extern "C" fn eisreg_engine_reg_integral(
    handle: *const EisregEngine,
    phi_name: *const c_char,
    out_principal_re: *mut f64,
    out_principal_im: *mut f64,
    out_degenerate_re: *mut f64,
    out_degenerate_im: *mut f64,
    out_value_re: *mut f64,
    out_value_im: *mut f64,
) -> EisregStatus {
    wrap(AssertUnwindSafe(|| {
        let Some(engine) = handle.as_ref() else {
            set_error("null handle");
            return Err(EisregStatus::InvalidInput);
        };
        if phi_name.is_null() {
            set_error("null phi name");
            return Err(EisregStatus::InvalidInput);
        }
        let name = CStr::from_ptr(phi_name).to_str().map_err(|_| {
            set_error("phi name is not valid UTF-8");
            EisregStatus::InvalidInput
        })?;
        let phi = phi_by_name(name).map_err(to_numerical)?;
        let reg = engine.inner.reg_integral(&phi).map_err(to_numerical)?;
        write_complex(reg.principal, out_principal_re, out_principal_im)?;
        write_complex(reg.degenerate, out_degenerate_re, out_degenerate_im)?;
        write_complex(reg.value, out_value_re, out_value_im)
    }))
}

/// Release an engine.
///
/// # Safety
/// `handle` must come from `eisreg_engine_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn eisreg_engine_free(handle: *mut EisregEngine) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Unipotent normal form of an r x r unimodular matrix against the level-N
/// congruence subgroup. `entries` is row-major with r*r values; the two
/// output buffers receive the lower and upper unipotent factors (entries fit
/// in [-N/2, N/2]). `lower_flavor` selects the mirror subgroup, which swaps
/// the factor order to upper-then-lower.
///
/// # Safety
/// `entries`, `out_n_minus`, `out_n_plus` must point to r*r readable resp.
/// writable 64-bit integers.
#[no_mangle]
pub unsafe extern "C" fn eisreg_coset_normal_form(
    r: usize,
    n: u64,
    entries: *const i64,
    lower_flavor: bool,
    out_n_minus: *mut i64,
    out_n_plus: *mut i64,
) -> EisregStatus {
    wrap(AssertUnwindSafe(|| {
        if entries.is_null() || out_n_minus.is_null() || out_n_plus.is_null() {
            set_error("null pointer");
            return Err(EisregStatus::InvalidInput);
        }
        if r == 0 || r > 8 {
            set_error("rank must be between 1 and 8");
            return Err(EisregStatus::InvalidInput);
        }
        let raw = std::slice::from_raw_parts(entries, r * r);
        let rows: Vec<Vec<i64>> = raw.chunks(r).map(|c| c.to_vec()).collect();
        let mat = eisreg::coset::IntMat::from_i64(&rows);
        let flavor = if lower_flavor {
            eisreg::coset::Flavor::Gamma0Minus
        } else {
            eisreg::coset::Flavor::Gamma0
        };
        let rep = eisreg::coset::decompose(&mat, n, flavor).map_err(to_numerical)?;
        for (dst, src) in [(out_n_minus, &rep.n_minus), (out_n_plus, &rep.n_plus)] {
            for i in 0..r {
                for j in 0..r {
                    let v = i64::try_from(src.rows[i][j].clone()).map_err(|_| {
                        set_error("normal-form entry exceeds 64 bits");
                        EisregStatus::Numerical
                    })?;
                    *dst.add(i * r + j) = v;
                }
            }
        }
        Ok(())
    }))
}
