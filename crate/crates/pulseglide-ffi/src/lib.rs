//! C ABI for the pulse-and-glide analysis library.
//!
//! The vehicle and engine parameters live behind an opaque `PgModel` handle;
//! every entry point takes the handle plus plain scalars or caller-owned
//! buffers and reports a `PgStatus`. Nothing panics across the boundary and
//! no allocation is shared: the caller frees models with `pg_model_free` and
//! owns all buffers it passes in.

use std::ffi::{c_char, c_int, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use pulseglide::error::Error;
use pulseglide::linear::{self, ModeClass};
use pulseglide::pmp::Weights;
use pulseglide::trajopt::{self, DecisionVector, FourierInput};
use pulseglide::vehicle::{self, BsfcParams, State, VehicleParams};

/// Result of a C-ABI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgStatus {
    /// Success.
    PgOk = 0,
    /// A required pointer argument was null.
    PgNullPointer = 1,
    /// An argument was outside its domain.
    PgInvalidArgument = 2,
    /// A string argument was not valid UTF-8 or not valid JSON.
    PgBadInput = 3,
    /// The requested critical point does not exist in the search window.
    PgNotPngCapable = 4,
    /// Integration or root finding failed numerically.
    PgNumericalFailure = 5,
}

fn status_of(e: &Error) -> PgStatus {
    match e {
        Error::Domain { .. } | Error::TooFewSamples { .. } | Error::BadInitialPoint { .. } => {
            PgStatus::PgInvalidArgument
        }
        Error::Config(_) => PgStatus::PgBadInput,
        Error::NotPngCapable { .. } | Error::NoCapabilityBracket { .. } => {
            PgStatus::PgNotPngCapable
        }
        Error::NonFinite { .. } | Error::OddPolyTerms { .. } | Error::EmptyData { .. } => {
            PgStatus::PgNumericalFailure
        }
        Error::Io(_) => PgStatus::PgBadInput,
    }
}

/// Opaque parameter set: vehicle plus fuel map.
pub struct PgModel {
    vehicle: VehicleParams,
    bsfc: BsfcParams,
}

/// Steady cruise equilibrium.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PgEquilibrium {
    /// Cruise speed (m/s).
    pub speed_mps: f64,
    /// Traction force balancing drag and rolling resistance (N).
    pub force_n: f64,
    /// Velocity costate at the equilibrium (g/m).
    pub lambda1: f64,
    /// Speed weight making this speed stationary (g/m).
    pub weight_c_g_per_m: f64,
    /// Time-averaged cost of steady cruising (g/s).
    pub steady_cost_g_per_s: f64,
}

/// Critical input weight at one speed.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PgCritical {
    /// Cruise speed (m/s).
    pub speed_mps: f64,
    /// Largest input weight with an oscillatory linearization (g s/N^2).
    pub r_crit: f64,
    /// Mode frequency at the critical weight (rad/s).
    pub omega_rad_s: f64,
    /// Cycle period at the critical weight (s).
    pub period_s: f64,
}

/// One-period evaluation of a Fourier decision.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PgEvaluation {
    /// Time-averaged total cost (g/s).
    pub total_g_per_s: f64,
    /// Time-averaged fuel rate (g/s).
    pub fuel_g_per_s: f64,
    /// Speed reward term (g/s).
    pub speed_g_per_s: f64,
    /// Input effort term (g/s).
    pub input_g_per_s: f64,
    /// Velocity gap over the period (m/s).
    pub r_x1_mps: f64,
    /// Force gap over the period (N).
    pub r_x2_n: f64,
    /// Smallest force sample (N).
    pub min_x2_n: f64,
}

/// Run a closure, mapping panics to a numerical-failure status so unwinding
/// never crosses the ABI.
fn guarded(f: impl FnOnce() -> PgStatus) -> PgStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(PgStatus::PgNumericalFailure)
}

unsafe fn model_ref<'a>(model: *const PgModel) -> Option<&'a PgModel> {
    unsafe { model.as_ref() }
}

/// Create a model with the built-in passenger-car defaults. Never fails.
/// Free with `pg_model_free`.
#[no_mangle]
pub extern "C" fn pg_model_new_default() -> *mut PgModel {
    Box::into_raw(Box::new(PgModel {
        vehicle: VehicleParams::default(),
        bsfc: BsfcParams::default(),
    }))
}

/// Create a model from a JSON parameter document (same schema as the CLI's
/// --config file). On success writes the handle to `out`.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pg_model_new_from_json(
    json: *const c_char,
    out: *mut *mut PgModel,
) -> PgStatus {
    if json.is_null() || out.is_null() {
        return PgStatus::PgNullPointer;
    }
    guarded(|| {
        let text = match unsafe { CStr::from_ptr(json) }.to_str() {
            Ok(t) => t,
            Err(_) => return PgStatus::PgBadInput,
        };
        match pulseglide::config::load_params(text) {
            Ok((vehicle, bsfc)) => {
                unsafe { *out = Box::into_raw(Box::new(PgModel { vehicle, bsfc })) };
                PgStatus::PgOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Destroy a model created by the constructors. Null is a no-op.
///
/// # Safety
/// `model` must be null or a pointer returned by a constructor, not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn pg_model_free(model: *mut PgModel) {
    if !model.is_null() {
        drop(unsafe { Box::from_raw(model) });
    }
}

/// Steady cruise equilibrium at `speed_mps`.
///
/// # Safety
/// `model` must be a live model handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pg_equilibrium(
    model: *const PgModel,
    speed_mps: f64,
    out: *mut PgEquilibrium,
) -> PgStatus {
    let Some(m) = (unsafe { model_ref(model) }) else {
        return PgStatus::PgNullPointer;
    };
    if out.is_null() {
        return PgStatus::PgNullPointer;
    }
    if !(speed_mps > 0.0) {
        return PgStatus::PgInvalidArgument;
    }
    guarded(|| {
        let eq = vehicle::equilibrium_for_speed(speed_mps, &m.vehicle, &m.bsfc);
        unsafe {
            *out = PgEquilibrium {
                speed_mps: eq.v,
                force_n: eq.force,
                lambda1: eq.lambda1,
                weight_c_g_per_m: eq.weight_c,
                steady_cost_g_per_s: vehicle::steady_cost(
                    speed_mps,
                    eq.weight_c,
                    &m.vehicle,
                    &m.bsfc,
                ),
            };
        }
        PgStatus::PgOk
    })
}

/// Eigenvalues of the linearized optimality system at (`speed_mps`, `r`).
/// Writes four real and four imaginary parts (largest imaginary part first)
/// and the mode class: 0 oscillatory, 1 unstable, 2 degenerate.
///
/// # Safety
/// `model` must be a live handle; `re_out` and `im_out` must point to at
/// least four f64 each; `class_out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pg_linear_modes(
    model: *const PgModel,
    speed_mps: f64,
    r: f64,
    re_out: *mut f64,
    im_out: *mut f64,
    class_out: *mut c_int,
) -> PgStatus {
    let Some(m) = (unsafe { model_ref(model) }) else {
        return PgStatus::PgNullPointer;
    };
    if re_out.is_null() || im_out.is_null() || class_out.is_null() {
        return PgStatus::PgNullPointer;
    }
    if !(speed_mps > 0.0) || !(r > 0.0) {
        return PgStatus::PgInvalidArgument;
    }
    guarded(|| {
        let grid = [r];
        match linear::root_locus(speed_mps, &grid, &m.vehicle, &m.bsfc) {
            Ok(points) => {
                let p = &points[0];
                let mut eigs = p.eigenvalues.s;
                eigs.sort_by(|a, b| b.im.total_cmp(&a.im).then(b.re.total_cmp(&a.re)));
                for (i, e) in eigs.iter().enumerate() {
                    unsafe {
                        *re_out.add(i) = e.re;
                        *im_out.add(i) = e.im;
                    }
                }
                let class = match p.mode {
                    ModeClass::Oscillatory => 0,
                    ModeClass::Unstable => 1,
                    ModeClass::Degenerate => 2,
                };
                unsafe { *class_out = class };
                PgStatus::PgOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Critical input weight at `speed_mps` over the default search window.
///
/// # Safety
/// `model` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pg_find_r_crit(
    model: *const PgModel,
    speed_mps: f64,
    out: *mut PgCritical,
) -> PgStatus {
    let Some(m) = (unsafe { model_ref(model) }) else {
        return PgStatus::PgNullPointer;
    };
    if out.is_null() {
        return PgStatus::PgNullPointer;
    }
    guarded(|| match linear::find_r_crit(speed_mps, &m.vehicle, &m.bsfc) {
        Ok(c) => {
            unsafe {
                *out = PgCritical {
                    speed_mps: c.v,
                    r_crit: c.r_crit,
                    omega_rad_s: c.omega_at_crit,
                    period_s: c.period_at_crit,
                };
            }
            PgStatus::PgOk
        }
        Err(e) => status_of(&e),
    })
}

/// Speed above which no input weight gives an oscillatory linearization.
///
/// # Safety
/// `model` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pg_find_v_crit(model: *const PgModel, out: *mut f64) -> PgStatus {
    let Some(m) = (unsafe { model_ref(model) }) else {
        return PgStatus::PgNullPointer;
    };
    if out.is_null() {
        return PgStatus::PgNullPointer;
    }
    guarded(|| match linear::find_v_crit(&m.vehicle, &m.bsfc) {
        Ok(v) => {
            unsafe { *out = v };
            PgStatus::PgOk
        }
        Err(e) => status_of(&e),
    })
}

/// # Safety
/// `a` and `b` must point to `harmonics` readable f64 each when non-null.
unsafe fn decision_from_raw(
    x1_0: f64,
    x2_0: f64,
    omega: f64,
    a: *const f64,
    b: *const f64,
    harmonics: usize,
) -> Result<DecisionVector, PgStatus> {
    if a.is_null() || b.is_null() {
        return Err(PgStatus::PgNullPointer);
    }
    if harmonics == 0 {
        return Err(PgStatus::PgInvalidArgument);
    }
    let a = unsafe { std::slice::from_raw_parts(a, harmonics) }.to_vec();
    let b = unsafe { std::slice::from_raw_parts(b, harmonics) }.to_vec();
    Ok(DecisionVector { x1_0, x2_0, input: FourierInput { omega, a, b } })
}

/// Integrate one period of the dynamics under a Fourier input and fill the
/// caller's buffers with `steps + 1` samples of time, velocity, and force.
/// Any output pointer may be null to skip that series.
///
/// # Safety
/// `model` must be a live handle; `a` and `b` must point to `harmonics`
/// coefficients each; non-null output buffers must hold `steps + 1` f64.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn pg_simulate(
    model: *const PgModel,
    x1_0: f64,
    x2_0: f64,
    omega: f64,
    a: *const f64,
    b: *const f64,
    harmonics: usize,
    steps: usize,
    t_out: *mut f64,
    x1_out: *mut f64,
    x2_out: *mut f64,
) -> PgStatus {
    let Some(m) = (unsafe { model_ref(model) }) else {
        return PgStatus::PgNullPointer;
    };
    let d = match unsafe { decision_from_raw(x1_0, x2_0, omega, a, b, harmonics) } {
        Ok(d) => d,
        Err(status) => return status,
    };
    guarded(|| {
        let w = Weights { speed_weight: 0.0, jerk_weight: 0.0 };
        match trajopt::evaluate(&d, &w, &m.vehicle, &m.bsfc, steps) {
            Ok(ev) => {
                for (i, (t, row)) in ev.trajectory.t.iter().zip(&ev.trajectory.rows).enumerate()
                {
                    unsafe {
                        if !t_out.is_null() {
                            *t_out.add(i) = *t;
                        }
                        if !x1_out.is_null() {
                            *x1_out.add(i) = row[0];
                        }
                        if !x2_out.is_null() {
                            *x2_out.add(i) = row[1];
                        }
                    }
                }
                PgStatus::PgOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Evaluate the time-averaged cost and periodicity gaps of a Fourier
/// decision under speed weight `c` and input weight `r`.
///
/// # Safety
/// `model` must be a live handle; `a` and `b` must point to `harmonics`
/// coefficients each; `out` must be a valid pointer.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn pg_evaluate(
    model: *const PgModel,
    x1_0: f64,
    x2_0: f64,
    omega: f64,
    a: *const f64,
    b: *const f64,
    harmonics: usize,
    c: f64,
    r: f64,
    steps: usize,
    out: *mut PgEvaluation,
) -> PgStatus {
    let Some(m) = (unsafe { model_ref(model) }) else {
        return PgStatus::PgNullPointer;
    };
    if out.is_null() {
        return PgStatus::PgNullPointer;
    }
    let d = match unsafe { decision_from_raw(x1_0, x2_0, omega, a, b, harmonics) } {
        Ok(d) => d,
        Err(status) => return status,
    };
    guarded(|| {
        let w = Weights { speed_weight: c, jerk_weight: r };
        match trajopt::evaluate(&d, &w, &m.vehicle, &m.bsfc, steps) {
            Ok(ev) => {
                unsafe {
                    *out = PgEvaluation {
                        total_g_per_s: ev.j_total,
                        fuel_g_per_s: ev.fuel_term,
                        speed_g_per_s: ev.speed_term,
                        input_g_per_s: ev.jerk_term,
                        r_x1_mps: ev.r_x1,
                        r_x2_n: ev.r_x2,
                        min_x2_n: ev.min_x2,
                    };
                }
                PgStatus::PgOk
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Instantaneous fuel rate (g/s) at a velocity and force sample.
///
/// # Safety
/// `model` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pg_fuel_rate(
    model: *const PgModel,
    x1_mps: f64,
    x2_n: f64,
    out: *mut f64,
) -> PgStatus {
    let Some(m) = (unsafe { model_ref(model) }) else {
        return PgStatus::PgNullPointer;
    };
    if out.is_null() {
        return PgStatus::PgNullPointer;
    }
    let p = vehicle::power(State::new(x1_mps, x2_n));
    unsafe { *out = vehicle::fuel_rate(p, &m.bsfc) };
    PgStatus::PgOk
}

/// Static description of a status code. Never null.
#[no_mangle]
pub extern "C" fn pg_status_message(status: PgStatus) -> *const c_char {
    let msg: &'static [u8] = match status {
        PgStatus::PgOk => b"ok\0",
        PgStatus::PgNullPointer => b"a required pointer was null\0",
        PgStatus::PgInvalidArgument => b"an argument was outside its domain\0",
        PgStatus::PgBadInput => b"input string was not valid UTF-8/JSON\0",
        PgStatus::PgNotPngCapable => b"no critical point exists in the search window\0",
        PgStatus::PgNumericalFailure => b"integration or root finding failed\0",
    };
    msg.as_ptr().cast()
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
