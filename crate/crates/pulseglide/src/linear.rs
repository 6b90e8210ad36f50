//! Linearized analysis of the combined state/co-state flow about cruise
//! equilibria: the 4x4 system matrix, its characteristic polynomial, the
//! eigenvalue spectrum and its classification, root-locus sweeps over the
//! jerk penalty, and the critical penalty / critical speed searches.
//!
//! The flow's Hamiltonian structure forces the spectrum to be symmetric under
//! s <-> -s, so the characteristic polynomial is even: s^4 + b s^2 + c. Purely
//! imaginary spectra mark speeds and penalties where a periodic
//! pulse-and-glide pattern is locally optimal; any root off the imaginary
//! axis comes with an unstable mirror partner.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quartic;
use crate::vehicle::{self, BsfcParams, State, VehicleParams};

/// System matrix of the linearized augmented flow, rows and columns ordered
/// (x1, x2, lambda1, lambda2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jacobian4(pub [[f64; 4]; 4]);

/// Characteristic polynomial s^4 + b s^2 + c of a Hamiltonian-structured
/// 4x4 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvenQuartic {
    /// Coefficient of s^2.
    pub b: f64,
    /// Constant term.
    pub c: f64,
}

impl EvenQuartic {
    /// b^2 - 4c, the discriminant of the quadratic in z = s^2. Oscillatory
    /// spectra require b > 0, c > 0 and a non-negative discriminant.
    pub fn discriminant(&self) -> f64 {
        self.b * self.b - 4.0 * self.c
    }
}

/// The four eigenvalues (1/s) of a linearization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSet {
    pub s: [Complex64; 4],
}

impl EigenSet {
    /// Largest eigenvalue magnitude.
    pub fn max_magnitude(&self) -> f64 {
        self.s.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Distinct oscillation frequencies |Im s| of a purely imaginary
    /// spectrum, ascending.
    pub fn frequencies(&self) -> Vec<f64> {
        let mut freqs: Vec<f64> = self.s.iter().map(|z| z.im.abs()).collect();
        freqs.sort_by(f64::total_cmp);
        freqs.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * a.max(*b).max(1e-300));
        freqs
    }
}

/// Qualitative mode class of an eigenvalue set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeClass {
    /// All eigenvalues purely imaginary and nonzero: a locally optimal
    /// periodic (pulse-and-glide) pattern exists.
    Oscillatory,
    /// At least one eigenvalue has positive real part.
    Unstable,
    /// Zero or repeated eigenvalues at tolerance; no clean classification.
    Degenerate,
}

impl fmt::Display for ModeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ModeClass::Oscillatory => "Oscillatory",
            ModeClass::Unstable => "Unstable",
            ModeClass::Degenerate => "Degenerate",
        };
        f.write_str(name)
    }
}

/// Eigenvalues and class at one (v, R) sample of a root-locus sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocusPoint {
    pub r_value: f64,
    pub eigenvalues: EigenSet,
    pub mode: ModeClass,
}

/// Critical jerk penalty at one speed: the largest R whose linearization is
/// oscillatory, with the repeated-mode frequency and period there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalResult {
    pub v: f64,
    pub r_crit: f64,
    pub omega_at_crit: f64,
    pub period_at_crit: f64,
}

/// Default absolute floor / relative scale for classification tolerance.
pub const DEFAULT_SCALE_TOL: f64 = 1e-7;

/// Default R search window for the critical-penalty bisection.
pub const DEFAULT_R_WINDOW: (f64, f64) = (1e-8, 1e2);

/// System matrix of the linearized flow at the cruise equilibrium for
/// speed `v` under jerk penalty `r`.
pub fn jacobian(v: f64, r: f64, p: &VehicleParams, b: &BsfcParams) -> Jacobian4 {
    let eq = vehicle::equilibrium_for_speed(v, p, b);
    let fp = vehicle::fuel_partials(State::new(eq.v, eq.force), b);
    let m = p.mass;
    let a = p.drag_area() * v / m;
    Jacobian4([
        [-a, 1.0 / m, 0.0, 0.0],
        [0.0, 0.0, 0.0, -1.0 / r],
        [-fp.h11 + eq.lambda1 * p.drag_area() / m, -fp.h12, a, 0.0],
        [-fp.h12, -fp.h22, -1.0 / m, 0.0],
    ])
}

/// Full characteristic coefficients [1, c3, c2, c1, c0] of det(sI - A) by
/// the Faddeev-LeVerrier recursion.
pub fn characteristic_coefficients(j: &Jacobian4) -> [f64; 5] {
    let a = &j.0;
    let mut m = *a;
    let mut coeffs = [1.0, 0.0, 0.0, 0.0, 0.0];
    coeffs[1] = -trace(&m);
    for k in 2..=4 {
        let mut shifted = m;
        for i in 0..4 {
            shifted[i][i] += coeffs[k - 1];
        }
        m = matmul(a, &shifted);
        coeffs[k] = -trace(&m) / k as f64;
    }
    coeffs
}

fn trace(m: &[[f64; 4]; 4]) -> f64 {
    m[0][0] + m[1][1] + m[2][2] + m[3][3]
}

fn matmul(a: &[[f64; 4]; 4], b: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = 0.0;
            for k in 0..4 {
                acc += a[i][k] * b[k][j];
            }
            out[i][j] = acc;
        }
    }
    out
}

/// Even characteristic polynomial of a Hamiltonian-structured matrix.
///
/// Computes all five coefficients and requires the odd-power ones to vanish
/// (relative to the largest coefficient); a violation signals a matrix
/// without the expected symmetry rather than a numerical issue.
pub fn char_poly(j: &Jacobian4) -> Result<EvenQuartic> {
    let coeffs = characteristic_coefficients(j);
    let scale = coeffs.iter().map(|c| c.abs()).fold(0.0, f64::max);
    let odd = coeffs[1].abs().max(coeffs[3].abs());
    if odd >= 1e-9 * scale {
        return Err(Error::OddPolyTerms { rel: odd / scale });
    }
    Ok(EvenQuartic { b: coeffs[2], c: coeffs[4] })
}

/// The characteristic polynomial evaluated from the closed-form coefficient
/// expressions `b = a^2 - h22/R` and
/// `c = (h11 + (rho*C_d*A_f*v)^2 * h22 + d2*rho*C_d*A_f) / (R*M^2)` with
/// `a = rho*C_d*A_f*v/M`.
///
/// Kept solely as a documented cross-check: its b term disagrees in sign
/// with the matrix route (which yields -a^2), and its c term lacks a mixed
/// second-derivative contribution, so its R -> infinity limit predicts
/// oscillation where the matrix route (and the observed dynamics) give
/// instability. See `char_poly` for the authoritative computation.
pub fn char_poly_printed(v: f64, r: f64, p: &VehicleParams, b: &BsfcParams) -> EvenQuartic {
    let eq = vehicle::equilibrium_for_speed(v, p, b);
    let fp = vehicle::fuel_partials(State::new(eq.v, eq.force), b);
    let m = p.mass;
    let rho_cd_af_v = p.drag_area() * v;
    EvenQuartic {
        b: (rho_cd_af_v / m).powi(2) - fp.h22 / r,
        c: (fp.h11 + rho_cd_af_v * rho_cd_af_v * fp.h22 + fp.d2 * p.drag_area()) / (r * m * m),
    }
}

/// Eigenvalues of an even quartic via the z = s^2 substitution.
pub fn eigenvalues(q: &EvenQuartic) -> EigenSet {
    EigenSet { s: quartic::solve_even(q.b, q.c) }
}

/// Classify a spectrum with the default tolerance.
pub fn classify(e: &EigenSet) -> ModeClass {
    classify_with_tol(e, DEFAULT_SCALE_TOL)
}

/// Classify a spectrum: Oscillatory when every root sits on the imaginary
/// axis (real part below tolerance) away from the origin; Unstable when any
/// root has a positive real part beyond tolerance; Degenerate otherwise.
///
/// The real-part tolerance scales with the largest magnitude (floored at 1)
/// since frequencies span several decades across sweeps; the nonzero check
/// uses `scale_tol` as an absolute floor.
pub fn classify_with_tol(e: &EigenSet, scale_tol: f64) -> ModeClass {
    let tol = scale_tol * e.max_magnitude().max(1.0);
    let oscillatory = e
        .s
        .iter()
        .all(|z| z.re.abs() < tol && z.norm() > scale_tol);
    if oscillatory {
        return ModeClass::Oscillatory;
    }
    if e.s.iter().any(|z| z.re > tol) {
        return ModeClass::Unstable;
    }
    ModeClass::Degenerate
}

/// Logarithmically spaced grid of `n` points over [lo, hi].
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (llo, lhi) = (lo.log10(), hi.log10());
    (0..n)
        .map(|i| 10f64.powf(llo + (lhi - llo) * i as f64 / (n - 1) as f64))
        .collect()
}

/// Eigenvalues and classification at each R of an ascending grid.
pub fn root_locus(
    v: f64,
    r_grid: &[f64],
    p: &VehicleParams,
    b: &BsfcParams,
) -> Result<Vec<LocusPoint>> {
    r_grid
        .iter()
        .map(|&r| {
            let q = char_poly(&jacobian(v, r, p, b))?;
            let e = eigenvalues(&q);
            Ok(LocusPoint { r_value: r, eigenvalues: e, mode: classify(&e) })
        })
        .collect()
}

/// Shape of the Oscillatory region along an ascending R grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransitionStructure {
    AllOscillatory,
    NoneOscillatory,
    /// Index of the first non-oscillatory point; everything before it is
    /// oscillatory and nothing after it is.
    Single(usize),
    /// Oscillatory points reappear after the first transition.
    ReEntrant,
}

/// Locate the oscillatory-to-non-oscillatory transition along a locus.
///
/// A re-entrant band is reported as such, never silently treated as a
/// single threshold.
pub fn transition_structure(points: &[LocusPoint]) -> TransitionStructure {
    let first_non = points.iter().position(|pt| pt.mode != ModeClass::Oscillatory);
    match first_non {
        None => TransitionStructure::AllOscillatory,
        Some(0) => {
            if points.iter().all(|pt| pt.mode != ModeClass::Oscillatory) {
                TransitionStructure::NoneOscillatory
            } else {
                TransitionStructure::ReEntrant
            }
        }
        Some(idx) => {
            if points[idx..].iter().all(|pt| pt.mode != ModeClass::Oscillatory) {
                TransitionStructure::Single(idx)
            } else {
                TransitionStructure::ReEntrant
            }
        }
    }
}

fn is_oscillatory(v: f64, r: f64, p: &VehicleParams, b: &BsfcParams) -> Result<bool> {
    let q = char_poly(&jacobian(v, r, p, b))?;
    Ok(classify(&eigenvalues(&q)) == ModeClass::Oscillatory)
}

/// Critical jerk penalty at speed `v`, searched over the default R window.
pub fn find_r_crit(v: f64, p: &VehicleParams, b: &BsfcParams) -> Result<CriticalResult> {
    find_r_crit_in(v, DEFAULT_R_WINDOW.0, DEFAULT_R_WINDOW.1, p, b)
}

/// Critical jerk penalty at speed `v` by bisection of the classification
/// boundary over [r_lo, r_hi].
///
/// Requires an oscillatory linearization at r_lo and a non-oscillatory one
/// at r_hi; otherwise the speed is reported as not PnG-capable. 60 geometric
/// bisection steps pin the boundary to machine precision, so at the returned
/// penalty the repeated-mode structure holds: the discriminant b^2 - 4c is
/// zero to rounding and the mode frequency is sqrt(b/2).
pub fn find_r_crit_in(
    v: f64,
    r_lo: f64,
    r_hi: f64,
    p: &VehicleParams,
    b: &BsfcParams,
) -> Result<CriticalResult> {
    if v <= 0.0 {
        return Err(Error::Domain { name: "v", value: v });
    }
    if r_lo <= 0.0 || r_hi <= r_lo {
        return Err(Error::Domain { name: "r_lo/r_hi", value: r_lo });
    }
    if !is_oscillatory(v, r_lo, p, b)? || is_oscillatory(v, r_hi, p, b)? {
        return Err(Error::NotPngCapable { v, r_lo, r_hi });
    }
    let (mut lo, mut hi) = (r_lo, r_hi);
    for _ in 0..60 {
        let mid = (lo * hi).sqrt();
        if is_oscillatory(v, mid, p, b)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Report the oscillatory side of the (machine-width) bracket.
    let q = char_poly(&jacobian(v, lo, p, b))?;
    let omega = (q.b / 2.0).sqrt();
    Ok(CriticalResult {
        v,
        r_crit: lo,
        omega_at_crit: omega,
        period_at_crit: 2.0 * std::f64::consts::PI / omega,
    })
}

/// Critical speed over the default bracket [2, 40] m/s: the speed above
/// which no jerk penalty yields an oscillatory linearization.
pub fn find_v_crit(p: &VehicleParams, b: &BsfcParams) -> Result<f64> {
    find_v_crit_in(2.0, 40.0, 1e-3, p, b)
}

/// Critical speed by bisection of the PnG-capability predicate.
pub fn find_v_crit_in(
    v_lo: f64,
    v_hi: f64,
    tol: f64,
    p: &VehicleParams,
    b: &BsfcParams,
) -> Result<f64> {
    if tol <= 0.0 {
        return Err(Error::Domain { name: "tol", value: tol });
    }
    let capable = |v: f64| find_r_crit(v, p, b).is_ok();
    if !capable(v_lo) || capable(v_hi) {
        return Err(Error::NoCapabilityBracket { v_lo, v_hi });
    }
    let (mut lo, mut hi) = (v_lo, v_hi);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if capable(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Critical penalty per speed; per-speed failures (speeds beyond the
/// critical speed) are kept in place so sweeps can render gaps.
pub fn rcrit_sweep(
    v_grid: &[f64],
    p: &VehicleParams,
    b: &BsfcParams,
) -> Vec<(f64, Result<CriticalResult>)> {
    v_grid.iter().map(|&v| (v, find_r_crit(v, p, b))).collect()
}
