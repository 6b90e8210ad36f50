//! Longitudinal vehicle model: point-mass dynamics with aerodynamic drag and
//! rolling friction, a quadratic brake-specific fuel consumption curve, the
//! analytic partial derivatives of the fuel rate, and the equilibrium
//! back-solve that recovers the speed weight making a cruise speed stationary.
//!
//! States are `x1` (velocity, m/s) and `x2` (propulsive force, N); the input
//! `u` is the force rate (N/s), a jerk proxy. Fuel mass is measured in grams
//! throughout, so fuel rates are g/s and the BSFC curve is g/J.

use serde::{Deserialize, Serialize};

/// Physical constants of the vehicle and environment.
///
/// All fields are strictly positive. `drag_area()` bundles the recurring
/// product rho * C_d * A_f.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VehicleParams {
    /// Vehicle mass M (kg).
    pub mass: f64,
    /// Air density rho (kg/m^3).
    pub air_density: f64,
    /// Frontal area A_f (m^2).
    pub frontal_area: f64,
    /// Aerodynamic drag coefficient C_d (dimensionless).
    pub drag_coeff: f64,
    /// Rolling friction coefficient mu (dimensionless).
    pub rolling_friction: f64,
    /// Gravitational acceleration g (m/s^2).
    pub gravity: f64,
}

impl Default for VehicleParams {
    fn default() -> Self {
        Self {
            mass: 1605.0,
            air_density: 1.2,
            frontal_area: 2.0,
            drag_coeff: 0.33,
            rolling_friction: 0.009,
            gravity: 9.81,
        }
    }
}

impl VehicleParams {
    /// rho * C_d * A_f (kg/m), the coefficient of the v^2 drag force term.
    pub fn drag_area(&self) -> f64 {
        self.air_density * self.drag_coeff * self.frontal_area
    }

    /// mu * M * g (N), the constant rolling-resistance force.
    pub fn rolling_force(&self) -> f64 {
        self.rolling_friction * self.mass * self.gravity
    }
}

/// Coefficients of the quadratic BSFC curve
/// `beta(P) = beta0 + (gamma/2) * (P - p0)^2`.
///
/// `beta0` is the minimum (vertex) value, attained at engine power `p0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BsfcParams {
    /// Minimum specific consumption beta0 (g/J).
    pub beta0: f64,
    /// Curvature gamma (g/(J*W^2)).
    pub gamma: f64,
    /// Power of peak efficiency P0 (W).
    pub p0: f64,
}

impl Default for BsfcParams {
    fn default() -> Self {
        Self {
            beta0: 6.5e-5,
            gamma: 1.1e-13,
            p0: 30_000.0,
        }
    }
}

/// Kinematic state: velocity and propulsive force.
///
/// The model is valid for `x1 > 0`; nothing clamps out-of-domain states, so
/// integrators and optimizers are responsible for staying inside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    /// Velocity x1 (m/s).
    pub x1: f64,
    /// Propulsive force x2 (N).
    pub x2: f64,
}

impl State {
    pub fn new(x1: f64, x2: f64) -> Self {
        Self { x1, x2 }
    }
}

/// First and second partial derivatives of the fuel rate with respect to the
/// state, in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FuelPartials {
    /// d(mdot_f)/dx1 (g/s per m/s).
    pub d1: f64,
    /// d(mdot_f)/dx2 (g/s per N).
    pub d2: f64,
    /// d2(mdot_f)/dx1^2.
    pub h11: f64,
    /// d2(mdot_f)/dx1 dx2.
    pub h12: f64,
    /// d2(mdot_f)/dx2^2.
    pub h22: f64,
}

/// A stationary point of the combined state/co-state flow, together with the
/// speed weight that makes it stationary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Equilibrium {
    /// Cruise speed x1_0 (m/s).
    pub v: f64,
    /// Force balancing drag and rolling resistance at `v` (N).
    pub force: f64,
    /// Velocity co-state lambda1_0.
    pub lambda1: f64,
    /// Force co-state lambda2_0; identically zero at equilibrium.
    pub lambda2: f64,
    /// Speed weight C (g/m) under which `v` is a stationary cruise speed.
    pub weight_c: f64,
}

/// Engine power P = x1 * x2 (W).
pub fn power(s: State) -> f64 {
    s.x1 * s.x2
}

/// Specific fuel consumption beta(P) (g/J), quadratic in power.
pub fn bsfc(p: f64, b: &BsfcParams) -> f64 {
    b.beta0 + 0.5 * b.gamma * (p - b.p0) * (p - b.p0)
}

/// Fuel mass flow mdot_f = P * beta(P) (g/s).
pub fn fuel_rate(p: f64, b: &BsfcParams) -> f64 {
    p * bsfc(p, b)
}

/// d(mdot_f)/dP, the cubic's derivative in closed form.
fn fuel_rate_dp(p: f64, b: &BsfcParams) -> f64 {
    bsfc(p, b) + b.gamma * p * (p - b.p0)
}

/// d2(mdot_f)/dP^2; vanishes at P = 2*p0/3, where the fuel rate changes
/// convexity.
fn fuel_rate_dpp(p: f64, b: &BsfcParams) -> f64 {
    b.gamma * (3.0 * p - 2.0 * b.p0)
}

/// Analytic fuel-rate partials at a state, via the chain rule through
/// P = x1 * x2.
pub fn fuel_partials(s: State, b: &BsfcParams) -> FuelPartials {
    let p = power(s);
    let dp = fuel_rate_dp(p, b);
    let dpp = fuel_rate_dpp(p, b);
    FuelPartials {
        d1: s.x2 * dp,
        d2: s.x1 * dp,
        h11: s.x2 * s.x2 * dpp,
        h12: dp + p * dpp,
        h22: s.x1 * s.x1 * dpp,
    }
}

/// State derivative (x1dot, x2dot) under force-rate input `u`.
///
/// x1dot = (x2 - drag - rolling) / M; x2dot = u.
pub fn state_derivative(s: State, u: f64, p: &VehicleParams) -> (f64, f64) {
    let drag = 0.5 * p.drag_area() * s.x1 * s.x1;
    ((s.x2 - drag - p.rolling_force()) / p.mass, u)
}

/// Equilibrium force at cruise speed `v`: the force balancing quadratic drag
/// plus rolling resistance.
pub fn equilibrium_force(v: f64, p: &VehicleParams) -> f64 {
    0.5 * p.drag_area() * v * v + p.rolling_force()
}

/// Back-solve the stationary point of the state/co-state flow at cruise
/// speed `v`, returning the co-states and the speed weight C that make the
/// whole 4-dimensional flow vanish there.
pub fn equilibrium_for_speed(v: f64, p: &VehicleParams, b: &BsfcParams) -> Equilibrium {
    let force = equilibrium_force(v, p);
    let fp = fuel_partials(State::new(v, force), b);
    Equilibrium {
        v,
        force,
        lambda1: -p.mass * fp.d2,
        lambda2: 0.0,
        weight_c: fp.d1 + fp.d2 * p.drag_area() * v,
    }
}

/// Time-averaged cost of driving at constant speed `v` with zero input:
/// fuel rate at the equilibrium force minus C * v (g/s).
pub fn steady_cost(v: f64, c: f64, p: &VehicleParams, b: &BsfcParams) -> f64 {
    let force = equilibrium_force(v, p);
    fuel_rate(power(State::new(v, force)), b) - c * v
}
