//! First-order optimality machinery for the cruise problem: the Hamiltonian,
//! the input that minimizes it, co-state dynamics, the combined 4-dimensional
//! flow, and periodicity/transversality residuals for candidate orbits.
//!
//! The running cost weights fuel against distance and penalizes force rate:
//! `L = mdot_f - C*x1 + (R/2)*u^2`. Reported costs are time averages over one
//! period; the Hamiltonian itself carries no averaging factor.

use crate::error::{Error, Result};
use crate::ode::Trajectory;
use crate::vehicle::{self, BsfcParams, State, VehicleParams};

/// Co-states conjugate to velocity and force.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Costate {
    pub lambda1: f64,
    pub lambda2: f64,
}

/// Cost weights: the speed reward C (g/m) and the jerk penalty R
/// ((g/s)/(N/s)^2).
///
/// Flows require R > 0; R = 0 appears only as a limit in linear analysis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weights {
    pub speed_weight: f64,
    pub jerk_weight: f64,
}

/// The combined flow variable, ordered (x1, x2, lambda1, lambda2) everywhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AugmentedState {
    pub x1: f64,
    pub x2: f64,
    pub lambda1: f64,
    pub lambda2: f64,
}

impl AugmentedState {
    pub fn new(x1: f64, x2: f64, lambda1: f64, lambda2: f64) -> Self {
        Self { x1, x2, lambda1, lambda2 }
    }

    pub fn from_array(y: [f64; 4]) -> Self {
        Self { x1: y[0], x2: y[1], lambda1: y[2], lambda2: y[3] }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.x1, self.x2, self.lambda1, self.lambda2]
    }

    pub fn state(&self) -> State {
        State::new(self.x1, self.x2)
    }
}

/// Gaps that vanish simultaneously on an exact periodic extremal: the four
/// endpoint differences plus the free-period transversality residual
/// H(T) - J.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryResiduals {
    pub r_x1: f64,
    pub r_x2: f64,
    pub r_l1: f64,
    pub r_l2: f64,
    pub r_trans: f64,
}

/// The input minimizing the Hamiltonian: u = -lambda2 / R (vertex of the
/// quadratic jerk penalty).
pub fn optimal_input(lambda2: f64, r: f64) -> Result<f64> {
    if r <= 0.0 {
        return Err(Error::Domain { name: "jerk_weight", value: r });
    }
    Ok(-lambda2 / r)
}

/// The Hamiltonian
/// `H = mdot_f - C*x1 + (R/2)*u^2 + lambda1*x1dot + lambda2*u` (g/s).
pub fn hamiltonian(
    a: &AugmentedState,
    u: f64,
    w: &Weights,
    p: &VehicleParams,
    b: &BsfcParams,
) -> f64 {
    let (x1dot, _) = vehicle::state_derivative(a.state(), u, p);
    vehicle::fuel_rate(vehicle::power(a.state()), b) - w.speed_weight * a.x1
        + 0.5 * w.jerk_weight * u * u
        + a.lambda1 * x1dot
        + a.lambda2 * u
}

/// Co-state dynamics (lambda1dot, lambda2dot) = -dH/d(x1, x2):
/// `lambda1dot = -d1 + C + (rho*C_d*A_f*x1/M)*lambda1`,
/// `lambda2dot = -d2 - lambda1/M`.
pub fn costate_derivative(
    a: &AugmentedState,
    w: &Weights,
    p: &VehicleParams,
    b: &BsfcParams,
) -> (f64, f64) {
    let fp = vehicle::fuel_partials(a.state(), b);
    let l1dot = -fp.d1 + w.speed_weight + p.drag_area() * a.x1 / p.mass * a.lambda1;
    let l2dot = -fp.d2 - a.lambda1 / p.mass;
    (l1dot, l2dot)
}

/// The full 4-dimensional flow with the minimizing input substituted.
///
/// Requires `w.jerk_weight > 0`.
pub fn pmp_flow(
    a: &AugmentedState,
    w: &Weights,
    p: &VehicleParams,
    b: &BsfcParams,
) -> [f64; 4] {
    debug_assert!(w.jerk_weight > 0.0, "pmp_flow requires a positive jerk weight");
    let u = -a.lambda2 / w.jerk_weight;
    let (x1dot, x2dot) = vehicle::state_derivative(a.state(), u, p);
    let (l1dot, l2dot) = costate_derivative(a, w, p, b);
    [x1dot, x2dot, l1dot, l2dot]
}

/// Periodicity and transversality residuals of a sampled orbit of the
/// augmented flow over [0, T].
///
/// The running cost is time-averaged by composite trapezoid on the
/// trajectory's own grid; the input along the orbit is recovered from
/// lambda2. Needs at least 3 samples.
pub fn boundary_residuals(
    traj: &Trajectory<4>,
    w: &Weights,
    p: &VehicleParams,
    b: &BsfcParams,
) -> Result<BoundaryResiduals> {
    let n = traj.len();
    if n < 3 {
        return Err(Error::TooFewSamples { min: 3, got: n });
    }
    let first = AugmentedState::from_array(traj.rows[0]);
    let last = AugmentedState::from_array(traj.rows[n - 1]);
    let period = traj.t[n - 1] - traj.t[0];

    let running = |a: &AugmentedState| {
        let u = -a.lambda2 / w.jerk_weight;
        vehicle::fuel_rate(vehicle::power(a.state()), b) - w.speed_weight * a.x1
            + 0.5 * w.jerk_weight * u * u
    };
    let h = traj.step();
    let mut integral = 0.0;
    for (i, row) in traj.rows.iter().enumerate() {
        let a = AugmentedState::from_array(*row);
        let weight = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        integral += weight * running(&a);
    }
    let j_avg = integral * h / period;

    let u_end = optimal_input(last.lambda2, w.jerk_weight)?;
    Ok(BoundaryResiduals {
        r_x1: last.x1 - first.x1,
        r_x2: last.x2 - first.x2,
        r_l1: last.lambda1 - first.lambda1,
        r_l2: last.lambda2 - first.lambda2,
        r_trans: hamiltonian(&last, u_end, w, p, b) - j_avg,
    })
}

/// Convenience: the augmented state at a cruise equilibrium.
pub fn equilibrium_augmented(eq: &vehicle::Equilibrium) -> AugmentedState {
    AugmentedState::new(eq.v, eq.force, eq.lambda1, eq.lambda2)
}

/// Weights consistent with a cruise equilibrium: C from the equilibrium
/// back-solve, R supplied by the caller.
pub fn equilibrium_weights(eq: &vehicle::Equilibrium, jerk_weight: f64) -> Weights {
    Weights { speed_weight: eq.weight_c, jerk_weight }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::integrate_rk4;
    use crate::vehicle::equilibrium_for_speed;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn defaults() -> (VehicleParams, BsfcParams) {
        (VehicleParams::default(), BsfcParams::default())
    }

    #[test]
    fn optimal_input_samples() {
        assert_eq!(optimal_input(0.0, 3e-4).unwrap(), 0.0);
        assert!((optimal_input(-1.5e-3, 3e-4).unwrap() - 5.0).abs() < 1e-12);
        assert_eq!(optimal_input(3e-4, 3e-4).unwrap(), -1.0);
        assert!(optimal_input(1.0, 0.0).is_err());
        assert!(optimal_input(1.0, -1e-3).is_err());
    }

    #[test]
    fn hamiltonian_at_equilibrium_equals_steady_cost() {
        let (p, b) = defaults();
        let eq = equilibrium_for_speed(15.0, &p, &b);
        let w = equilibrium_weights(&eq, 3e-4);
        let h = hamiltonian(&equilibrium_augmented(&eq), 0.0, &w, &p, &b);
        assert!((h - (-0.21527830296744271)).abs() < 1e-12);
        assert!((h - vehicle::steady_cost(15.0, eq.weight_c, &p, &b)).abs() < 1e-12);
    }

    #[test]
    fn hamiltonian_vanishes_for_trivial_arguments() {
        let (p, b) = defaults();
        let w = Weights { speed_weight: 0.0, jerk_weight: 1.0 };
        let a = AugmentedState::new(0.0, 0.0, 0.0, 0.0);
        assert_eq!(hamiltonian(&a, 0.0, &w, &p, &b), 0.0);
    }

    #[test]
    fn hamiltonian_is_minimized_at_the_optimal_input() {
        let (p, b) = defaults();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
        for _ in 0..50 {
            let a = AugmentedState::new(
                rng.gen_range(2.0..40.0),
                rng.gen_range(0.0..2000.0),
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-0.01..0.01),
            );
            let w = Weights {
                speed_weight: rng.gen_range(0.0..0.5),
                jerk_weight: rng.gen_range(1e-5..1e-2),
            };
            let u_star = optimal_input(a.lambda2, w.jerk_weight).unwrap();
            let h_star = hamiltonian(&a, u_star, &w, &p, &b);
            for delta in [1e-3, 1.0, 100.0] {
                assert!(hamiltonian(&a, u_star + delta, &w, &p, &b) > h_star);
                assert!(hamiltonian(&a, u_star - delta, &w, &p, &b) > h_star);
            }
        }
    }

    #[test]
    fn costate_derivative_vanishes_at_equilibria() {
        let (p, b) = defaults();
        for v in [2.0, 10.0, 15.0, 25.0, 35.0] {
            let eq = equilibrium_for_speed(v, &p, &b);
            let w = equilibrium_weights(&eq, 3e-4);
            let (l1dot, l2dot) = costate_derivative(&equilibrium_augmented(&eq), &w, &p, &b);
            assert!(l1dot.abs() < 1e-12, "v={v}: l1dot={l1dot:e}");
            assert!(l2dot.abs() < 1e-12, "v={v}: l2dot={l2dot:e}");
        }
    }

    #[test]
    fn costate_rate_reduces_to_fuel_slope_without_reward_terms() {
        let (p, b) = defaults();
        let a = AugmentedState::new(15.0, 230.83, 0.0, 0.0);
        let w = Weights { speed_weight: 0.0, jerk_weight: 3e-4 };
        let (l1dot, _) = costate_derivative(&a, &w, &p, &b);
        assert!((l1dot - (-0.0216)).abs() < 2e-4, "l1dot={l1dot}");
    }

    #[test]
    fn costate_derivative_matches_negative_hamiltonian_gradient() {
        let (p, b) = defaults();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
        let e = f64::EPSILON.cbrt();
        for _ in 0..100 {
            let a = AugmentedState::new(
                rng.gen_range(2.0..40.0),
                rng.gen_range(0.0..2000.0),
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-0.01..0.01),
            );
            let w = Weights {
                speed_weight: rng.gen_range(0.0..0.5),
                jerk_weight: rng.gen_range(1e-5..1e-2),
            };
            let u = optimal_input(a.lambda2, w.jerk_weight).unwrap();
            let (l1dot, l2dot) = costate_derivative(&a, &w, &p, &b);
            let h1 = e * a.x1.abs().max(1.0);
            let h2 = e * a.x2.abs().max(1.0);
            let mut a_hi = a;
            let mut a_lo = a;
            a_hi.x1 = a.x1 + h1;
            a_lo.x1 = a.x1 - h1;
            let g1 = (hamiltonian(&a_hi, u, &w, &p, &b) - hamiltonian(&a_lo, u, &w, &p, &b))
                / (2.0 * h1);
            a_hi = a;
            a_lo = a;
            a_hi.x2 = a.x2 + h2;
            a_lo.x2 = a.x2 - h2;
            let g2 = (hamiltonian(&a_hi, u, &w, &p, &b) - hamiltonian(&a_lo, u, &w, &p, &b))
                / (2.0 * h2);
            let tol = |want: f64| 1e-6 * want.abs().max(1e-3);
            assert!((l1dot + g1).abs() <= tol(l1dot), "l1dot {l1dot} vs -dH/dx1 {}", -g1);
            assert!((l2dot + g2).abs() <= tol(l2dot), "l2dot {l2dot} vs -dH/dx2 {}", -g2);
        }
    }

    #[test]
    fn pmp_flow_vanishes_at_every_equilibrium() {
        let (p, b) = defaults();
        for v in [2.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 33.0, 35.0] {
            let eq = equilibrium_for_speed(v, &p, &b);
            let w = equilibrium_weights(&eq, 3e-4);
            let f = pmp_flow(&equilibrium_augmented(&eq), &w, &p, &b);
            for (i, fi) in f.iter().enumerate() {
                assert!(fi.abs() < 1e-9, "v={v}: component {i} = {fi:e}");
            }
        }
    }

    #[test]
    fn lambda2_perturbation_maps_to_unit_force_rate() {
        let (p, b) = defaults();
        let eq = equilibrium_for_speed(15.0, &p, &b);
        let w = equilibrium_weights(&eq, 3e-4);
        let mut a = equilibrium_augmented(&eq);
        a.lambda2 += w.jerk_weight;
        let f = pmp_flow(&a, &w, &p, &b);
        assert_eq!(f[1], -1.0);
    }

    fn constant_trajectory(a: AugmentedState, t_end: f64, n: usize) -> Trajectory<4> {
        let t = (0..=n).map(|i| t_end * i as f64 / n as f64).collect();
        let rows = vec![a.to_array(); n + 1];
        Trajectory { t, rows }
    }

    #[test]
    fn residuals_vanish_on_a_constant_equilibrium_orbit() {
        let (p, b) = defaults();
        let eq = equilibrium_for_speed(15.0, &p, &b);
        let w = equilibrium_weights(&eq, 3e-4);
        let traj = constant_trajectory(equilibrium_augmented(&eq), 100.0, 64);
        let r = boundary_residuals(&traj, &w, &p, &b).unwrap();
        assert_eq!(r.r_x1, 0.0);
        assert_eq!(r.r_x2, 0.0);
        assert_eq!(r.r_l1, 0.0);
        assert_eq!(r.r_l2, 0.0);
        assert!(r.r_trans.abs() < 1e-12);
    }

    #[test]
    fn endpoint_shift_shows_up_as_the_matching_residual() {
        let (p, b) = defaults();
        let eq = equilibrium_for_speed(15.0, &p, &b);
        let w = equilibrium_weights(&eq, 3e-4);
        let mut traj = constant_trajectory(equilibrium_augmented(&eq), 100.0, 64);
        let n = traj.rows.len();
        traj.rows[n - 1][0] += 0.5;
        let r = boundary_residuals(&traj, &w, &p, &b).unwrap();
        assert!((r.r_x1 - 0.5).abs() < 1e-15);
        assert_eq!(r.r_x2, 0.0);
    }

    #[test]
    fn too_few_samples_is_an_error() {
        let (p, b) = defaults();
        let eq = equilibrium_for_speed(15.0, &p, &b);
        let w = equilibrium_weights(&eq, 3e-4);
        let traj = Trajectory {
            t: vec![0.0, 1.0],
            rows: vec![equilibrium_augmented(&eq).to_array(); 2],
        };
        assert!(matches!(
            boundary_residuals(&traj, &w, &p, &b),
            Err(Error::TooFewSamples { min: 3, got: 2 })
        ));
    }

    #[test]
    fn periodicity_residuals_are_unchanged_by_concatenating_a_second_period() {
        let (p, b) = defaults();
        let eq = equilibrium_for_speed(15.0, &p, &b);
        let w = equilibrium_weights(&eq, 3e-4);
        let mut y0 = equilibrium_augmented(&eq);
        y0.x1 += 0.05;
        let t_end = 150.0;
        let steps = 512;
        let one = integrate_rk4(
            |_, y| pmp_flow(&AugmentedState::from_array(*y), &w, &p, &b),
            y0.to_array(),
            t_end,
            steps,
        )
        .unwrap();
        // Periodic continuation: the same samples repeated over [T, 2T].
        let mut two = Trajectory {
            t: (0..=2 * steps)
                .map(|i| 2.0 * t_end * i as f64 / (2 * steps) as f64)
                .collect(),
            rows: one.rows.clone(),
        };
        two.rows.extend_from_slice(&one.rows[1..]);
        let r1 = boundary_residuals(&one, &w, &p, &b).unwrap();
        let r2 = boundary_residuals(&two, &w, &p, &b).unwrap();
        assert_eq!(r1.r_x1, r2.r_x1);
        assert_eq!(r1.r_x2, r2.r_x2);
        assert_eq!(r1.r_l1, r2.r_l1);
        assert_eq!(r1.r_l2, r2.r_l2);
    }

    #[test]
    fn residuals_shrink_as_the_start_approaches_a_periodic_orbit() {
        let (p, b) = defaults();
        let eq = equilibrium_for_speed(15.0, &p, &b);
        // R below the critical value, inside the oscillatory regime.
        let w = equilibrium_weights(&eq, 1e-4);
        let norm_at = |eps: f64| {
            let mut y0 = equilibrium_augmented(&eq);
            y0.x1 += eps;
            let traj = integrate_rk4(
                |_, y| pmp_flow(&AugmentedState::from_array(*y), &w, &p, &b),
                y0.to_array(),
                200.0,
                1024,
            )
            .unwrap();
            let r = boundary_residuals(&traj, &w, &p, &b).unwrap();
            (r.r_x1.powi(2) + r.r_x2.powi(2) + r.r_l1.powi(2) + r.r_l2.powi(2)).sqrt()
        };
        let (r2, r3, r4) = (norm_at(1e-2), norm_at(1e-3), norm_at(1e-4));
        assert!(r3 < r2, "{r3} !< {r2}");
        assert!(r4 < r3, "{r4} !< {r3}");
    }
}
