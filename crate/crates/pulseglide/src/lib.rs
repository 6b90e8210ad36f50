//! Analysis toolkit for pulse-and-glide cruise control.
//!
//! On a flat road, holding a fixed speed is not always the cheapest way to
//! maintain an average speed: engines with a convex efficiency map can burn
//! less fuel by alternating short pulses of strong traction with long glides.
//! This crate models that tradeoff end to end for a point-mass vehicle with
//! quadratic drag and a quadratic brake-specific fuel consumption curve:
//!
//! - [`vehicle`]: longitudinal dynamics, the fuel map and its derivatives,
//!   equilibrium (steady cruise) solutions, and the steady cost baseline.
//! - [`pmp`]: the averaged-cost Hamiltonian, costate dynamics, the optimal
//!   force-rate input, and periodic boundary residuals for candidate orbits.
//! - [`ode`]: a fixed-step fourth-order Runge-Kutta integrator used by both
//!   the analysis and optimization layers.
//! - [`linear`]: linearization of the optimality system around equilibrium,
//!   its characteristic polynomial and eigenvalues, mode classification, and
//!   searches for the critical input weight and the speed ceiling beyond
//!   which pulsing stops paying.
//! - [`quartic`]: closed-form and iterative polynomial root solvers backing
//!   the eigenvalue computation.
//! - [`simplex`], [`trajopt`]: derivative-free search for optimal periodic
//!   trajectories with a truncated Fourier input, penalty handling of the
//!   periodicity and force-floor constraints, and harmonic continuation.
//! - [`config`], [`svg`]: JSON parameter loading and plot rendering for the
//!   command-line interface.
//!
//! Units are SI throughout except fuel mass, which is in grams: velocities in
//! m/s, forces in N, force rate in N/s, power in W, fuel rate in g/s, and
//! running costs in g/s.

pub mod config;
pub mod error;
pub mod linear;
pub mod ode;
pub mod pmp;
pub mod quartic;
pub mod simplex;
pub mod svg;
pub mod trajopt;
pub mod vehicle;

pub use error::{Error, Result};
