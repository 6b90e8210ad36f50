//! Deterministic fixed-step integration.
//!
//! Periods of interest are O(100 s) with mode frequencies well under
//! 0.1 rad/s, so a classical Runge-Kutta scheme at a few thousand steps per
//! period resolves the dynamics to far below the tolerances used anywhere
//! downstream. Fixed stepping keeps cost-quadrature grids aligned with the
//! solution samples and makes every run bit-reproducible.

use crate::error::{Error, Result};

/// A sampled solution on a uniform time grid including both endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<const N: usize> {
    /// Sample times (s), strictly increasing, uniformly spaced.
    pub t: Vec<f64>,
    /// State samples aligned with `t`.
    pub rows: Vec<[f64; N]>,
}

impl<const N: usize> Trajectory<N> {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Grid spacing (s).
    pub fn step(&self) -> f64 {
        self.t[1] - self.t[0]
    }
}

/// Integrate `dy/dt = flow(t, y)` from t = 0 to `t_end` with the classical
/// 4th-order Runge-Kutta scheme at `steps` uniform steps.
///
/// Node times are computed as `t_end * (i / steps)` so the final time equals
/// `t_end` exactly. Any non-finite state component aborts with the time at
/// which it appeared.
pub fn integrate_rk4<const N: usize>(
    flow: impl Fn(f64, &[f64; N]) -> [f64; N],
    y0: [f64; N],
    t_end: f64,
    steps: usize,
) -> Result<Trajectory<N>> {
    if steps == 0 {
        return Err(Error::Domain { name: "steps", value: 0.0 });
    }
    if t_end <= 0.0 {
        return Err(Error::Domain { name: "t_end", value: t_end });
    }
    let h = t_end / steps as f64;
    let mut t = Vec::with_capacity(steps + 1);
    let mut rows = Vec::with_capacity(steps + 1);
    t.push(0.0);
    rows.push(y0);
    let mut y = y0;
    for i in 0..steps {
        let ti = t_end * (i as f64 / steps as f64);
        let tn = t_end * ((i + 1) as f64 / steps as f64);
        let k1 = flow(ti, &y);
        let k2 = flow(ti + 0.5 * h, &add_scaled(&y, 0.5 * h, &k1));
        let k3 = flow(ti + 0.5 * h, &add_scaled(&y, 0.5 * h, &k2));
        let k4 = flow(tn, &add_scaled(&y, h, &k3));
        for j in 0..N {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { t: tn });
        }
        t.push(tn);
        rows.push(y);
    }
    Ok(Trajectory { t, rows })
}

fn add_scaled<const N: usize>(y: &[f64; N], s: f64, k: &[f64; N]) -> [f64; N] {
    let mut out = *y;
    for j in 0..N {
        out[j] += s * k[j];
    }
    out
}
