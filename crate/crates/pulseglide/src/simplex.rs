//! Deterministic Nelder-Mead simplex minimization.
//!
//! Derivative-free local search used by the trajectory optimizer, where the
//! objective comes from an ODE integration and gradients are unavailable.
//! All tie-breaking is index-stable, so a given starting point and budget
//! always produce the same result.

/// Termination settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    /// Iteration budget; exceeding it returns the best point found with
    /// `converged = false`.
    pub max_iters: usize,
    /// Value-spread threshold; stopping requires this and `x_tol` together.
    pub f_tol: f64,
    /// Simplex diameter threshold (infinity norm of every vertex's distance
    /// to the best); stopping requires this and `f_tol` together.
    pub x_tol: f64,
}

impl Default for Options {
    fn default() -> Self {
        Self { max_iters: 2000, f_tol: 1e-12, x_tol: 1e-9 }
    }
}

/// Minimization outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    /// Best point found.
    pub x: Vec<f64>,
    /// Objective value at `x`.
    pub f: f64,
    /// Iterations performed.
    pub iterations: usize,
    /// Whether a tolerance criterion (rather than the budget) stopped the
    /// search.
    pub converged: bool,
    /// Best objective value after each iteration; non-increasing.
    pub history: Vec<f64>,
}

/// Minimize `f` starting from `x0`, building the initial simplex by
/// displacing each coordinate by the matching entry of `scales`.
///
/// Non-finite objective values are treated as +infinity, so the simplex
/// retreats from invalid regions instead of poisoning comparisons.
pub fn minimize(
    mut f: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    scales: &[f64],
    opts: &Options,
) -> Outcome {
    assert_eq!(x0.len(), scales.len(), "one scale per coordinate");
    let n = x0.len();
    assert!(n >= 1, "need at least one dimension");

    let mut eval = |x: &[f64]| -> f64 {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };

    // Vertices with cached values, kept sorted ascending by value.
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let fx0 = eval(x0);
    simplex.push((x0.to_vec(), fx0));
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += scales[i];
        let fv = eval(&v);
        simplex.push((v, fv));
    }
    sort_simplex(&mut simplex);

    let mut history = Vec::new();
    let mut iterations = 0;
    let mut converged = false;

    while iterations < opts.max_iters {
        let spread = simplex[n].1 - simplex[0].1;
        let diameter = simplex[1..]
            .iter()
            .map(|(v, _)| {
                v.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        // Both must hold: near-equal values alone can straddle a minimum,
        // and a tiny simplex alone can sit on a steep slope.
        if spread <= opts.f_tol && diameter <= opts.x_tol {
            converged = true;
            break;
        }
        iterations += 1;

        // Centroid of all vertices but the worst.
        let mut centroid = vec![0.0; n];
        for (v, _) in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x;
            }
        }
        for c in &mut centroid {
            *c /= n as f64;
        }

        let worst = simplex[n].clone();
        let combine = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let xr = combine(1.0);
        let fr = eval(&xr);
        if fr < simplex[0].1 {
            let xe = combine(2.0);
            let fe = eval(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < worst.1 {
                let xc = combine(0.5);
                let fc = eval(&xc);
                (xc, fc)
            } else {
                let xc = combine(-0.5);
                let fc = eval(&xc);
                (xc, fc)
            };
            if fc < fr.min(worst.1) {
                simplex[n] = (xc, fc);
            } else {
                // Shrink toward the best vertex.
                let best = simplex[0].0.clone();
                for (v, fv) in simplex.iter_mut().skip(1) {
                    for (x, b) in v.iter_mut().zip(&best) {
                        *x = b + 0.5 * (*x - b);
                    }
                    *fv = eval(v);
                }
            }
        }
        sort_simplex(&mut simplex);
        history.push(simplex[0].1);
    }

    Outcome {
        x: simplex[0].0.clone(),
        f: simplex[0].1,
        iterations,
        converged,
        history,
    }
}

fn sort_simplex(simplex: &mut [(Vec<f64>, f64)]) {
    // Stable by value; equal values keep insertion order for determinism.
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rosenbrock(x: &[f64]) -> f64 {
        100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2)
    }

    #[test]
    fn converges_on_rosenbrock() {
        let opts = Options { max_iters: 5000, f_tol: 1e-14, x_tol: 1e-12 };
        let out = minimize(rosenbrock, &[-1.2, 1.0], &[0.1, 0.1], &opts);
        assert!(out.converged);
        assert!((out.x[0] - 1.0).abs() < 1e-6, "x = {:?}", out.x);
        assert!((out.x[1] - 1.0).abs() < 1e-6, "x = {:?}", out.x);
    }

    #[test]
    fn converges_on_a_shifted_sphere() {
        let opts = Options::default();
        let target = [3.0, -1.0, 0.5, 2.0, -4.0];
        let sphere = |x: &[f64]| -> f64 {
            x.iter().zip(&target).map(|(a, b)| (a - b) * (a - b)).sum()
        };
        let out = minimize(sphere, &[0.0; 5], &[0.5; 5], &opts);
        assert!(out.converged);
        for (got, want) in out.x.iter().zip(&target) {
            assert!((got - want).abs() < 1e-5);
        }
    }

    #[test]
    fn best_value_never_increases() {
        let opts = Options { max_iters: 500, ..Options::default() };
        let out = minimize(rosenbrock, &[-1.2, 1.0], &[0.1, 0.1], &opts);
        for w in out.history.windows(2) {
            assert!(w[1] <= w[0], "history increased: {} -> {}", w[0], w[1]);
        }
    }

    #[test]
    fn identical_runs_are_bit_identical() {
        let opts = Options { max_iters: 800, ..Options::default() };
        let a = minimize(rosenbrock, &[-1.2, 1.0], &[0.1, 0.1], &opts);
        let b = minimize(rosenbrock, &[-1.2, 1.0], &[0.1, 0.1], &opts);
        assert_eq!(a.x, b.x);
        assert_eq!(a.f, b.f);
        assert_eq!(a.iterations, b.iterations);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let opts = Options { max_iters: 3, ..Options::default() };
        let out = minimize(rosenbrock, &[-1.2, 1.0], &[0.1, 0.1], &opts);
        assert!(!out.converged);
        assert_eq!(out.iterations, 3);
    }

    #[test]
    fn non_finite_regions_are_avoided() {
        // Objective undefined (NaN) for x < 0; minimum at x = 1.
        let f = |x: &[f64]| {
            if x[0] < 0.0 {
                f64::NAN
            } else {
                (x[0] - 1.0) * (x[0] - 1.0)
            }
        };
        let out = minimize(f, &[0.5], &[0.4], &Options::default());
        assert!(out.converged);
        assert!((out.x[0] - 1.0).abs() < 1e-6, "stopped at {:?} f={} iters={}", out.x, out.f, out.iterations);
    }
}
