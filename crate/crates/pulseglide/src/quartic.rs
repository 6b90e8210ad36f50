//! Quartic root extraction.
//!
//! The analysis path solves even quartics s^4 + b s^2 + c exactly through the
//! z = s^2 substitution; `solve_quartic` is an independent general-purpose
//! solver kept as a cross-check so the two routes can be compared on the full
//! coefficient vector.

use num_complex::Complex64;

/// Roots of s^4 + b s^2 + c via the quadratic in z = s^2, returned as
/// negation pairs [s1, -s1, s2, -s2].
///
/// Real non-positive z produce exactly imaginary roots (zero real part), so
/// downstream classification sees clean oscillatory spectra instead of
/// rounding noise.
pub fn solve_even(b: f64, c: f64) -> [Complex64; 4] {
    let disc = b * b - 4.0 * c;
    let (z1, z2) = if disc >= 0.0 {
        // Stable real quadratic roots: avoid cancellation in -b +/- sqrt.
        let sd = disc.sqrt();
        let q = -0.5 * (b + b.signum_or_one() * sd);
        let z1 = q;
        let z2 = if q != 0.0 { c / q } else { 0.0 };
        (Complex64::new(z1, 0.0), Complex64::new(z2, 0.0))
    } else {
        let sd = (-disc).sqrt();
        (
            Complex64::new(-0.5 * b, 0.5 * sd),
            Complex64::new(-0.5 * b, -0.5 * sd),
        )
    };
    let s1 = sqrt_exact(z1);
    let s2 = sqrt_exact(z2);
    [s1, -s1, s2, -s2]
}

/// Principal square root with exact real/imaginary axes for real inputs.
fn sqrt_exact(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        if z.re >= 0.0 {
            Complex64::new(z.re.sqrt(), 0.0)
        } else {
            Complex64::new(0.0, (-z.re).sqrt())
        }
    } else {
        z.sqrt()
    }
}

trait SignumOrOne {
    fn signum_or_one(self) -> f64;
}

impl SignumOrOne for f64 {
    fn signum_or_one(self) -> f64 {
        if self >= 0.0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// All four roots of a4 x^4 + a3 x^3 + a2 x^2 + a1 x + a0 by the
/// Durand-Kerner simultaneous iteration, deterministic for given
/// coefficients. Requires a4 != 0.
pub fn solve_quartic(coeffs: &[f64; 5]) -> [Complex64; 4] {
    assert!(coeffs[0] != 0.0, "leading coefficient must be nonzero");
    let c: Vec<Complex64> = coeffs
        .iter()
        .map(|&a| Complex64::new(a / coeffs[0], 0.0))
        .collect();
    let eval = |x: Complex64| -> Complex64 {
        c.iter().fold(Complex64::new(0.0, 0.0), |acc, &ck| acc * x + ck)
    };
    // Standard non-real, non-unit-modulus starting points.
    let seed = Complex64::new(0.4, 0.9);
    let mut x = [seed, seed * seed, seed * seed * seed, seed * seed * seed * seed];
    for _ in 0..1000 {
        let mut delta_max: f64 = 0.0;
        let mut scale: f64 = 1.0;
        for k in 0..4 {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..4 {
                if j != k {
                    denom *= x[k] - x[j];
                }
            }
            let step = eval(x[k]) / denom;
            x[k] -= step;
            delta_max = delta_max.max(step.norm());
            scale = scale.max(x[k].norm());
        }
        if delta_max < 1e-14 * scale {
            break;
        }
    }
    x
}

/// Evaluate a degree-4 polynomial (descending coefficients) at a complex
/// point.
pub fn eval_poly(coeffs: &[f64; 5], x: Complex64) -> Complex64 {
    coeffs
        .iter()
        .fold(Complex64::new(0.0, 0.0), |acc, &ck| acc * x + Complex64::new(ck, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn contains_root(roots: &[Complex64; 4], want: Complex64, tol: f64) -> bool {
        roots.iter().any(|r| (r - want).norm() <= tol)
    }

    #[test]
    fn even_quartic_with_two_imaginary_pairs() {
        // z^2 + 5z + 4 = 0 -> z = -1, -4 -> s = {+-i, +-2i}.
        let roots = solve_even(5.0, 4.0);
        for want in [
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 2.0),
            Complex64::new(0.0, -2.0),
        ] {
            assert!(contains_root(&roots, want, 1e-14));
        }
        // Real parts are exactly zero, not rounding residue.
        for r in roots {
            assert_eq!(r.re, 0.0);
        }
    }

    #[test]
    fn even_quartic_with_two_real_pairs() {
        let roots = solve_even(-5.0, 4.0);
        for want in [1.0, -1.0, 2.0, -2.0] {
            assert!(contains_root(&roots, Complex64::new(want, 0.0), 1e-14));
        }
        for r in roots {
            assert_eq!(r.im, 0.0);
        }
    }

    #[test]
    fn even_quartic_with_mixed_real_and_imaginary_pairs() {
        let roots = solve_even(0.0, -4.0);
        let s = 2.0f64.sqrt();
        assert!(contains_root(&roots, Complex64::new(s, 0.0), 1e-14));
        assert!(contains_root(&roots, Complex64::new(-s, 0.0), 1e-14));
        assert!(contains_root(&roots, Complex64::new(0.0, s), 1e-14));
        assert!(contains_root(&roots, Complex64::new(0.0, -s), 1e-14));
    }

    #[test]
    fn even_roots_come_in_negation_pairs() {
        for (b, c) in [(3.7, 1.2), (-2.0, -5.0), (0.004, 3.1e-6), (1e-6, 1e-14)] {
            let roots = solve_even(b, c);
            assert_eq!(roots[1], -roots[0]);
            assert_eq!(roots[3], -roots[2]);
        }
    }

    #[test]
    fn even_roots_satisfy_the_polynomial() {
        for (b, c) in [(5.0, 4.0), (-5.0, 4.0), (0.0, -4.0), (4.04e-3, 3.14e-6)] {
            let coeffs = [1.0, 0.0, b, 0.0, c];
            for r in solve_even(b, c) {
                let scale = r.norm().powi(4).max(c.abs()).max(1e-30);
                assert!(
                    eval_poly(&coeffs, r).norm() <= 1e-12 * scale.max(1.0),
                    "residual at root {r} for (b={b}, c={c})"
                );
            }
        }
    }

    #[test]
    fn generic_solver_recovers_known_roots() {
        // (x-1)(x-2)(x-3)(x-4) = x^4 - 10x^3 + 35x^2 - 50x + 24.
        let roots = solve_quartic(&[1.0, -10.0, 35.0, -50.0, 24.0]);
        for want in [1.0, 2.0, 3.0, 4.0] {
            assert!(contains_root(&roots, Complex64::new(want, 0.0), 1e-10));
        }
    }

    #[test]
    fn generic_solver_handles_complex_pairs() {
        // (x^2 + 1)(x^2 - 2x + 5): roots +-i, 1 +- 2i.
        let roots = solve_quartic(&[1.0, -2.0, 6.0, -2.0, 5.0]);
        for want in [
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(1.0, 2.0),
            Complex64::new(1.0, -2.0),
        ] {
            assert!(contains_root(&roots, want, 1e-10));
        }
    }

    #[test]
    fn generic_solver_is_deterministic() {
        let coeffs = [1.0, 0.0, 4.04e-3, 0.0, 3.14e-6];
        let a = solve_quartic(&coeffs);
        let b = solve_quartic(&coeffs);
        assert_eq!(a, b);
    }

    #[test]
    fn routes_agree_on_an_even_quartic() {
        let (b, c) = (4.0383e-3, 3.1365e-6);
        let closed = solve_even(b, c);
        let generic = solve_quartic(&[1.0, 0.0, b, 0.0, c]);
        for r in closed {
            assert!(
                generic.iter().any(|g| (g - r).norm() <= 1e-10),
                "no generic match for {r}"
            );
        }
    }
}
