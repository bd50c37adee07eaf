//! Scalar decay ODE with a manufactured solution.
//!
//! The initial value problem is
//!
//! ```text
//! u_t + 0.5 u = f(t, y),   t in [0, T],  y in [-1, 1],
//! u(0, y) = g(y),
//! ```
//!
//! with forcing and initial data chosen so the exact solution is
//! `u(t, y) = 0.5 + 2 sin(12 y) + 6 sin(2t) sin(10 y)(1 + 2 y^2)`. The
//! quantity of interest is `Q(y) = |u(T, y)|` at `T = 100`, integrated by an
//! explicit-midpoint Runge-Kutta (RK2) stepper.

use crate::error::{input_err, Result};
use crate::math;

/// Decay coefficient of the left-hand side.
pub const ODE_DECAY: f64 = 0.5;
/// Final time at which the quantity of interest is read.
pub const ODE_HORIZON: f64 = 100.0;
/// Parameter domain bounds.
pub const ODE_PARAM_DOMAIN: (f64, f64) = (-1.0, 1.0);

/// Problem description for the decay ODE (fixed coefficients of the built-in
/// benchmark; a value of this type mostly serves as an explicit handle).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeSpec {
    pub decay: f64,
    pub horizon: f64,
    pub param_lo: f64,
    pub param_hi: f64,
}

impl Default for OdeSpec {
    fn default() -> Self {
        OdeSpec {
            decay: ODE_DECAY,
            horizon: ODE_HORIZON,
            param_lo: ODE_PARAM_DOMAIN.0,
            param_hi: ODE_PARAM_DOMAIN.1,
        }
    }
}

/// Exact solution `u(t, y)`.
#[inline]
pub fn ode_exact(t: f64, y: f64) -> f64 {
    0.5 + 2.0 * math::sin(12.0 * y)
        + 6.0 * math::sin(2.0 * t) * math::sin(10.0 * y) * (1.0 + 2.0 * y * y)
}

/// Manufactured forcing `f = u_t + 0.5 u` for the exact solution above.
#[inline]
pub fn ode_forcing(t: f64, y: f64) -> f64 {
    12.0 * math::cos(2.0 * t) * math::sin(10.0 * y) * (1.0 + 2.0 * y * y)
        + ODE_DECAY * ode_exact(t, y)
}

/// Explicit-midpoint RK2 solve of the IVP up to the horizon; returns
/// `u(T, y)`.
///
/// The step count is `n = round(T / h)` and the actual step `T / n`, so the
/// horizon is hit exactly and no truncated final step degrades the order.
pub fn ode_solve_rk2(y: f64, h: f64, spec: &OdeSpec) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return input_err("ode_solve_rk2: step size must be positive and finite");
    }
    let n_steps = math::round(spec.horizon / h) as u64;
    if n_steps == 0 {
        return input_err("ode_solve_rk2: step size exceeds the horizon");
    }
    let h = spec.horizon / n_steps as f64;
    let decay = spec.decay;

    // y-dependent factors of the forcing are constant along the solve:
    // f(t) = 12 cos(2t) a + decay (b + 6 sin(2t) a)
    let a = math::sin(10.0 * y) * (1.0 + 2.0 * y * y);
    let b = 0.5 + 2.0 * math::sin(12.0 * y);
    let forcing = |t: f64| -> f64 {
        let (s, c) = math::sincos(2.0 * t);
        12.0 * c * a + decay * (b + 6.0 * s * a)
    };

    let mut u = ode_exact(0.0, y);
    let mut t = 0.0;
    for step in 0..n_steps {
        let k1 = forcing(t) - decay * u;
        let t_mid = t + 0.5 * h;
        let u_mid = u + 0.5 * h * k1;
        let k2 = forcing(t_mid) - decay * u_mid;
        u += h * k2;
        t = (step + 1) as f64 * h;
    }
    Ok(u)
}

/// Quantity of interest `|u(T, y)|` computed with the RK2 solver.
pub fn ode_qoi(y: f64, h: f64, spec: &OdeSpec) -> Result<f64> {
    Ok(math::abs(ode_solve_rk2(y, h, spec)?))
}

/// Exact quantity of interest `|u(T, y)|`, used as the test oracle.
pub fn ode_qoi_exact(y: f64) -> f64 {
    math::abs(ode_exact(ODE_HORIZON, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_solution_at_y_zero_is_constant_half() {
        // sin(0) kills both y-terms
        for t in [0.0, 0.7, 13.0, 100.0] {
            assert_eq!(ode_exact(t, 0.0), 0.5);
        }
    }

    #[test]
    fn exact_solution_at_t_zero() {
        // sin(0) kills the time-dependent term
        for y in [-0.9, -0.3, 0.2, 0.77] {
            let want = 0.5 + 2.0 * (12.0 * y).sin();
            assert!((ode_exact(0.0, y) - want).abs() < 1e-15);
        }
    }

    #[test]
    fn exact_solution_frozen_point() {
        // direct high-precision evaluation of the closed form at (1, 0.25)
        assert!((ode_exact(1.0, 0.25) - 4.455516985578624).abs() < 1e-14);
    }

    #[test]
    fn forcing_at_y_zero() {
        // u = 0.5 and u_t = 0 there, so f = 0.25
        for t in [0.0, 2.5, 99.0] {
            assert_eq!(ode_forcing(t, 0.0), 0.25);
        }
    }

    #[test]
    fn forcing_at_t_zero_matches_substitution() {
        for y in [-0.8, -0.1, 0.45, 1.0] {
            let want = 12.0 * (10.0 * y).sin() * (1.0 + 2.0 * y * y)
                + 0.5 * (0.5 + 2.0 * (12.0 * y).sin());
            assert!((ode_forcing(0.0, y) - want).abs() < 1e-13);
        }
    }

    #[test]
    fn forcing_satisfies_the_manufactured_identity() {
        // u_t + 0.5 u - f = 0 at random (t, y), with u_t from a central
        // finite difference of step 1e-6.
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let dt = 1e-6;
        for _ in 0..1000 {
            let t = 100.0 * rng.gen::<f64>();
            let y = 2.0 * rng.gen::<f64>() - 1.0;
            let ut = (ode_exact(t + dt, y) - ode_exact(t - dt, y)) / (2.0 * dt);
            let residual = ut + 0.5 * ode_exact(t, y) - ode_forcing(t, y);
            assert!(residual.abs() < 1e-6, "residual {residual} at ({t}, {y})");
        }
    }

    #[test]
    fn rk2_reproduces_the_constant_solution_at_y_zero() {
        let spec = OdeSpec::default();
        let u = ode_solve_rk2(0.0, 0.1, &spec).unwrap();
        assert!((u - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rk2_error_halving_the_step_shrinks_by_about_four() {
        let spec = OdeSpec::default();
        let exact = ode_exact(ODE_HORIZON, 0.7);
        let e1 = (ode_solve_rk2(0.7, 0.1, &spec).unwrap() - exact).abs();
        let e2 = (ode_solve_rk2(0.7, 0.05, &spec).unwrap() - exact).abs();
        let ratio = e1 / e2;
        assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn rk2_rejects_nonpositive_step() {
        let spec = OdeSpec::default();
        assert!(ode_solve_rk2(0.3, 0.0, &spec).is_err());
        assert!(ode_solve_rk2(0.3, -0.1, &spec).is_err());
    }

    #[test]
    fn qoi_at_y_zero_is_half() {
        let spec = OdeSpec::default();
        assert!((ode_qoi(0.0, 0.1, &spec).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(ode_qoi_exact(0.0), 0.5);
    }

    #[test]
    fn qoi_error_keeps_second_order_ratio_across_draws() {
        // max error at h = 0.025 is at most 4x the max error at h = 0.0125
        let spec = OdeSpec::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut max_coarse: f64 = 0.0;
        let mut max_fine: f64 = 0.0;
        for _ in 0..100 {
            let y = 2.0 * rng.gen::<f64>() - 1.0;
            let exact = ode_qoi_exact(y);
            max_coarse = max_coarse.max((ode_qoi(y, 0.025, &spec).unwrap() - exact).abs());
            max_fine = max_fine.max((ode_qoi(y, 0.0125, &spec).unwrap() - exact).abs());
        }
        assert!(
            max_coarse <= 4.0 * max_fine * 1.05,
            "coarse {max_coarse} vs fine {max_fine}"
        );
    }
}
