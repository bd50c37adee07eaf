//! 2D wave equation with a manufactured solution.
//!
//! The initial-boundary value problem on `D = [-1, 1]^2` is
//!
//! ```text
//! u_tt - lap(u) = f(t, x, y),          t in [0, T],
//! u(0) = g1,  u_t(0) = g2,  u|dD = g_b,
//! ```
//!
//! with data chosen so the exact solution is
//! `u(t, x, y) = sin(y1 t - y2 x1) sin(y2 x2)` for parameters
//! `y = (y1, y2) in [10, 11] x [4, 6]`. The quantity of interest is
//! `|u(T, x_Q, y)|` at `T = 30`, probed at `x_Q = (0.5, 0.5)`.
//!
//! The solver is a leapfrog scheme with the 5-point Laplacian, second-order
//! in space and time, on a uniform grid of length `h` with `dt = h / 2`
//! (stable, since the CFL bound here is `h / sqrt(2)`). Dirichlet data is
//! imposed from the exact solution after every interior update, and the
//! first step is the Taylor-2 start `u^1 = u^0 + dt g2 + (dt^2/2)(lap u^0 +
//! f^0)`, which keeps the global order at two.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{input_err, Result};
use crate::math;

/// Final time at which the quantity of interest is read.
pub const WAVE_HORIZON: f64 = 30.0;
/// Probe location.
pub const WAVE_PROBE: (f64, f64) = (0.5, 0.5);
/// Parameter domain bounds, per component.
pub const WAVE_PARAM_DOMAIN: ((f64, f64), (f64, f64)) = ((10.0, 11.0), (4.0, 6.0));

/// Problem description for the wave benchmark.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveSpec {
    pub horizon: f64,
    pub probe: (f64, f64),
    /// `dt = dt_ratio * h`.
    pub dt_ratio: f64,
}

impl Default for WaveSpec {
    fn default() -> Self {
        WaveSpec {
            horizon: WAVE_HORIZON,
            probe: WAVE_PROBE,
            dt_ratio: 0.5,
        }
    }
}

/// Exact solution `u(t, x, y)`.
#[inline]
pub fn wave_exact(t: f64, x: [f64; 2], y: [f64; 2]) -> f64 {
    math::sin(y[0] * t - y[1] * x[0]) * math::sin(y[1] * x[1])
}

/// Manufactured forcing `f = u_tt - lap(u) = (2 y2^2 - y1^2) u`.
#[inline]
pub fn wave_forcing(t: f64, x: [f64; 2], y: [f64; 2]) -> f64 {
    (2.0 * y[1] * y[1] - y[0] * y[0]) * wave_exact(t, x, y)
}

/// Grid geometry implied by a mesh width `h = 1/m`.
///
/// Admissible grids have integer, even `m`, so that both domain corners and
/// the probe `x = 0.5` (at index offset `m/2`) fall on grid points, and the
/// time step `dt = h/2` divides the horizon exactly.
struct Grid {
    m: usize,
    /// points per dimension, `2m + 1`
    n: usize,
    h: f64,
    dt: f64,
    n_steps: u64,
}

fn grid_for(h: f64, spec: &WaveSpec) -> Result<Grid> {
    if !(h > 0.0 && h.is_finite()) {
        return input_err("wave solver: grid length must be positive and finite");
    }
    let m_real = 1.0 / h;
    let m = math::round(m_real) as usize;
    if m < 2 || math::abs(m_real - m as f64) > 1e-9 * m as f64 {
        return input_err("wave solver: 1/h must be an integer");
    }
    if m % 2 != 0 {
        return input_err("wave solver: 1/h must be even so the probe lies on the grid");
    }
    let dt = spec.dt_ratio * h;
    let steps_real = spec.horizon / dt;
    let n_steps = math::round(steps_real) as u64;
    if n_steps == 0 || math::abs(steps_real - n_steps as f64) > 1e-9 * n_steps as f64 {
        return input_err("wave solver: the time step must divide the horizon");
    }
    Ok(Grid {
        m,
        n: 2 * m + 1,
        h,
        dt,
        n_steps,
    })
}

/// Leapfrog solve; returns the full final-time field (row-major over
/// `(x1, x2)` indices) and the points-per-dimension count.
///
/// Exposed mainly so diagnostics and tests can inspect the field; use
/// [`wave_solve_fd`] for the probe value.
pub fn wave_solve_field(y: [f64; 2], h: f64, spec: &WaveSpec) -> Result<(Vec<f64>, usize)> {
    let grid = grid_for(h, spec)?;
    let (m, n, dt) = (grid.m, grid.n, grid.dt);
    let (y1, y2) = (y[0], y[1]);
    let fac = 2.0 * y2 * y2 - y1 * y1;
    let dt2 = dt * dt;
    // dt^2 / h^2 for the unscaled 5-point stencil; exactly 0.25 for dt = h/2
    let r2 = dt2 / (grid.h * grid.h);

    // Coordinates are symmetric about zero: x_j = (j - m) h. With the
    // factored exact solution
    //   u(t, x1, x2) = (sin(y1 t) cos(y2 x1) - cos(y1 t) sin(y2 x1)) sin(y2 x2)
    // all space dependence lives in per-axis tables, so each time step costs
    // one sincos plus multiply-adds.
    let mut sx = vec![0.0; n];
    let mut cx = vec![0.0; n];
    for j in 0..n {
        let xj = (j as f64 - m as f64) * grid.h;
        let (s, c) = math::sincos(y2 * xj);
        sx[j] = s;
        cx[j] = c;
    }

    let mut prev = vec![0.0; n * n];
    let mut cur = vec![0.0; n * n];
    let mut next = vec![0.0; n * n];

    // t = 0: u^0 = -sin(y2 x1) sin(y2 x2)
    for i in 0..n {
        let row = &mut prev[i * n..(i + 1) * n];
        for (j, v) in row.iter_mut().enumerate() {
            *v = -sx[i] * sx[j];
        }
    }

    // Taylor-2 first step on the interior; boundary from the exact solution.
    for i in 1..n - 1 {
        let g2_row = y1 * cx[i]; // u_t(0, x) = y1 cos(y2 x1) sin(y2 x2)
        let f_row = fac * (-sx[i]); // f(0, x) = fac u^0
        let base = i * n;
        for j in 1..n - 1 {
            let u0 = prev[base + j];
            let lap = prev[base + j - 1] + prev[base + j + 1] + prev[base - n + j]
                + prev[base + n + j]
                - 4.0 * u0;
            cur[base + j] = u0
                + dt * g2_row * sx[j]
                + 0.5 * (r2 * lap + dt2 * f_row * sx[j]);
        }
    }
    set_boundary(&mut cur, n, dt, y1, &sx, &cx);

    for step in 1..grid.n_steps {
        let t = step as f64 * dt;
        let (st, ct) = math::sincos(y1 * t);
        for i in 1..n - 1 {
            let ex_row = fac * (st * cx[i] - ct * sx[i]);
            let base = i * n;
            for j in 1..n - 1 {
                let uc = cur[base + j];
                let lap = cur[base + j - 1] + cur[base + j + 1] + cur[base - n + j]
                    + cur[base + n + j]
                    - 4.0 * uc;
                next[base + j] =
                    2.0 * uc - prev[base + j] + r2 * lap + dt2 * ex_row * sx[j];
            }
        }
        let t_next = (step + 1) as f64 * dt;
        set_boundary(&mut next, n, t_next, y1, &sx, &cx);

        core::mem::swap(&mut prev, &mut cur);
        core::mem::swap(&mut cur, &mut next);
    }

    Ok((cur, n))
}

/// Dirichlet edges from the exact solution at time `t`, via the axis tables.
fn set_boundary(u: &mut [f64], n: usize, t: f64, y1: f64, sx: &[f64], cx: &[f64]) {
    let (st, ct) = math::sincos(y1 * t);
    let last = n - 1;
    // x1 = -1 and x1 = +1 rows
    let row_lo = st * cx[0] - ct * sx[0];
    let row_hi = st * cx[last] - ct * sx[last];
    for j in 0..n {
        u[j] = row_lo * sx[j];
        u[last * n + j] = row_hi * sx[j];
    }
    // x2 = -1 and x2 = +1 columns
    for i in 0..n {
        let row = st * cx[i] - ct * sx[i];
        u[i * n] = row * sx[0];
        u[i * n + last] = row * sx[last];
    }
}

/// Probe value `u(T, x_Q, y)` from the leapfrog solve.
pub fn wave_solve_fd(y: [f64; 2], h: f64, spec: &WaveSpec) -> Result<f64> {
    let grid = grid_for(h, spec)?;
    let (field, n) = wave_solve_field(y, h, spec)?;
    // probe (0.5, 0.5) sits m/2 points past the center in each axis
    let p = grid.m + grid.m / 2;
    Ok(field[p * n + p])
}

/// Quantity of interest `|u(T, x_Q, y)|` from the solver.
pub fn wave_qoi(y: [f64; 2], h: f64, spec: &WaveSpec) -> Result<f64> {
    Ok(math::abs(wave_solve_fd(y, h, spec)?))
}

/// Exact quantity of interest `|sin(30 y1 - 0.5 y2) sin(0.5 y2)|`.
pub fn wave_qoi_exact(y: [f64; 2]) -> f64 {
    math::abs(wave_exact(
        WAVE_HORIZON,
        [WAVE_PROBE.0, WAVE_PROBE.1],
        y,
    ))
}
