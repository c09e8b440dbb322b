//! Weak form of the limit problem tested against smooth compactly supported
//! functions `psi(t, x) = theta(t) g(x)`.
//!
//! For a trajectory `r(t)` with `U = velocity_from_stream(r)` the residual is
//!
//! ```text
//! int_0^T int [ rho_bar U . d_t perp_grad psi + rho_bar (U (x) U) : grad perp_grad psi
//!              + r d_t psi - mu grad U : grad perp_grad psi ]
//!   + int [ rho_bar U0 . perp_grad psi(0) + r0 psi(0) ]
//! ```
//!
//! with `U0`, `r0` the vertical means of the primitive data. It vanishes for
//! solutions of the limit equation started from the matching initial datum.

use crate::error::{Error, Result};
use crate::limit::{velocity_from_stream, LimitParams};
use crate::quadrature::trapezoid_weights;
use crate::spectral::{
    d_x1, d_x2, inverse_transform, perp_grad_h, project, smooth_step, smooth_step_deriv, GridSpec, Parity,
    SpectralField, VectorField,
};

/// `theta(t)`: rises from 0 to 1 over `rise` (or equals 1 from the start)
/// and falls back to 0 over `fall`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeProfile {
    pub rise: Option<(f64, f64)>,
    pub fall: (f64, f64),
}

impl TimeProfile {
    fn ramp(t: f64, (a, b): (f64, f64)) -> (f64, f64) {
        let s = (t - a) / (b - a);
        (smooth_step(s), smooth_step_deriv(s) / (b - a))
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |(a, b): (f64, f64)| a.is_finite() && b.is_finite() && a < b;
        let ordered = self.rise.is_none_or(|r| ok(r) && r.1 <= self.fall.0);
        if !(ok(self.fall) && ordered) {
            return Err(Error::Param(format!("ill-formed time profile {self:?}")));
        }
        Ok(())
    }

    /// `(theta(t), theta'(t))`.
    pub fn eval(&self, t: f64) -> (f64, f64) {
        let (up, dup) = self.rise.map_or((1.0, 0.0), |r| Self::ramp(t, r));
        let (f, df) = Self::ramp(t, self.fall);
        let down = 1.0 - f;
        (up * down, dup * down - up * df)
    }

    /// End of the support.
    pub fn end(&self) -> f64 {
        self.fall.1
    }
}

/// `g(x) = exp(-|x - c|^2 / (2 s^2)) cos(k . (x - c))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestFunction {
    pub centre: (f64, f64),
    pub width: f64,
    pub wave: (f64, f64),
    pub time: TimeProfile,
}

impl TestFunction {
    pub fn spatial(&self, grid: &GridSpec) -> Result<SpectralField> {
        let (c1, c2) = self.centre;
        let (k1, k2) = self.wave;
        let s2 = 2.0 * self.width * self.width;
        project(&grid.horizontal(), Parity::Even, |x, y, _| {
            let (dx, dy) = (x - c1, y - c2);
            (-(dx * dx + dy * dy) / s2).exp() * (k1 * dx + k2 * dy).cos()
        })
    }
}

/// Five modulated Gaussians inside the central quarter of the box, each
/// held on until `T/2` and switched off by `0.9 T`.
pub fn default_battery(grid: &GridSpec, t_final: f64) -> Vec<TestFunction> {
    let l = grid.l;
    let k = 2.0 * std::f64::consts::PI / l;
    let time = TimeProfile {
        rise: None,
        fall: (0.5 * t_final, 0.9 * t_final),
    };
    let specs = [
        ((0.5, 0.5), (0.0, 0.0)),
        ((0.45, 0.55), (3.0, 0.0)),
        ((0.55, 0.45), (0.0, 3.0)),
        ((0.42, 0.42), (2.0, 2.0)),
        ((0.58, 0.56), (-3.0, 1.0)),
    ];
    specs
        .iter()
        .map(|&((a, b), (m1, m2))| TestFunction {
            centre: (a * l, b * l),
            width: l / 16.0,
            wave: (m1 * k, m2 * k),
            time,
        })
        .collect()
}

/// Physical samples of the spatial factors a test function contributes.
struct TestData {
    g: Vec<f64>,
    /// `perp_grad g`.
    pg: [Vec<f64>; 2],
    /// `d_j (perp_grad g)_i` at `[i][j]`.
    dpg: [[Vec<f64>; 2]; 2],
}

impl TestData {
    fn new(f: &TestFunction, grid: &GridSpec) -> Result<Self> {
        let g = f.spatial(grid)?;
        let pg = perp_grad_h(&g);
        let d = |h: &SpectralField| [inverse_transform(&d_x1(h)), inverse_transform(&d_x2(h))];
        Ok(Self {
            g: inverse_transform(&g),
            dpg: [d(&pg.comps[0]), d(&pg.comps[1])],
            pg: [inverse_transform(&pg.comps[0]), inverse_transform(&pg.comps[1])],
        })
    }
}

/// Physical samples of the trajectory quantities at one time.
struct StateData {
    r: Vec<f64>,
    u: [Vec<f64>; 2],
    du: [[Vec<f64>; 2]; 2],
}

impl StateData {
    fn new(r: &SpectralField, params: &LimitParams) -> Self {
        let u = velocity_from_stream(r, params);
        Self::from_parts(r, &u)
    }

    fn from_parts(r: &SpectralField, u: &VectorField) -> Self {
        let d = |h: &SpectralField| [inverse_transform(&d_x1(h)), inverse_transform(&d_x2(h))];
        Self {
            r: inverse_transform(r),
            u: [inverse_transform(&u.comps[0]), inverse_transform(&u.comps[1])],
            du: [d(&u.comps[0]), d(&u.comps[1])],
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `(int rho_bar U . perp_grad g + r g, int rho_bar U_i U_j d_j pg_i - mu d_j U_i d_j pg_i)`.
fn spatial_terms(s: &StateData, t: &TestData, params: &LimitParams, cell: f64) -> (f64, f64) {
    let rb = params.rho_bar;
    let slow = rb * (dot(&s.u[0], &t.pg[0]) + dot(&s.u[1], &t.pg[1])) + dot(&s.r, &t.g);
    let mut fast = 0.0;
    for k in 0..t.g.len() {
        let mut acc = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                acc += (rb * s.u[i][k] * s.u[j][k] - params.mu * s.du[i][j][k]) * t.dpg[i][j][k];
            }
        }
        fast += acc;
    }
    (slow * cell, fast * cell)
}

/// Residual for each test function. `trajectory` holds `(t_i, r(t_i))` on the
/// horizontal grid starting at `t = 0`; `r0`, `u0` are the vertical means of
/// the data in the same coordinates.
pub fn weak_form_residuals(
    trajectory: &[(f64, SpectralField)],
    r0: &SpectralField,
    u0: &VectorField,
    params: &LimitParams,
    battery: &[TestFunction],
) -> Result<Vec<f64>> {
    let times: Vec<f64> = trajectory.iter().map(|(t, _)| *t).collect();
    let w = trapezoid_weights(&times)?;
    if times[0].abs() > 1e-12 {
        return Err(Error::Param("trajectory must start at t = 0".into()));
    }
    let grid = *trajectory[0].1.grid();
    if !grid.is_horizontal() || !r0.grid().same_horizontal(&grid) || u0.dim() != 2 {
        return Err(Error::GridMismatch(
            "weak form needs horizontal fields on one grid".into(),
        ));
    }
    let t_end = times[times.len() - 1];
    let cell = grid.dx() * grid.dx();
    let tests = battery
        .iter()
        .map(|f| {
            f.time.validate()?;
            let after = f.time.rise.is_some_and(|r| r.0 >= t_end);
            if !after && f.time.end() > t_end + 1e-12 {
                return Err(Error::Param(format!(
                    "test function support ends at {} after the trajectory end {t_end}",
                    f.time.end()
                )));
            }
            TestData::new(f, &grid)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut res = vec![0.0; battery.len()];
    let init = StateData::from_parts(r0, u0);
    for (k, (f, td)) in battery.iter().zip(&tests).enumerate() {
        let (th0, _) = f.time.eval(0.0);
        if th0 != 0.0 {
            res[k] += th0 * spatial_terms(&init, td, params, cell).0;
        }
    }
    for ((t, r), wi) in trajectory.iter().zip(&w) {
        let active: Vec<usize> = (0..battery.len())
            .filter(|&k| {
                let (th, dth) = battery[k].time.eval(*t);
                th != 0.0 || dth != 0.0
            })
            .collect();
        if active.is_empty() {
            continue;
        }
        let sd = StateData::new(r, params);
        for k in active {
            let (th, dth) = battery[k].time.eval(*t);
            let (slow, fast) = spatial_terms(&sd, &tests[k], params, cell);
            res[k] += wi * (dth * slow + th * fast);
        }
    }
    Ok(res)
}

/// Largest absolute residual over the battery.
pub fn weak_form_residual(
    trajectory: &[(f64, SpectralField)],
    r0: &SpectralField,
    u0: &VectorField,
    params: &LimitParams,
    battery: &[TestFunction],
) -> Result<f64> {
    Ok(weak_form_residuals(trajectory, r0, u0, params, battery)?
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs())))
}
