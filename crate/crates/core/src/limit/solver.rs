use num_complex::Complex64;

use super::params::LimitParams;
use crate::error::{Error, Result};
use crate::spectral::{
    curl_h, dealias, forward_transform, grad_h, inverse_transform, laplacian_h, perp_grad_h,
    vertical_average, vertical_average_vector, GridSpec, Parity, SpectralField, VectorField,
};

/// Horizontal grid of `r`, rejecting slab grids and odd fields.
fn check_stream(r: &SpectralField) -> Result<()> {
    if !r.grid().is_horizontal() {
        return Err(Error::Grid(format!(
            "stream function must live on a horizontal grid, got {}",
            r.grid().describe()
        )));
    }
    if r.parity() != Parity::Even {
        return Err(Error::Parity("stream function must be even".into()));
    }
    Ok(())
}

#[inline]
fn xi_sq(g: &GridSpec, i1: usize, i2: usize) -> f64 {
    g.xi_deriv(i1).powi(2) + g.xi_deriv(i2).powi(2)
}

/// Right-hand side `rho_bar int_0^1 curl_h U_{0,h} dx3 + int_0^1 r0 dx3`
/// of the elliptic problem for the limit initial datum.
pub fn initial_datum_rhs(
    r0: &SpectralField,
    u0h: &VectorField,
    params: &LimitParams,
) -> Result<SpectralField> {
    if u0h.dim() != 2 {
        return Err(Error::Parity(format!(
            "U_0h needs two components, got {}",
            u0h.dim()
        )));
    }
    r0.check_compatible(&u0h.comps[0])?;
    let curl = vertical_average(&curl_h(&vertical_average_vector(u0h))?);
    let mut rhs = vertical_average(r0);
    rhs.axpy(params.rho_bar, &curl);
    Ok(rhs)
}

/// Solve `-Delta_h r + r / p' = rhs` mode by mode.
pub fn solve_elliptic(rhs: &SpectralField, params: &LimitParams) -> Result<SpectralField> {
    check_stream(rhs)?;
    let g = *rhs.grid();
    Ok(rhs.map_modes(|i1, i2, _, c| c / params.elliptic_symbol(xi_sq(&g, i1, i2))))
}

/// Limit initial datum: the unique solution of the elliptic problem with the
/// vertically averaged data.
pub fn solve_initial_datum(
    r0: &SpectralField,
    u0h: &VectorField,
    params: &LimitParams,
) -> Result<SpectralField> {
    solve_elliptic(&initial_datum_rhs(r0, u0h, params)?, params)
}

/// `-Delta_h r + r / p'`.
pub fn apply_elliptic(r: &SpectralField, params: &LimitParams) -> SpectralField {
    let mut out = laplacian_h(r).scale(-1.0);
    out.axpy(1.0 / params.p_prime, r);
    out
}

/// `U_h = (p'/rho_bar) (d2 r, -d1 r)`.
pub fn velocity_from_stream(r: &SpectralField, params: &LimitParams) -> VectorField {
    perp_grad_h(r).scale(params.velocity_factor())
}

/// Dealiased pseudo-spectral `grad_perp r . grad(Delta r)`.
pub fn rhs_nonlinear(r: &SpectralField) -> Result<SpectralField> {
    check_stream(r)?;
    let a = perp_grad_h(r);
    let b = grad_h(&laplacian_h(r));
    let pa: Vec<Vec<f64>> = a.comps.iter().map(inverse_transform).collect();
    let pb: Vec<Vec<f64>> = b.comps.iter().map(inverse_transform).collect();
    let prod: Vec<f64> = (0..pa[0].len())
        .map(|i| pa[0][i] * pb[0][i] + pa[1][i] * pb[1][i])
        .collect();
    Ok(dealias(&forward_transform(r.grid(), &prod, Parity::Even)?))
}

/// Largest `|U_h|` over the grid samples.
pub fn max_speed(r: &SpectralField, params: &LimitParams) -> f64 {
    let u = velocity_from_stream(r, params);
    let p1 = inverse_transform(&u.comps[0]);
    let p2 = inverse_transform(&u.comps[1]);
    p1.iter().zip(&p2).map(|(a, b)| a.hypot(*b)).fold(0.0, f64::max)
}

/// Default step `0.5 dx / max |U_h|` (infinite for a fluid at rest).
pub fn default_dt(r: &SpectralField, params: &LimitParams) -> f64 {
    let umax = max_speed(r, params);
    if umax == 0.0 {
        f64::INFINITY
    } else {
        0.5 * r.grid().dx() / umax
    }
}

/// One integrating-factor midpoint step of
/// `d_t (Delta r - r/p') + grad_perp r . grad Delta r = (mu/rho_bar) Delta^2 r`.
///
/// With `q = -(|xi|^2 + 1/p') r` the equation is `q' = -nu q - N(r)`, the
/// linear part is integrated exactly and `N` by the explicit midpoint rule.
pub fn step(r: &SpectralField, dt: f64, params: &LimitParams) -> Result<SpectralField> {
    check_stream(r)?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Param(format!("time step must be positive, got {dt}")));
    }
    let courant = dt * max_speed(r, params) / r.grid().dx();
    if courant > 1.0 {
        return Err(Error::Cfl {
            dt,
            suggested: default_dt(r, params),
            reason: format!("advective Courant number {courant:.3} > 1"),
        });
    }
    let g = *r.grid();
    let sym = |i1: usize, i2: usize| params.elliptic_symbol(xi_sq(&g, i1, i2));
    let decay = |i1: usize, i2: usize, tau: f64| (-params.decay_rate(xi_sq(&g, i1, i2)) * tau).exp();

    let n0 = rhs_nonlinear(r)?;
    // r_half from q_half = e^{-nu dt/2} (q - dt/2 N)
    let mut r_half = r.clone();
    let mut r_new = r.clone();
    for i1 in 0..g.nh {
        for i2 in 0..g.nh {
            let s = sym(i1, i2);
            let q = -s * r.get(i1, i2, 0);
            let qh = decay(i1, i2, 0.5 * dt) * (q - 0.5 * dt * n0.get(i1, i2, 0));
            r_half.set(i1, i2, 0, -qh / s);
        }
    }
    let nh = rhs_nonlinear(&r_half)?;
    for i1 in 0..g.nh {
        for i2 in 0..g.nh {
            let s = sym(i1, i2);
            let q = -s * r.get(i1, i2, 0);
            let qn: Complex64 = decay(i1, i2, dt) * q - dt * decay(i1, i2, 0.5 * dt) * nh.get(i1, i2, 0);
            r_new.set(i1, i2, 0, -qn / s);
        }
    }
    Ok(r_new)
}

/// Limit solver state: stream function and time.
#[derive(Debug, Clone)]
pub struct LimitSolver {
    pub params: LimitParams,
    pub r: SpectralField,
    pub t: f64,
}

impl LimitSolver {
    pub fn new(r: SpectralField, params: LimitParams) -> Result<Self> {
        check_stream(&r)?;
        if params.mu != 0.0 {
            params.validate()?;
        }
        Ok(Self {
            params,
            r: dealias(&r),
            t: 0.0,
        })
    }

    pub fn step(&mut self, dt: f64) -> Result<()> {
        let next = step(&self.r, dt, &self.params)?;
        if !next.is_finite() {
            return Err(Error::NonFinite {
                t: self.t + dt,
                last_good: self.t,
            });
        }
        self.r = next;
        self.t += dt;
        Ok(())
    }

    pub fn velocity(&self) -> VectorField {
        velocity_from_stream(&self.r, &self.params)
    }
}
