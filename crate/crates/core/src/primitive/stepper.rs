use std::f64::consts::PI;
use std::sync::Arc;

use super::params::PrimParams;
use super::state::{FluidState, PhysicalFields};
use crate::acoustic::{AcousticState, Propagator};
use crate::error::{Error, Result};
use crate::spectral::{
    d_x1, d_x2, d_x3, dealias, div, forward_transform, grad, inverse_transform, laplacian, GridSpec, Parity,
    SpectralField, VectorField,
};

/// `div S(grad u) = mu (Delta u + (1/3) grad div u)`.
pub fn stress_divergence(u: &VectorField, mu: f64) -> Result<VectorField> {
    if u.dim() != 3 {
        return Err(Error::Parity(format!("stress needs a 3-vector, got {}", u.dim())));
    }
    let gd = grad(&div(u)?);
    let comps = u
        .comps
        .iter()
        .zip(&gd.comps)
        .map(|(c, g)| {
            let mut out = laplacian(c);
            out.axpy(1.0 / 3.0, g);
            out.scale(mu)
        })
        .collect();
    VectorField::new(comps)
}

fn parity_of(c: usize) -> Parity {
    if c < 2 {
        Parity::Even
    } else {
        Parity::Odd
    }
}

fn d_dir(f: &SpectralField, j: usize) -> SpectralField {
    match j {
        0 => d_x1(f),
        1 => d_x2(f),
        _ => d_x3(f),
    }
}

/// Velocity `u = V/rho` as dealiased spectral fields.
pub fn velocity_field(grid: &GridSpec, ph: &PhysicalFields) -> Result<VectorField> {
    let comps = (0..3)
        .map(|c| forward_transform(grid, &ph.u[c], parity_of(c)).map(|f| dealias(&f)))
        .collect::<Result<Vec<_>>>()?;
    VectorField::new(comps)
}

/// Remainder of the momentum equation outside the fast linear part:
/// `f = div S(grad u) - div(V (x) u) - eps^{-2} grad R(rho)` with
/// `R = p(rho) - p(rho_bar) - p'(rho_bar)(rho - rho_bar)`, dealiased.
pub fn remainder_forcing(state: &FluidState, params: &PrimParams) -> Result<VectorField> {
    let g = *state.grid();
    let ph = state.physical()?;
    let u = velocity_field(&g, &ph)?;
    let visc = stress_divergence(&u, params.mu)?;
    let law = params.pressure();
    let eps2 = params.epsilon * params.epsilon;
    let rem: Vec<f64> = ph
        .rho
        .iter()
        .map(|r| law.remainder(*r, params.rho_bar) / eps2)
        .collect();
    let grad_rem = grad(&forward_transform(&g, &rem, Parity::Even)?);

    // flux V_i u_j with the truncated velocity, so the quadratic product is
    // free of aliasing on the retained modes
    let ud = [0, 1, 2].map(|c| inverse_transform(&u.comps[c]));
    let mut flux: [[Option<SpectralField>; 3]; 3] = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            let s: Vec<f64> = ph.v[i].iter().zip(&ud[j]).map(|(a, b)| a * b).collect();
            let f = forward_transform(&g, &s, parity_of(i).product(parity_of(j)))?;
            flux[i][j] = Some(f);
        }
    }
    let mut comps = Vec::with_capacity(3);
    for i in 0..3 {
        let mut out = visc.comps[i].clone();
        out -= &grad_rem.comps[i];
        for j in 0..3 {
            let f = flux[i][j].as_ref().expect("flux filled");
            out -= &d_dir(f, j);
        }
        comps.push(dealias(&out));
    }
    VectorField::new(comps)
}

/// Time-step limits of the explicit remainder step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepLimits {
    /// `max (|u1| + |u2|)/dx + |u3|/dz`.
    pub advective_rate: f64,
    /// Largest viscous decay rate `(4/3) mu k_max^2 / rho_min`.
    pub viscous_rate: f64,
}

impl StepLimits {
    pub fn of(state: &FluidState, params: &PrimParams) -> Result<Self> {
        let g = state.grid();
        let ph = state.physical()?;
        let mut adv: f64 = 0.0;
        for i in 0..ph.rho.len() {
            let a = (ph.u[0][i].abs() + ph.u[1][i].abs()) / g.dx() + ph.u[2][i].abs() / g.dz();
            adv = adv.max(a);
        }
        let rho_min = ph.rho.iter().fold(f64::INFINITY, |m, v| m.min(*v));
        let kh = 2.0 * PI * g.horizontal_cutoff() as f64 / g.l;
        let kv = PI * g.vertical_cutoff() as f64;
        let k2 = 2.0 * kh * kh + kv * kv;
        Ok(Self {
            advective_rate: adv,
            viscous_rate: 4.0 / 3.0 * params.mu * k2 / rho_min,
        })
    }

    /// Courant number at most 1/2 and viscous product at most 1.
    pub fn suggested_dt(&self) -> f64 {
        let a = if self.advective_rate > 0.0 {
            0.5 / self.advective_rate
        } else {
            f64::INFINITY
        };
        let v = if self.viscous_rate > 0.0 {
            1.0 / self.viscous_rate
        } else {
            f64::INFINITY
        };
        a.min(v)
    }

    pub fn check(&self, dt: f64) -> Result<()> {
        let courant = dt * self.advective_rate;
        let visc = dt * self.viscous_rate;
        if courant > 1.0 || visc > 2.0 {
            return Err(Error::Cfl {
                dt,
                suggested: self.suggested_dt(),
                reason: format!(
                    "advective Courant {courant:.3} (limit 1), viscous product {visc:.3} (limit 2)"
                ),
            });
        }
        Ok(())
    }
}

/// Strang-split integrator: exact fast linear evolution around an explicit
/// midpoint step of the remainder.
#[derive(Debug, Clone)]
pub struct PrimitiveSolver {
    pub params: PrimParams,
    pub state: FluidState,
    prop: Arc<Propagator>,
}

impl PrimitiveSolver {
    pub fn new(state: FluidState, params: PrimParams) -> Result<Self> {
        params.validate()?;
        let prop = Arc::new(Propagator::new(*state.grid(), params.sound_speed())?);
        Self::with_propagator(state, params, prop)
    }

    /// Reuse a propagator built for the same grid and sound speed.
    pub fn with_propagator(state: FluidState, params: PrimParams, prop: Arc<Propagator>) -> Result<Self> {
        params.validate()?;
        if prop.grid() != state.grid() || (prop.sound_speed() - params.sound_speed()).abs() > 1e-14 {
            return Err(Error::GridMismatch(
                "propagator does not match state and parameters".into(),
            ));
        }
        if state.epsilon != params.epsilon || state.rho_bar != params.rho_bar {
            return Err(Error::Param("state scaling differs from parameters".into()));
        }
        Ok(Self { params, state, prop })
    }

    pub fn propagator(&self) -> &Arc<Propagator> {
        &self.prop
    }

    pub fn limits(&self) -> Result<StepLimits> {
        StepLimits::of(&self.state, &self.params)
    }

    fn with_momentum(&self, fast: &AcousticState, v: VectorField) -> FluidState {
        FluidState {
            fast: AcousticState { r: fast.r.clone(), v },
            ..self.state.clone()
        }
    }

    /// Advance by `dt`: half exact linear step, explicit midpoint step of
    /// `d_t V = f` with `r` frozen, half exact linear step.
    pub fn step(&mut self, dt: f64) -> Result<()> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Param(format!("time step must be positive, got {dt}")));
        }
        self.limits()?.check(dt)?;
        let eps = self.params.epsilon;
        let half = self.prop.evolve_unchecked(&self.state.fast, 0.5 * dt / eps);

        let s0 = self.with_momentum(&half, half.v.clone());
        let k1 = remainder_forcing(&s0, &self.params)?;
        let mut v_mid = half.v.clone();
        v_mid.axpy(0.5 * dt, &k1);
        let s1 = self.with_momentum(&half, v_mid);
        let k2 = remainder_forcing(&s1, &self.params)?;
        let mut v_new = half.v.clone();
        v_new.axpy(dt, &k2);

        let mid = AcousticState { r: half.r, v: v_new };
        let next = self.prop.evolve_unchecked(&mid, 0.5 * dt / eps);
        if !next.is_finite() {
            return Err(Error::NonFinite {
                t: self.state.t + dt,
                last_good: self.state.t,
            });
        }
        self.state.fast = next;
        self.state.t += dt;
        let rho = self.state.rho_samples();
        self.state.check_positive(&rho)
    }
}
