use serde::Serialize;

use super::params::PrimParams;
use super::state::{FluidState, PhysicalFields};
use super::stepper::velocity_field;
use crate::error::Result;
use crate::spectral::{d_x1, d_x2, d_x3, inverse_transform, smooth_step, GridSpec, VectorField};

fn quad(g: &GridSpec, f: impl Fn(usize) -> f64) -> f64 {
    let mut acc = 0.0;
    for col in 0..g.nh * g.nh {
        for j in 0..g.nv {
            acc += g.sample_weight(j) * f(col * g.nv + j);
        }
    }
    acc
}

/// Samples of `d_j u_i`, indexed `[i][j]`.
pub fn velocity_gradient(u: &VectorField) -> [[Vec<f64>; 3]; 3] {
    [0, 1, 2].map(|i| {
        let c = &u.comps[i];
        [
            inverse_transform(&d_x1(c)),
            inverse_transform(&d_x2(c)),
            inverse_transform(&d_x3(c)),
        ]
    })
}

/// Viscous stress `S = mu (grad u + grad u^T - (2/3) div u I)` at sample `p`.
fn stress_at(gu: &[[Vec<f64>; 3]; 3], mu: f64, p: usize) -> [[f64; 3]; 3] {
    let d = gu[0][0][p] + gu[1][1][p] + gu[2][2][p];
    let mut s = [[0.0; 3]; 3];
    for (i, row) in s.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = mu * (gu[i][j][p] + gu[j][i][p] - if i == j { 2.0 / 3.0 * d } else { 0.0 });
        }
    }
    s
}

/// Pointwise `S(grad u) : grad u`, which equals `(1/(2 mu)) |S|^2 >= 0`.
pub fn dissipation_density(u: &VectorField, mu: f64) -> Vec<f64> {
    let gu = velocity_gradient(u);
    (0..gu[0][0].len())
        .map(|p| {
            let s = stress_at(&gu, mu, p);
            let mut acc = 0.0;
            for (i, row) in s.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    acc += v * gu[i][j][p];
                }
            }
            acc
        })
        .collect()
}

/// Energy terms of the compressible system at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergySample {
    pub t: f64,
    /// `int |V|^2 / (2 rho)`.
    pub kinetic: f64,
    /// `eps^{-2} int E(rho, rho_bar)`.
    pub potential_over_eps2: f64,
    /// `int S(grad u) : grad u`.
    pub dissipation_rate: f64,
}

pub fn energy_sample(state: &FluidState, params: &PrimParams) -> Result<EnergySample> {
    let g = *state.grid();
    let ph = state.physical()?;
    let u = velocity_field(&g, &ph)?;
    let law = params.pressure();
    let eps2 = params.epsilon * params.epsilon;
    let dens = dissipation_density(&u, params.mu);
    Ok(EnergySample {
        t: state.t,
        kinetic: quad(&g, |p| {
            0.5 * (ph.v[0][p] * ph.u[0][p] + ph.v[1][p] * ph.u[1][p] + ph.v[2][p] * ph.u[2][p])
        }),
        potential_over_eps2: quad(&g, |p| law.relative_energy(ph.rho[p], params.rho_bar)) / eps2,
        dissipation_rate: quad(&g, |p| dens[p]),
    })
}

/// Energy inequality audit along sampled output times.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyAudit {
    pub samples: Vec<EnergySample>,
    /// `int_0^t int S : grad u`, trapezoid in time.
    pub dissipated: Vec<f64>,
    /// `LHS(t) - RHS`: energy plus dissipated minus initial energy.
    pub budget_drift: Vec<f64>,
}

impl EnergyAudit {
    pub fn initial_energy(&self) -> f64 {
        self.samples
            .first()
            .map(|s| s.kinetic + s.potential_over_eps2)
            .unwrap_or(0.0)
    }

    /// `max |LHS - RHS| / RHS` (0 for a fluid at rest).
    pub fn max_relative_drift(&self) -> f64 {
        let e0 = self.initial_energy();
        if e0 == 0.0 {
            return 0.0;
        }
        self.budget_drift.iter().fold(0.0f64, |m, d| m.max(d.abs())) / e0
    }

    /// Largest positive excess of `LHS` over `RHS`.
    pub fn max_excess(&self) -> f64 {
        self.budget_drift.iter().fold(0.0f64, |m, d| m.max(*d))
    }
}

pub fn energy_inequality_check(samples: &[EnergySample]) -> EnergyAudit {
    let mut dissipated = Vec::with_capacity(samples.len());
    let mut drift = Vec::with_capacity(samples.len());
    let mut acc = 0.0;
    let e0 = samples
        .first()
        .map(|s| s.kinetic + s.potential_over_eps2)
        .unwrap_or(0.0);
    for (i, s) in samples.iter().enumerate() {
        if i > 0 {
            let p = &samples[i - 1];
            acc += 0.5 * (s.t - p.t) * (s.dissipation_rate + p.dissipation_rate);
        }
        dissipated.push(acc);
        drift.push(s.kinetic + s.potential_over_eps2 + acc - e0);
    }
    EnergyAudit {
        samples: samples.to_vec(),
        dissipated,
        budget_drift: drift,
    }
}

/// Density cutoff `psi`: 1 on `[a1, b1]`, 0 outside `[a0, b0]`, smooth between.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutoffSpec {
    pub a0: f64,
    pub a1: f64,
    pub b1: f64,
    pub b0: f64,
}

impl CutoffSpec {
    /// 1 on `[rho_bar/2, 2 rho_bar]`, 0 outside `[rho_bar/4, 4 rho_bar]`.
    pub fn around(rho_bar: f64) -> Self {
        Self {
            a0: 0.25 * rho_bar,
            a1: 0.5 * rho_bar,
            b1: 2.0 * rho_bar,
            b0: 4.0 * rho_bar,
        }
    }

    pub fn psi(&self, rho: f64) -> f64 {
        if rho <= self.a1 {
            smooth_step((rho - self.a0) / (self.a1 - self.a0))
        } else if rho <= self.b1 {
            1.0
        } else {
            1.0 - smooth_step((rho - self.b1) / (self.b0 - self.b1))
        }
    }
}

/// Norms of the essential/residual decomposition `[h]_ess = psi(rho) h`,
/// `[h]_res = (1 - psi(rho)) h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EssResNorms {
    /// `||[r]_ess||_{L^2}` with `r = (rho - rho_bar)/eps`.
    pub ess_r_l2: f64,
    /// `||[rho]_res||_{L^gamma}^gamma`.
    pub res_rho_gamma: f64,
    /// `||[1]_res||_{L^1}`.
    pub res_measure: f64,
}

pub fn essential_residual_split(state: &FluidState, cutoff: &CutoffSpec, gamma: f64) -> Result<EssResNorms> {
    let g = *state.grid();
    let rho = state.rho_samples();
    state.check_positive(&rho)?;
    let r: Vec<f64> = rho.iter().map(|v| (v - state.rho_bar) / state.epsilon).collect();
    let psi: Vec<f64> = rho.iter().map(|v| cutoff.psi(*v)).collect();
    Ok(EssResNorms {
        ess_r_l2: quad(&g, |p| (psi[p] * r[p]).powi(2)).sqrt(),
        res_rho_gamma: quad(&g, |p| ((1.0 - psi[p]) * rho[p]).abs().powf(gamma)),
        res_measure: quad(&g, |p| 1.0 - psi[p]),
    })
}

/// Norms of the forcing decomposition of the fast system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ForcingNorms {
    /// `||F1||_{L^1}`, `F1 = -rho u (x) u - eps^{-2} R(rho) I`.
    pub f1_l1: f64,
    /// `||F2||_{L^2}`, `F2 = S(grad u)`.
    pub f2_l2: f64,
}

fn forcing_from(g: &GridSpec, ph: &PhysicalFields, u: &VectorField, params: &PrimParams) -> ForcingNorms {
    let gu = velocity_gradient(u);
    let law = params.pressure();
    let eps2 = params.epsilon * params.epsilon;
    let f2 = quad(g, |p| {
        let s = stress_at(&gu, params.mu, p);
        s.iter().flatten().map(|v| v * v).sum::<f64>()
    });
    let f1 = quad(g, |p| {
        let rem = law.remainder(ph.rho[p], params.rho_bar) / eps2;
        let mut acc = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let v = -ph.v[i][p] * ph.u[j][p] - if i == j { rem } else { 0.0 };
                acc += v * v;
            }
        }
        acc.sqrt()
    });
    ForcingNorms {
        f1_l1: f1,
        f2_l2: f2.sqrt(),
    }
}

pub fn forcing_norms(state: &FluidState, params: &PrimParams) -> Result<ForcingNorms> {
    let g = *state.grid();
    let ph = state.physical()?;
    let u = velocity_field(&g, &ph)?;
    Ok(forcing_from(&g, &ph, &u, params))
}
