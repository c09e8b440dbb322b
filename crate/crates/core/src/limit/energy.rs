use serde::Serialize;

use super::params::LimitParams;
use crate::spectral::{grad_h, laplacian_h, SpectralField};

/// Energy quantities of the limit equation at one time.
///
/// Multiplying the equation by `Delta_h r` gives
/// `d/dt (||Delta r||^2 + ||grad r||^2 / p') + (2 mu / rho_bar) ||grad Delta r||^2 = 0`;
/// for `p' = 1` this is the plain sum of the first two norms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyReport {
    pub t: f64,
    pub lap_norm_sq: f64,
    pub grad_norm_sq: f64,
    /// `(2 mu / rho_bar) ||grad_h Delta_h r||^2`.
    pub dissipation: f64,
}

impl EnergyReport {
    /// `||Delta r||^2 + ||grad r||^2 / p'`, the quantity dissipated at rate
    /// [`EnergyReport::dissipation`].
    pub fn energy(&self, params: &LimitParams) -> f64 {
        self.lap_norm_sq + self.grad_norm_sq / params.p_prime
    }
}

pub fn energy_diagnostics(r: &SpectralField, t: f64, params: &LimitParams) -> EnergyReport {
    let lap = laplacian_h(r);
    EnergyReport {
        t,
        lap_norm_sq: lap.norm_sq(),
        grad_norm_sq: grad_h(r).norm_sq(),
        dissipation: 2.0 * params.mu / params.rho_bar * grad_h(&lap).norm_sq(),
    }
}

/// Energy budget along a sampled trajectory: `energy(t) + int_0^t dissipation`
/// with the time integral by the trapezoid rule. Returns the budget per
/// sample and the largest relative deviation from its initial value.
pub fn energy_budget(reports: &[EnergyReport], params: &LimitParams) -> (Vec<f64>, f64) {
    let mut out = Vec::with_capacity(reports.len());
    let mut dissipated = 0.0;
    for (i, rep) in reports.iter().enumerate() {
        if i > 0 {
            let prev = &reports[i - 1];
            dissipated += 0.5 * (rep.t - prev.t) * (rep.dissipation + prev.dissipation);
        }
        out.push(rep.energy(params) + dissipated);
    }
    let e0 = out.first().copied().unwrap_or(0.0);
    let drift = if e0 > 0.0 {
        out.iter().map(|b| (b - e0).abs() / e0).fold(0.0, f64::max)
    } else {
        0.0
    };
    (out, drift)
}
