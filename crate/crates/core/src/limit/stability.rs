use serde::Serialize;

use super::params::LimitParams;
use crate::error::{Error, Result};
use crate::spectral::{grad_h, laplacian_h, SpectralField};

/// Gap between two limit trajectories against the Gronwall envelope
/// `LHS(0) exp(C sqrt(rho_bar/mu) int_0^t ||grad Delta r_1||^2 + C t)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub c: f64,
    pub times: Vec<f64>,
    /// `||Delta d||^2 + ||grad d||^2 + (mu/rho_bar) int_0^t ||grad Delta d||^2`.
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl StabilityReport {
    pub fn within(&self) -> Vec<bool> {
        self.lhs.iter().zip(&self.rhs).map(|(l, r)| l <= r).collect()
    }

    pub fn all_within(&self) -> bool {
        self.within().iter().all(|b| *b)
    }

    /// Largest `LHS / RHS` over the samples.
    pub fn worst_ratio(&self) -> f64 {
        self.lhs
            .iter()
            .zip(&self.rhs)
            .map(|(l, r)| {
                if *r > 0.0 {
                    l / r
                } else if *l > 0.0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            })
            .fold(0.0, f64::max)
    }
}

fn grad_lap_sq(f: &SpectralField) -> f64 {
    grad_h(&laplacian_h(f)).norm_sq()
}

/// Trajectories are `(t, r)` samples on a shared time mesh.
pub fn stability_gap(
    r1: &[(f64, SpectralField)],
    r2: &[(f64, SpectralField)],
    params: &LimitParams,
    c: f64,
) -> Result<StabilityReport> {
    if r1.is_empty() || r1.len() != r2.len() {
        return Err(Error::GridMismatch(format!(
            "trajectories need equal nonzero lengths, got {} and {}",
            r1.len(),
            r2.len()
        )));
    }
    for ((t1, a), (t2, b)) in r1.iter().zip(r2) {
        if t1 != t2 {
            return Err(Error::GridMismatch(format!("time meshes differ: {t1} vs {t2}")));
        }
        a.check_compatible(b)?;
    }
    let t0 = r1[0].0;
    let mut times = Vec::with_capacity(r1.len());
    let mut lhs = Vec::with_capacity(r1.len());
    let mut rhs = Vec::with_capacity(r1.len());
    let mut int_d = 0.0;
    let mut int_r1 = 0.0;
    let mut prev: Option<(f64, f64, f64)> = None;
    let mut l0 = 0.0;
    for ((t, a), (_, b)) in r1.iter().zip(r2) {
        let d = a - b;
        let gd = grad_lap_sq(&d);
        let g1 = grad_lap_sq(a);
        if let Some((tp, gdp, g1p)) = prev {
            int_d += 0.5 * (t - tp) * (gd + gdp);
            int_r1 += 0.5 * (t - tp) * (g1 + g1p);
        }
        prev = Some((*t, gd, g1));
        let base = laplacian_h(&d).norm_sq() + grad_h(&d).norm_sq();
        let l = base + params.mu / params.rho_bar * int_d;
        if times.is_empty() {
            l0 = l;
        }
        let growth = c * (params.rho_bar / params.mu).sqrt() * int_r1 + c * (t - t0);
        times.push(*t);
        lhs.push(l);
        rhs.push(l0 * growth.exp());
    }
    Ok(StabilityReport { c, times, lhs, rhs })
}
