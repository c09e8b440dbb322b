use crate::error::{Error, Result};

/// Isentropic pressure law `p(rho) = kappa rho^gamma`.
///
/// With `H(rho) = rho int_1^rho p(z)/z^2 dz = (p(rho) - kappa rho)/(gamma - 1)`
/// the relative energy is
/// `E(rho, rho_bar) = (p(rho) - p(rho_bar) - p'(rho_bar)(rho - rho_bar)) / (gamma - 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressureLaw {
    pub kappa: f64,
    pub gamma: f64,
}

impl PressureLaw {
    pub fn p(&self, rho: f64) -> f64 {
        self.kappa * rho.powf(self.gamma)
    }

    pub fn dp(&self, rho: f64) -> f64 {
        self.kappa * self.gamma * rho.powf(self.gamma - 1.0)
    }

    pub fn h(&self, rho: f64) -> f64 {
        (self.p(rho) - self.kappa * rho) / (self.gamma - 1.0)
    }

    /// `p(rho) - p(rho_bar) - p'(rho_bar)(rho - rho_bar)`, evaluated without
    /// cancellation for `rho` close to `rho_bar`.
    pub fn remainder(&self, rho: f64, rho_bar: f64) -> f64 {
        let x = (rho - rho_bar) / rho_bar;
        self.kappa * rho_bar.powf(self.gamma) * taylor_tail(self.gamma, x)
    }

    pub fn relative_energy(&self, rho: f64, rho_bar: f64) -> f64 {
        self.remainder(rho, rho_bar) / (self.gamma - 1.0)
    }

    /// `(p, H, E)` at each sample, rejecting nonpositive densities.
    pub fn suite(&self, rho: &[f64], rho_bar: f64) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
        if let Some((i, v)) = rho.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
            return Err(Error::Positivity {
                value: *v,
                i1: i,
                i2: 0,
                i3: 0,
                t: f64::NAN,
            });
        }
        Ok((
            rho.iter().map(|r| self.p(*r)).collect(),
            rho.iter().map(|r| self.h(*r)).collect(),
            rho.iter().map(|r| self.relative_energy(*r, rho_bar)).collect(),
        ))
    }
}

/// `(1 + x)^g - 1 - g x`.
fn taylor_tail(g: f64, x: f64) -> f64 {
    if x.abs() < 0.5 {
        // binomial series from the quadratic term on; the closed form cancels badly here
        let mut term = g * (g - 1.0) / 2.0 * x * x;
        let mut acc = term;
        for j in 3..80 {
            term *= (g - (j - 1) as f64) / j as f64 * x;
            acc += term;
            if term.abs() <= 1e-17 * acc.abs() {
                break;
            }
        }
        acc
    } else {
        (g * x.ln_1p()).exp_m1() - g * x
    }
}
