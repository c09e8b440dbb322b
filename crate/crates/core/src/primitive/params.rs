use serde::{Deserialize, Serialize};

use super::pressure::PressureLaw;
use crate::error::{Error, Result};

/// Parameters of the scaled compressible system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrimParams {
    /// Rossby/Mach parameter `eps` in `(0, 1]`.
    pub epsilon: f64,
    /// Viscosity `mu > 0`.
    pub mu: f64,
    /// Adiabatic exponent `gamma > 3/2`.
    pub gamma: f64,
    /// Background density `rho_bar > 0`.
    pub rho_bar: f64,
    /// Coefficient `kappa` of `p = kappa rho^gamma`.
    pub pressure_coeff: f64,
}

impl Default for PrimParams {
    fn default() -> Self {
        Self {
            epsilon: 0.1,
            mu: 0.1,
            gamma: 2.0,
            rho_bar: 1.0,
            pressure_coeff: 1.0,
        }
    }
}

impl PrimParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::Param(format!(
                "epsilon must lie in (0, 1], got {}",
                self.epsilon
            )));
        }
        if !(self.gamma.is_finite() && self.gamma > 1.5) {
            return Err(Error::Param(format!("gamma must exceed 3/2, got {}", self.gamma)));
        }
        for (name, v) in [
            ("mu", self.mu),
            ("rho_bar", self.rho_bar),
            ("pressure_coeff", self.pressure_coeff),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Param(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    pub fn pressure(&self) -> PressureLaw {
        PressureLaw {
            kappa: self.pressure_coeff,
            gamma: self.gamma,
        }
    }

    /// `p'(rho_bar)`.
    pub fn p_prime(&self) -> f64 {
        self.pressure().dp(self.rho_bar)
    }

    /// Sound speed `sqrt(p'(rho_bar))` of the fast linear system.
    pub fn sound_speed(&self) -> f64 {
        self.p_prime().sqrt()
    }

    /// Pressure coefficient giving `p'(rho_bar) = 1`.
    pub fn unit_sound_speed_coeff(gamma: f64, rho_bar: f64) -> f64 {
        1.0 / (gamma * rho_bar.powf(gamma - 1.0))
    }
}
