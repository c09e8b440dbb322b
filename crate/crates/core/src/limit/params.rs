use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical parameters of the limit equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitParams {
    /// Viscosity `mu > 0`.
    pub mu: f64,
    /// Background density `rho_bar > 0`.
    pub rho_bar: f64,
    /// `p'(rho_bar) > 0`.
    pub p_prime: f64,
}

impl Default for LimitParams {
    fn default() -> Self {
        Self {
            mu: 1.0,
            rho_bar: 1.0,
            p_prime: 1.0,
        }
    }
}

impl LimitParams {
    pub fn new(mu: f64, rho_bar: f64, p_prime: f64) -> Result<Self> {
        let p = Self { mu, rho_bar, p_prime };
        p.validate()?;
        Ok(p)
    }

    /// `mu = 0` is accepted only by [`LimitParams::inviscid`], for audits of
    /// the conservative part of the dynamics.
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("mu", self.mu),
            ("rho_bar", self.rho_bar),
            ("p_prime", self.p_prime),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Param(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    pub fn inviscid(rho_bar: f64, p_prime: f64) -> Result<Self> {
        let p = Self {
            mu: 1.0,
            rho_bar,
            p_prime,
        };
        p.validate()?;
        Ok(Self { mu: 0.0, ..p })
    }

    /// `p'(rho_bar) / rho_bar`, the factor relating velocity to `grad_perp r`.
    pub fn velocity_factor(&self) -> f64 {
        self.p_prime / self.rho_bar
    }

    /// Symbol of `-Delta_h + 1/p'` at horizontal wavenumber magnitude squared.
    #[inline]
    pub fn elliptic_symbol(&self, xi_sq: f64) -> f64 {
        xi_sq + 1.0 / self.p_prime
    }

    /// Linear decay rate `(mu/rho_bar) |xi|^4 / (|xi|^2 + 1/p')`.
    #[inline]
    pub fn decay_rate(&self, xi_sq: f64) -> f64 {
        self.mu / self.rho_bar * xi_sq * xi_sq / self.elliptic_symbol(xi_sq)
    }
}
