//! The scaled rotating compressible Navier-Stokes system
//!
//! `d_t rho + div(rho u) = 0`,
//! `d_t(rho u) + div(rho u (x) u) + (1/eps) g x rho u + (1/eps^2) grad p(rho) = div S(grad u)`,
//!
//! with `g = (0, 0, 1)` and complete-slip walls, written in the variables
//! `r = (rho - rho_bar)/eps`, `V = rho u` as the fast linear system plus a
//! remainder:
//!
//! `eps d_t r + div V = 0`, `eps d_t V + g x V + p'(rho_bar) grad r = eps f`.

pub mod diagnostics;
pub mod params;
pub mod pressure;
pub mod state;
pub mod stepper;

pub use diagnostics::{
    dissipation_density, energy_inequality_check, energy_sample, essential_residual_split, forcing_norms,
    velocity_gradient, CutoffSpec, EnergyAudit, EnergySample, EssResNorms, ForcingNorms,
};
pub use params::PrimParams;
pub use pressure::PressureLaw;
pub use state::{make_ill_prepared_data, FluidState, PhysicalFields};
pub use stepper::{remainder_forcing, stress_divergence, velocity_field, PrimitiveSolver, StepLimits};
