//! The two-dimensional limit equation for the stream function `r(x1, x2)`:
//!
//! `d_t (Delta_h r - r/p') + grad_perp r . grad_h Delta_h r = (mu/rho_bar) Delta_h^2 r`,
//!
//! with `grad_perp r = (d2 r, -d1 r)`, horizontal velocity
//! `U_h = (p'/rho_bar) grad_perp r`, and initial datum from the elliptic
//! problem `-Delta_h r + r/p' = rho_bar avg(curl_h U_0h) + avg(r0)`.

pub mod energy;
pub mod params;
pub mod solver;
pub mod stability;

pub use energy::{energy_budget, energy_diagnostics, EnergyReport};
pub use params::LimitParams;
pub use solver::{
    apply_elliptic, default_dt, initial_datum_rhs, max_speed, rhs_nonlinear, solve_elliptic,
    solve_initial_datum, step, velocity_from_stream, LimitSolver,
};
pub use stability::{stability_gap, StabilityReport};
