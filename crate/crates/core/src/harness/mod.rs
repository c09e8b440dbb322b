//! Convergence harness: runs the primitive system across a list of `eps`
//! values against one limit trajectory and measures how the solutions
//! approach it.
//!
//! On the periodic box the fast waves do not disperse, so the oscillating
//! part of `u_eps` keeps its energy. Quantities that converge in a weak
//! sense are therefore measured on time means over `(0, T)`; the space-time
//! errors `err_u`, `err_r` are the strong norms.

pub mod profiles;
pub mod rage;
pub mod reference;
pub mod sweep;
pub mod weak_form;

pub use profiles::{geostrophic_velocity, ProfileKind, ProfileSpec, Profiles};
pub use rage::{rage_decay_report, RageAccumulator, RageReport};
pub use reference::{reference_initial_datum, LimitReference, LimitSample};
pub use sweep::{run_sweep, strictly_decreasing, ConvergenceReport, ConvergenceRow, SweepConfig};
pub use weak_form::{default_battery, weak_form_residual, weak_form_residuals, TestFunction, TimeProfile};
