//! The linear acoustic-Coriolis operator of the fast dynamics.
//!
//! In Fourier variables each mode `(xi, k)` carries a 4x4 skew-Hermitian
//! symbol acting on `(r, V1, V2, V3)`. Its eigenvalues are
//! `{+-i sqrt(mu_plus), +-i sqrt(mu_minus)}` with
//! `mu_pm = (S +- sqrt(S^2 - 4k^2)) / 2`, `S = 1 + |xi|^2 + k^2`, and the
//! kernel consists of `x3`-independent geostrophically balanced states.
//!
//! Everything is written for unit sound speed `sqrt(p'(rho_bar))`; a general
//! sound speed `c` enters through the scaled density variable `c r`, which
//! amounts to replacing `(xi, k)` by `(c xi, c k)` in the symbol.

pub mod propagator;
pub mod rage;
pub mod state;
pub mod symbol;

pub use propagator::{kernel_projection, kernel_projection_with_speed, nonkernel_part, Propagator};
pub use rage::{
    free_time_averaged_nonkernel_energy, mean_nonkernel_energy, rage_envelope, single_mode_average_factor,
    time_averaged_nonkernel_energy, windowed_energy, TimeAverager,
};
pub use state::AcousticState;
pub use symbol::{
    eigen_closed_form, eigen_closed_form_with_speed, eigen_oracle, eigen_oracle_symbol, mode_symbol,
    mode_symbol_with_speed, ClosedFormSpectrum, EigenData, Mat4, ModeSymbol,
};
