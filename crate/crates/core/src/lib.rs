//! Pseudo-spectral laboratory for the simultaneous low Mach / low Rossby
//! limit of the rotating compressible Navier-Stokes system in a slab.
//!
//! The crate is organised bottom-up:
//!
//! * [`spectral`] - grids, parity-aware transforms and Fourier multipliers
//!   on a horizontally periodic slab with complete-slip walls;
//! * [`acoustic`] - the per-mode acoustic-Coriolis operator, its spectrum,
//!   kernel projection, exact evolution and time-average measurements;
//! * [`limit`] - the 2D stream-function equation and its energy/stability
//!   machinery;
//! * [`primitive`] - the scaled compressible system, integrated by Strang
//!   splitting around the exact acoustic propagator;
//! * [`harness`] - the epsilon-sweep comparing both solvers;
//! * [`config`] and [`cli`] - flat configuration files and the command line.

// negated comparisons reject NaN together with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// tensor loops index several arrays by the same component
#![allow(clippy::needless_range_loop)]

pub mod acoustic;
pub mod cli;
pub mod config;
pub mod error;
pub mod harness;
pub mod limit;
pub mod output;
pub mod primitive;
pub mod quadrature;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex64;
