//! Function spaces on the horizontally periodic slab.
//!
//! The unbounded horizontal plane is replaced by a periodic box of side `L`;
//! the complete-slip walls at `x3 = 0, 1` are handled by even/odd reflection,
//! so every field is a cosine (even) or sine (odd) series in `x3`. All
//! differential operators are exact Fourier multipliers.

pub mod field;
pub mod grid;
pub mod io;
pub mod ops;
pub mod transform;
pub mod window;

pub use field::{SpectralField, VectorField};
pub use grid::{GridSpec, Parity};
pub use ops::{
    bilaplacian_h, curl_h, d_x1, d_x2, d_x3, dealias, dealias_vector, div, div_h, extend_vertically, grad,
    grad_h, laplacian, laplacian_h, mirror_x2, mirror_x2_vector, perp_grad_h, product, truncate_to_cutoff,
    vertical_average, vertical_average_vector,
};
pub use transform::{forward_transform, integrate, inverse_transform, project, sample};
pub use window::{local_l2_norm, local_l2_norm_many, smooth_step, smooth_step_deriv, Window};
