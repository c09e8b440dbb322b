use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Mat4 = Matrix4<Complex64>;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Fourier symbol of the acoustic-Coriolis operator at one mode.
///
/// Unknowns are ordered `(s, V1, V2, V3)` with `s = c r` and `c` the sound
/// speed `sqrt(p'(rho_bar))`; the linear system reads `eps d_t x = -M x`.
/// For `c = 1` this is exactly the operator of the normalised problem, and
/// general `c` is the same matrix with `(xi, k)` replaced by `(c xi, c k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSymbol {
    pub xi: (f64, f64),
    pub k: f64,
    pub sound_speed: f64,
    pub matrix: Mat4,
}

/// Eigenvalues `lambda` of `M` (purely imaginary) with orthonormal
/// eigenvectors stored as matrix columns, sorted by `Im lambda`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenData {
    pub eigenvalues: [Complex64; 4],
    pub eigenvectors: Mat4,
}

/// Closed-form spectrum: `lambda^2 = -mu` with `mu_plus * mu_minus = c^2 k^2`
/// and `mu_plus + mu_minus = 1 + c^2 (|xi|^2 + k^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormSpectrum {
    pub mu_plus: f64,
    pub mu_minus: f64,
    /// `{-i sqrt(mu_plus), -i sqrt(mu_minus), i sqrt(mu_minus), i sqrt(mu_plus)}`.
    pub eigenvalues: [Complex64; 4],
}

pub fn mode_symbol(xi: (f64, f64), k: f64) -> ModeSymbol {
    mode_symbol_with_speed(xi, k, 1.0)
}

pub fn mode_symbol_with_speed(xi: (f64, f64), k: f64, c: f64) -> ModeSymbol {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let a1 = I * (c * xi.0);
    let a2 = I * (c * xi.1);
    let a3 = I * (c * k);
    #[rustfmt::skip]
    let matrix = Mat4::new(
        z,  a1,   a2, a3,
        a1, z,   -one, z,
        a2, one,  z,   z,
        a3, z,    z,   z,
    );
    ModeSymbol {
        xi,
        k,
        sound_speed: c,
        matrix,
    }
}

pub fn eigen_closed_form(xi: (f64, f64), k: f64) -> ClosedFormSpectrum {
    eigen_closed_form_with_speed(xi, k, 1.0)
}

pub fn eigen_closed_form_with_speed(xi: (f64, f64), k: f64, c: f64) -> ClosedFormSpectrum {
    let c2 = c * c;
    let s = 1.0 + c2 * (xi.0 * xi.0 + xi.1 * xi.1 + k * k);
    let p = c2 * k * k;
    let disc = (s * s - 4.0 * p).max(0.0).sqrt();
    let mu_plus = 0.5 * (s + disc);
    // product form avoids cancellation in (s - disc) / 2
    let mu_minus = p / mu_plus;
    let wp = mu_plus.sqrt();
    let wm = mu_minus.sqrt();
    ClosedFormSpectrum {
        mu_plus,
        mu_minus,
        eigenvalues: [
            Complex64::new(0.0, -wp),
            Complex64::new(0.0, -wm),
            Complex64::new(0.0, wm),
            Complex64::new(0.0, wp),
        ],
    }
}

/// Numerical diagonalisation of the symbol through the Hermitian matrix
/// `H = i M`: `M = -i H`, so each real eigenvalue `h` of `H` gives
/// `lambda = -i h`.
pub fn eigen_oracle(xi: (f64, f64), k: f64) -> Result<EigenData> {
    eigen_oracle_symbol(&mode_symbol(xi, k))
}

pub fn eigen_oracle_symbol(sym: &ModeSymbol) -> Result<EigenData> {
    let h = sym.matrix * I;
    let eig = SymmetricEigen::try_new(h, 1e-15, 10_000)
        .ok_or_else(|| Error::Eigen(format!("no convergence at xi={:?} k={}", sym.xi, sym.k)))?;
    let mut order = [0usize, 1, 2, 3];
    // Im lambda = -h
    order.sort_by(|&a, &b| (-eig.eigenvalues[a]).total_cmp(&(-eig.eigenvalues[b])));
    let mut eigenvalues = [Complex64::new(0.0, 0.0); 4];
    let mut eigenvectors = Mat4::zeros();
    for (dst, &src) in order.iter().enumerate() {
        eigenvalues[dst] = Complex64::new(0.0, -eig.eigenvalues[src]);
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(EigenData {
        eigenvalues,
        eigenvectors,
    })
}
