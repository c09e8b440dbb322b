use num_complex::Complex64;

use super::state::AcousticState;
use super::symbol::{eigen_oracle_symbol, mode_symbol_with_speed, Mat4};
use crate::error::{Error, Result};
use crate::spectral::GridSpec;

type Vec4 = [Complex64; 4];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone)]
enum ModeEntry {
    /// `xi = k = 0` (in derivative wavenumbers): pure inertial rotation, exact.
    Rotation,
    /// Eigendecomposition `i M = V diag(h) V^*`.
    Eigen {
        h: [f64; 4],
        vecs: Box<Mat4>,
        self_partner: bool,
    },
    /// Conjugate partner of the canonical mode at the given flat index.
    Mirror(usize),
}

/// Exact per-mode evolution `exp(-(t/eps) M)` on a grid, with
/// eigendecompositions built once and reused.
///
/// States are `(r, V)`; internally the scaled variable `s = c r` is used so
/// that the symbol is skew-Hermitian for every sound speed `c`, and the
/// conserved quantity is `c^2 ||r||^2 + ||V||^2`. Realness is preserved
/// exactly: only one mode of each conjugate pair is diagonalised and its
/// partner evolves by the conjugate-symmetric image.
#[derive(Debug, Clone)]
pub struct Propagator {
    grid: GridSpec,
    c: f64,
    modes: Vec<ModeEntry>,
}

/// `diag(1, 1, 1, -1)`: the last component is odd in `x3`, so its realness
/// relation carries the opposite sign.
#[inline]
fn j_conj(x: &Vec4) -> Vec4 {
    [x[0].conj(), x[1].conj(), x[2].conj(), -x[3].conj()]
}

impl Propagator {
    pub fn new(grid: GridSpec, sound_speed: f64) -> Result<Self> {
        if !(sound_speed.is_finite() && sound_speed > 0.0) {
            return Err(Error::Param(format!(
                "sound speed must be positive, got {sound_speed}"
            )));
        }
        let mut modes = Vec::with_capacity(grid.len());
        for i1 in 0..grid.nh {
            let j1 = grid.index_of_mode(-grid.mode_number(i1));
            for i2 in 0..grid.nh {
                let j2 = grid.index_of_mode(-grid.mode_number(i2));
                for n in 0..grid.nv {
                    let a = grid.index(i1, i2, n);
                    let b = grid.index(j1, j2, n);
                    let xi = (grid.xi_deriv(i1), grid.xi_deriv(i2));
                    let k = grid.k_deriv(n);
                    let entry = if xi == (0.0, 0.0) && k == 0.0 {
                        ModeEntry::Rotation
                    } else if b < a {
                        ModeEntry::Mirror(b)
                    } else {
                        let sym = mode_symbol_with_speed(xi, k, sound_speed);
                        let e = eigen_oracle_symbol(&sym)?;
                        ModeEntry::Eigen {
                            // Im lambda = -h
                            h: e.eigenvalues.map(|l| -l.im),
                            vecs: Box::new(e.eigenvectors),
                            self_partner: a == b,
                        }
                    };
                    modes.push(entry);
                }
            }
        }
        Ok(Self {
            grid,
            c: sound_speed,
            modes,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn sound_speed(&self) -> f64 {
        self.c
    }

    /// Imaginary parts of the four eigenvalues at a flat mode index.
    pub fn frequencies(&self, idx: usize) -> [f64; 4] {
        match &self.modes[idx] {
            ModeEntry::Rotation => [-1.0, 0.0, 0.0, 1.0],
            ModeEntry::Eigen { h, .. } => h.map(|v| -v),
            ModeEntry::Mirror(b) => self.frequencies(*b),
        }
    }

    fn apply_eigen(h: &[f64; 4], vecs: &Mat4, x: &Vec4, tau: f64) -> Vec4 {
        let mut y = [ZERO; 4];
        for (j, yj) in y.iter_mut().enumerate() {
            let mut acc = ZERO;
            for (i, xi) in x.iter().enumerate() {
                acc += vecs[(i, j)].conj() * xi;
            }
            *yj = acc * Complex64::from_polar(1.0, h[j] * tau);
        }
        let mut out = [ZERO; 4];
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = ZERO;
            for (j, yj) in y.iter().enumerate() {
                acc += vecs[(i, j)] * yj;
            }
            *o = acc;
        }
        out
    }

    /// Evolve one mode vector in scaled variables `(s, V)` by `tau = t / eps`.
    fn apply_mode(&self, idx: usize, x: &Vec4, tau: f64) -> Vec4 {
        match &self.modes[idx] {
            ModeEntry::Rotation => {
                let (sn, cs) = tau.sin_cos();
                [x[0], x[1] * cs + x[2] * sn, -x[1] * sn + x[2] * cs, x[3]]
            }
            ModeEntry::Eigen {
                h,
                vecs,
                self_partner,
            } => {
                let out = Self::apply_eigen(h, vecs, x, tau);
                if *self_partner {
                    // the exact image equals itself; average away rounding
                    let img = j_conj(&Self::apply_eigen(h, vecs, &j_conj(x), tau));
                    [0, 1, 2, 3].map(|i| 0.5 * (out[i] + img[i]))
                } else {
                    out
                }
            }
            ModeEntry::Mirror(b) => j_conj(&self.apply_mode(*b, &j_conj(x), tau)),
        }
    }

    fn check(&self, state: &AcousticState) -> Result<()> {
        if *state.grid() != self.grid {
            return Err(Error::GridMismatch(format!(
                "propagator on {}, state on {}",
                self.grid.describe(),
                state.grid().describe()
            )));
        }
        Ok(())
    }

    /// `exp(-(t/eps) M)` applied mode by mode.
    pub fn evolve(&self, state: &AcousticState, t: f64, eps: f64) -> Result<AcousticState> {
        self.check(state)?;
        if !(t >= 0.0 && eps > 0.0) {
            return Err(Error::Param(format!(
                "evolve needs t >= 0 and eps > 0, got {t}, {eps}"
            )));
        }
        Ok(self.evolve_unchecked(state, t / eps))
    }

    /// Evolution by the fast time `tau = t / eps` (any sign).
    pub fn evolve_unchecked(&self, state: &AcousticState, tau: f64) -> AcousticState {
        let g = self.grid;
        let mut out = state.clone();
        for i1 in 0..g.nh {
            for i2 in 0..g.nh {
                for n in 0..g.nv {
                    let idx = g.index(i1, i2, n);
                    let mut x = state.mode_vec(i1, i2, n);
                    x[0] *= self.c;
                    let mut y = self.apply_mode(idx, &x, tau);
                    y[0] /= self.c;
                    out.set_mode_vec(i1, i2, n, y);
                }
            }
        }
        out
    }

    /// Orthogonal projection onto the kernel of the symbol.
    pub fn kernel_projection(&self, state: &AcousticState) -> AcousticState {
        kernel_projection_with_speed(state, self.c)
    }

    /// One Duhamel step for `d_t x = -(1/eps) M x + F(t)`:
    /// `x(t+dt) = E(dt) x(t) + dt E(dt/2) F(t + dt/2)` (midpoint rule).
    pub fn duhamel_step(
        &self,
        state: &AcousticState,
        forcing: impl Fn(f64) -> AcousticState,
        t: f64,
        dt: f64,
        eps: f64,
    ) -> Result<AcousticState> {
        if !(dt > 0.0) {
            return Err(Error::Param(format!("Duhamel step needs dt > 0, got {dt}")));
        }
        let mut out = self.evolve(state, dt, eps)?;
        let f = forcing(t + 0.5 * dt);
        self.check(&f)?;
        out.axpy(dt, &self.evolve(&f, 0.5 * dt, eps)?);
        Ok(out)
    }
}

/// Kernel projection for unit sound speed.
pub fn kernel_projection(state: &AcousticState) -> AcousticState {
    kernel_projection_with_speed(state, 1.0)
}

/// Per mode: zero unless `k = 0`; for `k = 0` keep `V3` and project
/// `(s, V1, V2)`, `s = c r`, onto `(1, -i c xi2, i c xi1) / sqrt(1 + c^2 |xi|^2)`.
/// The result satisfies `div_h V_h = 0` and `c grad_h r = (V2, -V1)`.
pub fn kernel_projection_with_speed(state: &AcousticState, c: f64) -> AcousticState {
    let g = *state.grid();
    let mut out = state.clone();
    let i = Complex64::new(0.0, 1.0);
    for i1 in 0..g.nh {
        for i2 in 0..g.nh {
            let xi1 = c * g.xi_deriv(i1);
            let xi2 = c * g.xi_deriv(i2);
            for n in 0..g.nv {
                let x = state.mode_vec(i1, i2, n);
                if g.k_deriv(n) != 0.0 {
                    out.set_mode_vec(i1, i2, n, [ZERO; 4]);
                    continue;
                }
                let w = [Complex64::new(1.0, 0.0), -i * xi2, i * xi1];
                let wn = 1.0 + xi1 * xi1 + xi2 * xi2;
                let s = x[0] * c;
                let coef = (w[0].conj() * s + w[1].conj() * x[1] + w[2].conj() * x[2]) / wn;
                out.set_mode_vec(i1, i2, n, [coef * w[0] / c, coef * w[1], coef * w[2], x[3]]);
            }
        }
    }
    out
}

/// `x - Q x`.
pub fn nonkernel_part(state: &AcousticState, c: f64) -> AcousticState {
    state.sub(&kernel_projection_with_speed(state, c))
}
