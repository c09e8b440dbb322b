use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::spectral::{GridSpec, Parity, SpectralField, VectorField};

/// The fast pair `(r, V)`: density perturbation `r = (rho - rho_bar)/eps`
/// and momentum `V = rho u`. `r` and `V_h` are even in `x3`, `V3` is odd.
#[derive(Debug, Clone, PartialEq)]
pub struct AcousticState {
    pub r: SpectralField,
    pub v: VectorField,
}

impl AcousticState {
    pub fn new(r: SpectralField, v: VectorField) -> Result<Self> {
        let s = Self { r, v };
        s.validate()?;
        Ok(s)
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            r: SpectralField::zeros(grid, Parity::Even),
            v: VectorField::zeros(grid, 3),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.r.parity() != Parity::Even {
            return Err(Error::Parity("r must be even".into()));
        }
        if self.v.dim() != 3 || self.v.comps[0].parity() != Parity::Even {
            return Err(Error::Parity("V must have even V_h and odd V3".into()));
        }
        self.v.check_parities()?;
        self.r.check_compatible(&self.v.comps[0])
    }

    pub fn grid(&self) -> &GridSpec {
        self.r.grid()
    }

    /// Per-mode vector `(r, V1, V2, V3)`.
    #[inline]
    pub fn mode_vec(&self, i1: usize, i2: usize, n: usize) -> [Complex64; 4] {
        [
            self.r.get(i1, i2, n),
            self.v.comps[0].get(i1, i2, n),
            self.v.comps[1].get(i1, i2, n),
            self.v.comps[2].get(i1, i2, n),
        ]
    }

    #[inline]
    pub fn set_mode_vec(&mut self, i1: usize, i2: usize, n: usize, x: [Complex64; 4]) {
        self.r.set(i1, i2, n, x[0]);
        for c in 0..3 {
            self.v.comps[c].set(i1, i2, n, x[c + 1]);
        }
    }

    /// `||r||^2 + ||V||^2`.
    pub fn norm_sq(&self) -> f64 {
        self.r.norm_sq() + self.v.norm_sq()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `c^2 ||r||^2 + ||V||^2`, the quantity conserved by the propagator with
    /// sound speed `c`.
    pub fn energy_norm_sq(&self, sound_speed: f64) -> f64 {
        sound_speed * sound_speed * self.r.norm_sq() + self.v.norm_sq()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            r: self.r.scale(s),
            v: self.v.scale(s),
        }
    }

    pub fn axpy(&mut self, s: f64, other: &AcousticState) {
        self.r.axpy(s, &other.r);
        self.v.axpy(s, &other.v);
    }

    pub fn sub(&self, other: &AcousticState) -> Self {
        Self {
            r: &self.r - &other.r,
            v: &self.v - &other.v,
        }
    }

    pub fn max_abs_diff(&self, other: &AcousticState) -> f64 {
        self.r.max_abs_diff(&other.r).max(self.v.max_abs_diff(&other.v))
    }

    pub fn is_finite(&self) -> bool {
        self.r.is_finite() && self.v.is_finite()
    }

    pub fn map(&self, f: impl Fn(&SpectralField) -> SpectralField) -> Self {
        Self {
            r: f(&self.r),
            v: VectorField {
                comps: self.v.comps.iter().map(&f).collect(),
            },
        }
    }

    /// Random real state with coefficients of size `amp` on modes with
    /// `|m1|, |m2| <= modes` and `n <= modes`.
    pub fn random(grid: GridSpec, rng: &mut impl Rng, amp: f64, modes: i64) -> Self {
        let mut comps = vec![
            SpectralField::zeros(grid, Parity::Even),
            SpectralField::zeros(grid, Parity::Even),
            SpectralField::zeros(grid, Parity::Even),
            SpectralField::zeros(grid, Parity::Odd),
        ];
        for f in comps.iter_mut() {
            for i1 in 0..grid.nh {
                for i2 in 0..grid.nh {
                    let m1 = grid.mode_number(i1).abs();
                    let m2 = grid.mode_number(i2).abs();
                    for n in 0..grid.nv {
                        if m1 <= modes && m2 <= modes && n as i64 <= modes {
                            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                            f.set(i1, i2, n, c * amp);
                        }
                    }
                }
            }
            f.symmetrize();
        }
        let v3 = comps.pop().expect("four components");
        let v2 = comps.pop().expect("four components");
        let v1 = comps.pop().expect("four components");
        let r = comps.pop().expect("four components");
        Self {
            r,
            v: VectorField {
                comps: vec![v1, v2, v3],
            },
        }
    }
}
