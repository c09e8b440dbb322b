//! Initial profiles `(r0, u0)` shared by every run of a sweep.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limit::LimitParams;
use crate::spectral::{
    dealias, dealias_vector, extend_vertically, perp_grad_h, project, vertical_average, GridSpec, Parity,
    SpectralField, VectorField,
};

/// Which family of `eps`-independent data a run starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileKind {
    /// Single-mode carrier under a Gaussian envelope, non-geostrophic.
    Localized,
    /// Single periodic horizontal mode, non-geostrophic.
    Plane,
    /// Localized `x3`-independent data in geostrophic balance.
    Balanced,
    /// Smooth random data drawn from a seeded generator.
    Random,
    /// State at rest.
    Zero,
}

impl ProfileKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "localized" => Ok(Self::Localized),
            "plane" => Ok(Self::Plane),
            "balanced" => Ok(Self::Balanced),
            "random" => Ok(Self::Random),
            "zero" => Ok(Self::Zero),
            other => Err(Error::Config(format!(
                "unknown profile '{other}' (expected localized, plane, balanced, random or zero)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Localized => "localized",
            Self::Plane => "plane",
            Self::Balanced => "balanced",
            Self::Random => "random",
            Self::Zero => "zero",
        }
    }
}

/// Parameters of a profile family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSpec {
    pub kind: ProfileKind,
    /// Carrier mode number (largest mode number for random data).
    pub mode: i64,
    pub amplitude: f64,
    /// Envelope width as a fraction of the period.
    pub width: f64,
    pub seed: u64,
}

impl Default for ProfileSpec {
    fn default() -> Self {
        Self {
            kind: ProfileKind::Localized,
            mode: 8,
            amplitude: 1.0,
            width: 1.0 / 16.0,
            seed: 0,
        }
    }
}

impl ProfileSpec {
    pub fn build(&self, grid: GridSpec, params: &LimitParams) -> Result<Profiles> {
        let w = self.width * grid.l;
        match self.kind {
            ProfileKind::Localized => Profiles::localized(grid, self.mode, self.amplitude, w),
            ProfileKind::Plane => Profiles::ill_prepared(grid, self.mode, self.amplitude),
            ProfileKind::Balanced => Profiles::balanced(grid, self.mode, self.amplitude, w, params),
            ProfileKind::Random => Profiles::random(grid, self.seed, self.amplitude, self.mode.max(1)),
            ProfileKind::Zero => Ok(Profiles::zero(grid)),
        }
    }
}

/// Density perturbation and velocity, both on the slab grid.
#[derive(Debug, Clone)]
pub struct Profiles {
    pub r0: SpectralField,
    pub u0: VectorField,
}

/// Horizontal wavenumber of mode number `m` on period `L`.
fn wavenumber(grid: &GridSpec, m: i64) -> f64 {
    2.0 * PI * m as f64 / grid.l
}

impl Profiles {
    pub fn zero(grid: GridSpec) -> Self {
        Self {
            r0: SpectralField::zeros(grid, Parity::Even),
            u0: VectorField::zeros(grid, 3),
        }
    }

    /// `r0 = a cos(xi x1)` and a velocity that is neither balanced nor
    /// `x3`-independent, with `xi` the wavenumber of mode `m`.
    pub fn ill_prepared(grid: GridSpec, m: i64, amp: f64) -> Result<Self> {
        let xi = wavenumber(&grid, m);
        let r0 = project(&grid, Parity::Even, |x, _, _| amp * (xi * x).cos())?;
        let u1 = project(&grid, Parity::Even, |_, y, _| 0.5 * amp * (xi * y).sin())?;
        let u2 = project(&grid, Parity::Even, |x, _, z| {
            0.25 * amp * (PI * z).cos() * (xi * x).cos()
        })?;
        let u3 = if grid.nv > 2 {
            project(&grid, Parity::Odd, |_, y, z| {
                0.25 * amp * (PI * z).sin() * (xi * y).cos()
            })?
        } else {
            SpectralField::zeros(grid, Parity::Odd)
        };
        Ok(Self {
            r0,
            u0: VectorField::new(vec![u1, u2, u3])?,
        })
    }

    /// The fields of [`Profiles::ill_prepared`] under a Gaussian envelope of
    /// width `width` centred in the box, so the data are localized like
    /// finite-energy data on the whole plane.
    pub fn localized(grid: GridSpec, m: i64, amp: f64, width: f64) -> Result<Self> {
        if !(width > 0.0) {
            return Err(Error::Param(format!(
                "envelope width must be positive, got {width}"
            )));
        }
        let xi = wavenumber(&grid, m);
        let c = 0.5 * grid.l;
        let env = move |x: f64, y: f64| (-((x - c).powi(2) + (y - c).powi(2)) / (2.0 * width * width)).exp();
        let r0 = project(&grid, Parity::Even, |x, y, _| {
            amp * env(x, y) * (xi * (x - c)).cos()
        })?;
        let u1 = project(&grid, Parity::Even, |x, y, _| {
            0.5 * amp * env(x, y) * (xi * (y - c)).sin()
        })?;
        let u2 = project(&grid, Parity::Even, |x, y, z| {
            0.25 * amp * env(x, y) * (PI * z).cos() * (xi * (x - c)).cos()
        })?;
        let u3 = if grid.nv > 2 {
            project(&grid, Parity::Odd, |x, y, z| {
                0.25 * amp * env(x, y) * (PI * z).sin() * (xi * (y - c)).cos()
            })?
        } else {
            SpectralField::zeros(grid, Parity::Odd)
        };
        Ok(Self {
            r0: dealias(&r0),
            u0: dealias_vector(&VectorField::new(vec![u1, u2, u3])?),
        })
    }

    /// Localized `x3`-independent `r0` with `u0 = -(p'/rho_bar) perp_grad r0`,
    /// the kernel of the fast operator in the primitive variables.
    pub fn balanced(grid: GridSpec, m: i64, amp: f64, width: f64, params: &LimitParams) -> Result<Self> {
        let r0 = Self::localized(grid, m, amp, width)?.r0;
        let u0 = geostrophic_velocity(&r0, params)?;
        Ok(Self { r0, u0 })
    }

    /// Smooth random data with modes `|m| <= modes` horizontally and the
    /// first vertical mode, coefficients decaying like `1/(1+|m|^2)`.
    pub fn random(grid: GridSpec, seed: u64, amp: f64, modes: i64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut terms = Vec::new();
        for _ in 0..(4 * modes.max(1)) {
            let m1 = rng.gen_range(-modes..=modes);
            let m2 = rng.gen_range(-modes..=modes);
            let w = 1.0 / (1.0 + (m1 * m1 + m2 * m2) as f64);
            let coeffs: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0) * w * amp);
            let phase = rng.gen_range(0.0..2.0 * PI);
            terms.push((wavenumber(&grid, m1), wavenumber(&grid, m2), coeffs, phase));
        }
        let sum = |c: usize, vertical: fn(f64) -> f64, x: f64, y: f64, z: f64| -> f64 {
            terms
                .iter()
                .map(|(a, b, k, ph)| k[c] * (a * x + b * y + ph).cos() * vertical(z))
                .sum()
        };
        let one = |_: f64| 1.0;
        let cos1 = |z: f64| 1.0 + 0.5 * (PI * z).cos();
        let sin1 = |z: f64| (PI * z).sin();
        let r0 = dealias(&project(&grid, Parity::Even, |x, y, z| sum(0, one, x, y, z))?);
        let u1 = dealias(&project(&grid, Parity::Even, |x, y, z| sum(1, cos1, x, y, z))?);
        let u2 = dealias(&project(&grid, Parity::Even, |x, y, z| sum(2, cos1, x, y, z))?);
        let u3 = if grid.nv > 2 {
            dealias(&project(&grid, Parity::Odd, |x, y, z| sum(3, sin1, x, y, z))?)
        } else {
            SpectralField::zeros(grid, Parity::Odd)
        };
        Ok(Self {
            r0,
            u0: VectorField::new(vec![u1, u2, u3])?,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        self.r0.grid()
    }

    /// `sup |r0|` over the grid samples.
    pub fn r0_sup(&self) -> f64 {
        crate::spectral::inverse_transform(&self.r0)
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Vertical means of `r0` and of the horizontal velocity, the data seen
    /// by the limit problem.
    pub fn vertical_means(&self) -> (SpectralField, VectorField) {
        let r = vertical_average(&self.r0);
        let u = VectorField {
            comps: vec![
                vertical_average(&self.u0.comps[0]),
                vertical_average(&self.u0.comps[1]),
            ],
        };
        (r, u)
    }
}

/// Balanced velocity `-(p'/rho_bar) perp_grad r` of an `x3`-independent
/// density perturbation `r` given on the slab grid.
pub fn geostrophic_velocity(r: &SpectralField, params: &LimitParams) -> Result<VectorField> {
    let g = *r.grid();
    let rh = vertical_average(r);
    let pg = perp_grad_h(&rh);
    let f = -params.velocity_factor();
    let u1 = extend_vertically(&pg.comps[0].scale(f), &g)?;
    let u2 = extend_vertically(&pg.comps[1].scale(f), &g)?;
    let v = VectorField::new(vec![u1, u2, SpectralField::zeros(g, Parity::Odd)])?;
    Ok(dealias_vector(&v))
}
