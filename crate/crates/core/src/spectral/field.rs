use num_complex::Complex64;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use super::grid::{GridSpec, Parity};
use crate::error::{Error, Result};

/// Fourier/cosine/sine coefficients of a real field on a [`GridSpec`].
///
/// Index layout is `(i1, i2, n)` with `i1, i2` in FFT order. Even fields are
/// `sum a e^{i xi.x_h} cos(k x3)`, odd fields `sum a e^{i xi.x_h} i sin(k x3)`;
/// with this convention `d/dx3` is the multiplier `i k` for both parities and
/// the coefficients coincide (up to a factor two for `n > 0`) with the
/// Fourier coefficients of the even/odd extension to `x3 in [-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: GridSpec,
    parity: Parity,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: GridSpec, parity: Parity) -> Self {
        Self {
            grid,
            parity,
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_coeffs(grid: GridSpec, parity: Parity, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::Shape {
                expected: grid.len(),
                got: coeffs.len(),
                grid: grid.describe(),
            });
        }
        Ok(Self { grid, parity, coeffs })
    }

    /// A single real mode: `amp * cos(xi.x_h + phase) * cos(k x3)` (even) or
    /// `... * sin(k x3)` (odd), given by signed horizontal mode numbers.
    pub fn single_mode(
        grid: GridSpec,
        parity: Parity,
        m1: i64,
        m2: i64,
        n: usize,
        amp: f64,
        phase: f64,
    ) -> Self {
        let mut f = Self::zeros(grid, parity);
        if parity == Parity::Odd && (n == 0 || grid.is_vertical_nyquist(n)) {
            return f;
        }
        let half = Complex64::from_polar(0.5 * amp, phase);
        // odd basis is i sin, so the coefficient absorbs a factor -i
        let basis = match parity {
            Parity::Even => Complex64::new(1.0, 0.0),
            Parity::Odd => Complex64::new(0.0, -1.0),
        };
        let a = grid.index(grid.index_of_mode(m1), grid.index_of_mode(m2), n);
        let b = grid.index(grid.index_of_mode(-m1), grid.index_of_mode(-m2), n);
        f.coeffs[a] += basis * half;
        f.coeffs[b] += basis * half.conj();
        f
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    #[inline]
    pub fn get(&self, i1: usize, i2: usize, n: usize) -> Complex64 {
        self.coeffs[self.grid.index(i1, i2, n)]
    }

    #[inline]
    pub fn set(&mut self, i1: usize, i2: usize, n: usize, value: Complex64) {
        let idx = self.grid.index(i1, i2, n);
        self.coeffs[idx] = value;
    }

    /// Coefficient at signed mode numbers.
    pub fn mode(&self, m1: i64, m2: i64, n: usize) -> Complex64 {
        self.get(self.grid.index_of_mode(m1), self.grid.index_of_mode(m2), n)
    }

    /// Apply a per-mode map `(i1, i2, n, coeff) -> coeff`.
    pub fn map_modes(&self, f: impl Fn(usize, usize, usize, Complex64) -> Complex64) -> Self {
        let g = self.grid;
        let mut out = self.clone();
        for i1 in 0..g.nh {
            for i2 in 0..g.nh {
                for n in 0..g.nv {
                    let idx = g.index(i1, i2, n);
                    out.coeffs[idx] = f(i1, i2, n, self.coeffs[idx]);
                }
            }
        }
        out
    }

    pub fn with_parity(mut self, parity: Parity) -> Self {
        self.parity = parity;
        self
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= s);
        out
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= s);
        out
    }

    /// `self += s * other`.
    pub fn axpy(&mut self, s: f64, other: &SpectralField) {
        debug_assert_eq!(self.coeffs.len(), other.coeffs.len());
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b * s;
        }
    }

    /// `int |f|^2 dx` over the slab via Parseval.
    pub fn norm_sq(&self) -> f64 {
        let g = &self.grid;
        let mut acc = 0.0;
        for i in 0..g.nh * g.nh {
            for n in 0..g.nv {
                acc += g.vertical_weight(n) * self.coeffs[i * g.nv + n].norm_sqr();
            }
        }
        acc * g.volume()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Real `L^2` inner product `int f g dx` via Parseval.
    pub fn inner(&self, other: &SpectralField) -> f64 {
        let g = &self.grid;
        let mut acc = 0.0;
        for i in 0..g.nh * g.nh {
            for n in 0..g.nv {
                let idx = i * g.nv + n;
                acc += g.vertical_weight(n) * (self.coeffs[idx] * other.coeffs[idx].conj()).re;
            }
        }
        acc * g.volume()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &SpectralField) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Largest violation of the conjugate symmetry that makes the physical
    /// field real (parity-aware).
    pub fn realness_defect(&self) -> f64 {
        let g = &self.grid;
        let sign = match self.parity {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        };
        let mut worst: f64 = 0.0;
        for i1 in 0..g.nh {
            for i2 in 0..g.nh {
                let j1 = g.index_of_mode(-g.mode_number(i1));
                let j2 = g.index_of_mode(-g.mode_number(i2));
                for n in 0..g.nv {
                    let a = self.get(i1, i2, n);
                    let b = self.get(j1, j2, n);
                    worst = worst.max((a - b.conj() * sign).norm());
                }
            }
        }
        worst
    }

    /// Project onto the real-field subspace: average each coefficient with
    /// its conjugate partner and clear the modes an odd field cannot carry.
    pub fn symmetrize(&mut self) {
        let g = self.grid;
        let sign = match self.parity {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        };
        for i1 in 0..g.nh {
            let j1 = g.index_of_mode(-g.mode_number(i1));
            for i2 in 0..g.nh {
                let j2 = g.index_of_mode(-g.mode_number(i2));
                if (j1, j2) < (i1, i2) {
                    continue;
                }
                for n in 0..g.nv {
                    let a = g.index(i1, i2, n);
                    let b = g.index(j1, j2, n);
                    let avg = 0.5 * (self.coeffs[a] + self.coeffs[b].conj() * sign);
                    self.coeffs[a] = avg;
                    self.coeffs[b] = avg.conj() * sign;
                }
            }
        }
        if self.parity == Parity::Odd {
            for i in 0..g.nh * g.nh {
                self.coeffs[i * g.nv] = Complex64::new(0.0, 0.0);
                if g.nv > 1 {
                    self.coeffs[i * g.nv + g.nv - 1] = Complex64::new(0.0, 0.0);
                }
            }
        }
    }

    pub fn check_compatible(&self, other: &SpectralField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(format!(
                "{} vs {}",
                self.grid.describe(),
                other.grid.describe()
            )));
        }
        Ok(())
    }
}

impl Add<&SpectralField> for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: &SpectralField) -> SpectralField {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&SpectralField> for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: &SpectralField) -> SpectralField {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&SpectralField> for SpectralField {
    fn add_assign(&mut self, rhs: &SpectralField) {
        debug_assert_eq!(self.grid, rhs.grid);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&SpectralField> for SpectralField {
    fn sub_assign(&mut self, rhs: &SpectralField) {
        debug_assert_eq!(self.grid, rhs.grid);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl Neg for &SpectralField {
    type Output = SpectralField;
    fn neg(self) -> SpectralField {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, rhs: f64) -> SpectralField {
        self.scale(rhs)
    }
}

/// A vector of spectral fields: two components for horizontal vectors,
/// three for full vectors (the third with opposite parity to the first two).
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub comps: Vec<SpectralField>,
}

impl VectorField {
    pub fn new(comps: Vec<SpectralField>) -> Result<Self> {
        let v = Self { comps };
        v.check_parities()?;
        Ok(v)
    }

    /// Zero vector with the standard complete-slip layout: horizontal
    /// components even, vertical component odd.
    pub fn zeros(grid: GridSpec, dim: usize) -> Self {
        let mut comps = vec![SpectralField::zeros(grid, Parity::Even); dim.min(2)];
        if dim == 3 {
            comps.push(SpectralField::zeros(grid, Parity::Odd));
        }
        Self { comps }
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn grid(&self) -> &GridSpec {
        self.comps[0].grid()
    }

    pub fn check_parities(&self) -> Result<()> {
        if self.comps.is_empty() || self.comps.len() > 3 {
            return Err(Error::Parity(format!(
                "vector fields need 1..=3 components, got {}",
                self.comps.len()
            )));
        }
        let g = *self.comps[0].grid();
        let p = self.comps[0].parity();
        for (i, c) in self.comps.iter().enumerate() {
            if *c.grid() != g {
                return Err(Error::GridMismatch(format!("component {i} on a different grid")));
            }
            let want = if i < 2 { p } else { p.flip() };
            if c.parity() != want {
                return Err(Error::Parity(format!(
                    "component {i} has parity {:?}, expected {want:?}",
                    c.parity()
                )));
            }
        }
        Ok(())
    }

    pub fn norm_sq(&self) -> f64 {
        self.comps.iter().map(SpectralField::norm_sq).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            comps: self.comps.iter().map(|c| c.scale(s)).collect(),
        }
    }

    pub fn axpy(&mut self, s: f64, other: &VectorField) {
        for (a, b) in self.comps.iter_mut().zip(&other.comps) {
            a.axpy(s, b);
        }
    }

    pub fn max_abs_diff(&self, other: &VectorField) -> f64 {
        self.comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.comps.iter().all(SpectralField::is_finite)
    }
}

impl Add<&VectorField> for &VectorField {
    type Output = VectorField;
    fn add(self, rhs: &VectorField) -> VectorField {
        VectorField {
            comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub<&VectorField> for &VectorField {
    type Output = VectorField;
    fn sub(self, rhs: &VectorField) -> VectorField {
        VectorField {
            comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a - b).collect(),
        }
    }
}
