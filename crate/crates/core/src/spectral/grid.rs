use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Vertical parity of a field on the slab `0 < x3 < 1`.
///
/// Even fields are cosine series in `x3`, odd fields sine series. Odd fields
/// vanish on both walls, which is how `u3 = 0` on the boundary is carried.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    /// Parity of a pointwise product.
    pub fn product(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Discretisation of the horizontally periodic slab `[0, L)^2 x (0, 1)`.
///
/// Horizontally there are `nh` equispaced samples per direction. Vertically
/// there are `nv` samples on the closed interval, `x3_j = j / (nv - 1)`,
/// which carry `nv` cosine modes (`n = 0..nv-1`) for even fields and the
/// sine modes `n = 1..nv-2` for odd fields, with vertical wavenumber
/// `k = pi n`. `nv = 1` describes purely horizontal (2D) fields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub l: f64,
    pub nh: usize,
    pub nv: usize,
    pub dealias_fraction: f64,
}

impl GridSpec {
    pub fn new(l: f64, nh: usize, nv: usize) -> Result<Self> {
        Self::with_dealias(l, nh, nv, 2.0 / 3.0)
    }

    pub fn with_dealias(l: f64, nh: usize, nv: usize, dealias_fraction: f64) -> Result<Self> {
        if !(l.is_finite() && l > 0.0) {
            return Err(Error::Grid(format!("period L must be positive, got {l}")));
        }
        if nh < 8 || !nh.is_multiple_of(2) {
            return Err(Error::Grid(format!("nh must be even and >= 8, got {nh}")));
        }
        if nv < 1 {
            return Err(Error::Grid("nv must be >= 1".into()));
        }
        if !(dealias_fraction > 0.0 && dealias_fraction <= 1.0) {
            return Err(Error::Grid(format!(
                "dealias fraction must lie in (0, 1], got {dealias_fraction}"
            )));
        }
        Ok(Self {
            l,
            nh,
            nv,
            dealias_fraction,
        })
    }

    /// Horizontal-only grid with the same period and horizontal resolution.
    pub fn horizontal(&self) -> GridSpec {
        GridSpec { nv: 1, ..*self }
    }

    pub fn is_horizontal(&self) -> bool {
        self.nv == 1
    }

    pub fn len(&self) -> usize {
        self.nh * self.nh * self.nv
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn index(&self, i1: usize, i2: usize, n: usize) -> usize {
        (i1 * self.nh + i2) * self.nv + n
    }

    /// Signed horizontal mode number of FFT index `i`.
    #[inline]
    pub fn mode_number(&self, i: usize) -> i64 {
        let half = self.nh / 2;
        if i < half {
            i as i64
        } else {
            i as i64 - self.nh as i64
        }
    }

    /// FFT index of signed mode number `m` (wrapped).
    #[inline]
    pub fn index_of_mode(&self, m: i64) -> usize {
        m.rem_euclid(self.nh as i64) as usize
    }

    /// Horizontal wavenumber `2 pi m / L` of index `i`.
    #[inline]
    pub fn xi(&self, i: usize) -> f64 {
        2.0 * PI * self.mode_number(i) as f64 / self.l
    }

    /// Wavenumber used by derivative multipliers: zero on the Nyquist index,
    /// whose conjugate partner is itself.
    #[inline]
    pub fn xi_deriv(&self, i: usize) -> f64 {
        if i == self.nh / 2 {
            0.0
        } else {
            self.xi(i)
        }
    }

    /// Vertical wavenumber `pi n`.
    #[inline]
    pub fn k(&self, n: usize) -> f64 {
        PI * n as f64
    }

    /// Number of vertical intervals (0 for horizontal grids).
    #[inline]
    pub fn intervals(&self) -> usize {
        self.nv - 1
    }

    #[inline]
    pub fn is_vertical_nyquist(&self, n: usize) -> bool {
        self.nv > 1 && n == self.nv - 1
    }

    /// Vertical wavenumber for derivative multipliers; the top cosine mode
    /// `cos(pi N x3)` has no sine partner on the vertex grid and is treated
    /// like the horizontal Nyquist mode.
    #[inline]
    pub fn k_deriv(&self, n: usize) -> f64 {
        if self.is_vertical_nyquist(n) {
            0.0
        } else {
            self.k(n)
        }
    }

    /// Largest retained horizontal mode number under the dealiasing rule.
    pub fn horizontal_cutoff(&self) -> i64 {
        largest_below(self.dealias_fraction * self.nh as f64 / 2.0)
    }

    /// Largest retained vertical mode number under the dealiasing rule.
    pub fn vertical_cutoff(&self) -> usize {
        if self.nv == 1 {
            0
        } else {
            largest_below(self.dealias_fraction * self.intervals() as f64).max(0) as usize
        }
    }

    #[inline]
    pub fn retained(&self, i1: usize, i2: usize, n: usize) -> bool {
        let kh = self.horizontal_cutoff();
        self.mode_number(i1).abs() <= kh && self.mode_number(i2).abs() <= kh && n <= self.vertical_cutoff()
    }

    /// Parseval weight of vertical mode `n`: the discrete mean of the squared
    /// basis function over the vertical samples.
    #[inline]
    pub fn vertical_weight(&self, n: usize) -> f64 {
        if n == 0 || self.is_vertical_nyquist(n) {
            1.0
        } else {
            0.5
        }
    }

    pub fn dx(&self) -> f64 {
        self.l / self.nh as f64
    }

    pub fn dz(&self) -> f64 {
        if self.nv == 1 {
            1.0
        } else {
            1.0 / self.intervals() as f64
        }
    }

    pub fn volume(&self) -> f64 {
        self.l * self.l
    }

    /// Physical coordinate of a sample.
    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.dx()
    }

    pub fn x3(&self, j: usize) -> f64 {
        if self.nv == 1 {
            0.0
        } else {
            j as f64 * self.dz()
        }
    }

    /// Trapezoidal quadrature weight (cell volume) of vertical sample `j`.
    pub fn sample_weight(&self, j: usize) -> f64 {
        let dxy = self.dx() * self.dx();
        if self.nv == 1 {
            dxy
        } else if j == 0 || j == self.nv - 1 {
            0.5 * dxy * self.dz()
        } else {
            dxy * self.dz()
        }
    }

    pub fn same_horizontal(&self, other: &GridSpec) -> bool {
        self.l == other.l && self.nh == other.nh && self.dealias_fraction == other.dealias_fraction
    }

    pub fn describe(&self) -> String {
        format!(
            "grid L={} nh={} nv={} dealias={:.4}",
            self.l, self.nh, self.nv, self.dealias_fraction
        )
    }
}

fn largest_below(x: f64) -> i64 {
    let f = x.floor();
    if f == x {
        f as i64 - 1
    } else {
        f as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert!(GridSpec::new(1.0, 6, 4).is_err());
        assert!(GridSpec::new(1.0, 9, 4).is_err());
        assert!(GridSpec::new(0.0, 8, 4).is_err());
        assert!(GridSpec::new(1.0, 8, 0).is_err());
        assert!(GridSpec::new(1.0, 8, 1).is_ok());
    }

    #[test]
    fn two_thirds_cutoffs() {
        let g = GridSpec::new(2.0 * PI, 64, 8).unwrap();
        assert_eq!(g.horizontal_cutoff(), 21);
        assert_eq!(g.vertical_cutoff(), 4);
        let g = GridSpec::new(2.0 * PI, 48, 7).unwrap();
        // 3K < 48 and 3K < 12
        assert_eq!(g.horizontal_cutoff(), 15);
        assert_eq!(g.vertical_cutoff(), 3);
    }

    #[test]
    fn wavenumbers() {
        let g = GridSpec::new(2.0 * PI, 8, 3).unwrap();
        assert_eq!(g.mode_number(3), 3);
        assert_eq!(g.mode_number(4), -4);
        assert_eq!(g.mode_number(7), -1);
        assert_eq!(g.index_of_mode(-1), 7);
        assert!((g.xi(7) + 1.0).abs() < 1e-15);
        assert_eq!(g.xi_deriv(4), 0.0);
        assert!((g.k(1) - PI).abs() < 1e-15);
        assert_eq!(g.k_deriv(2), 0.0);
    }
}
