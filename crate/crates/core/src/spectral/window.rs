use super::field::SpectralField;
use super::grid::GridSpec;
use super::transform::inverse_transform;
use crate::error::{Error, Result};

/// Horizontal localisation weight `0 <= chi <= 1`, sampled on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    nh: usize,
    l: f64,
    samples: Vec<f64>,
}

/// `C^infinity` transition from 0 (at `s <= 0`) to 1 (at `s >= 1`).
pub fn smooth_step(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else if s >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / s).exp();
        let b = (-1.0 / (1.0 - s)).exp();
        a / (a + b)
    }
}

/// Derivative of [`smooth_step`].
pub fn smooth_step_deriv(s: f64) -> f64 {
    if s <= 0.0 || s >= 1.0 {
        0.0
    } else {
        let a = (-1.0 / s).exp();
        let b = (-1.0 / (1.0 - s)).exp();
        a * b * (1.0 / (s * s) + 1.0 / ((1.0 - s) * (1.0 - s))) / ((a + b) * (a + b))
    }
}

impl Window {
    pub fn from_samples(grid: &GridSpec, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != grid.nh * grid.nh {
            return Err(Error::Shape {
                expected: grid.nh * grid.nh,
                got: samples.len(),
                grid: grid.describe(),
            });
        }
        if let Some(bad) = samples.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::Window(format!("window value {bad} outside [0, 1]")));
        }
        Ok(Self {
            nh: grid.nh,
            l: grid.l,
            samples,
        })
    }

    pub fn from_fn(grid: &GridSpec, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let mut s = Vec::with_capacity(grid.nh * grid.nh);
        for i1 in 0..grid.nh {
            for i2 in 0..grid.nh {
                s.push(f(grid.x(i1), grid.x(i2)));
            }
        }
        Self::from_samples(grid, s)
    }

    /// `chi = 1` everywhere.
    pub fn full(grid: &GridSpec) -> Self {
        Self {
            nh: grid.nh,
            l: grid.l,
            samples: vec![1.0; grid.nh * grid.nh],
        }
    }

    /// Smooth tensor-product bump centred in the box: equal to 1 where both
    /// `|x_i - L/2| <= inner * L` and 0 beyond `outer * L`.
    pub fn centered_bump(grid: &GridSpec, inner: f64, outer: f64) -> Result<Self> {
        if !(0.0 < inner && inner < outer && outer <= 0.5) {
            return Err(Error::Window(format!(
                "need 0 < inner < outer <= 1/2, got {inner}, {outer}"
            )));
        }
        let l = grid.l;
        let profile = move |x: f64| {
            let d = (x - 0.5 * l).abs() / l;
            1.0 - smooth_step((d - inner) / (outer - inner))
        };
        Self::from_fn(grid, |x, y| profile(x) * profile(y))
    }

    /// Default localisation: 1 on the central square of side `L/2`, decaying
    /// to 0 inside a margin of `L/8` from the periodic seam.
    pub fn central_quarter(grid: &GridSpec) -> Self {
        Self::centered_bump(grid, 0.25, 0.375).expect("valid bump")
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    #[inline]
    pub fn at(&self, i1: usize, i2: usize) -> f64 {
        self.samples[i1 * self.nh + i2]
    }

    fn check(&self, grid: &GridSpec) -> Result<()> {
        if grid.nh != self.nh || grid.l != self.l {
            return Err(Error::GridMismatch(format!(
                "window for nh={} L={} used on {}",
                self.nh,
                self.l,
                grid.describe()
            )));
        }
        Ok(())
    }

    /// `int chi |f|^2 dx` from physical samples laid out like the grid.
    pub fn weighted_sq_integral(&self, grid: &GridSpec, samples: &[f64]) -> Result<f64> {
        self.check(grid)?;
        let mut acc = 0.0;
        for i1 in 0..grid.nh {
            for i2 in 0..grid.nh {
                let chi = self.at(i1, i2);
                if chi == 0.0 {
                    continue;
                }
                let base = (i1 * grid.nh + i2) * grid.nv;
                let mut col = 0.0;
                for j in 0..grid.nv {
                    col += grid.sample_weight(j) * samples[base + j].powi(2);
                }
                acc += chi * col;
            }
        }
        Ok(acc)
    }
}

/// `(int chi |f|^2 dx)^{1/2}` by physical-space quadrature.
pub fn local_l2_norm(f: &SpectralField, window: &Window) -> Result<f64> {
    let s = inverse_transform(f);
    Ok(window.weighted_sq_integral(f.grid(), &s)?.sqrt())
}

/// Windowed norm of several components taken together.
pub fn local_l2_norm_many(fields: &[&SpectralField], window: &Window) -> Result<f64> {
    let mut acc = 0.0;
    for f in fields {
        acc += window.weighted_sq_integral(f.grid(), &inverse_transform(f))?;
    }
    Ok(acc.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::Parity;
    use crate::spectral::transform::project;
    use std::f64::consts::PI;

    #[test]
    fn full_window_gives_global_norm() {
        let g = GridSpec::new(2.0 * PI, 16, 5).unwrap();
        let f = project(&g, Parity::Even, |x, y, z| {
            x.sin() + (2.0 * y).cos() * (PI * z).cos()
        })
        .unwrap();
        let n = local_l2_norm(&f, &Window::full(&g)).unwrap();
        assert!((n - f.norm()).abs() < 1e-12 * n);
        let z = SpectralField::zeros(g, Parity::Even);
        assert_eq!(local_l2_norm(&z, &Window::central_quarter(&g)).unwrap(), 0.0);
    }

    #[test]
    fn rejects_out_of_range_weights() {
        let g = GridSpec::new(1.0, 8, 1).unwrap();
        let mut s = vec![0.5; 64];
        s[3] = 1.5;
        assert!(matches!(Window::from_samples(&g, s), Err(Error::Window(_))));
        assert!(Window::from_samples(&g, vec![-0.1; 64]).is_err());
    }

    #[test]
    fn gaussian_window_against_closed_form() {
        // chi = exp(-|x-c|^2 / (2 s^2)), f = cos(xi x1) on a slab of unit depth:
        // int chi f^2 = pi s^2 (1 + exp(-2 xi^2 s^2) cos(2 xi c1))
        let l = 16.0 * PI;
        let g = GridSpec::new(l, 64, 1).unwrap();
        let s = l / 16.0;
        let c = (0.5 * l, 0.5 * l);
        let xi = 2.0 * PI * 3.0 / l;
        let w = Window::from_fn(&g, |x, y| {
            (-((x - c.0).powi(2) + (y - c.1).powi(2)) / (2.0 * s * s)).exp()
        })
        .unwrap();
        let f = project(&g, Parity::Even, |x, _, _| (xi * x).cos()).unwrap();
        let got = local_l2_norm(&f, &w).unwrap().powi(2);
        let want = PI * s * s * (1.0 + (-2.0 * xi * xi * s * s).exp() * (2.0 * xi * c.0).cos());
        assert!((got - want).abs() < 1e-8 * want, "{got} vs {want}");
    }

    #[test]
    fn smooth_step_derivative_matches_difference() {
        for s in [0.05, 0.3, 0.5, 0.77, 0.96] {
            let h = 1e-6;
            let fd = (smooth_step(s + h) - smooth_step(s - h)) / (2.0 * h);
            assert!((fd - smooth_step_deriv(s)).abs() < 1e-7, "{s}");
        }
        assert_eq!(smooth_step_deriv(-1.0), 0.0);
        assert_eq!(smooth_step_deriv(1.0), 0.0);
    }

    #[test]
    fn central_quarter_shape() {
        let g = GridSpec::new(8.0, 32, 1).unwrap();
        let w = Window::central_quarter(&g);
        assert_eq!(w.at(16, 16), 1.0);
        assert_eq!(w.at(0, 16), 0.0);
        assert!(w.samples().iter().all(|v| (0.0..=1.0).contains(v)));
    }
}
