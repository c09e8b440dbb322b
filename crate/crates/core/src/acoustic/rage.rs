//! Time averages of the non-kernel (oscillating) part of acoustic states.
//!
//! On the periodic box the spectrum of the symbol is discrete, so the windowed
//! energy of an oscillating component does not decay pointwise in time. What
//! decays as `eps -> 0` is its time average: a mode with frequency `lambda`
//! averages to the factor `|eps (e^{i lambda T/eps} - 1) / (i lambda T)|`,
//! bounded by `2 eps / (T |lambda|)`.

use num_complex::Complex64;

use super::propagator::{nonkernel_part, Propagator};
use super::state::AcousticState;
use crate::error::{Error, Result};
use crate::quadrature::composite_gauss;
use crate::spectral::{local_l2_norm_many, Window};

/// Running weighted sum of states, for time averages `(1/T) int x dt`.
#[derive(Debug, Clone)]
pub struct TimeAverager {
    sum: Option<AcousticState>,
    weight: f64,
}

impl Default for TimeAverager {
    fn default() -> Self {
        Self::new()
    }
}

impl TimeAverager {
    pub fn new() -> Self {
        Self {
            sum: None,
            weight: 0.0,
        }
    }

    pub fn add(&mut self, w: f64, x: &AcousticState) {
        match &mut self.sum {
            Some(s) => s.axpy(w, x),
            None => self.sum = Some(x.scale(w)),
        }
        self.weight += w;
    }

    /// Total quadrature weight (the length of the averaging interval).
    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// `(1/T) sum w_i x_i`.
    pub fn average(&self, t_total: f64) -> Result<AcousticState> {
        let s = self
            .sum
            .as_ref()
            .ok_or_else(|| Error::Empty("time average of an empty trajectory".into()))?;
        if !(t_total > 0.0) {
            return Err(Error::Param(format!(
                "averaging horizon must be positive, got {t_total}"
            )));
        }
        Ok(s.scale(1.0 / t_total))
    }
}

/// Windowed energy `int chi (c^2 |r|^2 + |V|^2)`.
pub fn windowed_energy(x: &AcousticState, window: &Window, c: f64) -> Result<f64> {
    let s = x.r.scale(c);
    let n = local_l2_norm_many(&[&s, &x.v.comps[0], &x.v.comps[1], &x.v.comps[2]], window)?;
    Ok(n * n)
}

/// `int chi |Q_perp (1/T) int_0^T x dt|^2` from weighted samples
/// `(w_i, x(t_i))` of a trajectory on `[0, T]`.
pub fn time_averaged_nonkernel_energy(
    samples: &[(f64, AcousticState)],
    t_total: f64,
    window: &Window,
    c: f64,
) -> Result<f64> {
    let mut avg = TimeAverager::new();
    for (w, x) in samples {
        avg.add(*w, x);
    }
    windowed_energy(&nonkernel_part(&avg.average(t_total)?, c), window, c)
}

/// `(1/T) int_0^T int chi |Q_perp x|^2 dx dt`, the time average of the
/// instantaneous windowed energy. It does not decay with `eps` on a
/// discrete spectrum and is reported alongside for comparison.
pub fn mean_nonkernel_energy(
    samples: &[(f64, AcousticState)],
    t_total: f64,
    window: &Window,
    c: f64,
) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Empty("time average of an empty trajectory".into()));
    }
    let mut acc = 0.0;
    for (w, x) in samples {
        acc += w * windowed_energy(&nonkernel_part(x, c), window, c)?;
    }
    Ok(acc / t_total)
}

/// Free evolution `x(t) = E(t) x0` averaged over `[0, T]` with a composite
/// Gauss rule, then windowed energy of its non-kernel part.
pub fn free_time_averaged_nonkernel_energy(
    prop: &Propagator,
    x0: &AcousticState,
    t_total: f64,
    eps: f64,
    window: &Window,
    panels: usize,
) -> Result<f64> {
    let (nodes, weights) = composite_gauss(0.0, t_total, panels, 8);
    let mut avg = TimeAverager::new();
    for (t, w) in nodes.iter().zip(&weights) {
        avg.add(*w, &prop.evolve(x0, *t, eps)?);
    }
    let c = prop.sound_speed();
    windowed_energy(&nonkernel_part(&avg.average(t_total)?, c), window, c)
}

/// Closed-form amplitude factor `|(1/T) int_0^T e^{i lambda t / eps} dt|`.
pub fn single_mode_average_factor(lambda: f64, t_total: f64, eps: f64) -> f64 {
    let z = Complex64::new(0.0, lambda * t_total / eps);
    (eps * (z.exp() - 1.0) / (Complex64::new(0.0, lambda) * t_total)).norm()
}

/// Envelope `2 eps / (T |lambda_min|) ||Q_perp x0||` bounding the square
/// root of the time-averaged non-kernel energy of a free trajectory, with
/// `lambda_min` the smallest nonzero frequency among modes that carry
/// non-kernel energy in `x0`.
pub fn rage_envelope(prop: &Propagator, x0: &AcousticState, t_total: f64, eps: f64) -> f64 {
    let c = prop.sound_speed();
    let q = nonkernel_part(x0, c);
    let g = *prop.grid();
    let mut lmin = f64::INFINITY;
    for i1 in 0..g.nh {
        for i2 in 0..g.nh {
            for n in 0..g.nv {
                let v = q.mode_vec(i1, i2, n);
                if v.iter().all(|z| z.norm() == 0.0) {
                    continue;
                }
                for f in prop.frequencies(g.index(i1, i2, n)) {
                    if f.abs() > 1e-12 {
                        lmin = lmin.min(f.abs());
                    }
                }
            }
        }
    }
    if !lmin.is_finite() {
        return 0.0;
    }
    2.0 * eps / (t_total * lmin) * q.energy_norm_sq(c).sqrt()
}
