//! Time-averaged non-kernel energy and kernel distance of a trajectory.

use crate::acoustic::{
    kernel_projection_with_speed, nonkernel_part, windowed_energy, AcousticState, TimeAverager,
};
use crate::error::{Error, Result};
use crate::quadrature::trapezoid_weights;
use crate::spectral::{truncate_to_cutoff, Window};

use super::reference::LimitSample;

/// Result of [`rage_decay_report`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RageReport {
    /// `int chi |Q_perp P_M <x>|^2`, `<x>` the time average over `(0, T)`.
    pub rage_avg: f64,
    /// `(int_0^T int chi |Q P_M x - P_M (r, rho_bar U, 0)|^2)^{1/2}`, when a
    /// limit trajectory is supplied.
    pub kernel_distance: Option<f64>,
}

/// Streaming form of [`rage_decay_report`] for trajectories that are not
/// stored.
#[derive(Debug, Clone)]
pub struct RageAccumulator {
    window: Window,
    sound_speed: f64,
    cutoff: Option<f64>,
    rho_bar: f64,
    avg: TimeAverager,
    kernel_sq: f64,
    with_limit: Option<bool>,
}

impl RageAccumulator {
    pub fn new(window: Window, sound_speed: f64, cutoff: Option<f64>, rho_bar: f64) -> Self {
        Self {
            window,
            sound_speed,
            cutoff,
            rho_bar,
            avg: TimeAverager::new(),
            kernel_sq: 0.0,
            with_limit: None,
        }
    }

    fn truncate(&self, x: &AcousticState) -> AcousticState {
        match self.cutoff {
            Some(m) => x.map(|f| truncate_to_cutoff(f, m)),
            None => x.clone(),
        }
    }

    /// Add the sample `x(t_i)` with quadrature weight `w`.
    pub fn add(&mut self, w: f64, x: &AcousticState, limit: Option<&LimitSample>) -> Result<()> {
        if *self.with_limit.get_or_insert(limit.is_some()) != limit.is_some() {
            return Err(Error::Param(
                "limit samples must be given for all or none of the times".into(),
            ));
        }
        let px = self.truncate(x);
        if let Some(l) = limit {
            let g = *x.grid();
            let (r, [u1, u2]) = l.extended(&g)?;
            let mut target = AcousticState::zeros(g);
            target.r = r;
            target.v.comps[0] = u1.scale(self.rho_bar);
            target.v.comps[1] = u2.scale(self.rho_bar);
            let d = kernel_projection_with_speed(&px, self.sound_speed).sub(&self.truncate(&target));
            self.kernel_sq += w * windowed_energy(&d, &self.window, self.sound_speed)?;
        }
        self.avg.add(w, &px);
        Ok(())
    }

    pub fn finish(&self, t_total: f64) -> Result<RageReport> {
        let mean = self.avg.average(t_total)?;
        Ok(RageReport {
            rage_avg: windowed_energy(
                &nonkernel_part(&mean, self.sound_speed),
                &self.window,
                self.sound_speed,
            )?,
            kernel_distance: self.with_limit.unwrap_or(false).then(|| self.kernel_sq.sqrt()),
        })
    }
}

/// RAGE measurement of a stored trajectory `(t_i, x(t_i))` on `[0, T]`,
/// `T` the last sample time, with trapezoidal time quadrature. `cutoff` is
/// the frequency bound `M` of the projection `P_M` (`None` keeps all modes).
pub fn rage_decay_report(
    trajectory: &[(f64, AcousticState)],
    limit: Option<&[LimitSample]>,
    window: &Window,
    sound_speed: f64,
    cutoff: Option<f64>,
    rho_bar: f64,
) -> Result<RageReport> {
    let times: Vec<f64> = trajectory.iter().map(|(t, _)| *t).collect();
    let w = trapezoid_weights(&times)?;
    if let Some(l) = limit {
        if l.len() != trajectory.len()
            || l.iter()
                .zip(&times)
                .any(|(s, t)| (s.t - t).abs() > 1e-9 * t.abs().max(1.0))
        {
            return Err(Error::GridMismatch(
                "limit samples are not on the trajectory time mesh".into(),
            ));
        }
    }
    let mut acc = RageAccumulator::new(window.clone(), sound_speed, cutoff, rho_bar);
    for (i, (wi, (_, x))) in w.iter().zip(trajectory).enumerate() {
        acc.add(*wi, x, limit.map(|l| &l[i]))?;
    }
    acc.finish(times[times.len() - 1] - times[0])
}
