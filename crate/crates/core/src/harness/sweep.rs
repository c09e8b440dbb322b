//! The `eps`-sweep: primitive runs against a single limit trajectory.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

use crate::acoustic::{AcousticState, Propagator, TimeAverager};
use crate::error::{Error, Result};
use crate::limit::LimitParams;
use crate::output::CsvTable;
use crate::primitive::{
    essential_residual_split, forcing_norms, make_ill_prepared_data, CutoffSpec, FluidState, PrimParams,
    PrimitiveSolver,
};
use crate::quadrature::trapezoid_weights;
use crate::spectral::{
    d_x1, d_x2, div_h, local_l2_norm, local_l2_norm_many, vertical_average, GridSpec, VectorField, Window,
};

use super::profiles::Profiles;
use super::rage::RageAccumulator;
use super::reference::{LimitReference, LimitSample};

/// Everything a sweep needs. `prim.epsilon` is replaced by each entry of
/// `epsilons` in turn.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub grid: GridSpec,
    pub epsilons: Vec<f64>,
    pub prim: PrimParams,
    pub dt: f64,
    pub t_final: f64,
    pub sample_every: usize,
    pub window: Window,
    /// Frequency bound of the projection used by the RAGE measurement.
    pub rage_cutoff: Option<f64>,
    pub profiles: Profiles,
    /// Concurrent primitive runs (0 lets the thread pool decide).
    pub jobs: usize,
}

impl SweepConfig {
    pub fn steps(&self) -> usize {
        (self.t_final / self.dt).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if self.epsilons.is_empty() {
            return Err(Error::Config("sweep needs at least one epsilon".into()));
        }
        for e in &self.epsilons {
            if !(*e > 0.0 && *e <= 1.0) {
                return Err(Error::Config(format!("epsilon must lie in (0, 1], got {e}")));
            }
        }
        if self.epsilons.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(Error::Config("epsilons must be strictly decreasing".into()));
        }
        if !(self.dt > 0.0 && self.t_final > 0.0) {
            return Err(Error::Config("dt and T must be positive".into()));
        }
        let steps = self.steps();
        if steps == 0 || (steps as f64 * self.dt - self.t_final).abs() > 1e-9 * self.t_final {
            return Err(Error::Config(format!(
                "T = {} is not a whole number of steps of dt = {}",
                self.t_final, self.dt
            )));
        }
        if self.sample_every == 0 || !steps.is_multiple_of(self.sample_every) {
            return Err(Error::Config(format!(
                "sample interval {} must divide the step count {steps}",
                self.sample_every
            )));
        }
        if self.profiles.grid() != &self.grid {
            return Err(Error::GridMismatch("profiles are not on the sweep grid".into()));
        }
        for e in &self.epsilons {
            PrimParams {
                epsilon: *e,
                ..self.prim
            }
            .validate()?;
            let sup = self.profiles.r0_sup();
            if !(e * sup < self.prim.rho_bar) {
                return Err(Error::Config(format!(
                    "positivity margin violated at eps = {e}: eps sup|r0| = {}",
                    e * sup
                )));
            }
        }
        let p = self.prim.p_prime();
        if (p - 1.0).abs() > 1e-12 || (self.prim.rho_bar - 1.0).abs() > 1e-12 {
            return Err(Error::Config(format!(
                "the limit comparison needs p'(rho_bar) = rho_bar = 1, got p' = {p}, rho_bar = {}",
                self.prim.rho_bar
            )));
        }
        Ok(())
    }

    /// Limit parameters matching the primitive ones.
    pub fn limit_params(&self) -> Result<LimitParams> {
        LimitParams::new(self.prim.mu, self.prim.rho_bar, self.prim.p_prime())
    }
}

/// Measurements of one primitive run against the limit trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub epsilon: f64,
    /// `(int_0^T int chi |u_eps - U|^2)^{1/2}`.
    pub err_u: f64,
    /// `(int_0^T int chi |r_eps - r|^2)^{1/2}`, `r_eps = (rho_eps - rho_bar)/eps`.
    pub err_r: f64,
    /// Windowed norm of `g x <u_h> + (p'/rho_bar) grad <r>` for vertical and
    /// time means `<.>` over the slab and `(0, T)`.
    pub residual_geo: f64,
    /// Windowed norm of the time mean of `u3`.
    pub u3_norm: f64,
    /// Windowed norm of `div_h <u_h>`.
    pub divh_norm: f64,
    /// Time-averaged windowed non-kernel energy.
    pub rage_avg: f64,
    /// Windowed space-time distance of the kernel part to `(r, rho_bar U)`.
    pub kernel_distance: f64,
    /// `max_t ||[1]_res||_{L^1} / eps^2`.
    pub res_measure_over_eps2: f64,
    /// `max_t ||F1||_{L^1}`.
    pub f1_max: f64,
    pub wall_seconds: f64,
    /// `None` on success, otherwise the reason the run stopped.
    pub failure: Option<String>,
}

impl ConvergenceRow {
    fn failed(epsilon: f64, wall_seconds: f64, why: String) -> Self {
        Self {
            epsilon,
            err_u: f64::NAN,
            err_r: f64::NAN,
            residual_geo: f64::NAN,
            u3_norm: f64::NAN,
            divh_norm: f64::NAN,
            rage_avg: f64::NAN,
            kernel_distance: f64::NAN,
            res_measure_over_eps2: f64::NAN,
            f1_max: f64::NAN,
            wall_seconds,
            failure: Some(why),
        }
    }
}

/// Rows ordered like the configured epsilons (decreasing).
#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    pub limit_wall_seconds: f64,
}

pub const REPORT_COLUMNS: [&str; 7] = [
    "epsilon",
    "err_u",
    "err_r",
    "residual_geo",
    "u3_norm",
    "divh_norm",
    "rage_avg",
];

pub const EXTRA_COLUMNS: [&str; 5] = [
    "epsilon",
    "kernel_distance",
    "res_measure_over_eps2",
    "f1_max",
    "completed",
];

impl ConvergenceReport {
    pub fn all_completed(&self) -> bool {
        self.rows.iter().all(|r| r.failure.is_none())
    }

    pub fn column(&self, f: impl Fn(&ConvergenceRow) -> f64) -> Vec<f64> {
        self.rows.iter().map(f).collect()
    }

    pub fn table(&self) -> CsvTable {
        let mut t = CsvTable::new(&REPORT_COLUMNS);
        for r in &self.rows {
            t.push(vec![
                r.epsilon,
                r.err_u,
                r.err_r,
                r.residual_geo,
                r.u3_norm,
                r.divh_norm,
                r.rage_avg,
            ]);
        }
        t
    }

    pub fn extra_table(&self) -> CsvTable {
        let mut t = CsvTable::new(&EXTRA_COLUMNS);
        for r in &self.rows {
            let done = if r.failure.is_none() { 1.0 } else { 0.0 };
            t.push(vec![
                r.epsilon,
                r.kernel_distance,
                r.res_measure_over_eps2,
                r.f1_max,
                done,
            ]);
        }
        t
    }
}

/// Strictly decreasing along the slice (rows are ordered by decreasing eps).
pub fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

struct RunMeasures {
    err_u_sq: f64,
    err_r_sq: f64,
    means: TimeAverager,
    rage: RageAccumulator,
    res_max: f64,
    f1_max: f64,
}

impl RunMeasures {
    fn add(
        &mut self,
        w: f64,
        s: &FluidState,
        l: &LimitSample,
        cfg: &SweepConfig,
        p: &PrimParams,
    ) -> Result<()> {
        let g = *s.grid();
        let u = s.velocity()?;
        let (rl, [ul1, ul2]) = l.extended(&g)?;
        let du = [&u.comps[0] - &ul1, &u.comps[1] - &ul2];
        let eu = local_l2_norm_many(&[&du[0], &du[1], &u.comps[2]], &cfg.window)?;
        let er = local_l2_norm(&(s.r() - &rl), &cfg.window)?;
        self.err_u_sq += w * eu * eu;
        self.err_r_sq += w * er * er;
        self.means.add(w, &AcousticState::new(s.r().clone(), u)?);
        self.rage.add(w, &s.fast, Some(l))?;
        let ess = essential_residual_split(s, &CutoffSpec::around(p.rho_bar), p.gamma)?;
        self.res_max = self.res_max.max(ess.res_measure / (p.epsilon * p.epsilon));
        self.f1_max = self.f1_max.max(forcing_norms(s, p)?.f1_l1);
        Ok(())
    }
}

fn run_one(
    cfg: &SweepConfig,
    eps: f64,
    reference: &LimitReference,
    prop: &Arc<Propagator>,
) -> Result<ConvergenceRow> {
    let p = PrimParams {
        epsilon: eps,
        ..cfg.prim
    };
    let st = make_ill_prepared_data(&cfg.profiles.r0, &cfg.profiles.u0, eps, p.rho_bar)?;
    let mut solver = PrimitiveSolver::with_propagator(st, p, prop.clone())?;
    let times = reference.times();
    let weights = trapezoid_weights(&times)?;
    let mut m = RunMeasures {
        err_u_sq: 0.0,
        err_r_sq: 0.0,
        means: TimeAverager::new(),
        rage: RageAccumulator::new(cfg.window.clone(), p.sound_speed(), cfg.rage_cutoff, p.rho_bar),
        res_max: 0.0,
        f1_max: 0.0,
    };
    m.add(weights[0], &solver.state, &reference.samples[0], cfg, &p)?;
    for (i, (w, l)) in weights.iter().zip(&reference.samples).enumerate().skip(1) {
        for _ in 0..cfg.sample_every {
            solver.step(cfg.dt)?;
        }
        solver.state.t = times[i];
        m.add(*w, &solver.state, l, cfg, &p)?;
    }
    let t_total = cfg.t_final;
    let mean = m.means.average(t_total)?;
    let r_bar = vertical_average(&mean.r);
    let u_bar = VectorField {
        comps: vec![
            vertical_average(&mean.v.comps[0]),
            vertical_average(&mean.v.comps[1]),
        ],
    };
    let f = p.p_prime() / p.rho_bar;
    let geo1 = &d_x1(&r_bar).scale(f) - &u_bar.comps[1];
    let geo2 = &u_bar.comps[0] + &d_x2(&r_bar).scale(f);
    let rage = m.rage.finish(t_total)?;
    Ok(ConvergenceRow {
        epsilon: eps,
        err_u: m.err_u_sq.sqrt(),
        err_r: m.err_r_sq.sqrt(),
        residual_geo: local_l2_norm_many(&[&geo1, &geo2], &cfg.window)?,
        u3_norm: local_l2_norm(&mean.v.comps[2], &cfg.window)?,
        divh_norm: local_l2_norm(&div_h(&u_bar)?, &cfg.window)?,
        rage_avg: rage.rage_avg,
        kernel_distance: rage.kernel_distance.unwrap_or(f64::NAN),
        res_measure_over_eps2: m.res_max,
        f1_max: m.f1_max,
        wall_seconds: 0.0,
        failure: None,
    })
}

/// Run the sweep. Configuration and reference errors are returned as
/// errors; a primitive run that aborts yields a row with `failure` set.
pub fn run_sweep(cfg: &SweepConfig) -> Result<ConvergenceReport> {
    cfg.validate()?;
    let lp = cfg.limit_params()?;
    let t0 = Instant::now();
    let reference = LimitReference::compute(&cfg.profiles, lp, cfg.dt, cfg.steps(), cfg.sample_every)?;
    let limit_wall_seconds = t0.elapsed().as_secs_f64();
    let prop = Arc::new(Propagator::new(cfg.grid, cfg.prim.sound_speed())?);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let rows = pool.install(|| {
        cfg.epsilons
            .par_iter()
            .map(|&eps| {
                let start = Instant::now();
                match run_one(cfg, eps, &reference, &prop) {
                    Ok(mut row) => {
                        row.wall_seconds = start.elapsed().as_secs_f64();
                        row
                    }
                    Err(e) => ConvergenceRow::failed(eps, start.elapsed().as_secs_f64(), e.to_string()),
                }
            })
            .collect::<Vec<_>>()
    });
    Ok(ConvergenceReport {
        rows,
        limit_wall_seconds,
    })
}
