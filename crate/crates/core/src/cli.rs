//! Command line: argument parsing, subcommand drivers and exit codes.
//!
//! Every driver validates its whole configuration before touching the
//! output directory, computes in memory, then writes its artifacts through
//! temporary files and renames.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

use crate::acoustic::{
    eigen_closed_form, eigen_oracle, kernel_projection_with_speed, nonkernel_part, windowed_energy,
};
use crate::config::RunConfig;
use crate::error::Error;
use crate::harness::{run_sweep, LimitReference};
use crate::limit::energy_diagnostics;
use crate::output::{write_atomic, CsvTable};
use crate::primitive::{
    energy_inequality_check, energy_sample, essential_residual_split, forcing_norms, make_ill_prepared_data,
    CutoffSpec, PrimitiveSolver,
};
use crate::spectral::io::write_snapshot;
use crate::spectral::{SpectralField, Window};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_ABORT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "qglimit", version, about = "Low Mach / low Rossby limit laboratory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the acoustic-Coriolis spectrum on integer wavenumbers.
    Spectrum(SpectrumArgs),
    /// Integrate the limit equation from the configured profile.
    LimitRun(RunArgs),
    /// Integrate the compressible system at `prim.epsilon`.
    PrimitiveRun(RunArgs),
    /// Compare primitive runs over `sweep.epsilons` with the limit.
    Sweep(RunArgs),
    /// Windowed kernel and non-kernel energy of a primitive run.
    Rage(RunArgs),
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Largest `|xi1|`, `|xi2|`.
    #[arg(long, allow_negative_numbers = true)]
    pub max_xi: i64,
    /// Largest vertical wavenumber `k`.
    #[arg(long, allow_negative_numbers = true)]
    pub max_k: i64,
    #[arg(long, default_value = ".")]
    pub output_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Concurrent runs in a sweep.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Overrides `output.dir`.
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
    /// Overrides `sweep.seed`.
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Failure of a subcommand, mapped onto the exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("validation error: {0}")]
    Validation(Error),
    #[error("solver abort (last good time {last_good}): {source}")]
    Abort { source: Error, last_good: f64 },
    #[error("i/o error: {0}")]
    Output(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Abort { .. } | CliError::Output(_) => EXIT_ABORT,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn invalid(e: Error) -> CliError {
    CliError::Validation(e)
}

/// Abort at `last_good` unless the error records its own last good time.
fn abort_at(last_good: f64) -> impl Fn(Error) -> CliError {
    move |source| {
        let last_good = match source {
            Error::NonFinite { last_good, .. } => last_good,
            _ => last_good,
        };
        CliError::Abort { source, last_good }
    }
}

fn io(e: Error) -> CliError {
    CliError::Output(e)
}

pub const SPECTRUM_COLUMNS: [&str; 10] = [
    "xi1",
    "xi2",
    "k",
    "im_lambda_1",
    "im_lambda_2",
    "im_lambda_3",
    "im_lambda_4",
    "mu_plus",
    "mu_minus",
    "oracle_err",
];

/// Closed-form spectrum on `xi in [-max_xi, max_xi]^2`, `k in [0, max_k]`,
/// with the largest deviation from a numerical diagonalisation per row.
pub fn spectrum_table(max_xi: i64, max_k: i64) -> crate::Result<CsvTable> {
    if max_xi < 0 || max_k < 0 {
        return Err(Error::Param(format!(
            "bounds must be nonnegative, got {max_xi}, {max_k}"
        )));
    }
    let mut t = CsvTable::new(&SPECTRUM_COLUMNS);
    for a in -max_xi..=max_xi {
        for b in -max_xi..=max_xi {
            for k in 0..=max_k {
                let xi = (a as f64, b as f64);
                let cf = eigen_closed_form(xi, k as f64);
                let num = eigen_oracle(xi, k as f64)?;
                let err = cf
                    .eigenvalues
                    .iter()
                    .zip(&num.eigenvalues)
                    .fold(0.0f64, |m, (x, y)| m.max((x - y).norm()));
                let im = cf.eigenvalues.map(|l| l.im);
                t.push(vec![
                    xi.0,
                    xi.1,
                    k as f64,
                    im[0],
                    im[1],
                    im[2],
                    im[3],
                    cf.mu_plus,
                    cf.mu_minus,
                    err,
                ]);
            }
        }
    }
    Ok(t)
}

/// Files produced by a driver, written only once the computation is done.
#[derive(Debug, Default)]
pub struct Artifacts {
    files: Vec<(String, Vec<u8>)>,
    snapshots: Vec<(String, SpectralField, f64)>,
}

impl Artifacts {
    fn csv(&mut self, name: &str, t: &CsvTable) {
        self.files.push((name.to_string(), t.render().into_bytes()));
    }

    fn snapshot(&mut self, stem: String, f: &SpectralField, t: f64) {
        self.snapshots.push((stem, f.clone(), t));
    }

    /// Write everything under `dir`; returns the data file paths.
    pub fn write(&self, dir: &Path) -> crate::Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut out = Vec::new();
        for (name, bytes) in &self.files {
            let p = dir.join(name);
            write_atomic(&p, bytes)?;
            out.push(p);
        }
        for (stem, f, t) in &self.snapshots {
            write_snapshot(dir, stem, f, *t)?;
            out.push(dir.join(format!("{stem}.bin")));
        }
        Ok(out)
    }
}

/// Load `--config`, then apply `--seed` and `--output-dir`.
pub fn load_config(args: &RunArgs) -> CliResult<RunConfig> {
    let mut cfg = RunConfig::load(&args.config).map_err(invalid)?;
    if let Some(s) = args.seed {
        cfg = cfg.with_seed(s);
    }
    if let Some(d) = &args.output_dir {
        cfg.output_dir = d.clone();
    }
    Ok(cfg)
}

fn sample_count(name: &str, dt: f64, t: f64, every: usize) -> CliResult<usize> {
    let steps = crate::config::whole_steps(name, dt, t).map_err(invalid)?;
    if !steps.is_multiple_of(every) {
        return Err(invalid(Error::Config(format!(
            "{name}.output_every = {every} must divide the step count {steps}"
        ))));
    }
    Ok(steps)
}

/// Energy history and initial/final snapshots of the limit equation.
pub fn limit_run(cfg: &RunConfig) -> CliResult<Artifacts> {
    let l = &cfg.limit;
    let steps = sample_count("limit", l.dt, l.t_final, l.output_every)?;
    let profiles = cfg.sweep.profile.build(cfg.grid, &l.params).map_err(invalid)?;
    crate::harness::reference_initial_datum(&profiles, &l.params).map_err(invalid)?;
    let reference = LimitReference::compute(&profiles, l.params, l.dt, steps, l.output_every)
        .map_err(abort_at(f64::NAN))?;
    let mut energy = CsvTable::new(&["t", "lap_norm_sq", "grad_norm_sq", "dissipation"]);
    for s in &reference.samples {
        let e = energy_diagnostics(&s.r, s.t, &l.params);
        energy.push(vec![e.t, e.lap_norm_sq, e.grad_norm_sq, e.dissipation]);
    }
    let mut art = Artifacts::default();
    art.csv("limit_energy.csv", &energy);
    let first = &reference.samples[0];
    let last = &reference.samples[reference.samples.len() - 1];
    art.snapshot("limit_r_initial".into(), &first.r, first.t);
    art.snapshot("limit_r_final".into(), &last.r, last.t);
    Ok(art)
}

/// Primitive solver at `prim.epsilon` from the configured profile, with the
/// initial time step checked against the stability limits.
fn primitive_setup(cfg: &RunConfig) -> CliResult<(PrimitiveSolver, usize)> {
    let p = &cfg.prim;
    let steps = sample_count("prim", p.dt, p.t_final, p.output_every)?;
    let lp =
        crate::limit::LimitParams::new(p.params.mu, p.params.rho_bar, p.params.p_prime()).map_err(invalid)?;
    let profiles = cfg.sweep.profile.build(p.grid, &lp).map_err(invalid)?;
    let margin = p.params.epsilon * profiles.r0_sup();
    if !(margin < p.params.rho_bar) {
        return Err(invalid(Error::Config(format!(
            "positivity margin violated: eps sup|r0| = {margin} >= rho_bar"
        ))));
    }
    let st = make_ill_prepared_data(&profiles.r0, &profiles.u0, p.params.epsilon, p.params.rho_bar)
        .map_err(invalid)?;
    let solver = PrimitiveSolver::new(st, p.params).map_err(invalid)?;
    solver.limits().and_then(|l| l.check(p.dt)).map_err(invalid)?;
    Ok((solver, steps))
}

/// Step `steps` times, calling `sample` at `t = 0` and every `every` steps.
fn drive(
    solver: &mut PrimitiveSolver,
    dt: f64,
    steps: usize,
    every: usize,
    mut sample: impl FnMut(&PrimitiveSolver) -> crate::Result<()>,
) -> CliResult<()> {
    sample(solver).map_err(abort_at(0.0))?;
    for i in 1..=steps {
        let last_good = (i - 1) as f64 * dt;
        solver.step(dt).map_err(abort_at(last_good))?;
        solver.state.t = i as f64 * dt;
        if i % every == 0 {
            sample(solver).map_err(abort_at(solver.state.t))?;
        }
    }
    Ok(())
}

fn velocity_snapshots(art: &mut Artifacts, tag: &str, solver: &PrimitiveSolver) -> crate::Result<()> {
    let t = solver.state.t;
    art.snapshot(format!("prim_r_{tag}"), solver.state.r(), t);
    let u = solver.state.velocity()?;
    for (c, f) in u.comps.iter().enumerate() {
        art.snapshot(format!("prim_u{}_{tag}", c + 1), f, t);
    }
    Ok(())
}

/// Energy audit, diagnostics and initial/final snapshots of one primitive run.
pub fn primitive_run(cfg: &RunConfig) -> CliResult<Artifacts> {
    let (mut solver, steps) = primitive_setup(cfg)?;
    let p = cfg.prim.params;
    let cut = CutoffSpec::around(p.rho_bar);
    let mut art = Artifacts::default();
    velocity_snapshots(&mut art, "initial", &solver).map_err(abort_at(0.0))?;
    let every = cfg.prim.output_every;
    let mut samples = Vec::new();
    let mut diag = CsvTable::new(&["t", "ess_r_l2", "res_rho_gamma", "res_measure", "f1_l1", "f2_l2"]);
    // energy every step so the dissipation integral is resolved in time
    drive(&mut solver, cfg.prim.dt, steps, 1, |s| {
        samples.push(energy_sample(&s.state, &p)?);
        if (samples.len() - 1) % every == 0 {
            let e = essential_residual_split(&s.state, &cut, p.gamma)?;
            let f = forcing_norms(&s.state, &p)?;
            diag.push(vec![
                s.state.t,
                e.ess_r_l2,
                e.res_rho_gamma,
                e.res_measure,
                f.f1_l1,
                f.f2_l2,
            ]);
        }
        Ok(())
    })?;
    velocity_snapshots(&mut art, "final", &solver).map_err(abort_at(solver.state.t))?;
    let audit = energy_inequality_check(&samples);
    let mut energy = CsvTable::new(&[
        "t",
        "kinetic",
        "potential_over_eps2",
        "dissipated",
        "budget_drift",
    ]);
    let rows = audit
        .samples
        .iter()
        .zip(&audit.dissipated)
        .zip(&audit.budget_drift);
    for ((s, d), b) in rows.step_by(every) {
        energy.push(vec![s.t, s.kinetic, s.potential_over_eps2, *d, *b]);
    }
    art.csv("primitive_energy.csv", &energy);
    art.csv("primitive_diagnostics.csv", &diag);
    Ok(art)
}

/// Windowed energies of the kernel and non-kernel parts along a primitive run.
pub fn rage_run(cfg: &RunConfig) -> CliResult<Artifacts> {
    let (mut solver, steps) = primitive_setup(cfg)?;
    let c = cfg.prim.params.sound_speed();
    let window = Window::central_quarter(&cfg.prim.grid.horizontal());
    let mut table = CsvTable::new(&["t", "nonkernel_energy", "kernel_energy"]);
    drive(&mut solver, cfg.prim.dt, steps, cfg.prim.output_every, |s| {
        let x = &s.state.fast;
        let non = windowed_energy(&nonkernel_part(x, c), &window, c)?;
        let ker = windowed_energy(&kernel_projection_with_speed(x, c), &window, c)?;
        table.push(vec![s.state.t, non, ker]);
        Ok(())
    })?;
    let mut art = Artifacts::default();
    art.csv("rage.csv", &table);
    Ok(art)
}

/// Hex SHA-256 of the effective configuration text.
pub fn config_hash(cfg: &RunConfig) -> String {
    Sha256::digest(cfg.canonical.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Convergence tables and the run manifest. Runs that abort still produce
/// their annotated rows; the driver then reports the first failure.
pub fn sweep_run(cfg: &RunConfig, jobs: usize) -> CliResult<(Artifacts, Option<CliError>)> {
    let sc = cfg.sweep_config(jobs).map_err(invalid)?;
    let report = run_sweep(&sc).map_err(abort_at(0.0))?;
    let runs: Vec<_> = report
        .rows
        .iter()
        .map(|r| {
            serde_json::json!({
                "epsilon": r.epsilon,
                "wall_seconds": r.wall_seconds,
                "completed": r.failure.is_none(),
                "failure": r.failure,
            })
        })
        .collect();
    let manifest = serde_json::json!({
        "version": env!("CARGO_PKG_VERSION"),
        "config_sha256": config_hash(cfg),
        "config": cfg.canonical,
        "jobs": jobs,
        "limit_wall_seconds": report.limit_wall_seconds,
        "runs": runs,
        "solvers": {
            "limit": "pseudo-spectral, exact viscous integrating factor with explicit midpoint advection",
            "primitive": "Strang splitting around the exact acoustic-Coriolis propagator",
        },
    });
    let mut art = Artifacts::default();
    art.csv("convergence_report.csv", &report.table());
    art.csv("convergence_extra.csv", &report.extra_table());
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| io(e.into()))?;
    art.files.push(("manifest.json".into(), text.into_bytes()));
    let failure = report.rows.iter().find_map(|r| {
        r.failure.as_ref().map(|m| CliError::Abort {
            source: Error::Param(format!("run at eps = {} failed: {m}", r.epsilon)),
            last_good: f64::NAN,
        })
    });
    Ok((art, failure))
}

/// Run a parsed command line; returns the exit status.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Spectrum(a) => spectrum_table(a.max_xi, a.max_k)
            .map_err(|e| {
                eprintln!("usage error: {e}");
                EXIT_USAGE
            })
            .and_then(|t| {
                let p = a.output_dir.join("spectrum.csv");
                t.write(&p).map(|_| vec![p]).map_err(|e| {
                    eprintln!("{}", io(e));
                    EXIT_ABORT
                })
            }),
        Command::LimitRun(a) => finish(load_config(&a).and_then(|c| limit_run(&c).map(|r| (c, r, None)))),
        Command::PrimitiveRun(a) => {
            finish(load_config(&a).and_then(|c| primitive_run(&c).map(|r| (c, r, None))))
        }
        Command::Rage(a) => finish(load_config(&a).and_then(|c| rage_run(&c).map(|r| (c, r, None)))),
        Command::Sweep(a) => {
            finish(load_config(&a).and_then(|c| sweep_run(&c, a.jobs).map(|(r, f)| (c, r, f))))
        }
    };
    match result {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            EXIT_OK
        }
        Err(code) => code,
    }
}

type Outcome = CliResult<(RunConfig, Artifacts, Option<CliError>)>;

fn finish(outcome: Outcome) -> std::result::Result<Vec<PathBuf>, i32> {
    let fail = |e: CliError| {
        eprintln!("{e}");
        e.exit_code()
    };
    let (cfg, art, failure) = outcome.map_err(fail)?;
    let paths = art.write(&cfg.output_dir).map_err(|e| fail(io(e)))?;
    match failure {
        Some(e) => Err(fail(e)),
        None => Ok(paths),
    }
}
