//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Tolerances are the contract values.

use std::f64::consts::PI;
use std::time::Instant;

use qglimit::acoustic::*;
use qglimit::spectral::*;
use qglimit::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn list(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("{x:.4e}")).collect();
    format!("[{}]", items.join(", "))
}

fn inner(a: &AcousticState, b: &AcousticState) -> f64 {
    a.r.inner(&b.r) + (0..3).map(|c| a.v.comps[c].inner(&b.v.comps[c])).sum::<f64>()
}

/// Closed-form eigenvalues against a numerical 4x4 diagonalisation on every
/// integer mode `|xi_j| <= 8`, `0 <= k <= 8`.
fn dispersion() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut zero_ok = true;
    for a in -8..=8 {
        for b in -8..=8 {
            for k in 0..=8 {
                let xi = (a as f64, b as f64);
                let cf = eigen_closed_form(xi, k as f64);
                let num = eigen_oracle(xi, k as f64).expect("eigensolver");
                for (x, y) in cf.eigenvalues.iter().zip(&num.eigenvalues) {
                    worst = worst.max((x - y).norm());
                }
                let smallest = num
                    .eigenvalues
                    .iter()
                    .map(|l| l.norm())
                    .fold(f64::INFINITY, f64::min);
                let has_zero = cf.eigenvalues.iter().any(|l| l.norm() == 0.0);
                zero_ok &= if k == 0 {
                    has_zero && smallest < 1e-12
                } else {
                    !has_zero && smallest > 1e-3
                };
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst < 1e-10 && zero_ok && secs < 1.0,
        format!("max |closed - numeric| = {worst:.2e}, zero iff k = 0: {zero_ok}, {secs:.3} s"),
    )
}

/// Unitarity over 100 random `(x, t, eps)`; `Q` idempotent, orthogonal and
/// commuting with evolution and truncation.
fn propagator_structure() -> Outcome {
    let g = GridSpec::new(4.0 * PI, 16, 6).unwrap();
    let p = Propagator::new(g, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut unit = 0.0f64;
    let mut q_defect = 0.0f64;
    for _ in 0..100 {
        let x = AcousticState::random(g, &mut rng, 1.0, 7);
        let t = rng.gen_range(0.0..20.0);
        let eps = rng.gen_range(0.01..1.0);
        let y = p.evolve(&x, t, eps).unwrap();
        unit = unit.max((y.norm() / x.norm() - 1.0).abs());
        let q = kernel_projection(&x);
        let n = x.norm();
        let z = AcousticState::random(g, &mut rng, 1.0, 7);
        let checks = [
            kernel_projection(&q).max_abs_diff(&q),
            inner(&q, &x.sub(&q)).abs() / (n * n),
            (inner(&q, &z) - inner(&x, &kernel_projection(&z))).abs() / (n * z.norm()),
            kernel_projection(&y).max_abs_diff(&p.evolve(&q, t, eps).unwrap()),
            kernel_projection(&x.map(|f| truncate_to_cutoff(f, 3.0)))
                .max_abs_diff(&q.map(|f| truncate_to_cutoff(f, 3.0))),
        ];
        q_defect = checks.iter().fold(q_defect, |m, v| m.max(*v));
    }
    outcome(
        unit <= 1e-12 && q_defect <= 1e-12,
        format!("max | |E x|/|x| - 1 | = {unit:.2e}, max projection defect = {q_defect:.2e}"),
    )
}

/// `|eps (e^{i lambda T/eps} - 1) / (i lambda T)|`.
fn average_factor(lambda: f64, t: f64, eps: f64) -> f64 {
    let phase = Complex64::new(0.0, lambda * t / eps);
    (Complex64::new(eps, 0.0) * (phase.exp() - 1.0) / Complex64::new(0.0, lambda * t)).norm()
}

/// Measured time averages of single eigenmodes against the closed form;
/// monotone decay of the averaged energy of random non-kernel data.
fn rage_envelope_check() -> Outcome {
    let g = GridSpec::new(2.0 * PI, 8, 4).unwrap();
    let p = Propagator::new(g, 1.0).unwrap();
    let full = Window::full(&g);
    let (i1, i2, n) = (1, 0, 1);
    let conj = g.nh - i1;
    let sym = mode_symbol((g.xi_deriv(i1), g.xi_deriv(i2)), g.k_deriv(n));
    let eig = eigen_oracle_symbol(&sym).unwrap();
    let mut worst = 0.0f64;
    for j in 0..4 {
        for eps in [0.4, 0.2, 0.1, 0.05] {
            let v = eig.eigenvectors.column(j);
            let a: [Complex64; 4] = std::array::from_fn(|c| v[c]);
            let mut x = AcousticState::zeros(g);
            x.set_mode_vec(i1, i2, n, a);
            // real field: conjugate partner at -xi (the odd component flips sign)
            x.set_mode_vec(conj, i2, n, [a[0].conj(), a[1].conj(), a[2].conj(), -a[3].conj()]);
            let e0 = x.norm_sq();
            let got = (free_time_averaged_nonkernel_energy(&p, &x, 1.0, eps, &full, 64).unwrap() / e0).sqrt();
            let want = average_factor(eig.eigenvalues[j].im, 1.0, eps);
            worst = worst.max((got - want).abs());
        }
    }
    let g2 = GridSpec::new(4.0 * PI, 16, 6).unwrap();
    let p2 = Propagator::new(g2, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let x = nonkernel_part(&AcousticState::random(g2, &mut rng, 1.0, 7), 1.0);
    let w = Window::central_quarter(&g2);
    let vals: Vec<f64> = [0.4, 0.2, 0.1, 0.05]
        .iter()
        .map(|&eps| free_time_averaged_nonkernel_energy(&p2, &x, 1.0, eps, &w, 64).unwrap())
        .collect();
    let falls = vals.windows(2).all(|w| w[1] < w[0]);
    outcome(
        worst < 1e-10 && falls,
        format!(
            "max |measured - closed form| = {worst:.2e}, averaged energies {}",
            list(&vals)
        ),
    )
}

/// Random dealiased horizontal field with spectrum decaying like `exp(-|m|)`.
fn smooth_random(g: GridSpec, seed: u64, amp: f64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = SpectralField::zeros(g, Parity::Even);
    for i1 in 0..g.nh {
        for i2 in 0..g.nh {
            let m = ((g.mode_number(i1).pow(2) + g.mode_number(i2).pow(2)) as f64).sqrt();
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            f.set(i1, i2, 0, c * amp * (-m).exp());
        }
    }
    f.symmetrize();
    dealias(&f)
}

/// Exact decay of `cos(x1)`, energy neutrality of the nonlinear term and the
/// energy law of the limit equation.
fn limit_exactness() -> Outcome {
    use qglimit::limit::*;
    let start = Instant::now();
    let g = GridSpec::new(2.0 * PI, 32, 1).unwrap();
    let p = LimitParams::new(1.0, 1.0, 1.0).unwrap();
    let r0 = project(&g, Parity::Even, |x, _, _| x.cos()).unwrap();
    let mut s = LimitSolver::new(r0, p).unwrap();
    for _ in 0..1000 {
        s.step(1e-3).unwrap();
    }
    let decay = (-0.5f64).exp();
    let err = inverse_transform(&s.r)
        .iter()
        .enumerate()
        .map(|(i, v)| (v - decay * g.x(i / g.nh).cos()).abs())
        .fold(0.0, f64::max);
    let mut neutral = 0.0f64;
    for seed in 0..8 {
        let r = smooth_random(g, seed, 1.0);
        neutral = neutral.max(rhs_nonlinear(&r).unwrap().inner(&laplacian_h(&r)).abs());
    }
    let q = LimitParams::new(0.02, 1.0, 1.0).unwrap();
    let mut s = LimitSolver::new(smooth_random(g, 4, 0.5), q).unwrap();
    let mut reps = vec![energy_diagnostics(&s.r, 0.0, &q)];
    for _ in 0..1000 {
        s.step(1e-3).unwrap();
        reps.push(energy_diagnostics(&s.r, s.t, &q));
    }
    let (_, drift) = energy_budget(&reps, &q);
    let secs = start.elapsed().as_secs_f64();
    outcome(
        err < 1e-8 && neutral < 1e-10 && drift < 1e-6 && secs < 30.0,
        format!(
            "decay error {err:.2e}, |int N Delta r| {neutral:.2e}, energy drift {drift:.2e}, {secs:.2} s"
        ),
    )
}

/// Manufactured elliptic solutions and the `cos(x1)` initial datum.
fn initial_datum() -> Outcome {
    use qglimit::limit::*;
    let g = GridSpec::new(5.0, 32, 1).unwrap();
    let p = LimitParams::new(0.3, 1.7, 2.5).unwrap();
    let mut manufactured = 0.0f64;
    for seed in 0..4 {
        let star = smooth_random(g, seed, 1.0);
        let got = solve_elliptic(&apply_elliptic(&star, &p), &p).unwrap();
        manufactured = manufactured.max(got.max_abs_diff(&star) / star.max_abs_coeff());
    }
    let g3 = GridSpec::new(2.0 * PI, 16, 5).unwrap();
    let r0 = project(&g3, Parity::Even, |x, _, _| x.cos()).unwrap();
    let rt = solve_initial_datum(&r0, &VectorField::zeros(g3, 2), &LimitParams::default()).unwrap();
    let half = inverse_transform(&rt)
        .iter()
        .enumerate()
        .map(|(i, v)| (v - 0.5 * g3.x(i / g3.nh).cos()).abs())
        .fold(0.0, f64::max);
    outcome(
        manufactured < 1e-12 && half < 1e-12,
        format!("manufactured recovery {manufactured:.2e}, cos(x1)/2 deviation {half:.2e}"),
    )
}

fn prim_params(eps: f64, mu: f64) -> qglimit::primitive::PrimParams {
    qglimit::primitive::PrimParams {
        epsilon: eps,
        mu,
        ..Default::default()
    }
}

/// Smooth non-geostrophic data with vertical structure.
fn slab_data(g: GridSpec, amp: f64) -> (SpectralField, VectorField) {
    let k = 2.0 * PI / g.l;
    let r0 = project(&g, Parity::Even, |x, y, z| {
        amp * ((8.0 * k * x).cos() + 0.5 * (4.0 * k * y + 0.3).sin() * (PI * z).cos())
    })
    .unwrap();
    let u1 = project(&g, Parity::Even, |x, y, z| {
        amp * ((4.0 * k * y).sin() * (1.0 + 0.3 * (PI * z).cos()) + 0.2 * (4.0 * k * x).cos())
    })
    .unwrap();
    let u2 = project(&g, Parity::Even, |x, y, _| {
        amp * 0.7 * (4.0 * k * x + 8.0 * k * y).cos()
    })
    .unwrap();
    let u3 = project(&g, Parity::Odd, |x, _, z| {
        amp * 0.3 * (4.0 * k * x).sin() * (PI * z).sin()
    })
    .unwrap();
    (r0, VectorField::new(vec![u1, u2, u3]).unwrap())
}

/// Mass, energy budget with its refinement order, linear regime against the
/// exact propagator and a shared stable time step.
fn primitive_solver() -> Outcome {
    use qglimit::primitive::*;
    let g = GridSpec::new(16.0 * PI, 64, 8).unwrap();
    let (r0, u0) = slab_data(g, 1.0);
    let p = prim_params(0.1, 0.1);
    let start = |eps: f64, pp: PrimParams, r: &SpectralField, u: &VectorField| {
        PrimitiveSolver::new(make_ill_prepared_data(r, u, eps, 1.0).unwrap(), pp).unwrap()
    };
    let mut s = start(0.1, p, &r0, &u0);
    let m0 = s.state.mass();
    let mut mass = 0.0f64;
    for _ in 0..20 {
        s.step(0.05).unwrap();
        mass = mass.max((s.state.mass() - m0).abs() / m0);
    }
    let drift = |dt: f64| {
        let mut s = start(0.1, p, &r0, &u0);
        let mut samples = vec![energy_sample(&s.state, &p).unwrap()];
        for _ in 0..(1.0 / dt).round() as usize {
            s.step(dt).unwrap();
            samples.push(energy_sample(&s.state, &p).unwrap());
        }
        energy_inequality_check(&samples).max_relative_drift()
    };
    let d = [drift(0.02), drift(0.01), drift(0.005)];
    let order = (d[0] / d[1]).log2();
    let gl = GridSpec::new(16.0 * PI, 32, 6).unwrap();
    let (rl, ul) = slab_data(gl, 1e-11);
    let pl = prim_params(0.1, 1e-14);
    let mut s = start(0.1, pl, &rl, &ul);
    let x0 = s.state.fast.clone();
    for _ in 0..20 {
        s.step(0.05).unwrap();
    }
    let want = Propagator::new(gl, pl.sound_speed())
        .unwrap()
        .evolve(&x0, 1.0, 0.1)
        .unwrap();
    let linear = s.state.fast.sub(&want).norm() / want.norm();
    let (rs, us) = slab_data(gl, 1.0);
    let stable = [0.4, 0.05].iter().all(|&eps| {
        let mut s = start(eps, prim_params(eps, 0.1), &rs, &us);
        (0..20).all(|_| s.step(0.05).is_ok()) && s.state.fast.is_finite()
    });
    outcome(
        mass < 1e-12 && d[2] < 1e-4 && d[1] < d[0] && d[2] < d[1] && order >= 1.9 && linear < 1e-10 && stable,
        format!(
            "mass {mass:.2e}, energy drift at dt 0.02/0.01/0.005 {} (order {order:.2}), linear {linear:.2e}, same dt stable {stable}",
            list(&d)
        ),
    )
}

fn default_config() -> qglimit::config::RunConfig {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/default.cfg");
    let text = std::fs::read_to_string(path).expect("default config");
    let raw = qglimit::config::RawConfig::parse(&text).unwrap();
    qglimit::config::RunConfig::from_raw(&raw).unwrap()
}

/// Default sweep: strict decrease of the strong errors and decrease of the
/// weak diagnostics, inside the runtime budget.
fn singular_limit_sweep() -> Outcome {
    use qglimit::harness::{run_sweep, strictly_decreasing};
    let cfg = default_config().sweep_config(1).unwrap();
    let start = Instant::now();
    let rep = run_sweep(&cfg).unwrap();
    let secs = start.elapsed().as_secs_f64();
    print!("{}", rep.table().render());
    let cols = [
        ("err_u", rep.column(|r| r.err_u)),
        ("err_r", rep.column(|r| r.err_r)),
        ("u3_norm", rep.column(|r| r.u3_norm)),
        ("divh_norm", rep.column(|r| r.divh_norm)),
        ("residual_geo", rep.column(|r| r.residual_geo)),
    ];
    let failing: Vec<&str> = cols
        .iter()
        .filter(|(_, c)| !strictly_decreasing(c))
        .map(|(n, _)| *n)
        .collect();
    outcome(
        rep.all_completed() && failing.is_empty() && secs < 600.0,
        format!(
            "all runs completed: {}, non-decreasing columns {failing:?}, {secs:.1} s",
            rep.all_completed()
        ),
    )
}

/// Gronwall envelope with `C = 1` for perturbed default limit runs.
fn gronwall() -> Outcome {
    use qglimit::harness::reference_initial_datum;
    use qglimit::limit::*;
    let cfg = default_config();
    let lp = cfg.limit.params;
    let profiles = cfg.sweep.profile.build(cfg.grid, &lp).unwrap();
    let r0 = reference_initial_datum(&profiles, &lp).unwrap();
    let h = *r0.grid();
    let k = 2.0 * PI / h.l;
    let bump = dealias(
        &project(&h, Parity::Even, |x, y, _| {
            (3.0 * k * x).cos() * (2.0 * k * y).sin()
        })
        .unwrap(),
    );
    let dt = cfg.limit.dt;
    let traj = |r: SpectralField| {
        let mut s = LimitSolver::new(r, lp).unwrap();
        let mut out = vec![(0.0, s.r.clone())];
        for i in 1..=(1.0 / dt).round() as usize {
            s.step(dt).unwrap();
            out.push((i as f64 * dt, s.r.clone()));
        }
        out
    };
    let base = traj(r0.clone());
    let mut ok = true;
    let mut worst = 0.0f64;
    let mut t0_defect = 0.0f64;
    for size in [1e-4, 1e-6, 1e-8] {
        let d0 = bump.scale(size);
        let pert = traj(&r0 + &d0);
        let rep = stability_gap(&base, &pert, &lp, 1.0).unwrap();
        ok &= rep.all_within();
        worst = worst.max(rep.worst_ratio());
        let d = &base[0].1 - &pert[0].1;
        ok &= rep.lhs[0] == laplacian_h(&d).norm_sq() + grad_h(&d).norm_sq();
        let want = laplacian_h(&d0).norm_sq() + grad_h(&d0).norm_sq();
        t0_defect = t0_defect.max((rep.lhs[0] - want).abs() / want);
    }
    outcome(
        ok && t0_defect < 1e-6,
        format!(
            "max LHS/envelope {worst:.3e}, LHS(0) vs |Delta d0|^2 + |grad d0|^2 relative {t0_defect:.1e}"
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("dispersion correctness", dispersion),
        ("propagator unitarity and kernel structure", propagator_structure),
        ("RAGE envelope", rage_envelope_check),
        ("limit equation exactness", limit_exactness),
        ("initial datum", initial_datum),
        ("primitive solver", primitive_solver),
        ("singular-limit sweep", singular_limit_sweep),
        ("stability / Gronwall", gronwall),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("acceptance {} {tag}: {name}: {}", i + 1, o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
