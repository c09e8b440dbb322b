use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::rc::Rc;
use std::sync::Arc;

use super::field::SpectralField;
use super::grid::{GridSpec, Parity};
use crate::error::{Error, Result};

struct HorizontalPlan {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

/// Cosine (DCT-I) and sine (DST-I) synthesis matrices on the vertex grid.
struct VerticalBasis {
    nv: usize,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl VerticalBasis {
    fn new(nv: usize) -> Self {
        let n_int = (nv - 1).max(1) as f64;
        let mut cos = vec![0.0; nv * nv];
        let mut sin = vec![0.0; nv * nv];
        for j in 0..nv {
            for n in 0..nv {
                let arg = PI * (n * j) as f64 / n_int;
                cos[j * nv + n] = arg.cos();
                sin[j * nv + n] = arg.sin();
            }
        }
        // exact zeros on the walls and for the absent sine modes
        for n in 0..nv {
            sin[n] = 0.0;
            sin[(nv - 1) * nv + n] = 0.0;
            sin[n * nv] = 0.0;
            sin[n * nv + nv - 1] = 0.0;
        }
        Self { nv, cos, sin }
    }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
    static HPLANS: RefCell<HashMap<usize, Rc<HorizontalPlan>>> = RefCell::new(HashMap::new());
    static VBASES: RefCell<HashMap<usize, Rc<VerticalBasis>>> = RefCell::new(HashMap::new());
}

fn horizontal_plan(nh: usize) -> Rc<HorizontalPlan> {
    HPLANS.with(|cache| {
        cache
            .borrow_mut()
            .entry(nh)
            .or_insert_with(|| {
                PLANNER.with(|p| {
                    let mut p = p.borrow_mut();
                    Rc::new(HorizontalPlan {
                        forward: p.plan_fft_forward(nh),
                        inverse: p.plan_fft_inverse(nh),
                    })
                })
            })
            .clone()
    })
}

fn vertical_basis(nv: usize) -> Rc<VerticalBasis> {
    VBASES.with(|cache| {
        cache
            .borrow_mut()
            .entry(nv)
            .or_insert_with(|| Rc::new(VerticalBasis::new(nv)))
            .clone()
    })
}

/// In-place 2D FFT of an `nh x nh` row-major plane.
fn fft2(plane: &mut [Complex64], nh: usize, fft: &Arc<dyn Fft<f64>>, scratch: &mut Vec<Complex64>) {
    fft.process(plane);
    transpose(plane, nh, scratch);
    fft.process(plane);
    transpose(plane, nh, scratch);
}

fn transpose(plane: &mut [Complex64], nh: usize, scratch: &mut Vec<Complex64>) {
    scratch.clear();
    scratch.extend_from_slice(plane);
    for i in 0..nh {
        for j in 0..nh {
            plane[j * nh + i] = scratch[i * nh + j];
        }
    }
}

/// Physical samples to coefficients. Samples are laid out `(i1, i2, j)`
/// with `j` the vertical vertex index. Odd fields are projected onto the
/// sine basis, so their wall samples do not enter.
pub fn forward_transform(grid: &GridSpec, samples: &[f64], parity: Parity) -> Result<SpectralField> {
    if samples.len() != grid.len() {
        return Err(Error::Shape {
            expected: grid.len(),
            got: samples.len(),
            grid: grid.describe(),
        });
    }
    if parity == Parity::Odd && grid.is_horizontal() {
        return Err(Error::Parity(
            "odd fields vanish identically on a horizontal grid".into(),
        ));
    }
    let nh = grid.nh;
    let nv = grid.nv;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); grid.len()];

    // vertical analysis, column by column
    if nv == 1 {
        for (c, s) in coeffs.iter_mut().zip(samples) {
            *c = Complex64::new(*s, 0.0);
        }
    } else {
        let basis = vertical_basis(nv);
        let n_int = (nv - 1) as f64;
        let mut col = vec![0.0; nv];
        for column in 0..nh * nh {
            let src = &samples[column * nv..(column + 1) * nv];
            let dst = &mut coeffs[column * nv..(column + 1) * nv];
            match parity {
                Parity::Even => {
                    for (j, v) in src.iter().enumerate() {
                        let w = if j == 0 || j == nv - 1 { 0.5 } else { 1.0 };
                        col[j] = w * v;
                    }
                    for (n, d) in dst.iter_mut().enumerate() {
                        let mut acc = 0.0;
                        for (j, v) in col.iter().enumerate() {
                            acc += v * basis.cos[j * nv + n];
                        }
                        *d = Complex64::new(acc / (n_int * grid.vertical_weight(n)), 0.0);
                    }
                }
                Parity::Odd => {
                    for (n, d) in dst.iter_mut().enumerate() {
                        let mut acc = 0.0;
                        for (j, v) in src.iter().enumerate() {
                            acc += v * basis.sin[j * nv + n];
                        }
                        // sine coefficient b maps to a = -i b in the i sin basis
                        *d = Complex64::new(0.0, -2.0 * acc / n_int);
                    }
                }
            }
        }
    }

    // horizontal FFT, plane by plane
    let plan = horizontal_plan(nh);
    let norm = 1.0 / (nh * nh) as f64;
    let mut plane = vec![Complex64::new(0.0, 0.0); nh * nh];
    let mut scratch = Vec::with_capacity(nh * nh);
    for n in 0..nv {
        for (p, c) in plane.iter_mut().zip(coeffs.iter().skip(n).step_by(nv)) {
            *p = *c;
        }
        fft2(&mut plane, nh, &plan.forward, &mut scratch);
        for (c, p) in coeffs.iter_mut().skip(n).step_by(nv).zip(&plane) {
            *c = p * norm;
        }
    }
    let mut f = SpectralField::from_coeffs(*grid, parity, coeffs)?;
    f.symmetrize();
    Ok(f)
}

/// Coefficients to physical samples (real part of the synthesis).
pub fn inverse_transform(field: &SpectralField) -> Vec<f64> {
    let grid = field.grid();
    let nh = grid.nh;
    let nv = grid.nv;
    let mut work = field.coeffs().to_vec();

    let plan = horizontal_plan(nh);
    let mut plane = vec![Complex64::new(0.0, 0.0); nh * nh];
    let mut scratch = Vec::with_capacity(nh * nh);
    for n in 0..nv {
        for (p, c) in plane.iter_mut().zip(work.iter().skip(n).step_by(nv)) {
            *p = *c;
        }
        fft2(&mut plane, nh, &plan.inverse, &mut scratch);
        for (c, p) in work.iter_mut().skip(n).step_by(nv).zip(&plane) {
            *c = *p;
        }
    }

    let mut out = vec![0.0; grid.len()];
    if nv == 1 {
        for (o, w) in out.iter_mut().zip(&work) {
            *o = w.re;
        }
        return out;
    }
    let basis = vertical_basis(nv);
    for column in 0..nh * nh {
        let src = &work[column * nv..(column + 1) * nv];
        let dst = &mut out[column * nv..(column + 1) * nv];
        match field.parity() {
            Parity::Even => {
                for (j, d) in dst.iter_mut().enumerate() {
                    let mut acc = 0.0;
                    for (n, a) in src.iter().enumerate() {
                        acc += a.re * basis.cos[j * nv + n];
                    }
                    *d = acc;
                }
            }
            Parity::Odd => {
                for (j, d) in dst.iter_mut().enumerate() {
                    let mut acc = 0.0;
                    for (n, a) in src.iter().enumerate() {
                        // a i sin: real part is -Im(a) sin
                        acc -= a.im * basis.sin[j * nv + n];
                    }
                    *d = acc;
                }
            }
        }
    }
    debug_assert_eq!(basis.nv, nv);
    out
}

/// Physical samples of a function of `(x1, x2, x3)` on the grid.
pub fn sample(grid: &GridSpec, f: impl Fn(f64, f64, f64) -> f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(grid.len());
    for i1 in 0..grid.nh {
        for i2 in 0..grid.nh {
            for j in 0..grid.nv {
                out.push(f(grid.x(i1), grid.x(i2), grid.x3(j)));
            }
        }
    }
    out
}

/// Transform an analytic function directly.
pub fn project(grid: &GridSpec, parity: Parity, f: impl Fn(f64, f64, f64) -> f64) -> Result<SpectralField> {
    forward_transform(grid, &sample(grid, f), parity)
}

/// Quadrature `int f dx` of physical samples over the slab.
pub fn integrate(grid: &GridSpec, samples: &[f64]) -> f64 {
    let mut acc = 0.0;
    for column in 0..grid.nh * grid.nh {
        for j in 0..grid.nv {
            acc += grid.sample_weight(j) * samples[column * grid.nv + j];
        }
    }
    acc
}
