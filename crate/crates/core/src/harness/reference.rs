//! Limit trajectory used as the reference of a sweep.
//!
//! The fast dynamics of the primitive system balance `u = -(p'/rho_bar)
//! perp_grad r`, while the limit solver works with `U = +(p'/rho_bar)
//! perp_grad r`. The reflection `x2 -> -x2` maps one convention onto the
//! other, so the reference runs the limit solver on reflected data and
//! reflects its output back.

use crate::error::{Error, Result};
use crate::limit::{solve_initial_datum, velocity_from_stream, LimitParams, LimitSolver};
use crate::spectral::{extend_vertically, mirror_x2, mirror_x2_vector, GridSpec, SpectralField, VectorField};

use super::profiles::Profiles;

/// One sample of the limit solution in the coordinates of the primitive
/// system.
#[derive(Debug, Clone)]
pub struct LimitSample {
    pub t: f64,
    /// Stream function on the horizontal grid.
    pub r: SpectralField,
    /// Horizontal velocity on the horizontal grid.
    pub u: VectorField,
}

impl LimitSample {
    /// `(r, U1, U2)` embedded `x3`-independently in the slab grid.
    pub fn extended(&self, grid: &GridSpec) -> Result<(SpectralField, [SpectralField; 2])> {
        Ok((
            extend_vertically(&self.r, grid)?,
            [
                extend_vertically(&self.u.comps[0], grid)?,
                extend_vertically(&self.u.comps[1], grid)?,
            ],
        ))
    }
}

/// Samples of the limit trajectory on a uniform time mesh.
#[derive(Debug, Clone)]
pub struct LimitReference {
    pub params: LimitParams,
    pub samples: Vec<LimitSample>,
}

/// Initial datum of the limit problem in primitive coordinates.
pub fn reference_initial_datum(profiles: &Profiles, params: &LimitParams) -> Result<SpectralField> {
    let (r, u) = profiles.vertical_means();
    let rm = solve_initial_datum(&mirror_x2(&r), &mirror_x2_vector(&u), params)?;
    Ok(mirror_x2(&rm))
}

impl LimitReference {
    /// Integrate the limit problem from the initial datum of `profiles` with
    /// `steps` steps of size `dt`, sampling every `every` steps.
    pub fn compute(
        profiles: &Profiles,
        params: LimitParams,
        dt: f64,
        steps: usize,
        every: usize,
    ) -> Result<Self> {
        if every == 0 || !steps.is_multiple_of(every) {
            return Err(Error::Param(format!(
                "sample interval {every} must divide the step count {steps}"
            )));
        }
        let (r, u) = profiles.vertical_means();
        let rm = solve_initial_datum(&mirror_x2(&r), &mirror_x2_vector(&u), &params)?;
        let mut solver = LimitSolver::new(rm, params)?;
        let sample = |s: &LimitSolver| LimitSample {
            t: s.t,
            r: mirror_x2(&s.r),
            u: mirror_x2_vector(&velocity_from_stream(&s.r, &params)),
        };
        let mut samples = vec![sample(&solver)];
        for k in 1..=steps {
            solver.step(dt)?;
            if k % every == 0 {
                samples.push(sample(&solver));
            }
        }
        Ok(Self { params, samples })
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }
}
