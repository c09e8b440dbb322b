use crate::acoustic::AcousticState;
use crate::error::{Error, Result};
use crate::spectral::{
    dealias, forward_transform, inverse_transform, GridSpec, Parity, SpectralField, VectorField,
};

/// State of the compressible system.
///
/// Prognostic variables are `r = (rho - rho_bar)/eps` and the momentum
/// `V = rho u`, the same pair the fast linear system acts on; `rho` and `u`
/// are reconstructed on demand. Storing `r` rather than `rho` keeps the
/// `O(eps)` density perturbation at full precision.
#[derive(Debug, Clone, PartialEq)]
pub struct FluidState {
    pub fast: AcousticState,
    pub t: f64,
    pub epsilon: f64,
    pub rho_bar: f64,
}

/// Physical samples of `rho` and `u`.
#[derive(Debug, Clone)]
pub struct PhysicalFields {
    pub rho: Vec<f64>,
    pub u: [Vec<f64>; 3],
    pub v: [Vec<f64>; 3],
}

impl FluidState {
    pub fn grid(&self) -> &GridSpec {
        self.fast.grid()
    }

    pub fn r(&self) -> &SpectralField {
        &self.fast.r
    }

    pub fn momentum(&self) -> &VectorField {
        &self.fast.v
    }

    pub fn rho_samples(&self) -> Vec<f64> {
        inverse_transform(&self.fast.r)
            .into_iter()
            .map(|r| self.rho_bar + self.epsilon * r)
            .collect()
    }

    /// `int rho dx`, from the mean coefficient.
    pub fn mass(&self) -> f64 {
        let g = self.grid();
        g.volume() * (self.rho_bar + self.epsilon * self.fast.r.get(0, 0, 0).re)
    }

    /// Reject the first nonpositive density sample.
    pub fn check_positive(&self, rho: &[f64]) -> Result<()> {
        let g = self.grid();
        if let Some((idx, v)) = rho.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
            let j = idx % g.nv;
            let col = idx / g.nv;
            return Err(Error::Positivity {
                value: *v,
                i1: col / g.nh,
                i2: col % g.nh,
                i3: j,
                t: self.t,
            });
        }
        Ok(())
    }

    pub fn physical(&self) -> Result<PhysicalFields> {
        let rho = self.rho_samples();
        self.check_positive(&rho)?;
        let v = [0, 1, 2].map(|c| inverse_transform(&self.fast.v.comps[c]));
        let u = [0, 1, 2].map(|c| v[c].iter().zip(&rho).map(|(a, b)| a / b).collect());
        Ok(PhysicalFields { rho, u, v })
    }

    /// `u = V / rho` as spectral fields (not truncated).
    pub fn velocity(&self) -> Result<VectorField> {
        let ph = self.physical()?;
        let g = *self.grid();
        let comps = vec![
            forward_transform(&g, &ph.u[0], Parity::Even)?,
            forward_transform(&g, &ph.u[1], Parity::Even)?,
            forward_transform(&g, &ph.u[2], Parity::Odd)?,
        ];
        VectorField::new(comps)
    }
}

/// Ill-prepared initial state `rho_0 = rho_bar + eps r0`, `u_0 = u0`.
pub fn make_ill_prepared_data(
    r0: &SpectralField,
    u0: &VectorField,
    epsilon: f64,
    rho_bar: f64,
) -> Result<FluidState> {
    if u0.dim() != 3 {
        return Err(Error::Parity(format!(
            "u0 needs three components, got {}",
            u0.dim()
        )));
    }
    if r0.parity() != Parity::Even || u0.comps[0].parity() != Parity::Even {
        return Err(Error::Parity("r0 and u0_h must be even, u0_3 odd".into()));
    }
    u0.check_parities()?;
    r0.check_compatible(&u0.comps[0])?;
    let g = *r0.grid();
    let rs = inverse_transform(r0);
    let sup = rs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if !(epsilon * sup < rho_bar) {
        return Err(Error::Param(format!(
            "positivity margin violated: eps sup|r0| = {} >= rho_bar = {rho_bar}",
            epsilon * sup
        )));
    }
    let rho: Vec<f64> = rs.iter().map(|r| rho_bar + epsilon * r).collect();
    let mut comps = Vec::with_capacity(3);
    for (c, f) in u0.comps.iter().enumerate() {
        let us = inverse_transform(f);
        let prod: Vec<f64> = us.iter().zip(&rho).map(|(u, r)| u * r).collect();
        let parity = if c < 2 { Parity::Even } else { Parity::Odd };
        comps.push(dealias(&forward_transform(&g, &prod, parity)?));
    }
    Ok(FluidState {
        fast: AcousticState::new(r0.clone(), VectorField::new(comps)?)?,
        t: 0.0,
        epsilon,
        rho_bar,
    })
}
