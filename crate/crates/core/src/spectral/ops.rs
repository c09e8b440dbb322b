//! Fourier-multiplier operators, projections and pseudo-spectral products.

use num_complex::Complex64;

use super::field::{SpectralField, VectorField};
use super::grid::{GridSpec, Parity};
use super::transform::{forward_transform, inverse_transform};
use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn d1(f: &SpectralField) -> SpectralField {
    let g = *f.grid();
    f.map_modes(|i1, _, _, c| I * g.xi_deriv(i1) * c)
}

fn d2(f: &SpectralField) -> SpectralField {
    let g = *f.grid();
    f.map_modes(|_, i2, _, c| I * g.xi_deriv(i2) * c)
}

pub fn d_x1(f: &SpectralField) -> SpectralField {
    d1(f)
}

pub fn d_x2(f: &SpectralField) -> SpectralField {
    d2(f)
}

/// `d/dx3`: multiplier `i k`, flipping parity. The top cosine mode has no
/// sine counterpart on the grid and is dropped.
pub fn d_x3(f: &SpectralField) -> SpectralField {
    let g = *f.grid();
    f.map_modes(|_, _, n, c| I * g.k_deriv(n) * c)
        .with_parity(f.parity().flip())
}

/// `(d1 f, d2 f)`, parity preserved.
pub fn grad_h(f: &SpectralField) -> VectorField {
    VectorField {
        comps: vec![d1(f), d2(f)],
    }
}

/// Full gradient `(d1 f, d2 f, d3 f)`.
pub fn grad(f: &SpectralField) -> VectorField {
    VectorField {
        comps: vec![d1(f), d2(f), d_x3(f)],
    }
}

/// `nabla_h^perp f = (d2 f, -d1 f)`.
pub fn perp_grad_h(f: &SpectralField) -> VectorField {
    VectorField {
        comps: vec![d2(f), d1(f).scale(-1.0)],
    }
}

/// Divergence of a 2- or 3-component field (horizontal divergence for
/// two components).
pub fn div(v: &VectorField) -> Result<SpectralField> {
    v.check_parities()?;
    let mut out = d1(&v.comps[0]);
    if v.dim() >= 2 {
        out += &d2(&v.comps[1]);
    }
    if v.dim() == 3 {
        out += &d_x3(&v.comps[2]);
    }
    Ok(out)
}

pub fn div_h(v: &VectorField) -> Result<SpectralField> {
    if v.dim() < 2 {
        return Err(Error::Parity("div_h needs two horizontal components".into()));
    }
    let h = VectorField {
        comps: v.comps[..2].to_vec(),
    };
    div(&h)
}

/// `curl_h v = d1 v2 - d2 v1`.
pub fn curl_h(v: &VectorField) -> Result<SpectralField> {
    if v.dim() < 2 {
        return Err(Error::Parity("curl_h needs two horizontal components".into()));
    }
    if v.comps[0].parity() != v.comps[1].parity() {
        return Err(Error::Parity("horizontal components differ in parity".into()));
    }
    Ok(&d1(&v.comps[1]) - &d2(&v.comps[0]))
}

pub fn laplacian_h(f: &SpectralField) -> SpectralField {
    let g = *f.grid();
    f.map_modes(|i1, i2, _, c| {
        let q = g.xi_deriv(i1).powi(2) + g.xi_deriv(i2).powi(2);
        -q * c
    })
}

pub fn bilaplacian_h(f: &SpectralField) -> SpectralField {
    let g = *f.grid();
    f.map_modes(|i1, i2, _, c| {
        let q = g.xi_deriv(i1).powi(2) + g.xi_deriv(i2).powi(2);
        q * q * c
    })
}

/// Full Laplacian including `d3^2`.
pub fn laplacian(f: &SpectralField) -> SpectralField {
    let g = *f.grid();
    f.map_modes(|i1, i2, n, c| {
        let q = g.xi_deriv(i1).powi(2) + g.xi_deriv(i2).powi(2) + g.k_deriv(n).powi(2);
        -q * c
    })
}

/// Zero every coefficient outside the 2/3-rule box.
pub fn dealias(f: &SpectralField) -> SpectralField {
    let g = *f.grid();
    f.map_modes(|i1, i2, n, c| {
        if g.retained(i1, i2, n) {
            c
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

pub fn dealias_vector(v: &VectorField) -> VectorField {
    VectorField {
        comps: v.comps.iter().map(dealias).collect(),
    }
}

/// Zero the modes with `|xi_h| + |k| > m` (`m < 0` is treated as 0).
pub fn truncate_to_cutoff(f: &SpectralField, m: f64) -> SpectralField {
    let g = *f.grid();
    let m = m.max(0.0);
    f.map_modes(|i1, i2, n, c| {
        let xh = g.xi(i1).hypot(g.xi(i2));
        if xh + g.k(n) > m {
            Complex64::new(0.0, 0.0)
        } else {
            c
        }
    })
}

/// Mean over `x3 in (0, 1)` as a field on the horizontal grid. Odd fields
/// average to zero.
pub fn vertical_average(f: &SpectralField) -> SpectralField {
    let g = *f.grid();
    let h = g.horizontal();
    let mut out = SpectralField::zeros(h, Parity::Even);
    if f.parity() == Parity::Odd {
        return out;
    }
    for i1 in 0..g.nh {
        for i2 in 0..g.nh {
            out.set(i1, i2, 0, f.get(i1, i2, 0));
        }
    }
    out
}

pub fn vertical_average_vector(v: &VectorField) -> VectorField {
    VectorField {
        comps: v.comps.iter().map(vertical_average).collect(),
    }
}

/// Embed a horizontal field into a slab grid as an `x3`-independent field.
pub fn extend_vertically(f: &SpectralField, grid: &GridSpec) -> Result<SpectralField> {
    let h = f.grid();
    if !h.is_horizontal() || !h.same_horizontal(grid) {
        return Err(Error::GridMismatch(format!(
            "cannot extend {} onto {}",
            h.describe(),
            grid.describe()
        )));
    }
    let mut out = SpectralField::zeros(*grid, Parity::Even);
    for i1 in 0..grid.nh {
        for i2 in 0..grid.nh {
            out.set(i1, i2, 0, f.get(i1, i2, 0));
        }
    }
    Ok(out)
}

/// Reflection `x2 -> -x2` of a scalar field.
pub fn mirror_x2(f: &SpectralField) -> SpectralField {
    let g = *f.grid();
    let mut out = f.clone();
    for i1 in 0..g.nh {
        for i2 in 0..g.nh {
            let j2 = g.index_of_mode(-g.mode_number(i2));
            for n in 0..g.nv {
                out.set(i1, i2, n, f.get(i1, j2, n));
            }
        }
    }
    out
}

/// Reflection `x2 -> -x2` of a vector field: components are mirrored and
/// the second one changes sign.
pub fn mirror_x2_vector(v: &VectorField) -> VectorField {
    let mut comps: Vec<SpectralField> = v.comps.iter().map(mirror_x2).collect();
    if comps.len() >= 2 {
        comps[1] = comps[1].scale(-1.0);
    }
    VectorField { comps }
}

/// Pseudo-spectral product of two fields, dealiased.
pub fn product(a: &SpectralField, b: &SpectralField) -> Result<SpectralField> {
    a.check_compatible(b)?;
    let pa = inverse_transform(a);
    let pb = inverse_transform(b);
    let prod: Vec<f64> = pa.iter().zip(&pb).map(|(x, y)| x * y).collect();
    Ok(dealias(&forward_transform(
        a.grid(),
        &prod,
        a.parity().product(b.parity()),
    )?))
}
