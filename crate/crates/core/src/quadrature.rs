//! Time quadrature rules for trajectory averages.

use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, z);
        if d != 0.0 {
            dp = d;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Composite Gauss–Legendre rule on `[a, b]`: `panels` equal panels with
/// `order` nodes each. Returns `(nodes, weights)`.
pub fn composite_gauss(a: f64, b: f64, panels: usize, order: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * order);
    let mut weights = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for (xi, wi) in x.iter().zip(&w) {
            nodes.push(mid + 0.5 * h * xi);
            weights.push(0.5 * h * wi);
        }
    }
    (nodes, weights)
}

/// Trapezoid weights for samples at (possibly nonuniform) times.
pub fn trapezoid_weights(times: &[f64]) -> Result<Vec<f64>> {
    check_times(times)?;
    let n = times.len();
    let mut w = vec![0.0; n];
    for i in 0..n - 1 {
        let h = times[i + 1] - times[i];
        w[i] += 0.5 * h;
        w[i + 1] += 0.5 * h;
    }
    Ok(w)
}

/// Composite Simpson weights for uniformly spaced samples; an odd number of
/// intervals falls back to trapezoid on the final interval.
pub fn simpson_weights(times: &[f64]) -> Result<Vec<f64>> {
    check_times(times)?;
    let n = times.len();
    if n < 3 {
        return trapezoid_weights(times);
    }
    let h = (times[n - 1] - times[0]) / (n - 1) as f64;
    let intervals = n - 1;
    let even = intervals - intervals % 2;
    let mut w = vec![0.0; n];
    for i in (0..even).step_by(2) {
        w[i] += h / 3.0;
        w[i + 1] += 4.0 * h / 3.0;
        w[i + 2] += h / 3.0;
    }
    if even < intervals {
        w[n - 2] += 0.5 * h;
        w[n - 1] += 0.5 * h;
    }
    Ok(w)
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.len() < 2 {
        return Err(Error::Empty(format!(
            "time quadrature needs at least two samples, got {}",
            times.len()
        )));
    }
    if times.windows(2).any(|p| !(p[1] > p[0])) {
        return Err(Error::Param("sample times must be strictly increasing".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(6);
        for p in 0..12 {
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(p)).sum();
            let want = if p % 2 == 1 { 0.0 } else { 2.0 / (p as f64 + 1.0) };
            assert!((got - want).abs() < 1e-14, "p={p}: {got} vs {want}");
        }
    }

    #[test]
    fn composite_gauss_on_exponential() {
        let (t, w) = composite_gauss(0.0, 2.0, 8, 8);
        let got: f64 = t.iter().zip(&w).map(|(t, w)| w * (3.0 * t).cos()).sum();
        assert!((got - (6.0f64).sin() / 3.0).abs() < 1e-14);
    }

    #[test]
    fn simpson_and_trapezoid() {
        let t: Vec<f64> = (0..=10).map(|i| i as f64 * 0.1).collect();
        let s = simpson_weights(&t).unwrap();
        let got: f64 = t.iter().zip(&s).map(|(t, w)| w * t.powi(3)).sum();
        assert!((got - 0.25).abs() < 1e-14);
        let tr = trapezoid_weights(&t).unwrap();
        assert!((tr.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!(trapezoid_weights(&[1.0]).is_err());
    }
}
