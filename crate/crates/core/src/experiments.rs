//! Scaled-point constructions and the tables behind the command-line
//! experiments: finite-N versus limit convergence, the angular density curves,
//! the thick-annulus correlation curve, and Bessel-kernel checks.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::asymptotics::{
    bessel_kernel, edge_kernel_universal, interval_edge_kernel, interval_limit, kernel_r, lambda_corr,
    sigma_density, EdgeScaling, IntervalScaling, Parity,
};
use crate::error::{Error, Result};
use crate::geometry::{AnnulusSpec, OmegaCoord};
use crate::kernels::{kernel_elliptic_at, kernel_jacobi, JacobiSpec, ModelKind};

/// Annulus and the two points of the edge scaling at `e.n`:
/// `R = v (1 - T/N)`, `r_j = v (1 - t_j/N)`, `theta_j = psi + phi_j/N`.
pub fn edge_points(e: &EdgeScaling) -> Result<(AnnulusSpec, OmegaCoord, OmegaCoord)> {
    let n = e.n as f64;
    let inner = e.v * (1.0 - e.depth / n);
    let spec = AnnulusSpec::new(inner, e.v).map_err(|_| {
        Error::Domain(format!(
            "edge scaling at N = {} puts the inner radius at {inner}, not above 1",
            e.n
        ))
    })?;
    let w1 = OmegaCoord::new(e.v * (1.0 - e.t1 / n), e.psi + e.phi1 / n)?;
    let w2 = OmegaCoord::new(e.v * (1.0 - e.t2 / n), e.psi + e.phi2 / n)?;
    Ok((spec, w1, w2))
}

/// Annulus and points of the interval scaling at `n`:
/// `v = 1 + u/N`, `R = 1 + T/N`, `r_j = 1 + t_j/N`, `theta_j = psi + phi_j/N`.
/// Needs `T > 0` so that the annulus avoids the segment.
pub fn interval_points(i: &IntervalScaling, n: usize) -> Result<(AnnulusSpec, OmegaCoord, OmegaCoord)> {
    let nf = n as f64;
    if i.depth <= 0.0 {
        return Err(Error::Domain("finite-N interval scaling needs T > 0".into()));
    }
    let spec = AnnulusSpec::new(1.0 + i.depth / nf, 1.0 + i.u / nf)
        .map_err(|e| Error::Domain(format!("interval scaling at N = {n}: {e}")))?;
    let psi = i.psi.radians();
    let w1 = OmegaCoord::new(1.0 + i.s1.re / nf, psi + i.s1.im / nf)?;
    let w2 = OmegaCoord::new(1.0 + i.s2.re / nf, psi + i.s2.im / nf)?;
    Ok((spec, w1, w2))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub finite: Complex64,
    pub limit: Complex64,
    pub rel_error: f64,
}

impl ConvergenceRow {
    fn new(n: usize, finite: Complex64, limit: Complex64) -> Self {
        Self {
            n,
            finite,
            limit,
            rel_error: (finite - limit).norm() / limit.norm(),
        }
    }
}

/// Finite-N kernel at the edge-scaled points against the universal edge kernel.
pub fn edge_convergence(model: ModelKind, base: &EdgeScaling, ns: &[usize]) -> Result<Vec<ConvergenceRow>> {
    ns.iter()
        .map(|&n| {
            let e = base.with_n(n);
            let (spec, w1, w2) = edge_points(&e)?;
            let finite = kernel_elliptic_at(model, n, w1, w2, &spec)?;
            Ok(ConvergenceRow::new(n, finite, edge_kernel_universal(&e)))
        })
        .collect()
}

/// Finite-N kernel at the interval-scaled points against the limit kernel.
/// With `parity = None` the model's own limit is used; otherwise the given
/// interval-end kernel (to exhibit agreement or disagreement with it).
pub fn interval_convergence(
    model: ModelKind,
    i: &IntervalScaling,
    ns: &[usize],
    parity: Option<Parity>,
) -> Result<Vec<ConvergenceRow>> {
    ns.iter()
        .map(|&n| {
            let (spec, w1, w2) = interval_points(i, n)?;
            let finite = kernel_elliptic_at(model, n, w1, w2, &spec)?;
            let limit = match parity {
                None => interval_limit(model, i, n)?,
                Some(p) => interval_edge_kernel(p, i, n)?,
            };
            Ok(ConvergenceRow::new(n, finite, limit))
        })
        .collect()
}

/// `true` when `rel_error` strictly decreases along the rows.
pub fn strictly_decreasing(rows: &[ConvergenceRow]) -> bool {
    rows.windows(2).all(|w| w[1].rel_error < w[0].rel_error)
}

/// `sigma(psi)` for several `v` on `m` equally spaced angles covering
/// `[0, 2 pi]` with both ends included, and the trapezoid integral per curve.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaTable {
    pub vs: Vec<f64>,
    pub psi: Vec<f64>,
    /// `sigma[j][k]` for `vs[j]` at `psi[k]`.
    pub sigma: Vec<Vec<f64>>,
    pub norms: Vec<f64>,
}

pub fn sigma_table(vs: &[f64], m: usize) -> Result<SigmaTable> {
    if m < 3 {
        return Err(Error::InvalidParameter(format!("psi grid needs at least 3 points, got {m}")));
    }
    if let Some(v) = vs.iter().find(|v| !(v.is_finite() && **v > 1.0)) {
        return Err(Error::InvalidParameter(format!("v must exceed 1, got {v}")));
    }
    let h = TAU / (m - 1) as f64;
    let psi: Vec<f64> = (0..m).map(|k| if k == m - 1 { TAU } else { k as f64 * h }).collect();
    let sigma: Vec<Vec<f64>> = vs.iter().map(|&v| psi.iter().map(|&p| sigma_density(v, p)).collect()).collect();
    let norms = sigma
        .iter()
        .map(|s| {
            let inner: f64 = s[1..m - 1].iter().sum();
            h * (inner + 0.5 * (s[0] + s[m - 1]))
        })
        .collect();
    Ok(SigmaTable {
        vs: vs.to_vec(),
        psi,
        sigma,
        norms,
    })
}

/// `(phi, lambda(phi))` on `m` (odd) points symmetric about zero in `[-phi_max, phi_max]`.
pub fn lambda_table(tau: f64, phi_max: f64, m: usize) -> Result<Vec<(f64, f64)>> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::InvalidParameter(format!("tau must be positive, got {tau}")));
    }
    if !(phi_max.is_finite() && phi_max > 0.0) {
        return Err(Error::InvalidParameter(format!("phi_max must be positive, got {phi_max}")));
    }
    if m < 3 || m.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("phi grid needs an odd count >= 3, got {m}")));
    }
    let half = (m / 2) as i64;
    Ok((0..m as i64)
        .map(|k| {
            let phi = phi_max * (k - half) as f64 / half as f64;
            (phi, lambda_corr(tau, phi))
        })
        .collect())
}

/// Uniform grid of `m` points on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, m: usize) -> Vec<f64> {
    match m {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..m)
            .map(|k| if k == m - 1 { hi } else { lo + (hi - lo) * k as f64 / (m - 1) as f64 })
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselCheckRow {
    pub a: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub bessel: f64,
    pub closed_form: f64,
    pub rel_error: f64,
}

/// Bessel kernel at `a = -1/2` and `a = 1/2` against the sinc closed forms on
/// the square grid `phis x phis`.
pub fn bessel_check(phis: &[f64], n: usize) -> Result<Vec<BesselCheckRow>> {
    use rayon::prelude::*;
    let cases = [(-0.5, Parity::Plus), (0.5, Parity::Minus)];
    let jobs: Vec<(f64, Parity, f64, f64)> = cases
        .iter()
        .flat_map(|&(a, p)| phis.iter().flat_map(move |&x| phis.iter().map(move |&y| (a, p, x, y))))
        .collect();
    jobs.par_iter()
        .map(|&(a, p, phi1, phi2)| {
            let bessel = bessel_kernel(a, phi1, phi2, n)?;
            let closed_form = kernel_r(p, phi1, phi2, n)?;
            Ok(BesselCheckRow {
                a,
                phi1,
                phi2,
                bessel,
                closed_form,
                rel_error: (bessel - closed_form).abs() / closed_form.abs(),
            })
        })
        .collect()
}

/// Largest relative difference between the Jacobi kernel at
/// `x_j = 1 - phi_j^2 / (2 N^2)` and the Bessel kernel of order `a`, over the
/// point pairs, for one `N`.
pub fn jacobi_bessel_error(spec: &JacobiSpec, n: usize, pairs: &[(f64, f64)]) -> Result<f64> {
    let nf = n as f64;
    let mut worst = 0.0f64;
    for &(p1, p2) in pairs {
        let x1 = 1.0 - p1 * p1 / (2.0 * nf * nf);
        let x2 = 1.0 - p2 * p2 / (2.0 * nf * nf);
        let k = kernel_jacobi(spec, n, x1, x2)?;
        let b = bessel_kernel(spec.a(), p1, p2, n)?;
        worst = worst.max((k - b).abs() / b.abs());
    }
    Ok(worst)
}
