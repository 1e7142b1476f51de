//! Tensor-product quadrature over the elliptic annulus in `(r, theta)`:
//! composite Gauss-Legendre in `r` and the periodic trapezoid rule in
//! `theta`, with the Joukowski Jacobian folded in. Each refinement doubles
//! both the radial panel count and the angular node count; two successive
//! levels must agree to `target_tol`, measured against the largest
//! `int |f_k|` so that integrals which vanish by orthogonality are handled.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{jacobian_rt, AnnulusSpec, ComplexPoint, OmegaCoord};
use crate::kernels::{norm_constant, EllipticBasis, ModelKind, RadialSymSpec};
use crate::special::GaussRule;

/// Refinements attempted before giving up.
const MAX_REFINEMENTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    radial_nodes: usize,
    radial_panels: usize,
    angular_nodes: usize,
    target_tol: f64,
}

impl QuadratureSpec {
    pub const DEFAULT_TOL: f64 = 1e-10;

    pub fn new(radial_nodes: usize, angular_nodes: usize, target_tol: f64) -> Result<Self> {
        if radial_nodes < 4 {
            return Err(Error::InvalidParameter(format!("radial_nodes must be >= 4, got {radial_nodes}")));
        }
        if angular_nodes < 8 {
            return Err(Error::InvalidParameter(format!("angular_nodes must be >= 8, got {angular_nodes}")));
        }
        if !(target_tol.is_finite() && target_tol > 0.0) {
            return Err(Error::InvalidParameter(format!("target_tol must be positive, got {target_tol}")));
        }
        Ok(Self {
            radial_nodes,
            radial_panels: 4,
            angular_nodes,
            target_tol,
        })
    }

    /// Order 24 Gauss-Legendre on 4 panels and `max(64, 4 degree + 8)`
    /// trapezoid nodes, where `degree` bounds the polynomial degrees involved.
    pub fn for_degree(degree: usize, target_tol: f64) -> Result<Self> {
        Self::new(24, (4 * degree + 8).max(64), target_tol)
    }

    pub fn with_panels(mut self, panels: usize) -> Self {
        self.radial_panels = panels.max(1);
        self
    }

    pub fn radial_nodes(&self) -> usize {
        self.radial_nodes
    }

    pub fn radial_panels(&self) -> usize {
        self.radial_panels
    }

    pub fn angular_nodes(&self) -> usize {
        self.angular_nodes
    }

    pub fn target_tol(&self) -> f64 {
        self.target_tol
    }
}

/// One fixed tensor rule applied to a vector-valued integrand; returns the
/// integrals and the largest `int |f_k|`. `f(r, theta, out)` overwrites `out`
/// with the integrand values; `jac(r, theta)` is the area element.
#[allow(clippy::too_many_arguments)]
fn apply_rule<F, J>(dim: usize, lo: f64, hi: f64, panels: usize, order: usize, angular: usize, jac: &J, f: &F) -> (Vec<Complex64>, f64)
where
    F: Fn(f64, f64, &mut [Complex64]) + Sync,
    J: Fn(f64, f64) -> f64 + Sync,
{
    let rule = GaussRule::get(order);
    let h = (hi - lo) / panels as f64;
    let radial: Vec<(f64, f64)> = (0..panels)
        .flat_map(|p| {
            let a = lo + p as f64 * h;
            rule.mapped(a, a + h).collect::<Vec<_>>()
        })
        .collect();
    let dtheta = TAU / angular as f64;
    let rows: Vec<(Vec<Complex64>, Vec<f64>)> = radial
        .par_iter()
        .map(|&(r, wr)| {
            let mut acc = vec![Complex64::new(0.0, 0.0); dim];
            let mut mag = vec![0.0; dim];
            let mut buf = vec![Complex64::new(0.0, 0.0); dim];
            for k in 0..angular {
                let theta = k as f64 * dtheta;
                f(r, theta, &mut buf);
                let w = wr * dtheta * jac(r, theta);
                for ((a, m), b) in acc.iter_mut().zip(mag.iter_mut()).zip(&buf) {
                    *a += b * w;
                    *m += b.norm() * w;
                }
            }
            (acc, mag)
        })
        .collect();
    let mut total = vec![Complex64::new(0.0, 0.0); dim];
    let mut mag = vec![0.0; dim];
    for (row, row_mag) in rows {
        for (a, b) in total.iter_mut().zip(row) {
            *a += b;
        }
        for (a, b) in mag.iter_mut().zip(row_mag) {
            *a += b;
        }
    }
    (total, mag.into_iter().fold(0.0, f64::max))
}

fn refine<F, J>(dim: usize, lo: f64, hi: f64, q: &QuadratureSpec, jac: J, f: F) -> Result<Vec<Complex64>>
where
    F: Fn(f64, f64, &mut [Complex64]) + Sync,
    J: Fn(f64, f64) -> f64 + Sync,
{
    let mut panels = q.radial_panels;
    let mut angular = q.angular_nodes;
    let (mut coarse, _) = apply_rule(dim, lo, hi, panels, q.radial_nodes, angular, &jac, &f);
    let mut estimate = f64::INFINITY;
    for _ in 0..MAX_REFINEMENTS {
        panels *= 2;
        angular *= 2;
        let (fine, scale) = apply_rule(dim, lo, hi, panels, q.radial_nodes, angular, &jac, &f);
        let diff = fine
            .iter()
            .zip(&coarse)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        estimate = if scale > 0.0 { diff / scale } else { diff };
        if estimate <= q.target_tol {
            return Ok(fine);
        }
        coarse = fine;
    }
    Err(Error::ToleranceNotMet {
        estimate,
        target: q.target_tol,
        refinements: MAX_REFINEMENTS,
    })
}

/// `int_A f(w) dx dy` for a vector-valued integrand written in terms of
/// `w = r e^{i theta}`; `f(w, out)` overwrites `out`.
pub fn integrate_annulus_vec<F>(dim: usize, spec: &AnnulusSpec, q: &QuadratureSpec, f: F) -> Result<Vec<Complex64>>
where
    F: Fn(Complex64, &mut [Complex64]) + Sync,
{
    refine(dim, spec.inner(), spec.outer(), q, jacobian_rt, |r, t, out: &mut [Complex64]| {
        f(Complex64::from_polar(r, t), out)
    })
}

/// `int_A f(z) dx dy`.
pub fn integrate_annulus<F>(f: F, spec: &AnnulusSpec, q: &QuadratureSpec) -> Result<Complex64>
where
    F: Fn(ComplexPoint) -> Complex64 + Sync,
{
    let v = integrate_annulus_vec(1, spec, q, |w, out| {
        let z = crate::geometry::joukowski_forward(OmegaCoord::from_omega(w).expect("quadrature node has |w| > 1"));
        out[0] = f(z);
    })?;
    Ok(v[0])
}

/// `int f(z) dx dy` over the disc annulus `lo <= |z| <= hi` in ordinary polar
/// coordinates.
pub fn integrate_disc_annulus_vec<F>(dim: usize, lo: f64, hi: f64, q: &QuadratureSpec, f: F) -> Result<Vec<Complex64>>
where
    F: Fn(Complex64, &mut [Complex64]) + Sync,
{
    refine(dim, lo, hi, q, |r, _| r, |r, t, out: &mut [Complex64]| f(Complex64::from_polar(r, t), out))
}

/// Gram matrix of the monic polynomials of one model against the closed-form norms.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoReport {
    pub model: ModelKind,
    pub nmax: usize,
    /// `gram[m][n] = int w conj(M_m) M_n dA`, real part.
    pub gram: Vec<Vec<f64>>,
    /// Closed-form `h_n`.
    pub reference: Vec<f64>,
    /// `max_{m != n} |gram[m][n]| / max_n h_n`.
    pub max_offdiag: f64,
    /// `max_n |gram[n][n] - h_n| / h_n`.
    pub max_diag_relerr: f64,
}

pub fn orthogonality_matrix(model: ModelKind, nmax: usize, spec: &AnnulusSpec, q: &QuadratureSpec) -> Result<OrthoReport> {
    let size = nmax + 1;
    let kind = model.chebyshev_kind();
    let gram_flat = integrate_annulus_vec(size * size, spec, q, |w, out| {
        let weight = crate::kernels::weight_omega(model, w);
        let vals: Vec<Complex64> = (0..size)
            .map(|n| crate::chebyshev::monic_eval_omega(kind, n as u32, w))
            .collect();
        for m in 0..size {
            for n in 0..size {
                out[m * size + n] = vals[m].conj() * vals[n] * weight;
            }
        }
    })?;
    let reference: Vec<f64> = (0..size).map(|n| norm_constant(model, n as u32, spec)).collect();
    let gram: Vec<Vec<f64>> = (0..size)
        .map(|m| (0..size).map(|n| gram_flat[m * size + n].re).collect())
        .collect();
    let hmax = reference.iter().cloned().fold(0.0, f64::max);
    let mut max_offdiag = 0.0f64;
    let mut max_diag_relerr = 0.0f64;
    for m in 0..size {
        for n in 0..size {
            if m == n {
                max_diag_relerr = max_diag_relerr.max((gram_flat[m * size + n] - reference[n]).norm() / reference[n]);
            } else {
                max_offdiag = max_offdiag.max(gram_flat[m * size + n].norm() / hmax);
            }
        }
    }
    Ok(OrthoReport {
        model,
        nmax,
        gram,
        reference,
        max_offdiag,
        max_diag_relerr,
    })
}

/// `int_A K_N(z, z) dA`, which equals `N` for a projection kernel.
pub fn kernel_trace(model: ModelKind, n: usize, spec: &AnnulusSpec, q: &QuadratureSpec) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("trace needs N >= 1".into()));
    }
    let basis = EllipticBasis::new(model, spec);
    let v = integrate_annulus_vec(1, spec, q, |w, out| {
        out[0] = Complex64::new(basis.diagonal_omega(n, w), 0.0);
    })?;
    Ok(v[0].re)
}

/// Largest error of the reproducing identity
/// `int K(z1, zeta) K(zeta, z2) dA(zeta) = K(z1, z2)` over the given pairs,
/// relative to `sqrt(K(z1, z1) K(z2, z2))`.
pub fn reproducing_error(
    model: ModelKind,
    n: usize,
    spec: &AnnulusSpec,
    pairs: &[(OmegaCoord, OmegaCoord)],
    q: &QuadratureSpec,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("kernel needs N >= 1".into()));
    }
    let basis = EllipticBasis::new(model, spec);
    let left: Vec<Vec<Complex64>> = pairs.iter().map(|(a, _)| basis.values(n, a.omega())).collect();
    let right: Vec<Vec<Complex64>> = pairs.iter().map(|(_, b)| basis.values(n, b.omega())).collect();
    let got = integrate_annulus_vec(pairs.len(), spec, q, |w, out| {
        let phi = basis.values(n, w);
        for (k, o) in out.iter_mut().enumerate() {
            let k1: Complex64 = left[k].iter().zip(&phi).map(|(a, p)| a * p.conj()).sum();
            let k2: Complex64 = phi.iter().zip(&right[k]).map(|(p, b)| p * b.conj()).sum();
            *o = k1 * k2;
        }
    })?;
    Ok(pairs
        .iter()
        .enumerate()
        .map(|(k, (a, b))| {
            let exact = basis.kernel_omega(n, a.omega(), b.omega());
            let scale = (basis.diagonal_omega(n, a.omega()) * basis.diagonal_omega(n, b.omega())).sqrt();
            (got[k] - exact).norm() / scale
        })
        .fold(0.0, f64::max))
}

/// `int_D K_{N,gamma}(z, z) dA` for the radially symmetric model.
pub fn radial_trace(rs: &RadialSymSpec, n: usize, q: &QuadratureSpec) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("trace needs N >= 1".into()));
    }
    let (lo, hi) = rs.disc_radii();
    let v = integrate_disc_annulus_vec(1, lo, hi, q, |z, out| {
        let mut vals = Vec::with_capacity(n);
        rs.values_into(n, z, &mut vals);
        out[0] = Complex64::new(vals.iter().map(|c| c.norm_sqr()).sum(), 0.0);
    })?;
    Ok(v[0].re)
}

/// Reproducing-identity error for the radially symmetric model, with points
/// given as `z` values in the disc annulus; same normalization as
/// [`reproducing_error`].
pub fn radial_reproducing_error(
    rs: &RadialSymSpec,
    n: usize,
    pairs: &[(Complex64, Complex64)],
    q: &QuadratureSpec,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("kernel needs N >= 1".into()));
    }
    let vals = |z: Complex64| {
        let mut v = Vec::with_capacity(n);
        rs.values_into(n, z, &mut v);
        v
    };
    let left: Vec<Vec<Complex64>> = pairs.iter().map(|(a, _)| vals(*a)).collect();
    let right: Vec<Vec<Complex64>> = pairs.iter().map(|(_, b)| vals(*b)).collect();
    let (lo, hi) = rs.disc_radii();
    let got = integrate_disc_annulus_vec(pairs.len(), lo, hi, q, |z, out| {
        let phi = vals(z);
        for (k, o) in out.iter_mut().enumerate() {
            let k1: Complex64 = left[k].iter().zip(&phi).map(|(a, p)| a * p.conj()).sum();
            let k2: Complex64 = phi.iter().zip(&right[k]).map(|(p, b)| p * b.conj()).sum();
            *o = k1 * k2;
        }
    })?;
    Ok((0..pairs.len())
        .map(|k| {
            let exact: Complex64 = left[k].iter().zip(&right[k]).map(|(a, b)| a * b.conj()).sum();
            let d1: f64 = left[k].iter().map(|c| c.norm_sqr()).sum();
            let d2: f64 = right[k].iter().map(|c| c.norm_sqr()).sum();
            (got[k] - exact).norm() / (d1 * d2).sqrt()
        })
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chebyshev::{monic_eval_omega, ChebyshevKind};

    fn spec() -> AnnulusSpec {
        AnnulusSpec::new(1.5, 2.5).unwrap()
    }

    fn q() -> QuadratureSpec {
        QuadratureSpec::for_degree(8, 1e-10).unwrap()
    }

    #[test]
    fn area_of_annulus() {
        let a = integrate_annulus(|_| Complex64::new(1.0, 0.0), &spec(), &q()).unwrap();
        let expect = std::f64::consts::PI * ((6.25 - 0.16) - (2.25 - 1.0 / 2.25)) / 4.0;
        assert!((a.re - expect).abs() < 1e-12 * expect);
        assert!((a.re - spec().area()).abs() < 1e-12 * expect);
    }

    #[test]
    fn first_norm_and_orthogonality() {
        let s = spec();
        let h0 = integrate_annulus(|z| Complex64::new(crate::kernels::weight_eval(ModelKind::ModelI, z, &s), 0.0), &s, &q())
            .unwrap();
        assert!((h0.re - 2.0 * std::f64::consts::PI * (5.0f64 / 3.0).ln()).abs() < 1e-12);
        let cross = integrate_annulus_vec(1, &s, &q(), |w, out| {
            let m2 = monic_eval_omega(ChebyshevKind::First, 2, w);
            let m5 = monic_eval_omega(ChebyshevKind::First, 5, w);
            out[0] = crate::kernels::weight_omega(ModelKind::ModelI, w) * m2.conj() * m5;
        })
        .unwrap();
        assert!(cross[0].norm() < 1e-10 * norm_constant(ModelKind::ModelI, 5, &s));
    }

    #[test]
    fn single_entry_gram() {
        let r = orthogonality_matrix(ModelKind::ModelII, 0, &spec(), &q()).unwrap();
        assert_eq!(r.gram.len(), 1);
        assert!((r.gram[0][0] - 3.364994797845067).abs() < 1e-12);
    }

    #[test]
    fn gram_is_symmetric() {
        let r = orthogonality_matrix(ModelKind::ModelIII, 6, &spec(), &q()).unwrap();
        let scale = r.reference.iter().cloned().fold(0.0, f64::max);
        for m in 0..=6 {
            for n in 0..=6 {
                assert!((r.gram[m][n] - r.gram[n][m]).abs() <= 1e-12 * scale);
            }
        }
        assert!(r.max_diag_relerr < 1e-9 && r.max_offdiag < 1e-9);
    }

    #[test]
    fn traces() {
        let s = spec();
        for (model, n) in [(ModelKind::ModelII, 4), (ModelKind::ModelI, 1), (ModelKind::ModelIII, 7)] {
            let qq = QuadratureSpec::for_degree(n, 1e-10).unwrap();
            let t = kernel_trace(model, n, &s, &qq).unwrap();
            assert!((t - n as f64).abs() < 1e-8 * n as f64, "{model}: {t}");
        }
    }

    #[test]
    fn angular_rule_is_exact_for_trig_polynomials() {
        let s = spec();
        let f = |w: Complex64, out: &mut [Complex64]| {
            let m = monic_eval_omega(ChebyshevKind::Second, 3, w);
            out[0] = m.conj() * m;
        };
        let (a, _) = apply_rule(1, s.inner(), s.outer(), 4, 24, 32, &jacobian_rt, &|r, t, o: &mut [Complex64]| {
            f(Complex64::from_polar(r, t), o)
        });
        let (b, _) = apply_rule(1, s.inner(), s.outer(), 4, 24, 64, &jacobian_rt, &|r, t, o: &mut [Complex64]| {
            f(Complex64::from_polar(r, t), o)
        });
        assert!((a[0] - b[0]).norm() <= 1e-13 * a[0].norm());
    }

    #[test]
    fn tolerance_failure_is_reported() {
        let s = spec();
        let tight = QuadratureSpec::new(4, 8, 1e-15).unwrap().with_panels(1);
        let err = integrate_annulus_vec(1, &s, &tight, |w, out| {
            out[0] = Complex64::new((40.0 * w.arg()).cos().abs() * w.norm().powi(15), 0.0);
        });
        assert!(matches!(err, Err(Error::ToleranceNotMet { .. })));
    }

    #[test]
    fn radial_model_trace() {
        let rs = RadialSymSpec::new(1.5, 1.5, 2.5).unwrap();
        let qq = QuadratureSpec::for_degree(4, 1e-10).unwrap();
        let t = radial_trace(&rs, 4, &qq).unwrap();
        assert!((t - 4.0).abs() < 1e-8 * 4.0);
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::new(3, 64, 1e-10).is_err());
        assert!(QuadratureSpec::new(24, 4, 1e-10).is_err());
        assert!(QuadratureSpec::new(24, 64, 0.0).is_err());
    }
}
