//! Radially symmetric comparison model: weight `|z|^gamma` on the disc annulus
//! `R/2 <= |z| <= v/2`, where the monic orthogonal polynomials are `z^n`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::ComplexPoint;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialSymSpec {
    gamma: f64,
    inner: f64,
    outer: f64,
}

impl RadialSymSpec {
    /// `inner`/`outer` are the elliptic-style radii `R`, `v`; the disc annulus
    /// has radii `R/2` and `v/2`.
    pub fn new(gamma: f64, inner: f64, outer: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > -2.0) {
            return Err(Error::InvalidParameter(format!("gamma must exceed -2, got {gamma}")));
        }
        if !(inner.is_finite() && outer.is_finite() && 1.0 < inner && inner < outer) {
            return Err(Error::InvalidParameter(format!(
                "radii must satisfy 1 < R < v, got R = {inner}, v = {outer}"
            )));
        }
        Ok(Self { gamma, inner, outer })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn inner(&self) -> f64 {
        self.inner
    }

    pub fn outer(&self) -> f64 {
        self.outer
    }

    /// Disc radii `(R/2, v/2)`.
    pub fn disc_radii(&self) -> (f64, f64) {
        (0.5 * self.inner, 0.5 * self.outer)
    }

    pub fn contains(&self, z: ComplexPoint) -> bool {
        let (lo, hi) = self.disc_radii();
        let m = z.to_complex().norm();
        m >= lo * (1.0 - 1e-12) && m <= hi * (1.0 + 1e-12)
    }

    /// `h_n = 2 pi / (2n + gamma + 2) ((v/2)^{2n+gamma+2} - (R/2)^{2n+gamma+2})`.
    pub fn norm_constant(&self, n: u32) -> f64 {
        let (_, rho) = self.disc_radii();
        let e = 2.0 * n as f64 + self.gamma + 2.0;
        let q = self.inner / self.outer;
        2.0 * PI / e * (e * rho.ln()).exp() * -(e * q.ln()).exp_m1()
    }

    /// Orthonormal functions `|z|^{gamma/2} z^n / sqrt(h_n)` at `z`.
    pub fn values_into(&self, terms: usize, z: Complex64, out: &mut Vec<Complex64>) {
        out.clear();
        let (_, rho) = self.disc_radii();
        let q = self.inner / self.outer;
        let zs = z / rho;
        let lead = zs.norm().powf(0.5 * self.gamma) / rho;
        let mut p = Complex64::new(lead, 0.0);
        for n in 0..terms {
            let e = 2.0 * n as f64 + self.gamma + 2.0;
            let c = (e / (2.0 * PI * -(e * q.ln()).exp_m1())).sqrt();
            out.push(p * c);
            p *= zs;
        }
    }
}

/// `K_{N,gamma}(z1, z2) = (r1 r2)^{gamma/2} sum_{n<N} (z1 conj z2)^n / h_n`.
pub fn kernel_radial_sym(
    rs: &RadialSymSpec,
    n: usize,
    z1: ComplexPoint,
    z2: ComplexPoint,
) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::InvalidParameter("kernel needs N >= 1".into()));
    }
    for z in [z1, z2] {
        if !rs.contains(z) {
            return Err(Error::Domain(format!(
                "point ({}, {}) outside the disc annulus",
                z.x, z.y
            )));
        }
    }
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    rs.values_into(n, z1.to_complex(), &mut a);
    rs.values_into(n, z2.to_complex(), &mut b);
    Ok(a.iter().zip(&b).map(|(x, y)| x * y.conj()).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_term_is_uniform_density() {
        let rs = RadialSymSpec::new(0.0, 1.5, 2.5).unwrap();
        let expect = 1.0 / (PI * (1.25f64.powi(2) - 0.75f64.powi(2)));
        for &(r, t) in &[(0.8, 0.0), (1.0, 2.0), (1.2, 5.0)] {
            let z = ComplexPoint::from(Complex64::from_polar(r, t));
            let k = kernel_radial_sym(&rs, 1, z, z).unwrap();
            assert!((k.re - expect).abs() < 1e-14 && k.im.abs() < 1e-15);
        }
    }

    #[test]
    fn matches_printed_sum() {
        let rs = RadialSymSpec::new(1.5, 1.5, 2.5).unwrap();
        let z1 = Complex64::from_polar(0.9, 0.4);
        let z2 = Complex64::from_polar(1.1, -1.3);
        let n = 7;
        let (r1, r2) = (z1.norm(), z2.norm());
        let g = rs.gamma();
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n {
            let e = 2.0 * k as f64 + g + 2.0;
            acc += e * (r1 * r2).powi(k as i32) * Complex64::from_polar(1.0, k as f64 * (z1.arg() - z2.arg()))
                / (1.25f64.powf(e) - 0.75f64.powf(e));
        }
        acc *= (r1 * r2).powf(g / 2.0) / (2.0 * PI);
        let got = kernel_radial_sym(&rs, n, z1.into(), z2.into()).unwrap();
        assert!((got - acc).norm() < 1e-12 * acc.norm());
    }

    #[test]
    fn norm_constant_matches_closed_form() {
        let rs = RadialSymSpec::new(-0.5, 1.5, 2.5).unwrap();
        for n in 0..10 {
            let e = 2.0 * n as f64 + 1.5;
            let expect = 2.0 * PI / e * (2.5f64.powf(e) - 1.5f64.powf(e)) / 2f64.powf(e);
            assert!((rs.norm_constant(n) - expect).abs() < 1e-12 * expect);
        }
    }

    #[test]
    fn hermitian_and_domain() {
        let rs = RadialSymSpec::new(1.5, 1.5, 2.5).unwrap();
        let z1: ComplexPoint = Complex64::from_polar(0.9, 0.4).into();
        let z2: ComplexPoint = Complex64::from_polar(1.2, 2.0).into();
        let a = kernel_radial_sym(&rs, 5, z1, z2).unwrap();
        let b = kernel_radial_sym(&rs, 5, z2, z1).unwrap();
        assert!((a - b.conj()).norm() < 1e-14);
        assert!(kernel_radial_sym(&rs, 5, ComplexPoint::new(0.1, 0.0), z1).is_err());
        assert!(RadialSymSpec::new(-2.0, 1.5, 2.5).is_err());
        assert!(RadialSymSpec::new(0.0, 2.5, 1.5).is_err());
    }
}
