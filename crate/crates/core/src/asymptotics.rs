//! Large-N limit kernels: the universal edge kernel near the outer ellipse,
//! the interval kernels near the segment `[-1, 1]`, the thick-annulus
//! building blocks `kappa`/`lambda`, and the one-dimensional Bessel and sine
//! kernels they are compared against.
//!
//! Every `int_0^1 dc` is a 64-node Gauss-Legendre rule checked against a
//! two-panel refinement; the integrands are analytic on `[0, 1]`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::ModelKind;
use crate::special::{bessel_j, integrate_unit, sinc, GaussRule};

/// Parameters of the edge scaling `r_j = v (1 - t_j / N)`,
/// `theta_j = psi + phi_j / N`, with inner radius `R = v (1 - T / N)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeScaling {
    pub v: f64,
    pub psi: f64,
    pub depth: f64,
    pub t1: f64,
    pub t2: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub n: usize,
}

impl EdgeScaling {
    #[allow(clippy::too_many_arguments)]
    pub fn new(v: f64, psi: f64, depth: f64, t1: f64, t2: f64, phi1: f64, phi2: f64, n: usize) -> Result<Self> {
        let all = [v, psi, depth, t1, t2, phi1, phi2];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("edge scaling parameters must be finite".into()));
        }
        if v <= 1.0 {
            return Err(Error::InvalidParameter(format!("v must exceed 1, got {v}")));
        }
        if depth <= 0.0 {
            return Err(Error::InvalidParameter(format!("T must be positive, got {depth}")));
        }
        for t in [t1, t2] {
            if !(0.0 < t && t < depth) {
                return Err(Error::InvalidParameter(format!("need 0 < t < T, got t = {t}, T = {depth}")));
            }
        }
        if n == 0 {
            return Err(Error::InvalidParameter("N must be positive".into()));
        }
        Ok(Self {
            v,
            psi: psi.rem_euclid(2.0 * PI),
            depth,
            t1,
            t2,
            phi1,
            phi2,
            n,
        })
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }
}

/// The three reference angles of the interval regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntervalAngle {
    Zero,
    HalfPi,
    Pi,
}

impl IntervalAngle {
    pub fn radians(self) -> f64 {
        match self {
            IntervalAngle::Zero => 0.0,
            IntervalAngle::HalfPi => FRAC_PI_2,
            IntervalAngle::Pi => PI,
        }
    }
}

/// Even (`Plus`, cosh-type) or odd (`Minus`, sinh-type) interval-end kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Plus,
    Minus,
}

impl Parity {
    pub fn label(self) -> &'static str {
        match self {
            Parity::Plus => "plus",
            Parity::Minus => "minus",
        }
    }
}

/// Parameters of the interval scaling `v = 1 + u / N`, `R = 1 + T / N`,
/// `r_j = 1 + t_j / N`, `theta_j = psi + phi_j / N`, with `s_j = t_j + i phi_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalScaling {
    pub u: f64,
    pub depth: f64,
    pub psi: IntervalAngle,
    pub s1: Complex64,
    pub s2: Complex64,
}

impl IntervalScaling {
    /// Requires `0 <= T < u` and `T <= t_j <= u`. The closed range admits the
    /// `t -> 0`, `T = 0` sine-kernel limits.
    pub fn new(u: f64, depth: f64, psi: IntervalAngle, s1: Complex64, s2: Complex64) -> Result<Self> {
        if ![u, depth, s1.re, s1.im, s2.re, s2.im].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidParameter("interval scaling parameters must be finite".into()));
        }
        if !(0.0 <= depth && depth < u) {
            return Err(Error::Domain(format!("need 0 <= T < u, got T = {depth}, u = {u}")));
        }
        for s in [s1, s2] {
            if !(depth <= s.re && s.re <= u) {
                return Err(Error::InvalidParameter(format!("need T <= t <= u, got t = {}", s.re)));
            }
        }
        Ok(Self { u, depth, psi, s1, s2 })
    }
}

fn edge_integral(tau: f64, dphi: f64, depth: f64) -> Complex64 {
    integrate_unit(|c| {
        // c / (1 - e^{-2cT}) -> 1 / (2T) at c = 0
        let ratio = if c * depth < 1e-12 {
            1.0 / (2.0 * depth)
        } else {
            c / -(-2.0 * c * depth).exp_m1()
        };
        Complex64::from_polar(ratio * (-c * tau).exp(), c * dphi)
    })
    .0
}

fn ellipse_denominator(v: f64, psi: f64) -> f64 {
    v * v + 1.0 / (v * v) - 2.0 * (2.0 * psi).cos()
}

/// Universal edge kernel shared by all four models.
pub fn edge_kernel_universal(e: &EdgeScaling) -> Complex64 {
    let n = e.n as f64;
    let pref = 4.0 * n * n / PI / ellipse_denominator(e.v, e.psi);
    pref * edge_integral(e.t1 + e.t2, e.phi1 - e.phi2, e.depth)
}

/// Edge molecule density `rho_v(psi) = 2 N^2 / (pi T) / (v^2 + v^-2 - 2 cos 2 psi)`.
pub fn rho_v(v: f64, psi: f64, n: usize, depth: f64) -> f64 {
    let n = n as f64;
    2.0 * n * n / (PI * depth) / ellipse_denominator(v, psi)
}

/// Normalized angular density on the outer ellipse,
/// `sigma(psi) = (v^2 - v^-2) / (2 pi) / (v^2 + v^-2 - 2 cos 2 psi)`.
pub fn sigma_density(v: f64, psi: f64) -> f64 {
    (v * v - 1.0 / (v * v)) / (2.0 * PI) / ellipse_denominator(v, psi)
}

/// `kappa(tau, phi) = ((s - 1) e^s + 1) / s^2` with `s = -tau + i phi`,
/// i.e. `int_0^1 c e^{cs} dc`.
pub fn kappa(tau: f64, varphi: f64) -> Complex64 {
    let s = Complex64::new(-tau, varphi);
    if s.norm() < 0.5 {
        // sum_{m>=2} s^{m-2} (m-1) / m!
        let mut acc = Complex64::new(0.0, 0.0);
        let mut pow = Complex64::new(1.0, 0.0);
        let mut fact = 1.0;
        for m in 2..30 {
            fact *= m as f64;
            acc += pow * ((m - 1) as f64 / fact);
            pow *= s;
        }
        acc
    } else {
        ((s - 1.0) * s.exp() + 1.0) / (s * s)
    }
}

/// Normalized two-molecule correlation
/// `lambda(phi) = 1 - kappa(tau, phi) kappa(tau, -phi) / kappa(tau, 0)^2`.
pub fn lambda_corr(tau: f64, varphi: f64) -> f64 {
    if varphi == 0.0 {
        return 0.0;
    }
    let k0 = kappa(tau, 0.0).re;
    let k = kappa(tau, varphi);
    1.0 - k.norm_sqr() / (k0 * k0)
}

/// `c / D(c)` with `D(c) = e^{2cu} - e^{-2cu} - e^{2cT} + e^{-2cT}
/// = 4 cosh(c(u+T)) sinh(c(u-T))`, continued to `1 / (4 (u - T))` at zero.
fn c_over_d(c: f64, u: f64, depth: f64) -> f64 {
    let x = c * (u - depth);
    if x < 1e-8 {
        1.0 / (4.0 * (u - depth) * (c * (u + depth)).cosh())
    } else {
        c / (4.0 * (c * (u + depth)).cosh() * x.sinh())
    }
}

fn check_interval(i: &IntervalScaling) -> Result<()> {
    if i.depth >= i.u {
        return Err(Error::Domain(format!("need T < u, got T = {}, u = {}", i.depth, i.u)));
    }
    Ok(())
}

/// Kernel at the interval ends `psi = 0, pi`.
pub fn interval_edge_kernel(parity: Parity, i: &IntervalScaling, n: usize) -> Result<Complex64> {
    check_interval(i)?;
    if i.psi == IntervalAngle::HalfPi {
        return Err(Error::InvalidParameter("interval edge kernel needs psi = 0 or pi".into()));
    }
    let n4 = (n as f64).powi(4);
    let (s1, s2c) = (i.s1, i.s2.conj());
    let d = |c: f64| c_over_d(c, i.u, i.depth);
    Ok(match parity {
        Parity::Plus => {
            let integral = integrate_unit(|c| 4.0 * (c * s1).cosh() * (c * s2c).cosh() * d(c)).0;
            n4 / PI / (s1.norm() * s2c.norm()) * integral
        }
        Parity::Minus => {
            let integral = integrate_unit(|c| 4.0 * (c * s1).sinh() * (c * s2c).sinh() * d(c)).0;
            n4 / PI / (s1 * s2c) * integral
        }
    })
}

/// Bulk kernel at `psi = pi/2`, shared by all four models.
pub fn interval_bulk_kernel(i: &IntervalScaling, n: usize) -> Result<Complex64> {
    check_interval(i)?;
    let n2 = (n as f64).powi(2);
    let s = i.s1 + i.s2.conj();
    Ok(n2 / PI * integrate_unit(|c| 2.0 * (c * s).cosh() * c_over_d(c, i.u, i.depth)).0)
}

/// Which interval-end kernel a model converges to at `psi = 0` or `pi`;
/// `None` at `pi/2`, where all models share the bulk kernel.
pub fn interval_parity(model: ModelKind, angle: IntervalAngle) -> Option<Parity> {
    use IntervalAngle::*;
    use ModelKind::*;
    use Parity::*;
    match (model, angle) {
        (_, HalfPi) => None,
        (ModelI, _) => Some(Plus),
        (ModelII, _) => Some(Minus),
        (ModelIII, Zero) | (ModelIV, Pi) => Some(Plus),
        (ModelIII, Pi) | (ModelIV, Zero) => Some(Minus),
    }
}

/// Limit kernel for `model` under the interval scaling.
pub fn interval_limit(model: ModelKind, i: &IntervalScaling, n: usize) -> Result<Complex64> {
    match interval_parity(model, i.psi) {
        None => interval_bulk_kernel(i, n),
        Some(p) => interval_edge_kernel(p, i, n),
    }
}

/// One-dimensional sine kernel `(N / pi) sinc(phi1 - phi2)`.
pub fn sine_kernel_line(phi1: f64, phi2: f64, n: usize) -> f64 {
    n as f64 / PI * sinc(phi1 - phi2)
}

/// `(N^2 / pi) / sqrt|phi1 phi2| [sinc(phi1 - phi2) +- sinc(phi1 + phi2)]`.
pub fn kernel_r(parity: Parity, phi1: f64, phi2: f64, n: usize) -> Result<f64> {
    if phi1 == 0.0 || phi2 == 0.0 {
        return Err(Error::Domain("kernel_r is singular at phi = 0".into()));
    }
    let n2 = (n as f64).powi(2);
    let sign = match parity {
        Parity::Plus => 1.0,
        Parity::Minus => -1.0,
    };
    Ok(n2 / PI / (phi1 * phi2).abs().sqrt() * (sinc(phi1 - phi2) + sign * sinc(phi1 + phi2)))
}

/// Bessel kernel `N^2 int_0^1 c J_a(c phi1) J_a(c phi2) dc`.
///
/// The integrand behaves like `c^{2a+1}` at the origin, so the rule uses
/// geometrically graded panels toward `c = 0`.
pub fn bessel_kernel(a: f64, phi1: f64, phi2: f64, n: usize) -> Result<f64> {
    if !(a > -1.0 && a.is_finite()) {
        return Err(Error::InvalidParameter(format!("Bessel order must exceed -1, got {a}")));
    }
    if !(phi1 > 0.0 && phi2 > 0.0) {
        return Err(Error::Domain(format!("Bessel kernel needs phi > 0, got {phi1}, {phi2}")));
    }
    let rule = GaussRule::get(32);
    let f = |c: f64| c * bessel_j(a, c * phi1) * bessel_j(a, c * phi2);
    // panels [2^-(k+1), 2^-k] for k < 40, plus [0, 2^-40]; the top panel is split further
    // to follow oscillations at large phi.
    let top_splits = ((phi1.max(phi2) / 8.0).ceil() as usize).max(1);
    let mut total = 0.0;
    let h = 0.5 / top_splits as f64;
    for p in 0..top_splits {
        let lo = 0.5 + p as f64 * h;
        total += rule.mapped(lo, lo + h).map(|(c, w)| w * f(c)).sum::<f64>();
    }
    let mut hi = 0.5;
    for _ in 0..40 {
        let lo = 0.5 * hi;
        let splits = ((phi1.max(phi2) * (hi - lo) / 4.0).ceil() as usize).max(1);
        let h = (hi - lo) / splits as f64;
        for p in 0..splits {
            let a0 = lo + p as f64 * h;
            total += rule.mapped(a0, a0 + h).map(|(c, w)| w * f(c)).sum::<f64>();
        }
        hi = lo;
    }
    total += rule.mapped(0.0, hi).map(|(c, w)| w * f(c)).sum::<f64>();
    Ok((n as f64).powi(2) * total)
}

/// Edge limit of the radially symmetric model,
/// `(4 N^2 / (pi v^2)) int_0^1 c e^{-c(t1+t2)} e^{ic(phi1-phi2)} / (1 - e^{-2cT}) dc`;
/// independent of `gamma`.
#[allow(clippy::too_many_arguments)]
pub fn edge_kernel_radial_sym(v: f64, depth: f64, t1: f64, t2: f64, phi1: f64, phi2: f64, n: usize) -> Result<Complex64> {
    if !(v > 0.0 && depth > 0.0 && 0.0 < t1 && t1 < depth && 0.0 < t2 && t2 < depth) {
        return Err(Error::InvalidParameter(format!(
            "need v > 0 and 0 < t1, t2 < T, got v = {v}, T = {depth}, t = ({t1}, {t2})"
        )));
    }
    let n = n as f64;
    Ok(4.0 * n * n / (PI * v * v) * edge_integral(t1 + t2, phi1 - phi2, depth))
}
