//! Exact sampling of the `N`-point projection process by the sequential
//! (chain-rule) algorithm: point `j` is drawn from
//! `(K(z,z) - sum_i |<e_i, Phi(z)>|^2) / (N - j)`, where `Phi(z)` is the
//! vector of orthonormal functions at `z` and `e_i` an orthonormal basis of
//! the span of `Phi` at the points already drawn. Each draw is a rejection
//! step with proposals uniform on the `(r, theta)` rectangle.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{jacobian_rt, joukowski_forward, joukowski_inverse, AnnulusSpec, ComplexPoint, OmegaCoord};
use crate::kernels::{EllipticBasis, ModelKind};

/// Residual norms below this mark a numerically repeated point.
const GS_TOL: f64 = 1e-12;
/// Envelope rebuilds (each doubling the safety factor) before giving up.
const MAX_ENVELOPE_REBUILDS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleConfig {
    pub model: ModelKind,
    pub n: usize,
    pub spec: AnnulusSpec,
    pub seed: u64,
    /// The probe grid has `envelope_grid` radial and `2 * envelope_grid` angular nodes.
    pub envelope_grid: usize,
    pub envelope_safety: f64,
    pub max_rejects: usize,
}

impl SampleConfig {
    pub fn new(model: ModelKind, n: usize, spec: AnnulusSpec, seed: u64) -> Self {
        Self {
            model,
            n,
            spec,
            seed,
            envelope_grid: 128,
            envelope_safety: 1.5,
            max_rejects: 1_000_000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > 64 {
            return Err(Error::InvalidParameter(format!("sampler supports 1 <= N <= 64, got {}", self.n)));
        }
        if !(self.envelope_safety >= 1.2 && self.envelope_safety.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "envelope safety must be >= 1.2, got {}",
                self.envelope_safety
            )));
        }
        if self.envelope_grid < 2 {
            return Err(Error::InvalidParameter("envelope grid needs at least 2 nodes per side".into()));
        }
        if self.max_rejects == 0 {
            return Err(Error::InvalidParameter("max_rejects must be positive".into()));
        }
        Ok(())
    }
}

/// Reusable sampler; successive calls to [`Sampler::draw`] give independent
/// realizations from one seeded stream.
#[derive(Debug, Clone)]
pub struct Sampler {
    cfg: SampleConfig,
    basis: EllipticBasis,
    /// Maximum of `K(z, z) J` over the probe grid.
    grid_max: f64,
    safety: f64,
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(cfg: SampleConfig) -> Result<Self> {
        cfg.validate()?;
        let basis = EllipticBasis::new(cfg.model, &cfg.spec);
        let (lo, hi) = (cfg.spec.inner(), cfg.spec.outer());
        let g = cfg.envelope_grid;
        let mut grid_max = 0.0f64;
        for i in 0..g {
            let r = lo + (hi - lo) * i as f64 / (g - 1) as f64;
            for k in 0..2 * g {
                let t = TAU * k as f64 / (2 * g) as f64;
                let d = basis.diagonal_omega(cfg.n, Complex64::from_polar(r, t)) * jacobian_rt(r, t);
                grid_max = grid_max.max(d);
            }
        }
        Ok(Self {
            cfg,
            basis,
            grid_max,
            safety: cfg.envelope_safety,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        })
    }

    pub fn config(&self) -> &SampleConfig {
        &self.cfg
    }

    /// One realization of the `N` points, as elliptic coordinates.
    pub fn draw_omega(&mut self) -> Result<Vec<OmegaCoord>> {
        for _ in 0..=MAX_ENVELOPE_REBUILDS {
            match self.try_draw() {
                Err(Error::EnvelopeExceeded { .. }) => self.safety *= 2.0,
                other => return other,
            }
        }
        Err(Error::EnvelopeExceeded {
            density: f64::NAN,
            bound: self.safety * self.grid_max,
        })
    }

    /// One realization of the `N` points.
    pub fn draw(&mut self) -> Result<Vec<ComplexPoint>> {
        Ok(self.draw_omega()?.into_iter().map(joukowski_forward).collect())
    }

    fn try_draw(&mut self) -> Result<Vec<OmegaCoord>> {
        let n = self.cfg.n;
        let (lo, hi) = (self.cfg.spec.inner(), self.cfg.spec.outer());
        let bound = self.safety * self.grid_max;
        let mut ortho: Vec<Vec<Complex64>> = Vec::with_capacity(n);
        let mut points = Vec::with_capacity(n);
        let mut phi = Vec::with_capacity(n);
        let mut proj = Vec::with_capacity(n);
        for j in 0..n {
            let remaining = (n - j) as f64;
            let m_j = bound / remaining;
            let mut rejects = 0usize;
            loop {
                let r = lo + (hi - lo) * self.rng.random::<f64>();
                let t = TAU * self.rng.random::<f64>();
                let u = self.rng.random::<f64>();
                let w = Complex64::from_polar(r, t);
                self.basis.values_into(n, w, &mut phi);
                proj.clear();
                proj.extend(ortho.iter().map(|e| inner(e, &phi)));
                let total: f64 = phi.iter().map(|c| c.norm_sqr()).sum();
                let removed: f64 = proj.iter().map(|c| c.norm_sqr()).sum();
                let density = (total - removed).max(0.0) / remaining * jacobian_rt(r, t);
                if density > m_j {
                    return Err(Error::EnvelopeExceeded { density, bound: m_j });
                }
                if u * m_j <= density {
                    let mut resid = phi.clone();
                    for (e, c) in ortho.iter().zip(&proj) {
                        for (x, y) in resid.iter_mut().zip(e) {
                            *x -= c * y;
                        }
                    }
                    let norm = resid.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                    if norm >= GS_TOL * total.sqrt().max(1.0) {
                        resid.iter_mut().for_each(|x| *x /= norm);
                        ortho.push(resid);
                    }
                    points.push(OmegaCoord::new(r, t)?);
                    break;
                }
                rejects += 1;
                if rejects >= self.cfg.max_rejects {
                    return Err(Error::RejectBudgetExhausted(rejects));
                }
            }
        }
        Ok(points)
    }
}

/// `<a, b> = sum conj(a_k) b_k`.
fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// One realization of the process described by `cfg`.
pub fn sample(cfg: &SampleConfig) -> Result<Vec<ComplexPoint>> {
    Sampler::new(*cfg)?.draw()
}

/// Area of the annulus cell `r0 <= r <= r1`, `t0 <= theta <= t1` in the plane.
pub fn cell_area(r0: f64, r1: f64, t0: f64, t1: f64) -> f64 {
    (t1 - t0) * (r1 * r1 - r0 * r0 - 1.0 / (r1 * r1) + 1.0 / (r0 * r0)) / 8.0
        - 0.25 * (r1 / r0).ln() * ((2.0 * t1).sin() - (2.0 * t0).sin())
}

/// Counts on a uniform `(r, theta)` grid and the matching plane-density
/// estimate `count / (samples * cell area)`, comparable with `K_N(z, z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub r_edges: Vec<f64>,
    pub theta_edges: Vec<f64>,
    /// Row-major `[r bin][theta bin]`.
    pub counts: Vec<u64>,
    pub density: Vec<f64>,
    pub samples: usize,
}

impl Histogram {
    pub fn shape(&self) -> (usize, usize) {
        (self.r_edges.len() - 1, self.theta_edges.len() - 1)
    }

    pub fn cell_area(&self, i: usize, k: usize) -> f64 {
        cell_area(self.r_edges[i], self.r_edges[i + 1], self.theta_edges[k], self.theta_edges[k + 1])
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Bin of an elliptic coordinate inside the annulus.
    pub fn bin_of(&self, w: OmegaCoord) -> (usize, usize) {
        let (nr, nt) = self.shape();
        let (lo, hi) = (self.r_edges[0], self.r_edges[nr]);
        let i = (((w.r() - lo) / (hi - lo) * nr as f64).floor().max(0.0) as usize).min(nr - 1);
        let k = ((w.theta() / TAU * nt as f64).floor().max(0.0) as usize).min(nt - 1);
        (i, k)
    }
}

/// Histogram of all points of all realizations.
pub fn empirical_density(samples: &[Vec<ComplexPoint>], bins: (usize, usize), spec: &AnnulusSpec) -> Result<Histogram> {
    let (nr, nt) = bins;
    if nr == 0 || nt == 0 {
        return Err(Error::InvalidParameter("histogram needs at least one bin per axis".into()));
    }
    let (lo, hi) = (spec.inner(), spec.outer());
    let mut h = Histogram {
        r_edges: (0..=nr).map(|i| lo + (hi - lo) * i as f64 / nr as f64).collect(),
        theta_edges: (0..=nt).map(|k| TAU * k as f64 / nt as f64).collect(),
        counts: vec![0; nr * nt],
        density: vec![0.0; nr * nt],
        samples: samples.len(),
    };
    for z in samples.iter().flatten() {
        let w = joukowski_inverse(*z)?;
        if !crate::geometry::in_radial_range(spec, w.r()) {
            return Err(Error::Domain(format!("sample point ({}, {}) outside the annulus", z.x, z.y)));
        }
        let (i, k) = h.bin_of(w);
        h.counts[i * nt + k] += 1;
    }
    if !samples.is_empty() {
        for i in 0..nr {
            for k in 0..nt {
                h.density[i * nt + k] = h.counts[i * nt + k] as f64 / (samples.len() as f64 * h.cell_area(i, k));
            }
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::contains;

    fn spec() -> AnnulusSpec {
        AnnulusSpec::new(1.5, 2.5).unwrap()
    }

    #[test]
    fn cell_areas_add_up() {
        let s = spec();
        let nr = 5;
        let nt = 7;
        let mut total = 0.0;
        for i in 0..nr {
            for k in 0..nt {
                let r0 = 1.5 + i as f64 / nr as f64;
                let t0 = TAU * k as f64 / nt as f64;
                let a = cell_area(r0, r0 + 1.0 / nr as f64, t0, t0 + TAU / nt as f64);
                assert!(a > 0.0);
                total += a;
            }
        }
        assert!((total - s.area()).abs() < 1e-12 * s.area());
    }

    #[test]
    fn points_lie_in_annulus_and_are_reproducible() {
        for model in ModelKind::ALL {
            let cfg = SampleConfig::new(model, 6, spec(), 17);
            let a = sample(&cfg).unwrap();
            let b = sample(&cfg).unwrap();
            assert_eq!(a.len(), 6);
            assert_eq!(a, b);
            assert!(a.iter().all(|z| contains(&spec(), *z)));
        }
    }

    #[test]
    fn config_validation() {
        let mut cfg = SampleConfig::new(ModelKind::ModelI, 65, spec(), 1);
        assert!(sample(&cfg).is_err());
        cfg.n = 3;
        cfg.envelope_safety = 1.1;
        assert!(sample(&cfg).is_err());
    }

    #[test]
    fn reject_budget() {
        let mut cfg = SampleConfig::new(ModelKind::ModelII, 3, spec(), 5);
        cfg.max_rejects = 1;
        cfg.envelope_safety = 1e6;
        assert!(matches!(sample(&cfg), Err(Error::RejectBudgetExhausted(1))));
    }

    #[test]
    fn envelope_is_rebuilt_when_too_small() {
        let mut cfg = SampleConfig::new(ModelKind::ModelI, 4, spec(), 9);
        cfg.envelope_grid = 2;
        let mut s = Sampler::new(cfg).unwrap();
        s.grid_max *= 0.01;
        let pts = s.draw().unwrap();
        assert_eq!(pts.len(), 4);
        assert!(s.safety > cfg.envelope_safety);
    }

    #[test]
    fn empty_histogram() {
        let h = empirical_density(&[], (4, 6), &spec()).unwrap();
        assert_eq!(h.total(), 0);
        assert!(h.density.iter().all(|&d| d == 0.0));
    }

    #[test]
    fn histogram_mass_and_domain() {
        let mut s = Sampler::new(SampleConfig::new(ModelKind::ModelIII, 3, spec(), 2)).unwrap();
        let draws: Vec<_> = (0..50).map(|_| s.draw().unwrap()).collect();
        let h = empirical_density(&draws, (3, 4), &spec()).unwrap();
        assert_eq!(h.total(), 150);
        let mass: f64 = (0..3)
            .flat_map(|i| (0..4).map(move |k| (i, k)))
            .map(|(i, k)| h.density[i * 4 + k] * h.cell_area(i, k))
            .sum();
        assert!((mass - 3.0).abs() < 1e-12);
        assert!(empirical_density(&[vec![ComplexPoint::new(5.0, 0.0)]], (3, 4), &spec()).is_err());
    }
}
