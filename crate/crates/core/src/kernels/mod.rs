//! Finite-N machinery: annulus weights, norms `h_n`, and kernel functions.
//!
//! For the four annulus models the orthonormal functions are
//! `phi_n(z) = sqrt(w(z)) M_n(z) / sqrt(h_n)` and the kernel is
//! `K_N(z1, z2) = sum_{n<N} phi_n(z1) conj(phi_n(z2))`. Every model shares the
//! structure
//!
//! ```text
//! phi_n(w) = sqrt(w(z)) * pre(w) * sqrt(c_n / B(k_n)) * num_n(w)
//! B(k)     = v^k - v^-k - R^k + R^-k
//! ```
//!
//! with a model-specific prefactor `pre`, numerator `num_n` (a pair of powers of
//! `w`), weight `c_n` and bracket exponent `k_n`. Numerators and brackets are
//! both divided by `v^{k_n/2}` and `v^{k_n}` before use, so every magnitude
//! stays below one for points inside the annulus and large `N` cannot overflow.

pub mod correlation;
pub mod jacobi;
pub mod radial;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::chebyshev::ChebyshevKind;
use crate::error::{Error, Result};
use crate::geometry::{in_radial_range, joukowski_inverse, AnnulusSpec, ComplexPoint, OmegaCoord};

pub use correlation::correlation_det;
pub use jacobi::{jacobi_polynomial, kernel_jacobi, JacobiSpec};
pub use radial::{kernel_radial_sym, RadialSymSpec};

/// The four annulus weights and their Chebyshev kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    /// Weight `1/|1 - z^2|`, first kind.
    ModelI,
    /// Flat weight, second kind.
    ModelII,
    /// Weight `1/|1 - z|`, third kind.
    ModelIII,
    /// Weight `1/|1 + z|`, fourth kind.
    ModelIV,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [
        ModelKind::ModelI,
        ModelKind::ModelII,
        ModelKind::ModelIII,
        ModelKind::ModelIV,
    ];

    pub fn chebyshev_kind(self) -> ChebyshevKind {
        match self {
            ModelKind::ModelI => ChebyshevKind::First,
            ModelKind::ModelII => ChebyshevKind::Second,
            ModelKind::ModelIII => ChebyshevKind::Third,
            ModelKind::ModelIV => ChebyshevKind::Fourth,
        }
    }

    /// Roman-numeral label used on the command line and in reports.
    pub fn label(self) -> &'static str {
        match self {
            ModelKind::ModelI => "I",
            ModelKind::ModelII => "II",
            ModelKind::ModelIII => "III",
            ModelKind::ModelIV => "IV",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" | "1" => Some(ModelKind::ModelI),
            "II" | "2" => Some(ModelKind::ModelII),
            "III" | "3" => Some(ModelKind::ModelIII),
            "IV" | "4" => Some(ModelKind::ModelIV),
            _ => None,
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Model {}", self.label())
    }
}

/// Weight `w_A` at `w` (no support restriction), through the factorizations
/// `|1 - z^2| = |w - 1/w|^2 / 4` and `|1 -+ z| = |w -+ 1|^2 / (2 |w|)`.
pub fn weight_omega(model: ModelKind, w: Complex64) -> f64 {
    match model {
        ModelKind::ModelI => 4.0 / (w - w.inv()).norm_sqr(),
        ModelKind::ModelII => 1.0,
        ModelKind::ModelIII => 2.0 * w.norm() / (w - 1.0).norm_sqr(),
        ModelKind::ModelIV => 2.0 * w.norm() / (w + 1.0).norm_sqr(),
    }
}

/// `sqrt(w_A)` at `w`.
fn sqrt_weight_omega(model: ModelKind, w: Complex64) -> f64 {
    match model {
        ModelKind::ModelI => 2.0 / (w - w.inv()).norm(),
        ModelKind::ModelII => 1.0,
        ModelKind::ModelIII => (2.0 * w.norm()).sqrt() / (w - 1.0).norm(),
        ModelKind::ModelIV => (2.0 * w.norm()).sqrt() / (w + 1.0).norm(),
    }
}

/// The weight on the plane: `w_A(z)` inside the annulus and zero outside.
pub fn weight_eval(model: ModelKind, z: ComplexPoint, spec: &AnnulusSpec) -> f64 {
    match joukowski_inverse(z) {
        Ok(w) if in_radial_range(spec, w.r()) => weight_omega(model, w.omega()),
        _ => 0.0,
    }
}

/// `ln v` and `ln R` of an annulus; evaluates rescaled brackets.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Bracket {
    ln_outer: f64,
    ln_inner: f64,
}

impl Bracket {
    pub(crate) fn new(spec: &AnnulusSpec) -> Self {
        Self {
            ln_outer: spec.outer().ln(),
            ln_inner: spec.inner().ln(),
        }
    }

    /// `B(k) / v^k = (1 + (vR)^-k) (1 - (R/v)^k)`.
    pub(crate) fn scaled(&self, k: f64) -> f64 {
        let sum = self.ln_outer + self.ln_inner;
        let diff = self.ln_outer - self.ln_inner;
        (1.0 + (-k * sum).exp()) * -(-k * diff).exp_m1()
    }

    /// `ln B(k)`.
    pub(crate) fn ln(&self, k: f64) -> f64 {
        k * self.ln_outer + self.scaled(k).ln()
    }

    /// `ln(v / R)`.
    pub(crate) fn log_ratio(&self) -> f64 {
        self.ln_outer - self.ln_inner
    }
}

/// Closed-form squared norm `h_n` of the monic polynomial `M_n` under the
/// model weight on the annulus.
pub fn norm_constant(model: ModelKind, n: u32, spec: &AnnulusSpec) -> f64 {
    let br = Bracket::new(spec);
    let nf = n as f64;
    let ln4 = 4f64.ln();
    match model {
        ModelKind::ModelI if n == 0 => 2.0 * PI * br.log_ratio(),
        // pi / (4^n n) B(2n)
        ModelKind::ModelI => PI / nf * (br.ln(2.0 * nf) - nf * ln4).exp(),
        // pi / (4^{n+1} (n+1)) B(2n+2)
        ModelKind::ModelII => PI / (nf + 1.0) * (br.ln(2.0 * nf + 2.0) - (nf + 1.0) * ln4).exp(),
        // pi / (4^n (2n+1)) B(2n+1)
        ModelKind::ModelIII | ModelKind::ModelIV => {
            PI / (2.0 * nf + 1.0) * (br.ln(2.0 * nf + 1.0) - nf * ln4).exp()
        }
    }
}

/// Evaluator of the rescaled orthonormal functions of one model.
#[derive(Debug, Clone, Copy)]
pub struct EllipticBasis {
    model: ModelKind,
    spec: AnnulusSpec,
    bracket: Bracket,
}

impl EllipticBasis {
    pub fn new(model: ModelKind, spec: &AnnulusSpec) -> Self {
        Self {
            model,
            spec: *spec,
            bracket: Bracket::new(spec),
        }
    }

    pub fn model(&self) -> ModelKind {
        self.model
    }

    pub fn spec(&self) -> &AnnulusSpec {
        &self.spec
    }

    /// `sqrt(w) * pre(w)`: the factor common to every term.
    fn common_factor(&self, w: Complex64) -> Complex64 {
        let s = sqrt_weight_omega(self.model, w);
        match self.model {
            ModelKind::ModelI => Complex64::new(s, 0.0),
            ModelKind::ModelII => s / (w - w.inv()),
            ModelKind::ModelIII => s / (w + 1.0),
            ModelKind::ModelIV => s / (w - 1.0),
        }
    }

    /// Visits `(n, c_n / B~(k_n), num~_n(w))` for `n = 0..terms`, where `B~`
    /// and `num~` are the `v`-rescaled bracket and numerator. For Model I the
    /// `n = 0` term is the constant `1 / (2 pi ln(v/R))` with numerator one.
    fn for_each_term<F>(&self, terms: usize, w: Complex64, mut visit: F)
    where
        F: FnMut(usize, f64, Complex64),
    {
        let v = self.spec.outer();
        let step_up = w / v; // (w/v)^n
        let step_down = (w * v).inv(); // (w v)^-n
        let mut up = Complex64::new(1.0, 0.0);
        let mut down = Complex64::new(1.0, 0.0);
        let inv_sqrt_v = 1.0 / v.sqrt();
        for n in 0..terms {
            let nf = n as f64;
            match self.model {
                ModelKind::ModelI => {
                    if n == 0 {
                        visit(0, 1.0 / (2.0 * PI * self.bracket.log_ratio()), Complex64::new(1.0, 0.0));
                    } else {
                        let coef = nf / PI / self.bracket.scaled(2.0 * nf);
                        visit(n, coef, up + down);
                    }
                }
                ModelKind::ModelII => {
                    // index shift m = n + 1
                    up *= step_up;
                    down *= step_down;
                    let m = nf + 1.0;
                    let coef = 4.0 * m / PI / self.bracket.scaled(2.0 * m);
                    visit(n, coef, up - down);
                    continue;
                }
                ModelKind::ModelIII | ModelKind::ModelIV => {
                    let coef = (2.0 * nf + 1.0) / PI / self.bracket.scaled(2.0 * nf + 1.0);
                    let hi = up * w * inv_sqrt_v;
                    let lo = down * inv_sqrt_v;
                    let num = if self.model == ModelKind::ModelIII { hi + lo } else { hi - lo };
                    visit(n, coef, num);
                }
            }
            up *= step_up;
            down *= step_down;
        }
    }

    /// Orthonormal function values `phi_0(z), ..., phi_{terms-1}(z)` at `z(w)`,
    /// written into `out`.
    pub fn values_into(&self, terms: usize, w: Complex64, out: &mut Vec<Complex64>) {
        out.clear();
        let common = self.common_factor(w);
        self.for_each_term(terms, w, |_, coef, num| out.push(common * coef.sqrt() * num));
    }

    pub fn values(&self, terms: usize, w: Complex64) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(terms);
        self.values_into(terms, w, &mut out);
        out
    }

    /// `K_N(z1, z2)` as the closed `w`-form sum, with no domain check.
    pub fn kernel_omega(&self, terms: usize, w1: Complex64, w2: Complex64) -> Complex64 {
        let pre = self.common_factor(w1) * self.common_factor(w2).conj();
        // Accumulate num(w1) num(conj w2) with both numerators walked in step.
        let mut nums2 = Vec::with_capacity(terms);
        self.for_each_term(terms, w2.conj(), |_, _, num| nums2.push(num));
        let mut acc = Complex64::new(0.0, 0.0);
        self.for_each_term(terms, w1, |n, coef, num| acc += coef * num * nums2[n]);
        pre * acc
    }

    /// Diagonal `K_N(z, z)`.
    pub fn diagonal_omega(&self, terms: usize, w: Complex64) -> f64 {
        let common = self.common_factor(w).norm_sqr();
        let mut acc = 0.0;
        self.for_each_term(terms, w, |_, coef, num| acc += coef * num.norm_sqr());
        common * acc
    }
}

fn omega_in_annulus(z: ComplexPoint, spec: &AnnulusSpec) -> Result<OmegaCoord> {
    let w = joukowski_inverse(z)?;
    if !in_radial_range(spec, w.r()) {
        return Err(Error::Domain(format!(
            "point ({}, {}) has elliptic radius {} outside [{}, {}]",
            z.x,
            z.y,
            w.r(),
            spec.inner(),
            spec.outer()
        )));
    }
    Ok(w)
}

/// `K_N(z1, z2) = sqrt(w(z1) w(z2)) sum_{n<N} M_n(z1) M_n(conj z2) / h_n` for
/// one of the four annulus models.
pub fn kernel_elliptic(
    model: ModelKind,
    n: usize,
    z1: ComplexPoint,
    z2: ComplexPoint,
    spec: &AnnulusSpec,
) -> Result<Complex64> {
    let w1 = omega_in_annulus(z1, spec)?;
    let w2 = omega_in_annulus(z2, spec)?;
    kernel_elliptic_at(model, n, w1, w2, spec)
}

/// [`kernel_elliptic`] with both points given in elliptic polar coordinates.
pub fn kernel_elliptic_at(
    model: ModelKind,
    n: usize,
    w1: OmegaCoord,
    w2: OmegaCoord,
    spec: &AnnulusSpec,
) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::InvalidParameter("kernel needs N >= 1".into()));
    }
    for w in [w1, w2] {
        if !in_radial_range(spec, w.r()) {
            return Err(Error::Domain(format!(
                "elliptic radius {} outside [{}, {}]",
                w.r(),
                spec.inner(),
                spec.outer()
            )));
        }
    }
    Ok(EllipticBasis::new(model, spec).kernel_omega(n, w1.omega(), w2.omega()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chebyshev::monic_eval_omega;
    use crate::geometry::joukowski_forward;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn spec() -> AnnulusSpec {
        AnnulusSpec::new(1.5, 2.5).unwrap()
    }

    fn oc(r: f64, t: f64) -> OmegaCoord {
        OmegaCoord::new(r, t).unwrap()
    }

    /// Plain-power closed forms of `h_n`, as printed.
    fn h_plain(model: ModelKind, n: i32, r: f64, v: f64) -> f64 {
        let b = |k: i32| v.powi(k) - v.powi(-k) - r.powi(k) + r.powi(-k);
        let nf = n as f64;
        match model {
            ModelKind::ModelI if n == 0 => 2.0 * PI * (v.ln() - r.ln()),
            ModelKind::ModelI => PI / (4f64.powi(n) * nf) * b(2 * n),
            ModelKind::ModelII => PI / (4f64.powi(n + 1) * (nf + 1.0)) * b(2 * n + 2),
            _ => PI / (4f64.powi(n) * (2.0 * nf + 1.0)) * b(2 * n + 1),
        }
    }

    /// Definition-level kernel from monic values and closed-form norms.
    fn kernel_direct(model: ModelKind, n: usize, w1: Complex64, w2: Complex64, s: &AnnulusSpec) -> Complex64 {
        let kind = model.chebyshev_kind();
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n {
            acc += monic_eval_omega(kind, k as u32, w1) * monic_eval_omega(kind, k as u32, w2.conj())
                / norm_constant(model, k as u32, s);
        }
        (weight_omega(model, w1) * weight_omega(model, w2)).sqrt() * acc
    }

    #[test]
    fn norm_constant_examples() {
        let s = spec();
        assert!((norm_constant(ModelKind::ModelI, 0, &s) - 2.0 * PI * (5.0f64 / 3.0).ln()).abs() < 1e-14);
        assert!((norm_constant(ModelKind::ModelI, 0, &s) - 3.2096120537773).abs() < 1e-12);
        let h1 = PI / 4.0 * (6.25 - 0.16 - 2.25 + 1.0 / 2.25);
        assert!((norm_constant(ModelKind::ModelI, 1, &s) - h1).abs() < 1e-13);
        assert!((norm_constant(ModelKind::ModelII, 0, &s) - h1).abs() < 1e-13);
        assert!((h1 - 3.364994797845067).abs() < 1e-13);
    }

    #[test]
    fn norm_constant_matches_plain_powers() {
        let s = spec();
        for model in ModelKind::ALL {
            for n in 0..30 {
                let a = norm_constant(model, n as u32, &s);
                let b = h_plain(model, n, 1.5, 2.5);
                assert!((a - b).abs() <= 1e-12 * b, "{model} n={n}: {a} vs {b}");
                assert!(a > 0.0);
            }
        }
    }

    #[test]
    fn norm_constant_does_not_overflow() {
        let s = AnnulusSpec::new(1.9, 2.0).unwrap();
        for model in ModelKind::ALL {
            let h = norm_constant(model, 2000, &s);
            assert!(h.is_finite() && h >= 0.0);
        }
    }

    #[test]
    fn weight_examples() {
        let s = spec();
        let z = joukowski_forward(oc(2.0, 1.0));
        assert_eq!(weight_eval(ModelKind::ModelII, z, &s), 1.0);
        let wide = AnnulusSpec::new(1.01, 2.5).unwrap();
        let z = ComplexPoint::new(1.25, 0.0);
        assert!((weight_eval(ModelKind::ModelI, z, &wide) - 1.0 / 0.5625).abs() < 1e-13);
        let outside = joukowski_forward(oc(3.0, 0.4));
        assert_eq!(weight_eval(ModelKind::ModelIII, outside, &s), 0.0);
        assert_eq!(weight_eval(ModelKind::ModelI, ComplexPoint::new(0.3, 0.0), &s), 0.0);
    }

    #[test]
    fn omega_weights_match_plane_forms() {
        for &(r, t) in &[(1.2, 0.3), (2.0, 2.5), (3.1, 4.0)] {
            let w = Complex64::from_polar(r, t);
            let z = 0.5 * (w + w.inv());
            assert!((weight_omega(ModelKind::ModelI, w) - 1.0 / (1.0 - z * z).norm()).abs() < 1e-12);
            assert!((weight_omega(ModelKind::ModelIII, w) - 1.0 / (1.0 - z).norm()).abs() < 1e-12);
            assert!((weight_omega(ModelKind::ModelIV, w) - 1.0 / (1.0 + z).norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn model_two_single_term_is_constant_density() {
        let s = spec();
        let expect = 1.0 / norm_constant(ModelKind::ModelII, 0, &s);
        assert!((expect - 0.2971772796321697).abs() < 1e-14);
        for &(r, t) in &[(1.5, 0.0), (2.0, 1.1), (2.5, 4.0)] {
            let z = joukowski_forward(oc(r, t));
            let k = kernel_elliptic(ModelKind::ModelII, 1, z, z, &s).unwrap();
            assert!((k.re - expect).abs() < 1e-13 && k.im.abs() < 1e-13);
        }
    }

    #[test]
    fn model_one_single_term() {
        let s = spec();
        let w = oc(2.0, 0.7);
        let k = kernel_elliptic_at(ModelKind::ModelI, 1, w, w, &s).unwrap();
        let expect = weight_omega(ModelKind::ModelI, w.omega()) / (2.0 * PI * (2.5f64 / 1.5).ln());
        assert!((k.re - expect).abs() < 1e-14 * expect);
    }

    #[test]
    fn omega_form_matches_definition() {
        let s = spec();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for model in ModelKind::ALL {
            for n in [1usize, 2, 5, 8, 16] {
                for _ in 0..10 {
                    let w1 = Complex64::from_polar(rng.random_range(1.5..2.5), rng.random_range(0.0..std::f64::consts::TAU));
                    let w2 = Complex64::from_polar(rng.random_range(1.5..2.5), rng.random_range(0.0..std::f64::consts::TAU));
                    let a = EllipticBasis::new(model, &s).kernel_omega(n, w1, w2);
                    let b = kernel_direct(model, n, w1, w2, &s);
                    assert!((a - b).norm() <= 1e-10 * b.norm().max(1e-3), "{model} N={n}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn model_one_eight_terms_diagonal_is_real_positive() {
        let s = spec();
        let w = oc(2.0, 0.3);
        let z = joukowski_forward(w);
        let k = kernel_elliptic(ModelKind::ModelI, 8, z, z, &s).unwrap();
        let direct = kernel_direct(ModelKind::ModelI, 8, w.omega(), w.omega(), &s);
        assert!(k.re > 0.0 && k.im.abs() < 1e-14 * k.re);
        assert!((k - direct).norm() <= 1e-10 * direct.norm());
    }

    #[test]
    fn basis_reproduces_kernel_and_diagonal() {
        let s = spec();
        for model in ModelKind::ALL {
            let basis = EllipticBasis::new(model, &s);
            let w1 = Complex64::from_polar(1.8, 0.4);
            let w2 = Complex64::from_polar(2.3, 2.9);
            let f1 = basis.values(12, w1);
            let f2 = basis.values(12, w2);
            let k: Complex64 = f1.iter().zip(&f2).map(|(a, b)| a * b.conj()).sum();
            let direct = basis.kernel_omega(12, w1, w2);
            assert!((k - direct).norm() <= 1e-12 * direct.norm());
            let d: f64 = f1.iter().map(|a| a.norm_sqr()).sum();
            assert!((d - basis.diagonal_omega(12, w1)).abs() <= 1e-12 * d);
        }
    }

    #[test]
    fn hermitian_and_positive() {
        let s = spec();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for model in ModelKind::ALL {
            for _ in 0..50 {
                let p1 = oc(rng.random_range(1.5..2.5), rng.random_range(0.0..std::f64::consts::TAU));
                let p2 = oc(rng.random_range(1.5..2.5), rng.random_range(0.0..std::f64::consts::TAU));
                let z1 = joukowski_forward(p1);
                let z2 = joukowski_forward(p2);
                let a = kernel_elliptic(model, 9, z1, z2, &s).unwrap();
                let b = kernel_elliptic(model, 9, z2, z1, &s).unwrap();
                assert!((a - b.conj()).norm() <= 1e-12 * a.norm().max(1e-12));
                let d = kernel_elliptic(model, 9, z1, z1, &s).unwrap();
                assert!(d.re > 0.0);
            }
        }
    }

    #[test]
    fn large_n_is_finite() {
        let s = AnnulusSpec::new(1.98, 2.0).unwrap();
        for model in ModelKind::ALL {
            let w1 = oc(1.99, 0.2);
            let w2 = oc(1.995, 0.25);
            let k = kernel_elliptic_at(model, 2000, w1, w2, &s).unwrap();
            assert!(k.re.is_finite() && k.im.is_finite());
        }
    }

    #[test]
    fn domain_errors() {
        let s = spec();
        let inside = joukowski_forward(oc(2.0, 0.1));
        let outside = joukowski_forward(oc(2.7, 0.1));
        assert!(matches!(
            kernel_elliptic(ModelKind::ModelI, 3, inside, outside, &s),
            Err(Error::Domain(_))
        ));
        assert!(kernel_elliptic(ModelKind::ModelI, 3, ComplexPoint::new(0.1, 0.0), inside, &s).is_err());
        assert!(kernel_elliptic(ModelKind::ModelI, 0, inside, inside, &s).is_err());
    }

    #[test]
    fn labels_round_trip() {
        for m in ModelKind::ALL {
            assert_eq!(ModelKind::from_label(m.label()), Some(m));
        }
        assert_eq!(ModelKind::from_label("iv"), Some(ModelKind::ModelIV));
        assert_eq!(ModelKind::from_label("V"), None);
    }
}
