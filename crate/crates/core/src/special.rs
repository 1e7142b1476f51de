//! Special-function and quadrature-rule support: Gauss-Legendre rules,
//! log-Gamma, `sinc`, and Bessel functions of the first kind for real order
//! `a > -1`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    fn compute(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Cached rule of order `n`.
    pub fn get(n: usize) -> Arc<GaussRule> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussRule>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("gauss rule cache poisoned");
        guard
            .entry(n)
            .or_insert_with(|| Arc::new(GaussRule::compute(n)))
            .clone()
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Integral of a complex function over `[0, 1]` with a 64-node rule and a
/// two-panel refinement. Returns `(refined value, |refined - coarse|)`.
pub fn integrate_unit<F>(f: F) -> (Complex64, f64)
where
    F: Fn(f64) -> Complex64,
{
    let rule = GaussRule::get(64);
    let coarse: Complex64 = rule.mapped(0.0, 1.0).map(|(x, w)| f(x) * w).sum();
    let fine: Complex64 = rule
        .mapped(0.0, 0.5)
        .chain(rule.mapped(0.5, 1.0))
        .map(|(x, w)| f(x) * w)
        .sum();
    (fine, (fine - coarse).norm())
}

/// `ln Gamma(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `sin(x) / x` with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Arguments up to this size use the power series; beyond it, Miller's
/// backward recurrence.
const SERIES_LIMIT: f64 = 2.0;

/// Bessel function of the first kind `J_a(x)` for real order `a > -1`, `x >= 0`.
pub fn bessel_j(a: f64, x: f64) -> f64 {
    debug_assert!(a > -1.0 && x >= 0.0);
    if x == 0.0 {
        return if a == 0.0 {
            1.0
        } else if a > 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
    }
    if x <= SERIES_LIMIT {
        bessel_j_series(a, x)
    } else {
        bessel_j_miller(a, x)
    }
}

fn bessel_j_series(a: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = -half * half;
    // Gamma(a + 1) > 0 for a > -1.
    let mut term = (a * half.ln() - ln_gamma(a + 1.0)).exp();
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * (k + a));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && k > half {
            break;
        }
        if k > 500.0 {
            break;
        }
    }
    sum
}

/// Backward recurrence `J_{nu-1} = (2 nu / x) J_nu - J_{nu+1}` from a high
/// order, normalized through `(x/2)^a = sum_j (a + 2j) Gamma(a + j) / j! J_{a+2j}(x)`.
fn bessel_j_miller(a: f64, x: f64) -> f64 {
    let start = (x + 40.0 + 10.0 * x.cbrt()).ceil() as usize;
    let start = start + start % 2;
    let mut next = 0.0; // J_{a+k+1}
    let mut cur = 1e-300; // J_{a+k}
    let mut norm = 0.0;
    for k in (0..=start).rev() {
        if k % 2 == 0 {
            norm += normalization_weight(a, k / 2) * cur;
        }
        if k == 0 {
            break;
        }
        let nu = a + k as f64;
        let prev = 2.0 * nu / x * cur - next;
        next = cur;
        cur = prev;
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
        }
    }
    let target = (a * (0.5 * x).ln()).exp();
    cur * target / norm
}

fn normalization_weight(a: f64, j: usize) -> f64 {
    if j == 0 {
        // a Gamma(a) = Gamma(a + 1)
        ln_gamma(a + 1.0).exp()
    } else {
        let jf = j as f64;
        (a + 2.0 * jf) * (ln_gamma(a + jf) - ln_gamma(jf + 1.0)).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_rule_integrates_polynomials_exactly() {
        for n in [4usize, 24, 64] {
            let rule = GaussRule::get(n);
            let total: f64 = rule.weights.iter().sum();
            assert!((total - 2.0).abs() < 1e-14);
            for deg in 0..(2 * n) {
                let got: f64 = rule
                    .nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(x, w)| w * x.powi(deg as i32))
                    .sum();
                let expect = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((got - expect).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn gauss_rule_mapped_interval() {
        let rule = GaussRule::get(10);
        let got: f64 = rule.mapped(1.5, 2.5).map(|(r, w)| w / r).sum();
        assert!((got - (2.5f64 / 1.5).ln()).abs() < 1e-14);
    }

    #[test]
    fn integrate_unit_oscillatory() {
        let (v, err) = integrate_unit(|c| Complex64::new(0.0, 30.0 * c).exp());
        let expect = (Complex64::new(0.0, 30.0).exp() - 1.0) / Complex64::new(0.0, 30.0);
        assert!((v - expect).norm() < 1e-14);
        assert!(err < 1e-12);
    }

    #[test]
    fn ln_gamma_values() {
        assert!((ln_gamma(0.5) - PI.sqrt().ln()).abs() < 1e-15);
        assert!((ln_gamma(10.0) - 362880f64.ln()).abs() < 1e-13);
        assert!(ln_gamma(1.0).abs() < 1e-16);
    }

    #[test]
    fn half_integer_orders_match_elementary_forms() {
        for i in 1..=400 {
            let x = 0.05 * i as f64;
            let pref = (2.0 / (PI * x)).sqrt();
            let jm = bessel_j(-0.5, x);
            let jp = bessel_j(0.5, x);
            assert!((jm - pref * x.cos()).abs() < 2e-15 * pref.max(1.0), "x={x} {jm}");
            assert!((jp - pref * x.sin()).abs() < 2e-15 * pref.max(1.0), "x={x} {jp}");
        }
    }

    #[test]
    fn integer_orders_match_libm() {
        for i in 1..=160 {
            let x = 0.25 * i as f64;
            assert!((bessel_j(0.0, x) - libm::j0(x)).abs() < 1e-14, "x={x}");
            assert!((bessel_j(1.0, x) - libm::j1(x)).abs() < 1e-14, "x={x}");
            assert!((bessel_j(3.0, x) - libm::jn(3, x)).abs() < 1e-14, "x={x}");
        }
    }

    #[test]
    fn series_and_recurrence_agree_near_switch() {
        for &a in &[-0.7, -0.3, 0.2, 1.7] {
            for &x in &[0.5, 1.5, 2.0] {
                let s = bessel_j_series(a, x);
                let m = bessel_j_miller(a, x);
                assert!((s - m).abs() < 1e-12, "a={a} x={x}: {s} vs {m}");
            }
        }
    }

    #[test]
    fn small_argument_behaviour() {
        assert_eq!(bessel_j(0.0, 0.0), 1.0);
        assert_eq!(bessel_j(1.5, 0.0), 0.0);
        assert!((bessel_j(0.0, 1e-8) - 1.0).abs() < 1e-15);
        // J_a(x) ~ (x/2)^a / Gamma(a+1)
        let x = 1e-6;
        let lead = (0.3 * (x / 2.0f64).ln() - ln_gamma(1.3)).exp();
        assert!((bessel_j(0.3, x) / lead - 1.0).abs() < 1e-10);
    }

    #[test]
    fn sinc_values() {
        assert_eq!(sinc(0.0), 1.0);
        assert!((sinc(1e-5) - (1e-5f64).sin() / 1e-5).abs() < 1e-15);
        assert!(sinc(PI).abs() < 1e-16);
    }
}
