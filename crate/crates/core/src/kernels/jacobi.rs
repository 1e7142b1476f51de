//! Jacobi unitary ensemble on `[-1, 1]` with weight `(1-x)^a (1+x)^b`.

use crate::error::{Error, Result};
use crate::special::ln_gamma;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiSpec {
    a: f64,
    b: f64,
}

impl JacobiSpec {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a > -1.0 && b > -1.0) {
            return Err(Error::InvalidParameter(format!(
                "Jacobi exponents must exceed -1, got a = {a}, b = {b}"
            )));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn weight(&self, x: f64) -> f64 {
        (1.0 - x).powf(self.a) * (1.0 + x).powf(self.b)
    }

    /// `ln` of the factor turning `P_n` into the monic `M_n`:
    /// `2^n n! Gamma(a+b+n+1) / Gamma(a+b+2n+1)`.
    pub fn ln_monic_factor(&self, n: u32) -> f64 {
        if n == 0 {
            return 0.0;
        }
        let nf = n as f64;
        let s = self.a + self.b;
        nf * std::f64::consts::LN_2 + ln_gamma(nf + 1.0) + ln_gamma(s + nf + 1.0) - ln_gamma(s + 2.0 * nf + 1.0)
    }

    /// `ln h_n`, the squared norm of `M_n`.
    pub fn ln_norm(&self, n: u32) -> f64 {
        let (a, b) = (self.a, self.b);
        let s = a + b;
        let nf = n as f64;
        if n == 0 {
            return (s + 1.0) * std::f64::consts::LN_2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0) - ln_gamma(s + 2.0);
        }
        (2.0 * nf + s + 1.0) * std::f64::consts::LN_2
            + ln_gamma(nf + 1.0)
            + ln_gamma(a + nf + 1.0)
            + ln_gamma(b + nf + 1.0)
            + ln_gamma(s + nf + 1.0)
            - ln_gamma(s + 2.0 * nf + 1.0)
            - ln_gamma(s + 2.0 * nf + 2.0)
    }

    pub fn norm_constant(&self, n: u32) -> f64 {
        self.ln_norm(n).exp()
    }

    /// Monic Jacobi polynomial `M_n(x)`.
    pub fn monic(&self, n: u32, x: f64) -> f64 {
        self.ln_monic_factor(n).exp() * jacobi_polynomial(self, n, x)
    }
}

/// Iterates `P_0(x), P_1(x), ...` by the three-term recurrence.
struct JacobiRecurrence {
    a: f64,
    b: f64,
    x: f64,
    n: u32,
    prev: f64,
    cur: f64,
}

impl JacobiRecurrence {
    fn new(spec: &JacobiSpec, x: f64) -> Self {
        Self {
            a: spec.a,
            b: spec.b,
            x,
            n: 0,
            prev: 0.0,
            cur: 1.0,
        }
    }
}

impl Iterator for JacobiRecurrence {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let out = self.cur;
        let (a, b, x) = (self.a, self.b, self.x);
        let next = if self.n == 0 {
            0.5 * (a - b) + 0.5 * (a + b + 2.0) * x
        } else {
            let n = self.n as f64;
            let s = 2.0 * n + a + b;
            let c1 = 2.0 * (n + 1.0) * (n + a + b + 1.0) * s;
            let c2 = (s + 1.0) * ((s + 2.0) * s * x + a * a - b * b);
            let c3 = 2.0 * (n + a) * (n + b) * (s + 2.0);
            (c2 * self.cur - c3 * self.prev) / c1
        };
        self.prev = self.cur;
        self.cur = next;
        self.n += 1;
        Some(out)
    }
}

/// Jacobi polynomial `P_n^{(a,b)}(x)` by the standard three-term recurrence.
pub fn jacobi_polynomial(spec: &JacobiSpec, n: u32, x: f64) -> f64 {
    JacobiRecurrence::new(spec, x)
        .nth(n as usize)
        .expect("recurrence is infinite")
}

/// `K_N(x1, x2) = sqrt(w(x1) w(x2)) sum_{n<N} M_n(x1) M_n(x2) / h_n`.
pub fn kernel_jacobi(spec: &JacobiSpec, n: usize, x1: f64, x2: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("kernel needs N >= 1".into()));
    }
    for x in [x1, x2] {
        if x.is_nan() || x.abs() >= 1.0 {
            return Err(Error::Domain(format!("Jacobi kernel needs |x| < 1, got {x}")));
        }
    }
    let p1 = JacobiRecurrence::new(spec, x1);
    let p2 = JacobiRecurrence::new(spec, x2);
    let sum: f64 = p1
        .zip(p2)
        .take(n)
        .enumerate()
        .map(|(k, (a, b))| {
            let k = k as u32;
            a * b * (2.0 * spec.ln_monic_factor(k) - spec.ln_norm(k)).exp()
        })
        .sum();
    Ok((spec.weight(x1) * spec.weight(x2)).sqrt() * sum)
}
