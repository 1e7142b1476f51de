//! The four Chebyshev kinds evaluated off `[-1, 1]` through `w`, where
//! `z = (w + 1/w) / 2` and `|w| > 1`.
//!
//! | kind   | value at `z`                               | monic form        |
//! |--------|--------------------------------------------|-------------------|
//! | First  | `(w^n + w^-n) / 2`                         | `T_n / 2^(n-1)`   |
//! | Second | `(w^(n+1) - w^-(n+1)) / (w - 1/w)`         | `U_n / 2^n`       |
//! | Third  | `(w^(n+1) + w^-n) / (w + 1)`               | `V_n / 2^n`       |
//! | Fourth | `(w^(n+1) - w^-n) / (w - 1)`               | `W_n / 2^n`       |

use num_complex::Complex64;

use crate::geometry::OmegaCoord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChebyshevKind {
    /// `T_n`
    First,
    /// `U_n`
    Second,
    /// `V_n`
    Third,
    /// `W_n`
    Fourth,
}

impl ChebyshevKind {
    pub const ALL: [ChebyshevKind; 4] = [
        ChebyshevKind::First,
        ChebyshevKind::Second,
        ChebyshevKind::Third,
        ChebyshevKind::Fourth,
    ];

    /// Seeds `(p_0, p_1)` of the three-term recurrence `p_{n+1} = 2 z p_n - p_{n-1}`,
    /// as coefficient vectors in the monomial basis.
    pub fn recurrence_seeds(self) -> ([f64; 1], [f64; 2]) {
        let p1 = match self {
            ChebyshevKind::First => [0.0, 1.0],
            ChebyshevKind::Second => [0.0, 2.0],
            ChebyshevKind::Third => [-1.0, 2.0],
            ChebyshevKind::Fourth => [1.0, 2.0],
        };
        ([1.0], p1)
    }
}

fn pow(w: Complex64, n: i32) -> Complex64 {
    w.powi(n)
}

/// `T_n`, `U_n`, `V_n` or `W_n` at `z = (w + 1/w)/2`.
pub fn chebyshev_eval(kind: ChebyshevKind, n: u32, w: OmegaCoord) -> Complex64 {
    chebyshev_eval_omega(kind, n, w.omega())
}

/// Same as [`chebyshev_eval`] with `w` given directly (`|w| > 1`).
pub fn chebyshev_eval_omega(kind: ChebyshevKind, n: u32, w: Complex64) -> Complex64 {
    let n = n as i32;
    match kind {
        ChebyshevKind::First => 0.5 * (pow(w, n) + pow(w, -n)),
        ChebyshevKind::Second => (pow(w, n + 1) - pow(w, -n - 1)) / (w - w.inv()),
        ChebyshevKind::Third => (pow(w, n + 1) + pow(w, -n)) / (w + 1.0),
        ChebyshevKind::Fourth => (pow(w, n + 1) - pow(w, -n)) / (w - 1.0),
    }
}

/// Monic polynomial `M_n` of the given kind (leading coefficient one).
pub fn monic_eval(kind: ChebyshevKind, n: u32, w: OmegaCoord) -> Complex64 {
    monic_eval_omega(kind, n, w.omega())
}

pub fn monic_eval_omega(kind: ChebyshevKind, n: u32, w: Complex64) -> Complex64 {
    let p = chebyshev_eval_omega(kind, n, w);
    match kind {
        ChebyshevKind::First if n == 0 => Complex64::new(1.0, 0.0),
        ChebyshevKind::First => p / 2f64.powi(n as i32 - 1),
        _ => p / 2f64.powi(n as i32),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{joukowski, OmegaCoord};

    /// Monomial coefficients of `p_n` from the recurrence in `z`.
    fn coefficients(kind: ChebyshevKind, n: usize) -> Vec<f64> {
        let (p0, p1) = kind.recurrence_seeds();
        let mut prev = p0.to_vec();
        let mut cur = p1.to_vec();
        if n == 0 {
            return prev;
        }
        for _ in 1..n {
            let mut next = vec![0.0; cur.len() + 1];
            for (k, c) in cur.iter().enumerate() {
                next[k + 1] += 2.0 * c;
            }
            for (k, c) in prev.iter().enumerate() {
                next[k] -= c;
            }
            prev = cur;
            cur = next;
        }
        cur
    }

    fn horner(coeffs: &[f64], z: Complex64) -> Complex64 {
        coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    fn monic_scale(kind: ChebyshevKind, n: usize) -> f64 {
        match kind {
            ChebyshevKind::First if n == 0 => 1.0,
            ChebyshevKind::First => 2f64.powi(n as i32 - 1),
            _ => 2f64.powi(n as i32),
        }
    }

    fn w(r: f64, t: f64) -> OmegaCoord {
        OmegaCoord::new(r, t).unwrap()
    }

    #[test]
    fn examples() {
        let two = w(2.0, 0.0);
        assert!((chebyshev_eval(ChebyshevKind::First, 2, two) - 2.125).norm() < 1e-14);
        assert!((chebyshev_eval(ChebyshevKind::Third, 1, two) - 1.5).norm() < 1e-14);
        assert!((chebyshev_eval(ChebyshevKind::Second, 0, w(1.3, 0.4)) - 1.0).norm() < 1e-14);
        assert!((monic_eval(ChebyshevKind::First, 0, w(1.7, 2.0)) - 1.0).norm() < 1e-15);
        assert!((monic_eval(ChebyshevKind::First, 3, two) - 1.015625).norm() < 1e-14);
        assert!((monic_eval(ChebyshevKind::Fourth, 1, two) - 1.75).norm() < 1e-14);
    }

    #[test]
    fn monic_first_kind_matches_monomial_oracle() {
        // T_3(z) = 4 z^3 - 3 z
        let z = 1.25f64;
        let expect = (4.0 * z.powi(3) - 3.0 * z) / 4.0;
        let got = monic_eval(ChebyshevKind::First, 3, w(2.0, 0.0));
        assert!((got.re - expect).abs() < 1e-14 && got.im.abs() < 1e-14);
    }

    #[test]
    fn omega_form_matches_recurrence_coefficients() {
        let pts = [w(1.2, 0.3), w(2.0, 2.0), w(3.5, 4.4), w(1.05, 1.6)];
        for kind in ChebyshevKind::ALL {
            for n in 0..=12 {
                let c = coefficients(kind, n);
                for p in pts {
                    let z = joukowski(p.omega());
                    let direct = chebyshev_eval(kind, n as u32, p);
                    let brute = horner(&c, z);
                    assert!(
                        (direct - brute).norm() <= 1e-10 * brute.norm().max(1.0),
                        "{kind:?} n={n}: {direct} vs {brute}"
                    );
                }
            }
        }
    }

    #[test]
    fn monic_leading_coefficient_is_one() {
        for kind in ChebyshevKind::ALL {
            for n in 0..=12 {
                let c = coefficients(kind, n);
                let lead = c[n] / monic_scale(kind, n);
                assert!((lead - 1.0).abs() < 1e-9, "{kind:?} n={n}: {lead}");
            }
        }
    }

    /// Recover the monomial coefficients of `M_n` from its values at `n + 1`
    /// points on a circle `|z| = rho` (discrete Fourier inversion) and check the
    /// leading one.
    #[test]
    fn monic_leading_coefficient_from_values() {
        use std::f64::consts::TAU;
        let rho = 3.0;
        for kind in ChebyshevKind::ALL {
            for n in 0..=12u32 {
                let m = (n + 1) as usize;
                let mut lead = Complex64::new(0.0, 0.0);
                for j in 0..m {
                    let ang = TAU * j as f64 / m as f64;
                    let z = Complex64::from_polar(rho, ang);
                    let s = (z - 1.0).sqrt() * (z + 1.0).sqrt();
                    let om = if (z + s).norm() > 1.0 { z + s } else { z - s };
                    let val = monic_eval_omega(kind, n, om);
                    lead += val * Complex64::from_polar(1.0, -(n as f64) * ang);
                }
                lead /= m as f64 * rho.powi(n as i32);
                assert!((lead - 1.0).norm() < 1e-9, "{kind:?} n={n}: {lead}");
            }
        }
    }

    #[test]
    fn first_and_second_kind_symmetric_under_inversion() {
        for &(r, t) in &[(1.3, 0.2), (2.2, 3.0), (4.0, 5.5)] {
            let om = Complex64::from_polar(r, t);
            for n in 0..10i32 {
                let t_a = 0.5 * (om.powi(n) + om.powi(-n));
                let inv = om.inv();
                let t_b = 0.5 * (inv.powi(n) + inv.powi(-n));
                assert!((t_a - t_b).norm() <= 1e-12 * t_a.norm().max(1.0));
                let u_a = (om.powi(n + 1) - om.powi(-n - 1)) / (om - om.inv());
                let u_b = (inv.powi(n + 1) - inv.powi(-n - 1)) / (inv - inv.inv());
                assert!((u_a - u_b).norm() <= 1e-12 * u_a.norm().max(1.0));
            }
        }
    }

    #[test]
    fn three_term_recurrence_holds() {
        for kind in ChebyshevKind::ALL {
            for &(r, t) in &[(1.1, 0.7), (1.9, 2.9), (3.3, 4.1)] {
                let p = w(r, t);
                let z = joukowski(p.omega());
                for n in 1..15 {
                    let lhs = chebyshev_eval(kind, n + 1, p);
                    let rhs = 2.0 * z * chebyshev_eval(kind, n, p) - chebyshev_eval(kind, n - 1, p);
                    assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm().max(1.0));
                }
            }
        }
    }
}
