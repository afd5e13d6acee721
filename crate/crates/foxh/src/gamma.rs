//! Complex gamma machinery: Lanczos `log Γ`, reciprocal gamma, pole residues,
//! and the vertical-line Stirling magnitude estimate.
//!
//! Everything downstream (Mellin–Barnes contours, residue series) reduces to
//! products of gamma values, so this module works in log space wherever
//! magnitudes can overflow and tracks signs separately on the real axis:
//!
//! * `log_gamma` — principal branch on Re z ≥ 1/2 via Lanczos (g = 7, 9
//!   coefficients), reflection `Γ(z)Γ(1−z) = π/sin(πz)` elsewhere,
//! * `reciprocal_gamma` — entire; exactly 0 at the poles 0, −1, −2, …,
//! * `gamma_pole_residue` — `Res_{z=−k} Γ = (−1)^k/k!`,
//! * `stirling_log_magnitude` — `ln|Γ(a+ib)| ≈ ln√(2π) + (a−1/2)ln|b| − π|b|/2`
//!   for |b| → ∞, which controls Bromwich truncation heights.

use num_complex::Complex64;
use std::f64::consts::PI;

/// Distance below which an argument counts as sitting on a gamma pole.
pub const POLE_TOL: f64 = 1e-12;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

const LN_SQRT_2PI: f64 = 0.91893853320467274178;

/// Errors from gamma evaluation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GammaError {
    /// The argument is a non-positive integer (within [`POLE_TOL`]).
    #[error("gamma pole at z = {0}")]
    Pole(f64),
}

/// True when `z` is within `tol` of a non-positive integer.
pub fn is_nonpositive_integer(z: Complex64, tol: f64) -> bool {
    if z.im.abs() > tol || z.re > 0.5 {
        return false;
    }
    (z.re - z.re.round()).abs() <= tol
}

/// `sin(πx)` with exact argument reduction: `sin(π(n+f)) = (−1)^n sin(πf)`.
pub fn sin_pi(x: f64) -> f64 {
    let n = x.round();
    let f = x - n;
    let s = (PI * f).sin();
    if (n as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

fn lanczos_log_gamma(z: Complex64) -> Complex64 {
    // Valid for Re z ≥ 0.5; principal branch (imag part continuous there).
    let z = z - 1.0;
    let mut acc = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + acc.ln()
}

/// `ln sin(πz)`, stable for large |Im z| (where `sin` itself overflows).
/// The branch is only fixed up to 2πi, which is irrelevant for callers that
/// exponentiate afterwards.
fn ln_sin_pi_complex(z: Complex64) -> Complex64 {
    let w = PI * z;
    if w.im.abs() < 20.0 {
        return w.sin().ln();
    }
    let i = Complex64::new(0.0, 1.0);
    if w.im > 0.0 {
        // sin w ≈ (i/2)·e^{−iw}·(1 − e^{2iw})
        (0.5 * i).ln() - i * w + (Complex64::new(1.0, 0.0) - (2.0 * i * w).exp()).ln()
    } else {
        (-0.5 * i).ln() + i * w + (Complex64::new(1.0, 0.0) - (-2.0 * i * w).exp()).ln()
    }
}

/// Principal-branch `ln Γ(z)` on Re z ≥ 1/2; continued by reflection elsewhere
/// (the imaginary part may then jump by multiples of 2π, the real part is exact).
pub fn log_gamma(z: Complex64) -> Result<Complex64, GammaError> {
    if is_nonpositive_integer(z, POLE_TOL) {
        return Err(GammaError::Pole(z.re.round()));
    }
    if z.re >= 0.5 {
        Ok(lanczos_log_gamma(z))
    } else {
        // lnΓ(z) = ln π − ln sin(πz) − lnΓ(1−z)
        Ok(PI.ln() - ln_sin_pi_complex(z) - lanczos_log_gamma(Complex64::new(1.0, 0.0) - z))
    }
}

/// `1/Γ(z)`: entire, exactly zero at the poles of Γ.
pub fn reciprocal_gamma(z: Complex64) -> Complex64 {
    if is_nonpositive_integer(z, POLE_TOL) {
        return Complex64::new(0.0, 0.0);
    }
    if z.re >= 0.5 {
        (-lanczos_log_gamma(z)).exp()
    } else {
        // 1/Γ(z) = sin(πz)·Γ(1−z)/π
        let sin_piz = if z.im == 0.0 {
            Complex64::new(sin_pi(z.re), 0.0)
        } else {
            (ln_sin_pi_complex(z)).exp()
        };
        sin_piz * lanczos_log_gamma(Complex64::new(1.0, 0.0) - z).exp() / PI
    }
}

/// `Res_{z=−k} Γ(z) = (−1)^k / k!`.
pub fn gamma_pole_residue(k: u32) -> f64 {
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    if k <= 20 {
        sign / (1..=k as u64).product::<u64>() as f64
    } else {
        sign * (-ln_factorial(k)).exp()
    }
}

/// `ln k!` via real log-gamma.
pub fn ln_factorial(k: u32) -> f64 {
    ln_abs_gamma(k as f64 + 1.0)
}

/// Large-|b| magnitude estimate `ln|Γ(a+ib)| ≈ ln√(2π) + (a−1/2)ln|b| − π|b|/2`
/// on a vertical line.
pub fn stirling_log_magnitude(a: f64, b: f64) -> f64 {
    LN_SQRT_2PI + (a - 0.5) * b.abs().ln() - PI * b.abs() / 2.0
}

/// `ln|Γ(x)|` for real non-pole `x`.
pub fn ln_abs_gamma(x: f64) -> f64 {
    if x >= 0.5 {
        lanczos_log_gamma(Complex64::new(x, 0.0)).re
    } else {
        // |Γ(x)| = π / (|sin πx|·|Γ(1−x)|)
        PI.ln() - sin_pi(x).abs().ln() - lanczos_log_gamma(Complex64::new(1.0 - x, 0.0)).re
    }
}

/// Sign of `Γ(x)` for real non-pole `x` (+1 or −1).
pub fn gamma_sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if sin_pi(x) > 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// `Γ(x)` for real non-pole `x`; overflows to ±inf beyond ~171.6.
pub fn gamma_real(x: f64) -> f64 {
    gamma_sign(x) * ln_abs_gamma(x).exp()
}

/// Reciprocal gamma on the real line: `1/Γ(x)`, exactly 0 at the poles.
pub fn recip_gamma_real(x: f64) -> f64 {
    if x <= 0.5 {
        let s = sin_pi(x);
        if s == 0.0 {
            return 0.0;
        }
        // 1/Γ(x) = sin(πx)·Γ(1−x)/π
        s.signum() * (s.abs().ln() + ln_abs_gamma(1.0 - x) - PI.ln()).exp()
    } else {
        gamma_sign(x) * (-ln_abs_gamma(x)).exp()
    }
}

/// Digamma ψ(x) by central differences of `ln|Γ|` (step 1e−6); accurate to
/// roughly 1e−9 relative, which is all the order-2 residue terms need.
pub fn digamma(x: f64) -> f64 {
    const H: f64 = 1e-6;
    (ln_abs_gamma(x + H) - ln_abs_gamma(x - H)) / (2.0 * H)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn spot_values() {
        assert!(rel(log_gamma(c(1.0, 0.0)).unwrap().re, 0.0) < 1e-13 || log_gamma(c(1.0, 0.0)).unwrap().re.abs() < 1e-13);
        assert!(rel(log_gamma(c(0.5, 0.0)).unwrap().re, 0.5 * PI.ln()) < 1e-13);
        assert!(rel(log_gamma(c(5.0, 0.0)).unwrap().re, 24.0f64.ln()) < 1e-13);
        // Γ(1/2+3i): |Γ| from tables
        let g = log_gamma(c(0.5, 3.0)).unwrap();
        assert!(rel(g.re, stirling_log_magnitude(0.5, 3.0)) < 2e-3);
    }

    #[test]
    fn conjugate_symmetry() {
        let z = c(2.3, 1.7);
        let a = log_gamma(z).unwrap();
        let b = log_gamma(z.conj()).unwrap();
        assert!((a - b.conj()).norm() < 1e-12);
    }

    #[test]
    fn reflection_identity_random() {
        // Γ(z)Γ(1−z) = π/sin(πz) on 1000 seeded samples, |z| < 10, off the poles.
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut checked = 0;
        while checked < 1000 {
            let z = c(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
            if is_nonpositive_integer(z, 1e-3) || is_nonpositive_integer(Complex64::new(1.0, 0.0) - z, 1e-3) {
                continue;
            }
            let lhs = (log_gamma(z).unwrap() + log_gamma(Complex64::new(1.0, 0.0) - z).unwrap()).exp();
            let rhs = PI / (PI * z).sin();
            assert!(
                (lhs - rhs).norm() / rhs.norm() < 1e-10,
                "reflection failed at {z}: {lhs} vs {rhs}"
            );
            checked += 1;
        }
    }

    #[test]
    fn recurrence_identity_random() {
        // Γ(z+1) = zΓ(z)
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        while checked < 1000 {
            let z = c(rng.gen_range(-8.0..8.0), rng.gen_range(-8.0..8.0));
            if is_nonpositive_integer(z, 1e-3) || z.norm() < 1e-3 {
                continue;
            }
            let lhs = (log_gamma(z + 1.0).unwrap() - log_gamma(z).unwrap()).exp();
            assert!(
                (lhs - z).norm() / z.norm() < 1e-12,
                "recurrence failed at {z}: {lhs}"
            );
            checked += 1;
        }
    }

    #[test]
    fn gauss_multiplication() {
        // ∏_{k=0}^{m−1} Γ(z + k/m) = (2π)^{(m−1)/2} m^{1/2−mz} Γ(mz),  m = 2, 3
        for m in [2u32, 3] {
            let mf = m as f64;
            for i in 0..40 {
                let z = 0.05 + 1.95 * (i as f64) / 39.0;
                let mut lhs = 0.0;
                for k in 0..m {
                    lhs += ln_abs_gamma(z + k as f64 / mf);
                }
                let rhs = 0.5 * (mf - 1.0) * (2.0 * PI).ln() + (0.5 - mf * z) * mf.ln()
                    + ln_abs_gamma(mf * z);
                assert!((lhs - rhs).abs() < 1e-10, "multiplication failed m={m} z={z}");
            }
        }
    }

    #[test]
    fn reciprocal_consistency() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let z = c(rng.gen_range(0.6..9.0), rng.gen_range(-9.0..9.0));
            let direct = reciprocal_gamma(z);
            let via_log = (-log_gamma(z).unwrap()).exp();
            assert!((direct - via_log).norm() / via_log.norm() < 1e-12);
        }
        // exact zeros at the poles
        for k in 0..12 {
            assert_eq!(reciprocal_gamma(c(-(k as f64), 0.0)), c(0.0, 0.0));
        }
    }

    #[test]
    fn pole_residues() {
        assert_eq!(gamma_pole_residue(0), 1.0);
        assert_eq!(gamma_pole_residue(1), -1.0);
        assert!(rel(gamma_pole_residue(3), -1.0 / 6.0) < 1e-14);
        // limit check: (z+k)Γ(z) → (−1)^k/k! near z = −k
        for k in [0u32, 1, 4, 7] {
            let z = c(-(k as f64) + 1e-7, 0.0);
            let g = gamma_sign(z.re) * ln_abs_gamma(z.re).exp();
            let approx = (z.re + k as f64) * g;
            assert!(rel(approx, gamma_pole_residue(k)) < 1e-5, "k={k}");
        }
    }

    #[test]
    fn log_gamma_rejects_poles() {
        assert_eq!(log_gamma(c(0.0, 0.0)), Err(GammaError::Pole(0.0)));
        assert_eq!(log_gamma(c(-3.0, 0.0)), Err(GammaError::Pole(-3.0)));
        assert!(log_gamma(c(-3.0, 0.1)).is_ok());
    }

    #[test]
    fn stirling_vertical_magnitude() {
        // within 1% of the true ln|Γ(1+50i)|, within 5% at (0, 10)
        let exact = log_gamma(c(1.0, 50.0)).unwrap().re;
        assert!(rel(stirling_log_magnitude(1.0, 50.0), exact) < 0.01);
        let exact2 = log_gamma(c(0.0, 10.0)).unwrap().re;
        assert!(rel(stirling_log_magnitude(0.0, 10.0), exact2) < 0.05);
        // slope of ln|Γ(a+ib)| in b approaches −π/2
        let d = (log_gamma(c(1.0, 101.0)).unwrap().re - log_gamma(c(1.0, 100.0)).unwrap().re).abs();
        assert!((d - PI / 2.0).abs() < 0.01);
    }

    #[test]
    fn digamma_values() {
        // ψ(1) = −γ_E
        assert!((digamma(1.0) + 0.5772156649015329).abs() < 1e-8);
        // ψ(1/2) = −γ_E − 2 ln 2
        assert!((digamma(0.5) + 0.5772156649015329 + 2.0 * 2.0f64.ln()).abs() < 1e-8);
        // recurrence ψ(x+1) = ψ(x) + 1/x
        for x in [0.3, 1.7, -2.4] {
            assert!((digamma(x + 1.0) - digamma(x) - 1.0 / x).abs() < 1e-7);
        }
    }

    #[test]
    fn real_sign_tracking() {
        assert_eq!(gamma_sign(0.5), 1.0);
        assert_eq!(gamma_sign(-0.5), -1.0); // Γ(−1/2) = −2√π
        assert_eq!(gamma_sign(-1.5), 1.0);
        assert_eq!(gamma_sign(-2.5), -1.0);
        assert!(rel(gamma_real(-0.5), -2.0 * PI.sqrt()) < 1e-12);
        assert!(rel(gamma_real(4.0), 6.0) < 1e-13);
    }
}
