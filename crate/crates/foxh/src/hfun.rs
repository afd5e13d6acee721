//! Fox H-function engine.
//!
//! Evaluates `H^{mn}_{νμ}(r) = (1/2πi) ∫_L ℋ(z) r^{−z} dz` where
//!
//! ```text
//!        ∏_{j≤m} Γ(d_j + δ_j z) · ∏_{j≤n} Γ(1 − c_j − γ_j z)
//! ℋ(z) = ──────────────────────────────────────────────────────
//!        ∏_{j>n} Γ(c_j + γ_j z) · ∏_{j>m} Γ(1 − d_j − δ_j z)
//! ```
//!
//! Three routes, selected by the sign of `ω = Σδ_j − Σγ_j` and the size of
//! `r` against `η = ∏γ_j^{−γ_j} ∏δ_j^{δ_j}`:
//!
//! * residue series over the left pole lattice (`ω > 0`, small `r`) or the
//!   negated series over the right lattice (`ω < 0`, large `r`; both sides
//!   when `ω = 0`, split at `r = η`),
//! * direct quadrature along a vertical Bromwich line `Re z = ℓ` with
//!   `d̂₀ < ℓ < ĉ₀` (needs `α* > 0` so the integrand decays like
//!   `exp(−α*π|t|/2)`),
//! * truncated tail expansions in the opposite-side residues with an explicit
//!   remainder order.
//!
//! All gamma products run in log space with separate sign tracking; order-2
//! poles use the analytic derivative of `(z−z₀)²ℋ(z)w(z)` (digamma sums), so
//! each residue is a `(const + log·ln r)·r^{power}` term.
//!
//! An optional polynomial weight `w(z)` multiplies the integrand; callers use
//! it for the `z^q` and rising-factorial weights that encode derivatives.

use crate::gamma::{
    digamma, gamma_sign, is_nonpositive_integer, ln_abs_gamma, ln_factorial, log_gamma,
};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Tolerance for merging pole locations into one lattice site.
pub const COINCIDENCE_TOL: f64 = 1e-10;
/// Tolerance for deciding a gamma argument sits on a non-positive integer.
const ARG_INT_TOL: f64 = 1e-9;
/// Default evaluation tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Hard cap on residue-series terms.
pub const MAX_SERIES_TERMS: usize = 200;

/// Errors from H-function evaluation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HError {
    #[error("invalid H-function spec: {0}")]
    Invalid(ValidationReport),
    #[error("unsupported pole of order {order} at z = {location}")]
    UnsupportedPoleOrder { location: f64, order: u32 },
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("residue series did not converge (achieved ~{achieved:.2e})")]
    SeriesNoConvergence { achieved: f64 },
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
}

/// Problems collected by [`HFunctionSpec::validate`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub problems: Vec<String>,
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.problems.join("; "))
    }
}

/// Parameter block of `H^{mn}_{νμ}`: `upper` holds the ν pairs `(c_j, γ_j)`,
/// `lower` the μ pairs `(d_j, δ_j)`; the first `n` upper and first `m` lower
/// pairs generate numerator gammas.
#[derive(Debug, Clone, PartialEq)]
pub struct HFunctionSpec {
    pub m: usize,
    pub n: usize,
    pub upper: Vec<(f64, f64)>,
    pub lower: Vec<(f64, f64)>,
}

/// Constants controlling contour decay and asymptotics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    /// `α* = Σ_{j≤n}γ − Σ_{j>n}γ + Σ_{j≤m}δ − Σ_{j>m}δ`; vertical decay rate.
    pub alpha_star: f64,
    /// `Λ = Σd_j − Σc_j + (ν−μ)/2`; algebraic growth exponent on verticals.
    pub lambda: f64,
    /// `ω = Σδ_j − Σγ_j`; selects the convergent residue side.
    pub omega: f64,
    /// `η = ∏γ_j^{−γ_j} ∏δ_j^{δ_j}`; radius separating the two sides.
    pub eta: f64,
}

/// One site of the pole lattice after merging and denominator cancellation.
#[derive(Debug, Clone, PartialEq)]
pub struct Pole {
    pub location: f64,
    /// Net order (1 or 2) after cancelling against denominator poles.
    pub order: u32,
    /// Numerator factors sitting on the pole: `(factor index, k)`.
    num_at: Vec<(usize, u32)>,
    /// Denominator factors sitting on the pole.
    den_at: Vec<(usize, u32)>,
}

/// Left lattice sorted decreasing (`d̂₀ > d̂₁ > …`), right lattice increasing.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PoleLattice {
    pub left: Vec<Pole>,
    pub right: Vec<Pole>,
}

/// Which residue lattice a series runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// One residue contribution `(coeff_const + coeff_log·ln r)·r^{power_of_r}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogPolynomialTerm {
    pub power_of_r: f64,
    pub coeff_const: f64,
    pub coeff_log: f64,
}

impl LogPolynomialTerm {
    pub fn eval(&self, r: f64) -> f64 {
        let lr = r.ln();
        (self.coeff_const + self.coeff_log * lr) * (self.power_of_r * lr).exp()
    }
}

/// How a value was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ResidueSeries,
    Bromwich,
    TailExpansion,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Method::ResidueSeries => write!(f, "residue_series"),
            Method::Bromwich => write!(f, "bromwich"),
            Method::TailExpansion => write!(f, "tail_expansion"),
        }
    }
}

/// Evaluation result with an a-posteriori error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub method: Method,
}

/// Truncated opposite-side expansion: `value` plus an `O(r^{−remainder_order})`
/// (large `r`) or `O(r^{remainder_order})` (small `r`) remainder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailExpansion {
    pub value: f64,
    pub remainder_order: f64,
}

/// Real-coefficient polynomial weight `w(z)` for the Mellin–Barnes integrand.
#[derive(Debug, Clone, PartialEq)]
pub struct Weight(Vec<f64>);

impl Weight {
    pub fn one() -> Self {
        Weight(vec![1.0])
    }

    /// `w(z) = z^q`.
    pub fn z_pow(q: u32) -> Self {
        let mut c = vec![0.0; q as usize + 1];
        c[q as usize] = 1.0;
        Weight(c)
    }

    /// Rising factorial `w(z) = z(z+1)⋯(z+q−1)`; `q = 0` gives 1.
    pub fn rising_factorial(q: u32) -> Self {
        let mut w = Weight::one();
        for j in 0..q {
            w = w.mul_linear(j as f64); // multiply by (z + j)
        }
        w
    }

    fn mul_linear(&self, a: f64) -> Self {
        // (Σ c_i z^i)(z + a)
        let mut out = vec![0.0; self.0.len() + 1];
        for (i, &c) in self.0.iter().enumerate() {
            out[i] += c * a;
            out[i + 1] += c;
        }
        Weight(out)
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    fn eval_real(&self, z: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.0.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    fn deriv_real(&self, z: f64) -> f64 {
        let mut acc = 0.0;
        for (i, &c) in self.0.iter().enumerate().skip(1).rev() {
            acc = acc * z + c * i as f64;
        }
        acc
    }

    fn eval_complex(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.0.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }
}

/// Γ(a + b·z), numerator or denominator of ℋ.
#[derive(Debug, Clone, Copy)]
struct Factor {
    a: f64,
    b: f64,
    num: bool,
}

enum LogHIssue {
    /// A denominator gamma sits on a pole: ℋ = 0 there.
    DenPole,
    /// A numerator gamma sits on a pole: ℋ is singular there.
    NumPole,
}

impl HFunctionSpec {
    /// Structural checks: counts, positive slopes, and the pole-separation
    /// condition `max_{j≤m}(−d_j/δ_j) < min_{j≤n}((1−c_j)/γ_j)`.
    pub fn validate(&self) -> Result<(), ValidationReport> {
        let mut problems = Vec::new();
        if self.m > self.lower.len() {
            problems.push(format!("m = {} exceeds μ = {}", self.m, self.lower.len()));
        }
        if self.n > self.upper.len() {
            problems.push(format!("n = {} exceeds ν = {}", self.n, self.upper.len()));
        }
        for (j, &(c, g)) in self.upper.iter().enumerate() {
            if !(g > 0.0) || !c.is_finite() || !g.is_finite() {
                problems.push(format!("upper[{j}] = ({c}, {g}) needs finite c and γ > 0"));
            }
        }
        for (j, &(d, del)) in self.lower.iter().enumerate() {
            if !(del > 0.0) || !d.is_finite() || !del.is_finite() {
                problems.push(format!("lower[{j}] = ({d}, {del}) needs finite d and δ > 0"));
            }
        }
        if problems.is_empty() && self.m > 0 && self.n > 0 {
            let left_max = self.lower[..self.m]
                .iter()
                .map(|&(d, del)| -d / del)
                .fold(f64::NEG_INFINITY, f64::max);
            let right_min = self.upper[..self.n]
                .iter()
                .map(|&(c, g)| (1.0 - c) / g)
                .fold(f64::INFINITY, f64::min);
            if left_max >= right_min {
                problems.push(format!(
                    "pole separation violated: max(−d_j/δ_j) = {left_max} ≥ min((1−c_j)/γ_j) = {right_min}"
                ));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(ValidationReport { problems })
        }
    }

    pub fn derived_constants(&self) -> DerivedConstants {
        let nu = self.upper.len();
        let mu = self.lower.len();
        let mut alpha_star = 0.0;
        let mut lambda = (nu as f64 - mu as f64) / 2.0;
        let mut omega = 0.0;
        let mut ln_eta = 0.0;
        for (j, &(c, g)) in self.upper.iter().enumerate() {
            alpha_star += if j < self.n { g } else { -g };
            lambda -= c;
            omega -= g;
            ln_eta -= g * g.ln();
        }
        for (j, &(d, del)) in self.lower.iter().enumerate() {
            alpha_star += if j < self.m { del } else { -del };
            lambda += d;
            omega += del;
            ln_eta += del * del.ln();
        }
        DerivedConstants {
            alpha_star,
            lambda,
            omega,
            eta: ln_eta.exp(),
        }
    }

    fn factors(&self) -> Vec<Factor> {
        let mut f = Vec::with_capacity(self.upper.len() + self.lower.len());
        for (j, &(d, del)) in self.lower.iter().enumerate() {
            if j < self.m {
                f.push(Factor { a: d, b: del, num: true });
            } else {
                f.push(Factor { a: 1.0 - d, b: -del, num: false });
            }
        }
        for (j, &(c, g)) in self.upper.iter().enumerate() {
            if j < self.n {
                f.push(Factor { a: 1.0 - c, b: -g, num: true });
            } else {
                f.push(Factor { a: c, b: g, num: false });
            }
        }
        f
    }

    /// Enumerate both pole lattices down to `depth` poles per numerator gamma,
    /// merging coincident locations (within [`COINCIDENCE_TOL`]) and dropping
    /// sites fully cancelled by denominator poles. Net order > 2 is rejected.
    pub fn pole_lattice(&self, depth: usize) -> Result<PoleLattice, HError> {
        let factors = self.factors();
        let mut candidates: Vec<f64> = Vec::new();
        for f in factors.iter().filter(|f| f.num) {
            for k in 0..depth {
                candidates.push(-(f.a + k as f64) / f.b);
            }
        }
        candidates.sort_by(|x, y| x.partial_cmp(y).unwrap());
        candidates.dedup_by(|a, b| (*a - *b).abs() <= COINCIDENCE_TOL);

        let mut lattice = PoleLattice::default();
        for z0 in candidates {
            let mut num_at = Vec::new();
            let mut den_at = Vec::new();
            for (i, f) in factors.iter().enumerate() {
                let u = f.a + f.b * z0;
                let k = (-u).round();
                if (u + k).abs() <= ARG_INT_TOL && k >= -0.5 {
                    let k = k.max(0.0) as u32;
                    if f.num {
                        num_at.push((i, k));
                    } else {
                        den_at.push((i, k));
                    }
                }
            }
            if num_at.len() <= den_at.len() {
                continue; // removable: fully cancelled by denominator zeros
            }
            let order = (num_at.len() - den_at.len()) as u32;
            if order > 2 {
                return Err(HError::UnsupportedPoleOrder { location: z0, order });
            }
            let pole = Pole { location: z0, order, num_at, den_at };
            // left sites come from slopes b > 0 and march to −∞, right to +∞;
            // classify by which numerator factor produced them
            let left = factors[pole.num_at[0].0].b > 0.0;
            if left {
                lattice.left.push(pole);
            } else {
                lattice.right.push(pole);
            }
        }
        lattice.left.sort_by(|p, q| q.location.partial_cmp(&p.location).unwrap());
        lattice.right.sort_by(|p, q| p.location.partial_cmp(&q.location).unwrap());
        Ok(lattice)
    }

    /// Residue of `ℋ(z)·r^{−z}` at a lattice site, as a log-polynomial term.
    pub fn residue_term(&self, pole: &Pole) -> LogPolynomialTerm {
        self.residue_term_weighted(pole, &Weight::one())
    }

    /// Residue of `ℋ(z)·w(z)·r^{−z}` at a lattice site. For order-2 sites the
    /// coefficients come from `d/dz[(z−z₀)²ℋ(z)w(z)r^{−z}]`, which yields the
    /// `(κ − κ̂·ln r)·r^{−z₀}` structure with `κ̂ = lim (z−z₀)²ℋ(z)w(z)`.
    pub fn residue_term_weighted(&self, pole: &Pole, weight: &Weight) -> LogPolynomialTerm {
        let factors = self.factors();
        let z0 = pole.location;
        let mut ln_mag = 0.0;
        let mut sign = 1.0;
        // leading coefficient B(z₀) of (z−z₀)^order·ℋ(z)
        for &(i, k) in &pole.num_at {
            let f = &factors[i];
            ln_mag -= ln_factorial(k) + f.b.abs().ln();
            sign *= f.b.signum() * if k % 2 == 0 { 1.0 } else { -1.0 };
        }
        for &(i, k) in &pole.den_at {
            let f = &factors[i];
            ln_mag += ln_factorial(k) + f.b.abs().ln();
            sign *= f.b.signum() * if k % 2 == 0 { 1.0 } else { -1.0 };
        }
        let at_pole: Vec<usize> = pole
            .num_at
            .iter()
            .chain(pole.den_at.iter())
            .map(|&(i, _)| i)
            .collect();
        for (i, f) in factors.iter().enumerate() {
            if at_pole.contains(&i) {
                continue;
            }
            let u = f.a + f.b * z0;
            let lg = ln_abs_gamma(u);
            if f.num {
                ln_mag += lg;
            } else {
                ln_mag -= lg;
            }
            sign *= gamma_sign(u);
        }
        let b_val = sign * ln_mag.exp();

        if pole.order == 1 {
            return LogPolynomialTerm {
                power_of_r: -z0,
                coeff_const: b_val * weight.eval_real(z0),
                coeff_log: 0.0,
            };
        }

        // order 2: logarithmic derivative of B(z) at z₀
        let mut logderiv = 0.0;
        for &(i, k) in &pole.num_at {
            logderiv += factors[i].b * digamma(k as f64 + 1.0);
        }
        for &(i, k) in &pole.den_at {
            logderiv -= factors[i].b * digamma(k as f64 + 1.0);
        }
        for (i, f) in factors.iter().enumerate() {
            if at_pole.contains(&i) {
                continue;
            }
            let u = f.a + f.b * z0;
            let term = f.b * digamma(u);
            if f.num {
                logderiv += term;
            } else {
                logderiv -= term;
            }
        }
        let w0 = weight.eval_real(z0);
        let w1 = weight.deriv_real(z0);
        LogPolynomialTerm {
            power_of_r: -z0,
            coeff_const: b_val * (logderiv * w0 + w1),
            coeff_log: -b_val * w0,
        }
    }

    /// Sum the residue series over one lattice side: `+Σ` over left poles or
    /// `−Σ` over right poles. Stops once three consecutive terms fall below
    /// `tol·|partial sum|`; errs after [`MAX_SERIES_TERMS`].
    pub fn eval_residue_series(&self, side: Side, r: f64, tol: f64) -> Result<EvalResult, HError> {
        self.eval_residue_series_weighted(side, r, tol, &Weight::one())
    }

    pub fn eval_residue_series_weighted(
        &self,
        side: Side,
        r: f64,
        tol: f64,
        weight: &Weight,
    ) -> Result<EvalResult, HError> {
        if !(r > 0.0) {
            return Err(HError::Unsupported(format!("r = {r} must be positive")));
        }
        let lattice = self.pole_lattice(MAX_SERIES_TERMS + 8)?;
        let (poles, overall) = match side {
            Side::Left => (&lattice.left, 1.0),
            Side::Right => (&lattice.right, -1.0),
        };
        if poles.is_empty() {
            // empty lattice: the series is exactly zero (e.g. H ≡ entire side)
            return Ok(EvalResult {
                value: 0.0,
                abs_error_estimate: 0.0,
                method: Method::ResidueSeries,
            });
        }
        let mut sum = 0.0f64;
        let mut comp = 0.0; // Kahan compensation
        let mut max_abs = 0.0f64;
        let mut small_streak = 0;
        let mut last_abs = f64::INFINITY;
        for (count, pole) in poles.iter().enumerate() {
            if count >= MAX_SERIES_TERMS {
                return Err(HError::SeriesNoConvergence {
                    achieved: last_abs / sum.abs().max(f64::MIN_POSITIVE),
                });
            }
            let term = overall * self.residue_term_weighted(pole, weight).eval(r);
            if !term.is_finite() {
                return Err(HError::NonFinite(format!(
                    "residue term at z = {} for r = {r}",
                    pole.location
                )));
            }
            let y = term - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
            last_abs = term.abs();
            max_abs = max_abs.max(last_abs);
            if last_abs <= tol * sum.abs().max(f64::MIN_POSITIVE) {
                small_streak += 1;
                if small_streak >= 3 {
                    return Ok(EvalResult {
                        value: sum,
                        abs_error_estimate: last_abs + f64::EPSILON * max_abs,
                        method: Method::ResidueSeries,
                    });
                }
            } else {
                small_streak = 0;
            }
        }
        // lattice exhausted; accept only if the trailing terms had collapsed
        if last_abs <= tol * sum.abs().max(f64::MIN_POSITIVE) || last_abs == 0.0 {
            Ok(EvalResult {
                value: sum,
                abs_error_estimate: last_abs + f64::EPSILON * max_abs,
                method: Method::ResidueSeries,
            })
        } else {
            Err(HError::SeriesNoConvergence {
                achieved: last_abs / sum.abs().max(f64::MIN_POSITIVE),
            })
        }
    }

    fn log_h(&self, factors: &[Factor], z: Complex64) -> Result<Complex64, LogHIssue> {
        let mut s = Complex64::new(0.0, 0.0);
        for f in factors {
            let u = Complex64::new(f.a + f.b * z.re, f.b * z.im);
            match log_gamma(u) {
                Ok(lg) => {
                    if f.num {
                        s += lg;
                    } else {
                        s -= lg;
                    }
                }
                Err(_) => {
                    return Err(if f.num { LogHIssue::NumPole } else { LogHIssue::DenPole });
                }
            }
        }
        Ok(s)
    }

    /// Pick the Bromwich abscissa. Bounded windows use the clipped midpoint;
    /// windows unbounded on one side search for the magnitude saddle of the
    /// real-axis integrand (that is what keeps `e^{−r}`-type tails free of
    /// cancellation at large `r`).
    fn choose_ell(&self, lattice: &PoleLattice, r: f64, wdeg: usize) -> f64 {
        let lo = lattice.left.first().map(|p| p.location);
        let hi = lattice.right.first().map(|p| p.location);
        match (lo, hi) {
            (Some(lo), Some(hi)) => {
                let g = hi - lo;
                lo + 0.5 * g
            }
            (None, None) => 0.0,
            _ => {
                let factors = self.factors();
                let phi = |ell: f64| -> f64 {
                    let z = Complex64::new(ell, 0.5);
                    match self.log_h(&factors, z) {
                        Ok(lh) => {
                            lh.re + wdeg as f64 * (1.0 + z.norm()).ln() - ell * r.ln()
                        }
                        Err(_) => f64::INFINITY,
                    }
                };
                let mut best = f64::INFINITY;
                let mut best_ell = match (lo, hi) {
                    (Some(lo), None) => lo + 1.0,
                    (None, Some(hi)) => hi - 1.0,
                    _ => unreachable!(),
                };
                for j in 0..48 {
                    let off = 0.1 * 1.3f64.powi(j);
                    if off > 2.0e4 {
                        break;
                    }
                    let ell = match (lo, hi) {
                        (Some(lo), None) => lo + off,
                        (None, Some(hi)) => hi - off,
                        _ => unreachable!(),
                    };
                    let v = phi(ell);
                    if v < best {
                        best = v;
                        best_ell = ell;
                    }
                }
                best_ell
            }
        }
    }

    /// Bromwich-line quadrature at an explicit abscissa `ell` (exposed so the
    /// contour-invariance checks can pin the line).
    pub fn eval_bromwich_at(
        &self,
        r: f64,
        tol: f64,
        ell: f64,
        weight: &Weight,
    ) -> Result<EvalResult, HError> {
        if !(r > 0.0) {
            return Err(HError::Unsupported(format!("r = {r} must be positive")));
        }
        let dc = self.derived_constants();
        if dc.alpha_star <= 0.0 {
            return Err(HError::Unsupported(format!(
                "bromwich contour needs α* > 0, got {}",
                dc.alpha_star
            )));
        }
        let factors = self.factors();
        let wdeg = weight.degree();

        // scale offset so the exponentials stay in range
        let zk = Complex64::new(ell, 0.7);
        let k_off = match self.log_h(&factors, zk) {
            Ok(lh) => (lh - zk * r.ln()).re,
            Err(_) => 0.0,
        };
        let k_off = if k_off.is_finite() { k_off } else { 0.0 };

        // truncation height: solve exp(−α*πT/2)·T^{ωℓ+Λ+deg}·(η/r)^ℓ·e^{−ωℓ} = tol/10
        let ln_pref = ell * (dc.eta.ln() - r.ln()) - dc.omega * ell;
        let growth = (dc.omega * ell + dc.lambda + wdeg as f64).max(0.0);
        let target = (tol / 10.0).max(1e-17).ln();
        let mut height = 10.0f64;
        for _ in 0..8 {
            height = (2.0 / (dc.alpha_star * PI)) * (ln_pref - target + growth * height.ln());
            height = height.clamp(8.0, 4000.0);
        }
        // The Stirling model only bites for b ≫ |ℓ|, so with a far-out saddle
        // abscissa it can under-predict the density; probe the integrand and
        // extend until the (normalized) tail is genuinely below target.
        let probe = |b: f64| -> f64 {
            let z = Complex64::new(ell, b);
            match self.log_h(&factors, z) {
                Ok(lh) => {
                    (lh - z * r.ln() - k_off).re
                        + weight.eval_complex(z).norm().max(1e-300).ln()
                }
                Err(_) => f64::NEG_INFINITY,
            }
        };
        // normalized by k_off the integrand is O(1), so this target makes tol
        // a *relative* accuracy at the contour's natural scale
        let ln_target = target + (dc.alpha_star * PI / 2.0).ln();
        for _ in 0..60 {
            if height >= 4000.0 || probe(height).max(probe(1.21 * height)) <= ln_target {
                break;
            }
            height *= 1.35;
        }
        let tail_density = probe(height).max(probe(1.21 * height));
        let tail_bound = (tail_density + (2.0 / (dc.alpha_star * PI)).ln()).exp();

        let integrand = |b: f64| -> Result<f64, HError> {
            let z = Complex64::new(ell, b);
            match self.log_h(&factors, z) {
                Ok(lh) => {
                    let v = (lh - z * r.ln() - k_off).exp() * weight.eval_complex(z);
                    if v.re.is_finite() {
                        Ok(v.re)
                    } else {
                        Err(HError::NonFinite(format!("integrand at b = {b}")))
                    }
                }
                Err(LogHIssue::DenPole) => Ok(0.0),
                Err(LogHIssue::NumPole) => Err(HError::NonFinite(format!(
                    "contour touches a numerator pole at Re z = {ell}"
                ))),
            }
        };

        let (nodes, weights) = gauss_legendre_20();
        let integrate = |w: f64| -> Result<(f64, f64), HError> {
            let mut total = 0.0;
            let mut l1 = 0.0;
            let mut b0 = 0.0;
            while b0 < height {
                let b1 = (b0 + w).min(height);
                let half = 0.5 * (b1 - b0);
                let mid = 0.5 * (b0 + b1);
                for (x, wt) in nodes.iter().zip(weights.iter()) {
                    let v = integrand(mid + half * x)?;
                    total += wt * half * v;
                    l1 += wt * half * v.abs();
                }
                b0 = b1;
            }
            Ok((total, l1))
        };

        let mut width = (1.0f64).min(8.0 / (1.0 + r.ln().abs())).min(height / 4.0);
        let (mut prev, mut l1) = integrate(width)?;
        let mut delta = f64::INFINITY;
        for _ in 0..10 {
            width /= 2.0;
            let (cur, cur_l1) = integrate(width)?;
            delta = (cur - prev).abs();
            prev = cur;
            l1 = cur_l1;
            if delta <= (tol / 4.0).max(4.0 * f64::EPSILON * l1.max(1.0)) {
                break;
            }
        }
        let scale = (k_off).exp();
        Ok(EvalResult {
            value: scale * prev / PI,
            abs_error_estimate: scale * (delta + tail_bound + f64::EPSILON * l1) / PI,
            method: Method::Bromwich,
        })
    }

    /// Bromwich quadrature with an automatically chosen abscissa.
    pub fn eval_bromwich(&self, r: f64, tol: f64) -> Result<EvalResult, HError> {
        self.eval_bromwich_weighted(r, tol, &Weight::one())
    }

    pub fn eval_bromwich_weighted(
        &self,
        r: f64,
        tol: f64,
        weight: &Weight,
    ) -> Result<EvalResult, HError> {
        let lattice = self.pole_lattice(8)?;
        let ell = self.choose_ell(&lattice, r, weight.degree());
        self.eval_bromwich_at(r, tol, ell, weight)
    }

    /// Evaluate `H(r)`, dispatching between the residue series (well inside
    /// its side: `r ≤ η/2` on the left, `r ≥ 2η` on the right) and the
    /// Bromwich contour, with fallback from a non-converging series.
    pub fn eval(&self, r: f64, tol: f64) -> Result<EvalResult, HError> {
        self.eval_weighted(r, tol, &Weight::one())
    }

    pub fn eval_weighted(&self, r: f64, tol: f64, weight: &Weight) -> Result<EvalResult, HError> {
        if let Err(report) = self.validate() {
            return Err(HError::Invalid(report));
        }
        if !(r > 0.0) || !r.is_finite() {
            return Err(HError::Unsupported(format!("r = {r} must be positive and finite")));
        }
        let dc = self.derived_constants();
        const OMEGA_TOL: f64 = 1e-12;
        let series_side = if dc.omega > OMEGA_TOL && r <= dc.eta / 2.0 {
            Some(Side::Left)
        } else if dc.omega < -OMEGA_TOL && r >= 2.0 * dc.eta {
            Some(Side::Right)
        } else if dc.omega.abs() <= OMEGA_TOL {
            if r <= dc.eta / 2.0 {
                Some(Side::Left)
            } else if r >= 2.0 * dc.eta {
                Some(Side::Right)
            } else {
                None
            }
        } else {
            None
        };
        match series_side {
            Some(side) => match self.eval_residue_series_weighted(side, r, tol, weight) {
                Ok(res) => Ok(res),
                Err(_) if dc.alpha_star > 0.0 => self.eval_bromwich_weighted(r, tol, weight),
                Err(e) => Err(e),
            },
            None => {
                if dc.alpha_star > 0.0 {
                    self.eval_bromwich_weighted(r, tol, weight)
                } else if dc.omega.abs() > OMEGA_TOL {
                    // convergent (if slowly) series still exists on one side
                    let side = if dc.omega > 0.0 { Side::Left } else { Side::Right };
                    self.eval_residue_series_weighted(side, r, tol, weight)
                } else {
                    Err(HError::Unsupported(
                        "α* ≤ 0 and no residue branch applies".into(),
                    ))
                }
            }
        }
    }

    /// Truncated expansion in the first `p+1` opposite-side residues:
    ///
    /// * large `r` (right lattice): `H(r) = −Σ_{k=0}^{p} Res_{ĉ_k} + O(r^{−M})`,
    /// * small `r` (left lattice):  `H(r) = +Σ_{k=0}^{p} Res_{d̂_k} + O(r^{M})`,
    ///
    /// with the reported remainder order `M` the next lattice location. The
    /// signs match the exact one-sided sums (see the dual-path tests); the
    /// side is picked from `ω` (`ω = 0` splits at `r = η`).
    pub fn tail_expansion(&self, r: f64, p: usize) -> Result<TailExpansion, HError> {
        let dc = self.derived_constants();
        if dc.alpha_star <= 0.0 {
            return Err(HError::Unsupported("tail expansion needs α* > 0".into()));
        }
        const OMEGA_TOL: f64 = 1e-12;
        let large_r = if dc.omega > OMEGA_TOL {
            true
        } else if dc.omega < -OMEGA_TOL {
            false
        } else {
            r >= dc.eta
        };
        let lattice = self.pole_lattice(p + 8)?;
        let (poles, overall) = if large_r {
            (&lattice.right, -1.0)
        } else {
            (&lattice.left, 1.0)
        };
        if poles.len() < p + 2 {
            return Err(HError::Unsupported(format!(
                "lattice has only {} poles, need {} for p = {p}",
                poles.len(),
                p + 2
            )));
        }
        let mut value = 0.0;
        for pole in poles.iter().take(p + 1) {
            value += overall * self.residue_term(pole).eval(r);
        }
        let remainder_order = poles[p + 1].location.abs();
        Ok(TailExpansion { value, remainder_order })
    }

    /// Log-scale exponential decay envelope for `n = 0`, `α* > 0`, `ω > 0`:
    ///
    /// `ln env(r) = ((Λ+1/2)/ω)·ln r + cos((α* + Σ_{j>m} δ_j)·π/ω)·ω·(r/η)^{1/ω}`.
    pub fn exp_decay_envelope(&self, r: f64) -> Result<f64, HError> {
        let dc = self.derived_constants();
        if self.n != 0 {
            return Err(HError::Unsupported(format!(
                "exponential envelope needs n = 0, got n = {}",
                self.n
            )));
        }
        if dc.alpha_star <= 0.0 || dc.omega <= 0.0 {
            return Err(HError::Unsupported(format!(
                "exponential envelope needs α* > 0 and ω > 0, got α* = {}, ω = {}",
                dc.alpha_star, dc.omega
            )));
        }
        let extra: f64 = self.lower[self.m..].iter().map(|&(_, del)| del).sum();
        let angle = (dc.alpha_star + extra) * PI / dc.omega;
        Ok((dc.lambda + 0.5) / dc.omega * r.ln()
            + angle.cos() * dc.omega * (r / dc.eta).powf(1.0 / dc.omega))
    }

    /// Independent residue oracle: trapezoidal average of
    /// `ℋ(z)w(z)r^{−z}(z−z₀)` on a small circle around `z₀` (spectrally
    /// accurate for the closed contour). Used to cross-check `residue_term`.
    pub fn contour_residue_average(
        &self,
        z0: f64,
        radius: f64,
        r: f64,
        weight: &Weight,
        points: usize,
    ) -> Result<f64, HError> {
        let factors = self.factors();
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..points {
            let theta = 2.0 * PI * (j as f64 + 0.5) / points as f64;
            let dz = radius * Complex64::new(theta.cos(), theta.sin());
            let z = Complex64::new(z0, 0.0) + dz;
            let lh = match self.log_h(&factors, z) {
                Ok(lh) => lh,
                Err(LogHIssue::DenPole) => continue,
                Err(LogHIssue::NumPole) => {
                    return Err(HError::NonFinite("circle touches a pole".into()))
                }
            };
            acc += (lh - z * r.ln()).exp() * weight.eval_complex(z) * dz;
        }
        Ok(acc.re / points as f64)
    }
}

/// 20-point Gauss–Legendre nodes and weights on [−1, 1], computed once by
/// Newton iteration on the Legendre recurrence.
fn gauss_legendre_20() -> (&'static [f64], &'static [f64]) {
    static CACHE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    let (n, w) = CACHE.get_or_init(|| {
        let n = 20usize;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n {
            // Chebyshev-like initial guess
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                // evaluate P_n and P_n' by recurrence
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    });
    (n, w)
}

/// Re-export of the argument/pole helper for spec-level call sites.
pub fn near_nonpositive_integer(x: f64, tol: f64) -> bool {
    is_nonpositive_integer(Complex64::new(x, 0.0), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::{gamma_real, ln_abs_gamma};

    /// ℋ(z) = Γ(z):  H(r) = e^{−r}.
    fn exp_spec() -> HFunctionSpec {
        HFunctionSpec { m: 1, n: 0, upper: vec![], lower: vec![(0.0, 1.0)] }
    }

    /// ℋ(z) = Γ(1/2+z):  H(r) = √r·e^{−r}.
    fn sqrt_exp_spec() -> HFunctionSpec {
        HFunctionSpec { m: 1, n: 0, upper: vec![], lower: vec![(0.5, 1.0)] }
    }

    /// ℋ(z) = Γ(a+z)Γ(1−z):  H(r) = Γ(a+1)·r^a/(1+r)^{a+1}  (ω = 0, η = 1).
    fn beta_spec(a: f64) -> HFunctionSpec {
        HFunctionSpec { m: 1, n: 1, upper: vec![(0.0, 1.0)], lower: vec![(a, 1.0)] }
    }

    fn beta_closed(a: f64, r: f64) -> f64 {
        gamma_real(a + 1.0) * r.powf(a) / (1.0 + r).powf(a + 1.0)
    }

    /// Kernel-shaped spec: ℋ = Γ(d/2+γ+βz)Γ(1+z)Γ(−z)/(Γ(−γ−βz)Γ(1−σ+αz)).
    fn kernel_spec(d: f64, alpha: f64, beta: f64, gamma: f64, sigma: f64) -> HFunctionSpec {
        HFunctionSpec {
            m: 2,
            n: 1,
            upper: vec![(1.0, 1.0), (1.0 - sigma, alpha)],
            lower: vec![(d / 2.0 + gamma, beta), (1.0, 1.0), (1.0 + gamma, beta)],
        }
    }

    #[test]
    fn validate_catches_bad_specs() {
        let mut s = exp_spec();
        s.m = 2;
        assert!(s.validate().is_err());
        // separation violated: left pole at 2 right of upper bound 1
        let s = HFunctionSpec { m: 1, n: 1, upper: vec![(0.0, 1.0)], lower: vec![(-2.0, 1.0)] };
        assert!(s.validate().is_err());
        let s = HFunctionSpec { m: 1, n: 0, upper: vec![], lower: vec![(0.0, -1.0)] };
        assert!(s.validate().is_err());
        assert!(kernel_spec(2.0, 0.7, 1.1, 0.3, 0.2).validate().is_ok());
    }

    #[test]
    fn derived_constants_kernel() {
        let (d, alpha, beta, gamma, sigma) = (2.0, 0.7, 1.1, 0.3, 0.2);
        let dc = kernel_spec(d, alpha, beta, gamma, sigma).derived_constants();
        assert!((dc.alpha_star - (2.0 - alpha)).abs() < 1e-14);
        assert!((dc.lambda - (d / 2.0 + 2.0 * gamma + sigma - 0.5)).abs() < 1e-14);
        assert!((dc.omega - (2.0 * beta - alpha)).abs() < 1e-14);
        assert!((dc.eta - alpha.powf(-alpha) * beta.powf(2.0 * beta)).abs() < 1e-12);
        // heat-equation corner: α* = 1, Λ = d/2 − 1/2, ω = 1, η = 1
        let dc = kernel_spec(3.0, 1.0, 1.0, 0.0, 0.0).derived_constants();
        assert!((dc.alpha_star - 1.0).abs() < 1e-14);
        assert!((dc.lambda - 1.0).abs() < 1e-14);
        assert!((dc.omega - 1.0).abs() < 1e-14);
        assert!((dc.eta - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pole_lattice_kernel_generic() {
        let s = kernel_spec(2.0, 0.7, 1.1, 0.3, 0.2);
        let lat = s.pole_lattice(12).unwrap();
        // left sites: −1−k from Γ(1+z) interleaved with −(d/2+γ+k)/β,
        // sorted decreasing: −1 > −1.3/1.1; the accidental coincidence
        // 1.3 + 2 = 1.1·3 makes z = −3 an order-2 site
        assert!((lat.left[0].location + 1.0).abs() < 1e-12);
        assert!((lat.left[1].location + (1.0 + 0.3) / 1.1).abs() < 1e-12);
        assert!(lat.left.iter().take(4).all(|p| p.order == 1));
        let at_m3 = lat.left.iter().find(|p| (p.location + 3.0).abs() < 1e-9).unwrap();
        assert_eq!(at_m3.order, 2);
        // right sites: 0, 1, 2, …
        assert!((lat.right[0].location - 0.0).abs() < 1e-12);
        assert!((lat.right[1].location - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pole_lattice_merges_and_prunes() {
        // order-2 coincidence: d = 1, γ = 0.75, β = 1.25 puts −(d/2+γ)/β = −1
        // on top of the Γ(1+z) pole
        let s = kernel_spec(1.0, 0.7, 1.25, 0.75, 0.2);
        let lat = s.pole_lattice(12).unwrap();
        let at_m1 = lat.left.iter().find(|p| (p.location + 1.0).abs() < 1e-9).unwrap();
        assert_eq!(at_m1.order, 2);
        // denominator cancellation: ℋ = Γ(0.5+z)Γ(1−z)/Γ(1−z) has an empty
        // right lattice
        let s = HFunctionSpec {
            m: 1,
            n: 1,
            upper: vec![(0.0, 1.0)],
            lower: vec![(0.5, 1.0), (0.0, 1.0)],
        };
        let lat = s.pole_lattice(12).unwrap();
        assert!(lat.right.is_empty());
        assert!(!lat.left.is_empty());
        // order-3 rejected
        let s = HFunctionSpec {
            m: 3,
            n: 0,
            upper: vec![],
            lower: vec![(1.0, 1.0), (1.0, 1.0), (1.0, 1.0)],
        };
        assert!(matches!(
            s.pole_lattice(4),
            Err(HError::UnsupportedPoleOrder { order: 3, .. })
        ));
    }

    #[test]
    fn residue_series_exponential() {
        let s = exp_spec();
        for r in [0.01, 0.3, 0.49] {
            let got = s.eval_residue_series(Side::Left, r, 1e-13).unwrap();
            assert!((got.value - (-r).exp()).abs() < 1e-13 * (-r).exp());
        }
        let s = sqrt_exp_spec();
        let got = s.eval_residue_series(Side::Left, 0.4, 1e-13).unwrap();
        let want = 0.4f64.sqrt() * (-0.4f64).exp();
        assert!((got.value - want).abs() < 1e-13 * want);
    }

    #[test]
    fn residue_series_both_sides_beta() {
        let a = 0.4;
        let s = beta_spec(a);
        let dc = s.derived_constants();
        assert!(dc.omega.abs() < 1e-14);
        assert!((dc.eta - 1.0).abs() < 1e-14);
        // left series for r < 1
        let got = s.eval_residue_series(Side::Left, 0.3, 1e-13).unwrap();
        assert!((got.value - beta_closed(a, 0.3)).abs() < 1e-12 * beta_closed(a, 0.3));
        // negated right series for r > 1 — pins the "−Σ over ĉ_k" orientation
        let got = s.eval_residue_series(Side::Right, 3.5, 1e-13).unwrap();
        assert!((got.value - beta_closed(a, 3.5)).abs() < 1e-12 * beta_closed(a, 3.5));
    }

    #[test]
    fn bromwich_matches_closed_forms() {
        let s = exp_spec();
        for r in [0.3, 1.0, 3.0, 10.0, 30.0] {
            let got = s.eval_bromwich(r, 1e-12).unwrap();
            let want = (-r).exp();
            assert!(
                (got.value - want).abs() < 1e-9 * want,
                "e^-r at {r}: {} vs {want}",
                got.value
            );
        }
        let s = beta_spec(0.4);
        for r in [0.6, 1.0, 1.7] {
            let got = s.eval_bromwich(r, 1e-12).unwrap();
            let want = beta_closed(0.4, r);
            assert!((got.value - want).abs() < 1e-10 * want, "beta at {r}");
        }
        // Mittag-Leffler: ℋ = Γ(z)Γ(1−z)/Γ(1−z/2) gives E_{1/2,1}(−r) = e^{r²}erfc(r)
        let s = HFunctionSpec {
            m: 1,
            n: 1,
            upper: vec![(0.0, 1.0)],
            lower: vec![(0.0, 1.0), (0.0, 0.5)],
        };
        let got = s.eval_bromwich(1.0, 1e-12).unwrap();
        assert!((got.value - 0.42758357615580700442).abs() < 1e-10);
    }

    #[test]
    fn dual_method_agreement() {
        let s = kernel_spec(2.0, 0.7, 1.1, 0.3, 0.2);
        let eta = s.derived_constants().eta;
        for frac in [0.1, 0.25, 0.5] {
            let r = eta * frac / 2.0;
            let series = s.eval_residue_series(Side::Left, r, 1e-13).unwrap();
            let brom = s.eval_bromwich(r, 1e-12).unwrap();
            assert!(
                (series.value - brom.value).abs() < 1e-7 * series.value.abs().max(1.0),
                "dual-method at r = {r}: {} vs {}",
                series.value,
                brom.value
            );
        }
    }

    #[test]
    fn contour_invariance() {
        let s = kernel_spec(2.0, 0.7, 1.1, 0.3, 0.2);
        let lat = s.pole_lattice(4).unwrap();
        let (lo, hi) = (lat.left[0].location, lat.right[0].location);
        for r in [0.5, 1.0, 3.0] {
            let vals: Vec<f64> = [0.25, 0.5, 0.75]
                .iter()
                .map(|f| {
                    s.eval_bromwich_at(r, 1e-12, lo + f * (hi - lo), &Weight::one())
                        .unwrap()
                        .value
                })
                .collect();
            for w in vals.windows(2) {
                assert!(
                    (w[0] - w[1]).abs() < 1e-8 * w[0].abs().max(1.0),
                    "contour moved value at r = {r}: {vals:?}"
                );
            }
        }
    }

    #[test]
    fn residue_term_vs_contour_average() {
        // simple pole
        let s = kernel_spec(2.0, 0.7, 1.1, 0.3, 0.2);
        let lat = s.pole_lattice(6).unwrap();
        let r = 0.37;
        for pole in lat.left.iter().take(3).chain(lat.right.iter().take(2)) {
            let term = s.residue_term(pole).eval(r);
            let oracle = s
                .contour_residue_average(pole.location, 0.08, r, &Weight::one(), 256)
                .unwrap();
            assert!(
                (term - oracle).abs() < 1e-8 * oracle.abs().max(1e-8),
                "residue at z = {}: {term} vs {oracle}",
                pole.location
            );
        }
        // order-2 pole with log term
        let s = kernel_spec(1.0, 0.7, 1.25, 0.75, 0.2);
        let lat = s.pole_lattice(6).unwrap();
        let pole = lat.left.iter().find(|p| p.order == 2).unwrap();
        for r in [0.2, 0.37, 0.8] {
            let term = s.residue_term(pole).eval(r);
            let oracle = s
                .contour_residue_average(pole.location, 0.05, r, &Weight::one(), 512)
                .unwrap();
            assert!(
                (term - oracle).abs() < 1e-8 * oracle.abs().max(1e-8),
                "order-2 residue at r = {r}: {term} vs {oracle}"
            );
        }
    }

    #[test]
    fn weighted_residues_track_weights() {
        let s = kernel_spec(2.0, 0.7, 1.1, 0.3, 0.2);
        let lat = s.pole_lattice(4).unwrap();
        let w = Weight::z_pow(2);
        let pole = &lat.left[0];
        let plain = s.residue_term(pole);
        let weighted = s.residue_term_weighted(pole, &w);
        let z0 = pole.location;
        assert!((weighted.coeff_const - plain.coeff_const * z0 * z0).abs() < 1e-12 * weighted.coeff_const.abs());
        // weight z^q kills the right pole at z = 0
        let right0 = &lat.right[0];
        assert_eq!(s.residue_term_weighted(right0, &Weight::z_pow(1)).coeff_const, 0.0);
    }

    #[test]
    fn derivative_rule_augmented_spec() {
        // d/dr H(r) = −r^{−1}·H_aug(r) with the (0,1)/(1,1) augmentation
        let s = kernel_spec(2.0, 0.7, 1.1, 0.3, 0.2);
        let mut aug = s.clone();
        aug.lower.insert(0, (1.0, 1.0));
        aug.m += 1;
        aug.upper.push((0.0, 1.0));
        for r in [0.3, 1.0, 2.5] {
            let h = r * 1e-4;
            let fd = (s.eval(r + h, 1e-12).unwrap().value - s.eval(r - h, 1e-12).unwrap().value)
                / (2.0 * h);
            let rule = -aug.eval(r, 1e-12).unwrap().value / r;
            assert!(
                (fd - rule).abs() < 1e-5 * rule.abs().max(1e-12),
                "derivative rule at r = {r}: {fd} vs {rule}"
            );
        }
    }

    #[test]
    fn eval_dispatch_and_fallback() {
        let s = kernel_spec(2.0, 0.7, 1.1, 0.3, 0.2);
        let eta = s.derived_constants().eta;
        assert_eq!(s.eval(eta / 4.0, 1e-10).unwrap().method, Method::ResidueSeries);
        assert_eq!(s.eval(eta, 1e-10).unwrap().method, Method::Bromwich);
        // ω < 0 spec: right series at large r
        let s = kernel_spec(1.0, 1.5, 0.4, 0.1, 0.0);
        let dc = s.derived_constants();
        assert!(dc.omega < 0.0);
        assert_eq!(s.eval(4.0 * dc.eta, 1e-10).unwrap().method, Method::ResidueSeries);
        assert_eq!(s.eval(dc.eta, 1e-10).unwrap().method, Method::Bromwich);
    }

    #[test]
    fn tail_expansion_large_r() {
        // ω = 0 closed form pins sign and rate
        let a = 0.4;
        let s = beta_spec(a);
        for (r, p) in [(5.0, 1), (20.0, 1), (5.0, 3)] {
            let tail = s.tail_expansion(r, p).unwrap();
            let want = beta_closed(a, r);
            let bound = 3.0 * r.powf(-tail.remainder_order) * want.abs().max(1.0);
            assert!(
                (tail.value - want).abs() < bound,
                "tail at r = {r}, p = {p}: {} vs {want}",
                tail.value
            );
        }
        // ω > 0 kernel spec: remainder shrinks at the advertised rate
        let s = kernel_spec(2.0, 0.7, 1.1, 0.3, 0.2);
        let exact = |r: f64| s.eval_bromwich(r, 1e-13).unwrap().value;
        let t5 = (s.tail_expansion(5.0, 2).unwrap().value - exact(5.0)).abs();
        let t40 = (s.tail_expansion(40.0, 2).unwrap().value - exact(40.0)).abs();
        let m = s.tail_expansion(5.0, 2).unwrap().remainder_order;
        assert!(t40 < t5 * (40.0f64 / 5.0).powf(-m) * 5.0, "t5 = {t5}, t40 = {t40}, M = {m}");
    }

    #[test]
    fn tail_expansion_small_r_omega_negative() {
        // ω < 0: the small-r expansion +Σ over left poles must agree with the
        // Bromwich value — this pins the corrected orientation
        let s = HFunctionSpec {
            m: 1,
            n: 1,
            upper: vec![(0.0, 1.0)],
            lower: vec![(0.4, 0.5)],
        };
        let dc = s.derived_constants();
        assert!(dc.omega < 0.0);
        let lat = s.pole_lattice(8).unwrap();
        for r in [0.01, 0.05] {
            let tail = s.tail_expansion(r, 2).unwrap();
            let exact = s.eval_bromwich(r, 1e-13).unwrap().value;
            // asymptotic remainder ≈ first omitted term (its coefficient
            // grows, so a bare r^M bound would be too optimistic)
            let next = s.residue_term(&lat.left[3]).eval(r).abs();
            assert!(
                (tail.value - exact).abs() < 2.0 * next + 1e-9 * exact.abs(),
                "small-r tail at {r}: {} vs {exact}",
                tail.value
            );
            assert!((tail.remainder_order - lat.left[3].location.abs()).abs() < 1e-12);
            // and the leading term dominates, so the sign must match
            assert_eq!(tail.value.signum(), exact.signum());
        }
    }

    #[test]
    fn exp_decay_envelope_exact_case() {
        // H(r) = √r·e^{−r}: Λ = 0, ω = 1, η = 1, no j>m lower rows,
        // α* = 1 ⇒ ln env = 0.5·ln r − r exactly
        let s = sqrt_exp_spec();
        for r in [2.0, 5.0, 10.0] {
            let env = s.exp_decay_envelope(r).unwrap();
            let want = 0.5 * r.ln() - r;
            assert!((env - want).abs() < 1e-12, "envelope at {r}");
        }
        assert!(beta_spec(0.4).exp_decay_envelope(2.0).is_err()); // n = 1
    }

    #[test]
    fn series_error_estimate_is_honest() {
        let s = kernel_spec(2.0, 0.7, 1.1, 0.3, 0.2);
        let eta = s.derived_constants().eta;
        let r = eta / 4.0;
        let res = s.eval_residue_series(Side::Left, r, 1e-12).unwrap();
        let truth = s.eval_bromwich(r, 1e-13).unwrap().value;
        assert!((res.value - truth).abs() <= (res.abs_error_estimate + 1e-9 * truth.abs()) * 10.0);
    }

    #[test]
    fn gauss_legendre_nodes_integrate_polynomials() {
        let (nodes, weights) = gauss_legendre_20();
        let int: f64 = nodes.iter().zip(weights).map(|(x, w)| w * x.powi(8)).sum();
        assert!((int - 2.0 / 9.0).abs() < 1e-14);
        let total: f64 = weights.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn stirling_bound_brackets_integrand() {
        // |ℋ(ℓ+ib)r^{−ℓ}| at b = 30 is within a decade of the Stirling model
        let s = kernel_spec(2.0, 0.7, 1.1, 0.3, 0.2);
        let dc = s.derived_constants();
        let ell = -0.2;
        let b = 30.0;
        let factors = s.factors();
        let lh = s.log_h(&factors, Complex64::new(ell, b)).ok().unwrap();
        let model = dc.omega * ell + dc.lambda * b.ln() - dc.alpha_star * PI * b / 2.0
            + ell * dc.eta.ln()
            - dc.omega * ell * (1.0 / b).ln() * 0.0;
        // compare growth rates only (constants differ): slopes over b ∈ [30, 60]
        let lh2 = s.log_h(&factors, Complex64::new(ell, 2.0 * b)).ok().unwrap();
        let slope = (lh2.re - lh.re) / b;
        let model_slope = (dc.lambda + dc.omega * ell) * (2.0f64.ln()) / b - dc.alpha_star * PI / 2.0;
        assert!((slope - model_slope).abs() < 0.02, "slope {slope} vs {model_slope}");
        let _ = model;
        let _ = ln_abs_gamma(1.0);
    }
}
