//! Built-in verification suite.
//!
//! Every check here is an executable statement about the library: closed-form
//! reproduction, exact identities, dual-path equivalence between the
//! Mellin–Barnes kernel and the Fourier-inversion oracle, and slope-fit
//! reproduction of every asymptotic regime exponent. The CLI `selfcheck`
//! command and the integration tests both run this module, so there is a
//! single source of truth for what "the build works" means.
//!
//! All sampling is done with a fixed-seed counter-based generator, so two
//! runs of the same binary perform bit-identical work.

use crate::asymptotics::{classify, envelope, linear_fit, SideM};
use crate::gamma::{gamma_real, log_gamma, recip_gamma_real, reciprocal_gamma};
use crate::hfun::{Side, Weight};
use crate::kernel::FracParams;
use crate::mittag::mittag_leffler_neg;
use crate::oracle::{
    closed_form_reference, family_params, mass_quadrature, p_via_inversion, Family,
    QuadratureConfig,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::Instant;

/// How much of the suite to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    /// Parameter-free identities, classical closed forms, scaling, spot
    /// values — a release gate that finishes in seconds.
    Quick,
    /// The entire suite, including the full dual-path equivalence grid and
    /// all regime-exponent fits.
    Full,
}

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    /// Stable numeric id (0 = gamma identities, 1–14 = the main suite).
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    /// Worst-case numbers and counts backing the verdict.
    pub detail: String,
    pub seconds: f64,
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn log_grid(a: f64, b: f64, k: usize) -> Vec<f64> {
    (0..k)
        .map(|i| a * (b / a).powf(i as f64 / (k - 1) as f64))
        .collect()
}

/// `|x|` from the similarity variable `M` at time `t`.
fn x_of_m(p: &FracParams, t: f64, m: f64) -> f64 {
    (m * t.powf(p.alpha)).powf(1.0 / (2.0 * p.beta))
}

// ---------------------------------------------------------------------------
// 0. gamma identities
// ---------------------------------------------------------------------------

fn check_gamma_identities() -> (bool, String) {
    let mut worst = 0.0f64;
    // reflection 1/Γ(z)·1/Γ(1−z) = sin(πz)/π, in reciprocal form (entire,
    // valid at the poles too)
    for &x in &[-3.3, -1.7, -0.4, 0.2, 0.9, 1.6, 2.8, 3.7] {
        for &y in &[-4.5, -1.2, 0.0, 0.8, 3.9] {
            let z = Complex64::new(x, y);
            let lhs = reciprocal_gamma(z) * reciprocal_gamma(Complex64::new(1.0, 0.0) - z);
            let rhs = (PI * z).sin() / PI;
            let e = (lhs - rhs).norm() / rhs.norm().max(1.0);
            worst = worst.max(e);
        }
    }
    // Legendre duplication on the right half-plane via log Γ
    for &x in &[0.3, 0.7, 1.9, 3.2] {
        for &y in &[0.0, -1.5, 1.5, -4.0, 4.0] {
            let z = Complex64::new(x, y);
            let lhs = log_gamma(2.0 * z).unwrap();
            let rhs = log_gamma(z).unwrap() + log_gamma(z + 0.5).unwrap()
                + (2.0 * z - 1.0) * 2.0f64.ln()
                - 0.5 * PI.ln();
            let e = (lhs - rhs).norm() / lhs.norm().max(1.0);
            worst = worst.max(e);
        }
    }
    // real-axis spot values
    worst = worst.max((gamma_real(0.5).powi(2) - PI).abs() / PI);
    worst = worst.max((gamma_real(6.0) - 120.0).abs() / 120.0);
    (worst < 5e-13, format!("worst relative error {worst:.2e}"))
}

// ---------------------------------------------------------------------------
// 1–2. classical closed forms
// ---------------------------------------------------------------------------

fn check_gaussian() -> (bool, String) {
    let mut worst = 0.0f64;
    let mut n = 0u32;
    for d in [1u32, 2, 3] {
        let p = family_params(Family::Gaussian, d);
        for &t in &[0.5, 1.0, 2.0] {
            for &x in &log_grid(0.05, 5.0, 20) {
                let got = p.p(t, x, 1e-12).unwrap().value;
                let want = closed_form_reference(Family::Gaussian, d, t, x).unwrap();
                worst = worst.max(rel(got, want));
                n += 1;
            }
        }
    }
    (worst < 1e-8, format!("{n} points, worst rel {worst:.2e}"))
}

fn check_poisson() -> (bool, String) {
    let mut worst = 0.0f64;
    let mut n = 0u32;
    for d in [1u32, 3] {
        let p = family_params(Family::Poisson, d);
        for &t in &[0.7, 1.3] {
            for &x in &log_grid(0.05, 5.0, 10) {
                let got = p.p(t, x, 1e-12).unwrap().value;
                let want = closed_form_reference(Family::Poisson, d, t, x).unwrap();
                worst = worst.max(rel(got, want));
                n += 1;
            }
        }
    }
    (worst < 1e-6, format!("{n} points, worst rel {worst:.2e}"))
}

// ---------------------------------------------------------------------------
// 3. dual-path equivalence: Mellin–Barnes kernel vs Fourier inversion
// ---------------------------------------------------------------------------

fn check_inversion_equivalence() -> (bool, String) {
    let cfg = QuadratureConfig { tol: 1e-7, ..QuadratureConfig::default() };
    let t = 0.9f64;
    let mut worst = (0.0f64, String::new());
    let (mut n_pts, mut n_skip) = (0u32, 0u32);
    for alpha in [0.5, 1.5] {
        for beta in [0.4, 1.0, 1.7] {
            for gk in 0..3usize {
                let gamma = [0.0, beta / 2.0, beta][gk];
                for sigma in [-0.5, 0.0, 1.0] {
                    for d in [1u32, 2, 3] {
                        let p = FracParams { d, alpha, beta, gamma, sigma };
                        let flagged = [SideM::LargeM, SideM::SmallM]
                            .iter()
                            .any(|&s| classify(&p, 0, s).unverified_flag);
                        if !p.integrable() || flagged {
                            n_skip += 1;
                            continue;
                        }
                        for i in 0..10 {
                            let m = 0.1 * 100f64.powf(i as f64 / 9.0);
                            let x = x_of_m(&p, t, m);
                            let inv = match p_via_inversion(&p, t, x, &cfg) {
                                Ok(v) => v.value,
                                Err(e) => {
                                    return (
                                        false,
                                        format!("inversion failed at ({d},{alpha},{beta},{gamma},{sigma}) M={m:.3}: {e}"),
                                    )
                                }
                            };
                            let ker = p.p(t, x, 1e-12).unwrap().value;
                            let rd = (inv - ker).abs() / ker.abs().max(1e-300);
                            n_pts += 1;
                            if rd > worst.0 {
                                worst = (rd, format!("({d},{alpha},{beta},{gamma},{sigma}) M={m:.3}"));
                            }
                        }
                    }
                }
            }
        }
    }
    (
        worst.0 < 1e-4,
        format!(
            "{n_pts} points ({n_skip} combos skipped), worst rel {:.2e} at {}",
            worst.0, worst.1
        ),
    )
}

// ---------------------------------------------------------------------------
// 4. self-similarity scaling
// ---------------------------------------------------------------------------

fn sample_integrable(rng: &mut ChaCha8Rng, d_max: u32) -> FracParams {
    let d = rng.gen_range(1..=d_max);
    let alpha = rng.gen_range(0.15..1.85);
    let beta = rng.gen_range(0.3..2.2);
    let gamma = rng.gen_range(0.0..=beta);
    let sigma = rng.gen_range(-1.0..1.5);
    FracParams { d, alpha, beta, gamma, sigma }
}

fn check_scaling() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut worst = 0.0f64;
    let mut n_resample = 0u32;
    for _ in 0..500 {
        // An identity can only be verified to 1e−12 at points both sides can
        // themselves deliver well below that, so draws where the evaluator
        // reports a worse-conditioned result (pole near-coincidence, ω ≈ 0
        // series cancellation) are redrawn. The filter trusts the reported
        // error bound only to *select* points; an optimistic bound would let
        // noisy points through and fail the assertion below.
        let (p, c, lhs, rhs_p) = loop {
            let p = sample_integrable(&mut rng, 4);
            let t = rng.gen_range(0.4..2.5);
            let m = 0.05 * (50.0f64 / 0.05).powf(rng.gen_range(0.0..1.0));
            let x = x_of_m(&p, t, m);
            let c: f64 = rng.gen_range(0.3..3.0);
            let lhs = p.p(c * t, c.powf(p.alpha / (2.0 * p.beta)) * x, 1e-14).unwrap();
            let rhs = p.p(t, x, 1e-14).unwrap();
            if lhs.abs_error_estimate <= 1e-13 * lhs.value.abs()
                && rhs.abs_error_estimate <= 1e-13 * rhs.value.abs()
            {
                break (p, c, lhs, rhs);
            }
            n_resample += 1;
        };
        let rhs = c.powf(-p.scaling_exponent()) * rhs_p.value;
        worst = worst.max(rel(lhs.value, rhs));
    }
    (
        worst < 1e-12,
        format!("500 points ({n_resample} redrawn by error bound), worst rel {worst:.2e}"),
    )
}

// ---------------------------------------------------------------------------
// 5. radial profile derivative recursion
// ---------------------------------------------------------------------------

fn check_profile_derivative_recursion() -> (bool, String) {
    let sets = [
        (1u32, 0.7, 1.1, 0.3, 0.2),
        (2, 0.5, 0.75, 0.0, 0.25),
        (3, 0.9, 1.0, 1.0, 0.1),
        (1, 0.6, 2.0, 0.0, 0.0),
        (2, 0.8, 0.6, 0.6, 0.0),
        (1, 1.5, 1.0, 0.0, 0.0),
    ];
    let rs = log_grid(0.05, 30.0, 50);
    let mut worst = (0.0f64, String::new());
    for (d, a, b, g, s) in sets {
        let p = FracParams { d, alpha: a, beta: b, gamma: g, sigma: s };
        for q in 0..3u32 {
            let vals: Vec<f64> = rs
                .iter()
                .map(|&r| p.h(q + 1, r, 1e-12).unwrap().value)
                .collect();
            let mut mags: Vec<f64> = vals.iter().map(|v| v.abs()).collect();
            mags.sort_by(f64::total_cmp);
            let med = mags[mags.len() / 2];
            for (i, &r) in rs.iter().enumerate() {
                let h = 5e-5 * r;
                let fd = (p.h(q, r + h, 1e-12).unwrap().value
                    - p.h(q, r - h, 1e-12).unwrap().value)
                    / (2.0 * h);
                // floor the denominator at 1e-3 of the grid's median scale so
                // isolated zero crossings of the derivative stay measurable
                let e = (fd - vals[i]).abs() / vals[i].abs().max(1e-3 * med);
                if e > worst.0 {
                    worst = (e, format!("({d},{a},{b},{g},{s}) q={q} r={r:.3}"));
                }
            }
        }
    }
    (
        worst.0 < 1e-5,
        format!("6 sets x 3 orders x 50 radii, worst rel {:.2e} at {}", worst.0, worst.1),
    )
}

// ---------------------------------------------------------------------------
// 6. time interchange ∂_t p_{σ,γ} = p_{σ+1,γ}
// ---------------------------------------------------------------------------

fn check_time_interchange() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let mut worst = (0.0f64, String::new());
    for _ in 0..100 {
        let p = sample_integrable(&mut rng, 3);
        let t = rng.gen_range(0.4..2.2);
        let m = 0.05 * (30.0f64 / 0.05).powf(rng.gen_range(0.0..1.0));
        let x = x_of_m(&p, t, m);
        let h = 1e-4 * t;
        let fd =
            (p.p(t + h, x, 1e-12).unwrap().value - p.p(t - h, x, 1e-12).unwrap().value) / (2.0 * h);
        let shifted = p.time_shift(1).p(t, x, 1e-12).unwrap().value;
        let scale = p.p(t, x, 1e-12).unwrap().value.abs() / t;
        let e = (fd - shifted).abs() / shifted.abs().max(1e-3 * scale);
        if e > worst.0 {
            worst = (e, format!("({},{:.2},{:.2},{:.2},{:.2})", p.d, p.alpha, p.beta, p.gamma, p.sigma));
        }
    }
    (worst.0 < 1e-4, format!("100 points, worst rel {:.2e} at {}", worst.0, worst.1))
}

// ---------------------------------------------------------------------------
// 7. spatial derivatives vs tensor-product central stencils
// ---------------------------------------------------------------------------

// Fourth-order central differences: kernel evaluations carry ~1e−14 relative
// noise which an h^{-3} stencil amplifies, so the step cannot be pushed small
// enough for second-order formulas to bring truncation under the tolerance.
// Fourth-order stencils at h ≈ 6e−3·|x| balance both error sources with an
// order of magnitude to spare.
fn stencil(order: u32) -> Vec<(i32, f64)> {
    match order {
        0 => vec![(0, 1.0)],
        1 => vec![
            (-2, 1.0 / 12.0),
            (-1, -8.0 / 12.0),
            (1, 8.0 / 12.0),
            (2, -1.0 / 12.0),
        ],
        2 => vec![
            (-2, -1.0 / 12.0),
            (-1, 16.0 / 12.0),
            (0, -30.0 / 12.0),
            (1, 16.0 / 12.0),
            (2, -1.0 / 12.0),
        ],
        3 => vec![
            (-3, 1.0 / 8.0),
            (-2, -1.0),
            (-1, 13.0 / 8.0),
            (1, -13.0 / 8.0),
            (2, 1.0),
            (3, -1.0 / 8.0),
        ],
        _ => unreachable!("stencil orders are ≤ 3"),
    }
}

fn fd_multi(p: &FracParams, t: f64, x: &[f64], orders: &[u32], h: f64) -> f64 {
    let mut acc = vec![(x.to_vec(), 1.0f64)];
    for (i, &ord) in orders.iter().enumerate() {
        if ord == 0 {
            continue;
        }
        let mut next = Vec::new();
        for (pt, c) in &acc {
            for &(off, w) in &stencil(ord) {
                let mut q = pt.clone();
                q[i] += off as f64 * h;
                next.push((q, c * w));
            }
        }
        acc = next;
    }
    let total: u32 = orders.iter().sum();
    let mut sum = 0.0;
    for (pt, c) in &acc {
        let norm = pt.iter().map(|v| v * v).sum::<f64>().sqrt();
        sum += c * p.p(t, norm, 1e-12).unwrap().value;
    }
    sum / h.powi(total as i32)
}

fn check_spatial_derivatives() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    let mut worst = (0.0f64, String::new());
    for _ in 0..100 {
        let p = sample_integrable(&mut rng, 3);
        let t = rng.gen_range(0.5..1.8);
        let m = 0.1 * (20.0f64 / 0.1).powf(rng.gen_range(0.0..1.0));
        let x_norm = x_of_m(&p, t, m);
        // direction bounded away from every coordinate hyperplane
        let mut u: Vec<f64> = (0..p.d)
            .map(|_| {
                let s: f64 = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                s * rng.gen_range(0.35..1.0)
            })
            .collect();
        let un = u.iter().map(|v| v * v).sum::<f64>().sqrt();
        u.iter_mut().for_each(|v| *v *= x_norm / un);
        // random multi-index with 1 ≤ |a| ≤ 3
        let total = rng.gen_range(1..=3u32);
        let mut orders = vec![0u32; p.d as usize];
        for _ in 0..total {
            let i = rng.gen_range(0..p.d as usize);
            orders[i] += 1;
        }
        let exact = p.p_derivative(t, &u, &orders, 1e-12).unwrap().value;
        let h = 6e-3 * x_norm;
        let fd = fd_multi(&p, t, &u, &orders, h);
        let scale = p.p(t, x_norm, 1e-12).unwrap().value.abs() / x_norm.powi(total as i32);
        let e = (fd - exact).abs() / exact.abs().max(1e-3 * scale);
        if e > worst.0 {
            worst = (
                e,
                format!(
                    "({},{:.2},{:.2},{:.2},{:.2}) a={orders:?}",
                    p.d, p.alpha, p.beta, p.gamma, p.sigma
                ),
            );
        }
    }
    (worst.0 < 1e-4, format!("100 points, worst rel {:.2e} at {}", worst.0, worst.1))
}

// ---------------------------------------------------------------------------
// 8–9. regime exponents by log–log slope fits
// ---------------------------------------------------------------------------

/// Fit `ln|p|` (log-factor removed when the envelope carries one) against
/// `ln|x|` at fixed `t` and against `ln t` at fixed `|x|`, sweeping `M`
/// across `[m_lo, m_hi]`; compare both slopes to the envelope exponents.
fn slope_fit_one(
    p: &FracParams,
    side: SideM,
    m_lo: f64,
    m_hi: f64,
) -> Result<(f64, f64, String), String> {
    let (case, env) = envelope(p, 0, side).map_err(|e| e.to_string())?;
    if !case.applicable {
        return Err("not applicable".into());
    }
    if env.exp_rate != 0.0 {
        return Err("exponential case".into());
    }
    if !env.two_sided {
        return Err("upper-bound-only case".into());
    }
    let t0 = 0.8f64;
    let ms = log_grid(m_lo, m_hi, 12);
    let logcorr = |m: f64| if env.log_factor { (1.0 + m.ln().abs()).ln() } else { 0.0 };

    // |x|-slope at fixed t
    let mut lx = Vec::new();
    let mut ly = Vec::new();
    for &m in &ms {
        let x = x_of_m(p, t0, m);
        let v = p.p(t0, x, 1e-12).map_err(|e| e.to_string())?.value;
        if v.abs() < 1e-280 {
            return Err(format!("underflow at M={m:.1e}"));
        }
        lx.push(x.ln());
        ly.push(v.abs().ln() - logcorr(m));
    }
    let fx = linear_fit(&lx, &ly);

    // t-slope at fixed |x| (t chosen so M sweeps the same window)
    let x_ref = x_of_m(p, t0, (m_lo * m_hi).sqrt());
    let mut lt = Vec::new();
    let mut lyt = Vec::new();
    for &m in &ms {
        let t = (x_ref.powf(2.0 * p.beta) / m).powf(1.0 / p.alpha);
        let v = p.p(t, x_ref, 1e-12).map_err(|e| e.to_string())?.value;
        if v.abs() < 1e-280 {
            return Err(format!("underflow at M={m:.1e}"));
        }
        lt.push(t.ln());
        lyt.push(v.abs().ln() - logcorr(m));
    }
    let ft = linear_fit(&lt, &lyt);

    let ex = (fx.slope - env.x_power).abs() / env.x_power.abs().max(1.0);
    let et = (ft.slope - env.t_power).abs() / env.t_power.abs().max(1.0);
    Ok((
        ex.max(et),
        fx.slope,
        format!(
            "case {:?}: x-slope {:.4} vs {:.4}, t-slope {:.4} vs {:.4}",
            case.case, fx.slope, env.x_power, ft.slope, env.t_power
        ),
    ))
}

fn check_large_m_exponents() -> (bool, String) {
    // Two sets per algebraic case (ii–v), all with small β: the envelope's
    // power law is the leading term of a series in 1/R with R = M·2^{−2β},
    // so the fixed fit window M ∈ [10², 10⁴] is only deep in the asymptotic
    // regime when 2^{2β} is modest and the next-order coefficient ratio is
    // O(1). Sub-rows with γ ∈ ℤ₊ have coefficient ratios in the tens to
    // thousands (next numerator gamma factor over a reflected near-pole
    // denominator) and do not settle until M ≫ 10⁴; their exponents are
    // covered structurally by the residue-series unit tests instead.
    let sets = [
        // case ii (α = 1, σ = 0)
        (2u32, 1.0, 0.75, 0.3, 0.0),
        (1, 1.0, 0.6, 0.25, 0.0),
        // case iii (fractional γ ∈ (0, β))
        (3, 0.5, 0.6, 0.4, -0.5),
        (1, 0.7, 0.75, 0.3, 0.2),
        (2, 1.5, 0.8, 0.3, -0.3),
        // case iv (integer γ, here γ = 0, β ∉ ℕ)
        (3, 0.5, 0.6, 0.0, 0.3),
        (1, 1.5, 0.8, 0.0, 0.2),
        // case v (γ = β, d ≥ 2)
        (2, 1.2, 0.5, 0.5, 0.4),
        (2, 0.8, 0.6, 0.6, 0.0),
    ];
    let mut worst = (0.0f64, String::new());
    let mut n = 0;
    for (d, a, b, g, s) in sets {
        let p = FracParams { d, alpha: a, beta: b, gamma: g, sigma: s };
        match slope_fit_one(&p, SideM::LargeM, 1e2, 1e4) {
            Ok((e, _, note)) => {
                n += 1;
                if e > worst.0 {
                    worst = (e, format!("({d},{a},{b},{g},{s}) {note}"));
                }
            }
            Err(why) => return (false, format!("({d},{a},{b},{g},{s}): {why}")),
        }
    }
    (
        worst.0 < 0.02,
        format!("{n} parameter sets, worst slope deviation {:.2}% at {}", 100.0 * worst.0, worst.1),
    )
}

fn check_small_m_exponents() -> (bool, String) {
    // One set per case (i)–(v), plus all three rows of case (i). As in the
    // large-M fit, sets are chosen so the next residue-lattice site is far
    // enough below the leading one that the window M ∈ [10⁻⁴, 10⁻²] is
    // genuinely asymptotic: the controlling gap is min(1/β, |1 − (d+2γ)/2β|)
    // and the log-row reference (1+|ln M|) additionally needs the series
    // offset c₀/c_log to sit near 2β ln2 − 1 so the stand-in log model does
    // not bias the slope.
    let sets = [
        // case i, row 1 (γ < β − d/2, flat |x|-profile)
        (1u32, 0.6, 1.2, 0.0, 0.35),
        // case i, log row (γ = β − d/2), two sets
        (1, 0.35, 0.7, 0.2, 0.45),
        (1, 0.3, 0.7, 0.2, 0.5),
        // case i, row 3 (γ > β − d/2)
        (3, 0.9, 1.1, 1.0, 0.35),
        // case ii (σ + α ∈ ℕ)
        (1, 0.5, 0.8, 0.3, 0.5),
        // case iii (α = 1, σ = 0)
        (2, 1.0, 0.75, 0.3, 0.0),
        // case iv (γ = β, d ≥ 2)
        (3, 0.5, 0.6, 0.6, -0.4),
        // case v (γ = β, d = 1, σ + α ∈ ℕ)
        (1, 1.2, 1.6, 1.6, -0.2),
    ];
    let mut worst = (0.0f64, String::new());
    let mut log_notes = Vec::new();
    let mut n = 0;
    for (d, a, b, g, s) in sets {
        let p = FracParams { d, alpha: a, beta: b, gamma: g, sigma: s };
        let (_, env) = match envelope(&p, 0, SideM::SmallM) {
            Ok(v) => v,
            Err(e) => return (false, format!("({d},{a},{b},{g},{s}): {e}")),
        };
        match slope_fit_one(&p, SideM::SmallM, 1e-4, 1e-2) {
            Ok((e, _, note)) => {
                n += 1;
                if e > worst.0 {
                    worst = (e, format!("({d},{a},{b},{g},{s}) {note}"));
                }
            }
            Err(why) => return (false, format!("({d},{a},{b},{g},{s}): {why}")),
        }
        // log-branch cases: the |ln M| coefficient must be significant
        if env.log_factor {
            let t0 = 0.8f64;
            let ms = log_grid(1e-4, 1e-2, 50);
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for &m in &ms {
                let x = x_of_m(&p, t0, m);
                let v = p.p(t0, x, 1e-12).unwrap().value;
                let q = v.abs() / (x.powf(env.x_power) * t0.powf(env.t_power));
                xs.push((1.0 / m).ln());
                ys.push(q);
            }
            let f = linear_fit(&xs, &ys);
            let significant = f.slope > 0.0 && f.slope - 2.0 * f.slope_stderr > 0.0;
            log_notes.push(format!(
                "log fit ({d},{a},{b},{g},{s}): slope {:.3e} ± {:.1e}",
                f.slope, f.slope_stderr
            ));
            if !significant {
                return (false, format!("insignificant log coefficient: {}", log_notes.last().unwrap()));
            }
        }
    }
    let log_part = if log_notes.is_empty() {
        String::new()
    } else {
        format!("; {}", log_notes.join("; "))
    };
    (
        worst.0 < 0.02,
        format!(
            "{n} parameter sets, worst slope deviation {:.2}% at {}{}",
            100.0 * worst.0,
            worst.1,
            log_part
        ),
    )
}

// ---------------------------------------------------------------------------
// 10. exponential decay rate
// ---------------------------------------------------------------------------

fn check_exponential_decay() -> (bool, String) {
    let mut notes = Vec::new();
    let mut ok = true;
    for (beta, alpha) in [(1.0, 0.5), (1.0, 1.5), (2.0, 0.5), (2.0, 1.5)] {
        let p = FracParams { d: 1, alpha, beta, gamma: 0.0, sigma: 0.0 };
        let t = 0.9f64;
        let ms = log_grid(10.0, 1e3, 25);
        let mut us = Vec::new();
        let mut ys = Vec::new();
        for &m in &ms {
            let x = x_of_m(&p, t, m);
            let v = p.p(t, x, 1e-12).unwrap().value;
            if v.abs() < 1e-280 {
                continue;
            }
            us.push(m.powf(1.0 / (2.0 * beta - alpha)));
            ys.push(v.abs().ln());
        }
        let f = linear_fit(&us, &ys);
        // R² of the regression
        let mean = ys.iter().sum::<f64>() / ys.len() as f64;
        let ss_tot: f64 = ys.iter().map(|y| (y - mean).powi(2)).sum();
        let ss_res: f64 = us
            .iter()
            .zip(&ys)
            .map(|(&u, &y)| (y - f.intercept - f.slope * u).powi(2))
            .sum();
        let r2 = 1.0 - ss_res / ss_tot;
        let this_ok = f.slope < 0.0 && r2 > 0.99;
        ok &= this_ok;
        notes.push(format!("β={beta} α={alpha}: rate {:.3}, R² {:.5}", f.slope, r2));
    }
    (ok, notes.join("; "))
}

// ---------------------------------------------------------------------------
// 11. leading coefficient of the small-r profile series
// ---------------------------------------------------------------------------

fn check_leading_coefficient() -> (bool, String) {
    // Parameter sets where the first lattice site leads by a comfortable gap
    // at r = 1e−5 (both signs of ω = 2β − α represented). The subleading
    // site sits at relative power min(1/β, 1−p₁), so the full series value
    // deviates from κ₁·r^{p₁} by ≈ r^{gap}; the gaps here keep that below
    // the 1% tolerance while still exercising d ∈ {1,2} and γ > 0.
    let sets = [
        (1u32, 0.7, 1.5, 0.1, 0.2),
        (1, 0.5, 1.6, 0.2, -0.4),
        (1, 1.95, 0.95, 0.0, 0.3),
        (2, 0.6, 2.0, 0.0, 0.0),
    ];
    let r = 1e-5f64;
    let mut worst = (0.0f64, String::new());
    let mut worst_closed = 0.0f64;
    for (d, a, b, g, s) in sets {
        let p = FracParams { d, alpha: a, beta: b, gamma: g, sigma: s };
        let rep = p.h_rep();
        let inner = rep
            .spec
            .eval_residue_series(Side::Left, r / rep.arg_scale, 1e-14)
            .unwrap();
        let h_val = rep.prefactor * inner.value;
        let p1 = (d as f64 + 2.0 * g) / (2.0 * b);
        // The κ₁ prediction is cross-checked against its closed form
        // π / (β sin(πp₁) Γ(d/2) Γ(1−σ−αp₁)), computed here from gamma
        // functions alone so the comparison is independent of the residue
        // machinery that produced the coefficient.
        let closed = PI / (b * (PI * p1).sin())
            * recip_gamma_real(d as f64 / 2.0)
            * recip_gamma_real(1.0 - s - a * p1);
        let k1 = p.kappa1().unwrap();
        worst_closed = worst_closed.max(rel(k1, closed));
        let e = rel(h_val, k1 * r.powf(p1));
        if e > worst.0 {
            worst = (e, format!("({d},{a},{b},{g},{s})"));
        }
    }
    (
        worst.0 < 0.01 && worst_closed < 1e-12,
        format!(
            "4 sets at r=1e-5, worst deviation {:.3}% at {}; κ₁ vs closed form worst {:.1e}",
            100.0 * worst.0,
            worst.1,
            worst_closed
        ),
    )
}

// ---------------------------------------------------------------------------
// 12. contour invariance and dual-method equivalence
// ---------------------------------------------------------------------------

fn check_contour_invariance() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    let mut worst_line = 0.0f64;
    let mut worst_dual = 0.0f64;
    let mut n_dual = 0u32;
    for _ in 0..100 {
        let d = rng.gen_range(1..=3u32);
        let alpha = rng.gen_range(0.2..1.9);
        let beta = rng.gen_range(0.3..2.0);
        let gamma = rng.gen_range(0.0..1.2 * beta);
        let sigma = rng.gen_range(-1.0..1.5);
        let p = FracParams { d, alpha, beta, gamma, sigma };
        let rep = p.h_rep();
        let dc = rep.spec.derived_constants();
        let lattice = rep.spec.pole_lattice(4).unwrap();
        let l_max = lattice.left[0].location;
        let r_min = lattice.right[0].location;
        let r = if dc.omega > 0.05 {
            rng.gen_range(0.15..1.2)
        } else {
            2.2 * dc.eta * rng.gen_range(1.0..3.0)
        };
        let one = Weight::one();
        let mut vals = Vec::new();
        for frac in [0.25, 0.5, 0.75] {
            let ell = l_max + frac * (r_min - l_max);
            let v = rep.spec.eval_bromwich_at(r, 1e-10, ell, &one).unwrap().value;
            vals.push(v);
        }
        let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-250);
        for w in vals.windows(2) {
            worst_line = worst_line.max((w[0] - w[1]).abs() / scale);
        }
        // dual-method overlap where a residue side converges
        if dc.omega.abs() > 0.05 {
            let side = if dc.omega > 0.0 { Side::Left } else { Side::Right };
            if let Ok(rs) = rep.spec.eval_residue_series(side, r, 1e-12) {
                worst_dual = worst_dual.max((rs.value - vals[1]).abs() / scale);
                n_dual += 1;
            }
        }
    }
    (
        worst_line < 1e-8 && worst_dual < 1e-8,
        format!(
            "100 specs: line-shift worst {worst_line:.2e}, residue-vs-contour worst {worst_dual:.2e} ({n_dual} overlaps)"
        ),
    )
}

// ---------------------------------------------------------------------------
// 13. mass conservation
// ---------------------------------------------------------------------------

fn check_mass_conservation() -> (bool, String) {
    let cfg = QuadratureConfig { tol: 1e-8, ..QuadratureConfig::default() };
    let mut worst = (0.0f64, String::new());
    for d in [1u32, 2, 3] {
        for (alpha, beta) in [(0.6, 1.0), (1.3, 0.7)] {
            let p = FracParams { d, alpha, beta, gamma: 0.0, sigma: 0.0 };
            let m = match mass_quadrature(&p, 1.0, &cfg) {
                Ok(v) => v.value,
                Err(e) => return (false, format!("d={d} α={alpha} β={beta}: {e}")),
            };
            let e = (m - 1.0).abs();
            if e > worst.0 {
                worst = (e, format!("d={d} α={alpha} β={beta}"));
            }
        }
    }
    (worst.0 < 1e-6, format!("6 parameter sets, worst |mass-1| {:.2e} at {}", worst.0, worst.1))
}

// ---------------------------------------------------------------------------
// 14. Mittag-Leffler spot values
// ---------------------------------------------------------------------------

fn check_ml_spot_values() -> (bool, String) {
    let cases = [
        (1.0, 1.0, 1.0, (-1.0f64).exp()),
        (1.0, 2.0, 1.0, 1.0 - (-1.0f64).exp()),
        (0.5, 1.0, 1.0, 0.42758357615580700441),
    ];
    let mut worst = 0.0f64;
    for (a, b, r, want) in cases {
        let got = mittag_leffler_neg(a, b, r).unwrap();
        worst = worst.max((got - want).abs());
    }
    (worst < 1e-10, format!("3 values, worst abs error {worst:.2e}"))
}

// ---------------------------------------------------------------------------
// runner
// ---------------------------------------------------------------------------

type CheckFn = fn() -> (bool, String);

/// Run the suite at the requested level; results come back in id order.
pub fn run(level: Level) -> Vec<CheckResult> {
    let all: &[(u32, &'static str, CheckFn)] = &[
        (0, "gamma-identities", check_gamma_identities),
        (1, "gaussian-closed-form", check_gaussian),
        (2, "poisson-closed-form", check_poisson),
        (3, "fourier-inversion-equivalence", check_inversion_equivalence),
        (4, "self-similar-scaling", check_scaling),
        (5, "profile-derivative-recursion", check_profile_derivative_recursion),
        (6, "time-shift-interchange", check_time_interchange),
        (7, "spatial-derivatives", check_spatial_derivatives),
        (8, "large-argument-exponents", check_large_m_exponents),
        (9, "small-argument-exponents", check_small_m_exponents),
        (10, "exponential-decay-rate", check_exponential_decay),
        (11, "leading-coefficient", check_leading_coefficient),
        (12, "contour-invariance", check_contour_invariance),
        (13, "mass-conservation", check_mass_conservation),
        (14, "mittag-leffler-spot-values", check_ml_spot_values),
    ];
    let quick_ids = [0u32, 1, 2, 4, 14];
    all.iter()
        .filter(|(id, _, _)| level == Level::Full || quick_ids.contains(id))
        .map(|&(id, name, f)| {
            let start = Instant::now();
            let (passed, detail) = f();
            CheckResult { id, name, passed, detail, seconds: start.elapsed().as_secs_f64() }
        })
        .collect()
}
