//! Interaction integrals and the repulsiveness constant.
//!
//! The two quantities driving both intensity approximations are
//! `G = ∫_{ℝ^d} (1-g(u)) du` and `∫_{ℝ^d} (1-g(u))² du`. Both integrands
//! vanish outside the interaction ball `B(0,R)`, so for an isotropic `g` they
//! reduce to proper radial integrals
//! `d·|B(0,1)|·∫₀^R (1-g(r))^p r^{d-1} dr`.
//!
//! Piecewise-constant families (Strauss, Strauss hard-core, piecewise) have
//! exact closed forms summing `(1-γᵢ)^p` over annuli; those are used directly.
//! The Diggle-Gratton family is integrated by adaptive Simpson quadrature on
//! the radial profile. A numeric route for every family is kept alongside the
//! closed forms so the two can be cross-checked.
//!
//! The repulsiveness constant is
//! `κ = max(|B(0,δ)| / ∫(1-g)², ∫(1-g)² / |B(0,R)|) ∈ [0,1]`,
//! equal to 1 for a pure hard core and 0 in the Poisson limit `g ≡ 1`
//! (the 0/0 ratio is taken as 0).

use crate::models::{Family, PairwiseInteraction};
use thiserror::Error;

/// Absolute quadrature tolerance, as a fraction of `|B(0,R)|`.
const QUAD_ABS_TOL: f64 = 1e-10;
/// Relative quadrature tolerance.
const QUAD_REL_TOL: f64 = 1e-10;
/// Maximum bisection depth of the adaptive scheme.
const QUAD_MAX_DEPTH: u32 = 60;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error(
        "adaptive quadrature did not converge on [{lo}, {hi}]: \
         residual error {err:e} exceeds tolerance {tol:e}"
    )]
    NonConvergence {
        lo: f64,
        hi: f64,
        err: f64,
        tol: f64,
    },
}

/// The interaction integrals of a model and the constants derived from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteractionSummary {
    /// `G = ∫(1-g)`, in volume units.
    pub g: f64,
    /// `∫(1-g)²`, in volume units.
    pub int_sq: f64,
    /// Repulsiveness constant `κ ∈ [0,1]`.
    pub kappa: f64,
    /// `|B(0,R)|`.
    pub ball_r: f64,
    /// `|B(0,δ)|`.
    pub ball_delta: f64,
}

/// Volume of the Euclidean ball `B(0,ρ)` in dimension `d`:
/// `π^{d/2} ρ^d / Γ(d/2 + 1)`.
pub fn ball_volume(dim: u32, rho: f64) -> f64 {
    assert!(dim >= 1, "dimension must be >= 1");
    assert!(rho >= 0.0, "radius must be nonnegative");
    let d = f64::from(dim);
    std::f64::consts::PI.powf(d / 2.0) * rho.powi(dim as i32) / libm::tgamma(d / 2.0 + 1.0)
}

/// `∫_{ℝ^d} (1-g(u))^power du` for `power` in {1, 2}.
///
/// Exact closed form for the piecewise-constant families, adaptive radial
/// quadrature for Diggle-Gratton.
pub fn integral_one_minus_g(
    model: &PairwiseInteraction,
    power: u32,
) -> Result<f64, QuadratureError> {
    assert!(power == 1 || power == 2, "power must be 1 or 2");
    match model.family() {
        Family::DiggleGratton => radial_integral(model, power),
        _ => Ok(banded_integral(model, power)),
    }
}

/// Numeric route of [`integral_one_minus_g`], available for every family.
pub fn integral_one_minus_g_numeric(
    model: &PairwiseInteraction,
    power: u32,
) -> Result<f64, QuadratureError> {
    assert!(power == 1 || power == 2, "power must be 1 or 2");
    radial_integral(model, power)
}

/// Repulsiveness constant `κ` of a model.
pub fn compute_kappa(model: &PairwiseInteraction) -> Result<f64, QuadratureError> {
    let int_sq = integral_one_minus_g(model, 2)?;
    let ball_r = ball_volume(model.dim(), model.range());
    let ball_delta = ball_volume(model.dim(), model.hardcore());
    Ok(kappa_from_parts(int_sq, ball_r, ball_delta))
}

/// Bundles `G`, `∫(1-g)²`, `κ` and the ball volumes of a model.
pub fn summarize(model: &PairwiseInteraction) -> Result<InteractionSummary, QuadratureError> {
    let g = integral_one_minus_g(model, 1)?;
    let int_sq = integral_one_minus_g(model, 2)?;
    let ball_r = ball_volume(model.dim(), model.range());
    let ball_delta = ball_volume(model.dim(), model.hardcore());
    let kappa = kappa_from_parts(int_sq, ball_r, ball_delta);
    let summary = InteractionSummary {
        g,
        int_sq,
        kappa,
        ball_r,
        ball_delta,
    };
    debug_assert!(summary.int_sq <= summary.g * (1.0 + 1e-12) + 1e-300);
    debug_assert!(summary.g <= summary.ball_r * (1.0 + 1e-12));
    debug_assert!(summary.ball_delta <= summary.int_sq * (1.0 + 1e-12) + 1e-300);
    Ok(summary)
}

fn kappa_from_parts(int_sq: f64, ball_r: f64, ball_delta: f64) -> f64 {
    // 0/0 := 0 covers the Poisson limit g ≡ 1 with no hard core; a positive
    // hard core forces int_sq >= |B(0,δ)| > 0, so the ratio is well defined
    // whenever its numerator is.
    let hardcore_ratio = if ball_delta == 0.0 {
        0.0
    } else {
        ball_delta / int_sq
    };
    let volume_ratio = int_sq / ball_r;
    hardcore_ratio.max(volume_ratio).clamp(0.0, 1.0)
}

/// Exact annulus sum for piecewise-constant `g`:
/// `|B(0,δ)| + Σᵢ (1-γᵢ)^p (|B(0,Rᵢ₊₁)| - |B(0,Rᵢ)|)`.
fn banded_integral(model: &PairwiseInteraction, power: u32) -> f64 {
    let dim = model.dim();
    let mut total = ball_volume(dim, model.hardcore());
    let mut inner = model.hardcore();
    for (&gamma, &upper) in model.gamma().iter().zip(model.radii()) {
        let shell = ball_volume(dim, upper) - ball_volume(dim, inner);
        total += (1.0 - gamma).powi(power as i32) * shell;
        inner = upper;
    }
    total
}

/// Radial quadrature of `d·|B(0,1)|·∫₀^R (1-g(r))^p r^{d-1} dr`, split at the
/// model's breakpoints so every panel has a smooth integrand.
fn radial_integral(model: &PairwiseInteraction, power: u32) -> Result<f64, QuadratureError> {
    let dim = model.dim();
    let range = model.range();
    let surface = f64::from(dim) * ball_volume(dim, 1.0);
    let profile = model.profile();

    let mut cuts = vec![0.0, model.hardcore()];
    cuts.extend_from_slice(model.radii());
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();

    let abs_tol = QUAD_ABS_TOL * ball_volume(dim, range) / cuts.len() as f64;
    let mut total = 0.0;
    for pair in cuts.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        if hi <= lo {
            continue;
        }
        // Sample just inside the open panel so that breakpoint conventions
        // (which only matter on a set of measure zero) cannot bias a panel.
        let shift = (hi - lo) * 1e-9;
        let integrand = |r: f64| {
            let r_inner = r.clamp(lo + shift, hi - shift);
            let defect = 1.0 - profile.eval_r(r_inner);
            surface * r.powi(dim as i32 - 1) * defect.powi(power as i32)
        };
        total += adaptive_simpson(&integrand, lo, hi, abs_tol, QUAD_REL_TOL, QUAD_MAX_DEPTH)?;
    }
    Ok(total)
}

/// Adaptive Simpson quadrature with Richardson correction.
///
/// The interval tolerance is `max(abs_tol, rel_tol·|estimate|)` and is halved
/// with every bisection; exceeding `max_depth` before the local error bound is
/// met fails loudly rather than returning a silently inaccurate value.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_depth: u32,
) -> Result<f64, QuadratureError> {
    assert!(lo.is_finite() && hi.is_finite() && lo <= hi);
    if lo == hi {
        return Ok(0.0);
    }
    let mid = 0.5 * (lo + hi);
    let f_lo = f(lo);
    let f_mid = f(mid);
    let f_hi = f(hi);
    let whole = simpson_panel(lo, hi, f_lo, f_mid, f_hi);
    let tol = abs_tol.max(rel_tol * whole.abs());
    refine(f, lo, hi, f_lo, f_mid, f_hi, whole, tol, max_depth)
}

fn simpson_panel(lo: f64, hi: f64, f_lo: f64, f_mid: f64, f_hi: f64) -> f64 {
    (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi)
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    f_lo: f64,
    f_mid: f64,
    f_hi: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64, QuadratureError> {
    let mid = 0.5 * (lo + hi);
    let lq = 0.5 * (lo + mid);
    let rq = 0.5 * (mid + hi);
    let f_lq = f(lq);
    let f_rq = f(rq);
    let left = simpson_panel(lo, mid, f_lo, f_lq, f_mid);
    let right = simpson_panel(mid, hi, f_mid, f_rq, f_hi);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(QuadratureError::NonConvergence {
            lo,
            hi,
            err: delta.abs() / 15.0,
            tol,
        });
    }
    let half_tol = 0.5 * tol;
    Ok(
        refine(f, lo, mid, f_lo, f_lq, f_mid, left, half_tol, depth - 1)?
            + refine(f, mid, hi, f_mid, f_rq, f_hi, right, half_tol, depth - 1)?,
    )
}
