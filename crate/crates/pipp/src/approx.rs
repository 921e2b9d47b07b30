//! Fixed-point solvers for the Poisson-saddlepoint and determinantal
//! intensity approximations.
//!
//! Both approximations are fixed points of strictly decreasing maps on
//! `[0, β]`:
//!
//! * `λ_PS` solves `λ = f_PS(λ) = β·exp(-λG)`, equivalently
//!   `λ_PS = W(βG)/G` with `W` the inverse of `x ↦ x·eˣ`;
//! * `λ_DPP` solves `λ = f_DPP(λ) = β·(1 - λG/(1+λG/κ))^{1+λG/κ}`,
//!   equivalently `λ_DPP = W_κ(βG/κ)/(G/κ)` with `W_κ` the inverse of
//!   `x ↦ x·(1 - κx/(1+x))^{-1-x}`.
//!
//! Since `log(1-x) ≤ -x`, `f_DPP ≤ f_PS` pointwise and therefore
//! `λ_DPP ≤ λ_PS ≤ β`; both maps send 0 to `β` and decrease, so each fixed
//! point exists uniquely and is found by bracketed bisection on `[0, β]`
//! refined by guarded Newton steps.
//!
//! `f_DPP` is the continuous envelope of the discrete-`N` map
//! `λ ↦ β(1-λG/N)^N` with `N = ⌈λG/κ⌉`, whose direct solution (kept here for
//! diagnostics) may not exist or may differ from the envelope value. The
//! eigenvalue-product form `∏(1-λ̃ᵢ)` of the determinantal Laplace transform
//! underlying the construction is exposed as [`dpp_laplace_product`].

use crate::quadrature::InteractionSummary;
use thiserror::Error;

/// Convergence target: residual and step below `RESIDUAL_TOL·max(1, |λ|)`.
const RESIDUAL_TOL: f64 = 1e-15;
/// Iteration cap for the bracketed solver.
const MAX_ITERATIONS: u32 = 200;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ApproxError {
    #[error("eigenvalue {0} must lie in [0,1]")]
    EigenvalueOutOfRange(f64),
    #[error("the discrete-N fixed-point equation has no solution in [0, beta]")]
    NoDiscreteSolution,
}

/// One solved fixed point with solver diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint {
    /// The fixed-point value.
    pub value: f64,
    /// Absolute residual `|λ - f(λ)|` at the returned value.
    pub residual: f64,
    /// Solver iterations spent (0 when the value is exact by construction).
    pub iterations: u32,
}

/// Both intensity approximations for one `(β, G, κ)` triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxResult {
    pub lambda_ps: f64,
    pub lambda_dpp: f64,
    pub residual_ps: f64,
    pub residual_dpp: f64,
    pub iterations_ps: u32,
    pub iterations_dpp: u32,
}

/// The Poisson-saddlepoint map `f_PS(λ) = β·exp(-λG)`.
pub fn f_ps(beta: f64, g: f64, lambda: f64) -> f64 {
    debug_assert!(beta > 0.0 && g >= 0.0 && lambda >= 0.0);
    beta * (-lambda * g).exp()
}

/// The determinantal envelope map
/// `f_DPP(λ) = β·(1 - λG/(1+λG/κ))^{1+λG/κ}`, evaluated in log form to avoid
/// cancellation for small `λG`. For `κ = 0` this is the continuous limit
/// `f_PS`. The base is strictly positive for every `κ ∈ [0,1]`, since
/// `λG/(1+λG/κ) = κ·λG/(κ+λG) < κ ≤ 1`.
pub fn f_dpp(beta: f64, g: f64, kappa: f64, lambda: f64) -> f64 {
    debug_assert!(beta > 0.0 && g >= 0.0 && lambda >= 0.0);
    debug_assert!((0.0..=1.0).contains(&kappa));
    if kappa == 0.0 {
        return f_ps(beta, g, lambda);
    }
    let t = lambda * g;
    if t == 0.0 {
        return beta;
    }
    let exponent = 1.0 + t / kappa;
    beta * (exponent * (-t / exponent).ln_1p()).exp()
}

/// `d f_DPP / dλ`, used by the Newton refinement.
///
/// With `c = G/κ` and `s = (1+(c-G)λ)/(1+cλ)` the log-derivative is
/// `c·ln s - G/(1+(c-G)λ)`.
fn f_dpp_derivative(beta: f64, g: f64, kappa: f64, lambda: f64) -> f64 {
    if kappa == 0.0 {
        return -g * f_ps(beta, g, lambda);
    }
    let c = g / kappa;
    let excess = c - g; // G(1/κ - 1) >= 0
    let ln_s = (excess * lambda).ln_1p() - (c * lambda).ln_1p();
    f_dpp(beta, g, kappa, lambda) * (c * ln_s - g / (1.0 + excess * lambda))
}

/// Principal branch of the Lambert W function on `x ≥ 0`, i.e. the inverse of
/// `x ↦ x·eˣ`, computed as the unique fixed point of `w ↦ x·e^{-w}`.
pub fn lambert_w0(x: f64) -> f64 {
    assert!(x >= 0.0 && x.is_finite(), "lambert_w0 requires x >= 0");
    if x == 0.0 {
        return 0.0;
    }
    // W(x) <= ln(1+x) on x >= 0 gives a tight upper bracket.
    solve_decreasing_map(|w| x * (-w).exp(), |w| -x * (-w).exp(), x.ln_1p()).value
}

/// The inverse function `W_κ` of `x ↦ x·(1 - κx/(1+x))^{-1-x}` on `x ≥ 0`,
/// computed as the fixed point of `y ↦ x·(1 - κy/(1+y))^{1+y}` (which is the
/// map `f_DPP` with `β = x` and `G = κ`). `W_0` is the identity.
pub fn w_kappa(x: f64, kappa: f64) -> f64 {
    assert!(x >= 0.0 && x.is_finite(), "w_kappa requires x >= 0");
    assert!((0.0..=1.0).contains(&kappa), "kappa must lie in [0,1]");
    if kappa == 0.0 || x == 0.0 {
        return x;
    }
    solve_decreasing_map(
        |y| f_dpp(x, kappa, kappa, y),
        |y| f_dpp_derivative(x, kappa, kappa, y),
        x,
    )
    .value
}

/// Solves `λ = β·exp(-λG)` on `[0, β]`.
///
/// `G = 0` is the Poisson case with the exact solution `β`.
pub fn solve_lambda_ps(beta: f64, g: f64) -> FixedPoint {
    assert!(beta > 0.0 && beta.is_finite());
    assert!(g >= 0.0 && g.is_finite());
    if g == 0.0 {
        return FixedPoint {
            value: beta,
            residual: 0.0,
            iterations: 0,
        };
    }
    solve_decreasing_map(|l| f_ps(beta, g, l), |l| -g * f_ps(beta, g, l), beta)
}

/// Solves `λ = f_DPP(λ)` on `[0, β]`.
///
/// `κ = 0` dispatches to the Poisson-saddlepoint solution (the exact `κ → 0`
/// limit of the map); `G = 0` gives `β` exactly.
pub fn solve_lambda_dpp(beta: f64, g: f64, kappa: f64) -> FixedPoint {
    assert!(beta > 0.0 && beta.is_finite());
    assert!(g >= 0.0 && g.is_finite());
    assert!((0.0..=1.0).contains(&kappa));
    if g == 0.0 {
        return FixedPoint {
            value: beta,
            residual: 0.0,
            iterations: 0,
        };
    }
    if kappa == 0.0 {
        return solve_lambda_ps(beta, g);
    }
    solve_decreasing_map(
        |l| f_dpp(beta, g, kappa, l),
        |l| f_dpp_derivative(beta, g, kappa, l),
        beta,
    )
}

/// Runs both solvers for a model summary.
pub fn approximate(beta: f64, summary: &InteractionSummary) -> ApproxResult {
    let ps = solve_lambda_ps(beta, summary.g);
    let dpp = solve_lambda_dpp(beta, summary.g, summary.kappa);
    debug_assert!(dpp.value <= ps.value * (1.0 + 1e-12));
    debug_assert!(ps.value <= beta * (1.0 + 1e-12));
    ApproxResult {
        lambda_ps: ps.value,
        lambda_dpp: dpp.value,
        residual_ps: ps.residual,
        residual_dpp: dpp.residual,
        iterations_ps: ps.iterations,
        iterations_dpp: dpp.iterations,
    }
}

/// A finite eigenvalue list for the determinantal Laplace transform.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueSpec {
    eigenvalues: Vec<f64>,
}

impl EigenvalueSpec {
    pub fn new(eigenvalues: Vec<f64>) -> Result<Self, ApproxError> {
        for &ev in &eigenvalues {
            if !ev.is_finite() || !(0.0..=1.0).contains(&ev) {
                return Err(ApproxError::EigenvalueOutOfRange(ev));
            }
        }
        Ok(Self { eigenvalues })
    }

    /// The equal-eigenvalue choice: `count` copies of `total/count`
    /// (requires `count ≥ total` so each eigenvalue stays in `[0,1]`).
    pub fn equal_split(total: f64, count: usize) -> Result<Self, ApproxError> {
        assert!(total >= 0.0 && total.is_finite());
        let each = if count == 0 {
            0.0
        } else {
            total / count as f64
        };
        Self::new(vec![each; count])
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }
}

/// `E ∏ g(v) = ∏ᵢ (1-λ̃ᵢ)` for a DPP whose modified kernel has eigenvalues
/// `λ̃ᵢ`. The empty product is 1; for `N` equal eigenvalues `λG/N` this is
/// `(1-λG/N)^N`, the right-hand side of the discrete estimating equation.
pub fn dpp_laplace_product(spec: &EigenvalueSpec) -> f64 {
    spec.eigenvalues.iter().map(|ev| 1.0 - ev).product()
}

/// Solves the discrete estimating equation `λ = β(1-λG/N)^N` with
/// `N = ⌈λG/κ⌉`, returning the smallest solution in `[0, β]`.
///
/// The right-hand side is discontinuous in `λ`, so a solution may not exist
/// (reported as [`ApproxError::NoDiscreteSolution`]) and several may coexist.
/// The scan walks the continuity intervals `((N-1)κ/G, Nκ/G]` in order, so
/// the first root found is the smallest; the cost grows like `βG/κ²`
/// intervals. This is a diagnostic companion to [`solve_lambda_dpp`], which
/// solves the continuous envelope and is always preferred.
pub fn solve_lambda_dpp_discrete(beta: f64, g: f64, kappa: f64) -> Result<f64, ApproxError> {
    assert!(beta > 0.0 && beta.is_finite());
    assert!(g > 0.0 && g.is_finite());
    assert!(kappa > 0.0 && kappa <= 1.0);
    let n_max = (beta * g / kappa).ceil() as u64 + 1;
    for n in 1..=n_max {
        let lo = (n - 1) as f64 * kappa / g;
        if lo >= beta {
            break;
        }
        let hi = (n as f64 * kappa / g).min(beta);
        let map = |l: f64| beta * (1.0 - l * g / n as f64).powi(n as i32);
        let h_lo = lo - map(lo);
        let h_hi = hi - map(hi);
        // h is increasing on the interval; a root at the open left end
        // belongs to the previous interval (closed there) and was already
        // examined.
        if h_lo < 0.0 && h_hi >= 0.0 {
            let mut a = lo;
            let mut b = hi;
            for _ in 0..MAX_ITERATIONS {
                let mid = 0.5 * (a + b);
                if mid - map(mid) >= 0.0 {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            return Ok(0.5 * (a + b));
        }
    }
    Err(ApproxError::NoDiscreteSolution)
}

/// Finds the unique fixed point of a continuous, strictly decreasing map on
/// `[0, upper]` (where `map(0) > 0` and `map(upper) ≤ upper`): bracketed
/// bisection, refined by Newton steps whenever they stay inside the bracket.
fn solve_decreasing_map<M, D>(map: M, derivative: D, upper: f64) -> FixedPoint
where
    M: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    debug_assert!(upper > 0.0 && upper.is_finite());
    let mut lo = 0.0_f64;
    let mut hi = upper;
    let mut x = 0.5 * (lo + hi);
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let h = x - map(x);
        if h == 0.0 {
            break;
        }
        if h > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        // h'(x) = 1 - f'(x) >= 1 for a decreasing f, so the Newton step is
        // well defined; fall back to bisection when it leaves the bracket.
        let slope = 1.0 - derivative(x);
        let mut next = if slope.is_finite() && slope > 0.0 {
            x - h / slope
        } else {
            f64::NAN
        };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= RESIDUAL_TOL * next.abs().max(1.0) {
            x = next;
            break;
        }
        x = next;
    }
    FixedPoint {
        value: x,
        residual: (x - map(x)).abs(),
        iterations,
    }
}
