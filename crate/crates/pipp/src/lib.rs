//! Intensity approximation for repulsive pairwise-interaction Gibbs point
//! processes.
//!
//! A stationary pairwise-interaction process with activity `β` and interaction
//! function `g ≤ 1` has an intractable intensity `λ = β·E[∏ g(v)]`. This crate
//! computes two closed-form fixed-point approximations of `λ`:
//!
//! * `λ_PS`, the Poisson-saddlepoint approximation, solving
//!   `λ = β·exp(-λG)` with `G = ∫(1-g)`;
//! * `λ_DPP`, a determinantal approximation, solving
//!   `log λ = log β + (1 + λG/κ)·log(1 - λG/(1 + λG/κ))`, where the
//!   repulsiveness constant `κ` is built from `∫(1-g)²` and the hard-core and
//!   interaction-range ball volumes.
//!
//! Both are validated against a Metropolis-Hastings birth-death simulator that
//! serves as the Monte-Carlo ground truth ([`sim`]).
//!
//! Module layout:
//! * [`models`] — interaction functions (Strauss, Strauss hard-core, piecewise
//!   Strauss hard-core, Diggle-Gratton), point patterns, and the Papangelou
//!   conditional intensity;
//! * [`quadrature`] — the interaction integrals `G` and `∫(1-g)²`, ball
//!   volumes, and the repulsiveness constant `κ`;
//! * [`approx`] — the `λ_PS` / `λ_DPP` fixed-point solvers, the inverse
//!   functions `W` and `W_κ`, and the eigenvalue-product form of the
//!   determinantal Laplace transform;
//! * [`sim`] — seeded, replicable birth-death Metropolis-Hastings sampling,
//!   Monte-Carlo intensity estimation, and a Georgii-Nguyen-Zessin residual
//!   diagnostic.

pub mod approx;
pub mod models;
pub mod quadrature;
pub mod sim;

pub use approx::{ApproxResult, EigenvalueSpec};
pub use models::{Family, PairwiseInteraction, PointPattern, Window};
pub use quadrature::InteractionSummary;
pub use sim::{MCEstimate, SimConfig};
