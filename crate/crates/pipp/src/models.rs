//! Pairwise interaction models and point patterns.
//!
//! The interaction function `g : ℝ⁺ → [0,1]` is isotropic for every supported
//! family, so it is exposed as a radial function of `r = ‖u-v‖`. All supported
//! families are purely inhibitory (`g ≤ 1`) with a finite range `R` beyond
//! which `g ≡ 1`, and an optional hard core `δ` below which `g ≡ 0`.
//!
//! Boundary conventions follow the case lists of the model definitions:
//! `g(r) = 0` for `r < δ`, the interaction bands are closed on both ends
//! (`δ ≤ r ≤ R`), and at an interior breakpoint shared by two bands the
//! lower-index band wins. These choices only matter on sets of measure zero.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised when constructing an interaction model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("gamma must be non-empty")]
    EmptyGamma,
    #[error("gamma[{index}] = {value} is outside [0,1] (only inhibitory models are supported)")]
    GammaOutOfRange { index: usize, value: f64 },
    #[error("family {family:?} takes exactly one interaction parameter, got {got}")]
    GammaArity { family: Family, got: usize },
    #[error("expected one radius per interaction parameter ({expected}), got {got}")]
    RadiiArity { expected: usize, got: usize },
    #[error("radii must be finite, positive and strictly increasing")]
    BadRadii,
    #[error("hardcore {hardcore} must be finite, >= 0 and < the first breakpoint {first_radius}")]
    BadHardcore { hardcore: f64, first_radius: f64 },
    #[error("family {family:?} does not admit a hard core")]
    HardcoreNotAllowed { family: Family },
    #[error("family {family:?} requires a positive hard core")]
    HardcoreRequired { family: Family },
    #[error("spatial dimension must be >= 1")]
    BadDimension,
}

/// Errors raised when constructing a point pattern or window.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PatternError {
    #[error("window bounds must be finite with lo < hi in every coordinate")]
    BadWindow,
    #[error("coordinate buffer length {len} is not a multiple of the dimension {dim}")]
    CoordsMismatch { len: usize, dim: usize },
    #[error("point {index} lies outside the window")]
    PointOutsideWindow { index: usize },
    #[error("points {first} and {second} are identical")]
    DuplicatePoints { first: usize, second: usize },
}

/// The supported interaction families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Strauss,
    StraussHardCore,
    PiecewiseStraussHardCore,
    DiggleGratton,
}

/// A pairwise interaction function together with its parameters.
///
/// Parameters are validated at construction; a constructed value is immutable
/// and every operation on it is pure, so models can be shared freely across
/// threads.
///
/// Internal representation: `radii` holds the upper breakpoints of the
/// interaction bands, strictly increasing and ending at the range `R`;
/// `gamma[i]` is the value of `g` on the band ending at `radii[i]`. The hard
/// core `δ` (possibly 0) is the lower edge of the first band. For the
/// Diggle-Gratton family `gamma` and `radii` hold the single `γ` and `R` of
/// `g(r) = (r/R)^{1/γ}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelJson", into = "ModelJson")]
pub struct PairwiseInteraction {
    family: Family,
    gamma: Vec<f64>,
    radii: Vec<f64>,
    hardcore: f64,
    dim: u32,
}

/// Wire schema for model configuration files:
/// `{"family", "gamma", "radii", "hardcore", "dim"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct ModelJson {
    family: Family,
    gamma: Vec<f64>,
    radii: Vec<f64>,
    #[serde(default)]
    hardcore: f64,
    #[serde(default = "default_dim")]
    dim: u32,
}

fn default_dim() -> u32 {
    2
}

impl TryFrom<ModelJson> for PairwiseInteraction {
    type Error = ModelError;

    fn try_from(raw: ModelJson) -> Result<Self, ModelError> {
        PairwiseInteraction::new(raw.family, raw.gamma, raw.radii, raw.hardcore, raw.dim)
    }
}

impl From<PairwiseInteraction> for ModelJson {
    fn from(model: PairwiseInteraction) -> Self {
        ModelJson {
            family: model.family,
            gamma: model.gamma,
            radii: model.radii,
            hardcore: model.hardcore,
            dim: model.dim,
        }
    }
}

impl PairwiseInteraction {
    /// Builds a model from raw parts, validating every invariant.
    pub fn new(
        family: Family,
        gamma: Vec<f64>,
        radii: Vec<f64>,
        hardcore: f64,
        dim: u32,
    ) -> Result<Self, ModelError> {
        if dim < 1 {
            return Err(ModelError::BadDimension);
        }
        if gamma.is_empty() {
            return Err(ModelError::EmptyGamma);
        }
        for (index, &value) in gamma.iter().enumerate() {
            if !value.is_finite() || !(0.0..=1.0).contains(&value) {
                return Err(ModelError::GammaOutOfRange { index, value });
            }
        }
        if family != Family::PiecewiseStraussHardCore && gamma.len() != 1 {
            return Err(ModelError::GammaArity {
                family,
                got: gamma.len(),
            });
        }
        if radii.len() != gamma.len() {
            return Err(ModelError::RadiiArity {
                expected: gamma.len(),
                got: radii.len(),
            });
        }
        let increasing = radii.iter().all(|r| r.is_finite() && *r > 0.0)
            && radii.windows(2).all(|w| w[0] < w[1]);
        if !increasing {
            return Err(ModelError::BadRadii);
        }
        if !hardcore.is_finite() || hardcore < 0.0 || hardcore >= radii[0] {
            return Err(ModelError::BadHardcore {
                hardcore,
                first_radius: radii[0],
            });
        }
        match family {
            Family::Strauss | Family::DiggleGratton if hardcore != 0.0 => {
                return Err(ModelError::HardcoreNotAllowed { family });
            }
            Family::StraussHardCore if hardcore == 0.0 => {
                return Err(ModelError::HardcoreRequired { family });
            }
            _ => {}
        }
        Ok(Self {
            family,
            gamma,
            radii,
            hardcore,
            dim,
        })
    }

    /// Strauss model: `g(r) = γ` for `r ≤ R`, 1 beyond.
    pub fn strauss(gamma: f64, range: f64) -> Result<Self, ModelError> {
        Self::new(Family::Strauss, vec![gamma], vec![range], 0.0, 2)
    }

    /// Strauss hard-core model: `g(r) = 0` for `r < δ`, `γ` on `[δ, R]`, 1 beyond.
    pub fn strauss_hard_core(gamma: f64, hardcore: f64, range: f64) -> Result<Self, ModelError> {
        Self::new(
            Family::StraussHardCore,
            vec![gamma],
            vec![range],
            hardcore,
            2,
        )
    }

    /// Piecewise Strauss hard-core model: `g(r) = γᵢ` on the i-th band.
    ///
    /// `radii` are the upper breakpoints of the bands (one per `γᵢ`, ending at
    /// the range `R`); the first band starts at `hardcore` (0 for no hard core).
    pub fn piecewise_strauss_hard_core(
        gamma: Vec<f64>,
        hardcore: f64,
        radii: Vec<f64>,
    ) -> Result<Self, ModelError> {
        Self::new(Family::PiecewiseStraussHardCore, gamma, radii, hardcore, 2)
    }

    /// Diggle-Gratton model: `g(r) = (r/R)^{1/γ}` for `r ≤ R`, 1 beyond,
    /// with the conventions `t^∞ = 0` for `t ∈ (0,1)` and `1^∞ = 1`, so
    /// `γ = 0` degenerates to a hard core of radius `R`.
    pub fn diggle_gratton(gamma: f64, range: f64) -> Result<Self, ModelError> {
        Self::new(Family::DiggleGratton, vec![gamma], vec![range], 0.0, 2)
    }

    /// Returns a copy with the spatial dimension replaced.
    pub fn with_dim(&self, dim: u32) -> Result<Self, ModelError> {
        Self::new(
            self.family,
            self.gamma.clone(),
            self.radii.clone(),
            self.hardcore,
            dim,
        )
    }

    /// Returns a copy with the first interaction parameter `γ₁` replaced,
    /// as used by the experiment sweeps.
    pub fn with_gamma1(&self, gamma1: f64) -> Result<Self, ModelError> {
        let mut gamma = self.gamma.clone();
        gamma[0] = gamma1;
        Self::new(
            self.family,
            gamma,
            self.radii.clone(),
            self.hardcore,
            self.dim,
        )
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    /// First interaction parameter `γ₁` (the swept one).
    pub fn gamma1(&self) -> f64 {
        self.gamma[0]
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Interaction range `R`: `g(r) = 1` for every `r > R`.
    pub fn range(&self) -> f64 {
        *self.radii.last().expect("radii validated non-empty")
    }

    /// Hard-core distance `δ` (0 when the model has none).
    pub fn hardcore(&self) -> f64 {
        self.hardcore
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// Evaluates the interaction function at distance `r ≥ 0`.
    pub fn eval_g(&self, r: f64) -> f64 {
        assert!(r >= 0.0, "eval_g requires a nonnegative distance, got {r}");
        self.profile().eval_r(r)
    }

    /// Papangelou conditional intensity `λ(u, x) = β·∏_{v∈x} g(‖u-v‖)`.
    ///
    /// Short-circuits to 0 on the first vanishing factor (hard-core hit). By
    /// the finite-range property only points of `x` within distance `R` of `u`
    /// contribute. `u` is assumed not to be a point of `x`.
    pub fn papangelou(&self, beta: f64, u: &[f64], x: &PointPattern) -> f64 {
        assert!(beta > 0.0, "papangelou requires beta > 0");
        assert_eq!(u.len(), x.dim(), "point dimension mismatch");
        let profile = self.profile();
        let mut value = beta;
        for v in x.points() {
            let r2 = dist_sq(u, v);
            let g = profile.eval_sq(r2);
            if g == 0.0 {
                return 0.0;
            }
            value *= g;
        }
        value
    }

    /// Precomputed radial evaluator used by the hot loops.
    pub(crate) fn profile(&self) -> RadialProfile {
        match self.family {
            Family::DiggleGratton => RadialProfile::DiggleGratton {
                range: self.range(),
                range_sq: self.range() * self.range(),
                inv_gamma: 1.0 / self.gamma[0],
                hard: self.gamma[0] == 0.0,
            },
            _ => RadialProfile::Bands {
                hardcore: self.hardcore,
                hardcore_sq: self.hardcore * self.hardcore,
                uppers: self.radii.clone(),
                uppers_sq: self.radii.iter().map(|r| r * r).collect(),
                values: self.gamma.clone(),
            },
        }
    }
}

pub(crate) fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

/// Radial form of an interaction function, with both plain and
/// squared-distance entry points. The squared path spares a `sqrt` per pair
/// for the piecewise-constant families; the two paths may disagree only when
/// a distance sits within a rounding error of a breakpoint.
#[derive(Debug, Clone)]
pub(crate) enum RadialProfile {
    Bands {
        hardcore: f64,
        hardcore_sq: f64,
        uppers: Vec<f64>,
        uppers_sq: Vec<f64>,
        values: Vec<f64>,
    },
    DiggleGratton {
        range: f64,
        range_sq: f64,
        inv_gamma: f64,
        hard: bool,
    },
}

impl RadialProfile {
    pub(crate) fn eval_r(&self, r: f64) -> f64 {
        match self {
            RadialProfile::Bands {
                hardcore,
                uppers,
                values,
                ..
            } => {
                if r < *hardcore {
                    return 0.0;
                }
                for (upper, value) in uppers.iter().zip(values) {
                    if r <= *upper {
                        return *value;
                    }
                }
                1.0
            }
            RadialProfile::DiggleGratton {
                range,
                inv_gamma,
                hard,
                ..
            } => {
                if r > *range {
                    1.0
                } else if *hard {
                    // 1^∞ = 1, t^∞ = 0 for t in (0,1)
                    if r < *range {
                        0.0
                    } else {
                        1.0
                    }
                } else {
                    (r / range).powf(*inv_gamma)
                }
            }
        }
    }

    #[inline]
    pub(crate) fn eval_sq(&self, r2: f64) -> f64 {
        match self {
            RadialProfile::Bands {
                hardcore_sq,
                uppers_sq,
                values,
                ..
            } => {
                if r2 < *hardcore_sq {
                    return 0.0;
                }
                for (upper_sq, value) in uppers_sq.iter().zip(values) {
                    if r2 <= *upper_sq {
                        return *value;
                    }
                }
                1.0
            }
            RadialProfile::DiggleGratton {
                range,
                range_sq,
                inv_gamma,
                hard,
            } => {
                if r2 > *range_sq {
                    1.0
                } else if *hard {
                    if r2 < *range_sq {
                        0.0
                    } else {
                        1.0
                    }
                } else {
                    (r2.sqrt() / range).powf(*inv_gamma)
                }
            }
        }
    }
}

/// Axis-aligned rectangular observation window `[lo₁,hi₁]×…×[lo_d,hi_d]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Window {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl Window {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self, PatternError> {
        let ok = !lo.is_empty()
            && lo.len() == hi.len()
            && lo
                .iter()
                .zip(&hi)
                .all(|(a, b)| a.is_finite() && b.is_finite() && a < b);
        if !ok {
            return Err(PatternError::BadWindow);
        }
        Ok(Self { lo, hi })
    }

    /// The unit cube `[0,1]^d`.
    pub fn unit(dim: u32) -> Self {
        Self {
            lo: vec![0.0; dim as usize],
            hi: vec![1.0; dim as usize],
        }
    }

    /// Planar rectangle `[x0,x1]×[y0,y1]`.
    pub fn rect((x0, y0): (f64, f64), (x1, y1): (f64, f64)) -> Result<Self, PatternError> {
        Self::new(vec![x0, y0], vec![x1, y1])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).product()
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        point.len() == self.dim()
            && point
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(x, (a, b))| *a <= *x && *x <= *b)
    }

    pub fn contains_window(&self, other: &Window) -> bool {
        other.dim() == self.dim()
            && self
                .lo
                .iter()
                .zip(&other.lo)
                .all(|(outer, inner)| outer <= inner)
            && self
                .hi
                .iter()
                .zip(&other.hi)
                .all(|(outer, inner)| inner <= outer)
    }

    /// Grows the window by `margin` on every side.
    pub fn extended(&self, margin: f64) -> Self {
        assert!(margin >= 0.0 && margin.is_finite());
        Self {
            lo: self.lo.iter().map(|a| a - margin).collect(),
            hi: self.hi.iter().map(|b| b + margin).collect(),
        }
    }
}

/// A finite point configuration in a rectangular window.
///
/// Coordinates are stored flat (`dim` values per point). Every point lies in
/// the window and no two points coincide; both are enforced at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PointPattern {
    coords: Vec<f64>,
    window: Window,
}

impl PointPattern {
    pub fn new(coords: Vec<f64>, window: Window) -> Result<Self, PatternError> {
        let dim = window.dim();
        if !coords.len().is_multiple_of(dim) {
            return Err(PatternError::CoordsMismatch {
                len: coords.len(),
                dim,
            });
        }
        let n = coords.len() / dim;
        for index in 0..n {
            if !window.contains(&coords[index * dim..(index + 1) * dim]) {
                return Err(PatternError::PointOutsideWindow { index });
            }
        }
        // Duplicate detection via a lexicographic sort of point indices; the
        // coordinates are finite here, so the comparator is total.
        let mut order: Vec<usize> = (0..n).collect();
        let point = |i: usize| &coords[i * dim..(i + 1) * dim];
        order.sort_unstable_by(|&a, &b| point(a).partial_cmp(point(b)).expect("finite coords"));
        for pair in order.windows(2) {
            if point(pair[0]) == point(pair[1]) {
                return Err(PatternError::DuplicatePoints {
                    first: pair[0].min(pair[1]),
                    second: pair[0].max(pair[1]),
                });
            }
        }
        Ok(Self { coords, window })
    }

    pub fn empty(window: Window) -> Self {
        Self {
            coords: Vec::new(),
            window,
        }
    }

    /// Planar convenience constructor.
    pub fn from_xy(points: &[(f64, f64)], window: Window) -> Result<Self, PatternError> {
        let coords = points.iter().flat_map(|&(x, y)| [x, y]).collect();
        Self::new(coords, window)
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn dim(&self) -> usize {
        self.window.dim()
    }

    pub fn n_points(&self) -> usize {
        self.coords.len() / self.window.dim()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn point(&self, index: usize) -> &[f64] {
        let dim = self.window.dim();
        &self.coords[index * dim..(index + 1) * dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.window.dim())
    }

    /// Restricts the pattern to a sub-window, attaching the new window.
    ///
    /// The sub-window must be contained in the pattern's window.
    pub fn clip(&self, window: &Window) -> PointPattern {
        assert!(
            self.window.contains_window(window),
            "clip window must be contained in the pattern window"
        );
        let coords = self
            .points()
            .filter(|p| window.contains(p))
            .flatten()
            .copied()
            .collect();
        PointPattern {
            coords,
            window: window.clone(),
        }
    }

    /// Smallest pairwise distance, or `None` for patterns with < 2 points.
    pub fn min_pairwise_distance(&self) -> Option<f64> {
        let n = self.n_points();
        if n < 2 {
            return None;
        }
        let mut best = f64::INFINITY;
        for i in 0..n {
            for j in (i + 1)..n {
                best = best.min(dist_sq(self.point(i), self.point(j)));
            }
        }
        Some(best.sqrt())
    }
}
