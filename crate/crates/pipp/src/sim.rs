//! Metropolis-Hastings birth-death simulation of pairwise-interaction Gibbs
//! processes.
//!
//! The chain targets the finite Gibbs process with Papangelou conditional
//! intensity `λ(u,x) = β·∏ g(‖u-v‖)` on an extended window (the target window
//! grown by a margin, 2R by default). Each step proposes with probability 1/2
//! a birth at a uniform location `u` (accepted with probability
//! `min(1, λ(u,x)·|W|/(n(x)+1))`) and otherwise the death of a uniformly
//! chosen point `v` (accepted with probability `min(1, n(x)/(λ(v,x∖v)·|W|))`).
//! The chain starts from the empty configuration; burn-in is folded into the
//! step budget and one pattern is drawn per chain.
//!
//! Replicates are reproducible: replicate `i` runs on a ChaCha8 stream seeded
//! with `replicate_seed(master_seed, i)` (a splitmix64-style hash), so results
//! are independent of scheduling, and identical `(config, seed)` pairs give
//! byte-identical output. Replicates run in parallel and are reduced in
//! replicate order.
//!
//! Conditional-intensity evaluations use spatial hashing with cell side at
//! least the interaction range, so each proposal touches only the 3^d
//! neighboring cells.
//!
//! The Georgii-Nguyen-Zessin identity
//! `E Σ_{u∈X} h(u, X∖u) = ∫ E[h(u,X)·λ(u,X)] du` with `h = 1/λ` gives the
//! sampler-correctness diagnostic [`gnz_residual`]: `Σ 1/λ(u, x∖u) - |W|`,
//! which has expectation zero under the target.

use crate::models::{dist_sq, PairwiseInteraction, PointPattern, RadialProfile, Window};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("point {index} has zero conditional intensity (pattern/model mismatch)")]
    ZeroConditionalIntensity { index: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Configuration of one Monte-Carlo experiment.
#[derive(Debug, Clone, Serialize)]
pub struct SimConfig {
    pub model: PairwiseInteraction,
    pub beta: f64,
    pub target_window: Window,
    /// Margin added on every side of the target window for simulation.
    pub extension: f64,
    pub n_steps: u64,
    pub n_replicates: u32,
    pub seed: u64,
}

impl SimConfig {
    /// Defaults: unit-cube target window, extension `2R`, 10^6 steps,
    /// 1000 replicates, seed 0.
    pub fn new(model: PairwiseInteraction, beta: f64) -> Self {
        assert!(beta > 0.0 && beta.is_finite(), "beta must be positive");
        let extension = 2.0 * model.range();
        let target_window = Window::unit(model.dim());
        Self {
            model,
            beta,
            target_window,
            extension,
            n_steps: 1_000_000,
            n_replicates: 1000,
            seed: 0,
        }
    }

    pub fn with_target_window(mut self, window: Window) -> Self {
        assert_eq!(window.dim(), self.model.dim() as usize);
        self.target_window = window;
        self
    }

    pub fn with_extension(mut self, extension: f64) -> Self {
        assert!(extension >= 0.0 && extension.is_finite());
        self.extension = extension;
        self
    }

    pub fn with_steps(mut self, n_steps: u64) -> Self {
        assert!(n_steps >= 1);
        self.n_steps = n_steps;
        self
    }

    pub fn with_replicates(mut self, n_replicates: u32) -> Self {
        assert!(n_replicates >= 1);
        self.n_replicates = n_replicates;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// The simulation window: the target window grown by the extension.
    pub fn extended_window(&self) -> Window {
        self.target_window.extended(self.extension)
    }

    /// Non-fatal configuration smells (e.g. an extension below the
    /// interaction range, which leaves visible boundary bias).
    pub fn warnings(&self) -> Vec<String> {
        let mut notes = Vec::new();
        if self.extension < self.model.range() {
            notes.push(format!(
                "extension {} is below the interaction range {}; clipped intensities will carry boundary bias",
                self.extension,
                self.model.range()
            ));
        }
        notes
    }
}

/// Monte-Carlo intensity estimate over independent replicates.
#[derive(Debug, Clone, PartialEq)]
pub struct MCEstimate {
    /// Mean of the per-replicate intensities (clipped count / target volume).
    pub mean_intensity: f64,
    /// Sample standard deviation of the per-replicate intensity over √m.
    pub std_error: f64,
    /// Clipped point count of every replicate, in replicate order.
    pub replicate_counts: Vec<u64>,
    /// (q1, median, q3) of the per-replicate intensity, linearly interpolated.
    pub quartiles: (f64, f64, f64),
}

/// Deterministic per-replicate seed stream: a splitmix64 finalizer applied to
/// the master seed offset by the replicate index. Documented contract:
/// identical `(master, replicate)` always map to the same seed, and distinct
/// replicates get statistically independent ChaCha8 streams.
pub fn replicate_seed(master: u64, replicate: u64) -> u64 {
    let mut z =
        master.wrapping_add((replicate.wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draws one approximate realization of the Gibbs process on the extended
/// window after `n_steps` birth-death proposals from the empty configuration.
pub fn mh_sample(config: &SimConfig, replicate_seed: u64) -> PointPattern {
    let window = config.extended_window();
    let mut chain = ChainState::new(&config.model, config.beta, &window);
    let mut rng = ChaCha8Rng::seed_from_u64(replicate_seed);
    let volume = window.volume();
    let dim = window.dim();
    let mut location = vec![0.0_f64; dim];

    for _ in 0..config.n_steps {
        if rng.random::<f64>() < 0.5 {
            // birth proposal
            for (coord, (lo, hi)) in location.iter_mut().zip(window.lo().iter().zip(window.hi())) {
                *coord = rng.random_range(*lo..*hi);
            }
            let lambda = chain.conditional_intensity(&location, None);
            if lambda > 0.0 {
                let accept = lambda * volume / (chain.n() as f64 + 1.0);
                if accept >= 1.0 || rng.random::<f64>() < accept {
                    chain.insert(&location);
                }
            }
        } else {
            // death proposal; with an empty configuration the move is void
            let n = chain.n();
            if n == 0 {
                continue;
            }
            let victim = rng.random_range(0..n);
            let lambda = chain.conditional_intensity(chain.point(victim), Some(victim as u32));
            // lambda = 0 makes the ratio infinite: removing a point the model
            // forbids is always accepted
            let accept = n as f64 / (lambda * volume);
            if accept >= 1.0 || rng.random::<f64>() < accept {
                chain.remove(victim);
            }
        }
    }

    PointPattern::new(chain.into_coords(), window)
        .expect("chain keeps points inside the window and a.s. distinct")
}

/// Runs `n_replicates` independent chains, clips each pattern to the target
/// window, and aggregates mean intensity, standard error and quartiles.
pub fn estimate_intensity(config: &SimConfig) -> MCEstimate {
    let target_volume = config.target_window.volume();
    let replicate_counts: Vec<u64> = (0..u64::from(config.n_replicates))
        .into_par_iter()
        .map(|rep| {
            let pattern = mh_sample(config, replicate_seed(config.seed, rep));
            pattern.clip(&config.target_window).n_points() as u64
        })
        .collect();

    let m = replicate_counts.len() as f64;
    let intensities: Vec<f64> = replicate_counts
        .iter()
        .map(|&c| c as f64 / target_volume)
        .collect();
    let mean_intensity = intensities.iter().sum::<f64>() / m;
    let variance = if replicate_counts.len() > 1 {
        intensities
            .iter()
            .map(|x| (x - mean_intensity).powi(2))
            .sum::<f64>()
            / (m - 1.0)
    } else {
        0.0
    };
    let std_error = (variance / m).sqrt();

    let mut sorted = intensities;
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let quartiles = (
        quantile_sorted(&sorted, 0.25),
        quantile_sorted(&sorted, 0.5),
        quantile_sorted(&sorted, 0.75),
    );

    MCEstimate {
        mean_intensity,
        std_error,
        replicate_counts,
        quartiles,
    }
}

/// Inverse-intensity Georgii-Nguyen-Zessin residual
/// `Σ_{u∈x} 1/λ(u, x∖u) - |W|`, which has expectation zero when `x` follows
/// the model on its window.
pub fn gnz_residual(
    pattern: &PointPattern,
    model: &PairwiseInteraction,
    beta: f64,
) -> Result<f64, SimError> {
    assert!(beta > 0.0 && beta.is_finite());
    let chain = ChainState::from_pattern(model, beta, pattern);
    let mut inverse_sum = 0.0;
    for index in 0..pattern.n_points() {
        let lambda = chain.conditional_intensity(pattern.point(index), Some(index as u32));
        if lambda == 0.0 {
            return Err(SimError::ZeroConditionalIntensity { index });
        }
        inverse_sum += 1.0 / lambda;
    }
    Ok(inverse_sum - pattern.window().volume())
}

/// Writes one CSV per replicate (`replicate-<index>.csv`, header `x,y` in the
/// planar case, `x1,..,xd` otherwise) plus a `manifest.json` echoing the
/// configuration and the derived per-replicate seeds.
pub fn dump_replicates(config: &SimConfig, dir: &Path) -> Result<(), SimError> {
    std::fs::create_dir_all(dir)?;
    let dim = config.model.dim() as usize;
    let header = if dim == 2 {
        "x,y".to_string()
    } else {
        (1..=dim)
            .map(|k| format!("x{k}"))
            .collect::<Vec<_>>()
            .join(",")
    };
    let seeds: Vec<u64> = (0..u64::from(config.n_replicates))
        .map(|rep| replicate_seed(config.seed, rep))
        .collect();
    for (rep, &seed) in seeds.iter().enumerate() {
        let pattern = mh_sample(config, seed);
        let mut out = String::new();
        out.push_str(&header);
        out.push('\n');
        for point in pattern.points() {
            let row: Vec<String> = point.iter().map(|c| format!("{c:.17e}")).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        std::fs::write(dir.join(format!("replicate-{rep:04}.csv")), out)?;
    }
    let manifest = serde_json::json!({
        "config": config,
        "seeds": seeds,
    });
    let mut file = std::fs::File::create(dir.join("manifest.json"))?;
    writeln!(
        file,
        "{}",
        serde_json::to_string_pretty(&manifest).expect("config serializes")
    )?;
    Ok(())
}

/// Chain state: flat coordinates plus a uniform grid with cell side >= the
/// interaction range, so conditional intensities only visit 3^d cells.
struct ChainState {
    profile: RadialProfile,
    beta: f64,
    dim: usize,
    lo: Vec<f64>,
    inv_cell: Vec<f64>,
    cells_per_dim: Vec<usize>,
    strides: Vec<usize>,
    /// Point indices per cell.
    bins: Vec<Vec<u32>>,
    /// Neighboring cells (incl. self) per cell, built once.
    neighbors: Vec<Vec<u32>>,
    coords: Vec<f64>,
    cell_of: Vec<u32>,
}

impl ChainState {
    fn new(model: &PairwiseInteraction, beta: f64, window: &Window) -> Self {
        assert_eq!(
            model.dim() as usize,
            window.dim(),
            "model/window dimension mismatch"
        );
        let dim = window.dim();
        let range = model.range();
        let mut cells_per_dim = Vec::with_capacity(dim);
        let mut inv_cell = Vec::with_capacity(dim);
        for (lo, hi) in window.lo().iter().zip(window.hi()) {
            let side = hi - lo;
            let cells = ((side / range).floor() as usize).max(1);
            cells_per_dim.push(cells);
            inv_cell.push(cells as f64 / side);
        }
        let mut strides = vec![1_usize; dim];
        for k in 1..dim {
            strides[k] = strides[k - 1] * cells_per_dim[k - 1];
        }
        let total: usize = cells_per_dim.iter().product();
        let neighbors = build_neighbors(&cells_per_dim, &strides, total);
        Self {
            profile: model.profile(),
            beta,
            dim,
            lo: window.lo().to_vec(),
            inv_cell,
            cells_per_dim,
            strides,
            bins: vec![Vec::new(); total],
            neighbors,
            coords: Vec::new(),
            cell_of: Vec::new(),
        }
    }

    fn from_pattern(model: &PairwiseInteraction, beta: f64, pattern: &PointPattern) -> Self {
        let mut state = Self::new(model, beta, pattern.window());
        for point in pattern.points() {
            state.insert(point);
        }
        state
    }

    fn n(&self) -> usize {
        self.cell_of.len()
    }

    fn point(&self, index: usize) -> &[f64] {
        &self.coords[index * self.dim..(index + 1) * self.dim]
    }

    fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    fn cell_index(&self, point: &[f64]) -> usize {
        let mut cell = 0;
        for (k, &coord) in point.iter().enumerate() {
            let idx =
                (((coord - self.lo[k]) * self.inv_cell[k]) as usize).min(self.cells_per_dim[k] - 1);
            cell += idx * self.strides[k];
        }
        cell
    }

    fn insert(&mut self, point: &[f64]) {
        debug_assert_eq!(point.len(), self.dim);
        let cell = self.cell_index(point);
        let index = self.n() as u32;
        self.bins[cell].push(index);
        self.cell_of.push(cell as u32);
        self.coords.extend_from_slice(point);
    }

    fn remove(&mut self, index: usize) {
        let cell = self.cell_of[index] as usize;
        let slot = self.bins[cell]
            .iter()
            .position(|&p| p as usize == index)
            .expect("point registered in its cell");
        self.bins[cell].swap_remove(slot);

        let last = self.n() - 1;
        if index != last {
            // move the last point into the vacated slot and rebind its cell entry
            let last_cell = self.cell_of[last] as usize;
            let entry = self.bins[last_cell]
                .iter()
                .position(|&p| p as usize == last)
                .expect("point registered in its cell");
            self.bins[last_cell][entry] = index as u32;
            self.cell_of[index] = self.cell_of[last];
            let (dst, src) = (index * self.dim, last * self.dim);
            self.coords.copy_within(src..src + self.dim, dst);
        }
        self.cell_of.pop();
        self.coords.truncate(last * self.dim);
    }

    /// `λ(u, x∖skip) = β·∏ g(‖u-v‖)`, short-circuiting on a vanishing factor.
    fn conditional_intensity(&self, point: &[f64], skip: Option<u32>) -> f64 {
        let cell = self.cell_index(point);
        let mut value = self.beta;
        for &neighbor in &self.neighbors[cell] {
            for &other in &self.bins[neighbor as usize] {
                if skip == Some(other) {
                    continue;
                }
                let r2 = dist_sq(point, self.point(other as usize));
                let g = self.profile.eval_sq(r2);
                if g == 0.0 {
                    return 0.0;
                }
                value *= g;
            }
        }
        value
    }
}

/// Neighbor lists (the 3^d surrounding cells, clamped at the boundary) for
/// every cell of a grid described by per-dimension cell counts and strides.
fn build_neighbors(cells_per_dim: &[usize], strides: &[usize], total: usize) -> Vec<Vec<u32>> {
    let dim = cells_per_dim.len();
    let mut neighbors = Vec::with_capacity(total);
    let mut idx = vec![0_usize; dim];
    for cell in 0..total {
        // decompose the flat index
        let mut rest = cell;
        for k in (0..dim).rev() {
            idx[k] = rest / strides[k];
            rest %= strides[k];
        }
        let lo: Vec<usize> = idx.iter().map(|&i| i.saturating_sub(1)).collect();
        let hi: Vec<usize> = idx
            .iter()
            .zip(cells_per_dim)
            .map(|(&i, &c)| (i + 1).min(c - 1))
            .collect();
        let mut list = Vec::new();
        let mut cursor = lo.clone();
        loop {
            let flat: usize = cursor.iter().zip(strides).map(|(&i, &s)| i * s).sum();
            list.push(flat as u32);
            let mut k = 0;
            loop {
                cursor[k] += 1;
                if cursor[k] <= hi[k] {
                    break;
                }
                cursor[k] = lo[k];
                k += 1;
                if k == dim {
                    break;
                }
            }
            if k == dim {
                break;
            }
        }
        neighbors.push(list);
    }
    neighbors
}

/// Linear-interpolation quantile of a sorted sample.
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * p;
    let base = h.floor() as usize;
    let frac = h - base as f64;
    if base + 1 < sorted.len() {
        sorted[base] + frac * (sorted[base + 1] - sorted[base])
    } else {
        sorted[base]
    }
}
