//! Desk-scale comparison of the two approximations against the
//! Metropolis-Hastings oracle for the Strauss model (R = 0.1, beta = 100).
//!
//! Run with: `cargo run --release -p pipp --example desk_check`

use pipp::approx::approximate;
use pipp::quadrature::summarize;
use pipp::sim::{estimate_intensity, SimConfig};
use pipp::PairwiseInteraction;
use std::time::Instant;

fn main() {
    let beta = 100.0;
    for gamma in [0.0, 0.1, 0.2, 0.3] {
        let model = PairwiseInteraction::strauss(gamma, 0.1).unwrap();
        let summary = summarize(&model).unwrap();
        let approx = approximate(beta, &summary);
        let config = SimConfig::new(model, beta)
            .with_steps(100_000)
            .with_replicates(200)
            .with_seed(20260808);
        let start = Instant::now();
        let mc = estimate_intensity(&config);
        let elapsed = start.elapsed().as_secs_f64();
        println!(
            "gamma={gamma:.1}  lambda_ps={:.4}  lambda_dpp={:.4}  mc={:.4} +- {:.4}  (|dpp-mc|={:.3}, |ps-mc|={:.3})  [{elapsed:.1}s]",
            approx.lambda_ps,
            approx.lambda_dpp,
            mc.mean_intensity,
            mc.std_error,
            (approx.lambda_dpp - mc.mean_intensity).abs(),
            (approx.lambda_ps - mc.mean_intensity).abs(),
        );
    }
}
