//! Runs the full sensor-to-receiver protocol end to end: the receiver
//! commits to one best-response test against a reference draw, then the
//! empirical error rates over many trials are compared with the
//! trace-formula predictions.
//!
//! Run with: cargo run -p qdt --example protocol_simulation

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qdt::{
    monte_carlo_protocol, McConfig, ObjectiveKind, PayoffConvention, RiskParams, SenderObjective,
    SignalModel, TauGrid,
};

fn main() -> qdt::Result<()> {
    let config = McConfig {
        model: SignalModel::from_gaussians(5, 0.0, 1.0, 1.0, 1.0, 0.5)?,
        d_interp: 2,
        params: RiskParams::new(20.0, 5.0, 10.0, 25.0, 1.0, PayoffConvention::Reward)?,
        q: 0.0,
        objective: SenderObjective::new(ObjectiveKind::InduceAction1),
        tau: TauGrid::default(),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let s = monte_carlo_protocol(&config, 50_000, &mut rng)?;

    println!("trials: {}", s.n_trials);
    println!("committed threshold: tau = {:.6}", s.committed_tau);
    println!("\ncounts [truth][action]:");
    println!("             action 0   action 1");
    println!("  truth 0   {:>8}   {:>8}", s.counts[0][0], s.counts[0][1]);
    println!("  truth 1   {:>8}   {:>8}", s.counts[1][0], s.counts[1][1]);

    println!("\n              empirical    analytic");
    println!(
        "  p_false     {:>9.4}   {:>9.4}",
        s.empirical_p_false, s.analytic_p_false
    );
    println!(
        "  p_detect    {:>9.4}   {:>9.4}",
        s.empirical_p_detect, s.analytic_p_detect
    );
    println!("\nmean receiver risk:  {:.4}", s.mean_risk);
    println!("mean sender value:   {:.4}", s.mean_sender_value);
    println!("\nthe empirical rates converge on the trace formulas because the");
    println!("prospect states are drawn from the very mixtures the densities encode.");
    Ok(())
}
