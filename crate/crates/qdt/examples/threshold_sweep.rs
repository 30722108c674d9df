//! Profiles the risk-minimizing likelihood-ratio threshold as the prior
//! on hypothesis 1 varies.
//!
//! Run with: cargo run -p qdt --example threshold_sweep

use qdt::{
    threshold_vs_prior, PayoffConvention, RiskParams, SignalModel, TauGrid, ThresholdConfig,
};

fn main() -> qdt::Result<()> {
    let config = ThresholdConfig {
        model: SignalModel::from_gaussians(5, 0.0, 1.0, 1.0, 1.0, 0.5)?,
        d_interp: 2,
        params: RiskParams::new(20.0, 5.0, 10.0, 25.0, 1.0, PayoffConvention::Reward)?,
        prior_grid: (1..20).map(|i| i as f64 / 20.0).collect(),
        tau: TauGrid::default(),
        seed: 7,
    };
    let curve = threshold_vs_prior(&config)?;

    println!("prior1   tau*");
    for p in &curve.points {
        println!("{:>6.2}   {:.4}", p.prior1, p.tau_star);
    }

    // As evidence for hypothesis 1 becomes cheap (high prior), the
    // receiver accepts ever weaker likelihood ratios.
    let first = curve.points.first().unwrap();
    let last = curve.points.last().unwrap();
    println!(
        "\ntau* falls from {:.2} at prior {} to {:.4} at prior {}",
        first.tau_star, first.prior1, last.tau_star, last.prior1
    );
    Ok(())
}
