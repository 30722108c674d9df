//! Sweeps the attraction term q and reports where the unconditional
//! decision probability escapes the interval spanned by the two
//! conditional probabilities, then calibrates payoff scales so the
//! conditionals hit chosen targets.
//!
//! Run with: cargo run -p qdt --example stp_violation

use qdt::{
    calibrate_stp, stp_experiment, CalibrationTargets, PayoffConvention, RiskParams, SignalModel,
    StpConfig, TauGrid,
};

fn main() -> qdt::Result<()> {
    let config = StpConfig {
        model: SignalModel::from_gaussians(5, 0.0, 1.0, 1.0, 1.0, 0.5)?,
        d_interp: 2,
        params: RiskParams::new(20.0, 5.0, 10.0, 25.0, 1.0, PayoffConvention::Reward)?,
        q_grid: (0..=1000).map(|i| i as f64 / 1000.0).collect(),
        tau: TauGrid::default(),
        seed: 7,
    };
    let r = stp_experiment(&config)?;

    println!(
        "conditional on hypothesis 1 known:  p = {:.4}",
        r.p_defect_given_defect
    );
    println!(
        "conditional on hypothesis 0 known:  p = {:.4}",
        r.p_defect_given_coop
    );
    println!("unknown hypothesis, q = 0:          g = {:.4}", r.g_unknown);
    let lo = r.p_defect_given_defect.min(r.p_defect_given_coop);
    let hi = r.p_defect_given_defect.max(r.p_defect_given_coop);
    println!("classical total probability keeps p_unknown inside [{lo:.4}, {hi:.4}]");
    match r.violation_onset {
        Some(q) => println!("violation onset: attraction q >= {q} pushes p_unknown outside"),
        None => println!("no violation anywhere on the q grid"),
    }

    println!("\nsweep excerpt:");
    for p in r.sweep.iter().step_by(100) {
        println!(
            "  q={:>5.2}  p_unknown={:.4}  violation={}",
            p.q, p.p_unknown, p.violation
        );
    }

    // Scaling the detection and correct-rejection stakes steers the two
    // conditionals toward target values; curvature (epsilon < 1) is what
    // makes them respond to scale at all.
    let curved = StpConfig {
        params: config.params.with_epsilon(0.7)?,
        model: config.model.clone(),
        tau: config.tau.clone(),
        q_grid: config.q_grid.clone(),
        ..config
    };
    let cal = calibrate_stp(&curved, &CalibrationTargets::default())?;
    println!(
        "\ncalibrated (epsilon=0.7): p_given_1={:.4}  p_given_0={:.4}  hit={}",
        cal.result.p_defect_given_defect, cal.result.p_defect_given_coop, cal.hit
    );
    println!(
        "stake scales: detection x{:.4}, correct rejection x{:.4}",
        cal.scale11, cal.scale00
    );
    match cal.result.violation_onset {
        Some(q) => println!("calibrated violation onset: q = {q}"),
        None => println!("calibrated run shows no violation"),
    }
    Ok(())
}
