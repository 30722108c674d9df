//! Command-line front end: config parsing, seeded dispatch, file output.
//!
//! Every experiment is driven by a single [`RunConfig`] whose defaults
//! form the reference profile (five signals, two interpretation
//! dimensions, unit-variance Gaussians at means 0 and 1, reward payoffs
//! 20/5/10/25, identity weighting). A config file overrides defaults,
//! flags override the file, and the seed additionally falls back to the
//! `QDT_SEED` environment variable before the built-in default.
//!
//! Each run writes one CSV per experiment plus a JSON sidecar holding the
//! fully resolved config, so any output directory is self-describing and
//! byte-identical under reruns.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::detector::{PayoffConvention, RiskParams, TauGrid};
use crate::error::{Error, Result};
use crate::experiments::{
    calibrate_stp, interpolate_detect, monte_carlo_protocol, roc_classical, roc_quantum,
    sample_scene, stp_experiment, threshold_vs_prior, CalibrationTargets, McConfig, McSummary,
    RocCurve, StpConfig, StpResult, ThresholdConfig, ThresholdCurve,
};
use crate::persuasion::{optimize_signaling, ObjectiveKind, OptConfig, SenderObjective};
use crate::prospect::SignalModel;

/// Seed used when neither flag, config file, nor environment provides one.
pub const DEFAULT_SEED: u64 = 7;

/// Which experiment a run executes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Stp,
    Roc,
    Threshold,
    Persuade,
    Simulate,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Stp => "stp",
            Experiment::Roc => "roc",
            Experiment::Threshold => "threshold",
            Experiment::Persuade => "persuade",
            Experiment::Simulate => "simulate",
        }
    }
}

/// Threshold grid specification; the grid always gains a zero entry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TauSpec {
    pub points: usize,
    pub min: f64,
    pub max: f64,
}

impl Default for TauSpec {
    fn default() -> Self {
        TauSpec {
            points: 400,
            min: 1e-4,
            max: 1e4,
        }
    }
}

/// Full run configuration. Unknown keys are rejected rather than ignored,
/// and every field re-validates its constraint at parse time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Experiment,
    /// Number of discrete signal values.
    pub k: usize,
    /// Interpretation dimensions per signal.
    pub d: usize,
    pub mean0: f64,
    pub variance0: f64,
    pub mean1: f64,
    pub variance1: f64,
    pub prior1: f64,
    pub u00: f64,
    pub u01: f64,
    pub u10: f64,
    pub u11: f64,
    pub convention: PayoffConvention,
    pub epsilon: f64,
    /// Attraction applied in persuade/simulate runs.
    pub q: f64,
    /// The sure-thing sweep uses q values i / q_steps for i in 0..=q_steps.
    pub q_steps: usize,
    pub tau: TauSpec,
    /// The threshold profile uses priors i / (prior_points + 1).
    pub prior_points: usize,
    pub n_trials: usize,
    pub n_mc: usize,
    pub budget: usize,
    pub sigma0: f64,
    pub patience: usize,
    pub objective: ObjectiveKind,
    pub calibrate: bool,
    pub target_p_given_1: f64,
    pub target_p_given_0: f64,
    pub target_tol: f64,
    pub seed: u64,
    pub out: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            experiment: Experiment::Stp,
            k: 5,
            d: 2,
            mean0: 0.0,
            variance0: 1.0,
            mean1: 1.0,
            variance1: 1.0,
            prior1: 0.5,
            u00: 20.0,
            u01: 5.0,
            u10: 10.0,
            u11: 25.0,
            convention: PayoffConvention::Reward,
            epsilon: 1.0,
            q: 0.0,
            q_steps: 1000,
            tau: TauSpec::default(),
            prior_points: 99,
            n_trials: 100_000,
            n_mc: 256,
            budget: 2000,
            sigma0: 0.3,
            patience: 25,
            objective: ObjectiveKind::InduceAction1,
            calibrate: false,
            target_p_given_1: 0.39,
            target_p_given_0: 0.26,
            target_tol: 0.005,
            seed: DEFAULT_SEED,
            out: "out".to_string(),
        }
    }
}

fn config_err(field: &str, reason: impl Into<String>) -> Error {
    Error::InvalidConfig {
        field: field.to_string(),
        reason: reason.into(),
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(config_err("k", "must be at least 1"));
        }
        if self.d == 0 {
            return Err(config_err("d", "must be at least 1"));
        }
        for (name, v) in [
            ("mean0", self.mean0),
            ("mean1", self.mean1),
            ("u00", self.u00),
            ("u01", self.u01),
            ("u10", self.u10),
            ("u11", self.u11),
        ] {
            if !v.is_finite() {
                return Err(config_err(name, "must be finite"));
            }
        }
        for (name, v) in [("variance0", self.variance0), ("variance1", self.variance1)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(config_err(name, "must be positive and finite"));
            }
        }
        if !(0.0..=1.0).contains(&self.prior1) {
            return Err(config_err("prior1", "must lie in [0, 1]"));
        }
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(config_err("epsilon", "must be positive and finite"));
        }
        if !self.q.is_finite() {
            return Err(config_err("q", "must be finite"));
        }
        if self.q_steps == 0 {
            return Err(config_err("q_steps", "must be at least 1"));
        }
        if self.tau.points < 2 {
            return Err(config_err("tau.points", "need at least 2 grid points"));
        }
        if !(self.tau.min > 0.0) || !(self.tau.max > self.tau.min) {
            return Err(config_err("tau", "require 0 < min < max"));
        }
        if self.prior_points == 0 {
            return Err(config_err("prior_points", "must be at least 1"));
        }
        if self.n_trials == 0 {
            return Err(config_err("n_trials", "must be at least 1"));
        }
        if self.n_mc == 0 {
            return Err(config_err("n_mc", "must be at least 1"));
        }
        if self.budget == 0 {
            return Err(config_err("budget", "must be at least 1"));
        }
        if !(self.sigma0 > 0.0) || !self.sigma0.is_finite() {
            return Err(config_err("sigma0", "must be positive and finite"));
        }
        if self.patience == 0 {
            return Err(config_err("patience", "must be at least 1"));
        }
        for (name, v) in [
            ("target_p_given_1", self.target_p_given_1),
            ("target_p_given_0", self.target_p_given_0),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(config_err(name, "must lie in [0, 1]"));
            }
        }
        if !(self.target_tol > 0.0) {
            return Err(config_err("target_tol", "must be positive"));
        }
        // Payoff sign constraints depend on the convention; reuse the
        // receiver-side check so the two stay aligned.
        self.risk_params()
            .map_err(|e| config_err("payoffs", e.to_string()))?;
        Ok(())
    }

    pub fn signal_model(&self) -> Result<SignalModel> {
        SignalModel::from_gaussians(
            self.k,
            self.mean0,
            self.variance0,
            self.mean1,
            self.variance1,
            self.prior1,
        )
    }

    pub fn risk_params(&self) -> Result<RiskParams> {
        RiskParams::new(
            self.u00,
            self.u01,
            self.u10,
            self.u11,
            self.epsilon,
            self.convention,
        )
    }

    pub fn tau_grid(&self) -> Result<TauGrid> {
        TauGrid::geometric(self.tau.points, self.tau.min, self.tau.max, true)
    }

    pub fn q_grid(&self) -> Vec<f64> {
        (0..=self.q_steps)
            .map(|i| i as f64 / self.q_steps as f64)
            .collect()
    }

    pub fn prior_grid(&self) -> Vec<f64> {
        (1..=self.prior_points)
            .map(|i| i as f64 / (self.prior_points + 1) as f64)
            .collect()
    }
}

/// Parses a JSON config document, filling omitted fields from the default
/// profile and validating every constraint.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let config: RunConfig = serde_json::from_str(text)?;
    config.validate()?;
    Ok(config)
}

/// Seed precedence: explicit flag, then config file, then environment,
/// then the built-in default.
pub fn resolve_seed(flag: Option<u64>, file: Option<u64>, env: Option<u64>) -> u64 {
    flag.or(file).or(env).unwrap_or(DEFAULT_SEED)
}

fn read_env_seed() -> Result<Option<u64>> {
    match std::env::var("QDT_SEED") {
        Ok(text) => text
            .trim()
            .parse::<u64>()
            .map(Some)
            .map_err(|_| config_err("QDT_SEED", format!("cannot parse {text:?} as a seed"))),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(std::env::VarError::NotUnicode(_)) => {
            Err(config_err("QDT_SEED", "value is not valid unicode"))
        }
    }
}

fn write_text(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn fmt_onset(onset: Option<f64>) -> String {
    match onset {
        Some(q) => q.to_string(),
        None => "none".to_string(),
    }
}

fn stp_csv(result: &StpResult) -> String {
    let mut s = String::from("q,p_unknown,violation\n");
    for p in &result.sweep {
        let _ = writeln!(s, "{},{},{}", p.q, p.p_unknown, u8::from(p.violation));
    }
    s
}

fn roc_csv(curves: &[&RocCurve]) -> String {
    let mut s = String::from("label,tau,p_false,p_detect\n");
    for curve in curves {
        for p in &curve.points {
            let _ = writeln!(s, "{},{},{},{}", curve.label, p.tau, p.p_false, p.p_detect);
        }
    }
    s
}

fn threshold_csv(curve: &ThresholdCurve) -> String {
    let mut s = String::from("prior1,tau_star\n");
    for p in &curve.points {
        let _ = writeln!(s, "{},{}", p.prior1, p.tau_star);
    }
    s
}

fn mc_csv(s: &McSummary) -> String {
    let mut text = String::from(
        "n_trials,n00,n01,n10,n11,empirical_p_false,empirical_p_detect,\
         analytic_p_false,analytic_p_detect,mean_risk,mean_sender_value,committed_tau\n",
    );
    let _ = writeln!(
        text,
        "{},{},{},{},{},{},{},{},{},{},{},{}",
        s.n_trials,
        s.counts[0][0],
        s.counts[0][1],
        s.counts[1][0],
        s.counts[1][1],
        s.empirical_p_false,
        s.empirical_p_detect,
        s.analytic_p_false,
        s.analytic_p_detect,
        s.mean_risk,
        s.mean_sender_value,
        s.committed_tau,
    );
    text
}

/// Executes the configured experiment: writes its CSV and the resolved
/// config sidecar into the output directory and returns the one-line
/// summary.
pub fn run(config: &RunConfig) -> Result<String> {
    config.validate()?;
    let out_dir = Path::new(&config.out);
    fs::create_dir_all(out_dir).map_err(|source| Error::Io {
        path: out_dir.display().to_string(),
        source,
    })?;
    let model = config.signal_model()?;
    let params = config.risk_params()?;
    let tau = config.tau_grid()?;

    let summary = match config.experiment {
        Experiment::Stp => {
            let stp_config = StpConfig {
                model,
                d_interp: config.d,
                params,
                q_grid: config.q_grid(),
                tau,
                seed: config.seed,
            };
            if config.calibrate {
                let targets = CalibrationTargets {
                    p_given_1: config.target_p_given_1,
                    p_given_0: config.target_p_given_0,
                    tol: config.target_tol,
                };
                let cal = calibrate_stp(&stp_config, &targets)?;
                write_text(&out_dir.join("stp.csv"), &stp_csv(&cal.result))?;
                format!(
                    "stp seed={} out={} p_given_1={} p_given_0={} onset={} hit={} scale11={} scale00={}",
                    config.seed,
                    config.out,
                    cal.result.p_defect_given_defect,
                    cal.result.p_defect_given_coop,
                    fmt_onset(cal.result.violation_onset),
                    cal.hit,
                    cal.scale11,
                    cal.scale00,
                )
            } else {
                let r = stp_experiment(&stp_config)?;
                write_text(&out_dir.join("stp.csv"), &stp_csv(&r))?;
                format!(
                    "stp seed={} out={} p_given_1={} p_given_0={} g={} onset={}",
                    config.seed,
                    config.out,
                    r.p_defect_given_defect,
                    r.p_defect_given_coop,
                    r.g_unknown,
                    fmt_onset(r.violation_onset),
                )
            }
        }
        Experiment::Roc => {
            let scene = sample_scene(&model, config.d, config.seed)?;
            let quantum = roc_quantum(&scene.rho1, &scene.rho0, &tau)?;
            let classical = roc_classical(model.pmf1(), model.pmf0(), &tau, config.epsilon)?;
            let dominates = quantum
                .points
                .iter()
                .all(|p| p.p_detect >= interpolate_detect(&classical, p.p_false) - 1e-9);
            write_text(&out_dir.join("roc.csv"), &roc_csv(&[&quantum, &classical]))?;
            format!(
                "roc seed={} out={} points={} quantum_dominates={}",
                config.seed,
                config.out,
                quantum.points.len(),
                dominates,
            )
        }
        Experiment::Threshold => {
            let threshold_config = ThresholdConfig {
                model,
                d_interp: config.d,
                params,
                prior_grid: config.prior_grid(),
                tau,
                seed: config.seed,
            };
            let curve = threshold_vs_prior(&threshold_config)?;
            write_text(&out_dir.join("threshold.csv"), &threshold_csv(&curve))?;
            let first = curve.points.first().expect("non-empty grid");
            let last = curve.points.last().expect("non-empty grid");
            format!(
                "threshold seed={} out={} points={} tau_first={} tau_last={}",
                config.seed,
                config.out,
                curve.points.len(),
                first.tau_star,
                last.tau_star,
            )
        }
        Experiment::Persuade => {
            let objective = SenderObjective::new(config.objective);
            let opt = OptConfig {
                budget: config.budget,
                sigma0: config.sigma0,
                patience: config.patience,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let sol = optimize_signaling(
                &objective,
                &model,
                config.d,
                &params,
                config.q,
                config.n_mc,
                &opt,
                &mut rng,
            )?;
            let json = serde_json::to_string_pretty(&sol)?;
            write_text(&out_dir.join("persuade.json"), &(json + "\n"))?;
            format!(
                "persuade seed={} out={} value={} accepted_steps={} evals={}",
                config.seed,
                config.out,
                sol.value,
                sol.trace.len() - 1,
                config.budget,
            )
        }
        Experiment::Simulate => {
            let mc_config = McConfig {
                model,
                d_interp: config.d,
                params,
                q: config.q,
                objective: SenderObjective::new(config.objective),
                tau,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let s = monte_carlo_protocol(&mc_config, config.n_trials, &mut rng)?;
            write_text(&out_dir.join("mc.csv"), &mc_csv(&s))?;
            format!(
                "simulate seed={} out={} n_trials={} p_detect={} p_false={} mean_risk={} sender_value={}",
                config.seed,
                config.out,
                s.n_trials,
                s.empirical_p_detect,
                s.empirical_p_false,
                s.mean_risk,
                s.mean_sender_value,
            )
        }
    };

    let sidecar = out_dir.join(format!("{}_config.json", config.experiment.name()));
    let json = serde_json::to_string_pretty(config)?;
    write_text(&sidecar, &(json + "\n"))?;
    Ok(summary)
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ConventionArg {
    Cost,
    Reward,
}

impl From<ConventionArg> for PayoffConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Cost => PayoffConvention::Cost,
            ConventionArg::Reward => PayoffConvention::Reward,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    InduceAction1,
    AlignWithTruth,
    MaximizeReceiverError,
}

impl From<ObjectiveArg> for ObjectiveKind {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::InduceAction1 => ObjectiveKind::InduceAction1,
            ObjectiveArg::AlignWithTruth => ObjectiveKind::AlignWithTruth,
            ObjectiveArg::MaximizeReceiverError => ObjectiveKind::MaximizeReceiverError,
        }
    }
}

/// Options shared by every subcommand; flags override config-file fields.
#[derive(Debug, Args)]
struct CommonArgs {
    /// JSON config file; omitted fields keep their defaults.
    #[arg(long)]
    config: Option<std::path::PathBuf>,
    /// Random seed (highest precedence; QDT_SEED is the lowest).
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<String>,
    /// Number of discrete signal values.
    #[arg(long)]
    k: Option<usize>,
    /// Interpretation dimensions per signal.
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    mean0: Option<f64>,
    #[arg(long)]
    variance0: Option<f64>,
    #[arg(long)]
    mean1: Option<f64>,
    #[arg(long)]
    variance1: Option<f64>,
    /// Prior probability of hypothesis 1.
    #[arg(long)]
    prior1: Option<f64>,
    #[arg(long)]
    u00: Option<f64>,
    #[arg(long)]
    u01: Option<f64>,
    #[arg(long)]
    u10: Option<f64>,
    #[arg(long)]
    u11: Option<f64>,
    /// Whether the payoff values are costs or rewards.
    #[arg(long, value_enum)]
    convention: Option<ConventionArg>,
    /// Probability weighting exponent.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Attraction added to the decision probability.
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    q_steps: Option<usize>,
    #[arg(long)]
    tau_points: Option<usize>,
    #[arg(long)]
    tau_min: Option<f64>,
    #[arg(long)]
    tau_max: Option<f64>,
    #[arg(long)]
    prior_points: Option<usize>,
    #[arg(long)]
    n_trials: Option<usize>,
    #[arg(long)]
    n_mc: Option<usize>,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    sigma0: Option<f64>,
    #[arg(long)]
    patience: Option<usize>,
    /// Sender objective for persuade/simulate runs.
    #[arg(long, value_enum)]
    objective: Option<ObjectiveArg>,
    /// Scale payoffs to steer the conditional probabilities to targets.
    #[arg(long)]
    calibrate: bool,
    #[arg(long)]
    target_p_given_1: Option<f64>,
    #[arg(long)]
    target_p_given_0: Option<f64>,
    #[arg(long)]
    target_tol: Option<f64>,
}

impl CommonArgs {
    fn apply(&self, config: &mut RunConfig) {
        macro_rules! set {
            ($field:ident) => {
                if let Some(v) = self.$field {
                    config.$field = v;
                }
            };
        }
        if let Some(out) = &self.out {
            config.out = out.clone();
        }
        set!(k);
        set!(d);
        set!(mean0);
        set!(variance0);
        set!(mean1);
        set!(variance1);
        set!(prior1);
        set!(u00);
        set!(u01);
        set!(u10);
        set!(u11);
        if let Some(c) = self.convention {
            config.convention = c.into();
        }
        set!(epsilon);
        set!(q);
        set!(q_steps);
        if let Some(v) = self.tau_points {
            config.tau.points = v;
        }
        if let Some(v) = self.tau_min {
            config.tau.min = v;
        }
        if let Some(v) = self.tau_max {
            config.tau.max = v;
        }
        set!(prior_points);
        set!(n_trials);
        set!(n_mc);
        set!(budget);
        set!(sigma0);
        set!(patience);
        if let Some(o) = self.objective {
            config.objective = o.into();
        }
        if self.calibrate {
            config.calibrate = true;
        }
        set!(target_p_given_1);
        set!(target_p_given_0);
        set!(target_tol);
    }
}

/// Detection experiments with a prospect-theoretic receiver.
#[derive(Debug, Parser)]
#[command(name = "qdt", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Conditional vs unconditional decision probabilities and the
    /// attraction sweep exposing total-probability violations.
    Stp(CommonArgs),
    /// Quantum and classical receiver operating curves.
    Roc(CommonArgs),
    /// Risk-minimizing threshold across the prior grid.
    Threshold(CommonArgs),
    /// Hill-climb search over the sender's signaling coefficients.
    Persuade(CommonArgs),
    /// Monte Carlo run of the full protocol.
    Simulate(CommonArgs),
}

fn execute(args: &CommonArgs, experiment: Experiment) -> Result<String> {
    let (mut config, file_seed) = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.display().to_string(),
                source,
            })?;
            let value: serde_json::Value = serde_json::from_str(&text)?;
            let has_seed = value.get("seed").is_some();
            let config = parse_config(&text)?;
            let file_seed = has_seed.then_some(config.seed);
            (config, file_seed)
        }
        None => (RunConfig::default(), None),
    };
    config.experiment = experiment;
    args.apply(&mut config);
    config.seed = resolve_seed(args.seed, file_seed, read_env_seed()?);
    run(&config)
}

/// Entry point for the `qdt` binary; returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    let (args, experiment) = match &cli.command {
        Command::Stp(a) => (a, Experiment::Stp),
        Command::Roc(a) => (a, Experiment::Roc),
        Command::Threshold(a) => (a, Experiment::Threshold),
        Command::Persuade(a) => (a, Experiment::Persuade),
        Command::Simulate(a) => (a, Experiment::Simulate),
    };
    match execute(args, experiment) {
        Ok(line) => {
            println!("{line}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_the_default_profile() {
        let config = parse_config("{}").unwrap();
        assert_eq!(config, RunConfig::default());
        assert_eq!(config.k, 5);
        assert_eq!(config.d, 2);
        assert_eq!(config.epsilon, 1.0);
        assert_eq!(
            (config.u00, config.u01, config.u10, config.u11),
            (20.0, 5.0, 10.0, 25.0)
        );
        assert_eq!(config.convention, PayoffConvention::Reward);
        assert_eq!(config.seed, DEFAULT_SEED);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = parse_config(r#"{"foo": 1}"#).unwrap_err();
        assert!(err.to_string().contains("foo"), "{err}");
    }

    #[test]
    fn validation_errors_name_the_field() {
        let err = parse_config(r#"{"k": 0}"#).unwrap_err();
        assert!(err.to_string().contains('k'), "{err}");
        let err = parse_config(r#"{"variance1": -1.0}"#).unwrap_err();
        assert!(err.to_string().contains("variance1"), "{err}");
        let err = parse_config(r#"{"tau": {"points": 1}}"#).unwrap_err();
        assert!(err.to_string().contains("tau.points"), "{err}");
        // Cost-convention payoffs must follow the sign pattern.
        let err = parse_config(r#"{"convention": "cost"}"#).unwrap_err();
        assert!(err.to_string().contains("payoffs"), "{err}");
    }

    #[test]
    fn config_round_trips_through_serialization() {
        let mut config = RunConfig::default();
        config.experiment = Experiment::Persuade;
        config.epsilon = 0.7000000000000001;
        config.tau.min = 3.141592653589793e-4;
        config.seed = u64::MAX;
        let json = serde_json::to_string_pretty(&config).unwrap();
        let back = parse_config(&json).unwrap();
        assert_eq!(config, back);
    }

    #[test]
    fn seed_precedence_is_flag_file_env_default() {
        assert_eq!(resolve_seed(Some(1), Some(2), Some(3)), 1);
        assert_eq!(resolve_seed(None, Some(2), Some(3)), 2);
        assert_eq!(resolve_seed(None, None, Some(3)), 3);
        assert_eq!(resolve_seed(None, None, None), DEFAULT_SEED);
    }

    #[test]
    fn grids_have_the_documented_shapes() {
        let config = RunConfig::default();
        let q = config.q_grid();
        assert_eq!(q.len(), 1001);
        assert_eq!((q[0], *q.last().unwrap()), (0.0, 1.0));
        let priors = config.prior_grid();
        assert_eq!(priors.len(), 99);
        assert_eq!(priors[0], 0.01);
        assert_eq!(*priors.last().unwrap(), 0.99);
        assert_eq!(config.tau_grid().unwrap().len(), 401);
    }

    #[test]
    fn csv_formats_match_the_documented_headers() {
        use crate::experiments::{RocPoint, StpPoint, ThresholdPoint};
        let stp = StpResult {
            p_defect_given_defect: 0.4,
            p_defect_given_coop: 0.2,
            g_unknown: 0.3,
            signal_index: 1,
            sweep: vec![StpPoint {
                q: 0.0,
                p_unknown: 0.3,
                violation: false,
            }],
            violation_onset: None,
        };
        assert_eq!(stp_csv(&stp), "q,p_unknown,violation\n0,0.3,0\n");

        let curve = RocCurve {
            label: "quantum".to_string(),
            points: vec![RocPoint {
                tau: 0.5,
                p_false: 0.25,
                p_detect: 0.75,
            }],
        };
        assert_eq!(
            roc_csv(&[&curve]),
            "label,tau,p_false,p_detect\nquantum,0.5,0.25,0.75\n"
        );

        let threshold = ThresholdCurve {
            points: vec![ThresholdPoint {
                prior1: 0.5,
                tau_star: 1.25,
            }],
        };
        assert_eq!(threshold_csv(&threshold), "prior1,tau_star\n0.5,1.25\n");
    }
}
