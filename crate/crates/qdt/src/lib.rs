//! Quantum detection with prospect-theoretic receivers.
//!
//! The crate models a two-hypothesis signaling game. A sensor commits to a
//! pair of density operators built from discretized signal distributions and
//! unit-norm perception coefficients; a human receiver applies a quantum
//! likelihood-ratio test chosen to minimize a probability-weighted risk, and
//! may deviate from the utility-optimal decision through an additive
//! attraction term. On top of the primitives sit experiment drivers that
//! reproduce sure-thing-principle violations, receiver ROC curves, the
//! threshold-versus-prior profile, a Monte Carlo run of the full protocol,
//! and a derivative-free search over the sensor's signaling coefficients.
//!
//! Library tour (each has a runnable counterpart under `examples/`):
//!
//! * [`spectral`] - symmetric eigendecomposition, positive-part projectors.
//! * [`prospect`] - signal models, prospect states, density operators.
//! * [`detector`] - weighted risk, Bayes posteriors, best-response tests.
//! * [`persuasion`] - the sensor-side coefficient optimization.
//! * [`experiments`] - the reproducible experiment drivers.
//! * [`cli`] - config parsing and the `qdt` command-line entry point.
//!
//! All randomness flows through caller-provided ChaCha generators seeded
//! from a single `u64`, and every public function is a pure function of its
//! inputs, so identical configs reproduce identical outputs byte for byte.

pub mod cli;
pub mod detector;
pub mod error;
pub mod experiments;
pub mod persuasion;
pub mod prospect;
pub mod spectral;

pub use cli::{parse_config, resolve_seed, run, Experiment, RunConfig, TauSpec, DEFAULT_SEED};
pub use detector::{
    best_response, decide, decision_probability, error_rates, posterior, qlrt_projector, risk,
    weight, BestResponse, DecisionProbability, ErrorRates, PayoffConvention, QlrtSweep, RiskParams,
    TauGrid,
};
pub use error::{Error, Result};
pub use experiments::{
    calibrate_stp, check_total_probability, interpolate_detect, monte_carlo_protocol,
    roc_classical, roc_quantum, sample_scene, stp_experiment, threshold_vs_prior, CalibratedStp,
    CalibrationTargets, McConfig, McSummary, RocCurve, RocPoint, SceneInstance, StpConfig,
    StpPoint, StpResult, ThresholdConfig, ThresholdCurve, ThresholdPoint,
};
pub use persuasion::{
    optimize_signaling, project_unit_rows, sender_value, ObjectiveKind, OptConfig, SenderObjective,
    SenderSolution, TraceEntry,
};
pub use prospect::{
    build_density, build_prospect_state, discretize_gaussian, random_coefficients, sample_prospect,
    DensityOperator, PerceptionCoefficients, ProspectState, SignalModel,
};
pub use spectral::{positive_projector, spectral_decompose, trace_product};
pub use spectral::{EigenPairs, Projector, SymMatrix};
