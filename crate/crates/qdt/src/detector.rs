//! The receiver: probability-weighted risk and the quantum
//! likelihood-ratio test (QLRT).
//!
//! For a threshold tau >= 0 the test accepts (decides 1) on the projector
//! onto the strictly positive eigenspace of rho1 - tau * rho0. Sweeping tau
//! traces the receiver's operating curve; the best response picks the grid
//! threshold minimizing the weighted risk, where each outcome probability
//! is distorted as w(z) = z^epsilon before being priced.
//!
//! Payoffs follow the cost convention internally: correct decisions carry
//! negative cost, errors positive. Inputs may instead be declared as
//! rewards, which are negated on use.

use rand::Rng;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::prospect::{DensityOperator, ProspectState};
use crate::spectral::{positive_projector, trace_product, Projector};

/// Eigenvalues within this band around zero are excluded from the
/// acceptance projector.
pub const ZERO_TOL: f64 = 1e-10;

/// Slack allowed on probabilities before clamping into [0, 1].
const RATE_TOL: f64 = 1e-10;

/// Posterior denominators below this are treated as impossible evidence.
const EVIDENCE_FLOOR: f64 = 1e-300;

/// Whether payoff inputs are costs (to minimize) or rewards (negated).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PayoffConvention {
    Cost,
    Reward,
}

/// Payoffs and the probability-weighting exponent.
///
/// Index order is (true state, action): `u01` prices deciding 1 under
/// hypothesis 0 (false alarm), `u10` deciding 0 under hypothesis 1 (miss).
/// Under the cost convention the classic sign pattern is enforced at
/// construction: `u11 < 0`, `u00 < 0`, `u01 > 0`, `u10 > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskParams {
    pub u00: f64,
    pub u01: f64,
    pub u10: f64,
    pub u11: f64,
    pub epsilon: f64,
    pub convention: PayoffConvention,
}

impl RiskParams {
    pub fn new(
        u00: f64,
        u01: f64,
        u10: f64,
        u11: f64,
        epsilon: f64,
        convention: PayoffConvention,
    ) -> Result<Self> {
        let params = RiskParams {
            u00,
            u01,
            u10,
            u11,
            epsilon,
            convention,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("u00", self.u00),
            ("u01", self.u01),
            ("u10", self.u10),
            ("u11", self.u11),
        ] {
            if !v.is_finite() {
                return Err(Error::invalid("payoffs", format!("{name} is not finite")));
            }
        }
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(Error::invalid("epsilon", "must be positive and finite"));
        }
        if self.convention == PayoffConvention::Cost
            && !(self.u11 < 0.0 && self.u00 < 0.0 && self.u01 > 0.0 && self.u10 > 0.0)
        {
            return Err(Error::invalid(
                "payoffs",
                "cost convention requires u11 < 0, u00 < 0, u01 > 0, u10 > 0",
            ));
        }
        Ok(())
    }

    /// Cost paid per unit weighted probability of each outcome.
    fn sign(&self) -> f64 {
        match self.convention {
            PayoffConvention::Cost => 1.0,
            PayoffConvention::Reward => -1.0,
        }
    }

    pub fn cost_u00(&self) -> f64 {
        self.sign() * self.u00
    }

    pub fn cost_u01(&self) -> f64 {
        self.sign() * self.u01
    }

    pub fn cost_u10(&self) -> f64 {
        self.sign() * self.u10
    }

    pub fn cost_u11(&self) -> f64 {
        self.sign() * self.u11
    }

    /// Rescales the stakes on the two aligned outcomes (decide 1 under
    /// hypothesis 1, decide 0 under hypothesis 0) by positive factors.
    /// Used by the calibration mode of the sure-thing experiment.
    pub fn with_scaled_stakes(&self, scale11: f64, scale00: f64) -> Result<Self> {
        if !(scale11 > 0.0) || !(scale00 > 0.0) {
            return Err(Error::invalid("scale", "stake factors must be positive"));
        }
        RiskParams::new(
            self.u00 * scale00,
            self.u01,
            self.u10,
            self.u11 * scale11,
            self.epsilon,
            self.convention,
        )
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        RiskParams::new(
            self.u00,
            self.u01,
            self.u10,
            self.u11,
            epsilon,
            self.convention,
        )
    }
}

/// Ensemble error rates of an acceptance projector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorRates {
    pub p_false: f64,
    pub p_detect: f64,
}

impl ErrorRates {
    pub fn new(p_false: f64, p_detect: f64) -> Result<Self> {
        for (name, v) in [("p_false", p_false), ("p_detect", p_detect)] {
            if !v.is_finite() || v < -RATE_TOL || v > 1.0 + RATE_TOL {
                return Err(Error::invalid(
                    "rates",
                    format!("{name} = {v} outside [0, 1] beyond tolerance"),
                ));
            }
        }
        Ok(ErrorRates {
            p_false: p_false.clamp(0.0, 1.0),
            p_detect: p_detect.clamp(0.0, 1.0),
        })
    }
}

/// Split of the decision probability into the utility-optimal part g and
/// the additive attraction q, with the total clamped to [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecisionProbability {
    pub g: f64,
    pub q: f64,
    pub total: f64,
}

/// Threshold grid for the QLRT sweep.
///
/// The default is 400 geometrically spaced points on [1e-4, 1e4] with an
/// extra zero entry, so the support projector of rho1 is always reachable.
#[derive(Debug, Clone, PartialEq)]
pub struct TauGrid {
    values: Vec<f64>,
}

impl TauGrid {
    pub fn geometric(points: usize, min: f64, max: f64, include_zero: bool) -> Result<Self> {
        if points < 2 {
            return Err(Error::invalid("points", "need at least 2 grid points"));
        }
        if !(min > 0.0) || !(max > min) {
            return Err(Error::invalid("tau bounds", "require 0 < min < max"));
        }
        let ratio = max / min;
        let mut values = Vec::with_capacity(points + 1);
        if include_zero {
            values.push(0.0);
        }
        for i in 0..points {
            values.push(min * ratio.powf(i as f64 / (points - 1) as f64));
        }
        Ok(TauGrid { values })
    }

    pub fn from_values(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("tau grid", "must not be empty"));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::invalid(
                "tau grid",
                "thresholds must be finite and >= 0",
            ));
        }
        values.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        values.dedup();
        Ok(TauGrid { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Same span, `factor` times the point count.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        let positive: Vec<f64> = self.values.iter().copied().filter(|v| *v > 0.0).collect();
        if positive.len() < 2 {
            return Err(Error::invalid(
                "tau grid",
                "refinement needs a geometric part",
            ));
        }
        TauGrid::geometric(
            positive.len() * factor,
            positive[0],
            *positive.last().expect("non-empty"),
            self.values[0] == 0.0,
        )
    }
}

impl Default for TauGrid {
    fn default() -> Self {
        TauGrid::geometric(400, 1e-4, 1e4, true).expect("default grid parameters are valid")
    }
}

/// The receiver's optimal test at one threshold, with its achieved risk.
#[derive(Debug, Clone)]
pub struct BestResponse {
    pub tau_star: f64,
    pub projector: Projector,
    pub risk_value: f64,
    pub rates: ErrorRates,
}

impl Serialize for BestResponse {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("BestResponse", 4)?;
        st.serialize_field("tau_star", &self.tau_star)?;
        st.serialize_field("risk_value", &self.risk_value)?;
        st.serialize_field("p_false", &self.rates.p_false)?;
        st.serialize_field("p_detect", &self.rates.p_detect)?;
        st.end()
    }
}

/// Probability weighting w(z) = z^epsilon on [0, 1].
///
/// epsilon < 1 overweights small probabilities (pessimism about rare bad
/// outcomes), epsilon > 1 underweights them; epsilon = 1 is expected value.
pub fn weight(z: f64, epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0) {
        return Err(Error::invalid("epsilon", "must be positive"));
    }
    if !z.is_finite() || z < -1e-12 || z > 1.0 + 1e-12 {
        return Err(Error::invalid(
            "z",
            format!("{z} outside [0, 1] beyond tolerance"),
        ));
    }
    let z = z.clamp(0.0, 1.0);
    // The identity weighting sits in every default config and in the hot
    // path of the sender optimization; skip the transcendental call.
    if epsilon == 1.0 {
        return Ok(z);
    }
    Ok(z.powf(epsilon))
}

/// Bayes posterior (p(H0|phi), p(H1|phi)) with likelihoods given by the
/// Born rule on the two committed densities.
pub fn posterior(
    prior1: f64,
    rho0: &DensityOperator,
    rho1: &DensityOperator,
    phi: &ProspectState,
) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&prior1) {
        return Err(Error::invalid("prior1", "must lie in [0, 1]"));
    }
    let lik0 = rho0.likelihood(phi)?.max(0.0);
    let lik1 = rho1.likelihood(phi)?.max(0.0);
    let joint0 = (1.0 - prior1) * lik0;
    let joint1 = prior1 * lik1;
    let denom = joint0 + joint1;
    if denom < EVIDENCE_FLOOR {
        return Err(Error::DegenerateEvidence { denominator: denom });
    }
    Ok((joint0 / denom, joint1 / denom))
}

/// Acceptance projector of the QLRT at threshold `tau`: the projector onto
/// the strictly positive eigenspace of rho1 - tau * rho0.
pub fn qlrt_projector(
    rho1: &DensityOperator,
    rho0: &DensityOperator,
    tau: f64,
) -> Result<Projector> {
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::invalid("tau", "must be finite and >= 0"));
    }
    let diff = rho1.matrix().sub_scaled(rho0.matrix(), tau)?;
    positive_projector(&diff, ZERO_TOL)
}

/// False-alarm and detection probabilities of an arbitrary acceptance
/// projector: Tr(P rho0) and Tr(P rho1).
pub fn error_rates(
    p: &Projector,
    rho0: &DensityOperator,
    rho1: &DensityOperator,
) -> Result<ErrorRates> {
    let p_false = trace_product(p.matrix(), rho0.matrix())?;
    let p_detect = trace_product(p.matrix(), rho1.matrix())?;
    ErrorRates::new(p_false, p_detect)
}

fn weighted_risk(post: (f64, f64), rates: &ErrorRates, params: &RiskParams) -> Result<f64> {
    let (p0, p1) = post;
    let eps = params.epsilon;
    let value = weight(p0 * rates.p_false, eps)? * params.cost_u01()
        + weight(p1 * rates.p_detect, eps)? * params.cost_u11()
        + weight(p0 * (1.0 - rates.p_false), eps)? * params.cost_u00()
        + weight(p1 * (1.0 - rates.p_detect), eps)? * params.cost_u10();
    if !value.is_finite() {
        return Err(Error::invalid("risk", "evaluated to a non-finite value"));
    }
    Ok(value)
}

/// Probability-weighted posterior risk of measuring `p` after observing
/// `phi` under prior `prior1`.
///
/// Each of the four outcome probabilities (posterior times ensemble rate)
/// is distorted by `weight` before being priced at its cost.
pub fn risk(
    rho1: &DensityOperator,
    rho0: &DensityOperator,
    p: &Projector,
    phi: &ProspectState,
    params: &RiskParams,
    prior1: f64,
) -> Result<f64> {
    params.validate()?;
    let post = posterior(prior1, rho0, rho1, phi)?;
    let rates = error_rates(p, rho0, rho1)?;
    weighted_risk(post, &rates, params)
}

/// Precomputed QLRT family over a threshold grid: one acceptance projector
/// and rate pair per threshold.
///
/// Building the family costs one eigendecomposition per grid point;
/// selecting a best response afterwards is a linear scan, which keeps
/// per-observation best responses cheap inside Monte Carlo loops.
#[derive(Debug, Clone)]
pub struct QlrtSweep {
    taus: Vec<f64>,
    projectors: Vec<Projector>,
    rates: Vec<ErrorRates>,
}

impl QlrtSweep {
    pub fn new(rho1: &DensityOperator, rho0: &DensityOperator, grid: &TauGrid) -> Result<Self> {
        if rho1.dim() != rho0.dim() {
            return Err(Error::DimensionMismatch {
                left: rho1.dim(),
                right: rho0.dim(),
            });
        }
        let mut projectors = Vec::with_capacity(grid.len());
        let mut rates = Vec::with_capacity(grid.len());
        for &tau in grid.values() {
            let p = qlrt_projector(rho1, rho0, tau)?;
            rates.push(error_rates(&p, rho0, rho1)?);
            projectors.push(p);
        }
        Ok(QlrtSweep {
            taus: grid.values().to_vec(),
            projectors,
            rates,
        })
    }

    pub fn len(&self) -> usize {
        self.taus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taus.is_empty()
    }

    pub fn tau(&self, i: usize) -> f64 {
        self.taus[i]
    }

    pub fn projector(&self, i: usize) -> &Projector {
        &self.projectors[i]
    }

    pub fn rates(&self, i: usize) -> &ErrorRates {
        &self.rates[i]
    }

    /// Minimizes the weighted risk over the family for one observation.
    /// Ties go to the smaller threshold.
    pub fn best_response(
        &self,
        rho1: &DensityOperator,
        rho0: &DensityOperator,
        phi: &ProspectState,
        params: &RiskParams,
        prior1: f64,
    ) -> Result<BestResponse> {
        params.validate()?;
        let post = posterior(prior1, rho0, rho1, phi)?;
        let mut best: Option<(usize, f64)> = None;
        for i in 0..self.taus.len() {
            let value = weighted_risk(post, &self.rates[i], params)?;
            if best.map_or(true, |(_, cur)| value < cur) {
                best = Some((i, value));
            }
        }
        let (idx, risk_value) = best.expect("grid is non-empty");
        Ok(BestResponse {
            tau_star: self.taus[idx],
            projector: self.projectors[idx].clone(),
            risk_value,
            rates: self.rates[idx],
        })
    }
}

/// Builds the QLRT family on `grid` and returns the risk-minimizing
/// threshold, projector, risk value, and rates for the observation `phi`.
pub fn best_response(
    rho1: &DensityOperator,
    rho0: &DensityOperator,
    phi: &ProspectState,
    params: &RiskParams,
    prior1: f64,
    grid: &TauGrid,
) -> Result<BestResponse> {
    QlrtSweep::new(rho1, rho0, grid)?.best_response(rho1, rho0, phi, params, prior1)
}

/// Splits the probability of deciding 1 into the utility factor
/// g = phi' P phi and the attraction term q, clamping the total.
pub fn decision_probability(
    phi: &ProspectState,
    p: &Projector,
    q: f64,
) -> Result<DecisionProbability> {
    if !q.is_finite() {
        return Err(Error::invalid("q", "must be finite"));
    }
    let raw = p.expectation(phi.vector())?;
    if raw < -RATE_TOL || raw > 1.0 + RATE_TOL {
        return Err(Error::invalid(
            "projector",
            format!("expectation {raw} outside [0, 1] beyond tolerance"),
        ));
    }
    let g = raw.clamp(0.0, 1.0);
    Ok(DecisionProbability {
        g,
        q,
        total: (g + q).clamp(0.0, 1.0),
    })
}

/// Samples the action: 1 with the clamped total probability, else 0.
pub fn decide<R: Rng + ?Sized>(
    phi: &ProspectState,
    p: &Projector,
    q: f64,
    rng: &mut R,
) -> Result<u8> {
    let prob = decision_probability(phi, p, q)?;
    Ok(u8::from(rng.random::<f64>() < prob.total))
}
