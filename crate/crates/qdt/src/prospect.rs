//! Signal models and the prospect-state construction.
//!
//! A hypothesis j induces a probability mass function over k discrete signal
//! values; each signal s is perceived through a unit-norm coefficient row
//! a_s of length d, producing the prospect state with amplitudes a_{s,k} on
//! the coordinate block of signal s. Mixing the per-signal pure states with
//! the hypothesis pmf yields a block-diagonal density operator with one
//! rank-at-most-one d x d block per signal.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::spectral::{spectral_decompose, SymMatrix};

const PMF_TOL: f64 = 1e-12;
const UNIT_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;

/// Two-hypothesis signal model on a shared discrete grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalModel {
    grid: Vec<f64>,
    pmf0: Vec<f64>,
    pmf1: Vec<f64>,
    prior1: f64,
}

impl SignalModel {
    pub fn new(grid: Vec<f64>, pmf0: Vec<f64>, pmf1: Vec<f64>, prior1: f64) -> Result<Self> {
        if grid.is_empty() {
            return Err(Error::invalid(
                "grid",
                "must hold at least one signal value",
            ));
        }
        if grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid("grid", "values must be strictly increasing"));
        }
        validate_pmf("pmf0", &pmf0, grid.len())?;
        validate_pmf("pmf1", &pmf1, grid.len())?;
        if !(0.0..=1.0).contains(&prior1) {
            return Err(Error::invalid("prior1", "must lie in [0, 1]"));
        }
        Ok(SignalModel {
            grid,
            pmf0,
            pmf1,
            prior1,
        })
    }

    /// Model with both conditionals given by discretized Gaussians on a
    /// uniform grid spanning [min(mean) - 3 sigma, max(mean) + 3 sigma],
    /// where sigma is the larger standard deviation.
    pub fn from_gaussians(
        k: usize,
        mean0: f64,
        variance0: f64,
        mean1: f64,
        variance1: f64,
        prior1: f64,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("k", "must be at least 1"));
        }
        if variance0 <= 0.0 || variance1 <= 0.0 {
            return Err(Error::invalid("variance", "must be positive"));
        }
        let sigma = variance0.max(variance1).sqrt();
        let lo = mean0.min(mean1) - 3.0 * sigma;
        let hi = mean0.max(mean1) + 3.0 * sigma;
        let grid: Vec<f64> = if k == 1 {
            vec![0.5 * (lo + hi)]
        } else {
            (0..k)
                .map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64)
                .collect()
        };
        let pmf0 = discretize_gaussian(mean0, variance0, &grid)?;
        let pmf1 = discretize_gaussian(mean1, variance1, &grid)?;
        SignalModel::new(grid, pmf0, pmf1, prior1)
    }

    pub fn k(&self) -> usize {
        self.grid.len()
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn pmf0(&self) -> &[f64] {
        &self.pmf0
    }

    pub fn pmf1(&self) -> &[f64] {
        &self.pmf1
    }

    pub fn prior1(&self) -> f64 {
        self.prior1
    }

    pub fn prior0(&self) -> f64 {
        1.0 - self.prior1
    }

    /// Returns a copy with a different prior on hypothesis 1.
    pub fn with_prior1(&self, prior1: f64) -> Result<Self> {
        SignalModel::new(
            self.grid.clone(),
            self.pmf0.clone(),
            self.pmf1.clone(),
            prior1,
        )
    }

    /// Marginal signal distribution under the prior mixture.
    pub fn marginal(&self) -> Vec<f64> {
        self.pmf0
            .iter()
            .zip(&self.pmf1)
            .map(|(a, b)| self.prior0() * a + self.prior1 * b)
            .collect()
    }
}

fn validate_pmf(name: &'static str, pmf: &[f64], k: usize) -> Result<()> {
    if pmf.len() != k {
        return Err(Error::InvalidDistribution {
            name,
            reason: format!("length {} does not match grid length {k}", pmf.len()),
        });
    }
    if pmf.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
        return Err(Error::InvalidDistribution {
            name,
            reason: "entries must be finite and non-negative".into(),
        });
    }
    let total: f64 = pmf.iter().sum();
    if (total - 1.0).abs() > PMF_TOL {
        return Err(Error::InvalidDistribution {
            name,
            reason: format!("entries sum to {total}, not 1"),
        });
    }
    Ok(())
}

/// Pointwise-normalized Gaussian weights on an explicit grid:
/// pmf[i] proportional to exp(-(grid[i] - mean)^2 / (2 variance)).
pub fn discretize_gaussian(mean: f64, variance: f64, grid: &[f64]) -> Result<Vec<f64>> {
    if grid.is_empty() {
        return Err(Error::invalid(
            "grid",
            "must hold at least one signal value",
        ));
    }
    if !(variance > 0.0) {
        return Err(Error::invalid("variance", "must be positive"));
    }
    let weights: Vec<f64> = grid
        .iter()
        .map(|&g| (-(g - mean) * (g - mean) / (2.0 * variance)).exp())
        .collect();
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return Err(Error::InvalidDistribution {
            name: "pmf",
            reason: "all grid points have vanishing Gaussian weight".into(),
        });
    }
    Ok(weights.iter().map(|w| w / total).collect())
}

/// Unit-norm perception coefficients: one row of length `d` per signal.
#[derive(Debug, Clone, PartialEq)]
pub struct PerceptionCoefficients {
    k_signals: usize,
    d_interp: usize,
    // Row-major k x d.
    rows: Vec<f64>,
}

impl PerceptionCoefficients {
    /// Builds from per-signal rows, each of which must have unit norm
    /// within 1e-12.
    pub fn new(rows: &[Vec<f64>]) -> Result<Self> {
        let k_signals = rows.len();
        if k_signals == 0 {
            return Err(Error::invalid("rows", "need at least one signal row"));
        }
        let d_interp = rows[0].len();
        if d_interp == 0 {
            return Err(Error::invalid(
                "rows",
                "interpretation dimension must be at least 1",
            ));
        }
        let mut flat = Vec::with_capacity(k_signals * d_interp);
        for (s, row) in rows.iter().enumerate() {
            if row.len() != d_interp {
                return Err(Error::DimensionMismatch {
                    left: row.len(),
                    right: d_interp,
                });
            }
            let norm_sq: f64 = row.iter().map(|v| v * v).sum();
            if (norm_sq.sqrt() - 1.0).abs() > UNIT_TOL {
                return Err(Error::invalid(
                    "rows",
                    format!("row {s} has norm {}, expected 1", norm_sq.sqrt()),
                ));
            }
            flat.extend_from_slice(row);
        }
        Ok(PerceptionCoefficients {
            k_signals,
            d_interp,
            rows: flat,
        })
    }

    pub fn k_signals(&self) -> usize {
        self.k_signals
    }

    pub fn d_interp(&self) -> usize {
        self.d_interp
    }

    pub fn row(&self, s: usize) -> &[f64] {
        &self.rows[s * self.d_interp..(s + 1) * self.d_interp]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.k_signals).map(|s| self.row(s).to_vec()).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct CoefficientsWire {
    k: usize,
    d: usize,
    rows: Vec<Vec<f64>>,
}

impl Serialize for PerceptionCoefficients {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CoefficientsWire {
            k: self.k_signals,
            d: self.d_interp,
            rows: self.rows(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PerceptionCoefficients {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = CoefficientsWire::deserialize(deserializer)?;
        if wire.rows.len() != wire.k || wire.rows.iter().any(|r| r.len() != wire.d) {
            return Err(D::Error::custom("rows shape does not match declared k x d"));
        }
        PerceptionCoefficients::new(&wire.rows).map_err(D::Error::custom)
    }
}

/// Pure prospect state for one realized signal: a unit vector of length
/// k * d supported on the d coordinates of that signal's block.
#[derive(Debug, Clone, PartialEq)]
pub struct ProspectState {
    vec: Vec<f64>,
    signal_index: usize,
    d_interp: usize,
}

impl ProspectState {
    pub fn new(vec: Vec<f64>, signal_index: usize, d_interp: usize) -> Result<Self> {
        if d_interp == 0 || vec.len() % d_interp != 0 {
            return Err(Error::DimensionMismatch {
                left: vec.len(),
                right: d_interp,
            });
        }
        let k = vec.len() / d_interp;
        if signal_index >= k {
            return Err(Error::invalid(
                "signal_index",
                format!("{signal_index} out of range for {k} signals"),
            ));
        }
        let norm_sq: f64 = vec.iter().map(|v| v * v).sum();
        if (norm_sq.sqrt() - 1.0).abs() > UNIT_TOL {
            return Err(Error::invalid(
                "vec",
                format!("norm {} is not 1", norm_sq.sqrt()),
            ));
        }
        let block = signal_index * d_interp..(signal_index + 1) * d_interp;
        for (i, v) in vec.iter().enumerate() {
            if !block.contains(&i) && *v != 0.0 {
                return Err(Error::invalid(
                    "vec",
                    format!("support leaks outside the signal block at coordinate {i}"),
                ));
            }
        }
        Ok(ProspectState {
            vec,
            signal_index,
            d_interp,
        })
    }

    pub fn vector(&self) -> &[f64] {
        &self.vec
    }

    pub fn signal_index(&self) -> usize {
        self.signal_index
    }

    pub fn d_interp(&self) -> usize {
        self.d_interp
    }

    pub fn dim(&self) -> usize {
        self.vec.len()
    }
}

/// Embeds the coefficient row of `signal_index` as a pure state on the full
/// k * d space: amplitude a_{s,k} lands on coordinate s * d + k.
pub fn build_prospect_state(
    signal_index: usize,
    coeffs: &PerceptionCoefficients,
) -> Result<ProspectState> {
    let k = coeffs.k_signals();
    let d = coeffs.d_interp();
    if signal_index >= k {
        return Err(Error::invalid(
            "signal_index",
            format!("{signal_index} out of range for {k} signals"),
        ));
    }
    let mut vec = vec![0.0; k * d];
    vec[signal_index * d..(signal_index + 1) * d].copy_from_slice(coeffs.row(signal_index));
    ProspectState::new(vec, signal_index, d)
}

/// Trace-one positive-semidefinite operator on the k * d prospect space.
///
/// Validated at construction: symmetry, unit trace within 1e-12, and
/// smallest eigenvalue at least -1e-10.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    mat: SymMatrix,
}

impl DensityOperator {
    pub fn new(mat: SymMatrix) -> Result<Self> {
        let trace = mat.trace();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::invalid("mat", format!("trace {trace} is not 1")));
        }
        let eig = spectral_decompose(&mat)?;
        let min = eig.values().last().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::invalid(
                "mat",
                format!("smallest eigenvalue {min:e} is negative beyond tolerance"),
            ));
        }
        Ok(DensityOperator { mat })
    }

    pub fn matrix(&self) -> &SymMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// The Born-rule likelihood of observing `phi`: phi' rho phi.
    pub fn likelihood(&self, phi: &ProspectState) -> Result<f64> {
        self.mat.quadratic_form(phi.vector())
    }
}

#[derive(Serialize, Deserialize)]
struct DensityWire {
    dim: usize,
    mat: Vec<Vec<f64>>,
}

impl Serialize for DensityOperator {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        DensityWire {
            dim: self.dim(),
            mat: self.mat.rows(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DensityOperator {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = DensityWire::deserialize(deserializer)?;
        if wire.mat.len() != wire.dim {
            return Err(D::Error::custom("mat shape does not match declared dim"));
        }
        let mat = SymMatrix::from_rows(&wire.mat).map_err(D::Error::custom)?;
        DensityOperator::new(mat).map_err(D::Error::custom)
    }
}

/// Mixes the per-signal pure states with `pmf`: the result is block
/// diagonal, with block s equal to pmf[s] * a_s a_s'.
pub fn build_density(pmf: &[f64], coeffs: &PerceptionCoefficients) -> Result<DensityOperator> {
    validate_pmf("pmf", pmf, coeffs.k_signals())?;
    let k = coeffs.k_signals();
    let d = coeffs.d_interp();
    let mut mat = SymMatrix::zeros(k * d);
    for s in 0..k {
        let row = coeffs.row(s);
        let base = s * d;
        for a in 0..d {
            for b in a..d {
                mat.set_symmetric(base + a, base + b, pmf[s] * row[a] * row[b]);
            }
        }
    }
    DensityOperator::new(mat)
}

/// Draws a signal index from `pmf` and embeds its prospect state.
pub fn sample_prospect<R: Rng + ?Sized>(
    pmf: &[f64],
    coeffs: &PerceptionCoefficients,
    rng: &mut R,
) -> Result<ProspectState> {
    let s = sample_index(pmf, coeffs.k_signals(), rng)?;
    build_prospect_state(s, coeffs)
}

/// Categorical draw by inverse-cdf walk; also used for state draws.
pub(crate) fn sample_index<R: Rng + ?Sized>(pmf: &[f64], k: usize, rng: &mut R) -> Result<usize> {
    validate_pmf("pmf", pmf, k)?;
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, p) in pmf.iter().enumerate() {
        acc += p;
        if u < acc {
            return Ok(i);
        }
    }
    Ok(k - 1)
}

/// Independent standard-normal rows normalized to unit length; with d = 1
/// every entry is +1 or -1.
pub fn random_coefficients<R: Rng + ?Sized>(
    k: usize,
    d: usize,
    rng: &mut R,
) -> Result<PerceptionCoefficients> {
    if k == 0 || d == 0 {
        return Err(Error::invalid("k/d", "both must be at least 1"));
    }
    let mut rows = Vec::with_capacity(k);
    loop {
        rows.clear();
        let mut degenerate = false;
        for _ in 0..k {
            let row: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
            let norm: f64 = row.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm < 1e-12 {
                degenerate = true;
                break;
            }
            rows.push(row.iter().map(|v| v / norm).collect());
        }
        if !degenerate {
            return PerceptionCoefficients::new(&rows);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn gaussian_discretization_normalizes_and_orders() {
        let grid = vec![-1.0, 0.0, 1.0];
        let pmf = discretize_gaussian(0.0, 1.0, &grid).unwrap();
        assert_close(pmf.iter().sum::<f64>(), 1.0, 1e-15);
        assert_close(pmf[0], pmf[2], 1e-15);
        assert!(pmf[1] > pmf[0]);
        let single = discretize_gaussian(3.0, 0.5, &[2.0]).unwrap();
        assert_eq!(single, vec![1.0]);
    }

    #[test]
    fn gaussian_discretization_rejects_bad_variance() {
        assert!(discretize_gaussian(0.0, 0.0, &[0.0]).is_err());
        assert!(discretize_gaussian(0.0, -1.0, &[0.0]).is_err());
    }

    #[test]
    fn signal_model_validation() {
        let grid = vec![0.0, 1.0];
        let ok = SignalModel::new(grid.clone(), vec![0.5, 0.5], vec![0.25, 0.75], 0.5);
        assert!(ok.is_ok());
        assert!(SignalModel::new(vec![1.0, 0.0], vec![0.5, 0.5], vec![0.5, 0.5], 0.5).is_err());
        assert!(SignalModel::new(grid.clone(), vec![0.6, 0.5], vec![0.5, 0.5], 0.5).is_err());
        assert!(SignalModel::new(grid, vec![0.5, 0.5], vec![0.5, 0.5], 1.5).is_err());
    }

    #[test]
    fn prospect_state_places_row_in_block() {
        let coeffs = PerceptionCoefficients::new(&[
            vec![
                std::f64::consts::FRAC_1_SQRT_2,
                std::f64::consts::FRAC_1_SQRT_2,
            ],
            vec![1.0, 0.0],
        ])
        .unwrap();
        let phi = build_prospect_state(1, &coeffs).unwrap();
        assert_eq!(phi.signal_index(), 1);
        assert_eq!(phi.vector(), &[0.0, 0.0, 1.0, 0.0]);
        let phi0 = build_prospect_state(0, &coeffs).unwrap();
        assert_close(phi0.vector()[0], std::f64::consts::FRAC_1_SQRT_2, 1e-15);
        assert_eq!(phi0.vector()[2], 0.0);
        assert!(build_prospect_state(2, &coeffs).is_err());
    }

    #[test]
    fn non_unit_rows_are_rejected() {
        assert!(PerceptionCoefficients::new(&[vec![0.9, 0.1]]).is_err());
    }

    #[test]
    fn density_blocks_match_outer_products() {
        let coeffs = PerceptionCoefficients::new(&[
            vec![
                std::f64::consts::FRAC_1_SQRT_2,
                std::f64::consts::FRAC_1_SQRT_2,
            ],
            vec![1.0, 0.0],
        ])
        .unwrap();
        let rho = build_density(&[0.5, 0.5], &coeffs).unwrap();
        let m = rho.matrix();
        // Block 0: 0.5 * outer((1,1)/sqrt(2)) = [[0.25, 0.25], [0.25, 0.25]].
        for (i, j, want) in [
            (0, 0, 0.25),
            (0, 1, 0.25),
            (1, 1, 0.25),
            (2, 2, 0.5),
            (2, 3, 0.0),
            (3, 3, 0.0),
        ] {
            assert_close(m.get(i, j), want, 1e-15);
        }
        // Off-block entries are exactly zero by construction.
        for i in 0..2 {
            for j in 2..4 {
                assert_eq!(m.get(i, j), 0.0);
            }
        }
        assert_close(m.trace(), 1.0, 1e-15);
    }

    #[test]
    fn degenerate_pmf_concentrates_the_density() {
        let coeffs = PerceptionCoefficients::new(&[vec![1.0], vec![1.0]]).unwrap();
        let rho = build_density(&[1.0, 0.0], &coeffs).unwrap();
        assert_close(rho.matrix().get(0, 0), 1.0, 1e-15);
        assert_close(rho.matrix().get(1, 1), 0.0, 1e-15);
    }

    #[test]
    fn born_rule_recovers_pmf_under_shared_coefficients() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let coeffs = random_coefficients(3, 2, &mut rng).unwrap();
        let pmf = vec![0.2, 0.5, 0.3];
        let rho = build_density(&pmf, &coeffs).unwrap();
        for s in 0..3 {
            let phi = build_prospect_state(s, &coeffs).unwrap();
            assert_close(rho.likelihood(&phi).unwrap(), pmf[s], 1e-12);
        }
    }

    #[test]
    fn sampling_respects_degenerate_pmf() {
        let coeffs = PerceptionCoefficients::new(&[vec![1.0], vec![1.0]]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..50 {
            let phi = sample_prospect(&[0.0, 1.0], &coeffs, &mut rng).unwrap();
            assert_eq!(phi.signal_index(), 1);
        }
    }

    #[test]
    fn sampling_frequency_tracks_pmf() {
        // Binomial 3-sigma bound at n = 1e5 for p = 0.7 is about 0.0043.
        let coeffs = PerceptionCoefficients::new(&[vec![1.0], vec![1.0]]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 100_000;
        let mut ones = 0usize;
        for _ in 0..n {
            if sample_prospect(&[0.3, 0.7], &coeffs, &mut rng)
                .unwrap()
                .signal_index()
                == 1
            {
                ones += 1;
            }
        }
        let freq = ones as f64 / n as f64;
        assert!((freq - 0.7).abs() <= 0.01, "frequency {freq}");
    }

    #[test]
    fn random_coefficients_are_unit_and_deterministic() {
        let a = random_coefficients(4, 3, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let b = random_coefficients(4, 3, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(a, b);
        let signs = random_coefficients(6, 1, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        for s in 0..6 {
            assert_close(signs.row(s)[0].abs(), 1.0, 1e-15);
        }
    }

    #[test]
    fn coefficient_serialization_round_trips() {
        let coeffs = random_coefficients(3, 2, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let text = serde_json::to_string(&coeffs).unwrap();
        assert!(text.contains("\"k\":3") && text.contains("\"d\":2"));
        let back: PerceptionCoefficients = serde_json::from_str(&text).unwrap();
        assert_eq!(coeffs, back);
    }

    #[test]
    fn density_serialization_round_trips() {
        let coeffs = random_coefficients(2, 2, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        let rho = build_density(&[0.4, 0.6], &coeffs).unwrap();
        let text = serde_json::to_string(&rho).unwrap();
        let back: DensityOperator = serde_json::from_str(&text).unwrap();
        assert_eq!(rho, back);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn random_densities_satisfy_invariants(
            seed in 0u64..1_000_000,
            k in 1usize..=5,
            d in 1usize..=3,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let coeffs = random_coefficients(k, d, &mut rng).unwrap();
            let raw: Vec<f64> = (0..k).map(|_| rng.random::<f64>() + 1e-3).collect();
            let total: f64 = raw.iter().sum();
            let pmf: Vec<f64> = raw.iter().map(|v| v / total).collect();
            let rho = build_density(&pmf, &coeffs).unwrap();
            let m = rho.matrix();
            prop_assert!((m.trace() - 1.0).abs() <= 1e-12);
            // Exact block diagonality.
            for i in 0..k * d {
                for j in 0..k * d {
                    if i / d != j / d {
                        prop_assert_eq!(m.get(i, j), 0.0);
                    }
                }
            }
            // Each block is rank <= 1 with its pmf mass as the only
            // nonzero eigenvalue: trace pmf[s], squared Frobenius pmf[s]^2.
            for s in 0..k {
                let mut tr = 0.0;
                let mut frob = 0.0;
                for a in 0..d {
                    tr += m.get(s * d + a, s * d + a);
                    for b in 0..d {
                        frob += m.get(s * d + a, s * d + b).powi(2);
                    }
                }
                prop_assert!((tr - pmf[s]).abs() <= 1e-12);
                prop_assert!((frob - pmf[s] * pmf[s]).abs() <= 1e-12);
            }
            let eig = spectral_decompose(m).unwrap();
            prop_assert!(eig.values().last().unwrap() >= &-1e-10);
        }
    }
}
