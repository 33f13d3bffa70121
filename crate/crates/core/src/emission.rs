//! The CO₂ emission model and complexity percentages.
//!
//! Emissions are the product
//!
//! ```text
//! kg CO₂ = H(N_p) · sf(N_i) · Π h_k · Π t_l · Π b_m · t_unit · P_h · η · e_r
//! ```
//!
//! evaluated as a sum of logs so that realistic swarm sizes stay
//! representable. When the total fits in an `f64` the product is also
//! evaluated exactly over big rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{AlgorithmDescriptor, Category, FactorAssignment, HardwareProfile, RegionProfile};
use crate::combinatorics::{
    hyperfactorial, log_hyperfactorial, log_superfactorial, superfactorial, LogMagnitude,
};

/// Lowest and highest level of the percentage grid.
pub const LEVEL_MIN: i64 = 18;
pub const LEVEL_MAX: i64 = 27;
/// Percent value of one grid level is `100 / LEVEL_DIVISOR`.
pub const LEVEL_DIVISOR: f64 = 343.0;

/// Exact evaluation is attempted only below these sizes and log totals.
const EXACT_MAX_COUNT: u64 = 200;
const EXACT_MAX_LN: f64 = 700.0;

#[derive(Debug, Error, PartialEq)]
pub enum EmissionError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("proportional normalization needs positive scores; {name} has log score {value}")]
    NonPositiveScore { name: String, value: f64 },
    #[error("log score for {0} is not finite")]
    NonFiniteScore(String),
    #[error("cannot normalize an empty batch")]
    EmptyBatch,
    #[error("algorithm {0:?} is not in the catalog")]
    UnknownAlgorithm(String),
}

/// Every symbol of the emission product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmissionInputs {
    pub num_particles: u64,
    pub num_iterations: u64,
    pub factors: FactorAssignment,
    /// Hours per unit of computation.
    pub unit_time_hours: f64,
    pub hardware: HardwareProfile,
    pub region: RegionProfile,
}

impl EmissionInputs {
    /// All multiplicative identities except the given counts.
    pub fn unit(num_particles: u64, num_iterations: u64) -> Self {
        EmissionInputs {
            num_particles,
            num_iterations,
            factors: FactorAssignment::neutral(),
            unit_time_hours: 1.0,
            hardware: HardwareProfile::default(),
            region: RegionProfile::default(),
        }
    }

    pub fn validate(&self) -> Result<(), EmissionError> {
        validate_counts(self.num_particles, self.num_iterations)?;
        self.factors
            .validate()
            .map_err(|e| EmissionError::InvalidInput(e.to_string()))?;
        if !(self.unit_time_hours.is_finite() && self.unit_time_hours > 0.0) {
            return Err(EmissionError::InvalidInput(format!(
                "unit time must be positive hours, got {}",
                self.unit_time_hours
            )));
        }
        // Profiles are validated at construction, but deserialized values bypass that.
        HardwareProfile::new(self.hardware.avg_power_kw(), self.hardware.utilization())
            .map_err(|e| EmissionError::InvalidInput(e.to_string()))?;
        RegionProfile::new(self.region.region_code(), self.region.emission_factor())
            .map_err(|e| EmissionError::InvalidInput(e.to_string()))?;
        Ok(())
    }
}

fn validate_counts(num_particles: u64, num_iterations: u64) -> Result<(), EmissionError> {
    if num_particles == 0 {
        return Err(EmissionError::InvalidInput("number of particles must be >= 1".into()));
    }
    if num_iterations == 0 {
        return Err(EmissionError::InvalidInput("number of iterations must be >= 1".into()));
    }
    Ok(())
}

/// One factor of the product, in log form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmissionTerm {
    pub term: String,
    /// `None` when the factor is exactly zero.
    pub ln_value: Option<f64>,
    pub zero: bool,
}

impl EmissionTerm {
    fn log(term: &str, ln_value: f64) -> Self {
        EmissionTerm { term: term.into(), ln_value: Some(ln_value), zero: false }
    }

    fn scalar(term: &str, value: f64) -> Self {
        match LogMagnitude::of(value) {
            Some(m) => Self::log(term, m.ln_value()),
            None => EmissionTerm { term: term.into(), ln_value: None, zero: true },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmissionEstimate {
    /// `None` when the estimate is exactly zero.
    pub kg_co2_log: Option<LogMagnitude>,
    /// Linear value from exact rational arithmetic, when it fits in an `f64`.
    pub kg_co2_exact: Option<f64>,
    pub zero_emission: bool,
    pub components: Vec<EmissionTerm>,
}

impl EmissionEstimate {
    /// Linear kg CO₂: exact when available, else `exp` of the log (possibly `+inf`).
    pub fn kg_co2(&self) -> f64 {
        if self.zero_emission {
            return 0.0;
        }
        self.kg_co2_exact
            .or_else(|| self.kg_co2_log.map(LogMagnitude::value))
            .unwrap_or(0.0)
    }

    pub fn ln_kg_co2(&self) -> Option<f64> {
        self.kg_co2_log.map(LogMagnitude::ln_value)
    }
}

fn sum_ln(values: &[f64]) -> f64 {
    values.iter().map(|v| v.ln()).sum()
}

fn algorithmic_terms(num_particles: u64, num_iterations: u64, factors: &FactorAssignment) -> Vec<EmissionTerm> {
    vec![
        EmissionTerm::log("hyperfactorial_particles", log_hyperfactorial(num_particles).ln_value()),
        EmissionTerm::log("superfactorial_iterations", log_superfactorial(num_iterations).ln_value()),
        EmissionTerm::log("hyperparameter_factors", sum_ln(&factors.hyperparameter)),
        EmissionTerm::log("topology_factors", sum_ln(&factors.topology)),
        EmissionTerm::log("boundary_factors", sum_ln(&factors.boundary)),
    ]
}

/// Evaluates the emission product for `inputs`.
pub fn estimate_emissions(inputs: &EmissionInputs) -> Result<EmissionEstimate, EmissionError> {
    inputs.validate()?;
    let mut components =
        algorithmic_terms(inputs.num_particles, inputs.num_iterations, &inputs.factors);
    components.push(EmissionTerm::scalar("unit_time_hours", inputs.unit_time_hours));
    components.push(EmissionTerm::scalar("power_kw", inputs.hardware.avg_power_kw()));
    components.push(EmissionTerm::scalar("utilization", inputs.hardware.utilization()));
    components.push(EmissionTerm::scalar("emission_factor", inputs.region.emission_factor()));

    let zero_emission = components.iter().any(|c| c.zero);
    if zero_emission {
        return Ok(EmissionEstimate {
            kg_co2_log: None,
            kg_co2_exact: Some(0.0),
            zero_emission,
            components,
        });
    }
    let ln_total: f64 = components.iter().filter_map(|c| c.ln_value).sum();
    let kg_co2_exact = (inputs.num_particles <= EXACT_MAX_COUNT
        && inputs.num_iterations <= EXACT_MAX_COUNT
        && ln_total.abs() < EXACT_MAX_LN)
        .then(|| exact_product(inputs).to_f64())
        .flatten()
        .filter(|v| v.is_finite() && *v > 0.0);
    Ok(EmissionEstimate {
        kg_co2_log: Some(LogMagnitude::from_ln(ln_total)),
        kg_co2_exact,
        zero_emission,
        components,
    })
}

/// The emission product over big rationals, treating every `f64` as the
/// exact binary fraction it stores.
pub fn exact_product(inputs: &EmissionInputs) -> BigRational {
    let to_ratio = |v: f64| BigRational::from_float(v).expect("finite factor");
    let mut acc = BigRational::from_integer(BigInt::from(hyperfactorial(inputs.num_particles).into_biguint()));
    acc *= BigRational::from_integer(BigInt::from(superfactorial(inputs.num_iterations).into_biguint()));
    for (_, group) in inputs.factors.groups() {
        for &f in group {
            acc *= to_ratio(f);
        }
    }
    for v in [
        inputs.unit_time_hours,
        inputs.hardware.avg_power_kw(),
        inputs.hardware.utilization(),
        inputs.region.emission_factor(),
    ] {
        acc *= to_ratio(v);
    }
    if acc.numer().sign() == num_bigint::Sign::NoSign {
        return BigRational::from_integer(BigInt::from(0));
    }
    acc
}

/// Natural log of a positive big rational.
pub fn ln_big_rational(value: &BigRational) -> Option<f64> {
    let num = value.numer().to_biguint()?;
    let den = value.denom().to_biguint()?;
    if den == num_bigint::BigUint::one() {
        return crate::combinatorics::ln_biguint(&num);
    }
    Some(crate::combinatorics::ln_biguint(&num)? - crate::combinatorics::ln_biguint(&den)?)
}

/// Algorithmic complexity of one algorithm, optionally normalized to a percentage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityScore {
    pub algorithm_name: String,
    pub log_score: LogMagnitude,
    pub percentage: Option<f64>,
    pub level: Option<i64>,
}

impl ComplexityScore {
    pub fn new(algorithm_name: impl Into<String>, log_score: LogMagnitude) -> Self {
        ComplexityScore { algorithm_name: algorithm_name.into(), log_score, percentage: None, level: None }
    }
}

/// The algorithmic part of the emission product; deployment scalars excluded.
pub fn complexity_score(
    descriptor: &AlgorithmDescriptor,
    num_particles: u64,
    num_iterations: u64,
) -> Result<ComplexityScore, EmissionError> {
    let log_score = algorithmic_log_score(num_particles, num_iterations, &descriptor.factors)?;
    Ok(ComplexityScore::new(descriptor.name.clone(), log_score))
}

/// `ln(H(N_p) · sf(N_i) · Π h · Π t · Π b)`.
pub fn algorithmic_log_score(
    num_particles: u64,
    num_iterations: u64,
    factors: &FactorAssignment,
) -> Result<LogMagnitude, EmissionError> {
    validate_counts(num_particles, num_iterations)?;
    factors.validate().map_err(|e| EmissionError::InvalidInput(e.to_string()))?;
    let ln: f64 = algorithmic_terms(num_particles, num_iterations, factors)
        .iter()
        .filter_map(|t| t.ln_value)
        .sum();
    Ok(LogMagnitude::from_ln(ln))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizationMode {
    /// Share of the batch total.
    #[default]
    Proportional,
    /// Min-max quantization onto the integer level grid.
    LevelGrid,
}

/// Round half to even at two decimals.
pub fn round_2dp(x: f64) -> f64 {
    (x * 100.0).round_ties_even() / 100.0
}

/// Percentage represented by a grid level.
pub fn level_percentage(level: i64) -> f64 {
    round_2dp(level as f64 * 100.0 / LEVEL_DIVISOR)
}

/// Assigns percentages to a batch; output order mirrors input order.
pub fn normalize_to_percentages(
    scores: &[ComplexityScore],
    mode: NormalizationMode,
) -> Result<Vec<ComplexityScore>, EmissionError> {
    if scores.is_empty() {
        return Err(EmissionError::EmptyBatch);
    }
    if let Some(bad) = scores.iter().find(|s| !s.log_score.ln_value().is_finite()) {
        return Err(EmissionError::NonFiniteScore(bad.algorithm_name.clone()));
    }
    let mut out = scores.to_vec();
    match mode {
        NormalizationMode::Proportional => {
            if let Some(bad) = scores.iter().find(|s| s.log_score.ln_value() <= 0.0) {
                return Err(EmissionError::NonPositiveScore {
                    name: bad.algorithm_name.clone(),
                    value: bad.log_score.ln_value(),
                });
            }
            let total: f64 = scores.iter().map(|s| s.log_score.ln_value()).sum();
            for s in &mut out {
                s.percentage = Some(100.0 * s.log_score.ln_value() / total);
                s.level = None;
            }
        }
        NormalizationMode::LevelGrid => {
            let (lo, hi) = scores.iter().map(|s| s.log_score.ln_value()).fold(
                (f64::INFINITY, f64::NEG_INFINITY),
                |(lo, hi), v| (lo.min(v), hi.max(v)),
            );
            let span = (LEVEL_MAX - LEVEL_MIN) as f64;
            for s in &mut out {
                let level = if hi > lo {
                    let t = (s.log_score.ln_value() - lo) / (hi - lo);
                    (LEVEL_MIN as f64 + span * t).round_ties_even() as i64
                } else {
                    ((LEVEL_MIN + LEVEL_MAX) as f64 / 2.0).round_ties_even() as i64
                };
                s.level = Some(level);
                s.percentage = Some(level_percentage(level));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategorySummary {
    pub category: Category,
    pub count: usize,
    pub mean: Option<f64>,
    pub min: Option<f64>,
    pub max: Option<f64>,
}

/// Per-category count, mean, min and max of the scores' percentages.
///
/// Scores without a percentage are counted but do not enter the statistics.
pub fn category_summary(
    scores: &[ComplexityScore],
    catalog: &[AlgorithmDescriptor],
) -> Result<Vec<CategorySummary>, EmissionError> {
    let mut buckets: Vec<(Category, usize, Vec<f64>)> =
        Category::ALL.iter().map(|c| (*c, 0, Vec::new())).collect();
    for s in scores {
        let descriptor = crate::catalog::lookup(catalog, &s.algorithm_name)
            .ok_or_else(|| EmissionError::UnknownAlgorithm(s.algorithm_name.clone()))?;
        let bucket = buckets
            .iter_mut()
            .find(|(c, _, _)| *c == descriptor.category)
            .expect("every category has a bucket");
        bucket.1 += 1;
        if let Some(p) = s.percentage {
            bucket.2.push(p);
        }
    }
    Ok(buckets
        .into_iter()
        .map(|(category, count, values)| {
            let (mean, min, max) = if values.is_empty() {
                (None, None, None)
            } else {
                (
                    Some(values.iter().sum::<f64>() / values.len() as f64),
                    values.iter().copied().reduce(f64::min),
                    values.iter().copied().reduce(f64::max),
                )
            };
            CategorySummary { category, count, mean, min, max }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::load_reference_table;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn identity_and_small_composites() {
        let one = estimate_emissions(&EmissionInputs::unit(1, 1)).unwrap();
        assert_eq!(one.kg_co2(), 1.0);
        assert_eq!(one.ln_kg_co2(), Some(0.0));

        let e = estimate_emissions(&EmissionInputs::unit(3, 2)).unwrap();
        assert_eq!(e.kg_co2_exact, Some(216.0));
        assert!(rel(e.kg_co2_log.unwrap().value(), 216.0) < 1e-12);

        let inputs = EmissionInputs {
            unit_time_hours: 72.0,
            hardware: HardwareProfile::new(0.3, 0.8).unwrap(),
            region: RegionProfile::new("XX", 0.5).unwrap(),
            ..EmissionInputs::unit(2, 2)
        };
        let e = estimate_emissions(&inputs).unwrap();
        assert!(rel(e.kg_co2(), 69.12) < 1e-12, "{}", e.kg_co2());
        assert!(rel(e.kg_co2_log.unwrap().value(), 69.12) < 1e-12);
    }

    #[test]
    fn zero_counts_rejected() {
        assert!(estimate_emissions(&EmissionInputs::unit(0, 1)).is_err());
        assert!(estimate_emissions(&EmissionInputs::unit(1, 0)).is_err());
    }

    #[test]
    fn zero_carbon_region() {
        let inputs = EmissionInputs {
            region: RegionProfile::new("SE", 0.0).unwrap(),
            ..EmissionInputs::unit(5, 5)
        };
        let e = estimate_emissions(&inputs).unwrap();
        assert!(e.zero_emission);
        assert_eq!(e.kg_co2(), 0.0);
        assert_eq!(e.kg_co2_log, None);
        let flagged = e.components.iter().find(|c| c.term == "emission_factor").unwrap();
        assert!(flagged.zero && flagged.ln_value.is_none());
    }

    #[test]
    fn components_sum_to_total() {
        let inputs = EmissionInputs {
            factors: FactorAssignment { hyperparameter: vec![1.5, 0.7], topology: vec![3.0], boundary: vec![] },
            unit_time_hours: 72.0,
            ..EmissionInputs::unit(40, 300)
        };
        let e = estimate_emissions(&inputs).unwrap();
        let sum: f64 = e.components.iter().filter_map(|c| c.ln_value).sum();
        assert_eq!(sum, e.ln_kg_co2().unwrap());
        assert_eq!(e.kg_co2_exact, None);
    }

    #[test]
    fn complexity_examples() {
        let mut d = load_reference_table().unwrap()[0].clone();
        d.factors = FactorAssignment::neutral();
        assert_eq!(complexity_score(&d, 1, 1).unwrap().log_score.ln_value(), 0.0);
        let s = complexity_score(&d, 4, 4).unwrap().log_score.ln_value();
        assert!((s - 7962624f64.ln()).abs() < 1e-12);
        d.factors = FactorAssignment { hyperparameter: vec![2.0], topology: vec![2.0], boundary: vec![2.0] };
        let s = complexity_score(&d, 1, 1).unwrap().log_score.ln_value();
        assert!((s - 8f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn proportional_examples() {
        let one = normalize_to_percentages(
            &[ComplexityScore::new("a", LogMagnitude::from_ln(3.0))],
            NormalizationMode::Proportional,
        )
        .unwrap();
        assert_eq!(one[0].percentage, Some(100.0));
        let two = normalize_to_percentages(
            &[
                ComplexityScore::new("a", LogMagnitude::from_ln(3.0)),
                ComplexityScore::new("b", LogMagnitude::from_ln(3.0)),
            ],
            NormalizationMode::Proportional,
        )
        .unwrap();
        assert_eq!(two[0].percentage, Some(50.0));
        assert_eq!(two[1].percentage, Some(50.0));
        let err = normalize_to_percentages(
            &[ComplexityScore::new("z", LogMagnitude::ONE)],
            NormalizationMode::Proportional,
        );
        assert!(matches!(err, Err(EmissionError::NonPositiveScore { .. })));
        assert_eq!(normalize_to_percentages(&[], NormalizationMode::LevelGrid), Err(EmissionError::EmptyBatch));
    }

    #[test]
    fn level_grid_single_and_flat_batches() {
        let flat: Vec<_> = (0..3)
            .map(|i| ComplexityScore::new(format!("a{i}"), LogMagnitude::from_ln(4.0)))
            .collect();
        let out = normalize_to_percentages(&flat, NormalizationMode::LevelGrid).unwrap();
        assert!(out.iter().all(|s| s.level == Some(22) && s.percentage == Some(6.41)));
    }

    #[test]
    fn level_grid_reproduces_reference_column() {
        let catalog = load_reference_table().unwrap();
        let scores: Vec<_> = catalog.iter().map(|d| complexity_score(d, 30, 100).unwrap()).collect();
        let out = normalize_to_percentages(&scores, NormalizationMode::LevelGrid).unwrap();
        for (d, s) in catalog.iter().zip(&out) {
            assert_eq!(s.percentage, Some(d.reference_complexity_pct), "{}", d.name);
        }
    }

    #[test]
    fn summaries() {
        let catalog = load_reference_table().unwrap();
        let scores: Vec<_> = catalog
            .iter()
            .map(|d| ComplexityScore {
                percentage: Some(d.reference_complexity_pct),
                ..ComplexityScore::new(d.name.clone(), LogMagnitude::ONE)
            })
            .collect();
        let summary = category_summary(&scores, &catalog).unwrap();
        let stochastic = &summary[0];
        assert_eq!(stochastic.count, 8);
        assert!((stochastic.mean.unwrap() - 6.12125).abs() < 1e-9);
        assert_eq!(summary[2].max, Some(7.87));

        let empty = category_summary(&[], &catalog).unwrap();
        assert!(empty.iter().all(|c| c.count == 0 && c.mean.is_none()));
        let unknown = category_summary(&[ComplexityScore::new("Nope", LogMagnitude::ONE)], &catalog);
        assert!(matches!(unknown, Err(EmissionError::UnknownAlgorithm(_))));
    }
}
