//! Benchmark objectives and a seeded, metered experiment runner.
//!
//! Each run of a plan feeds its swarm size, iterations used and (optionally)
//! wall time into the emission model.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{
    lookup, AlgorithmDescriptor, BoundaryHandling, Category, FactorAssignment, HardwareProfile, RegionProfile,
    StoppingCriteria, Topology,
};
use crate::emission::{
    algorithmic_log_score, category_summary, complexity_score, estimate_emissions, normalize_to_percentages,
    CategorySummary, ComplexityScore, EmissionError, EmissionEstimate, EmissionInputs, NormalizationMode,
};
use crate::engine::{optimize, AlgorithmKind, EngineError, RunMeter, SearchSpace, SwarmConfig};

/// Unit time used when a plan does not choose one, in hours.
pub const DEFAULT_UNIT_HOURS: f64 = 72.0;

/// Swarm size and iteration count used to score the catalog without running it.
pub const CATALOG_PARTICLES: u64 = 30;
pub const CATALOG_ITERATIONS: u64 = 100;

#[derive(Debug, Error, PartialEq)]
pub enum HarnessError {
    #[error("invalid plan: {0}")]
    InvalidPlan(String),
    #[error("cannot compare runs on different functions: {0} vs {1}")]
    MixedFunctions(String, String),
    #[error("no successful runs to compare")]
    NoSuccessfulRuns,
    #[error(transparent)]
    Emission(#[from] EmissionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TestFunctionKind {
    Sphere,
    Rastrigin,
    Rosenbrock,
    Ackley,
    Griewank,
}

impl TestFunctionKind {
    pub const ALL: [TestFunctionKind; 5] = [
        TestFunctionKind::Sphere,
        TestFunctionKind::Rastrigin,
        TestFunctionKind::Rosenbrock,
        TestFunctionKind::Ackley,
        TestFunctionKind::Griewank,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TestFunctionKind::Sphere => "Sphere",
            TestFunctionKind::Rastrigin => "Rastrigin",
            TestFunctionKind::Rosenbrock => "Rosenbrock",
            TestFunctionKind::Ackley => "Ackley",
            TestFunctionKind::Griewank => "Griewank",
        }
    }

    /// Conventional symmetric search box.
    pub fn default_bounds(self) -> (f64, f64) {
        match self {
            TestFunctionKind::Sphere => (-5.0, 5.0),
            TestFunctionKind::Rastrigin => (-5.12, 5.12),
            TestFunctionKind::Rosenbrock => (-5.0, 10.0),
            TestFunctionKind::Ackley => (-32.768, 32.768),
            TestFunctionKind::Griewank => (-600.0, 600.0),
        }
    }
}

impl fmt::Display for TestFunctionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TestFunctionKind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TestFunctionKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| HarnessError::InvalidPlan(format!("unknown test function {s:?}")))
    }
}

/// A standard objective in a fixed dimension. All have optimum value 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub name: TestFunctionKind,
    pub dimension: usize,
}

impl TestFunction {
    pub fn new(name: TestFunctionKind, dimension: usize) -> Result<Self, HarnessError> {
        if dimension == 0 {
            return Err(HarnessError::InvalidPlan("dimension must be positive".into()));
        }
        if name == TestFunctionKind::Rosenbrock && dimension < 2 {
            return Err(HarnessError::InvalidPlan("Rosenbrock needs dimension >= 2".into()));
        }
        Ok(TestFunction { name, dimension })
    }

    pub fn known_optimum_fitness(&self) -> f64 {
        0.0
    }

    pub fn known_optimum_position(&self) -> Vec<f64> {
        let v = if self.name == TestFunctionKind::Rosenbrock { 1.0 } else { 0.0 };
        vec![v; self.dimension]
    }

    pub fn search_space(&self) -> SearchSpace {
        let (lo, hi) = self.name.default_bounds();
        SearchSpace::uniform(self.dimension, lo, hi).expect("default bounds are valid")
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        use std::f64::consts::{E, PI};
        match self.name {
            TestFunctionKind::Sphere => x.iter().map(|v| v * v).sum(),
            TestFunctionKind::Rastrigin => {
                10.0 * x.len() as f64 + x.iter().map(|v| v * v - 10.0 * (2.0 * PI * v).cos()).sum::<f64>()
            }
            TestFunctionKind::Rosenbrock => x
                .windows(2)
                .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
                .sum(),
            TestFunctionKind::Ackley => {
                let n = x.len() as f64;
                let sq = x.iter().map(|v| v * v).sum::<f64>() / n;
                let cos = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
                -20.0 * (-0.2 * sq.sqrt()).exp() - cos.exp() + 20.0 + E
            }
            TestFunctionKind::Griewank => {
                let sum = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
                let prod: f64 = x.iter().enumerate().map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos()).product();
                sum - prod + 1.0
            }
        }
    }
}

/// How the unit time of the emission product is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "snake_case")]
pub enum UnitTimePolicy {
    Fixed { hours: f64 },
    /// Each run's wall time, in hours.
    Measured,
}

impl Default for UnitTimePolicy {
    fn default() -> Self {
        UnitTimePolicy::Fixed { hours: DEFAULT_UNIT_HOURS }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Deployment {
    pub unit_time: UnitTimePolicy,
    pub hardware: HardwareProfile,
    pub region: RegionProfile,
}

/// A swarm configuration as written in a plan. The algorithm is kept by
/// name so that estimation-only entries can be reported rather than rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlannedConfig {
    pub algorithm: String,
    pub swarm_size: usize,
    pub topology: Topology,
    pub boundary: BoundaryHandling,
    pub stopping: StoppingCriteria,
    #[serde(default)]
    pub hyperparameters: BTreeMap<String, f64>,
}

impl PlannedConfig {
    pub fn new(algorithm: impl Into<String>, swarm_size: usize, stopping: StoppingCriteria) -> Self {
        PlannedConfig {
            algorithm: algorithm.into(),
            swarm_size,
            topology: Topology::Global,
            boundary: BoundaryHandling::default(),
            stopping,
            hyperparameters: BTreeMap::new(),
        }
    }

    fn to_swarm_config(&self, seed: u64) -> Result<SwarmConfig, EngineError> {
        let kind = AlgorithmKind::from_name(&self.algorithm)?;
        let config = SwarmConfig {
            algorithm: kind,
            swarm_size: self.swarm_size,
            topology: self.topology,
            boundary: self.boundary,
            stopping: self.stopping.clone(),
            hyperparameters: self.hyperparameters.clone(),
            seed,
        };
        config.validate()?;
        Ok(config)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub configs: Vec<PlannedConfig>,
    pub function: TestFunction,
    /// Overrides the function's default box when set.
    #[serde(default)]
    pub bounds: Option<(f64, f64)>,
    pub repetitions: u32,
    pub base_seed: u64,
    #[serde(default)]
    pub deployment: Deployment,
}

impl ExperimentPlan {
    pub fn validate(&self) -> Result<(), HarnessError> {
        let invalid = |m: String| Err(HarnessError::InvalidPlan(m));
        if self.configs.is_empty() {
            return invalid("plan has no configs".into());
        }
        if self.repetitions == 0 {
            return invalid("repetitions must be >= 1".into());
        }
        TestFunction::new(self.function.name, self.function.dimension)?;
        self.search_space()?;
        if let UnitTimePolicy::Fixed { hours } = self.deployment.unit_time {
            if !(hours.is_finite() && hours > 0.0) {
                return invalid(format!("fixed unit time must be positive hours, got {hours}"));
            }
        }
        HardwareProfile::new(self.deployment.hardware.avg_power_kw(), self.deployment.hardware.utilization())
            .map_err(|e| HarnessError::InvalidPlan(e.to_string()))?;
        RegionProfile::new(self.deployment.region.region_code(), self.deployment.region.emission_factor())
            .map_err(|e| HarnessError::InvalidPlan(e.to_string()))?;
        Ok(())
    }

    pub fn search_space(&self) -> Result<SearchSpace, HarnessError> {
        match self.bounds {
            None => Ok(self.function.search_space()),
            Some((lo, hi)) => SearchSpace::uniform(self.function.dimension, lo, hi)
                .map_err(|e| HarnessError::InvalidPlan(e.to_string())),
        }
    }

    /// Seed of repetition `r`.
    pub fn seed_for(&self, repetition: u32) -> u64 {
        self.base_seed.wrapping_add(u64::from(repetition))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunError {
    /// `unsupported-algorithm`, `invalid-config` or `emission-error`.
    pub marker: String,
    pub message: String,
}

impl From<EngineError> for RunError {
    fn from(e: EngineError) -> Self {
        RunError { marker: e.marker().into(), message: e.to_string() }
    }
}

/// One metered run. Errored runs keep their slot and carry `error`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config_index: usize,
    pub repetition: u32,
    pub seed: u64,
    pub config: PlannedConfig,
    pub function: TestFunction,
    pub best_fitness: Option<f64>,
    pub best_position: Option<Vec<f64>>,
    pub meter: Option<RunMeter>,
    pub emission_inputs: Option<EmissionInputs>,
    pub emission: Option<EmissionEstimate>,
    /// RFC 3339, UTC, taken when the run finished.
    pub timestamp: String,
    pub error: Option<RunError>,
}

impl RunReport {
    pub fn succeeded(&self) -> bool {
        self.error.is_none()
    }

    /// The algorithmic part of the recorded emission inputs, as a log.
    pub fn complexity_log(&self) -> Option<f64> {
        let inputs = self.emission_inputs.as_ref()?;
        algorithmic_log_score(inputs.num_particles, inputs.num_iterations, &inputs.factors)
            .ok()
            .map(|m| m.ln_value())
    }
}

/// Catalog factors for a runnable algorithm, neutral when it has no entry.
fn factors_for(kind: AlgorithmKind, catalog: &[AlgorithmDescriptor]) -> FactorAssignment {
    lookup(catalog, kind.catalog_name())
        .map(|d| d.factors.clone())
        .unwrap_or_else(FactorAssignment::neutral)
}

fn execute(
    plan: &ExperimentPlan,
    space: &SearchSpace,
    catalog: &[AlgorithmDescriptor],
    config_index: usize,
    repetition: u32,
) -> RunReport {
    let planned = &plan.configs[config_index];
    let seed = plan.seed_for(repetition);
    let mut report = RunReport {
        config_index,
        repetition,
        seed,
        config: planned.clone(),
        function: plan.function,
        best_fitness: None,
        best_position: None,
        meter: None,
        emission_inputs: None,
        emission: None,
        timestamp: String::new(),
        error: None,
    };
    let outcome = planned.to_swarm_config(seed).and_then(|config| {
        let function = plan.function;
        optimize(&config, space, move |x: &[f64]| function.evaluate(x)).map(|r| (config.algorithm, r))
    });
    match outcome {
        Err(e) => report.error = Some(e.into()),
        Ok((kind, result)) => {
            let unit_time_hours = match plan.deployment.unit_time {
                UnitTimePolicy::Fixed { hours } => hours,
                UnitTimePolicy::Measured => result.meter.wall_time_s.max(f64::MIN_POSITIVE) / 3600.0,
            };
            let inputs = EmissionInputs {
                num_particles: planned.swarm_size as u64,
                num_iterations: (result.meter.iterations_used as u64).max(1),
                factors: factors_for(kind, catalog),
                unit_time_hours,
                hardware: plan.deployment.hardware,
                region: plan.deployment.region.clone(),
            };
            match estimate_emissions(&inputs) {
                Ok(estimate) => report.emission = Some(estimate),
                Err(e) => {
                    report.error = Some(RunError { marker: "emission-error".into(), message: e.to_string() })
                }
            }
            report.emission_inputs = Some(inputs);
            report.best_fitness = Some(result.best_fitness);
            report.best_position = Some(result.best_position);
            report.meter = Some(result.meter);
        }
    }
    report.timestamp = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true);
    report
}

/// Runs every config `repetitions` times on up to `workers` threads.
///
/// Reports come back config-major in plan order, whatever order the runs
/// finish in. Per-run failures are recorded in the report; only an invalid
/// plan is an error.
pub fn run_experiment(
    plan: &ExperimentPlan,
    catalog: &[AlgorithmDescriptor],
    workers: usize,
) -> Result<Vec<RunReport>, HarnessError> {
    plan.validate()?;
    let space = plan.search_space()?;
    let jobs: Vec<(usize, u32)> = (0..plan.configs.len())
        .flat_map(|c| (0..plan.repetitions).map(move |r| (c, r)))
        .collect();
    if workers <= 1 {
        return Ok(jobs.iter().map(|&(c, r)| execute(plan, &space, catalog, c, r)).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| HarnessError::InvalidPlan(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(|| jobs.par_iter().map(|&(c, r)| execute(plan, &space, catalog, c, r)).collect()))
}

/// Mean and median of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub mean: f64,
    pub median: f64,
}

impl Aggregate {
    fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let median = if n % 2 == 1 { sorted[n / 2] } else { (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0 };
        Some(Aggregate { mean: values.iter().sum::<f64>() / n as f64, median })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub algorithm: String,
    pub runs: usize,
    pub failed_runs: usize,
    pub best_fitness: Option<Aggregate>,
    pub iterations: Option<Aggregate>,
    /// Natural log of kg CO₂; absent when every run had zero emissions.
    pub ln_kg_co2: Option<Aggregate>,
    pub complexity_log: Option<Aggregate>,
    pub complexity_pct: Option<f64>,
    pub level: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub function: TestFunction,
    pub mode: NormalizationMode,
    pub rows: Vec<ComparisonRow>,
}

/// Aggregates reports per algorithm and normalizes their mean complexity logs.
///
/// Rows follow the order in which algorithms first appear. Algorithms whose
/// runs all failed are listed without statistics or percentage.
pub fn compare_algorithms(reports: &[RunReport], mode: NormalizationMode) -> Result<Comparison, HarnessError> {
    let first_ok = reports.iter().find(|r| r.succeeded()).ok_or(HarnessError::NoSuccessfulRuns)?;
    let function = first_ok.function;
    if let Some(other) = reports.iter().find(|r| r.succeeded() && r.function != function) {
        return Err(HarnessError::MixedFunctions(
            format!("{}({})", function.name, function.dimension),
            format!("{}({})", other.function.name, other.function.dimension),
        ));
    }

    let mut order: Vec<&str> = Vec::new();
    for r in reports {
        if !order.contains(&r.config.algorithm.as_str()) {
            order.push(&r.config.algorithm);
        }
    }
    let mut rows: Vec<ComparisonRow> = order
        .iter()
        .map(|name| {
            let group: Vec<&RunReport> = reports.iter().filter(|r| r.config.algorithm == *name).collect();
            let ok: Vec<&&RunReport> = group.iter().filter(|r| r.succeeded()).collect();
            let collect = |f: &dyn Fn(&RunReport) -> Option<f64>| -> Vec<f64> { ok.iter().filter_map(|r| f(r)).collect() };
            ComparisonRow {
                algorithm: (*name).to_owned(),
                runs: group.len(),
                failed_runs: group.len() - ok.len(),
                best_fitness: Aggregate::of(&collect(&|r| r.best_fitness)),
                iterations: Aggregate::of(&collect(&|r| r.meter.as_ref().map(|m| m.iterations_used as f64))),
                ln_kg_co2: Aggregate::of(&collect(&|r| r.emission.as_ref().and_then(|e| e.ln_kg_co2()))),
                complexity_log: Aggregate::of(&collect(&|r| r.complexity_log())),
                complexity_pct: None,
                level: None,
            }
        })
        .collect();

    let scored: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].complexity_log.is_some()).collect();
    let scores: Vec<ComplexityScore> = scored
        .iter()
        .map(|&i| {
            let mean = rows[i].complexity_log.expect("filtered").mean;
            ComplexityScore::new(rows[i].algorithm.clone(), crate::LogMagnitude::from_ln(mean))
        })
        .collect();
    for (&i, s) in scored.iter().zip(normalize_to_percentages(&scores, mode)?) {
        rows[i].complexity_pct = s.percentage;
        rows[i].level = s.level;
    }
    Ok(Comparison { function, mode, rows })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogRow {
    pub name: String,
    pub category: Category,
    /// Shipped reference percentage.
    pub complexity_pct: f64,
    /// Percentage recomputed from the catalog factors on the level grid.
    pub estimated_pct: f64,
    pub estimated_level: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogTable {
    pub rows: Vec<CatalogRow>,
    pub summaries: Vec<CategorySummary>,
}

/// Scores the whole catalog without running anything.
pub fn estimate_catalog(
    catalog: &[AlgorithmDescriptor],
    num_particles: u64,
    num_iterations: u64,
    mode: NormalizationMode,
) -> Result<Vec<ComplexityScore>, HarnessError> {
    let scores = catalog
        .iter()
        .map(|d| complexity_score(d, num_particles, num_iterations))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(normalize_to_percentages(&scores, mode)?)
}

/// The catalog grouped by category, with reference and recomputed
/// percentages and per-category statistics of the reference column.
pub fn catalog_table(catalog: &[AlgorithmDescriptor]) -> Result<CatalogTable, HarnessError> {
    let estimated = estimate_catalog(catalog, CATALOG_PARTICLES, CATALOG_ITERATIONS, NormalizationMode::LevelGrid)?;
    let mut rows = Vec::with_capacity(catalog.len());
    for category in Category::ALL {
        for (d, s) in catalog.iter().zip(&estimated).filter(|(d, _)| d.category == category) {
            rows.push(CatalogRow {
                name: d.name.clone(),
                category,
                complexity_pct: d.reference_complexity_pct,
                estimated_pct: s.percentage.expect("level grid assigns percentages"),
                estimated_level: s.level.expect("level grid assigns levels"),
            });
        }
    }
    let reference: Vec<ComplexityScore> = catalog
        .iter()
        .map(|d| ComplexityScore {
            percentage: Some(d.reference_complexity_pct),
            ..ComplexityScore::new(d.name.clone(), crate::LogMagnitude::ONE)
        })
        .collect();
    let summaries = category_summary(&reference, catalog)?;
    Ok(CatalogTable { rows, summaries })
}
