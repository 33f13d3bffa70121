//! Population-based optimizers over a box-bounded search space.
//!
//! All eight algorithms share one particle population, one informant graph
//! and one boundary handler. Minimization throughout.

mod algorithms;
mod boundary;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{BoundaryHandling, CatalogError, InformantGraph, StoppingCriteria, Topology};

pub use algorithms::{hyperparameter_table, HyperparameterSpec};
pub use boundary::{apply_boundary, hyperbolic_velocity};

/// Schedule length used when neither `horizon` nor `max_generations` is set.
pub const DEFAULT_HORIZON: usize = 1000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("unsupported-algorithm: {0:?} is an estimation-only catalog entry")]
    UnsupportedAlgorithm(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl EngineError {
    /// Short machine-readable marker.
    pub fn marker(&self) -> &'static str {
        match self {
            EngineError::UnsupportedAlgorithm(_) => "unsupported-algorithm",
            EngineError::InvalidConfig(_) => "invalid-config",
        }
    }
}

impl From<CatalogError> for EngineError {
    fn from(e: CatalogError) -> Self {
        EngineError::InvalidConfig(e.to_string())
    }
}

/// The executable algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AlgorithmKind {
    Pso,
    AcceleratedPso,
    Firefly,
    CuckooSearch,
    Woa,
    Abc,
    Bat,
    Gwo,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 8] = [
        AlgorithmKind::Pso,
        AlgorithmKind::AcceleratedPso,
        AlgorithmKind::Firefly,
        AlgorithmKind::CuckooSearch,
        AlgorithmKind::Woa,
        AlgorithmKind::Abc,
        AlgorithmKind::Bat,
        AlgorithmKind::Gwo,
    ];

    /// Name as it appears in the algorithm catalog.
    pub fn catalog_name(self) -> &'static str {
        match self {
            AlgorithmKind::Pso => "PSO",
            AlgorithmKind::AcceleratedPso => "Accelerated PSO",
            AlgorithmKind::Firefly => "FA",
            AlgorithmKind::CuckooSearch => "Cuckoo Search",
            AlgorithmKind::Woa => "WOA",
            AlgorithmKind::Abc => "ABC",
            AlgorithmKind::Bat => "Bat Algorithm",
            AlgorithmKind::Gwo => "GWO",
        }
    }

    fn aliases(self) -> &'static [&'static str] {
        match self {
            AlgorithmKind::Pso => &["pso", "particle swarm optimization"],
            AlgorithmKind::AcceleratedPso => &["accelerated pso", "apso"],
            AlgorithmKind::Firefly => &["fa", "firefly", "firefly algorithm"],
            AlgorithmKind::CuckooSearch => &["cuckoo search", "cuckoo", "cs"],
            AlgorithmKind::Woa => &["woa", "whale", "whale optimization algorithm"],
            AlgorithmKind::Abc => &["abc", "artificial bee colony"],
            AlgorithmKind::Bat => &["bat algorithm", "bat"],
            AlgorithmKind::Gwo => &["gwo", "grey wolf optimizer", "grey wolf"],
        }
    }

    /// Resolves a catalog name or common alias; anything else is unsupported.
    pub fn from_name(name: &str) -> Result<Self, EngineError> {
        let key = name.trim().to_ascii_lowercase();
        AlgorithmKind::ALL
            .into_iter()
            .find(|k| k.aliases().contains(&key.as_str()))
            .ok_or_else(|| EngineError::UnsupportedAlgorithm(name.trim().to_owned()))
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.catalog_name())
    }
}

impl FromStr for AlgorithmKind {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::from_name(s)
    }
}

/// Per-dimension box bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSpace {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl SearchSpace {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self, EngineError> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(EngineError::InvalidConfig(format!(
                "bounds need equal, positive lengths (got {} and {})",
                lower.len(),
                upper.len()
            )));
        }
        for (d, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(EngineError::InvalidConfig(format!(
                    "dimension {d}: lower bound {lo} must be below upper bound {hi}"
                )));
            }
        }
        Ok(SearchSpace { lower, upper })
    }

    /// The same interval on every dimension.
    pub fn uniform(dimension: usize, lower: f64, upper: f64) -> Result<Self, EngineError> {
        Self::new(vec![lower; dimension], vec![upper; dimension])
    }

    pub(crate) fn single(lower: f64, upper: f64) -> Self {
        SearchSpace { lower: vec![lower], upper: vec![upper] }
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn bounds(&self, d: usize) -> (f64, f64) {
        (self.lower[d], self.upper[d])
    }

    pub fn width(&self, d: usize) -> f64 {
        self.upper[d] - self.lower[d]
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dimension()
            && x.iter().enumerate().all(|(d, v)| *v >= self.lower[d] && *v <= self.upper[d])
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        (0..self.dimension()).map(|d| rng.random_range(self.lower[d]..=self.upper[d])).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Particle {
    pub position: Vec<f64>,
    /// Zero for algorithms without a velocity term.
    pub velocity: Vec<f64>,
    pub personal_best_position: Vec<f64>,
    pub personal_best_fitness: f64,
    pub feasible: bool,
}

impl Particle {
    /// A particle whose personal best is its current position, not yet evaluated.
    pub fn at(position: Vec<f64>, velocity: Vec<f64>) -> Self {
        Particle {
            personal_best_position: position.clone(),
            position,
            velocity,
            personal_best_fitness: f64::INFINITY,
            feasible: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwarmConfig {
    pub algorithm: AlgorithmKind,
    pub swarm_size: usize,
    #[serde(default)]
    pub topology: Topology,
    #[serde(default)]
    pub boundary: BoundaryHandling,
    pub stopping: StoppingCriteria,
    /// Overrides of the per-algorithm defaults from [`hyperparameter_table`].
    #[serde(default)]
    pub hyperparameters: BTreeMap<String, f64>,
    #[serde(default)]
    pub seed: u64,
}

impl SwarmConfig {
    pub fn new(algorithm: AlgorithmKind, swarm_size: usize, stopping: StoppingCriteria) -> Self {
        SwarmConfig {
            algorithm,
            swarm_size,
            topology: Topology::Global,
            boundary: BoundaryHandling::Absorb,
            stopping,
            hyperparameters: BTreeMap::new(),
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_topology(mut self, topology: Topology) -> Self {
        self.topology = topology;
        self
    }

    pub fn with_boundary(mut self, boundary: BoundaryHandling) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn with_hyperparameter(mut self, name: &str, value: f64) -> Self {
        self.hyperparameters.insert(name.to_owned(), value);
        self
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        if self.swarm_size < 2 {
            return Err(EngineError::InvalidConfig(format!(
                "swarm size must be >= 2, got {}",
                self.swarm_size
            )));
        }
        self.stopping.validate()?;
        self.topology.validate(self.swarm_size)?;
        algorithms::resolve_hyperparameters(self.algorithm, &self.hyperparameters)?;
        Ok(())
    }
}

/// Metered cost of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMeter {
    pub iterations_used: usize,
    pub evaluations_used: u64,
    /// Monotonic wall time, seconds. Not covered by determinism guarantees.
    pub wall_time_s: f64,
    /// Global best after each iteration.
    pub best_fitness_trace: Vec<f64>,
}

impl RunMeter {
    /// Equality on everything except wall time.
    pub fn same_counts(&self, other: &RunMeter) -> bool {
        self.iterations_used == other.iterations_used
            && self.evaluations_used == other.evaluations_used
            && self.best_fitness_trace.len() == other.best_fitness_trace.len()
            && self
                .best_fitness_trace
                .iter()
                .zip(&other.best_fitness_trace)
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub best_position: Vec<f64>,
    pub best_fitness: f64,
    pub meter: RunMeter,
}

/// Hooks into the update loop, used for instrumentation.
pub trait StepObserver {
    /// `informant` was chosen as the social attractor of `particle`.
    fn social_attractor(&mut self, _particle: usize, _informant: usize) {}
}

impl StepObserver for () {}

/// Counts objective calls and maps non-finite values to `+inf`.
pub(crate) struct Evaluator<'a> {
    objective: &'a dyn Fn(&[f64]) -> f64,
    calls: u64,
}

impl Evaluator<'_> {
    pub(crate) fn eval(&mut self, position: &[f64], feasible: bool) -> f64 {
        if !feasible {
            return f64::INFINITY;
        }
        self.calls += 1;
        let v = (self.objective)(position);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    }
}

/// Mutable population state shared by every algorithm.
pub(crate) struct SwarmState {
    pub(crate) particles: Vec<Particle>,
    /// Fitness at each particle's current position.
    pub(crate) fitness: Vec<f64>,
    pub(crate) rngs: Vec<ChaCha8Rng>,
    pub(crate) swarm_rng: ChaCha8Rng,
    pub(crate) generation: usize,
    pub(crate) horizon: usize,
    pub(crate) boundary: BoundaryHandling,
}

impl SwarmState {
    pub(crate) fn len(&self) -> usize {
        self.particles.len()
    }

    /// Informant with the lowest personal best; ties go to the lowest index.
    pub(crate) fn informant_best(&self, graph: &InformantGraph, i: usize) -> usize {
        let mut best = i;
        for &j in graph.of(i) {
            let (fj, fb) = (self.particles[j].personal_best_fitness, self.particles[best].personal_best_fitness);
            if fj < fb || (fj == fb && j < best) {
                best = j;
            }
        }
        best
    }

    /// Evaluates particle `i`'s current position, refreshing its personal best.
    pub(crate) fn evaluate(&mut self, i: usize, eval: &mut Evaluator<'_>) -> f64 {
        let p = &mut self.particles[i];
        let f = eval.eval(&p.position, p.feasible);
        self.fitness[i] = f;
        if f < p.personal_best_fitness {
            p.personal_best_fitness = f;
            p.personal_best_position.clone_from(&p.position);
        }
        f
    }

    /// Evaluates a candidate for particle `i` without moving it. The personal
    /// best still sees the candidate.
    pub(crate) fn evaluate_candidate(
        &mut self,
        i: usize,
        candidate: &[f64],
        feasible: bool,
        eval: &mut Evaluator<'_>,
    ) -> f64 {
        let f = eval.eval(candidate, feasible);
        let p = &mut self.particles[i];
        if f < p.personal_best_fitness {
            p.personal_best_fitness = f;
            p.personal_best_position = candidate.to_vec();
        }
        f
    }

    /// Moves a velocity-free candidate into the box, treating the displacement
    /// from particle `i`'s position as its velocity.
    pub(crate) fn confine_candidate(&mut self, i: usize, candidate: &mut [f64], space: &SearchSpace) -> bool {
        let pos = &self.particles[i].position;
        let mut step: Vec<f64> = candidate.iter().zip(pos).map(|(c, x)| c - x).collect();
        if self.boundary == BoundaryHandling::Hyperbolic {
            hyperbolic_velocity(pos, &mut step, space);
            for (c, (x, s)) in candidate.iter_mut().zip(pos.iter().zip(&step)) {
                *c = x + s;
            }
        }
        boundary::confine(self.boundary, candidate, &mut step, space, &mut self.rngs[i])
    }

    /// Adds the particle's velocity to its position and confines the result.
    pub(crate) fn move_by_velocity(&mut self, i: usize, space: &SearchSpace) {
        let p = &mut self.particles[i];
        if self.boundary == BoundaryHandling::Hyperbolic {
            hyperbolic_velocity(&p.position, &mut p.velocity, space);
        }
        for (x, v) in p.position.iter_mut().zip(&p.velocity) {
            *x += v;
        }
        p.feasible = boundary::confine(self.boundary, &mut p.position, &mut p.velocity, space, &mut self.rngs[i]);
    }

    /// Index of the global best personal best; ties go to the lowest index.
    pub(crate) fn global_best(&self) -> usize {
        let mut best = 0;
        for (i, p) in self.particles.iter().enumerate() {
            if p.personal_best_fitness < self.particles[best].personal_best_fitness {
                best = i;
            }
        }
        best
    }
}

/// A seeded swarm that can be stepped one generation at a time.
pub struct Swarm<'f> {
    config: SwarmConfig,
    space: SearchSpace,
    state: SwarmState,
    algorithm: algorithms::AlgorithmState,
    graph: InformantGraph,
    evaluator: Evaluator<'f>,
}

impl<'f> Swarm<'f> {
    /// Validates the configuration, scatters the particles uniformly and
    /// evaluates them once.
    pub fn new(
        config: &SwarmConfig,
        space: &SearchSpace,
        objective: &'f dyn Fn(&[f64]) -> f64,
    ) -> Result<Self, EngineError> {
        config.validate()?;
        let params = algorithms::resolve_hyperparameters(config.algorithm, &config.hyperparameters)?;
        let n = config.swarm_size;
        let rngs: Vec<ChaCha8Rng> = (0..n)
            .map(|i| {
                let mut r = ChaCha8Rng::seed_from_u64(config.seed);
                r.set_stream(i as u64);
                r
            })
            .collect();
        let mut swarm_rng = ChaCha8Rng::seed_from_u64(config.seed);
        swarm_rng.set_stream(u64::MAX - 1);
        let horizon = params
            .get("horizon")
            .copied()
            .filter(|h| *h >= 1.0)
            .map(|h| h as usize)
            .or(config.stopping.max_generations)
            .unwrap_or(DEFAULT_HORIZON);
        let mut state = SwarmState {
            particles: Vec::with_capacity(n),
            fitness: vec![f64::INFINITY; n],
            rngs,
            swarm_rng,
            generation: 0,
            horizon,
            boundary: config.boundary,
        };
        let algorithm = algorithms::AlgorithmState::new(config.algorithm, &params, n, space.dimension());
        for i in 0..n {
            let position = space.sample(&mut state.rngs[i]);
            let velocity = algorithm.initial_velocity(&position, space, &mut state.rngs[i]);
            state.particles.push(Particle::at(position, velocity));
        }
        let mut evaluator = Evaluator { objective, calls: 0 };
        for i in 0..n {
            state.evaluate(i, &mut evaluator);
        }
        let graph = config.topology.informants(n, config.seed, 0)?;
        Ok(Swarm { config: config.clone(), space: space.clone(), state, algorithm, graph, evaluator })
    }

    /// Advances one generation.
    pub fn step(&mut self) {
        self.step_observed(&mut ());
    }

    pub fn step_observed(&mut self, observer: &mut dyn StepObserver) {
        if let Some(period) = self.config.topology.period() {
            if self.state.generation > 0 && self.state.generation.is_multiple_of(period) {
                self.graph = self
                    .config
                    .topology
                    .informants(self.config.swarm_size, self.config.seed, self.state.generation)
                    .expect("topology validated at construction");
            }
        }
        self.algorithm.step(&mut self.state, &self.space, &self.graph, &mut self.evaluator, observer);
        self.state.generation += 1;
    }

    pub fn particles(&self) -> &[Particle] {
        &self.state.particles
    }

    /// Direct access for tests and custom initializations. Current fitness
    /// values are reset to each particle's personal best.
    pub fn particles_mut(&mut self) -> &mut [Particle] {
        for (f, p) in self.state.fitness.iter_mut().zip(&self.state.particles) {
            *f = p.personal_best_fitness;
        }
        &mut self.state.particles
    }

    pub fn informants(&self) -> &InformantGraph {
        &self.graph
    }

    pub fn generation(&self) -> usize {
        self.state.generation
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluator.calls
    }

    /// Current global best position and fitness.
    pub fn best(&self) -> (&[f64], f64) {
        let p = &self.state.particles[self.state.global_best()];
        (&p.personal_best_position, p.personal_best_fitness)
    }

    fn converged(&self) -> (bool, bool) {
        let stopping = &self.config.stopping;
        let population = stopping.population_convergence_radius.is_some_and(|radius| {
            let n = self.state.len() as f64;
            let dim = self.space.dimension();
            let centroid: Vec<f64> = (0..dim)
                .map(|d| self.state.particles.iter().map(|p| p.position[d]).sum::<f64>() / n)
                .collect();
            self.state.particles.iter().all(|p| {
                let dist2: f64 = p.position.iter().zip(&centroid).map(|(x, c)| (x - c) * (x - c)).sum();
                dist2.sqrt() <= radius
            })
        });
        let fitness = stopping.fitness_convergence_epsilon.is_some_and(|eps| {
            let (lo, hi) = self
                .state
                .fitness
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), f| (lo.min(*f), hi.max(*f)));
            hi.is_finite() && hi - lo <= eps
        });
        (population, fitness)
    }
}

/// Runs `config` on `objective` until a stopping clause fires.
pub fn optimize<F>(config: &SwarmConfig, space: &SearchSpace, objective: F) -> Result<RunResult, EngineError>
where
    F: Fn(&[f64]) -> f64,
{
    optimize_observed(config, space, objective, &mut ())
}

pub fn optimize_observed<F>(
    config: &SwarmConfig,
    space: &SearchSpace,
    objective: F,
    observer: &mut dyn StepObserver,
) -> Result<RunResult, EngineError>
where
    F: Fn(&[f64]) -> f64,
{
    let started = Instant::now();
    let mut swarm = Swarm::new(config, space, &objective)?;
    let stopping = config.stopping.clone();
    let mut trace = Vec::new();
    let mut best = swarm.best().1;
    let mut last_improvement = Instant::now();
    loop {
        let generation = swarm.generation();
        let elapsed = started.elapsed();
        let (pop_converged, fit_converged) = swarm.converged();
        let stop = stopping.max_generations.is_some_and(|g| generation >= g)
            || stopping.target_best_fitness.is_some_and(|t| best <= t)
            || stopping.max_runtime.is_some_and(|s| elapsed >= Duration::from_secs_f64(s))
            || stopping
                .max_stall_time
                .is_some_and(|s| last_improvement.elapsed() >= Duration::from_secs_f64(s))
            || pop_converged
            || fit_converged;
        if stop {
            break;
        }
        swarm.step_observed(observer);
        let now_best = swarm.best().1;
        if now_best < best {
            best = now_best;
            last_improvement = Instant::now();
        }
        trace.push(best);
    }
    let (position, fitness) = swarm.best();
    Ok(RunResult {
        best_position: position.to_vec(),
        best_fitness: fitness,
        meter: RunMeter {
            iterations_used: swarm.generation(),
            evaluations_used: swarm.evaluations(),
            wall_time_s: started.elapsed().as_secs_f64(),
            best_fitness_trace: trace,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    #[test]
    fn algorithm_names() {
        for k in AlgorithmKind::ALL {
            assert_eq!(AlgorithmKind::from_name(k.catalog_name()).unwrap(), k);
        }
        let err = AlgorithmKind::from_name("Krill Herd").unwrap_err();
        assert_eq!(err.marker(), "unsupported-algorithm");
        assert!(AlgorithmKind::from_name("Bees Algorithms").is_err());
        assert!(AlgorithmKind::from_name("CSO").is_err());
    }

    #[test]
    fn config_validation() {
        let space = SearchSpace::uniform(2, -1.0, 1.0).unwrap();
        let small = SwarmConfig::new(AlgorithmKind::Pso, 1, StoppingCriteria::generations(5));
        assert!(optimize(&small, &space, sphere).is_err());
        let inf = SwarmConfig::new(
            AlgorithmKind::Pso,
            10,
            StoppingCriteria { target_best_fitness: Some(f64::INFINITY), ..Default::default() },
        );
        assert!(matches!(optimize(&inf, &space, sphere), Err(EngineError::InvalidConfig(_))));
        let bad_w = SwarmConfig::new(AlgorithmKind::Pso, 10, StoppingCriteria::generations(5))
            .with_hyperparameter("inertia", 2.0);
        assert!(optimize(&bad_w, &space, sphere).is_err());
        let unknown = SwarmConfig::new(AlgorithmKind::Pso, 10, StoppingCriteria::generations(5))
            .with_hyperparameter("temperature", 1.0);
        assert!(optimize(&unknown, &space, sphere).is_err());
        assert!(SearchSpace::new(vec![1.0], vec![1.0]).is_err());
        assert!(SearchSpace::new(vec![0.0, 0.0], vec![1.0]).is_err());
    }

    #[test]
    fn constant_landscape_every_algorithm() {
        let space = SearchSpace::uniform(3, -2.0, 2.0).unwrap();
        for k in AlgorithmKind::ALL {
            let cfg = SwarmConfig::new(k, 6, StoppingCriteria::generations(10)).with_seed(5);
            let r = optimize(&cfg, &space, |_: &[f64]| 7.0).unwrap();
            assert_eq!(r.best_fitness, 7.0, "{k}");
            assert_eq!(r.meter.best_fitness_trace, vec![7.0; 10], "{k}");
            assert_eq!(r.meter.iterations_used, 10);
        }
    }

    #[test]
    fn target_fitness_stops_early() {
        let space = SearchSpace::uniform(2, -5.0, 5.0).unwrap();
        let stopping = StoppingCriteria {
            max_generations: Some(10_000),
            target_best_fitness: Some(1e-2),
            ..Default::default()
        };
        let r = optimize(&SwarmConfig::new(AlgorithmKind::Pso, 20, stopping).with_seed(1), &space, sphere).unwrap();
        assert!(r.best_fitness <= 1e-2);
        assert!(r.meter.iterations_used < 10_000);
    }

    #[test]
    fn convergence_criteria_stop() {
        let space = SearchSpace::uniform(2, -5.0, 5.0).unwrap();
        let radius = StoppingCriteria {
            max_generations: Some(5000),
            population_convergence_radius: Some(1e-3),
            ..Default::default()
        };
        let r = optimize(&SwarmConfig::new(AlgorithmKind::Pso, 10, radius).with_seed(2), &space, sphere).unwrap();
        assert!(r.meter.iterations_used < 5000);
        let eps = StoppingCriteria {
            max_generations: Some(5000),
            fitness_convergence_epsilon: Some(1e-6),
            ..Default::default()
        };
        let r = optimize(&SwarmConfig::new(AlgorithmKind::Pso, 10, eps).with_seed(2), &space, sphere).unwrap();
        assert!(r.meter.iterations_used < 5000);
        let runtime = StoppingCriteria { max_runtime: Some(0.05), ..Default::default() };
        let r = optimize(&SwarmConfig::new(AlgorithmKind::Pso, 10, runtime).with_seed(2), &space, sphere).unwrap();
        assert!(r.meter.iterations_used > 0);
    }

    #[test]
    fn non_finite_objective_is_infinite_fitness() {
        let space = SearchSpace::uniform(2, -1.0, 1.0).unwrap();
        let cfg = SwarmConfig::new(AlgorithmKind::Pso, 5, StoppingCriteria::generations(3));
        let r = optimize(&cfg, &space, |_: &[f64]| f64::NAN).unwrap();
        assert_eq!(r.best_fitness, f64::INFINITY);
        assert_eq!(r.meter.evaluations_used, 5 * 4);
    }
}
