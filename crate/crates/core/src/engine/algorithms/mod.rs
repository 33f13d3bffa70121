//! Update rules for the executable algorithms.

mod abc;
mod bat;
mod cuckoo;
mod firefly;
mod gwo;
mod pso;
mod woa;

use std::collections::BTreeMap;

use rand::Rng;

use super::{AlgorithmKind, EngineError, Evaluator, SearchSpace, StepObserver, SwarmState};
use crate::catalog::InformantGraph;

/// One tunable coefficient and its accepted range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperparameterSpec {
    pub name: &'static str,
    pub default: f64,
    pub min: f64,
    pub max: f64,
    /// Whether `max` itself is accepted.
    pub max_inclusive: bool,
}

const fn spec(name: &'static str, default: f64, min: f64, max: f64) -> HyperparameterSpec {
    HyperparameterSpec { name, default, min, max, max_inclusive: true }
}

const HORIZON: HyperparameterSpec = spec("horizon", 0.0, 0.0, 1e9);

const PSO: &[HyperparameterSpec] = &[
    HyperparameterSpec { name: "inertia", default: 0.729, min: 0.0, max: 2.0, max_inclusive: false },
    spec("cognitive", 1.49445, 0.0, 4.0),
    spec("social", 1.49445, 0.0, 4.0),
    spec("max_velocity", 1.0, 0.0, 1.0),
];
const APSO: &[HyperparameterSpec] =
    &[spec("alpha", 0.2, 0.0, 1.0), spec("beta", 0.5, 0.0, 1.0), spec("gamma", 0.97, 0.0, 1.0)];
const FIREFLY: &[HyperparameterSpec] = &[
    spec("alpha", 0.2, 0.0, 1.0),
    spec("beta0", 1.0, 0.0, 2.0),
    spec("gamma", 1.0, 0.0, 100.0),
    spec("alpha_decay", 0.97, 0.0, 1.0),
];
const CUCKOO: &[HyperparameterSpec] = &[
    spec("discovery_rate", 0.25, 0.0, 1.0),
    spec("step_scale", 0.01, 0.0, 1.0),
    spec("levy_beta", 1.5, 0.3, 1.99),
];
const WOA: &[HyperparameterSpec] = &[spec("spiral_b", 1.0, 0.0, 10.0), spec("a_initial", 2.0, 0.0, 4.0), HORIZON];
const ABC: &[HyperparameterSpec] = &[spec("limit", 0.0, 0.0, 1e9)];
const BAT: &[HyperparameterSpec] = &[
    spec("f_min", 0.0, -10.0, 10.0),
    spec("f_max", 2.0, -10.0, 10.0),
    spec("loudness", 1.0, 0.0, 2.0),
    spec("pulse_rate", 0.5, 0.0, 1.0),
    spec("alpha", 0.9, 0.0, 1.0),
    spec("gamma", 0.9, 0.0, 10.0),
    spec("local_scale", 0.01, 0.0, 1.0),
];
const GWO: &[HyperparameterSpec] = &[spec("a_initial", 2.0, 0.0, 4.0), HORIZON];

/// Default coefficients and ranges for `kind`.
///
/// | algorithm | coefficients |
/// |---|---|
/// | PSO | inertia 0.729, cognitive = social = 1.49445, max_velocity 1.0 (fraction of width) |
/// | Accelerated PSO | alpha 0.2, beta 0.5, gamma 0.97 |
/// | Firefly | alpha 0.2, beta0 1.0, gamma 1.0, alpha_decay 0.97 |
/// | Cuckoo search | discovery_rate 0.25, step_scale 0.01, levy_beta 1.5 |
/// | WOA | spiral_b 1.0, a_initial 2.0 |
/// | ABC | limit 0 (means swarm size x dimension) |
/// | Bat | f 0..2, loudness 1.0, pulse_rate 0.5, alpha = gamma = 0.9, local_scale 0.01 |
/// | GWO | a_initial 2.0 |
///
/// `horizon` (WOA, GWO) sets the length of the linearly decreasing `a`
/// schedule; 0 means "use `max_generations`".
pub fn hyperparameter_table(kind: AlgorithmKind) -> &'static [HyperparameterSpec] {
    match kind {
        AlgorithmKind::Pso => PSO,
        AlgorithmKind::AcceleratedPso => APSO,
        AlgorithmKind::Firefly => FIREFLY,
        AlgorithmKind::CuckooSearch => CUCKOO,
        AlgorithmKind::Woa => WOA,
        AlgorithmKind::Abc => ABC,
        AlgorithmKind::Bat => BAT,
        AlgorithmKind::Gwo => GWO,
    }
}

pub(crate) type Params = BTreeMap<String, f64>;

/// Merges overrides into the defaults, rejecting unknown names and out-of-range values.
pub(crate) fn resolve_hyperparameters(
    kind: AlgorithmKind,
    overrides: &BTreeMap<String, f64>,
) -> Result<Params, EngineError> {
    let table = hyperparameter_table(kind);
    let mut out: Params = table.iter().map(|s| (s.name.to_owned(), s.default)).collect();
    for (name, &value) in overrides {
        let spec = table.iter().find(|s| s.name == name).ok_or_else(|| {
            let known: Vec<_> = table.iter().map(|s| s.name).collect();
            EngineError::InvalidConfig(format!("{kind} has no hyperparameter {name:?} (known: {known:?})"))
        })?;
        let above = if spec.max_inclusive { value > spec.max } else { value >= spec.max };
        if !value.is_finite() || value < spec.min || above {
            let close = if spec.max_inclusive { ']' } else { ')' };
            return Err(EngineError::InvalidConfig(format!(
                "{kind} hyperparameter {name} = {value} outside [{}, {}{close}",
                spec.min, spec.max
            )));
        }
        out.insert(name.clone(), value);
    }
    Ok(out)
}

pub(crate) enum AlgorithmState {
    Pso(pso::Pso),
    AcceleratedPso(pso::AcceleratedPso),
    Firefly(firefly::Firefly),
    Cuckoo(cuckoo::Cuckoo),
    Woa(woa::Woa),
    Abc(abc::Abc),
    Bat(bat::Bat),
    Gwo(gwo::Gwo),
}

impl AlgorithmState {
    pub(crate) fn new(kind: AlgorithmKind, params: &Params, swarm_size: usize, dimension: usize) -> Self {
        match kind {
            AlgorithmKind::Pso => AlgorithmState::Pso(pso::Pso::new(params)),
            AlgorithmKind::AcceleratedPso => AlgorithmState::AcceleratedPso(pso::AcceleratedPso::new(params)),
            AlgorithmKind::Firefly => AlgorithmState::Firefly(firefly::Firefly::new(params)),
            AlgorithmKind::CuckooSearch => AlgorithmState::Cuckoo(cuckoo::Cuckoo::new(params)),
            AlgorithmKind::Woa => AlgorithmState::Woa(woa::Woa::new(params)),
            AlgorithmKind::Abc => AlgorithmState::Abc(abc::Abc::new(params, swarm_size, dimension)),
            AlgorithmKind::Bat => AlgorithmState::Bat(bat::Bat::new(params, swarm_size)),
            AlgorithmKind::Gwo => AlgorithmState::Gwo(gwo::Gwo::new(params)),
        }
    }

    pub(crate) fn initial_velocity<R: Rng + ?Sized>(
        &self,
        position: &[f64],
        space: &SearchSpace,
        rng: &mut R,
    ) -> Vec<f64> {
        match self {
            AlgorithmState::Pso(_) => (0..space.dimension())
                .map(|d| {
                    let (lo, hi) = space.bounds(d);
                    0.5 * (rng.random_range(lo..=hi) - position[d])
                })
                .collect(),
            _ => vec![0.0; space.dimension()],
        }
    }

    pub(crate) fn step(
        &mut self,
        state: &mut SwarmState,
        space: &SearchSpace,
        graph: &InformantGraph,
        eval: &mut Evaluator<'_>,
        observer: &mut dyn StepObserver,
    ) {
        let mut ctx = StepContext { state, space, graph, eval, observer };
        match self {
            AlgorithmState::Pso(a) => a.step(&mut ctx),
            AlgorithmState::AcceleratedPso(a) => a.step(&mut ctx),
            AlgorithmState::Firefly(a) => a.step(&mut ctx),
            AlgorithmState::Cuckoo(a) => a.step(&mut ctx),
            AlgorithmState::Woa(a) => a.step(&mut ctx),
            AlgorithmState::Abc(a) => a.step(&mut ctx),
            AlgorithmState::Bat(a) => a.step(&mut ctx),
            AlgorithmState::Gwo(a) => a.step(&mut ctx),
        }
    }
}

pub(crate) struct StepContext<'s, 'e, 'f> {
    pub(crate) state: &'s mut SwarmState,
    pub(crate) space: &'s SearchSpace,
    pub(crate) graph: &'s InformantGraph,
    pub(crate) eval: &'e mut Evaluator<'f>,
    pub(crate) observer: &'s mut dyn StepObserver,
}

impl StepContext<'_, '_, '_> {
    /// Personal-best positions of each particle's best informant, reported to the observer.
    pub(crate) fn social_attractors(&mut self) -> Vec<Vec<f64>> {
        (0..self.state.len())
            .map(|i| {
                let j = self.state.informant_best(self.graph, i);
                self.observer.social_attractor(i, j);
                self.state.particles[j].personal_best_position.clone()
            })
            .collect()
    }

    /// Fraction of the schedule horizon elapsed, clamped to `[0, 1]`.
    pub(crate) fn progress(&self) -> f64 {
        (self.state.generation as f64 / self.state.horizon.max(1) as f64).min(1.0)
    }

    /// Confines `candidate` for particle `i`, makes it the particle's
    /// position and evaluates it.
    pub(crate) fn relocate(&mut self, i: usize, mut candidate: Vec<f64>) -> f64 {
        let feasible = self.state.confine_candidate(i, &mut candidate, self.space);
        let p = &mut self.state.particles[i];
        p.position = candidate;
        p.feasible = feasible;
        self.state.evaluate(i, self.eval)
    }

    /// Confines and evaluates `candidate`; adopts it only if it beats the
    /// current fitness of particle `i`. Returns whether it was adopted.
    pub(crate) fn try_greedy(&mut self, i: usize, mut candidate: Vec<f64>) -> bool {
        let feasible = self.state.confine_candidate(i, &mut candidate, self.space);
        let f = self.state.evaluate_candidate(i, &candidate, feasible, self.eval);
        if f < self.state.fitness[i] {
            let p = &mut self.state.particles[i];
            p.position = candidate;
            p.feasible = feasible;
            self.state.fitness[i] = f;
            true
        } else {
            false
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_within_ranges() {
        for k in AlgorithmKind::ALL {
            let resolved = resolve_hyperparameters(k, &BTreeMap::new()).unwrap();
            assert_eq!(resolved.len(), hyperparameter_table(k).len());
            let echo: BTreeMap<String, f64> = resolved.clone();
            assert_eq!(resolve_hyperparameters(k, &echo).unwrap(), resolved, "{k}");
        }
    }

    #[test]
    fn inertia_upper_bound_is_exclusive() {
        let mut o = BTreeMap::new();
        o.insert("inertia".to_owned(), 1.999);
        assert!(resolve_hyperparameters(AlgorithmKind::Pso, &o).is_ok());
        o.insert("inertia".to_owned(), 2.0);
        assert!(resolve_hyperparameters(AlgorithmKind::Pso, &o).is_err());
        o.insert("inertia".to_owned(), -0.1);
        assert!(resolve_hyperparameters(AlgorithmKind::Pso, &o).is_err());
    }
}
