use std::cell::Cell;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swarmprint::catalog::{neighbors, BoundaryHandling, StoppingCriteria, Topology};
use swarmprint::engine::{
    apply_boundary, optimize, optimize_observed, AlgorithmKind, Particle, SearchSpace, StepObserver, Swarm,
    SwarmConfig,
};

fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn sphere_space(dim: usize) -> SearchSpace {
    SearchSpace::uniform(dim, -5.0, 5.0).unwrap()
}

#[test]
fn pso_solves_sphere_10d() {
    let space = sphere_space(10);
    let hits = (0..20u64)
        .filter(|seed| {
            let cfg = SwarmConfig::new(AlgorithmKind::Pso, 30, StoppingCriteria::generations(500)).with_seed(*seed);
            optimize(&cfg, &space, sphere).unwrap().best_fitness < 1e-3
        })
        .count();
    assert!(hits >= 18, "only {hits}/20 runs reached 1e-3");
}

#[test]
fn every_algorithm_improves_on_sphere() {
    let space = sphere_space(5);
    for kind in AlgorithmKind::ALL {
        let cfg = SwarmConfig::new(kind, 20, StoppingCriteria::generations(200)).with_seed(11);
        let r = optimize(&cfg, &space, sphere).unwrap();
        assert!(r.best_fitness < 0.5, "{kind}: {}", r.best_fitness);
    }
}

#[test]
fn trace_is_monotone_and_reproducible_for_all_topologies() {
    let space = sphere_space(4);
    let topologies = [
        Topology::Global,
        Topology::Ring { radius: 1 },
        Topology::VonNeumann,
        Topology::Star { hub: 0 },
        Topology::Mesh,
        Topology::Random { degree: 3 },
        Topology::Tree { branching: 2 },
        Topology::Dynamic { degree: 2, period: 5 },
    ];
    for kind in AlgorithmKind::ALL {
        for topology in topologies {
            let cfg = SwarmConfig::new(kind, 12, StoppingCriteria::generations(30))
                .with_topology(topology)
                .with_seed(3);
            let a = optimize(&cfg, &space, sphere).unwrap();
            let b = optimize(&cfg, &space, sphere).unwrap();
            assert!(a.meter.same_counts(&b.meter), "{kind} {topology}");
            assert!(a.meter.best_fitness_trace.windows(2).all(|w| w[1] <= w[0]));
        }
    }
}

#[test]
fn evaluations_equal_objective_calls() {
    let space = sphere_space(3);
    for kind in AlgorithmKind::ALL {
        for boundary in [BoundaryHandling::Absorb, BoundaryHandling::InvisibleWall] {
            let calls = Cell::new(0u64);
            let counting = |x: &[f64]| {
                calls.set(calls.get() + 1);
                sphere(x)
            };
            let cfg = SwarmConfig::new(kind, 8, StoppingCriteria::generations(25))
                .with_boundary(boundary)
                .with_seed(9);
            let r = optimize(&cfg, &space, counting).unwrap();
            assert_eq!(r.meter.evaluations_used, calls.get(), "{kind} {boundary}");
            assert!(r.meter.evaluations_used >= r.meter.iterations_used as u64);
        }
    }
}

struct InformantCheck {
    graph_size: usize,
    topology: Topology,
    seed: u64,
    checked: usize,
}

impl StepObserver for InformantCheck {
    fn social_attractor(&mut self, particle: usize, informant: usize) {
        let set = neighbors(&self.topology, particle, self.graph_size, self.seed).unwrap();
        assert!(set.contains(&informant), "{informant} not an informant of {particle}");
        self.checked += 1;
    }
}

#[test]
fn pso_attractor_comes_from_informants() {
    let space = sphere_space(3);
    for topology in [Topology::Ring { radius: 1 }, Topology::Star { hub: 0 }, Topology::Random { degree: 2 }] {
        let cfg = SwarmConfig::new(AlgorithmKind::Pso, 10, StoppingCriteria::generations(20))
            .with_topology(topology)
            .with_seed(4);
        let mut check = InformantCheck { graph_size: 10, topology, seed: 4, checked: 0 };
        optimize_observed(&cfg, &space, sphere, &mut check).unwrap();
        assert_eq!(check.checked, 200);
    }
}

#[test]
fn pso_with_zero_coefficients_freezes() {
    let space = sphere_space(3);
    let cfg = SwarmConfig::new(AlgorithmKind::Pso, 6, StoppingCriteria::generations(5))
        .with_hyperparameter("inertia", 0.0)
        .with_hyperparameter("cognitive", 0.0)
        .with_hyperparameter("social", 0.0);
    let objective = sphere;
    let mut swarm = Swarm::new(&cfg, &space, &objective).unwrap();
    let before: Vec<Vec<f64>> = swarm.particles().iter().map(|p| p.position.clone()).collect();
    swarm.step();
    for (p, x) in swarm.particles().iter().zip(&before) {
        assert_eq!(&p.position, x);
        assert!(p.velocity.iter().all(|v| *v == 0.0));
    }
}

#[test]
fn pso_particle_at_best_with_zero_velocity_stays() {
    let space = sphere_space(2);
    let cfg = SwarmConfig::new(AlgorithmKind::Pso, 6, StoppingCriteria::generations(5)).with_seed(1);
    let objective = sphere;
    let mut swarm = Swarm::new(&cfg, &space, &objective).unwrap();
    {
        let p = &mut swarm.particles_mut()[0];
        *p = Particle { personal_best_fitness: 0.0, ..Particle::at(vec![0.0, 0.0], vec![0.0, 0.0]) };
    }
    swarm.step();
    assert_eq!(swarm.particles()[0].position, vec![0.0, 0.0]);
}

#[test]
fn gwo_collapsed_pack_stays_collapsed() {
    // With every wolf and leader at the origin, |C L - x| = 0 and nobody moves.
    let space = sphere_space(3);
    let cfg = SwarmConfig::new(AlgorithmKind::Gwo, 5, StoppingCriteria::generations(5)).with_seed(2);
    let objective = sphere;
    let mut swarm = Swarm::new(&cfg, &space, &objective).unwrap();
    for p in swarm.particles_mut() {
        *p = Particle { personal_best_fitness: 0.0, ..Particle::at(vec![0.0; 3], vec![0.0; 3]) };
    }
    swarm.step();
    for p in swarm.particles() {
        assert_eq!(p.position, vec![0.0; 3]);
    }
}

#[test]
fn unsupported_names_are_rejected() {
    let err = AlgorithmKind::from_name("Krill Herd").unwrap_err();
    assert_eq!(err.marker(), "unsupported-algorithm");
}

#[test]
fn boundary_feasibility_sweep() {
    let space = SearchSpace::new(vec![-5.0, 0.0, 100.0], vec![5.0, 1.0, 250.0]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for handler in BoundaryHandling::ALL {
        for _ in 0..2000 {
            let position: Vec<f64> = (0..3)
                .map(|d| {
                    let (lo, hi) = space.bounds(d);
                    let w = hi - lo;
                    if rng.random::<bool>() { hi + rng.random::<f64>() * 3.0 * w } else { lo - rng.random::<f64>() * 3.0 * w }
                })
                .collect();
            let velocity: Vec<f64> = (0..3).map(|d| rng.random_range(-1.0..1.0) * space.width(d)).collect();
            let out = apply_boundary(handler, &Particle::at(position.clone(), velocity), &space, &mut rng);
            if handler == BoundaryHandling::InvisibleWall {
                assert!(!out.feasible);
                assert_eq!(out.position, position);
            } else {
                assert!(out.feasible, "{handler}");
                assert!(space.contains(&out.position), "{handler}: {:?}", out.position);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn in_bounds_positions_are_untouched(
        x in -5.0f64..=5.0,
        v in -10.0f64..10.0,
        handler in prop::sample::select(BoundaryHandling::ALL.to_vec()),
    ) {
        let space = SearchSpace::uniform(1, -5.0, 5.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = apply_boundary(handler, &Particle::at(vec![x], vec![v]), &space, &mut rng);
        prop_assert_eq!(out.position, vec![x]);
        prop_assert_eq!(out.velocity, vec![v]);
        prop_assert!(out.feasible);
    }

    #[test]
    fn personal_best_never_worse_than_current(seed in 0u64..500, kind in prop::sample::select(AlgorithmKind::ALL.to_vec())) {
        let space = sphere_space(2);
        let cfg = SwarmConfig::new(kind, 6, StoppingCriteria::generations(8)).with_seed(seed);
        let objective = sphere;
        let mut swarm = Swarm::new(&cfg, &space, &objective).unwrap();
        for _ in 0..8 {
            swarm.step();
            for p in swarm.particles() {
                if p.feasible {
                    prop_assert!(p.personal_best_fitness <= sphere(&p.position));
                }
            }
        }
    }
}
