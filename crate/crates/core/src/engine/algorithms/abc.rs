//! Artificial bee colony.

use rand::Rng;

use super::{Params, StepContext};

pub(crate) struct Abc {
    limit: usize,
    trials: Vec<usize>,
}

impl Abc {
    pub(crate) fn new(p: &Params, swarm_size: usize, dimension: usize) -> Self {
        let limit = match p["limit"] as usize {
            0 => swarm_size * dimension,
            l => l,
        };
        Abc { limit, trials: vec![0; swarm_size] }
    }

    /// Employed bees, fitness-proportional onlookers, then at most one scout.
    pub(crate) fn step(&mut self, ctx: &mut StepContext<'_, '_, '_>) {
        let n = ctx.state.len();
        for i in 0..n {
            self.explore(ctx, i);
        }

        let quality: Vec<f64> = ctx
            .state
            .fitness
            .iter()
            .map(|&f| if !f.is_finite() { 0.0 } else if f >= 0.0 { 1.0 / (1.0 + f) } else { 1.0 + f.abs() })
            .collect();
        let total: f64 = quality.iter().sum();
        for _ in 0..n {
            let source = if total > 0.0 {
                let mut pick = ctx.state.swarm_rng.random::<f64>() * total;
                quality
                    .iter()
                    .position(|q| {
                        pick -= q;
                        pick < 0.0
                    })
                    .unwrap_or(n - 1)
            } else {
                ctx.state.swarm_rng.random_range(0..n)
            };
            self.explore(ctx, source);
        }

        let mut scout = 0;
        for i in 1..n {
            if self.trials[i] > self.trials[scout] {
                scout = i;
            }
        }
        if self.trials[scout] > self.limit {
            let rng = &mut ctx.state.rngs[scout];
            let fresh: Vec<f64> = (0..ctx.space.dimension())
                .map(|d| {
                    let (lo, hi) = ctx.space.bounds(d);
                    rng.random_range(lo..=hi)
                })
                .collect();
            ctx.relocate(scout, fresh);
            self.trials[scout] = 0;
        }
    }

    /// `v_ij = x_ij + phi (x_ij - x_kj)` on one random coordinate, partner
    /// `k` drawn from the informants (or the whole colony if alone).
    fn explore(&mut self, ctx: &mut StepContext<'_, '_, '_>, i: usize) {
        let n = ctx.state.len();
        let partners: Vec<usize> = ctx.graph.of(i).iter().copied().filter(|&k| k != i).collect();
        let rng = &mut ctx.state.rngs[i];
        let k = if partners.is_empty() {
            let k = rng.random_range(0..n - 1);
            if k >= i { k + 1 } else { k }
        } else {
            partners[rng.random_range(0..partners.len())]
        };
        let d = rng.random_range(0..ctx.space.dimension());
        let phi: f64 = rng.random_range(-1.0..=1.0);
        let mut candidate = ctx.state.particles[i].position.clone();
        candidate[d] += phi * (candidate[d] - ctx.state.particles[k].position[d]);
        if ctx.try_greedy(i, candidate) {
            self.trials[i] = 0;
        } else {
            self.trials[i] += 1;
        }
    }
}
