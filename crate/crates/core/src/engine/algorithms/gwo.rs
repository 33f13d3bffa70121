//! Grey wolf optimizer.

use rand::Rng;

use super::{Params, StepContext};

pub(crate) struct Gwo {
    a_initial: f64,
}

impl Gwo {
    pub(crate) fn new(p: &Params) -> Self {
        Gwo { a_initial: p["a_initial"] }
    }

    /// Alpha, beta and delta are the three best personal bests among a
    /// wolf's informants. Each leader `L` proposes `L - A |C L - x|`; the wolf
    /// moves to the mean of the three proposals.
    pub(crate) fn step(&mut self, ctx: &mut StepContext<'_, '_, '_>) {
        let n = ctx.state.len();
        let a = self.a_initial * (1.0 - ctx.progress());
        let leaders: Vec<[usize; 3]> = (0..n).map(|i| self.hierarchy(ctx, i)).collect();
        let bests: Vec<Vec<f64>> =
            ctx.state.particles.iter().map(|p| p.personal_best_position.clone()).collect();
        for (i, trio) in leaders.iter().enumerate() {
            ctx.observer.social_attractor(i, trio[0]);
            let rng = &mut ctx.state.rngs[i];
            let x = &ctx.state.particles[i].position;
            let candidate: Vec<f64> = (0..x.len())
                .map(|d| {
                    let sum: f64 = trio
                        .iter()
                        .map(|&l| {
                            let r1: f64 = rng.random();
                            let r2: f64 = rng.random();
                            let big_a = 2.0 * a * r1 - a;
                            let c = 2.0 * r2;
                            let lead = bests[l][d];
                            lead - big_a * (c * lead - x[d]).abs()
                        })
                        .sum();
                    sum / 3.0
                })
                .collect();
            ctx.relocate(i, candidate);
        }
    }

    fn hierarchy(&self, ctx: &StepContext<'_, '_, '_>, i: usize) -> [usize; 3] {
        let mut ranked: Vec<usize> = ctx.graph.of(i).iter().copied().collect();
        ranked.sort_by(|&a, &b| {
            let (fa, fb) = (
                ctx.state.particles[a].personal_best_fitness,
                ctx.state.particles[b].personal_best_fitness,
            );
            fa.total_cmp(&fb).then(a.cmp(&b))
        });
        let pick = |k: usize| ranked[k.min(ranked.len() - 1)];
        [pick(0), pick(1), pick(2)]
    }
}
