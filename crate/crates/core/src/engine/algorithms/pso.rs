//! Inertia-weight PSO and accelerated PSO.

use rand::Rng;
use rand_distr::StandardNormal;

use super::{Params, StepContext};

pub(crate) struct Pso {
    inertia: f64,
    cognitive: f64,
    social: f64,
    /// Velocity clamp as a fraction of each dimension's width.
    max_velocity: f64,
}

impl Pso {
    pub(crate) fn new(p: &Params) -> Self {
        Pso {
            inertia: p["inertia"],
            cognitive: p["cognitive"],
            social: p["social"],
            max_velocity: p["max_velocity"],
        }
    }

    /// `v <- w v + c1 r1 (p - x) + c2 r2 (l - x)`, `x <- x + v`, where `l` is
    /// the best personal best among the particle's informants.
    pub(crate) fn step(&mut self, ctx: &mut StepContext<'_, '_, '_>) {
        let attractors = ctx.social_attractors();
        for (i, local) in attractors.iter().enumerate() {
            let state = &mut *ctx.state;
            let rng = &mut state.rngs[i];
            let p = &mut state.particles[i];
            for d in 0..p.position.len() {
                let r1: f64 = rng.random();
                let r2: f64 = rng.random();
                let x = p.position[d];
                let mut v = self.inertia * p.velocity[d]
                    + self.cognitive * r1 * (p.personal_best_position[d] - x)
                    + self.social * r2 * (local[d] - x);
                let vmax = self.max_velocity * ctx.space.width(d);
                v = v.clamp(-vmax, vmax);
                p.velocity[d] = v;
            }
            state.move_by_velocity(i, ctx.space);
            state.evaluate(i, ctx.eval);
        }
    }
}

pub(crate) struct AcceleratedPso {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

impl AcceleratedPso {
    pub(crate) fn new(p: &Params) -> Self {
        AcceleratedPso { alpha: p["alpha"], beta: p["beta"], gamma: p["gamma"] }
    }

    /// `x <- (1 - beta) x + beta g + alpha_t L eps`, with `alpha_t = alpha gamma^t`
    /// and `eps` standard normal scaled by the dimension width `L`.
    pub(crate) fn step(&mut self, ctx: &mut StepContext<'_, '_, '_>) {
        let attractors = ctx.social_attractors();
        let alpha_t = self.alpha * self.gamma.powi(ctx.state.generation as i32);
        for (i, local) in attractors.into_iter().enumerate() {
            let rng = &mut ctx.state.rngs[i];
            let x = &ctx.state.particles[i].position;
            let candidate: Vec<f64> = (0..x.len())
                .map(|d| {
                    let eps: f64 = rng.sample(StandardNormal);
                    (1.0 - self.beta) * x[d] + self.beta * local[d] + alpha_t * ctx.space.width(d) * eps
                })
                .collect();
            ctx.relocate(i, candidate);
        }
    }
}
