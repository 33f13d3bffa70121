//! Bat algorithm.

use rand::Rng;

use super::{Params, StepContext};

pub(crate) struct Bat {
    f_min: f64,
    f_max: f64,
    alpha: f64,
    gamma: f64,
    pulse_rate0: f64,
    local_scale: f64,
    loudness: Vec<f64>,
    pulse_rate: Vec<f64>,
}

impl Bat {
    pub(crate) fn new(p: &Params, swarm_size: usize) -> Self {
        Bat {
            f_min: p["f_min"],
            f_max: p["f_max"],
            alpha: p["alpha"],
            gamma: p["gamma"],
            pulse_rate0: p["pulse_rate"],
            local_scale: p["local_scale"],
            loudness: vec![p["loudness"]; swarm_size],
            pulse_rate: vec![p["pulse_rate"]; swarm_size],
        }
    }

    /// Frequency-tuned velocity towards the best informant; with probability
    /// `1 - r_i` a local walk around that best scaled by mean loudness
    /// instead. A candidate is kept if it is no worse and `rand < A_i`, in
    /// which case loudness decays and pulse rate rises.
    pub(crate) fn step(&mut self, ctx: &mut StepContext<'_, '_, '_>) {
        let n = ctx.state.len();
        let t = (ctx.state.generation + 1) as f64;
        let mean_loudness = self.loudness.iter().sum::<f64>() / n as f64;
        let bests = ctx.social_attractors();
        for (i, best) in bests.iter().enumerate() {
            let state = &mut *ctx.state;
            let dim = ctx.space.dimension();
            let beta: f64 = state.rngs[i].random();
            let freq = self.f_min + (self.f_max - self.f_min) * beta;
            let saved = state.particles[i].clone();
            {
                let p = &mut state.particles[i];
                for d in 0..dim {
                    p.velocity[d] += (p.position[d] - best[d]) * freq;
                }
            }
            state.move_by_velocity(i, ctx.space);
            let mut candidate = state.particles[i].position.clone();
            let mut feasible = state.particles[i].feasible;
            let velocity = state.particles[i].velocity.clone();
            // Roll back the move; the candidate is only adopted below.
            state.particles[i] = saved;
            state.particles[i].velocity = velocity;

            let rng = &mut state.rngs[i];
            if rng.random::<f64>() > self.pulse_rate[i] {
                candidate = (0..dim)
                    .map(|d| {
                        let eps: f64 = rng.random_range(-1.0..=1.0);
                        best[d] + eps * mean_loudness * self.local_scale * ctx.space.width(d)
                    })
                    .collect();
                feasible = state.confine_candidate(i, &mut candidate, ctx.space);
            }
            let f = state.evaluate_candidate(i, &candidate, feasible, ctx.eval);
            let accept_roll: f64 = state.rngs[i].random();
            if f <= state.fitness[i] && accept_roll < self.loudness[i] {
                let p = &mut state.particles[i];
                p.position = candidate;
                p.feasible = feasible;
                state.fitness[i] = f;
                self.loudness[i] *= self.alpha;
                self.pulse_rate[i] = self.pulse_rate0 * (1.0 - (-self.gamma * t).exp());
            }
        }
    }
}
