//! Cuckoo search with Mantegna Lévy flights.

use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{Params, StepContext};

pub(crate) struct Cuckoo {
    discovery_rate: f64,
    step_scale: f64,
    levy_beta: f64,
    sigma_u: f64,
}

/// Mantegna's scale for the numerator of a Lévy-stable step.
fn mantegna_sigma(beta: f64) -> f64 {
    let num = libm::tgamma(1.0 + beta) * (PI * beta / 2.0).sin();
    let den = libm::tgamma((1.0 + beta) / 2.0) * beta * 2f64.powf((beta - 1.0) / 2.0);
    (num / den).powf(1.0 / beta)
}

impl Cuckoo {
    pub(crate) fn new(p: &Params) -> Self {
        let levy_beta = p["levy_beta"];
        Cuckoo {
            discovery_rate: p["discovery_rate"],
            step_scale: p["step_scale"],
            levy_beta,
            sigma_u: mantegna_sigma(levy_beta),
        }
    }

    /// Lévy flight around each nest scaled by its offset from the best
    /// informant, then abandonment of a `discovery_rate` fraction of
    /// coordinates via a biased random walk between two random nests. Both
    /// phases replace a nest only on improvement.
    pub(crate) fn step(&mut self, ctx: &mut StepContext<'_, '_, '_>) {
        let n = ctx.state.len();
        let attractors = ctx.social_attractors();
        for (i, best) in attractors.iter().enumerate() {
            let rng = &mut ctx.state.rngs[i];
            let x = &ctx.state.particles[i].position;
            let candidate: Vec<f64> = (0..x.len())
                .map(|d| {
                    let u: f64 = rng.sample::<f64, _>(StandardNormal) * self.sigma_u;
                    let v: f64 = rng.sample(StandardNormal);
                    let levy = u / v.abs().powf(1.0 / self.levy_beta);
                    let step = self.step_scale * levy * (x[d] - best[d]);
                    let z: f64 = rng.sample(StandardNormal);
                    x[d] + step * z
                })
                .collect();
            ctx.try_greedy(i, candidate);
        }

        let mut perm_a: Vec<usize> = (0..n).collect();
        let mut perm_b: Vec<usize> = (0..n).collect();
        perm_a.shuffle(&mut ctx.state.swarm_rng);
        perm_b.shuffle(&mut ctx.state.swarm_rng);
        let nests: Vec<Vec<f64>> = ctx.state.particles.iter().map(|p| p.position.clone()).collect();
        for i in 0..n {
            let rng = &mut ctx.state.rngs[i];
            let r: f64 = rng.random();
            let x = &nests[i];
            let candidate: Vec<f64> = (0..x.len())
                .map(|d| {
                    let discovered = rng.random::<f64>() < self.discovery_rate;
                    if discovered {
                        x[d] + r * (nests[perm_a[i]][d] - nests[perm_b[i]][d])
                    } else {
                        x[d]
                    }
                })
                .collect();
            ctx.try_greedy(i, candidate);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mantegna_sigma_reference_value() {
        // Widely tabulated value for beta = 1.5.
        assert!((mantegna_sigma(1.5) - 0.696_574_9).abs() < 1e-6);
    }
}
