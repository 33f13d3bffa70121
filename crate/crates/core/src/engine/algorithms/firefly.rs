//! Firefly algorithm.

use rand::Rng;

use super::{Params, StepContext};

pub(crate) struct Firefly {
    alpha: f64,
    beta0: f64,
    gamma: f64,
    alpha_decay: f64,
}

impl Firefly {
    pub(crate) fn new(p: &Params) -> Self {
        Firefly { alpha: p["alpha"], beta0: p["beta0"], gamma: p["gamma"], alpha_decay: p["alpha_decay"] }
    }

    /// Each firefly moves towards every brighter informant with
    /// attractiveness `beta0 exp(-gamma r^2 / L^2)` plus a uniform random
    /// walk of amplitude `alpha_t L`. The brightest just walks.
    pub(crate) fn step(&mut self, ctx: &mut StepContext<'_, '_, '_>) {
        let n = ctx.state.len();
        let dim = ctx.space.dimension();
        let widths: Vec<f64> = (0..dim).map(|d| ctx.space.width(d)).collect();
        let mean_width = widths.iter().sum::<f64>() / dim as f64;
        let gamma = self.gamma / (mean_width * mean_width);
        let alpha_t = self.alpha * self.alpha_decay.powi(ctx.state.generation as i32);
        let positions: Vec<Vec<f64>> = ctx.state.particles.iter().map(|p| p.position.clone()).collect();
        let brightness = ctx.state.fitness.clone();

        for i in 0..n {
            let brighter: Vec<usize> = ctx
                .graph
                .of(i)
                .iter()
                .copied()
                .filter(|&j| j != i && brightness[j] < brightness[i])
                .collect();
            let rng = &mut ctx.state.rngs[i];
            let mut x = positions[i].clone();
            let walk = |x: &mut Vec<f64>, rng: &mut rand_chacha::ChaCha8Rng| {
                for (xd, w) in x.iter_mut().zip(&widths) {
                    *xd += alpha_t * (rng.random::<f64>() - 0.5) * w;
                }
            };
            if brighter.is_empty() {
                walk(&mut x, rng);
            }
            for j in brighter {
                let r2: f64 = x.iter().zip(&positions[j]).map(|(a, b)| (a - b) * (a - b)).sum();
                let beta = self.beta0 * (-gamma * r2).exp();
                for (xd, yd) in x.iter_mut().zip(&positions[j]) {
                    *xd += beta * (yd - *xd);
                }
                walk(&mut x, rng);
            }
            ctx.relocate(i, x);
        }
    }
}
