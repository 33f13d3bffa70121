//! Whale optimization algorithm.

use std::f64::consts::PI;

use rand::Rng;

use super::{Params, StepContext};

pub(crate) struct Woa {
    spiral_b: f64,
    a_initial: f64,
}

impl Woa {
    pub(crate) fn new(p: &Params) -> Self {
        Woa { spiral_b: p["spiral_b"], a_initial: p["a_initial"] }
    }

    /// Encircling (`|A| < 1`), random search (`|A| >= 1`) or the logarithmic
    /// spiral, chosen with equal probability between shrink and spiral.
    /// `a` falls linearly from `a_initial` to 0 over the horizon.
    pub(crate) fn step(&mut self, ctx: &mut StepContext<'_, '_, '_>) {
        let n = ctx.state.len();
        let a = self.a_initial * (1.0 - ctx.progress());
        let leaders = ctx.social_attractors();
        let positions: Vec<Vec<f64>> = ctx.state.particles.iter().map(|p| p.position.clone()).collect();
        for (i, leader) in leaders.iter().enumerate() {
            let rng = &mut ctx.state.rngs[i];
            let r1: f64 = rng.random();
            let r2: f64 = rng.random();
            let big_a = 2.0 * a * r1 - a;
            let c = 2.0 * r2;
            let p: f64 = rng.random();
            let l: f64 = rng.random_range(-1.0..=1.0);
            let x = &positions[i];
            let candidate: Vec<f64> = if p < 0.5 {
                let reference = if big_a.abs() < 1.0 { leader } else { &positions[rng.random_range(0..n)] };
                (0..x.len()).map(|d| reference[d] - big_a * (c * reference[d] - x[d]).abs()).collect()
            } else {
                let spiral = (self.spiral_b * l).exp() * (2.0 * PI * l).cos();
                (0..x.len()).map(|d| (leader[d] - x[d]).abs() * spiral + leader[d]).collect()
            };
            ctx.relocate(i, candidate);
        }
    }
}
