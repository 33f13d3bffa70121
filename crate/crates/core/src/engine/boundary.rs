//! Boundary handling for particles that leave the search box.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::{Particle, SearchSpace};
use crate::catalog::BoundaryHandling;

/// Exponential resampling scale as a fraction of the domain width.
const EXPONENTIAL_SCALE: f64 = 0.1;
/// Mutation standard deviation as a fraction of the domain width.
const MUTATION_SIGMA: f64 = 0.05;
const MUTATION_ATTEMPTS: usize = 16;

/// Returns a copy of `particle` with `handler` applied to every coordinate.
///
/// All handlers except [`BoundaryHandling::InvisibleWall`] leave the particle
/// inside the box and feasible; the invisible wall keeps the position and
/// marks the particle infeasible.
pub fn apply_boundary<R: Rng + ?Sized>(
    handler: BoundaryHandling,
    particle: &Particle,
    space: &SearchSpace,
    rng: &mut R,
) -> Particle {
    let mut out = particle.clone();
    out.feasible = confine(handler, &mut out.position, &mut out.velocity, space, rng);
    out
}

/// Scales each velocity component so that `position + velocity` approaches
/// the bound ahead of it without crossing: `v / (1 + |v| / distance)`.
pub fn hyperbolic_velocity(position: &[f64], velocity: &mut [f64], space: &SearchSpace) {
    for (d, v) in velocity.iter_mut().enumerate() {
        let (lo, hi) = space.bounds(d);
        let x = position[d];
        let distance = if *v > 0.0 { hi - x } else { x - lo };
        if distance <= 0.0 || !distance.is_finite() {
            *v = 0.0;
        } else if *v != 0.0 {
            *v /= 1.0 + v.abs() / distance;
        }
    }
}

/// Applies `handler` in place and reports feasibility.
pub(crate) fn confine<R: Rng + ?Sized>(
    handler: BoundaryHandling,
    position: &mut [f64],
    velocity: &mut [f64],
    space: &SearchSpace,
    rng: &mut R,
) -> bool {
    let mut feasible = true;
    for d in 0..position.len() {
        let (lo, hi) = space.bounds(d);
        let x = position[d];
        if x >= lo && x <= hi {
            continue;
        }
        if handler == BoundaryHandling::InvisibleWall {
            feasible = false;
            continue;
        }
        let width = hi - lo;
        let mut v = velocity.get(d).copied().unwrap_or(0.0);
        let above = !(x < lo);
        let bound = if above { hi } else { lo };
        let new_x = if !x.is_finite() {
            // Nothing sensible to mirror or wrap; fall back to a fresh sample.
            v = 0.0;
            rng.random_range(lo..=hi)
        } else {
            match handler {
                BoundaryHandling::InvisibleWall => unreachable!(),
                BoundaryHandling::Absorb => {
                    v = 0.0;
                    bound
                }
                BoundaryHandling::Reflect | BoundaryHandling::RandomDamping => {
                    let (nx, flips) = reflect(x, lo, hi);
                    if flips {
                        v = -v;
                    }
                    if handler == BoundaryHandling::RandomDamping {
                        v *= rng.random::<f64>();
                    }
                    nx
                }
                BoundaryHandling::Random => {
                    v = 0.0;
                    rng.random_range(lo..=hi)
                }
                BoundaryHandling::RandomHalf => {
                    v = 0.0;
                    let mid = lo + 0.5 * width;
                    if above {
                        rng.random_range(mid..=hi)
                    } else {
                        rng.random_range(lo..=mid)
                    }
                }
                BoundaryHandling::Periodic => lo + (x - lo).rem_euclid(width),
                BoundaryHandling::Exponential => {
                    v = 0.0;
                    let lambda = EXPONENTIAL_SCALE * width;
                    let u: f64 = rng.random();
                    // Inverse CDF of the exponential truncated to [0, width].
                    let dist = (-lambda * (1.0 - u * (1.0 - (-width / lambda).exp())).ln()).min(width);
                    if above {
                        hi - dist
                    } else {
                        lo + dist
                    }
                }
                BoundaryHandling::Mutation => {
                    v = 0.0;
                    let normal = Normal::new(bound, MUTATION_SIGMA * width).expect("positive sigma");
                    (0..MUTATION_ATTEMPTS)
                        .map(|_| normal.sample(rng))
                        .find(|c| *c >= lo && *c <= hi)
                        .unwrap_or(bound)
                }
                BoundaryHandling::Hyperbolic => {
                    // Re-take the move from the previous position with a
                    // scaled velocity when that position is known to be inside.
                    let prev = x - v;
                    if prev >= lo && prev <= hi && v != 0.0 {
                        let mut scaled = [v];
                        hyperbolic_velocity(&[prev], &mut scaled, &SearchSpace::single(lo, hi));
                        v = scaled[0];
                        prev + v
                    } else {
                        v = 0.0;
                        bound
                    }
                }
            }
        };
        position[d] = new_x.clamp(lo, hi);
        if let Some(slot) = velocity.get_mut(d) {
            *slot = v;
        }
    }
    feasible
}

/// Mirrors `x` into `[lo, hi]`; the flag is true after an odd number of reflections.
fn reflect(x: f64, lo: f64, hi: f64) -> (f64, bool) {
    let width = hi - lo;
    let k = ((x - lo) / width).floor();
    let t = (x - lo) - k * width;
    let odd = (k as i64).rem_euclid(2) == 1;
    if odd {
        (hi - t, true)
    } else {
        (lo + t, false)
    }
}
