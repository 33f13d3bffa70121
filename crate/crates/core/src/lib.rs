//! Swarm-intelligence optimizers with a hyperfactorial carbon-footprint model.
//!
//! - [`combinatorics`]: exact and log-domain hyperfactorial / superfactorial.
//! - [`catalog`]: topologies, boundary handlers, stopping criteria, the
//!   34-entry algorithm catalog and deployment profiles.
//! - [`emission`]: the emission product, complexity scores and percentages.
//! - [`engine`]: eight executable swarm algorithms.
//! - [`harness`]: benchmark functions and metered experiment plans.

pub mod catalog;
pub mod combinatorics;
pub mod emission;
pub mod engine;
pub mod harness;

pub use catalog::{
    AlgorithmDescriptor, BoundaryHandling, Category, FactorAssignment, HardwareProfile, RegionProfile,
    StoppingCriteria, Topology,
};
pub use combinatorics::{ExactNat, LogMagnitude};
pub use emission::{ComplexityScore, EmissionEstimate, EmissionInputs, NormalizationMode};
pub use engine::{AlgorithmKind, Particle, RunMeter, RunResult, SearchSpace, SwarmConfig};
