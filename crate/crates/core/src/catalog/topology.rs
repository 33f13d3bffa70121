//! Informant graphs for the swarm topologies.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::CatalogError;

/// Default re-draw period for [`Topology::Dynamic`].
pub const DEFAULT_DYNAMIC_PERIOD: usize = 10;

/// Who informs whom inside a swarm.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Topology {
    /// Fully connected.
    #[default]
    Global,
    /// Indices within `radius` of each other, modulo the swarm size.
    Ring { radius: usize },
    /// Toroidal 4-neighbourhood on the most-square `r x c` grid, `r, c >= 2`.
    VonNeumann,
    /// Particle `hub` talks to everyone; everyone else only to the hub.
    Star { hub: usize },
    /// Non-wrapping 8-neighbourhood on the most-square grid.
    Mesh,
    /// Seeded `degree`-regular random graph.
    Random { degree: usize },
    /// Heap layout with the given branching; parent and children inform.
    Tree { branching: usize },
    /// A [`Topology::Random`] graph re-drawn every `period` generations.
    Dynamic { degree: usize, period: usize },
}

impl Topology {
    pub fn ring() -> Self {
        Topology::Ring { radius: 1 }
    }

    pub fn star() -> Self {
        Topology::Star { hub: 0 }
    }

    /// Checks the kind-specific parameters against a swarm size.
    pub fn validate(&self, swarm_size: usize) -> Result<(), CatalogError> {
        let invalid = |msg: String| Err(CatalogError::InvalidParameter(msg));
        if swarm_size == 0 {
            return invalid("swarm size must be positive".into());
        }
        match *self {
            Topology::Global | Topology::Mesh => Ok(()),
            Topology::Ring { radius: 0 } => invalid("ring radius must be >= 1".into()),
            Topology::Ring { .. } => Ok(()),
            Topology::VonNeumann => grid_shape(swarm_size)
                .filter(|&(r, c)| r >= 2 && c >= 2)
                .map(|_| ())
                .ok_or_else(|| {
                    CatalogError::InvalidParameter(format!(
                        "von Neumann topology needs a swarm size factorable as r x c with r, c >= 2, got {swarm_size}"
                    ))
                }),
            Topology::Star { hub } if hub >= swarm_size => {
                invalid(format!("star hub {hub} out of range for swarm size {swarm_size}"))
            }
            Topology::Star { .. } => Ok(()),
            Topology::Random { degree } => validate_degree(degree, swarm_size),
            Topology::Dynamic { degree, period } => {
                if period == 0 {
                    return invalid("dynamic topology period must be >= 1".into());
                }
                validate_degree(degree, swarm_size)
            }
            Topology::Tree { branching } if branching < 2 => {
                invalid("tree branching factor must be >= 2".into())
            }
            Topology::Tree { .. } => Ok(()),
        }
    }

    /// Builds the informant graph in force at `generation`.
    ///
    /// Only [`Topology::Dynamic`] depends on the generation.
    pub fn informants(
        &self,
        swarm_size: usize,
        seed: u64,
        generation: usize,
    ) -> Result<InformantGraph, CatalogError> {
        self.validate(swarm_size)?;
        let n = swarm_size;
        let sets: Vec<BTreeSet<usize>> = match *self {
            Topology::Global => (0..n).map(|_| (0..n).collect()).collect(),
            Topology::Ring { radius } => (0..n)
                .map(|i| {
                    let r = radius.min(n / 2);
                    (0..=2 * r).map(|k| (i + n + k - r) % n).collect()
                })
                .collect(),
            Topology::VonNeumann => {
                let (rows, cols) = grid_shape(n).expect("validated");
                (0..n)
                    .map(|i| {
                        let (r, c) = (i / cols, i % cols);
                        [
                            i,
                            ((r + rows - 1) % rows) * cols + c,
                            ((r + 1) % rows) * cols + c,
                            r * cols + (c + cols - 1) % cols,
                            r * cols + (c + 1) % cols,
                        ]
                        .into_iter()
                        .collect()
                    })
                    .collect()
            }
            Topology::Star { hub } => (0..n)
                .map(|i| {
                    if i == hub {
                        (0..n).collect()
                    } else {
                        [hub, i].into_iter().collect()
                    }
                })
                .collect(),
            Topology::Mesh => {
                let (rows, cols) = grid_shape(n).unwrap_or((1, n));
                (0..n)
                    .map(|i| {
                        let (r, c) = ((i / cols) as isize, (i % cols) as isize);
                        let mut set = BTreeSet::new();
                        for dr in -1..=1 {
                            for dc in -1..=1 {
                                let (rr, cc) = (r + dr, c + dc);
                                if rr >= 0 && cc >= 0 && (rr as usize) < rows && (cc as usize) < cols
                                {
                                    set.insert(rr as usize * cols + cc as usize);
                                }
                            }
                        }
                        set
                    })
                    .collect()
            }
            Topology::Random { degree } => random_regular(n, degree, seed),
            Topology::Dynamic { degree, period } => {
                let epoch = (generation / period) as u64;
                random_regular(n, degree, seed ^ epoch.wrapping_mul(0x9E37_79B9_7F4A_7C15))
            }
            Topology::Tree { branching } => (0..n)
                .map(|i| {
                    let mut set: BTreeSet<usize> = (1..=branching)
                        .map(|k| branching * i + k)
                        .filter(|&c| c < n)
                        .collect();
                    set.insert(i);
                    if i > 0 {
                        set.insert((i - 1) / branching);
                    }
                    set
                })
                .collect(),
        };
        Ok(InformantGraph { sets })
    }

    /// Whether the graph can change between generations.
    pub fn period(&self) -> Option<usize> {
        match *self {
            Topology::Dynamic { period, .. } => Some(period),
            _ => None,
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Topology::Global => write!(f, "global"),
            Topology::Ring { radius } => write!(f, "ring:{radius}"),
            Topology::VonNeumann => write!(f, "von_neumann"),
            Topology::Star { hub } => write!(f, "star:{hub}"),
            Topology::Mesh => write!(f, "mesh"),
            Topology::Random { degree } => write!(f, "random:{degree}"),
            Topology::Tree { branching } => write!(f, "tree:{branching}"),
            Topology::Dynamic { degree, period } => write!(f, "dynamic:{degree}:{period}"),
        }
    }
}

/// Parses `kind[:param[:param]]`, e.g. `ring:2`, `random:4`, `dynamic:4:10`.
impl FromStr for Topology {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.trim().split(':');
        let kind = parts.next().unwrap_or_default().to_ascii_lowercase().replace('-', "_");
        let params: Vec<usize> = parts
            .map(|p| {
                p.trim().parse::<usize>().map_err(|_| {
                    CatalogError::InvalidParameter(format!("bad topology parameter {p:?} in {s:?}"))
                })
            })
            .collect::<Result<_, _>>()?;
        let param = |idx: usize, default: usize| params.get(idx).copied().unwrap_or(default);
        let topology = match kind.as_str() {
            "global" | "fully_connected" | "gbest" => Topology::Global,
            "ring" | "local" | "lbest" => Topology::Ring { radius: param(0, 1) },
            "von_neumann" | "vonneumann" => Topology::VonNeumann,
            "star" => Topology::Star { hub: param(0, 0) },
            "mesh" => Topology::Mesh,
            "random" => Topology::Random { degree: param(0, 2) },
            "tree" | "hierarchical" => Topology::Tree { branching: param(0, 2) },
            "dynamic" | "adaptive" => Topology::Dynamic {
                degree: param(0, 2),
                period: param(1, DEFAULT_DYNAMIC_PERIOD),
            },
            _ => return Err(CatalogError::InvalidParameter(format!("unknown topology {s:?}"))),
        };
        Ok(topology)
    }
}

fn validate_degree(degree: usize, n: usize) -> Result<(), CatalogError> {
    if degree == 0 || degree >= n {
        return Err(CatalogError::InvalidParameter(format!(
            "random topology degree must be in [1, {}), got {degree}",
            n
        )));
    }
    if (degree * n) % 2 == 1 {
        return Err(CatalogError::InvalidParameter(format!(
            "no {degree}-regular graph exists on {n} vertices (degree x size must be even)"
        )));
    }
    Ok(())
}

/// Most-square factorization `rows x cols` with `rows <= cols`.
fn grid_shape(n: usize) -> Option<(usize, usize)> {
    let mut best = None;
    let mut r = 1;
    while r * r <= n {
        if n.is_multiple_of(r) {
            best = Some((r, n / r));
        }
        r += 1;
    }
    best
}

/// A randomly relabelled circulant graph, which is `degree`-regular.
fn random_regular(n: usize, degree: usize, seed: u64) -> Vec<BTreeSet<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::MAX);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut offsets: Vec<usize> = (1..=degree / 2).collect();
    if degree % 2 == 1 {
        offsets.push(n / 2);
    }
    let mut sets = vec![BTreeSet::new(); n];
    for slot in 0..n {
        let me = order[slot];
        sets[me].insert(me);
        for &off in &offsets {
            sets[me].insert(order[(slot + off) % n]);
            sets[me].insert(order[(slot + n - off) % n]);
        }
    }
    sets
}

/// Informant sets for every particle, self included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InformantGraph {
    sets: Vec<BTreeSet<usize>>,
}

impl InformantGraph {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn of(&self, particle: usize) -> &BTreeSet<usize> {
        &self.sets[particle]
    }

    pub fn iter(&self) -> impl Iterator<Item = &BTreeSet<usize>> {
        self.sets.iter()
    }
}

/// Informant set of `index` in a swarm of `swarm_size`.
pub fn neighbors(
    topology: &Topology,
    index: usize,
    swarm_size: usize,
    seed: u64,
) -> Result<BTreeSet<usize>, CatalogError> {
    if index >= swarm_size {
        return Err(CatalogError::InvalidParameter(format!(
            "particle index {index} out of range for swarm size {swarm_size}"
        )));
    }
    let graph = topology.informants(swarm_size, seed, 0)?;
    Ok(graph.sets[index].clone())
}
