//! Enumerations and reference data: topologies, boundary handlers, stopping
//! criteria, complexity factors, the algorithm catalog and deployment profiles.

mod profiles;
mod topology;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use profiles::{ingest_region_profiles, HardwareProfile, RegionProfile};
pub use topology::{neighbors, InformantGraph, Topology, DEFAULT_DYNAMIC_PERIOD};

/// Environment variable that points at a directory overriding the shipped assets.
pub const DATA_DIR_ENV: &str = "SWARMPRINT_DATA_DIR";

pub const REFERENCE_TABLE_FILE: &str = "reference_table.csv";
pub const FACTOR_OVERRIDES_FILE: &str = "factor_overrides.csv";
pub const REGIONS_FILE: &str = "regions.csv";

const REFERENCE_TABLE: &str = include_str!("../../assets/reference_table.csv");
const FACTOR_OVERRIDES: &str = include_str!("../../assets/factor_overrides.csv");
const REGIONS: &str = include_str!("../../assets/regions.csv");

const REFERENCE_TABLE_SHA256: &str =
    "0f1971ac735a8713c5edee4db6e7c8f43fe0755785ab5626ed601cacb6e3149d";
const FACTOR_OVERRIDES_SHA256: &str =
    "3302c6cc757863548f6ca6d221c71391bbe146f916632aa0a6f9b6ef6a57bb58";

/// Number of rows in the shipped reference table.
pub const REFERENCE_ROWS: usize = 34;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("data corruption in {asset}: {reason}")]
    Corrupt { asset: String, reason: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown algorithm {0:?}")]
    UnknownAlgorithm(String),
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// The ten boundary-handling strategies.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryHandling {
    Hyperbolic,
    InvisibleWall,
    #[default]
    Absorb,
    Random,
    RandomHalf,
    Periodic,
    Exponential,
    Mutation,
    Reflect,
    RandomDamping,
}

impl BoundaryHandling {
    pub const ALL: [BoundaryHandling; 10] = [
        BoundaryHandling::Hyperbolic,
        BoundaryHandling::InvisibleWall,
        BoundaryHandling::Absorb,
        BoundaryHandling::Random,
        BoundaryHandling::RandomHalf,
        BoundaryHandling::Periodic,
        BoundaryHandling::Exponential,
        BoundaryHandling::Mutation,
        BoundaryHandling::Reflect,
        BoundaryHandling::RandomDamping,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundaryHandling::Hyperbolic => "hyperbolic",
            BoundaryHandling::InvisibleWall => "invisible_wall",
            BoundaryHandling::Absorb => "absorb",
            BoundaryHandling::Random => "random",
            BoundaryHandling::RandomHalf => "random_half",
            BoundaryHandling::Periodic => "periodic",
            BoundaryHandling::Exponential => "exponential",
            BoundaryHandling::Mutation => "mutation",
            BoundaryHandling::Reflect => "reflect",
            BoundaryHandling::RandomDamping => "random_damping",
        }
    }
}

impl fmt::Display for BoundaryHandling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundaryHandling {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace(['-', ' '], "_");
        let kind = match key.as_str() {
            "hyperbolic" => BoundaryHandling::Hyperbolic,
            "invisible_wall" | "infinity" | "invisible" => BoundaryHandling::InvisibleWall,
            "absorb" | "nearest" | "boundary" => BoundaryHandling::Absorb,
            "random" => BoundaryHandling::Random,
            "random_half" => BoundaryHandling::RandomHalf,
            "periodic" => BoundaryHandling::Periodic,
            "exponential" => BoundaryHandling::Exponential,
            "mutation" => BoundaryHandling::Mutation,
            "reflect" | "reflection" => BoundaryHandling::Reflect,
            "random_damping" => BoundaryHandling::RandomDamping,
            _ => {
                return Err(CatalogError::InvalidParameter(format!(
                    "unknown boundary handling {s:?}"
                )))
            }
        };
        Ok(kind)
    }
}

/// Termination clauses; the run stops as soon as any set clause fires.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StoppingCriteria {
    pub max_generations: Option<usize>,
    /// Seconds without improvement of the global best.
    pub max_stall_time: Option<f64>,
    /// Seconds of wall time.
    pub max_runtime: Option<f64>,
    /// Stop once the global best is at or below this value.
    pub target_best_fitness: Option<f64>,
    /// Stop once every particle lies within this distance of the swarm centroid.
    pub population_convergence_radius: Option<f64>,
    /// Stop once current fitness values span at most this much.
    pub fitness_convergence_epsilon: Option<f64>,
}

impl StoppingCriteria {
    pub fn generations(max_generations: usize) -> Self {
        StoppingCriteria { max_generations: Some(max_generations), ..Default::default() }
    }

    pub fn validate(&self) -> Result<(), CatalogError> {
        let invalid = |m: String| Err(CatalogError::InvalidParameter(m));
        let any_set = self.max_generations.is_some()
            || self.max_stall_time.is_some()
            || self.max_runtime.is_some()
            || self.target_best_fitness.is_some()
            || self.population_convergence_radius.is_some()
            || self.fitness_convergence_epsilon.is_some();
        if !any_set {
            return invalid("at least one stopping criterion must be set".into());
        }
        if self.max_generations == Some(0) {
            return invalid("max_generations must be positive".into());
        }
        for (name, v) in [("max_stall_time", self.max_stall_time), ("max_runtime", self.max_runtime)] {
            if let Some(v) = v {
                if !(v.is_finite() && v > 0.0) {
                    return invalid(format!("{name} must be a positive duration, got {v}"));
                }
            }
        }
        if let Some(t) = self.target_best_fitness {
            if !t.is_finite() {
                return invalid(format!("target_best_fitness must be finite, got {t}"));
            }
        }
        for (name, v) in [
            ("population_convergence_radius", self.population_convergence_radius),
            ("fitness_convergence_epsilon", self.fitness_convergence_epsilon),
        ] {
            if let Some(v) = v {
                if !(v.is_finite() && v >= 0.0) {
                    return invalid(format!("{name} must be >= 0, got {v}"));
                }
            }
        }
        Ok(())
    }
}

/// Multiplicative complexity factors for hyperparameters, topology and boundary handling.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FactorAssignment {
    pub hyperparameter: Vec<f64>,
    pub topology: Vec<f64>,
    pub boundary: Vec<f64>,
}

impl FactorAssignment {
    /// One neutral factor per group.
    pub fn neutral() -> Self {
        FactorAssignment { hyperparameter: vec![1.0], topology: vec![1.0], boundary: vec![1.0] }
    }

    pub fn validate(&self) -> Result<(), CatalogError> {
        for (group, values) in self.groups() {
            if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
                return Err(CatalogError::InvalidParameter(format!(
                    "{group} factor must be strictly positive, got {bad}"
                )));
            }
        }
        Ok(())
    }

    pub fn groups(&self) -> [(&'static str, &[f64]); 3] {
        [
            ("hyperparameter", &self.hyperparameter),
            ("topology", &self.topology),
            ("boundary", &self.boundary),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Category {
    StochasticRandomSearch,
    MultiAgentCooperative,
    Hybrid,
    NatureInspiredCollective,
}

impl Category {
    pub const ALL: [Category; 4] = [
        Category::StochasticRandomSearch,
        Category::MultiAgentCooperative,
        Category::Hybrid,
        Category::NatureInspiredCollective,
    ];

    /// Label used in the reference table.
    pub fn label(self) -> &'static str {
        match self {
            Category::StochasticRandomSearch => "Stochastic/Random Search",
            Category::MultiAgentCooperative => "Multi-Agent Cooperative",
            Category::Hybrid => "Hybrid",
            Category::NatureInspiredCollective => "Nature-Inspired",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Category {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL
            .into_iter()
            .find(|c| c.label().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| CatalogError::InvalidParameter(format!("unknown category {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmDescriptor {
    pub name: String,
    pub category: Category,
    pub factors: FactorAssignment,
    /// Published complexity, percent.
    pub reference_complexity_pct: f64,
    pub executable: bool,
}

/// Where catalog assets are read from.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum DataSource {
    /// Assets compiled into the library.
    #[default]
    Embedded,
    /// A directory whose files take precedence over the embedded copies.
    Directory(PathBuf),
}

impl DataSource {
    /// Honors [`DATA_DIR_ENV`] when set and non-empty.
    pub fn from_env() -> Self {
        match std::env::var_os(DATA_DIR_ENV) {
            Some(dir) if !dir.is_empty() => DataSource::Directory(PathBuf::from(dir)),
            _ => DataSource::Embedded,
        }
    }

    fn read(&self, file: &str, embedded: &'static str) -> Result<String, CatalogError> {
        match self {
            DataSource::Embedded => Ok(embedded.to_owned()),
            DataSource::Directory(dir) => {
                let path = dir.join(file);
                if !path.exists() {
                    return Ok(embedded.to_owned());
                }
                std::fs::read_to_string(&path).map_err(|source| CatalogError::Io { path, source })
            }
        }
    }

    pub fn region_profiles(&self) -> Result<Vec<RegionProfile>, CatalogError> {
        ingest_region_profiles(self.read(REGIONS_FILE, REGIONS)?.as_bytes())
    }

    pub fn region(&self, code: &str) -> Result<RegionProfile, CatalogError> {
        self.region_profiles()?
            .into_iter()
            .find(|r| r.region_code().eq_ignore_ascii_case(code))
            .ok_or_else(|| CatalogError::InvalidParameter(format!("unknown region code {code:?}")))
    }
}

fn verify_checksum(asset: &str, text: &str, expected: &str) -> Result<(), CatalogError> {
    let digest = hex::encode(Sha256::digest(text.as_bytes()));
    if digest != expected {
        return Err(CatalogError::Corrupt {
            asset: asset.to_owned(),
            reason: format!("sha256 {digest} does not match {expected}"),
        });
    }
    Ok(())
}

fn parse_factor_list(field: &str, line: usize) -> Result<Vec<f64>, CatalogError> {
    field
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>().map_err(|_| CatalogError::Parse {
                line,
                message: format!("factor {s:?} is not a decimal"),
            })
        })
        .collect()
}

/// Loads the 34 shipped descriptors from the embedded assets.
pub fn load_reference_table() -> Result<Vec<AlgorithmDescriptor>, CatalogError> {
    load_reference_table_from(&DataSource::Embedded)
}

pub fn load_reference_table_from(
    source: &DataSource,
) -> Result<Vec<AlgorithmDescriptor>, CatalogError> {
    let table = source.read(REFERENCE_TABLE_FILE, REFERENCE_TABLE)?;
    verify_checksum(REFERENCE_TABLE_FILE, &table, REFERENCE_TABLE_SHA256)?;
    let overrides = source.read(FACTOR_OVERRIDES_FILE, FACTOR_OVERRIDES)?;
    verify_checksum(FACTOR_OVERRIDES_FILE, &overrides, FACTOR_OVERRIDES_SHA256)?;

    let mut descriptors = parse_reference_rows(&table)?;
    if descriptors.len() != REFERENCE_ROWS {
        return Err(CatalogError::Corrupt {
            asset: REFERENCE_TABLE_FILE.into(),
            reason: format!("expected {REFERENCE_ROWS} rows, found {}", descriptors.len()),
        });
    }
    apply_factor_overrides(&mut descriptors, &overrides)?;
    Ok(descriptors)
}

fn parse_reference_rows(text: &str) -> Result<Vec<AlgorithmDescriptor>, CatalogError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| CatalogError::Parse { line: 1, message: e.to_string() })?;
    if header.iter().collect::<Vec<_>>() != ["name", "category", "complexity_pct"] {
        return Err(CatalogError::Corrupt {
            asset: REFERENCE_TABLE_FILE.into(),
            reason: "expected header `name,category,complexity_pct`".into(),
        });
    }
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CatalogError::Parse {
            line: e.position().map(|p| p.line() as usize).unwrap_or(0),
            message: e.to_string(),
        })?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        let name = record[0].to_owned();
        let category: Category = record[1].parse()?;
        let pct: f64 = record[2].parse().map_err(|_| CatalogError::Parse {
            line,
            message: format!("complexity {:?} is not a decimal", &record[2]),
        })?;
        let executable = crate::engine::AlgorithmKind::from_name(&name).is_ok();
        out.push(AlgorithmDescriptor {
            name,
            category,
            factors: FactorAssignment::neutral(),
            reference_complexity_pct: pct,
            executable,
        });
    }
    Ok(out)
}

fn apply_factor_overrides(
    descriptors: &mut [AlgorithmDescriptor],
    text: &str,
) -> Result<(), CatalogError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    for record in reader.records() {
        let record = record.map_err(|e| CatalogError::Parse {
            line: e.position().map(|p| p.line() as usize).unwrap_or(0),
            message: e.to_string(),
        })?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        let name = &record[0];
        let factors = FactorAssignment {
            hyperparameter: parse_factor_list(&record[1], line)?,
            topology: parse_factor_list(&record[2], line)?,
            boundary: parse_factor_list(&record[3], line)?,
        };
        factors.validate()?;
        let target = descriptors
            .iter_mut()
            .find(|d| d.name == name)
            .ok_or_else(|| CatalogError::UnknownAlgorithm(name.to_owned()))?;
        target.factors = factors;
    }
    Ok(())
}

/// Finds a descriptor by exact or case-insensitive name.
pub fn lookup<'a>(catalog: &'a [AlgorithmDescriptor], name: &str) -> Option<&'a AlgorithmDescriptor> {
    catalog
        .iter()
        .find(|d| d.name == name)
        .or_else(|| catalog.iter().find(|d| d.name.eq_ignore_ascii_case(name)))
}

/// Writes the embedded assets into `dir`, e.g. to seed a custom data directory.
pub fn export_assets(dir: &Path) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(REFERENCE_TABLE_FILE), REFERENCE_TABLE)?;
    std::fs::write(dir.join(FACTOR_OVERRIDES_FILE), FACTOR_OVERRIDES)?;
    std::fs::write(dir.join(REGIONS_FILE), REGIONS)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_lookups() {
        let table = load_reference_table().unwrap();
        assert_eq!(table.len(), 34);
        let pso = lookup(&table, "PSO").unwrap();
        assert_eq!(pso.category, Category::StochasticRandomSearch);
        assert_eq!(pso.reference_complexity_pct, 5.83);
        assert!(pso.executable);
        let bat = lookup(&table, "Bat Algorithm").unwrap();
        assert_eq!(bat.category, Category::NatureInspiredCollective);
        assert_eq!(bat.reference_complexity_pct, 5.25);
        let fbs = lookup(&table, "Fast Bacterial Swarming").unwrap();
        assert_eq!(fbs.category, Category::Hybrid);
        assert_eq!(fbs.reference_complexity_pct, 7.87);
        assert!(!fbs.executable);
    }

    #[test]
    fn partition_counts() {
        let table = load_reference_table().unwrap();
        let counts: Vec<usize> = Category::ALL
            .iter()
            .map(|c| table.iter().filter(|d| d.category == *c).count())
            .collect();
        assert_eq!(counts, [8, 10, 8, 8]);
        assert_eq!(table.iter().filter(|d| d.executable).count(), 7);
    }

    #[test]
    fn corrupted_directory_is_rejected() {
        let dir = std::env::temp_dir().join(format!("swarmprint-corrupt-{}", std::process::id()));
        export_assets(&dir).unwrap();
        let source = DataSource::Directory(dir.clone());
        assert!(load_reference_table_from(&source).is_ok());
        let path = dir.join(REFERENCE_TABLE_FILE);
        let tampered = std::fs::read_to_string(&path).unwrap().replace("5.83", "5.84");
        std::fs::write(&path, tampered).unwrap();
        assert!(matches!(load_reference_table_from(&source), Err(CatalogError::Corrupt { .. })));
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn boundary_names_round_trip() {
        for b in BoundaryHandling::ALL {
            assert_eq!(b.name().parse::<BoundaryHandling>().unwrap(), b);
        }
        assert!("bounce".parse::<BoundaryHandling>().is_err());
    }

    #[test]
    fn stopping_validation() {
        assert!(StoppingCriteria::default().validate().is_err());
        assert!(StoppingCriteria::generations(0).validate().is_err());
        assert!(StoppingCriteria::generations(10).validate().is_ok());
        let inf_target =
            StoppingCriteria { target_best_fitness: Some(f64::INFINITY), ..Default::default() };
        assert!(inf_target.validate().is_err());
        let bad_time = StoppingCriteria { max_runtime: Some(0.0), ..Default::default() };
        assert!(bad_time.validate().is_err());
    }

    #[test]
    fn factor_validation() {
        assert!(FactorAssignment::neutral().validate().is_ok());
        let bad = FactorAssignment { topology: vec![1.0, 0.0], ..Default::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn shipped_regions() {
        let regions = DataSource::Embedded.region_profiles().unwrap();
        assert!(regions.iter().any(|r| r.region_code() == "ZERO" && r.emission_factor() == 0.0));
        assert!(DataSource::Embedded.region("nowhere").is_err());
    }
}
