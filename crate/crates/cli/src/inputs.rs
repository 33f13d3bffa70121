//! Input file formats: `key = value` emission inputs and TOML experiment plans.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use swarmprint::catalog::{ingest_region_profiles, CatalogError, DataSource};
use swarmprint::harness::{
    Deployment, ExperimentPlan, PlannedConfig, TestFunction, TestFunctionKind, UnitTimePolicy, DEFAULT_UNIT_HOURS,
};
use swarmprint::{
    BoundaryHandling, EmissionInputs, FactorAssignment, HardwareProfile, RegionProfile, StoppingCriteria, Topology,
};

use crate::CliError;

/// Deployment overrides given on the command line.
#[derive(Debug, Default)]
pub struct Overrides {
    pub t_unit_hours: Option<f64>,
    pub t_unit_measured: bool,
    pub region: Option<String>,
    pub hardware: Option<HardwareProfile>,
    pub regions_file: Option<std::path::PathBuf>,
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| CliError::Input(format!("reading stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn load_hardware(path: &Path) -> Result<HardwareProfile, CliError> {
    HardwareProfile::parse(&read_text(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

impl Overrides {
    pub fn lookup_region(&self, code: &str) -> Result<RegionProfile, CliError> {
        let found = match &self.regions_file {
            Some(path) => {
                let text = read_text(path)?;
                ingest_region_profiles(text.as_bytes())
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
                    .into_iter()
                    .find(|r| r.region_code().eq_ignore_ascii_case(code))
                    .ok_or_else(|| CatalogError::InvalidParameter(format!("unknown region code {code:?}")))
            }
            None => DataSource::from_env().region(code),
        };
        found.map_err(CliError::from)
    }
}

fn parse_f64(key: &str, value: &str, line: usize) -> Result<f64, CliError> {
    value
        .parse::<f64>()
        .map_err(|_| CliError::Input(format!("line {line}: {key}: {value:?} is not a number")))
}

fn parse_u64(key: &str, value: &str, line: usize) -> Result<u64, CliError> {
    value
        .parse::<u64>()
        .map_err(|_| CliError::Input(format!("line {line}: {key}: {value:?} is not a non-negative integer")))
}

fn parse_list(key: &str, value: &str, line: usize) -> Result<Vec<f64>, CliError> {
    value
        .split([',', ';'])
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_f64(key, s, line))
        .collect()
}

/// Reads emission inputs from `key = value` text or from a JSON document.
///
/// JSON input may be a bare inputs object or a previous `estimate` report,
/// whose `inputs` section is used.
pub fn parse_emission_inputs(text: &str, overrides: &Overrides) -> Result<EmissionInputs, CliError> {
    let trimmed = text.trim_start();
    let mut inputs = if trimmed.starts_with('{') {
        let value: serde_json::Value =
            serde_json::from_str(trimmed).map_err(|e| CliError::Input(format!("invalid JSON: {e}")))?;
        let section = value.get("inputs").cloned().unwrap_or(value);
        serde_json::from_value::<EmissionInputs>(section)
            .map_err(|e| CliError::Input(format!("invalid emission inputs: {e}")))?
    } else {
        parse_key_values(text, overrides)?
    };
    if let Some(h) = overrides.t_unit_hours {
        inputs.unit_time_hours = h;
    }
    if let Some(hw) = overrides.hardware {
        inputs.hardware = hw;
    }
    if let Some(code) = &overrides.region {
        inputs.region = overrides.lookup_region(code)?;
    }
    inputs.validate().map_err(|e| CliError::Input(e.to_string()))?;
    Ok(inputs)
}

fn parse_key_values(text: &str, overrides: &Overrides) -> Result<EmissionInputs, CliError> {
    let mut num_particles = None;
    let mut num_iterations = None;
    let mut factors = FactorAssignment::neutral();
    let mut unit_time_hours = DEFAULT_UNIT_HOURS;
    let mut power_kw = HardwareProfile::default().avg_power_kw();
    let mut utilization = HardwareProfile::default().utilization();
    let mut region_code: Option<String> = None;
    let mut emission_factor: Option<f64> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| CliError::Input(format!("line {line}: expected key = value, got {content:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "num_particles" => num_particles = Some(parse_u64(key, value, line)?),
            "num_iterations" => num_iterations = Some(parse_u64(key, value, line)?),
            "hyperparameter_factors" => factors.hyperparameter = parse_list(key, value, line)?,
            "topology_factors" => factors.topology = parse_list(key, value, line)?,
            "boundary_factors" => factors.boundary = parse_list(key, value, line)?,
            "t_unit_hours" => unit_time_hours = parse_f64(key, value, line)?,
            "power_kw" => power_kw = parse_f64(key, value, line)?,
            "utilization" => utilization = parse_f64(key, value, line)?,
            "emission_factor" => emission_factor = Some(parse_f64(key, value, line)?),
            "region" => region_code = Some(value.to_owned()),
            other => return Err(CliError::Input(format!("line {line}: unknown key {other:?}"))),
        }
    }
    let num_particles = num_particles.ok_or_else(|| CliError::Input("missing key num_particles".into()))?;
    let num_iterations = num_iterations.ok_or_else(|| CliError::Input("missing key num_iterations".into()))?;
    let hardware = HardwareProfile::new(power_kw, utilization).map_err(|e| CliError::Input(e.to_string()))?;
    let region = match (region_code, emission_factor) {
        (code, Some(f)) => RegionProfile::new(code.unwrap_or_else(|| "CUSTOM".into()), f)?,
        (Some(code), None) => overrides.lookup_region(&code)?,
        (None, None) => RegionProfile::default(),
    };
    Ok(EmissionInputs { num_particles, num_iterations, factors, unit_time_hours, hardware, region })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanFile {
    function: String,
    dimension: usize,
    lower: Option<f64>,
    upper: Option<f64>,
    #[serde(default = "one")]
    repetitions: u32,
    #[serde(default)]
    base_seed: u64,
    #[serde(default)]
    deployment: DeploymentFile,
    #[serde(default)]
    config: Vec<ConfigFile>,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct DeploymentFile {
    /// `"measured"` or `"fixed"`.
    t_unit: Option<String>,
    t_unit_hours: Option<f64>,
    power_kw: Option<f64>,
    utilization: Option<f64>,
    region: Option<String>,
    emission_factor: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    algorithm: String,
    swarm_size: usize,
    topology: Option<String>,
    boundary: Option<String>,
    max_generations: Option<usize>,
    max_stall_time: Option<f64>,
    max_runtime: Option<f64>,
    target_best_fitness: Option<f64>,
    population_convergence_radius: Option<f64>,
    fitness_convergence_epsilon: Option<f64>,
    #[serde(default)]
    hyperparameters: BTreeMap<String, f64>,
}

/// Parses a TOML plan and applies command-line overrides.
pub fn parse_plan(text: &str, overrides: &Overrides, seed: Option<u64>) -> Result<ExperimentPlan, CliError> {
    let file: PlanFile = toml::from_str(text).map_err(|e| CliError::Input(format!("invalid plan: {e}")))?;
    let kind: TestFunctionKind = file.function.parse()?;
    let function = TestFunction::new(kind, file.dimension)?;
    let bounds = match (file.lower, file.upper) {
        (None, None) => None,
        (Some(lo), Some(hi)) => Some((lo, hi)),
        _ => return Err(CliError::Input("plan must give both lower and upper, or neither".into())),
    };

    let mut configs = Vec::with_capacity(file.config.len());
    for (i, c) in file.config.into_iter().enumerate() {
        let at = |e: String| CliError::Input(format!("config #{}: {e}", i + 1));
        let topology = match &c.topology {
            Some(t) => t.parse::<Topology>().map_err(|e| at(e.to_string()))?,
            None => Topology::Global,
        };
        let boundary = match &c.boundary {
            Some(b) => b.parse::<BoundaryHandling>().map_err(|e| at(e.to_string()))?,
            None => BoundaryHandling::default(),
        };
        let stopping = StoppingCriteria {
            max_generations: c.max_generations,
            max_stall_time: c.max_stall_time,
            max_runtime: c.max_runtime,
            target_best_fitness: c.target_best_fitness,
            population_convergence_radius: c.population_convergence_radius,
            fitness_convergence_epsilon: c.fitness_convergence_epsilon,
        };
        stopping.validate().map_err(|e| at(e.to_string()))?;
        configs.push(PlannedConfig {
            algorithm: c.algorithm,
            swarm_size: c.swarm_size,
            topology,
            boundary,
            stopping,
            hyperparameters: c.hyperparameters,
        });
    }

    let d = file.deployment;
    let unit_time = if overrides.t_unit_measured {
        UnitTimePolicy::Measured
    } else if let Some(hours) = overrides.t_unit_hours {
        UnitTimePolicy::Fixed { hours }
    } else {
        match d.t_unit.as_deref().map(str::to_ascii_lowercase).as_deref() {
            Some("measured") => UnitTimePolicy::Measured,
            None | Some("fixed") => UnitTimePolicy::Fixed { hours: d.t_unit_hours.unwrap_or(DEFAULT_UNIT_HOURS) },
            Some(other) => {
                return Err(CliError::Input(format!("deployment.t_unit must be \"fixed\" or \"measured\", got {other:?}")))
            }
        }
    };
    let hardware = match overrides.hardware {
        Some(hw) => hw,
        None => {
            let default = HardwareProfile::default();
            HardwareProfile::new(
                d.power_kw.unwrap_or(default.avg_power_kw()),
                d.utilization.unwrap_or(default.utilization()),
            )?
        }
    };
    let region = match (&overrides.region, &d.region, d.emission_factor) {
        (Some(code), _, _) => overrides.lookup_region(code)?,
        (None, code, Some(f)) => RegionProfile::new(code.clone().unwrap_or_else(|| "CUSTOM".into()), f)?,
        (None, Some(code), None) => overrides.lookup_region(code)?,
        (None, None, None) => RegionProfile::default(),
    };

    let plan = ExperimentPlan {
        configs,
        function,
        bounds,
        repetitions: file.repetitions,
        base_seed: seed.unwrap_or(file.base_seed),
        deployment: Deployment { unit_time, hardware, region },
    };
    plan.validate()?;
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_values_with_comments() {
        let text = "# demo\nnum_particles = 3\nnum_iterations=2 # trailing\nhyperparameter_factors = 2, 2\n";
        let inputs = parse_emission_inputs(text, &Overrides::default()).unwrap();
        assert_eq!(inputs.num_particles, 3);
        assert_eq!(inputs.factors.hyperparameter, vec![2.0, 2.0]);
        assert_eq!(inputs.unit_time_hours, DEFAULT_UNIT_HOURS);
    }

    #[test]
    fn key_value_errors_name_the_line() {
        let err = parse_emission_inputs("num_particles = 3\nbogus = 1\n", &Overrides::default()).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let err = parse_emission_inputs("num_particles = x\n", &Overrides::default()).unwrap_err();
        assert!(err.to_string().contains("line 1: num_particles"), "{err}");
        let err = parse_emission_inputs("num_particles = 3\n", &Overrides::default()).unwrap_err();
        assert!(err.to_string().contains("num_iterations"), "{err}");
    }

    #[test]
    fn plan_defaults_and_overrides() {
        let text = r#"
            function = "sphere"
            dimension = 4
            repetitions = 2
            base_seed = 7

            [[config]]
            algorithm = "PSO"
            swarm_size = 10
            topology = "ring:2"
            boundary = "reflect"
            max_generations = 50
            [config.hyperparameters]
            inertia = 0.6
        "#;
        let plan = parse_plan(text, &Overrides::default(), None).unwrap();
        assert_eq!(plan.base_seed, 7);
        assert_eq!(plan.configs[0].topology, Topology::Ring { radius: 2 });
        assert_eq!(plan.deployment.unit_time, UnitTimePolicy::Fixed { hours: 72.0 });
        let o = Overrides { t_unit_measured: true, ..Default::default() };
        let plan = parse_plan(text, &o, Some(99)).unwrap();
        assert_eq!(plan.base_seed, 99);
        assert_eq!(plan.deployment.unit_time, UnitTimePolicy::Measured);
    }

    #[test]
    fn plan_errors() {
        let bad_key = "function = \"sphere\"\ndimension = 2\nflavour = 1\n";
        assert!(parse_plan(bad_key, &Overrides::default(), None).is_err());
        let no_stop = "function = \"sphere\"\ndimension = 2\n[[config]]\nalgorithm = \"PSO\"\nswarm_size = 5\n";
        let err = parse_plan(no_stop, &Overrides::default(), None).unwrap_err();
        assert!(err.to_string().contains("config #1"), "{err}");
    }
}
