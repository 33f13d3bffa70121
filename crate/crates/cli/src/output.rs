//! Rendering of command results as JSON, CSV or two-decimal text.

use std::fmt::Write as _;

use serde::Serialize;
use swarmprint::emission::EmissionTerm;
use swarmprint::harness::{Aggregate, CatalogTable, Comparison, RunReport};
use swarmprint::{EmissionEstimate, EmissionInputs};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

pub fn json<T: Serialize + ?Sized>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Output(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv_from_rows(header: &[&str], rows: Vec<Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Output(e.to_string());
    w.write_record(header).map_err(fail)?;
    for row in rows {
        w.write_record(&row).map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
}

/// Shortest round-trip form; empty when absent.
fn num(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn two(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.2}")).unwrap_or_else(|| "-".into())
}

#[derive(Serialize)]
struct EstimateDocument<'a> {
    /// Linear kg CO₂ when it fits in an f64.
    kg_co2: Option<f64>,
    kg_co2_log: Option<f64>,
    kg_co2_exact: Option<f64>,
    zero_emission: bool,
    components: &'a [EmissionTerm],
    inputs: &'a EmissionInputs,
}

fn linear_kg(estimate: &EmissionEstimate) -> Option<f64> {
    Some(estimate.kg_co2()).filter(|v| v.is_finite())
}

pub fn estimate(inputs: &EmissionInputs, estimate: &EmissionEstimate, format: Format) -> Result<String, CliError> {
    let kg = linear_kg(estimate);
    match format {
        Format::Json => json(&EstimateDocument {
            kg_co2: kg,
            kg_co2_log: estimate.ln_kg_co2(),
            kg_co2_exact: estimate.kg_co2_exact,
            zero_emission: estimate.zero_emission,
            components: &estimate.components,
            inputs,
        }),
        Format::Csv => {
            let mut rows: Vec<Vec<String>> = estimate
                .components
                .iter()
                .map(|t| vec![t.term.clone(), num(t.ln_value), num(t.ln_value.map(f64::exp)), t.zero.to_string()])
                .collect();
            rows.push(vec!["kg_co2".into(), num(estimate.ln_kg_co2()), num(kg), estimate.zero_emission.to_string()]);
            csv_from_rows(&["term", "ln_value", "value", "zero"], rows)
        }
        Format::Text => {
            let mut s = String::new();
            match (kg, estimate.ln_kg_co2()) {
                (Some(v), Some(ln)) => writeln!(s, "kg CO2: {v:.2} (ln {ln:.2})"),
                (None, Some(ln)) => writeln!(s, "kg CO2: exp({ln:.2})"),
                _ => writeln!(s, "kg CO2: 0.00 (zero emission factor)"),
            }
            .ok();
            for t in &estimate.components {
                let value = match t.ln_value {
                    Some(ln) => format!("ln {ln:.2}"),
                    None => "zero".into(),
                };
                writeln!(s, "  {:<28}{value}", t.term).ok();
            }
            Ok(s)
        }
    }
}

const RUN_HEADER: &[&str] = &[
    "config_index",
    "repetition",
    "seed",
    "algorithm",
    "function",
    "dimension",
    "swarm_size",
    "topology",
    "boundary",
    "iterations_used",
    "evaluations_used",
    "wall_time_s",
    "best_fitness",
    "num_particles",
    "num_iterations",
    "unit_time_hours",
    "power_kw",
    "utilization",
    "region",
    "emission_factor",
    "kg_co2_log",
    "kg_co2_exact",
    "zero_emission",
    "timestamp",
    "error_marker",
    "error_message",
];

fn run_row(r: &RunReport) -> Vec<String> {
    let m = r.meter.as_ref();
    let i = r.emission_inputs.as_ref();
    let e = r.emission.as_ref();
    vec![
        r.config_index.to_string(),
        r.repetition.to_string(),
        r.seed.to_string(),
        r.config.algorithm.clone(),
        r.function.name.to_string(),
        r.function.dimension.to_string(),
        r.config.swarm_size.to_string(),
        r.config.topology.to_string(),
        r.config.boundary.to_string(),
        m.map(|m| m.iterations_used.to_string()).unwrap_or_default(),
        m.map(|m| m.evaluations_used.to_string()).unwrap_or_default(),
        num(m.map(|m| m.wall_time_s)),
        num(r.best_fitness),
        i.map(|i| i.num_particles.to_string()).unwrap_or_default(),
        i.map(|i| i.num_iterations.to_string()).unwrap_or_default(),
        num(i.map(|i| i.unit_time_hours)),
        num(i.map(|i| i.hardware.avg_power_kw())),
        num(i.map(|i| i.hardware.utilization())),
        i.map(|i| i.region.region_code().to_owned()).unwrap_or_default(),
        num(i.map(|i| i.region.emission_factor())),
        num(e.and_then(|e| e.ln_kg_co2())),
        num(e.and_then(|e| e.kg_co2_exact)),
        e.map(|e| e.zero_emission.to_string()).unwrap_or_default(),
        r.timestamp.clone(),
        r.error.as_ref().map(|e| e.marker.clone()).unwrap_or_default(),
        r.error.as_ref().map(|e| e.message.clone()).unwrap_or_default(),
    ]
}

pub fn runs(reports: &[RunReport], format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => json(reports),
        Format::Csv => csv_from_rows(RUN_HEADER, reports.iter().map(run_row).collect()),
        Format::Text => {
            let mut s = String::new();
            for r in reports {
                let head = format!("{} #{} seed {}", r.config.algorithm, r.repetition, r.seed);
                match (&r.error, &r.meter) {
                    (Some(err), _) => writeln!(s, "{head}: error [{}] {}", err.marker, err.message),
                    (None, Some(m)) => writeln!(
                        s,
                        "{head}: best {} after {} iterations, {} evaluations, {:.2} s, ln kg CO2 {}",
                        two(r.best_fitness),
                        m.iterations_used,
                        m.evaluations_used,
                        m.wall_time_s,
                        two(r.emission.as_ref().and_then(|e| e.ln_kg_co2())),
                    ),
                    (None, None) => writeln!(s, "{head}: no result"),
                }
                .ok();
            }
            Ok(s)
        }
    }
}

fn mean(a: Option<Aggregate>) -> Option<f64> {
    a.map(|a| a.mean)
}

fn median(a: Option<Aggregate>) -> Option<f64> {
    a.map(|a| a.median)
}

pub fn comparison(c: &Comparison, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => json(c),
        Format::Csv => csv_from_rows(
            &[
                "algorithm",
                "runs",
                "failed_runs",
                "mean_best_fitness",
                "median_best_fitness",
                "mean_iterations",
                "median_iterations",
                "mean_ln_kg_co2",
                "median_ln_kg_co2",
                "mean_complexity_log",
                "median_complexity_log",
                "complexity_pct",
                "level",
            ],
            c.rows
                .iter()
                .map(|r| {
                    vec![
                        r.algorithm.clone(),
                        r.runs.to_string(),
                        r.failed_runs.to_string(),
                        num(mean(r.best_fitness)),
                        num(median(r.best_fitness)),
                        num(mean(r.iterations)),
                        num(median(r.iterations)),
                        num(mean(r.ln_kg_co2)),
                        num(median(r.ln_kg_co2)),
                        num(mean(r.complexity_log)),
                        num(median(r.complexity_log)),
                        num(r.complexity_pct),
                        r.level.map(|l| l.to_string()).unwrap_or_default(),
                    ]
                })
                .collect(),
        ),
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "{}({})", c.function.name, c.function.dimension).ok();
            writeln!(
                s,
                "{:<20}{:>6}{:>14}{:>12}{:>14}{:>10}",
                "algorithm", "runs", "best", "iterations", "ln kg CO2", "pct"
            )
            .ok();
            for r in &c.rows {
                writeln!(
                    s,
                    "{:<20}{:>6}{:>14}{:>12}{:>14}{:>10}",
                    r.algorithm,
                    r.runs - r.failed_runs,
                    two(mean(r.best_fitness)),
                    two(mean(r.iterations)),
                    two(mean(r.ln_kg_co2)),
                    two(r.complexity_pct),
                )
                .ok();
            }
            Ok(s)
        }
    }
}

pub fn table(t: &CatalogTable, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => json(t),
        Format::Csv => csv_from_rows(
            &["name", "category", "complexity_pct", "estimated_pct", "estimated_level"],
            t.rows
                .iter()
                .map(|r| {
                    vec![
                        r.name.clone(),
                        r.category.label().to_owned(),
                        format!("{:.2}", r.complexity_pct),
                        format!("{:.2}", r.estimated_pct),
                        r.estimated_level.to_string(),
                    ]
                })
                .collect(),
        ),
        Format::Text => {
            let mut s = String::new();
            for summary in &t.summaries {
                writeln!(
                    s,
                    "{} ({} algorithms; mean {}, min {}, max {})",
                    summary.category,
                    summary.count,
                    two(summary.mean),
                    two(summary.min),
                    two(summary.max)
                )
                .ok();
                for r in t.rows.iter().filter(|r| r.category == summary.category) {
                    writeln!(s, "  {:<40}{:>6.2}", r.name, r.complexity_pct).ok();
                }
            }
            Ok(s)
        }
    }
}
