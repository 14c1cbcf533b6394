//! Parameter sweeps over scenario/profile axes with deterministic CSV output.
//!
//! An axis is a dotted path (see [`crate::paths`]); its first segment routes
//! the override to the profile document (`sensing`, `processing`, `comm`) or
//! to the scenario document (everything else). Rows are evaluated
//! concurrently and emitted in axis order; floats are rendered with nine
//! significant digits so identical inputs give byte-identical files.

use rayon::prelude::*;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::node::{node_energy, NodeReport, Scenario};
use crate::params::{profile_from_value, profile_to_value};
use crate::paths;

/// One sweep request: an axis, its values and the metric columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: String,
    pub values: Vec<f64>,
    pub metrics: Vec<String>,
}

/// Value spacing of a generated range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RangeScale {
    Linear,
    Log,
}

/// Expands `{from, to, steps, scale}` into explicit axis values.
pub fn expand_range(from: f64, to: f64, steps: usize, scale: RangeScale) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::config("sweep.steps", "ranges need at least 2 steps"));
    }
    match scale {
        RangeScale::Linear => Ok((0..steps)
            .map(|i| from + (to - from) * i as f64 / (steps - 1) as f64)
            .collect()),
        RangeScale::Log => {
            if from <= 0.0 || to <= 0.0 {
                return Err(Error::config(
                    "sweep.range",
                    "log-scaled ranges need positive endpoints",
                ));
            }
            let (lf, lt) = (from.ln(), to.ln());
            Ok((0..steps)
                .map(|i| (lf + (lt - lf) * i as f64 / (steps - 1) as f64).exp())
                .collect())
        }
    }
}

/// Extractor of one metric from an evaluation report.
pub type MetricFn = fn(&NodeReport) -> f64;

/// The metric columns a sweep can request, each mapping to exactly one field
/// of the evaluation report.
pub const METRICS: &[(&str, MetricFn)] = &[
    ("total_energy_j", |r| r.breakdown.total_j),
    ("sensing_energy_j", |r| r.breakdown.sensing.total_j),
    ("processing_energy_j", |r| r.breakdown.processing.total_j),
    ("tx_energy_j", |r| r.breakdown.tx_j),
    ("rx_energy_j", |r| r.breakdown.rx_j),
    ("e_t_per_bit_j", |r| r.link.tx.total),
    ("e_r_per_bit_j", |r| r.link.rx.total),
    ("lifetime_s", |r| r.lifetime_s),
    ("phi", |r| r.link.stats_up.phi),
    ("q_x", |r| r.link.stats_up.q_x),
];

pub fn metric_names() -> Vec<&'static str> {
    METRICS.iter().map(|(name, _)| *name).collect()
}

fn metric_fn(name: &str) -> Result<MetricFn> {
    METRICS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, f)| *f)
        .ok_or_else(|| {
            Error::config(
                "sweep.metrics",
                format!("unknown metric '{}'; valid metrics: {}", name, metric_names().join(", ")),
            )
        })
}

/// Nine-significant-digit float rendering; byte-stable and locale-free.
pub fn format_float(v: f64) -> String {
    format!("{v:.8e}")
}

/// Routes an axis or override path to the document it addresses.
pub fn route_path<'a>(
    path: &str,
    scenario_doc: &'a mut Value,
    profile_doc: &'a mut Value,
) -> &'a mut Value {
    match path.split('.').next().unwrap_or("") {
        "sensing" | "processing" | "comm" => profile_doc,
        _ => scenario_doc,
    }
}

/// Applies `--set`-style overrides to the pair of documents.
pub fn apply_overrides(
    scenario_doc: &mut Value,
    profile_doc: &mut Value,
    overrides: &[(String, Value)],
) -> Result<()> {
    for (path, value) in overrides {
        let doc = route_path(path, scenario_doc, profile_doc);
        paths::set_path(doc, path, value.clone())?;
    }
    Ok(())
}

fn evaluate_docs(scenario_doc: &Value, profile_doc: &Value) -> Result<(NodeReport, Vec<String>)> {
    let profile = profile_from_value(profile_doc)?;
    let (scenario, mut warnings) = Scenario::from_value(scenario_doc)?;
    let report = node_energy(&scenario, &profile)?;
    warnings.extend(report.warnings.clone());
    Ok((report, warnings))
}

/// Evaluates one scenario/profile document pair.
pub fn evaluate(scenario_doc: &Value, profile_doc: &Value) -> Result<(NodeReport, Vec<String>)> {
    evaluate_docs(scenario_doc, profile_doc)
}

/// Runs a sweep and renders the CSV: header `axis,<metrics...>`, one row per
/// axis value in request order.
pub fn run_sweep(scenario_doc: &Value, profile_doc: &Value, spec: &SweepSpec) -> Result<String> {
    if spec.values.is_empty() {
        return Err(Error::config("sweep.values", "no axis values given"));
    }
    let extractors: Vec<(String, MetricFn)> = spec
        .metrics
        .iter()
        .map(|name| Ok((name.clone(), metric_fn(name)?)))
        .collect::<Result<_>>()?;

    // The axis must resolve to a numeric leaf of the default-merged view.
    let merged = {
        let mut scenario = scenario_doc.clone();
        let mut profile = profile_doc.clone();
        // Materialize defaults so unset-but-valid axes resolve.
        let full_profile = profile_to_value(&profile_from_value(&profile)?);
        let (parsed_scenario, _) = Scenario::from_value(&scenario)?;
        let full_scenario = parsed_scenario.to_value();
        scenario = full_scenario;
        profile = full_profile;
        (scenario, profile)
    };
    let target = match spec.axis.split('.').next().unwrap_or("") {
        "sensing" | "processing" | "comm" => &merged.1,
        _ => &merged.0,
    };
    match paths::get_path(target, &spec.axis) {
        Some(Value::Number(_)) => {}
        Some(other) => {
            return Err(Error::config(
                "sweep.axis",
                format!("axis '{}' resolves to non-numeric value {other}", spec.axis),
            ))
        }
        None => {
            return Err(Error::config(
                "sweep.axis",
                format!("axis '{}' does not resolve to a field", spec.axis),
            ))
        }
    }

    let rows: Vec<Result<String>> = spec
        .values
        .par_iter()
        .map(|&value| {
            let mut scenario = scenario_doc.clone();
            let mut profile = profile_doc.clone();
            {
                let doc = route_path(&spec.axis, &mut scenario, &mut profile);
                paths::set_path(doc, &spec.axis, number_value(value))?;
            }
            let (report, _warnings) = evaluate_docs(&scenario, &profile)?;
            let mut row = format_float(value);
            for (_, extract) in &extractors {
                row.push(',');
                row.push_str(&format_float(extract(&report)));
            }
            Ok(row)
        })
        .collect();

    let mut csv = String::new();
    csv.push_str(&spec.axis);
    for (name, _) in &extractors {
        csv.push(',');
        csv.push_str(name);
    }
    csv.push('\n');
    for row in rows {
        csv.push_str(&row?);
        csv.push('\n');
    }
    Ok(csv)
}

/// Preserves integer-valued floats as JSON integers so integer fields
/// (antenna counts, code parameters) accept swept values.
fn number_value(v: f64) -> Value {
    if v.fract() == 0.0 && v.abs() < 9.0e15 && v >= 0.0 {
        Value::from(v as u64)
    } else {
        serde_json::Number::from_f64(v).map(Value::Number).unwrap_or(Value::Null)
    }
}
