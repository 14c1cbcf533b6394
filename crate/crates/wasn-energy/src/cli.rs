//! Command-line front end: scenario evaluation, parameter sweeps, lifetime
//! estimation and the self-validation oracles.
//!
//! Exit codes: 0 success, 1 configuration error (one machine-parsable
//! `kind:field:message` line on stderr), 2 validation failure.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use crate::dsp;
use crate::error::{Error, Result};
use crate::hwcost::{energy_of, OpClass};
use crate::node::NodeReport;
use crate::params::profile_from_value;
use crate::paths;
use crate::sweep::{self, format_float, RangeScale, SweepSpec};
use crate::validate;

#[derive(Parser, Debug)]
#[command(
    name = "wasn-energy",
    version,
    about = "Energy and lifetime model for smart wireless acoustic sensor nodes"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct CommonArgs {
    /// Scenario file (JSON); built-in defaults when omitted.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Hardware profile file (JSON); built-in defaults when omitted.
    #[arg(long)]
    profile: Option<PathBuf>,
    /// Dotted-path override, e.g. `link.distance_m=20` or
    /// `comm.p_lo_w="22.5 mW"`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one scenario: per-layer energy breakdown and lifetime.
    Evaluate {
        #[command(flatten)]
        common: CommonArgs,
        /// Write the breakdown as CSV (`section,name,value` rows).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep one parameter axis and emit metric columns as CSV.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Dotted parameter path to sweep, e.g. `coding.correctable_t`.
        #[arg(long)]
        sweep_axis: String,
        /// Explicit comma-separated axis values, e.g. `0,1,2,4,8`.
        #[arg(long, conflicts_with = "sweep_range")]
        sweep_values: Option<String>,
        /// Range `from:to:steps[:log]`, e.g. `0:30:31` or `1:100:13:log`.
        #[arg(long)]
        sweep_range: Option<String>,
        /// Comma-separated metric columns; all metrics when omitted.
        #[arg(long)]
        metrics: Option<String>,
        /// Output CSV path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the battery lifetime of a scenario.
    Lifetime {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the self-validation oracles (instrumented op counts and the
    /// Monte Carlo retransmission grid).
    Validate {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000)]
        episodes: u64,
        /// Negative control: bias the analytic frame error probability; any
        /// nonzero value must make the grid checks fail.
        #[arg(long, default_value_t = 0.0)]
        perturb: f64,
        /// Write the report to a file as well as stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses arguments and runs; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version printing itself.
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("{err}");
            1
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Evaluate { common, out } => cmd_evaluate(&common, out.as_deref()),
        Command::Sweep { common, sweep_axis, sweep_values, sweep_range, metrics, out } => {
            cmd_sweep(&common, &sweep_axis, sweep_values, sweep_range, metrics, out.as_deref())
        }
        Command::Lifetime { common } => cmd_lifetime(&common),
        Command::Validate { seed, episodes, perturb, out } => {
            cmd_validate(seed, episodes, perturb, out.as_deref())
        }
    }
}

fn load_json(path: Option<&Path>, what: &str) -> Result<Value> {
    match path {
        None => Ok(serde_json::json!({})),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::parse(format!("{what}:{}", path.display()), e.to_string()))?;
            serde_json::from_str(&text)
                .map_err(|e| Error::parse(format!("{what}:{}", path.display()), e.to_string()))
        }
    }
}

/// Loads the scenario/profile documents and applies `--set` overrides.
fn load_docs(common: &CommonArgs) -> Result<(Value, Value)> {
    let mut scenario = load_json(common.scenario.as_deref(), "scenario")?;
    let mut profile = load_json(common.profile.as_deref(), "profile")?;
    let overrides: Vec<(String, Value)> = common
        .set
        .iter()
        .map(|raw| paths::parse_assignment(raw))
        .collect::<Result<_>>()?;
    sweep::apply_overrides(&mut scenario, &mut profile, &overrides)?;
    Ok((scenario, profile))
}

fn print_warnings(warnings: &[String]) {
    for warning in warnings {
        eprintln!("warning: {warning}");
    }
}

fn cmd_evaluate(common: &CommonArgs, out: Option<&Path>) -> Result<i32> {
    let (scenario_doc, profile_doc) = load_docs(common)?;
    let (report, warnings) = sweep::evaluate(&scenario_doc, &profile_doc)?;
    print_warnings(&warnings);
    print!("{}", breakdown_table(&report));
    if let Some(path) = out {
        let csv = breakdown_csv(&report, &scenario_doc, &profile_doc)?;
        std::fs::write(path, csv)
            .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
    }
    Ok(0)
}

/// Per-cycle rows of the breakdown: (section, name, joules).
fn breakdown_rows(report: &NodeReport) -> Vec<(&'static str, &'static str, f64)> {
    let b = &report.breakdown;
    let tx_bits = if report.link.tx.total > 0.0 { b.tx_j / report.link.tx.total } else { 0.0 };
    let rx_bits = if report.link.rx.total > 0.0 { b.rx_j / report.link.rx.total } else { 0.0 };
    vec![
        ("sensing", "microphone", b.sensing.e_mic_j),
        ("sensing", "lna", b.sensing.e_lna_j),
        ("sensing", "adc", b.sensing.e_adc_j),
        ("sensing", "total", b.sensing.total_j),
        ("processing", "operations", b.processing.e_ops_j),
        ("processing", "memory_access", b.processing.e_mem_access_j),
        ("processing", "memory_leak", b.processing.e_mem_leak_j),
        ("processing", "total", b.processing.total_j),
        ("tx", "startup", report.link.tx.startup * tx_bits),
        ("tx", "encoding", report.link.tx.coding * tx_bits),
        ("tx", "electronics", report.link.tx.electronics_tx * tx_bits),
        ("tx", "pa", report.link.tx.pa * tx_bits),
        ("tx", "feedback_rx", report.link.tx.feedback * tx_bits),
        ("tx", "total", b.tx_j),
        ("rx", "startup", report.link.rx.startup * rx_bits),
        ("rx", "decoding", report.link.rx.coding * rx_bits),
        ("rx", "electronics", report.link.rx.electronics_rx * rx_bits),
        ("rx", "pa", report.link.rx.pa * rx_bits),
        ("rx", "feedback_tx", report.link.rx.feedback * rx_bits),
        ("rx", "total", b.rx_j),
    ]
}

fn breakdown_table(report: &NodeReport) -> String {
    let b = &report.breakdown;
    let mut out = String::new();
    out.push_str(&format!("{:<12} {:<14} {:>16} {:>8}\n", "layer", "component", "energy [J]", "share"));
    for (section, name, value) in breakdown_rows(report) {
        let share = if b.total_j > 0.0 { 100.0 * value / b.total_j } else { 0.0 };
        out.push_str(&format!(
            "{section:<12} {name:<14} {:>16} {share:>7.2}%\n",
            format_float(value)
        ));
    }
    out.push_str(&format!("{:<12} {:<14} {:>16} {:>8}\n", "total", "", format_float(b.total_j), "100.00%"));
    out.push_str(&format!(
        "\nE_T = {} J/bit (phi = {}, q_x = {})\n",
        format_float(report.link.tx.total),
        format_float(report.link.stats_up.phi),
        format_float(report.link.stats_up.q_x),
    ));
    out.push_str(&format!(
        "E_R = {} J/bit (phi = {}, q_x = {})\n",
        format_float(report.link.rx.total),
        format_float(report.link.stats_down.phi),
        format_float(report.link.stats_down.q_x),
    ));
    out.push_str(&format!("\nlifetime: {}\n", format_lifetime(report.lifetime_s)));
    out
}

/// Long-format CSV: layer rows (per-cycle J), per-bit link rows, statistics,
/// lifetime, and one row per pipeline block count and energy.
fn breakdown_csv(report: &NodeReport, scenario_doc: &Value, profile_doc: &Value) -> Result<String> {
    let mut csv = String::from("section,name,value\n");
    for (section, name, value) in breakdown_rows(report) {
        csv.push_str(&format!("layer,{section}.{name},{}\n", format_float(value)));
    }
    csv.push_str(&format!("layer,total,{}\n", format_float(report.breakdown.total_j)));
    for (name, value) in [
        ("tx.e_t_per_bit_j", report.link.tx.total),
        ("rx.e_r_per_bit_j", report.link.rx.total),
        ("tx.phi", report.link.stats_up.phi),
        ("tx.q_x", report.link.stats_up.q_x),
        ("rx.phi", report.link.stats_down.phi),
        ("rx.q_x", report.link.stats_down.q_x),
        ("lifetime_s", report.lifetime_s),
    ] {
        csv.push_str(&format!("link,{name},{}\n", format_float(value)));
    }

    // Per-block cost dump.
    let profile = profile_from_value(profile_doc)?;
    let (scenario, _) = crate::node::Scenario::from_value(scenario_doc)?;
    let blocks = dsp::pipeline_block_reports(
        &scenario.pipeline,
        scenario.delta_s,
        profile.sensing.f_s_mic_hz,
        &profile.processing,
    )?;
    for block in &blocks {
        for op in OpClass::ALL {
            let count = block.ops.get(op);
            if count > 0 {
                csv.push_str(&format!("block,{}.ops.{},{count}\n", block.label, op.key()));
            }
        }
        csv.push_str(&format!("block,{}.accesses,{}\n", block.label, block.accesses_total()));
        csv.push_str(&format!("block,{}.stored_bits,{}\n", block.label, block.stored_total()));
        let energy = energy_of(block, &profile.processing, scenario.delta_s)?;
        csv.push_str(&format!("block,{}.energy_j,{}\n", block.label, format_float(energy.total_j)));
    }
    Ok(csv)
}

fn parse_sweep_values(raw: &str) -> Result<Vec<f64>> {
    raw.split(',')
        .map(|item| {
            item.trim()
                .parse::<f64>()
                .map_err(|_| Error::config("sweep.values", format!("'{item}' is not a number")))
        })
        .collect()
}

fn parse_sweep_range(raw: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = raw.split(':').collect();
    if !(3..=4).contains(&parts.len()) {
        return Err(Error::config(
            "sweep.range",
            format!("expected from:to:steps[:log], got '{raw}'"),
        ));
    }
    let from: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| Error::config("sweep.range", format!("bad start '{}'", parts[0])))?;
    let to: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| Error::config("sweep.range", format!("bad end '{}'", parts[1])))?;
    let steps: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| Error::config("sweep.range", format!("bad step count '{}'", parts[2])))?;
    let scale = match parts.get(3).map(|s| s.trim()) {
        None | Some("linear") => RangeScale::Linear,
        Some("log") => RangeScale::Log,
        Some(other) => {
            return Err(Error::config("sweep.range", format!("unknown scale '{other}'")))
        }
    };
    sweep::expand_range(from, to, steps, scale)
}

fn cmd_sweep(
    common: &CommonArgs,
    axis: &str,
    values: Option<String>,
    range: Option<String>,
    metrics: Option<String>,
    out: Option<&Path>,
) -> Result<i32> {
    let (scenario_doc, profile_doc) = load_docs(common)?;
    let values = match (values, range) {
        (Some(v), None) => parse_sweep_values(&v)?,
        (None, Some(r)) => parse_sweep_range(&r)?,
        (None, None) => {
            return Err(Error::config(
                "sweep",
                "one of --sweep-values or --sweep-range is required",
            ))
        }
        (Some(_), Some(_)) => unreachable!("clap forbids both"),
    };
    let metrics = match metrics {
        Some(raw) => raw.split(',').map(|m| m.trim().to_string()).collect(),
        None => sweep::metric_names().iter().map(|s| s.to_string()).collect(),
    };
    let spec = SweepSpec { axis: axis.to_string(), values, metrics };
    let csv = sweep::run_sweep(&scenario_doc, &profile_doc, &spec)?;
    match out {
        Some(path) => std::fs::write(path, csv)
            .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?,
        None => print!("{csv}"),
    }
    Ok(0)
}

fn cmd_lifetime(common: &CommonArgs) -> Result<i32> {
    let (scenario_doc, profile_doc) = load_docs(common)?;
    let (report, warnings) = sweep::evaluate(&scenario_doc, &profile_doc)?;
    print_warnings(&warnings);
    println!("{}", format_lifetime(report.lifetime_s));
    Ok(0)
}

fn cmd_validate(seed: u64, episodes: u64, perturb: f64, out: Option<&Path>) -> Result<i32> {
    let report = validate::run_all(seed, episodes, perturb)?;
    let text = report.render();
    print!("{text}");
    if let Some(path) = out {
        std::fs::write(path, &text)
            .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
    }
    Ok(if report.all_passed() { 0 } else { 2 })
}

/// Seconds with convenience day/year annotations for long spans.
pub fn format_lifetime(seconds: f64) -> String {
    const DAY: f64 = 86_400.0;
    const YEAR: f64 = 365.25 * DAY;
    if seconds >= YEAR {
        format!("{seconds:.3} s ({:.2} days, {:.3} years)", seconds / DAY, seconds / YEAR)
    } else if seconds >= DAY {
        format!("{seconds:.3} s ({:.2} days)", seconds / DAY)
    } else {
        format!("{seconds:.3} s")
    }
}
