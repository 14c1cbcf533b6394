//! Whole-node view: per-layer energy of one duty cycle and the battery
//! lifetime it implies.
//!
//! ```bash
//! cargo run --example node_lifetime
//! ```

use wasn_energy::node::{node_energy, Scenario};
use wasn_energy::params::default_profile;

fn main() {
    let profile = default_profile();
    let scenario = Scenario::default();
    let report = node_energy(&scenario, &profile).unwrap();
    let b = &report.breakdown;

    println!("default node, one duty cycle ({} s window):", scenario.delta_s);
    for (name, value) in [
        ("sensing", b.sensing.total_j),
        ("processing", b.processing.total_j),
        ("transmit", b.tx_j),
        ("receive", b.rx_j),
    ] {
        println!("  {name:<11} {value:>12.4e} J  ({:>5.1}%)", 100.0 * value / b.total_j);
    }
    println!("  {:<11} {:>12.4e} J", "total", b.total_j);
    println!(
        "\nbattery stock: {} x {} J, duty cycle {}",
        scenario.n_batteries, scenario.battery_capacity_j, scenario.duty_cycle
    );
    println!(
        "lifetime: {:.0} s = {:.1} days",
        report.lifetime_s,
        report.lifetime_s / 86_400.0
    );

    println!("\nduty-cycle sweep (lifetime scales exactly with 1/duty):");
    for duty in [0.5, 0.2, 0.1, 0.05, 0.01] {
        let scenario = Scenario { duty_cycle: duty, ..Scenario::default() };
        let report = node_energy(&scenario, &profile).unwrap();
        println!("  duty {duty:>5}: {:>8.1} days", report.lifetime_s / 86_400.0);
    }

    println!("\ntraffic sweep (startup amortizes over larger messages):");
    for n_tx in [4_000u64, 43_904, 439_040] {
        let scenario = Scenario { n_tx_bits: n_tx, ..Scenario::default() };
        let report = node_energy(&scenario, &profile).unwrap();
        println!(
            "  N_T {n_tx:>7}: E_T = {:.4e} J/bit, lifetime {:>7.1} days",
            report.link.tx.total,
            report.lifetime_s / 86_400.0
        );
    }
}
