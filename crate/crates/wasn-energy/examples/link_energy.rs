//! Per-bit link energy versus distance: where the budget shifts from
//! electronics to radiated power.
//!
//! ```bash
//! cargo run --example link_energy
//! ```

use wasn_energy::comm::{link_energies, CodingScheme, LinkConfig};
use wasn_energy::params::default_profile;

fn main() {
    let profile = default_profile();
    let coding = CodingScheme::default();
    let n_tx = 43_904;
    let n_rx = 1024;

    println!(
        "{:>7} {:>13} {:>13} {:>13} {:>13} {:>13}",
        "d [m]", "E_T [J/bit]", "startup", "electronics", "pa", "feedback"
    );
    for distance in [1.0, 5.0, 10.0, 20.0, 50.0, 100.0] {
        let link = LinkConfig { distance_m: distance, ..LinkConfig::default() };
        let eval = link_energies(&link, &coding, &profile, n_tx, n_rx).unwrap();
        let tx = &eval.tx;
        println!(
            "{distance:>7} {:>13.3e} {:>13.3e} {:>13.3e} {:>13.3e} {:>13.3e}",
            tx.total, tx.startup, tx.electronics_tx, tx.pa, tx.feedback
        );
    }

    let link = LinkConfig::default();
    let eval = link_energies(&link, &coding, &profile, n_tx, n_rx).unwrap();
    println!("\nat the default 10 m:");
    println!("  E_T = {:.3e} J/bit   (phi = {:.4}, q_x = {:.3e})",
        eval.tx.total, eval.stats_up.phi, eval.stats_up.q_x);
    println!("  E_R = {:.3e} J/bit   (phi = {:.4}, q_x = {:.3e})",
        eval.rx.total, eval.stats_down.phi, eval.stats_down.q_x);

    // Higher-order constellations pack more bits per symbol but demand more
    // radiated power for the same error target.
    println!("\nconstellation comparison at 10 m, 25 dB:");
    for m in [2u32, 4, 16] {
        let link = LinkConfig { constellation_size: m, ..LinkConfig::default() };
        let eval = link_energies(&link, &coding, &profile, n_tx, n_rx).unwrap();
        println!(
            "  M = {m:<3} E_T = {:.3e} J/bit  (phi = {:.4})",
            eval.tx.total, eval.stats_up.phi
        );
    }
}
