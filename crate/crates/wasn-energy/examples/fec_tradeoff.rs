//! Forward error correction strength: code overhead versus retransmissions.
//!
//! A stronger BCH code spends more frame bits on parity (longer airtime per
//! information bit) but fails less often. At low SNR an intermediate t wins.
//!
//! ```bash
//! cargo run --example fec_tradeoff
//! ```

use wasn_energy::comm::{link_energies, CodingScheme, LinkConfig};
use wasn_energy::params::default_profile;
use wasn_energy::units::db_to_linear;

fn main() {
    let profile = default_profile();

    for snr_db in [12.0, 15.0, 20.0, 25.0] {
        let link = LinkConfig { mean_snr: db_to_linear(snr_db), ..LinkConfig::default() };
        println!("mean SNR {snr_db} dB:");
        println!(
            "{:>3} {:>7} {:>9} {:>12} {:>14}",
            "t", "rate", "phi", "q_x", "E_T [J/bit]"
        );
        let mut best: Option<(u64, f64)> = None;
        for t in [0u64, 1, 2, 4, 6, 8] {
            let coding = CodingScheme::bch(127, t).unwrap();
            let eval = link_energies(&link, &coding, &profile, 43_904, 1024).unwrap();
            println!(
                "{t:>3} {:>7.4} {:>9.4} {:>12.3e} {:>14.4e}",
                coding.rate(),
                eval.stats_up.phi,
                eval.stats_up.q_x,
                eval.tx.total
            );
            if best.is_none_or(|(_, e)| eval.tx.total < e) {
                best = Some((t, eval.tx.total));
            }
        }
        let (t, e) = best.unwrap();
        println!("  -> best: t = {t} at {e:.4e} J/bit\n");
    }
}
