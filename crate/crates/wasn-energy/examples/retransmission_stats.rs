//! Truncated-ARQ statistics: analytic values against Monte Carlo, and the
//! fast-versus-block fading gap.
//!
//! ```bash
//! cargo run --example retransmission_stats
//! ```

use wasn_energy::comm::{retransmission_stats, simulate_retransmissions, PfModel};

fn main() {
    let episodes = 200_000;
    let seed = 7;

    println!("per-trial frame error rate 0.2, varying trial budget x:");
    println!(
        "{:>3} {:>12} {:>12} {:>12} {:>14} {:>14}",
        "x", "q_x", "outages", "tau_x", "phi(analytic)", "phi(mc)"
    );
    for x in [1u32, 2, 3, 5, 8] {
        let model = PfModel::Iid(0.2);
        let analytic = retransmission_stats(&model, x).unwrap();
        let mc = simulate_retransmissions(&model, x, episodes, seed).unwrap();
        println!(
            "{x:>3} {:>12.3e} {:>12.4} {:>12.4} {:>14.6} {:>14.6}",
            analytic.q_x,
            analytic.mean_outages,
            analytic.mean_trials_given_success,
            analytic.phi,
            mc.phi.value
        );
    }
    println!("(fast fading: phi stays 1/(1-p) = 1.25 no matter the budget)\n");

    // Block fading freezes the channel for a whole attempt. With the same
    // mean error rate, outages become more likely and phi grows.
    let dist = vec![(0.05, 0.5), (0.35, 0.5)];
    let mean_p: f64 = dist.iter().map(|&(p, w)| w * p).sum();
    println!("two-point block-fading channel {{0.05, 0.35}} vs fast fading at the same mean {mean_p:.2}:");
    println!("{:>3} {:>14} {:>14} {:>14} {:>14}", "x", "q_fast", "q_block", "phi_fast", "phi_block");
    for x in [1u32, 2, 3, 5] {
        let fast = retransmission_stats(&PfModel::Iid(mean_p), x).unwrap();
        let block = retransmission_stats(&PfModel::Block(dist.clone()), x).unwrap();
        println!(
            "{x:>3} {:>14.6e} {:>14.6e} {:>14.6} {:>14.6}",
            fast.q_x, block.q_x, fast.phi, block.phi
        );
    }

    // The simulation carries standard errors and exports as CSV.
    let model = PfModel::Block(dist);
    let mc = simulate_retransmissions(&model, 3, episodes, seed).unwrap();
    println!(
        "\nblock fading, x = 3, {episodes} episodes: phi = {:.4} +- {:.4}",
        mc.phi.value, mc.phi.std_error
    );
    println!("\nCSV export:\n{}", mc.to_csv());
}
