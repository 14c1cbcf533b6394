//! Truncated-ARQ retransmission statistics, analytic and simulated.
//!
//! A frame is attempted up to `x` times; if all trials of an attempt fail the
//! transmitter declares an outage, sleeps one coherence time and starts a new
//! attempt. With per-trial frame error probability `p`:
//!
//! * outages per delivery follow a geometric law with parameter
//!   `q_x` (the probability an attempt fails entirely),
//! * the trial count inside the successful attempt is the truncated geometric
//!   `tau_x`, and
//! * the expected total trials charged per delivered frame is
//!   `phi = x * mean_outages + mean(tau_x)`.
//!
//! Fast fading draws the channel independently per trial, so `q_x = p^x` and
//! `phi = 1/(1-p)` regardless of `x`. Block fading freezes one draw of `p`
//! per attempt, giving `q_x = E[p^x]` and
//! `phi = E[(1-p^x)/(1-p)] / (1 - E[p^x])`, which Jensen's inequality makes
//! at least as large as the fast-fading value.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Distribution of the per-trial frame error probability.
#[derive(Debug, Clone, PartialEq)]
pub enum PfModel {
    /// Every trial fails independently with the same probability
    /// (fast fading).
    Iid(f64),
    /// One draw from a discrete distribution `(p, weight)` is frozen per
    /// attempt (block fading); weights must sum to 1.
    Block(Vec<(f64, f64)>),
}

impl PfModel {
    fn validate(&self) -> Result<()> {
        let check_p = |p: f64| -> Result<()> {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::domain(
                    "comm.retransmission_stats",
                    format!("frame error probability {p} outside [0, 1]"),
                ));
            }
            Ok(())
        };
        match self {
            PfModel::Iid(p) => check_p(*p),
            PfModel::Block(dist) => {
                if dist.is_empty() {
                    return Err(Error::domain(
                        "comm.retransmission_stats",
                        "empty frame-error distribution",
                    ));
                }
                let mut total = 0.0;
                for &(p, w) in dist {
                    check_p(p)?;
                    if w < 0.0 {
                        return Err(Error::domain(
                            "comm.retransmission_stats",
                            format!("negative weight {w}"),
                        ));
                    }
                    total += w;
                }
                if (total - 1.0).abs() > 1e-9 {
                    return Err(Error::domain(
                        "comm.retransmission_stats",
                        format!("weights sum to {total}, expected 1"),
                    ));
                }
                Ok(())
            }
        }
    }

    /// E[p^x] over the distribution; the attempt-outage probability.
    fn outage_probability(&self, x: u32) -> f64 {
        match self {
            PfModel::Iid(p) => p.powi(x as i32),
            PfModel::Block(dist) => dist.iter().map(|&(p, w)| w * p.powi(x as i32)).sum(),
        }
    }

    /// E[ sum_{t=1..x} t (1-p) p^(t-1) ]: the unconditional mean trial index
    /// of an in-attempt success.
    fn success_trial_mass(&self, x: u32) -> f64 {
        let single = |p: f64| -> f64 {
            let mut sum = 0.0;
            let mut pw = 1.0; // p^(t-1)
            for t in 1..=x {
                sum += t as f64 * (1.0 - p) * pw;
                pw *= p;
            }
            sum
        };
        match self {
            PfModel::Iid(p) => single(*p),
            PfModel::Block(dist) => dist.iter().map(|&(p, w)| w * single(p)).sum(),
        }
    }

    /// Like `success_trial_mass` but with t^2, for analytic variances.
    pub(crate) fn success_trial_sq_mass(&self, x: u32) -> f64 {
        let single = |p: f64| -> f64 {
            let mut sum = 0.0;
            let mut pw = 1.0;
            for t in 1..=x {
                sum += (t as f64).powi(2) * (1.0 - p) * pw;
                pw *= p;
            }
            sum
        };
        match self {
            PfModel::Iid(p) => single(*p),
            PfModel::Block(dist) => dist.iter().map(|&(p, w)| w * single(p)).sum(),
        }
    }
}

/// Analytic retransmission statistics per delivered frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetransmissionStats {
    /// Probability that one attempt (x trials) fails entirely.
    pub q_x: f64,
    /// Mean outages before delivery, `q_x / (1 - q_x)`.
    pub mean_outages: f64,
    /// Mean trials within the successful attempt, in `[1, x]`.
    pub mean_trials_given_success: f64,
    /// Expected trials charged per delivered frame,
    /// `x * mean_outages + mean_trials_given_success`.
    pub phi: f64,
}

/// Computes the analytic statistics for a frame-error model and trial budget.
/// A link that can never succeed (`q_x = 1`) is a divergence error.
pub fn retransmission_stats(model: &PfModel, max_trials: u32) -> Result<RetransmissionStats> {
    if max_trials < 1 {
        return Err(Error::domain("comm.retransmission_stats", "max_trials must be >= 1"));
    }
    model.validate()?;
    let x = max_trials;
    let q_x = model.outage_probability(x);
    if q_x >= 1.0 {
        return Err(Error::divergence(
            "comm.retransmission_stats",
            "the link never succeeds (outage probability 1)",
        ));
    }
    let mean_outages = q_x / (1.0 - q_x);
    let mean_trials_given_success = model.success_trial_mass(x) / (1.0 - q_x);
    Ok(RetransmissionStats {
        q_x,
        mean_outages,
        mean_trials_given_success,
        phi: x as f64 * mean_outages + mean_trials_given_success,
    })
}

/// One estimated quantity with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

/// Empirical retransmission statistics from simulated ARQ episodes.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalStats {
    pub q_x: Estimate,
    pub mean_outages: Estimate,
    pub mean_trials_given_success: Estimate,
    pub phi: Estimate,
    pub episodes: u64,
    pub seed: u64,
}

impl EmpiricalStats {
    /// CSV export: one row per statistic with columns
    /// `statistic,estimate,std_error,episodes,seed`. Floats use nine
    /// significant digits, so equal runs serialize byte-identically.
    pub fn to_csv(&self) -> String {
        let mut csv = String::from("statistic,estimate,std_error,episodes,seed\n");
        for (name, est) in [
            ("q_x", &self.q_x),
            ("mean_outages", &self.mean_outages),
            ("mean_trials_given_success", &self.mean_trials_given_success),
            ("phi", &self.phi),
        ] {
            csv.push_str(&format!(
                "{name},{:.8e},{:.8e},{},{}\n",
                est.value, est.std_error, self.episodes, self.seed
            ));
        }
        csv
    }
}

const STREAMS: u64 = 64;
// An attempt cap catches models that can essentially never succeed instead of
// spinning forever.
const MAX_ATTEMPTS_PER_EPISODE: u64 = 100_000_000;

#[derive(Default, Clone, Copy)]
struct StreamSums {
    episodes: f64,
    outages: f64,
    outages_sq: f64,
    trials_success: f64,
    trials_success_sq: f64,
    total_trials: f64,
    total_trials_sq: f64,
    attempts: f64,
    failed_attempts: f64,
}

impl StreamSums {
    fn merge(mut self, other: StreamSums) -> StreamSums {
        self.episodes += other.episodes;
        self.outages += other.outages;
        self.outages_sq += other.outages_sq;
        self.trials_success += other.trials_success;
        self.trials_success_sq += other.trials_success_sq;
        self.total_trials += other.total_trials;
        self.total_trials_sq += other.total_trials_sq;
        self.attempts += other.attempts;
        self.failed_attempts += other.failed_attempts;
        self
    }
}

/// Simulates truncated-ARQ delivery episodes and returns empirical statistics
/// with standard errors. Episodes are split over fixed worker streams seeded
/// `seed + stream_index`, so the result is deterministic for a given seed
/// regardless of thread scheduling.
pub fn simulate_retransmissions(
    model: &PfModel,
    max_trials: u32,
    episodes: u64,
    seed: u64,
) -> Result<EmpiricalStats> {
    if episodes < 1 {
        return Err(Error::domain("comm.simulate_retransmissions", "episodes must be >= 1"));
    }
    model.validate()?;
    if model.outage_probability(max_trials) >= 1.0 {
        return Err(Error::divergence(
            "comm.simulate_retransmissions",
            "the link never succeeds (outage probability 1)",
        ));
    }
    // Cumulative weights for block-model sampling.
    let block_cdf: Option<Vec<(f64, f64)>> = match model {
        PfModel::Iid(_) => None,
        PfModel::Block(dist) => {
            let mut acc = 0.0;
            Some(
                dist.iter()
                    .map(|&(p, w)| {
                        acc += w;
                        (acc, p)
                    })
                    .collect(),
            )
        }
    };

    let per_stream = episodes / STREAMS;
    let remainder = episodes % STREAMS;
    let sums = (0..STREAMS)
        .into_par_iter()
        .map(|stream| {
            let stream_episodes = per_stream + u64::from(stream < remainder);
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(stream));
            let mut sums = StreamSums::default();
            for _ in 0..stream_episodes {
                let (outages, tau_x, attempts) =
                    run_episode(model, &block_cdf, max_trials, &mut rng);
                let total = max_trials as f64 * outages as f64 + tau_x as f64;
                sums.episodes += 1.0;
                sums.outages += outages as f64;
                sums.outages_sq += (outages as f64).powi(2);
                sums.trials_success += tau_x as f64;
                sums.trials_success_sq += (tau_x as f64).powi(2);
                sums.total_trials += total;
                sums.total_trials_sq += total * total;
                sums.attempts += attempts as f64;
                sums.failed_attempts += outages as f64;
            }
            sums
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(StreamSums::default(), StreamSums::merge);

    let n = sums.episodes;
    let mean_se = |sum: f64, sum_sq: f64| -> Estimate {
        let mean = sum / n;
        let var = (sum_sq / n - mean * mean).max(0.0);
        Estimate { value: mean, std_error: (var / n).sqrt() }
    };
    let q_hat = sums.failed_attempts / sums.attempts;
    Ok(EmpiricalStats {
        q_x: Estimate {
            value: q_hat,
            std_error: (q_hat * (1.0 - q_hat) / sums.attempts).sqrt(),
        },
        mean_outages: mean_se(sums.outages, sums.outages_sq),
        mean_trials_given_success: mean_se(sums.trials_success, sums.trials_success_sq),
        phi: mean_se(sums.total_trials, sums.total_trials_sq),
        episodes,
        seed,
    })
}

/// Runs one delivery episode; returns (outages, trials in the successful
/// attempt, total attempts).
fn run_episode(
    model: &PfModel,
    block_cdf: &Option<Vec<(f64, f64)>>,
    max_trials: u32,
    rng: &mut ChaCha8Rng,
) -> (u64, u32, u64) {
    let mut outages = 0u64;
    let mut attempts = 0u64;
    loop {
        attempts += 1;
        let p = match (model, block_cdf) {
            (PfModel::Iid(p), _) => *p,
            (_, Some(cdf)) => {
                let u: f64 = rng.random();
                cdf.iter()
                    .find(|&&(acc, _)| u <= acc)
                    .map(|&(_, p)| p)
                    .unwrap_or(cdf.last().expect("non-empty").1)
            }
            _ => unreachable!("block model always has a cdf"),
        };
        for trial in 1..=max_trials {
            if rng.random::<f64>() >= p {
                return (outages, trial, attempts);
            }
        }
        outages += 1;
        if attempts >= MAX_ATTEMPTS_PER_EPISODE {
            // Effectively a dead link; report what we have rather than spin.
            return (outages, max_trials, attempts);
        }
    }
}

/// Analytic values of the four statistics paired with the standard errors a
/// simulation of `episodes` episodes would have, derived from the exact
/// distributions. Comparing a Monte Carlo run against these avoids empirical
/// variance estimates that degenerate for rare events.
pub fn analytic_check_stats(
    model: &PfModel,
    max_trials: u32,
    episodes: u64,
) -> Result<EmpiricalStats> {
    let stats = retransmission_stats(model, max_trials)?;
    let x = max_trials;
    let n = episodes as f64;
    let q = stats.q_x;

    // Outages are geometric (support 0, 1, ...): var = q/(1-q)^2.
    let var_outages = q / (1.0 - q) / (1.0 - q);
    // tau_x: E[t^2 | success] - E[t | success]^2.
    let e_t2 = model.success_trial_sq_mass(x) / (1.0 - q);
    let var_tau = (e_t2 - stats.mean_trials_given_success.powi(2)).max(0.0);
    // Total trials: x*outages + tau_x with independent terms.
    let var_total = (x as f64).powi(2) * var_outages + var_tau;
    // q is estimated over all attempts; expected attempts per episode is
    // 1/(1-q).
    let expected_attempts = n / (1.0 - q);
    let se_q = (q * (1.0 - q) / expected_attempts).sqrt();

    Ok(EmpiricalStats {
        q_x: Estimate { value: stats.q_x, std_error: se_q },
        mean_outages: Estimate {
            value: stats.mean_outages,
            std_error: (var_outages / n).sqrt(),
        },
        mean_trials_given_success: Estimate {
            value: stats.mean_trials_given_success,
            std_error: (var_tau / n).sqrt(),
        },
        phi: Estimate { value: stats.phi, std_error: (var_total / n).sqrt() },
        episodes,
        seed: 0,
    })
}
