//! Analytical energy and lifetime model for battery-powered smart wireless
//! acoustic sensor nodes.
//!
//! A node is modeled in three layers, each returning a closed-form energy for
//! one duty cycle:
//!
//! * [`sensing`] — microphone, low-noise amplifier and ADC of the acoustic
//!   front end;
//! * [`hwcost`] + [`dsp`] + [`nn`] — an architecture cost model (energy per
//!   operation class and per memory access/bit stored) driven by operation
//!   counts of the MFCC feature-extraction chain and common neural-network
//!   layers;
//! * [`comm`] — a truncated-ARQ radio link: frame timing, PA and electronics
//!   power, channel-coding cost, error rates and retransmission statistics.
//!
//! [`node`] composes the layers into a per-cycle breakdown and a battery
//! lifetime; [`sweep`] evaluates scenarios across parameter ranges into
//! deterministic CSV; [`validate`] holds the self-check oracles (instrumented
//! op-counting references and Monte Carlo ARQ simulation).
//!
//! ```no_run
//! use wasn_energy::node::{node_energy, Scenario};
//! use wasn_energy::params::default_profile;
//!
//! let report = node_energy(&Scenario::default(), &default_profile()).unwrap();
//! println!("one duty cycle: {:.3e} J", report.breakdown.total_j);
//! println!("lifetime: {:.1} days", report.lifetime_s / 86_400.0);
//! ```

pub mod cli;
pub mod comm;
pub mod dsp;
pub mod error;
pub mod hwcost;
pub mod nn;
pub mod node;
pub mod params;
pub mod paths;
pub mod sensing;
pub mod sweep;
pub mod units;
pub mod validate;

pub use error::{Error, Result};
