//! Communication-layer model: frame timing, power amplifier and electronics
//! power, coding cost, error-rate and retransmission statistics, and the
//! per-bit link energies.
//!
//! The node transmits forward frames over a truncated-ARQ link (up to
//! `max_trials` attempts per frame, then an outage and a retry one coherence
//! time later) and receives a short feedback frame after every trial.

mod arq;
mod ber;
mod energy;

pub use arq::{
    analytic_check_stats, retransmission_stats, simulate_retransmissions, EmpiricalStats,
    Estimate, PfModel, RetransmissionStats,
};
pub use ber::{
    ber_awgn, ber_binary, ber_m_ary, ber_rayleigh_avg, frame_error_rate, gauss_laguerre, papr,
    q_function,
};
pub use energy::{
    bit_time_forward, coding_energy_per_bit, dac_power, electronics_power, energy_rx_per_bit,
    energy_tx_per_bit, feedback_time, link_energies, link_pf_model, pa_constant, pa_power_total,
    peak_to_avg_backoff, Direction, LinkEnergy, LinkEvaluation, TxRx,
};

use serde_json::Value;

use crate::error::{Error, Result};
use crate::hwcost::OpClass;
use crate::params::Section;
use crate::units;

/// Channel-coherence regime for the per-trial frame error rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fading {
    /// Every transmission trial sees an independent channel draw.
    Fast,
    /// One channel draw is frozen for all trials of an attempt; the node
    /// sleeps one coherence time after an outage, so each attempt redraws.
    Block,
}

impl Fading {
    fn as_str(self) -> &'static str {
        match self {
            Fading::Fast => "fast",
            Fading::Block => "block",
        }
    }
}

/// Modulation, frame structure, channel statistics and ARQ policy of the
/// node-to-sink link.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkConfig {
    pub n_tx_antennas: u32,
    pub n_rx_antennas: u32,
    /// Spatial multiplexing gain of the MIMO modulation.
    pub mux_gain: f64,
    /// Constellation size M (2 for BPSK, square QAM otherwise).
    pub constellation_size: u32,
    pub header_bits: u64,
    /// Acquisition overhead per transceiver branch, bits.
    pub acq_overhead_bits: u64,
    /// Estimation/synchronization overhead, bits.
    pub other_overhead_bits: u64,
    /// Feedback frame length, bits.
    pub feedback_bits: u64,
    /// Payload bits per frame, node to sink.
    pub payload_bits_up: u64,
    /// Payload bits per frame, sink to node.
    pub payload_bits_down: u64,
    pub distance_m: f64,
    pub path_loss_exponent: f64,
    /// Mean SNR at the decision stage, linear (file field `mean_snr_db`).
    pub mean_snr: f64,
    /// Trials per attempt before declaring an outage (x >= 1).
    pub max_trials: u32,
    pub fading: Fading,
}

impl Default for LinkConfig {
    /// Short-range defaults: single antenna, BPSK, IEEE-802.15.4-style frame
    /// geometry (2-byte header, 127-byte payload, 4 + 1 bytes of overhead,
    /// 5-byte feedback), 10 m at path-loss exponent 3.2 and 25 dB mean SNR.
    fn default() -> Self {
        LinkConfig {
            n_tx_antennas: 1,
            n_rx_antennas: 1,
            mux_gain: 1.0,
            constellation_size: 2,
            header_bits: 16,
            acq_overhead_bits: 32,
            other_overhead_bits: 8,
            feedback_bits: 40,
            payload_bits_up: 1016,
            payload_bits_down: 1016,
            distance_m: 10.0,
            path_loss_exponent: 3.2,
            mean_snr: units::db_to_linear(25.0),
            max_trials: 3,
            fading: Fading::Fast,
        }
    }
}

impl LinkConfig {
    /// Bits per complex symbol, log2(M).
    pub fn bits_per_symbol(&self) -> f64 {
        (self.constellation_size as f64).log2()
    }

    pub fn payload_bits(&self, direction: Direction) -> u64 {
        match direction {
            Direction::Uplink => self.payload_bits_up,
            Direction::Downlink => self.payload_bits_down,
        }
    }

    pub fn validate(&self, warnings: &mut Vec<String>) -> Result<()> {
        if self.constellation_size < 2 || !self.constellation_size.is_power_of_two() {
            return Err(Error::validation(
                "link.constellation_size",
                format!("must be a power of two >= 2, got {}", self.constellation_size),
            ));
        }
        if self.max_trials < 1 {
            return Err(Error::validation("link.max_trials", "must be >= 1"));
        }
        if !self.mean_snr.is_finite() || self.mean_snr <= 0.0 {
            return Err(Error::validation("link.mean_snr_db", "mean SNR must be positive"));
        }
        if self.mux_gain <= 0.0 {
            return Err(Error::validation("link.mux_gain", "must be positive"));
        }
        if self.n_tx_antennas == 0 || self.n_rx_antennas == 0 {
            return Err(Error::validation("link.n_tx_antennas", "antenna counts must be >= 1"));
        }
        if self.distance_m <= 0.0 {
            return Err(Error::validation("link.distance_m", "must be positive"));
        }
        if self.payload_bits_up == 0 || self.payload_bits_down == 0 {
            return Err(Error::validation("link.payload_bits_up", "payloads must be positive"));
        }
        if self.path_loss_exponent < 2.0 {
            warnings.push(format!(
                "link.path_loss_exponent = {} below the free-space exponent 2",
                self.path_loss_exponent
            ));
        }
        Ok(())
    }

    pub(crate) fn from_value(value: Option<&Value>, warnings: &mut Vec<String>) -> Result<LinkConfig> {
        let s = Section::new("link", value)?;
        s.allow_keys(&[
            "n_tx_antennas",
            "n_rx_antennas",
            "mux_gain",
            "constellation_size",
            "header_bits",
            "acq_overhead_bits",
            "other_overhead_bits",
            "feedback_bits",
            "payload_bits_up",
            "payload_bits_down",
            "distance_m",
            "path_loss_exponent",
            "mean_snr_db",
            "max_trials",
            "fading",
        ])?;
        let d = LinkConfig::default();
        let fading = match s.string("fading", d.fading.as_str())?.as_str() {
            "fast" => Fading::Fast,
            "block" => Fading::Block,
            other => {
                return Err(Error::validation(
                    "link.fading",
                    format!("expected 'fast' or 'block', found '{other}'"),
                ))
            }
        };
        let link = LinkConfig {
            n_tx_antennas: s.integer("n_tx_antennas", d.n_tx_antennas as u64)? as u32,
            n_rx_antennas: s.integer("n_rx_antennas", d.n_rx_antennas as u64)? as u32,
            mux_gain: s.number("mux_gain", d.mux_gain)?,
            constellation_size: s.integer("constellation_size", d.constellation_size as u64)? as u32,
            header_bits: s.integer("header_bits", d.header_bits)?,
            acq_overhead_bits: s.integer("acq_overhead_bits", d.acq_overhead_bits)?,
            other_overhead_bits: s.integer("other_overhead_bits", d.other_overhead_bits)?,
            feedback_bits: s.integer("feedback_bits", d.feedback_bits)?,
            payload_bits_up: s.integer("payload_bits_up", d.payload_bits_up)?,
            payload_bits_down: s.integer("payload_bits_down", d.payload_bits_down)?,
            distance_m: s.quantity("distance_m", units::Unit::Metre, d.distance_m)?,
            path_loss_exponent: s.number("path_loss_exponent", d.path_loss_exponent)?,
            mean_snr: s.quantity_db("mean_snr_db", d.mean_snr)?,
            max_trials: s.integer("max_trials", d.max_trials as u64)? as u32,
            fading,
        };
        link.validate(warnings)?;
        Ok(link)
    }

    pub(crate) fn to_value(&self) -> Value {
        serde_json::json!({
            "n_tx_antennas": self.n_tx_antennas,
            "n_rx_antennas": self.n_rx_antennas,
            "mux_gain": self.mux_gain,
            "constellation_size": self.constellation_size,
            "header_bits": self.header_bits,
            "acq_overhead_bits": self.acq_overhead_bits,
            "other_overhead_bits": self.other_overhead_bits,
            "feedback_bits": self.feedback_bits,
            "payload_bits_up": self.payload_bits_up,
            "payload_bits_down": self.payload_bits_down,
            "distance_m": self.distance_m,
            "path_loss_exponent": self.path_loss_exponent,
            "mean_snr_db": units::linear_to_db(self.mean_snr),
            "max_trials": self.max_trials,
            "fading": self.fading.as_str(),
        })
    }
}

/// Block code applied to frame payloads (a BCH code by default).
///
/// The default per-codeword operation counts model an LFSR encoder
/// (`n * (n - k)` MAC-equivalent shifts) and a syndrome plus Berlekamp-Massey
/// decoder (`2nt + 2t^2` multiplications and `t^2` additions); both are
/// overridable per profile since real codec costs vary widely.
#[derive(Debug, Clone, PartialEq)]
pub struct CodingScheme {
    /// Codeword length n, bits.
    pub codeword_bits: u64,
    /// Information bits k per codeword; code rate r = k/n.
    pub data_bits: u64,
    /// Correctable bit errors t per codeword.
    pub correctable_bits: u64,
    /// Encoder operation counts per codeword.
    pub enc_ops_per_codeword: Vec<(OpClass, u64)>,
    /// Decoder operation counts per codeword.
    pub dec_ops_per_codeword: Vec<(OpClass, u64)>,
}

impl Default for CodingScheme {
    fn default() -> Self {
        // BCH(127, 99) corrects t = 4; eight codewords tile the default
        // 127-byte payload exactly.
        CodingScheme::bch(127, 4).expect("default BCH parameters are valid")
    }
}

impl CodingScheme {
    /// Builds a BCH scheme of codeword length `n = 2^m - 1` correcting `t`
    /// errors, with `k = n - m*t` information bits.
    pub fn bch(codeword_bits: u64, correctable_bits: u64) -> Result<CodingScheme> {
        if codeword_bits < 3 || !(codeword_bits + 1).is_power_of_two() {
            return Err(Error::config(
                "coding.codeword_bits",
                format!("BCH codeword length must be 2^m - 1, got {codeword_bits}"),
            ));
        }
        let m = (codeword_bits + 1).trailing_zeros() as u64;
        let parity = m * correctable_bits;
        if parity >= codeword_bits {
            return Err(Error::config(
                "coding.correctable_t",
                format!(
                    "t = {correctable_bits} needs {parity} parity bits, leaving no data in n = {codeword_bits}"
                ),
            ));
        }
        let data_bits = codeword_bits - parity;
        Ok(CodingScheme::with_data_bits(codeword_bits, data_bits, correctable_bits))
    }

    /// Builds a scheme with an explicit data length (code rate k/n) and the
    /// default operation-count model. Operation lists are kept in canonical
    /// class order with zero entries dropped.
    pub fn with_data_bits(codeword_bits: u64, data_bits: u64, correctable_bits: u64) -> CodingScheme {
        let n = codeword_bits;
        let t = correctable_bits;
        let keep = |ops: Vec<(OpClass, u64)>| -> Vec<(OpClass, u64)> {
            ops.into_iter().filter(|&(_, count)| count > 0).collect()
        };
        let enc = keep(vec![(OpClass::Mac, n * n.saturating_sub(data_bits))]);
        let dec = keep(vec![(OpClass::Add, t * t), (OpClass::Mul, 2 * n * t + 2 * t * t)]);
        CodingScheme {
            codeword_bits,
            data_bits,
            correctable_bits,
            enc_ops_per_codeword: enc,
            dec_ops_per_codeword: dec,
        }
    }

    /// Code rate r = k/n.
    pub fn rate(&self) -> f64 {
        self.data_bits as f64 / self.codeword_bits as f64
    }

    /// Codewords per payload; the payload must tile exactly.
    pub fn codewords_per_payload(&self, payload_bits: u64) -> Result<u64> {
        if !payload_bits.is_multiple_of(self.codeword_bits) {
            return Err(Error::config(
                "coding.codeword_bits",
                format!(
                    "payload of {payload_bits} bits is not a whole number of {}-bit codewords",
                    self.codeword_bits
                ),
            ));
        }
        Ok(payload_bits / self.codeword_bits)
    }

    pub fn validate(&self) -> Result<()> {
        if self.codeword_bits == 0 {
            return Err(Error::validation("coding.codeword_bits", "must be positive"));
        }
        if self.data_bits == 0 || self.data_bits > self.codeword_bits {
            return Err(Error::validation(
                "coding.data_bits",
                format!(
                    "must be in 1..={}, got {} (code rate must be in (0, 1])",
                    self.codeword_bits, self.data_bits
                ),
            ));
        }
        Ok(())
    }

    pub(crate) fn from_value(value: Option<&Value>) -> Result<CodingScheme> {
        let s = Section::new("coding", value)?;
        s.allow_keys(&[
            "codeword_bits",
            "data_bits",
            "correctable_t",
            "enc_op_counts",
            "dec_op_counts",
        ])?;
        let d = CodingScheme::default();
        let codeword_bits = s.integer("codeword_bits", d.codeword_bits)?;
        let correctable_bits = s.integer("correctable_t", d.correctable_bits)?;
        // data_bits derives from the BCH geometry unless pinned, so sweeping
        // t moves the code rate with it.
        let mut scheme = if s.has("data_bits") {
            CodingScheme::with_data_bits(
                codeword_bits,
                s.integer("data_bits", 0)?,
                correctable_bits,
            )
        } else {
            CodingScheme::bch(codeword_bits, correctable_bits)?
        };
        for (key, slot) in [
            ("enc_op_counts", &mut scheme.enc_ops_per_codeword),
            ("dec_op_counts", &mut scheme.dec_ops_per_codeword),
        ] {
            if let Some(counts) = s.child(key) {
                let cs = Section::new(&s.field(key), Some(counts))?;
                cs.allow_keys(&["mac", "add", "mul", "div", "cmp", "exp", "log"])?;
                let mut ops = Vec::new();
                for op in OpClass::ALL {
                    let count = cs.integer(op.key(), 0)?;
                    if count > 0 {
                        ops.push((op, count));
                    }
                }
                *slot = ops;
            }
        }
        scheme.validate()?;
        Ok(scheme)
    }

    pub(crate) fn to_value(&self) -> Value {
        let ops_to_value = |ops: &[(OpClass, u64)]| {
            let mut map = serde_json::Map::new();
            for (op, count) in ops {
                map.insert(op.key().to_string(), Value::from(*count));
            }
            Value::Object(map)
        };
        serde_json::json!({
            "codeword_bits": self.codeword_bits,
            "data_bits": self.data_bits,
            "correctable_t": self.correctable_bits,
            "enc_op_counts": ops_to_value(&self.enc_ops_per_codeword),
            "dec_op_counts": ops_to_value(&self.dec_ops_per_codeword),
        })
    }
}
