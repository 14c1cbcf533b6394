//! Frame timing, power amplifier and electronics power, coding cost, and the
//! final per-bit link energies.
//!
//! The per-bit transmit energy charges the startup (amortized over the
//! message and inflated by outage restarts), the one-shot encoding of the
//! message, and per-trial forward-transmit electronics, radiated PA power and
//! feedback reception, all scaled by the expected trial count `phi`:
//!
//! ```text
//! E_T = E_st / ((1-q_x) N_T) + E_enc
//!     + [ (N_t P_etx + A w d^a snr) T_b + N_t P_erx T_fb ] phi
//! E_R = E_st / ((1-q_x) N_R)
//!     + [ E_dec + N_r P_erx T_b + (N_r P_etx + A w d^a snr) T_fb ] phi
//! ```
//!
//! Decoding runs on every received trial, so it sits inside the phi bracket
//! while encoding does not. Feedback reception in `E_T` is charged on the
//! `N_t` transmit branches and feedback transmission in `E_R` on the `N_r`
//! receive branches, mirroring the composed closed forms.

use crate::error::{Error, Result};
use crate::hwcost::OpClass;
use crate::params::{CommProfile, DacModel, HardwareProfile, ProcessingProfile};
use crate::units::SPEED_OF_LIGHT;

use super::arq::{retransmission_stats, PfModel, RetransmissionStats};
use super::ber::{self, papr};
use super::{CodingScheme, Fading, LinkConfig};

/// Traffic direction. The node transmits uplink frames and receives downlink
/// frames; each direction carries its own payload geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Uplink,
    Downlink,
}

/// Transceiver side for electronics power.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TxRx {
    Tx,
    Rx,
}

/// Time on air per information bit of a forward frame:
///
/// ```text
/// T_b = 1/(r R_s) * ( 1/(w b) + H/(w L) + (N_t O_a + O_b)/L )
/// ```
pub fn bit_time_forward(
    link: &LinkConfig,
    coding: &CodingScheme,
    profile: &CommProfile,
    direction: Direction,
) -> f64 {
    let payload = link.payload_bits(direction) as f64;
    let b = link.bits_per_symbol();
    let w = link.mux_gain;
    let overhead =
        (link.n_tx_antennas as u64 * link.acq_overhead_bits + link.other_overhead_bits) as f64;
    1.0 / (coding.rate() * profile.symbol_rate_baud)
        * (1.0 / (w * b) + link.header_bits as f64 / (w * payload) + overhead / payload)
}

/// Time on air of one feedback frame, normalized per forward-payload bit:
/// `T_fb = F / (r w R_s L)` (the rate and payload of the forward direction).
pub fn feedback_time(
    link: &LinkConfig,
    coding: &CodingScheme,
    profile: &CommProfile,
    direction: Direction,
) -> f64 {
    let payload = link.payload_bits(direction) as f64;
    link.feedback_bits as f64
        / (coding.rate() * link.mux_gain * profile.symbol_rate_baud * payload)
}

/// PA back-off ratio: the constellation's peak-to-average ratio times any
/// additional back-off taken when the link budget allows lowering transmit
/// power. Constant-envelope BPSK has ratio 1 at zero extra back-off.
pub fn peak_to_avg_backoff(link: &LinkConfig, profile: &CommProfile) -> f64 {
    papr(link.constellation_size) * profile.extra_backoff
}

/// The link-budget constant `A` tying total PA draw to the SNR target:
/// `sum_j P_PA = A * w * d^alpha * snr` with
/// `A = backoff^beta * N_0 W N_f M_l A_0 / eta_max` and the free-space
/// attenuation `A_0 = (4 pi / lambda)^2 / (G_t G_r)`.
pub fn pa_constant(link: &LinkConfig, profile: &CommProfile) -> f64 {
    let lambda = SPEED_OF_LIGHT / profile.f_c_hz;
    let a0 = (4.0 * std::f64::consts::PI / lambda).powi(2) / (profile.g_t * profile.g_r);
    let noise_power = profile.n0_w_per_hz * profile.bandwidth_hz * profile.noise_figure * profile.link_margin;
    peak_to_avg_backoff(link, profile).powf(profile.beta) * noise_power * a0 / profile.eta_max
}

/// Total PA power over all transmit branches, W.
pub fn pa_power_total(link: &LinkConfig, profile: &CommProfile) -> f64 {
    pa_constant(link, profile)
        * link.mux_gain
        * link.distance_m.powf(link.path_loss_exponent)
        * link.mean_snr
}

/// Power draw of a binary-weighted current-steering DAC:
/// `(beta/2) (V_dd I_unit (2^n - 1) + n C_p f_s V_dd^2)`.
pub fn dac_power(dac: &DacModel) -> f64 {
    let static_term = dac.v_dd_v * dac.i_unit_a * (2f64.powi(dac.n_bits as i32) - 1.0);
    let dynamic_term =
        dac.n_bits as f64 * dac.c_parasitic_f * dac.f_s_hz * dac.v_dd_v * dac.v_dd_v;
    dac.beta_correction / 2.0 * (static_term + dynamic_term)
}

/// Electronics power of one transceiver branch.
///
/// Transmit: DAC, two filters, local oscillator, mixer. Receive: three
/// filters, LNA, local oscillator, mixer, VGA and the receive ADC (the ADC
/// follows the same figure-of-merit law as the sensing one).
pub fn electronics_power(side: TxRx, profile: &CommProfile) -> f64 {
    match side {
        TxRx::Tx => {
            dac_power(&profile.dac) + 2.0 * profile.p_filter_w + profile.p_lo_w + profile.p_mixer_w
        }
        TxRx::Rx => {
            let adc = crate::sensing::adc_power(
                profile.adc_rx.n_bits,
                profile.adc_rx.f_s_hz,
                profile.adc_rx.fom_j_per_conv,
            );
            3.0 * profile.p_filter_w
                + profile.p_lna_rx_w
                + profile.p_lo_w
                + profile.p_mixer_w
                + profile.p_vga_w
                + adc
        }
    }
}

/// Energy per information bit spent running a codec: the message needs
/// `n_codewords` codeword passes, each costing the given operation counts.
pub fn coding_energy_per_bit(
    ops_per_codeword: &[(OpClass, u64)],
    processing: &ProcessingProfile,
    n_bits: f64,
    n_codewords: f64,
) -> Result<f64> {
    if !n_bits.is_finite() || n_bits <= 0.0 {
        return Err(Error::domain("comm.coding_energy_per_bit", "message length must be positive"));
    }
    let cycles_per_codeword: f64 = ops_per_codeword
        .iter()
        .map(|&(op, count)| processing.op_cycle_costs.get(op) as f64 * count as f64)
        .sum();
    Ok(processing.energy_per_cycle_j * cycles_per_codeword * n_codewords / n_bits)
}

/// A frame error rate this close to 1 has numerically saturated (the success
/// probability fell below f64 resolution relative to 1). Capping keeps
/// hopeless links evaluating to astronomically large finite energies instead
/// of erroring out of a sweep; an exact probability-1 model still trips the
/// divergence error in [`retransmission_stats`].
const MAX_FRAME_ERROR_RATE: f64 = 1.0 - 1e-15;

/// Builds the per-trial frame-error model for one direction.
///
/// Fast fading: the fading-averaged BERs feed the frame error rate once and
/// trials are independent. Block fading: the instantaneous frame error rate
/// is evaluated on a Gauss-Laguerre discretization of the Rayleigh power
/// distribution, frozen per attempt.
pub fn link_pf_model(
    link: &LinkConfig,
    coding: &CodingScheme,
    direction: Direction,
) -> Result<PfModel> {
    let payload = link.payload_bits(direction);
    let n_codewords = coding.codewords_per_payload(payload)?;
    let fer_at = |p_bit: f64, p_bin: f64| -> Result<f64> {
        Ok(ber::frame_error_rate(
            link.header_bits,
            coding.codeword_bits,
            coding.correctable_bits,
            n_codewords,
            p_bit,
            p_bin,
        )?
        .min(MAX_FRAME_ERROR_RATE))
    };
    match link.fading {
        Fading::Fast => {
            let p_bit = ber::ber_m_ary(link.mean_snr, link.constellation_size, Fading::Fast)?;
            let p_bin = ber::ber_binary(link.mean_snr, Fading::Fast)?;
            Ok(PfModel::Iid(fer_at(p_bit, p_bin)?))
        }
        Fading::Block => {
            let (nodes, weights) = ber::gauss_laguerre(48);
            let mut dist = Vec::with_capacity(nodes.len());
            let weight_total: f64 = weights.iter().sum();
            for (&u, &w) in nodes.iter().zip(weights.iter()) {
                let gamma = link.mean_snr * u;
                let p_bit = ber::ber_awgn(link.constellation_size, gamma)?;
                let p_bin = ber::ber_awgn(2, gamma)?;
                dist.push((fer_at(p_bit, p_bin)?, w / weight_total));
            }
            Ok(PfModel::Block(dist))
        }
    }
}

/// Per-bit energy of one link direction, split by source. All fields are
/// joules per information bit; `total` is the composed closed form and equals
/// the component sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LinkEnergy {
    /// Startup amortization, `E_st / ((1 - q_x) N)`.
    pub startup: f64,
    /// Encoding (transmit-side, once per message) or decoding (receive-side,
    /// once per trial).
    pub coding: f64,
    /// Forward-transmit electronics across the transmit branches.
    pub electronics_tx: f64,
    /// Forward-receive electronics across the receive branches.
    pub electronics_rx: f64,
    /// Radiated (PA) energy, forward frames on the transmit side and
    /// feedback frames on the receive side.
    pub pa: f64,
    /// Feedback-frame electronics on the opposite chain.
    pub feedback: f64,
    pub total: f64,
}

impl LinkEnergy {
    pub fn component_sum(&self) -> f64 {
        self.startup + self.coding + self.electronics_tx + self.electronics_rx + self.pa + self.feedback
    }
}

/// Average energy per correctly transferred information bit, node to sink.
pub fn energy_tx_per_bit(
    link: &LinkConfig,
    coding: &CodingScheme,
    profile: &HardwareProfile,
    n_tx_bits: u64,
    stats: &RetransmissionStats,
) -> Result<LinkEnergy> {
    if n_tx_bits == 0 {
        return Err(Error::domain("comm.energy_tx_per_bit", "message length must be positive"));
    }
    let comm = &profile.comm;
    let n = n_tx_bits as f64;
    let t_b = bit_time_forward(link, coding, comm, Direction::Uplink);
    let t_fb = feedback_time(link, coding, comm, Direction::Uplink);
    let pa_power = pa_power_total(link, comm);
    let p_etx = electronics_power(TxRx::Tx, comm);
    let p_erx = electronics_power(TxRx::Rx, comm);
    let n_t = link.n_tx_antennas as f64;
    let phi = stats.phi;

    // The whole message is N/k codewords.
    let n_codewords = n / coding.data_bits as f64;
    let encode =
        coding_energy_per_bit(&coding.enc_ops_per_codeword, &profile.processing, n, n_codewords)?;

    let startup = comm.e_startup_j / ((1.0 - stats.q_x) * n);
    let electronics_tx = n_t * p_etx * t_b * phi;
    let pa = pa_power * t_b * phi;
    let feedback = n_t * p_erx * t_fb * phi;
    let total = comm.e_startup_j / ((1.0 - stats.q_x) * n)
        + encode
        + ((n_t * p_etx + pa_power) * t_b + n_t * p_erx * t_fb) * phi;

    Ok(LinkEnergy {
        startup,
        coding: encode,
        electronics_tx,
        electronics_rx: 0.0,
        pa,
        feedback,
        total,
    })
}

/// Average energy per correctly received information bit, sink to node.
pub fn energy_rx_per_bit(
    link: &LinkConfig,
    coding: &CodingScheme,
    profile: &HardwareProfile,
    n_rx_bits: u64,
    stats: &RetransmissionStats,
) -> Result<LinkEnergy> {
    if n_rx_bits == 0 {
        return Err(Error::domain("comm.energy_rx_per_bit", "message length must be positive"));
    }
    let comm = &profile.comm;
    let n = n_rx_bits as f64;
    let t_b = bit_time_forward(link, coding, comm, Direction::Downlink);
    let t_fb = feedback_time(link, coding, comm, Direction::Downlink);
    let pa_power = pa_power_total(link, comm);
    let p_etx = electronics_power(TxRx::Tx, comm);
    let p_erx = electronics_power(TxRx::Rx, comm);
    let n_r = link.n_rx_antennas as f64;
    let phi = stats.phi;

    let n_codewords = n / coding.data_bits as f64;
    let decode_per_pass =
        coding_energy_per_bit(&coding.dec_ops_per_codeword, &profile.processing, n, n_codewords)?;

    let startup = comm.e_startup_j / ((1.0 - stats.q_x) * n);
    let decode = decode_per_pass * phi;
    let electronics_rx = n_r * p_erx * t_b * phi;
    let pa = pa_power * t_fb * phi;
    let feedback = n_r * p_etx * t_fb * phi;
    let total = comm.e_startup_j / ((1.0 - stats.q_x) * n)
        + (decode_per_pass + n_r * p_erx * t_b + (n_r * p_etx + pa_power) * t_fb) * phi;

    Ok(LinkEnergy {
        startup,
        coding: decode,
        electronics_tx: 0.0,
        electronics_rx,
        pa,
        feedback,
        total,
    })
}

/// Both link directions of a scenario, with their retransmission statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkEvaluation {
    pub tx: LinkEnergy,
    pub rx: LinkEnergy,
    pub stats_up: RetransmissionStats,
    pub stats_down: RetransmissionStats,
}

/// Evaluates both directions. A direction with zero traffic contributes zero
/// energy (its statistics are still reported).
pub fn link_energies(
    link: &LinkConfig,
    coding: &CodingScheme,
    profile: &HardwareProfile,
    n_tx_bits: u64,
    n_rx_bits: u64,
) -> Result<LinkEvaluation> {
    coding.validate()?;
    let stats_up = retransmission_stats(&link_pf_model(link, coding, Direction::Uplink)?, link.max_trials)?;
    let stats_down =
        retransmission_stats(&link_pf_model(link, coding, Direction::Downlink)?, link.max_trials)?;
    let tx = if n_tx_bits > 0 {
        energy_tx_per_bit(link, coding, profile, n_tx_bits, &stats_up)?
    } else {
        LinkEnergy::default()
    };
    let rx = if n_rx_bits > 0 {
        energy_rx_per_bit(link, coding, profile, n_rx_bits, &stats_down)?
    } else {
        LinkEnergy::default()
    };
    Ok(LinkEvaluation { tx, rx, stats_up, stats_down })
}
