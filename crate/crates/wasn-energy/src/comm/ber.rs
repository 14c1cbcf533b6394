//! Bit-error-rate closed forms and the frame error rate of a block-coded
//! frame.
//!
//! Supported modulations: BPSK (M = 2) and square M-QAM (M = 4, 16, 64, ...)
//! with the standard Gray-coded approximation. Under fast fading the BER is
//! averaged over a Rayleigh power distribution: in closed form for BPSK,
//! by Gauss-Laguerre quadrature otherwise. Under block fading the
//! instantaneous AWGN BER is used and the channel distribution is handled at
//! the retransmission-statistics level.

use crate::error::{Error, Result};

use super::Fading;

/// Gaussian tail probability Q(x).
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Peak-to-average power ratio of the constellation,
/// `xi = 3 (sqrt(M) - 1) / (sqrt(M) + 1)`, defined as 1 for constant-envelope
/// BPSK (the quoted formula degenerates to 0 there).
pub fn papr(constellation_size: u32) -> f64 {
    if constellation_size <= 2 {
        return 1.0;
    }
    let root_m = (constellation_size as f64).sqrt();
    3.0 * (root_m - 1.0) / (root_m + 1.0)
}

fn check_constellation(m: u32) -> Result<()> {
    // BPSK or square QAM (4, 16, 64, 256, ...).
    let square_qam = m >= 4 && m.is_power_of_two() && m.trailing_zeros().is_multiple_of(2);
    if m == 2 || square_qam {
        Ok(())
    } else {
        Err(Error::config(
            "link.constellation_size",
            format!("unsupported constellation M = {m}; use 2 (BPSK) or square QAM (4, 16, 64, ...)"),
        ))
    }
}

/// Instantaneous AWGN bit error rate at SNR `gamma`.
///
/// BPSK: `Q(sqrt(2 gamma))`. Square M-QAM (Gray-coded approximation):
/// `(4/b) (1 - 1/sqrt(M)) Q(sqrt(3 b gamma / (M - 1)))` with `b = log2 M`.
pub fn ber_awgn(constellation_size: u32, gamma: f64) -> Result<f64> {
    check_constellation(constellation_size)?;
    if gamma < 0.0 {
        return Err(Error::domain("comm.ber_awgn", "SNR must be non-negative"));
    }
    if constellation_size == 2 {
        return Ok(q_function((2.0 * gamma).sqrt()));
    }
    let m = constellation_size as f64;
    let b = m.log2();
    let coeff = 4.0 / b * (1.0 - 1.0 / m.sqrt());
    // The Gray-code approximation can exceed the 1/2 coin-flip ceiling at
    // very low SNR; clamp to keep it a probability.
    Ok((coeff * q_function((3.0 * b * gamma / (m - 1.0)).sqrt())).min(0.5))
}

/// Nodes and weights of the n-point Gauss-Laguerre rule
/// (`integral_0^inf f(u) e^-u du ~= sum w_i f(u_i)`).
pub fn gauss_laguerre(n: usize) -> (Vec<f64>, Vec<f64>) {
    // Newton iteration on the Laguerre recurrence; initial guesses follow the
    // classic gaulag stencil.
    let nf = n as f64;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let mut z = 0.0;
    for i in 0..n {
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => z + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = i as f64 - 1.0;
                z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - nodes[i - 2])
            }
        };
        for _ in 0..100 {
            // Evaluate L_n(z) and L_{n-1}(z).
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0 - z) * p2 - jf * p3) / (jf + 1.0);
            }
            let pp = nf * (p1 - p2) / z;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-14 * z.max(1.0) {
                break;
            }
        }
        nodes[i] = z;
        // w_i = z / ((n+1) L_{n+1}(z))^2.
        let mut p_prev = 0.0;
        let mut p_curr = 1.0;
        for j in 0..=n {
            let p3 = p_prev;
            p_prev = p_curr;
            let jf = j as f64;
            p_curr = ((2.0 * jf + 1.0 - z) * p_prev - jf * p3) / (jf + 1.0);
        }
        weights[i] = z / ((nf + 1.0) * p_curr).powi(2);
    }
    (nodes, weights)
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-based initial guess, then Newton on the Legendre
        // recurrence.
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
            }
            pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Rayleigh-averaged Gaussian tail `E[Q(sqrt(c * gamma))]` for exponentially
/// distributed `gamma` with mean `gamma_bar`, via the angle-domain form
/// `(1/pi) * integral_0^(pi/2) sin^2 / (sin^2 + c*gamma_bar/2) d(theta)`.
/// The integrand is smooth and bounded, so fixed-order Gauss-Legendre is
/// accurate at every SNR (the density-domain integrand has a sqrt kink at
/// zero that defeats half-line quadrature).
fn rayleigh_q_average(c: f64, gamma_bar: f64) -> f64 {
    let half = c * gamma_bar / 2.0;
    let (nodes, weights) = gauss_legendre(64);
    let scale = std::f64::consts::FRAC_PI_4; // half-width of [0, pi/2]
    let mut sum = 0.0;
    for (&x, &w) in nodes.iter().zip(weights.iter()) {
        let theta = scale * (x + 1.0);
        let s2 = theta.sin().powi(2);
        sum += w * s2 / (s2 + half);
    }
    sum * scale / std::f64::consts::PI
}

/// Fast-fading bit error rate: the AWGN BER averaged over the Rayleigh power
/// density with mean `gamma_bar`. BPSK has the closed form
/// `0.5 (1 - sqrt(gamma_bar / (1 + gamma_bar)))`; QAM is averaged by
/// quadrature of its Gaussian-tail form.
pub fn ber_rayleigh_avg(constellation_size: u32, gamma_bar: f64) -> Result<f64> {
    check_constellation(constellation_size)?;
    if !gamma_bar.is_finite() || gamma_bar <= 0.0 {
        return Err(Error::domain("comm.ber_rayleigh_avg", "mean SNR must be positive"));
    }
    if constellation_size == 2 {
        return Ok(0.5 * (1.0 - (gamma_bar / (1.0 + gamma_bar)).sqrt()));
    }
    let m = constellation_size as f64;
    let b = m.log2();
    let coeff = 4.0 / b * (1.0 - 1.0 / m.sqrt());
    Ok(coeff * rayleigh_q_average(3.0 * b / (m - 1.0), gamma_bar))
}

/// Payload bit error rate of the M-ary modulation at `gamma`.
///
/// For fast fading `gamma` is the mean SNR and the result is the fading
/// average; for block fading `gamma` is the instantaneous SNR of the current
/// coherence block.
pub fn ber_m_ary(gamma: f64, constellation_size: u32, fading: Fading) -> Result<f64> {
    match fading {
        Fading::Fast => ber_rayleigh_avg(constellation_size, gamma),
        Fading::Block => ber_awgn(constellation_size, gamma),
    }
}

/// Header (binary modulation) bit error rate; BPSK at the same SNR.
pub fn ber_binary(gamma: f64, fading: Fading) -> Result<f64> {
    ber_m_ary(gamma, 2, fading)
}

/// Frame error rate of a header plus `n_codewords` block-coded codewords:
///
/// ```text
/// P_f = 1 - (1 - P_bin)^H * [ sum_{j=0}^{t} C(n,j) (1-P_b)^(n-j) P_b^j ]^n_c
/// ```
pub fn frame_error_rate(
    header_bits: u64,
    codeword_bits: u64,
    correctable_bits: u64,
    n_codewords: u64,
    p_bit: f64,
    p_bit_binary: f64,
) -> Result<f64> {
    for (name, p) in [("payload", p_bit), ("header", p_bit_binary)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain(
                "comm.frame_error_rate",
                format!("{name} bit error rate {p} outside [0, 1]"),
            ));
        }
    }
    let header_ok = (1.0 - p_bit_binary).powi(
        i32::try_from(header_bits).map_err(|_| Error::domain("comm.frame_error_rate", "header too long"))?,
    );
    let codeword_ok = binomial_tail_ok(codeword_bits, correctable_bits, p_bit);
    Ok(1.0 - header_ok * codeword_ok.powi(n_codewords as i32))
}

/// Probability that a codeword of `n` bits has at most `t` errors:
/// `sum_{j=0}^{t} C(n,j) (1-p)^(n-j) p^j`, accumulated incrementally.
fn binomial_tail_ok(n: u64, t: u64, p: f64) -> f64 {
    if p <= 0.0 {
        return 1.0;
    }
    if p >= 1.0 {
        return if t >= n { 1.0 } else { 0.0 };
    }
    let t = t.min(n);
    let q = 1.0 - p;
    // term_j = C(n,j) q^(n-j) p^j; term_0 = q^n.
    let mut term = q.powi(n as i32);
    let mut sum = term;
    for j in 0..t {
        term *= (n - j) as f64 / (j + 1) as f64 * (p / q);
        sum += term;
    }
    sum.min(1.0)
}
