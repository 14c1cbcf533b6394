//! Acoustic front-end energy: microphone, LNA and ADC over one measurement
//! window.
//!
//! The LNA bias current is set by the input-referred noise target through the
//! noise efficiency factor; the ADC follows the figure-of-merit law
//! `P = 2^bits * f_s * FOM`. The ADC bandwidth entering the LNA current is
//! taken as the Nyquist bandwidth `f_s/2` (the only value derivable from the
//! profile parameters).

use crate::error::{Error, Result};
use crate::params::{MicKind, SensingProfile};
use crate::units::{BOLTZMANN, ELEMENTARY_CHARGE};

/// Per-component front-end energy for one measurement window.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SensingEnergy {
    pub e_mic_j: f64,
    pub e_lna_j: f64,
    pub e_adc_j: f64,
    pub total_j: f64,
}

/// Microphone energy for a window of `delta_s` seconds: zero for a passive
/// microphone, bias power times the window otherwise.
pub fn mic_energy(profile: &SensingProfile, delta_s: f64) -> f64 {
    match profile.mic_kind {
        MicKind::Passive => 0.0,
        MicKind::Active => profile.p_mic_active_w * delta_s,
    }
}

/// Average LNA bias current implied by the noise target:
///
/// ```text
/// I = (pi * u_T * 4kT * W_adc / 2) * (NEF / v_noise_rms)^2,   u_T = kT/q_e
/// ```
///
/// with `W_adc = f_s/2`.
pub fn lna_current(profile: &SensingProfile) -> Result<f64> {
    if profile.v_noise_in_rms_v <= 0.0 {
        return Err(Error::domain(
            "sensing.lna_current",
            "input noise voltage must be positive",
        ));
    }
    let kt = BOLTZMANN * profile.temperature_k;
    let thermal_voltage = kt / ELEMENTARY_CHARGE;
    let adc_bandwidth = profile.f_s_mic_hz / 2.0;
    let noise_ratio = profile.nef / profile.v_noise_in_rms_v;
    Ok(std::f64::consts::PI * thermal_voltage * 4.0 * kt * adc_bandwidth / 2.0
        * noise_ratio
        * noise_ratio)
}

/// ADC power from its figure of merit: `P = 2^n * f_s * FOM`.
pub fn adc_power(n_bits: u32, f_s_hz: f64, fom_j_per_conv: f64) -> f64 {
    2f64.powi(n_bits as i32) * f_s_hz * fom_j_per_conv
}

/// Front-end energy breakdown for one window of `delta_s` seconds.
pub fn sensing_energy(profile: &SensingProfile, delta_s: f64) -> Result<SensingEnergy> {
    if delta_s < 0.0 {
        return Err(Error::domain("sensing.sensing_energy", "window length must be >= 0"));
    }
    let e_mic_j = mic_energy(profile, delta_s);
    let e_lna_j = lna_current(profile)? * profile.v_dd_lna_v * delta_s;
    let e_adc_j =
        adc_power(profile.n_adc_bits, profile.f_s_mic_hz, profile.adc_fom_j_per_conv) * delta_s;
    Ok(SensingEnergy {
        e_mic_j,
        e_lna_j,
        e_adc_j,
        total_j: e_mic_j + e_lna_j + e_adc_j,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::default_profile;

    #[test]
    fn passive_mic_draws_nothing() {
        let mut p = default_profile().sensing;
        p.mic_kind = MicKind::Passive;
        assert_eq!(mic_energy(&p, 1.0), 0.0);
    }

    #[test]
    fn active_mic_energy() {
        let p = default_profile().sensing; // 10 mW active
        assert!((mic_energy(&p, 1.0) - 10e-3).abs() < 1e-15);
        assert_eq!(mic_energy(&p, 0.0), 0.0);
    }

    #[test]
    fn lna_current_matches_hand_evaluation() {
        // Defaults: T = 290 K, NEF = 6, f_s = 16 kHz (W_adc = 8 kHz),
        // active-mic noise voltage 100 uV. Expanding the closed form with
        // k = 1.380649e-23 and q_e = 1.602176634e-19 gives ~1.81e-8 A.
        let p = default_profile().sensing;
        let i = lna_current(&p).unwrap();
        assert!((i - 1.81e-8).abs() < 0.01e-8, "I = {i}");
    }

    #[test]
    fn lna_current_scales_quadratically_with_nef() {
        let p = default_profile().sensing;
        let mut doubled = p.clone();
        doubled.nef *= 2.0;
        let ratio = lna_current(&doubled).unwrap() / lna_current(&p).unwrap();
        assert!((ratio - 4.0).abs() < 1e-12);
    }

    #[test]
    fn lna_current_scales_linearly_with_bandwidth() {
        let p = default_profile().sensing;
        let mut doubled = p.clone();
        doubled.f_s_mic_hz *= 2.0;
        let ratio = lna_current(&doubled).unwrap() / lna_current(&p).unwrap();
        assert!((ratio - 2.0).abs() < 1e-12);
    }

    #[test]
    fn lna_rejects_nonpositive_noise_voltage() {
        let mut p = default_profile().sensing;
        p.v_noise_in_rms_v = 0.0;
        assert!(lna_current(&p).is_err());
    }

    #[test]
    fn adc_power_at_defaults() {
        // 2^12 * 16 kHz * 500 fJ = 32.768 uW.
        let p = adc_power(12, 16e3, 500e-15);
        assert!((p - 32.768e-6).abs() < 1e-16);
    }

    #[test]
    fn adc_power_edge_cases() {
        assert_eq!(adc_power(1, 1.0, 1.0), 2.0);
        let p12 = adc_power(12, 16e3, 500e-15);
        let p13 = adc_power(13, 16e3, 500e-15);
        assert!((p13 / p12 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn zero_window_is_all_zero() {
        let e = sensing_energy(&default_profile().sensing, 0.0).unwrap();
        assert_eq!(e, SensingEnergy::default());
    }

    #[test]
    fn adc_energy_for_one_second() {
        let e = sensing_energy(&default_profile().sensing, 1.0).unwrap();
        assert!((e.e_adc_j - 32.768e-6).abs() < 1e-16);
        assert!((e.total_j - (e.e_mic_j + e.e_lna_j + e.e_adc_j)).abs() < 1e-18);
    }

    #[test]
    fn passive_lna_term_is_100x_active() {
        // The passive-mic noise target is 10x smaller, and the current goes
        // with the inverse square of the noise voltage.
        let active = default_profile().sensing;
        let mut passive = active.clone();
        passive.mic_kind = MicKind::Passive;
        passive.v_noise_in_rms_v = MicKind::Passive.default_noise_voltage();
        let ea = sensing_energy(&active, 1.0).unwrap();
        let ep = sensing_energy(&passive, 1.0).unwrap();
        assert!((ep.e_lna_j / ea.e_lna_j - 100.0).abs() < 1e-9);
        assert_eq!(ep.e_mic_j, 0.0);
    }

    #[test]
    fn linear_in_window_length() {
        let p = default_profile().sensing;
        for scale in [0.0, 0.5, 2.0, 7.25] {
            let base = sensing_energy(&p, 1.0).unwrap();
            let scaled = sensing_energy(&p, scale).unwrap();
            assert!((scaled.total_j - scale * base.total_j).abs() < 1e-15 * base.total_j.max(1.0));
        }
    }

    #[test]
    fn monotone_in_each_parameter() {
        let base = default_profile().sensing;
        let total = |p: &SensingProfile| sensing_energy(p, 1.0).unwrap().total_j;
        let t0 = total(&base);
        for bump in [
            |p: &mut SensingProfile| p.p_mic_active_w *= 1.5,
            |p: &mut SensingProfile| p.nef *= 1.5,
            |p: &mut SensingProfile| p.f_s_mic_hz *= 1.5,
            |p: &mut SensingProfile| p.n_adc_bits += 1,
            |p: &mut SensingProfile| p.adc_fom_j_per_conv *= 1.5,
        ] {
            let mut p = base.clone();
            bump(&mut p);
            assert!(total(&p) >= t0);
        }
    }
}
