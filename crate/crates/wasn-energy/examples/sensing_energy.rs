//! Acoustic front-end energy: how microphone kind, sampling rate and ADC
//! resolution move the sensing budget.
//!
//! ```bash
//! cargo run --example sensing_energy
//! ```

use wasn_energy::params::{default_profile, MicKind};
use wasn_energy::sensing::{adc_power, lna_current, sensing_energy};

fn main() {
    let base = default_profile().sensing;

    println!("LNA bias current at defaults: {:.3e} A", lna_current(&base).unwrap());
    println!(
        "ADC power at 12 bit / 16 kHz / 500 fJ: {:.3e} W\n",
        adc_power(12, 16e3, 500e-15)
    );

    println!("one-second window, per component:");
    println!("{:<10} {:>10} {:>12} {:>12} {:>12} {:>12}", "mic", "f_s [kHz]", "mic [J]", "lna [J]", "adc [J]", "total [J]");
    for kind in [MicKind::Active, MicKind::Passive] {
        for f_s_khz in [8.0, 16.0, 44.1] {
            let mut profile = base.clone();
            profile.mic_kind = kind;
            profile.v_noise_in_rms_v = kind.default_noise_voltage();
            profile.f_s_mic_hz = f_s_khz * 1e3;
            let e = sensing_energy(&profile, 1.0).unwrap();
            println!(
                "{:<10} {:>10} {:>12.3e} {:>12.3e} {:>12.3e} {:>12.3e}",
                match kind {
                    MicKind::Active => "active",
                    MicKind::Passive => "passive",
                },
                f_s_khz,
                e.e_mic_j,
                e.e_lna_j,
                e.e_adc_j,
                e.total_j
            );
        }
    }

    println!("\nADC resolution doubles the power per added bit:");
    for bits in [8u32, 10, 12, 14, 16] {
        println!("  {bits:>2} bit -> {:.3e} W", adc_power(bits, 16e3, 500e-15));
    }
}
