//! Node-level composition: one duty cycle's energy across the sensing,
//! processing and communication layers, and the battery lifetime it implies.
//!
//! Sleep-mode consumption is neglected: a duty cycle of `delta` fraction
//! active scales lifetime by `1/delta` exactly.

use std::path::Path;

use serde_json::Value;

use crate::comm::{link_energies, CodingScheme, LinkConfig, LinkEvaluation};
use crate::dsp::{self, PipelinePlan};
use crate::error::{Error, Result};
use crate::hwcost::{energy_of, ProcessingEnergy};
use crate::params::{HardwareProfile, Section};
use crate::sensing::{sensing_energy, SensingEnergy};
use crate::units::Unit;

/// One operating scenario of a node.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    /// Measurement window per duty cycle, s.
    pub delta_s: f64,
    /// Fraction of time the node is active, (0, 1].
    pub duty_cycle: f64,
    pub n_batteries: u32,
    /// Charge per battery, J.
    pub battery_capacity_j: f64,
    pub pipeline: PipelinePlan,
    /// Information bits transmitted per duty cycle.
    pub n_tx_bits: u64,
    /// Information bits received per duty cycle.
    pub n_rx_bits: u64,
    pub link: LinkConfig,
    pub coding: CodingScheme,
}

impl Default for Scenario {
    /// One-second windows at a 10% duty cycle on two AA-class cells
    /// (9360 J each), transmitting the default MFCC pipeline's output
    /// (98 frames x 14 coefficients x 32 bits) and receiving 1 kibit.
    fn default() -> Self {
        Scenario {
            delta_s: 1.0,
            duty_cycle: 0.1,
            n_batteries: 2,
            battery_capacity_j: 9360.0,
            pipeline: PipelinePlan::mfcc_default(),
            n_tx_bits: 43_904,
            n_rx_bits: 1024,
            link: LinkConfig::default(),
            coding: CodingScheme::default(),
        }
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if !(self.duty_cycle > 0.0 && self.duty_cycle <= 1.0) {
            return Err(Error::validation(
                "scenario.duty_cycle",
                format!("must be in (0, 1], got {}", self.duty_cycle),
            ));
        }
        if self.delta_s <= 0.0 {
            return Err(Error::validation("scenario.delta_s", "must be positive"));
        }
        if self.n_batteries == 0 {
            return Err(Error::validation("scenario.n_batteries", "must be >= 1"));
        }
        if self.battery_capacity_j <= 0.0 {
            return Err(Error::validation("scenario.battery_capacity_j", "must be positive"));
        }
        Ok(())
    }

    pub fn from_value(value: &Value) -> Result<(Scenario, Vec<String>)> {
        let mut warnings = Vec::new();
        let s = Section::new("scenario", Some(value))?;
        s.allow_keys(&[
            "delta_s",
            "duty_cycle",
            "n_batteries",
            "battery_capacity_j",
            "pipeline",
            "n_tx_bits",
            "n_rx_bits",
            "link",
            "coding",
        ])?;
        let d = Scenario::default();
        let (pipeline, mut pipeline_warnings) =
            PipelinePlan::from_value("pipeline", s.child("pipeline"))?;
        warnings.append(&mut pipeline_warnings);
        let scenario = Scenario {
            delta_s: s.quantity("delta_s", Unit::Second, d.delta_s)?,
            duty_cycle: s.number("duty_cycle", d.duty_cycle)?,
            n_batteries: s.integer("n_batteries", d.n_batteries as u64)? as u32,
            battery_capacity_j: s.quantity("battery_capacity_j", Unit::Joule, d.battery_capacity_j)?,
            pipeline,
            n_tx_bits: s.integer("n_tx_bits", d.n_tx_bits)?,
            n_rx_bits: s.integer("n_rx_bits", d.n_rx_bits)?,
            link: LinkConfig::from_value(s.child("link"), &mut warnings)?,
            coding: CodingScheme::from_value(s.child("coding"))?,
        };
        scenario.validate()?;
        Ok((scenario, warnings))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<(Scenario, Vec<String>)> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
        let value: Value = serde_json::from_str(&text)
            .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
        Scenario::from_value(&value)
    }

    pub fn to_value(&self) -> Value {
        serde_json::json!({
            "delta_s": self.delta_s,
            "duty_cycle": self.duty_cycle,
            "n_batteries": self.n_batteries,
            "battery_capacity_j": self.battery_capacity_j,
            "pipeline": dsp::plan_to_value(&self.pipeline),
            "n_tx_bits": self.n_tx_bits,
            "n_rx_bits": self.n_rx_bits,
            "link": self.link.to_value(),
            "coding": self.coding.to_value(),
        })
    }
}

/// Per-layer energy of one duty cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyBreakdown {
    pub sensing: SensingEnergy,
    pub processing: ProcessingEnergy,
    /// Transmit side, `n_tx_bits * E_T`.
    pub tx_j: f64,
    /// Receive side, `n_rx_bits * E_R`.
    pub rx_j: f64,
    pub total_j: f64,
}

/// Full evaluation of one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeReport {
    pub breakdown: EnergyBreakdown,
    pub link: LinkEvaluation,
    pub lifetime_s: f64,
    pub warnings: Vec<String>,
}

/// Energy of one duty cycle with the full sub-breakdown retained.
pub fn node_energy(scenario: &Scenario, profile: &HardwareProfile) -> Result<NodeReport> {
    scenario.validate()?;
    let mut warnings = Vec::new();

    let sensing = sensing_energy(&profile.sensing, scenario.delta_s)?;
    let cost = dsp::cost_pipeline(
        &scenario.pipeline,
        scenario.delta_s,
        profile.sensing.f_s_mic_hz,
        &profile.processing,
    )?;
    let processing = energy_of(&cost, &profile.processing, scenario.delta_s)?;

    // A pipeline that emits a different bit volume than the configured
    // transmit traffic is suspicious but legal.
    if let Some(bits) = dsp::pipeline_output_bits(
        &scenario.pipeline,
        scenario.delta_s,
        profile.sensing.f_s_mic_hz,
        &profile.processing,
    )? {
        if bits != scenario.n_tx_bits {
            warnings.push(format!(
                "scenario.n_tx_bits = {} differs from the pipeline output of {} bits per window",
                scenario.n_tx_bits, bits
            ));
        }
    }

    let link = link_energies(
        &scenario.link,
        &scenario.coding,
        profile,
        scenario.n_tx_bits,
        scenario.n_rx_bits,
    )?;
    let tx_j = scenario.n_tx_bits as f64 * link.tx.total;
    let rx_j = scenario.n_rx_bits as f64 * link.rx.total;
    let total_j = sensing.total_j + processing.total_j + tx_j + rx_j;
    let breakdown = EnergyBreakdown { sensing, processing, tx_j, rx_j, total_j };

    let lifetime_s = lifetime_of(&breakdown, scenario)?;
    Ok(NodeReport { breakdown, link, lifetime_s, warnings })
}

/// Battery lifetime implied by a per-cycle energy:
/// `L = (1/duty) * (n_b * B / E_cycle) * delta`.
pub fn lifetime_of(breakdown: &EnergyBreakdown, scenario: &Scenario) -> Result<f64> {
    if !breakdown.total_j.is_finite() || breakdown.total_j <= 0.0 {
        return Err(Error::divergence(
            "node.lifetime",
            "per-cycle energy is zero; lifetime is unbounded",
        ));
    }
    let stock = scenario.n_batteries as f64 * scenario.battery_capacity_j;
    Ok(stock / breakdown.total_j * scenario.delta_s / scenario.duty_cycle)
}

/// Evaluates a scenario and returns only the lifetime, s.
pub fn lifetime(scenario: &Scenario, profile: &HardwareProfile) -> Result<f64> {
    Ok(node_energy(scenario, profile)?.lifetime_s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsp::MfccConfig;
    use crate::params::{default_profile, MicKind};

    /// A scenario with no traffic, no pipeline and a passive microphone:
    /// only the sensing layer is left.
    fn degenerate_scenario() -> Scenario {
        Scenario {
            n_tx_bits: 0,
            n_rx_bits: 0,
            pipeline: PipelinePlan { mfcc: MfccConfig::default(), blocks: vec![] },
            ..Scenario::default()
        }
    }

    #[test]
    fn degenerate_node_is_sensing_only() {
        let mut profile = default_profile();
        profile.sensing.mic_kind = MicKind::Passive;
        let report = node_energy(&degenerate_scenario(), &profile).unwrap();
        assert_eq!(report.breakdown.tx_j, 0.0);
        assert_eq!(report.breakdown.rx_j, 0.0);
        assert_eq!(report.breakdown.processing.total_j, 0.0);
        assert_eq!(report.breakdown.total_j, report.breakdown.sensing.total_j);
        assert!(report.breakdown.total_j > 0.0);
    }

    #[test]
    fn default_scenario_is_positive_and_closed() {
        let report = node_energy(&Scenario::default(), &default_profile()).unwrap();
        let b = &report.breakdown;
        assert!(b.total_j > 0.0);
        let sum = b.sensing.total_j + b.processing.total_j + b.tx_j + b.rx_j;
        assert!((sum - b.total_j).abs() <= 1e-12 * b.total_j);
        // The default scenario transmits exactly the pipeline output.
        assert!(report.warnings.is_empty(), "{:?}", report.warnings);
    }

    #[test]
    fn mismatched_traffic_warns() {
        let scenario = Scenario { n_tx_bits: 1_000_000, ..Scenario::default() };
        let report = node_energy(&scenario, &default_profile()).unwrap();
        assert_eq!(report.warnings.len(), 1);
        assert!(report.warnings[0].contains("n_tx_bits"));
    }

    #[test]
    fn doubling_tx_bits_less_than_doubles_tx_share() {
        let profile = default_profile();
        let base = node_energy(&Scenario::default(), &profile).unwrap();
        let doubled = node_energy(
            &Scenario { n_tx_bits: 2 * 43_904, ..Scenario::default() },
            &profile,
        )
        .unwrap();
        // Startup amortization makes the per-bit cost fall.
        assert!(doubled.breakdown.tx_j > base.breakdown.tx_j);
        assert!(doubled.breakdown.tx_j < 2.0 * base.breakdown.tx_j);
    }

    #[test]
    fn lifetime_unit_identity() {
        // duty = 1, stock equal to the cycle energy, 1 s window -> 1 s.
        let mut profile = default_profile();
        profile.sensing.mic_kind = MicKind::Passive;
        let mut scenario = degenerate_scenario();
        scenario.duty_cycle = 1.0;
        let energy = node_energy(&scenario, &profile).unwrap().breakdown.total_j;
        scenario.n_batteries = 1;
        scenario.battery_capacity_j = energy;
        let l = lifetime(&scenario, &profile).unwrap();
        assert!((l - 1.0).abs() < 1e-12);
    }

    #[test]
    fn halving_duty_doubles_lifetime() {
        let profile = default_profile();
        let base = lifetime(&Scenario::default(), &profile).unwrap();
        let half = lifetime(
            &Scenario { duty_cycle: 0.05, ..Scenario::default() },
            &profile,
        )
        .unwrap();
        assert!((half - 2.0 * base).abs() < 1e-9 * base);
    }

    #[test]
    fn lifetime_linear_in_battery_stock() {
        let profile = default_profile();
        let base = lifetime(&Scenario::default(), &profile).unwrap();
        let double_cells = lifetime(
            &Scenario { n_batteries: 4, ..Scenario::default() },
            &profile,
        )
        .unwrap();
        assert!((double_cells - 2.0 * base).abs() < 1e-9 * base);
    }

    #[test]
    fn zero_energy_lifetime_diverges() {
        let breakdown = EnergyBreakdown {
            sensing: Default::default(),
            processing: Default::default(),
            tx_j: 0.0,
            rx_j: 0.0,
            total_j: 0.0,
        };
        assert!(lifetime_of(&breakdown, &Scenario::default()).is_err());
    }

    #[test]
    fn scenario_round_trips_through_json() {
        let original = Scenario::default();
        let (reloaded, warnings) = Scenario::from_value(&original.to_value()).unwrap();
        assert!(warnings.is_empty());
        assert_eq!(reloaded.delta_s, original.delta_s);
        assert_eq!(reloaded.pipeline, original.pipeline);
        assert_eq!(reloaded.coding, original.coding);
        assert_eq!(reloaded.n_tx_bits, original.n_tx_bits);
        assert!((reloaded.link.mean_snr - original.link.mean_snr).abs() < 1e-9);
    }

    #[test]
    fn empty_scenario_object_is_default() {
        let (scenario, _) = Scenario::from_value(&serde_json::json!({})).unwrap();
        assert_eq!(scenario, Scenario::default());
    }

    #[test]
    fn invalid_duty_cycle_names_field() {
        let err = Scenario::from_value(&serde_json::json!({"duty_cycle": 1.5})).unwrap_err();
        assert!(err.to_string().contains("duty_cycle"), "{err}");
    }
}
