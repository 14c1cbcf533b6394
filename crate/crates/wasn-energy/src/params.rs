//! Hardware profiles: default parameter tables, file loading and validation.
//!
//! A [`HardwareProfile`] groups the constants of the three node layers
//! (sensing front-end, processing architecture, radio). Profile files are
//! JSON; any subset of fields may be given and the rest fall back to the
//! built-in defaults, merged per field. Quantities may be written as bare
//! SI numbers or as strings with a scaled unit suffix (`"10 mW"`); see
//! [`crate::units`].
//!
//! Profiles are immutable after load and safe to share across concurrent
//! model evaluations.

use std::collections::BTreeSet;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::hwcost::{CycleCosts, OpClass};
use crate::units::{self, Unit};

/// Microphone kind: passive mics draw no bias power but present a lower
/// input-referred noise target to the LNA.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MicKind {
    Passive,
    Active,
}

impl MicKind {
    /// Typical input-referred RMS noise voltage for this kind of microphone.
    /// (The source table gives these in µV; stored here in volts.)
    pub fn default_noise_voltage(self) -> f64 {
        match self {
            MicKind::Passive => 10e-6,
            MicKind::Active => 100e-6,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            MicKind::Passive => "passive",
            MicKind::Active => "active",
        }
    }
}

/// Acoustic front-end constants.
#[derive(Debug, Clone, PartialEq)]
pub struct SensingProfile {
    /// Ambient temperature, K.
    pub temperature_k: f64,
    /// Bias power of an active microphone, W.
    pub p_mic_active_w: f64,
    /// LNA supply voltage, V.
    pub v_dd_lna_v: f64,
    /// Noise efficiency factor of the LNA (>= 1; 5-10 in average designs).
    pub nef: f64,
    /// Input-referred RMS noise voltage, V.
    pub v_noise_in_rms_v: f64,
    /// ADC figure of merit, J per conversion step.
    pub adc_fom_j_per_conv: f64,
    /// Microphone sampling frequency, Hz.
    pub f_s_mic_hz: f64,
    /// ADC resolution, bits.
    pub n_adc_bits: u32,
    pub mic_kind: MicKind,
}

/// Processor class of the general-purpose core the cost model assumes.
/// The parameter table lists one energy-per-cycle figure for each.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProcessorClass {
    /// General-purpose microcontroller (500 pJ per clock cycle).
    GpMcu,
    /// General-purpose DSP (100 pJ per clock cycle).
    GpDsp,
}

impl ProcessorClass {
    pub fn default_energy_per_cycle(self) -> f64 {
        match self {
            ProcessorClass::GpMcu => 500e-12,
            ProcessorClass::GpDsp => 100e-12,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            ProcessorClass::GpMcu => "gp_mcu",
            ProcessorClass::GpDsp => "gp_dsp",
        }
    }
}

/// One level of the memory hierarchy.
#[derive(Debug, Clone, PartialEq)]
pub struct MemoryLevel {
    pub name: String,
    /// Energy per bit accessed, J.
    pub access_energy_per_bit_j: f64,
    /// Leakage power per bit held, W.
    pub leakage_power_per_bit_w: f64,
    /// Capacity in bits; 0 means unbounded.
    pub capacity_bits: u64,
}

/// Processing-architecture constants.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessingProfile {
    pub processor_class: ProcessorClass,
    /// Energy per clock cycle, J. An operation costing `c` cycles consumes
    /// `c` times this figure.
    pub energy_per_cycle_j: f64,
    /// Clock cycles per arithmetic-operation class.
    pub op_cycle_costs: CycleCosts,
    /// Native word size, bits.
    pub word_size_bits: u32,
    /// Memory hierarchy, cheapest level first. Block cost models place their
    /// traffic on the first level unless a plan remaps them.
    pub memory_levels: Vec<MemoryLevel>,
}

impl ProcessingProfile {
    pub fn memory_level(&self, name: &str) -> Result<&MemoryLevel> {
        self.memory_levels
            .iter()
            .find(|l| l.name == name)
            .ok_or_else(|| Error::config("processing.memory_levels", format!("unknown memory level '{name}'")))
    }

    pub fn default_memory_level(&self) -> &str {
        &self.memory_levels[0].name
    }
}

/// Binary-weighted current-steering transmit DAC.
#[derive(Debug, Clone, PartialEq)]
pub struct DacModel {
    /// Resolution, bits. (The source table says "10 levels"; read as 10 bits,
    /// consistent with the cited current-steering design.)
    pub n_bits: u32,
    /// Sampling frequency, Hz.
    pub f_s_hz: f64,
    /// Supply voltage, V.
    pub v_dd_v: f64,
    /// Unit current source (LSB), A.
    pub i_unit_a: f64,
    /// Parasitic capacitance per switch, F.
    pub c_parasitic_f: f64,
    /// Second-order-effects correction factor.
    pub beta_correction: f64,
}

/// Receive-side ADC (power follows the same figure-of-merit law as the
/// sensing ADC).
#[derive(Debug, Clone, PartialEq)]
pub struct RxAdc {
    /// Resolution, bits ("10 levels" read as 10 bits).
    pub n_bits: u32,
    pub f_s_hz: f64,
    pub fom_j_per_conv: f64,
}

/// Linear power-amplifier class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PaClass {
    A,
    B,
}

impl PaClass {
    pub fn default_eta_max(self) -> f64 {
        match self {
            PaClass::A => 0.5,
            PaClass::B => 0.785,
        }
    }

    pub fn default_beta(self) -> f64 {
        match self {
            PaClass::A => 1.0,
            PaClass::B => 0.5,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            PaClass::A => "A",
            PaClass::B => "B",
        }
    }
}

/// Radio-electronics and link-budget constants.
#[derive(Debug, Clone, PartialEq)]
pub struct CommProfile {
    /// Startup energy to wake the transceiver from sleep, J.
    pub e_startup_j: f64,
    pub p_filter_w: f64,
    pub p_mixer_w: f64,
    pub p_lna_rx_w: f64,
    pub p_vga_w: f64,
    pub p_lo_w: f64,
    pub dac: DacModel,
    pub adc_rx: RxAdc,
    pub pa_class: PaClass,
    /// Maximum PA efficiency (defaults from the class unless overridden).
    pub eta_max: f64,
    /// PA efficiency exponent (defaults from the class unless overridden).
    pub beta: f64,
    /// Additional back-off, linear ratio (file field `extra_backoff_s_db`).
    pub extra_backoff: f64,
    /// Transmit antenna gain, linear.
    pub g_t: f64,
    /// Receive antenna gain, linear.
    pub g_r: f64,
    /// Carrier frequency, Hz.
    pub f_c_hz: f64,
    /// Transmission bandwidth, Hz.
    pub bandwidth_hz: f64,
    /// Physical-layer symbol rate, baud.
    pub symbol_rate_baud: f64,
    /// Receiver noise figure, linear (file field `noise_figure_db`).
    pub noise_figure: f64,
    /// Link margin, linear (file field `link_margin_db`).
    pub link_margin: f64,
    /// Noise power spectral density, W/Hz. Defaults to k*T at 290 K
    /// (the thermal floor, -174 dBm/Hz), which the parameter table leaves
    /// implicit.
    pub n0_w_per_hz: f64,
}

/// All hardware constants of one node.
#[derive(Debug, Clone, PartialEq)]
pub struct HardwareProfile {
    pub sensing: SensingProfile,
    pub processing: ProcessingProfile,
    pub comm: CommProfile,
}

impl Default for HardwareProfile {
    fn default() -> Self {
        default_profile()
    }
}

/// The built-in default profile: the parameter tables of the reference
/// hardware (sensing, processing and communication layers), in SI units.
pub fn default_profile() -> HardwareProfile {
    HardwareProfile {
        sensing: SensingProfile {
            temperature_k: 290.0,
            p_mic_active_w: 10e-3,
            v_dd_lna_v: 1.5,
            nef: 6.0,
            v_noise_in_rms_v: MicKind::Active.default_noise_voltage(),
            adc_fom_j_per_conv: 500e-15,
            f_s_mic_hz: 16e3,
            n_adc_bits: 12,
            mic_kind: MicKind::Active,
        },
        processing: ProcessingProfile {
            processor_class: ProcessorClass::GpMcu,
            energy_per_cycle_j: ProcessorClass::GpMcu.default_energy_per_cycle(),
            op_cycle_costs: CycleCosts::default(),
            word_size_bits: 32,
            memory_levels: vec![
                MemoryLevel {
                    name: "on_chip_sram".to_string(),
                    access_energy_per_bit_j: 100e-15,
                    leakage_power_per_bit_w: 50e-12,
                    capacity_bits: 0,
                },
                MemoryLevel {
                    name: "off_chip_sram".to_string(),
                    access_energy_per_bit_j: 100e-12,
                    leakage_power_per_bit_w: 10e-12,
                    capacity_bits: 0,
                },
                MemoryLevel {
                    name: "off_chip_dram".to_string(),
                    access_energy_per_bit_j: 100e-12,
                    leakage_power_per_bit_w: 75e-12,
                    capacity_bits: 0,
                },
            ],
        },
        comm: CommProfile {
            e_startup_j: 94e-6,
            p_filter_w: 1e-3,
            p_mixer_w: 1e-3,
            p_lna_rx_w: 3e-3,
            p_vga_w: 5e-3,
            p_lo_w: 22.5e-3,
            dac: DacModel {
                n_bits: 10,
                f_s_hz: 4e6,
                v_dd_v: 3.0,
                i_unit_a: 10e-6,
                c_parasitic_f: 1e-12,
                beta_correction: 1.0,
            },
            adc_rx: RxAdc {
                n_bits: 10,
                f_s_hz: 4e6,
                fom_j_per_conv: 500e-15,
            },
            pa_class: PaClass::B,
            eta_max: PaClass::B.default_eta_max(),
            beta: PaClass::B.default_beta(),
            extra_backoff: 1.0, // 0 dB
            g_t: 1.8,
            g_r: 1.8,
            f_c_hz: 2.4e9,
            bandwidth_hz: 1e6,
            symbol_rate_baud: 0.125e6,
            noise_figure: units::db_to_linear(16.0),
            link_margin: units::db_to_linear(20.0),
            n0_w_per_hz: units::BOLTZMANN * 290.0,
        },
    }
}

/// Loads a profile file, merging it over the defaults per field.
pub fn load_profile(path: impl AsRef<Path>) -> Result<HardwareProfile> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
    profile_from_value(&value)
}

/// Builds a validated profile from a parsed JSON document. Absent fields
/// take default values; siblings of an overridden field are untouched.
pub fn profile_from_value(value: &Value) -> Result<HardwareProfile> {
    let root = Section::new("profile", Some(value))?;
    root.allow_keys(&["sensing", "processing", "comm"])?;
    let profile = HardwareProfile {
        sensing: parse_sensing(Section::new("sensing", root.child("sensing"))?)?,
        processing: parse_processing(Section::new("processing", root.child("processing"))?)?,
        comm: parse_comm(Section::new("comm", root.child("comm"))?)?,
    };
    validate_profile(&profile)?;
    Ok(profile)
}

/// Serializes a profile back to the file schema (SI numbers; dB fields in dB).
pub fn profile_to_value(p: &HardwareProfile) -> Value {
    json!({
        "sensing": {
            "temperature_k": p.sensing.temperature_k,
            "p_mic_active_w": p.sensing.p_mic_active_w,
            "v_dd_lna_v": p.sensing.v_dd_lna_v,
            "nef": p.sensing.nef,
            "v_noise_in_rms_v": p.sensing.v_noise_in_rms_v,
            "adc_fom_j_per_conv": p.sensing.adc_fom_j_per_conv,
            "f_s_mic_hz": p.sensing.f_s_mic_hz,
            "n_adc_bits": p.sensing.n_adc_bits,
            "mic_kind": p.sensing.mic_kind.as_str(),
        },
        "processing": {
            "processor_class": p.processing.processor_class.as_str(),
            "energy_per_cycle_j": p.processing.energy_per_cycle_j,
            "op_cycle_costs": {
                "mac": p.processing.op_cycle_costs.get(OpClass::Mac),
                "add": p.processing.op_cycle_costs.get(OpClass::Add),
                "mul": p.processing.op_cycle_costs.get(OpClass::Mul),
                "div": p.processing.op_cycle_costs.get(OpClass::Div),
                "cmp": p.processing.op_cycle_costs.get(OpClass::Cmp),
                "exp": p.processing.op_cycle_costs.get(OpClass::Exp),
                "log": p.processing.op_cycle_costs.get(OpClass::Log),
            },
            "word_size_bits": p.processing.word_size_bits,
            "memory_levels": p.processing.memory_levels.iter().map(|l| json!({
                "name": l.name,
                "access_energy_per_bit_j": l.access_energy_per_bit_j,
                "leakage_power_per_bit_w": l.leakage_power_per_bit_w,
                "capacity_bits": l.capacity_bits,
            })).collect::<Vec<_>>(),
        },
        "comm": {
            "e_startup_j": p.comm.e_startup_j,
            "p_filter_w": p.comm.p_filter_w,
            "p_mixer_w": p.comm.p_mixer_w,
            "p_lna_rx_w": p.comm.p_lna_rx_w,
            "p_vga_w": p.comm.p_vga_w,
            "p_lo_w": p.comm.p_lo_w,
            "dac": {
                "n_bits": p.comm.dac.n_bits,
                "f_s_hz": p.comm.dac.f_s_hz,
                "v_dd_v": p.comm.dac.v_dd_v,
                "i_unit_a": p.comm.dac.i_unit_a,
                "c_parasitic_f": p.comm.dac.c_parasitic_f,
                "beta_correction": p.comm.dac.beta_correction,
            },
            "adc_rx": {
                "n_bits": p.comm.adc_rx.n_bits,
                "f_s_hz": p.comm.adc_rx.f_s_hz,
                "fom_j_per_conv": p.comm.adc_rx.fom_j_per_conv,
            },
            "pa_class": p.comm.pa_class.as_str(),
            "eta_max": p.comm.eta_max,
            "beta": p.comm.beta,
            "extra_backoff_s_db": units::linear_to_db(p.comm.extra_backoff),
            "g_t": p.comm.g_t,
            "g_r": p.comm.g_r,
            "f_c_hz": p.comm.f_c_hz,
            "bandwidth_hz": p.comm.bandwidth_hz,
            "symbol_rate_baud": p.comm.symbol_rate_baud,
            "noise_figure_db": units::linear_to_db(p.comm.noise_figure),
            "link_margin_db": units::linear_to_db(p.comm.link_margin),
            "n0_w_per_hz": p.comm.n0_w_per_hz,
        },
    })
}

// ---------------------------------------------------------------------------
// Section reader: field-at-a-time extraction with unit checks, default
// fallback and unknown-key rejection.
// ---------------------------------------------------------------------------

pub(crate) struct Section<'a> {
    ctx: String,
    map: Option<&'a Map<String, Value>>,
}

impl<'a> Section<'a> {
    pub(crate) fn new(ctx: &str, value: Option<&'a Value>) -> Result<Self> {
        let map = match value {
            None | Some(Value::Null) => None,
            Some(Value::Object(m)) => Some(m),
            Some(other) => {
                return Err(Error::parse(
                    ctx,
                    format!("expected an object, found {other}"),
                ))
            }
        };
        Ok(Section { ctx: ctx.to_string(), map })
    }

    pub(crate) fn field(&self, key: &str) -> String {
        if self.ctx.is_empty() {
            key.to_string()
        } else {
            format!("{}.{}", self.ctx, key)
        }
    }

    pub(crate) fn child(&self, key: &str) -> Option<&'a Value> {
        self.map.and_then(|m| m.get(key))
    }

    pub(crate) fn has(&self, key: &str) -> bool {
        self.map.is_some_and(|m| m.contains_key(key))
    }

    /// Rejects keys outside the given set; catches typos early.
    pub(crate) fn allow_keys(&self, keys: &[&str]) -> Result<()> {
        if let Some(map) = self.map {
            let allowed: BTreeSet<&str> = keys.iter().copied().collect();
            for k in map.keys() {
                if !allowed.contains(k.as_str()) {
                    return Err(Error::parse(
                        &self.ctx,
                        format!("unknown key '{k}'"),
                    ));
                }
            }
        }
        Ok(())
    }

    /// A dimensioned quantity: bare SI number or suffixed string.
    pub(crate) fn quantity(&self, key: &str, unit: Unit, default: f64) -> Result<f64> {
        match self.child(key) {
            None => Ok(default),
            Some(Value::Number(n)) => n
                .as_f64()
                .ok_or_else(|| Error::validation(self.field(key), "not a finite number")),
            Some(Value::String(s)) => units::parse_quantity(&self.field(key), s, unit),
            Some(other) => Err(Error::validation(
                self.field(key),
                format!("expected a number or quantity string, found {other}"),
            )),
        }
    }

    /// A dB-valued field, returned as a linear ratio.
    pub(crate) fn quantity_db(&self, key: &str, default_linear: f64) -> Result<f64> {
        match self.child(key) {
            None => Ok(default_linear),
            Some(_) => Ok(units::db_to_linear(self.quantity(key, Unit::Decibel, 0.0)?)),
        }
    }

    pub(crate) fn integer(&self, key: &str, default: u64) -> Result<u64> {
        match self.child(key) {
            None => Ok(default),
            Some(Value::Number(n)) => n.as_u64().ok_or_else(|| {
                Error::validation(self.field(key), "expected a non-negative integer")
            }),
            Some(other) => Err(Error::validation(
                self.field(key),
                format!("expected an integer, found {other}"),
            )),
        }
    }

    pub(crate) fn number(&self, key: &str, default: f64) -> Result<f64> {
        self.quantity(key, Unit::Dimensionless, default)
    }

    pub(crate) fn string(&self, key: &str, default: &str) -> Result<String> {
        match self.child(key) {
            None => Ok(default.to_string()),
            Some(Value::String(s)) => Ok(s.clone()),
            Some(other) => Err(Error::validation(
                self.field(key),
                format!("expected a string, found {other}"),
            )),
        }
    }
}

fn parse_sensing(s: Section) -> Result<SensingProfile> {
    s.allow_keys(&[
        "temperature_k",
        "p_mic_active_w",
        "v_dd_lna_v",
        "nef",
        "v_noise_in_rms_v",
        "adc_fom_j_per_conv",
        "f_s_mic_hz",
        "n_adc_bits",
        "mic_kind",
    ])?;
    let d = default_profile().sensing;
    let mic_kind = match s.string("mic_kind", d.mic_kind.as_str())?.as_str() {
        "passive" => MicKind::Passive,
        "active" => MicKind::Active,
        other => {
            return Err(Error::validation(
                s.field("mic_kind"),
                format!("expected 'passive' or 'active', found '{other}'"),
            ))
        }
    };
    // The noise-voltage default follows the microphone kind unless the file
    // pins it explicitly.
    let v_noise_default = if s.has("v_noise_in_rms_v") {
        0.0 // unused
    } else {
        mic_kind.default_noise_voltage()
    };
    Ok(SensingProfile {
        temperature_k: s.quantity("temperature_k", Unit::Kelvin, d.temperature_k)?,
        p_mic_active_w: s.quantity("p_mic_active_w", Unit::Watt, d.p_mic_active_w)?,
        v_dd_lna_v: s.quantity("v_dd_lna_v", Unit::Volt, d.v_dd_lna_v)?,
        nef: s.number("nef", d.nef)?,
        v_noise_in_rms_v: s.quantity("v_noise_in_rms_v", Unit::Volt, v_noise_default)?,
        adc_fom_j_per_conv: s.quantity("adc_fom_j_per_conv", Unit::JoulePerConv, d.adc_fom_j_per_conv)?,
        f_s_mic_hz: s.quantity("f_s_mic_hz", Unit::Hertz, d.f_s_mic_hz)?,
        n_adc_bits: s.integer("n_adc_bits", d.n_adc_bits as u64)? as u32,
        mic_kind,
    })
}

fn parse_processing(s: Section) -> Result<ProcessingProfile> {
    s.allow_keys(&[
        "processor_class",
        "energy_per_cycle_j",
        "op_cycle_costs",
        "word_size_bits",
        "memory_levels",
    ])?;
    let d = default_profile().processing;
    let class = match s.string("processor_class", d.processor_class.as_str())?.as_str() {
        "gp_mcu" => ProcessorClass::GpMcu,
        "gp_dsp" => ProcessorClass::GpDsp,
        other => {
            return Err(Error::validation(
                s.field("processor_class"),
                format!("expected 'gp_mcu' or 'gp_dsp', found '{other}'"),
            ))
        }
    };
    let energy_per_cycle_j = s.quantity(
        "energy_per_cycle_j",
        Unit::Joule,
        class.default_energy_per_cycle(),
    )?;

    let costs_section = Section::new(&s.field("op_cycle_costs"), s.child("op_cycle_costs"))?;
    costs_section.allow_keys(&["mac", "add", "mul", "div", "cmp", "exp", "log"])?;
    let mut op_cycle_costs = CycleCosts::default();
    for op in OpClass::ALL {
        let cycles = costs_section.integer(op.key(), op_cycle_costs.get(op))?;
        op_cycle_costs.set(op, cycles);
    }

    // A memory_levels array replaces the default hierarchy wholesale.
    let memory_levels = match s.child("memory_levels") {
        None => d.memory_levels,
        Some(Value::Array(items)) => {
            let mut levels = Vec::with_capacity(items.len());
            for (i, item) in items.iter().enumerate() {
                let ctx = format!("{}[{}]", s.field("memory_levels"), i);
                let level = Section::new(&ctx, Some(item))?;
                level.allow_keys(&[
                    "name",
                    "access_energy_per_bit_j",
                    "leakage_power_per_bit_w",
                    "capacity_bits",
                ])?;
                levels.push(MemoryLevel {
                    name: level.string("name", &format!("level{i}"))?,
                    access_energy_per_bit_j: level.quantity(
                        "access_energy_per_bit_j",
                        Unit::JoulePerBit,
                        0.0,
                    )?,
                    leakage_power_per_bit_w: level.quantity(
                        "leakage_power_per_bit_w",
                        Unit::WattPerBit,
                        0.0,
                    )?,
                    capacity_bits: level.integer("capacity_bits", 0)?,
                });
            }
            levels
        }
        Some(other) => {
            return Err(Error::validation(
                s.field("memory_levels"),
                format!("expected an array, found {other}"),
            ))
        }
    };

    Ok(ProcessingProfile {
        processor_class: class,
        energy_per_cycle_j,
        op_cycle_costs,
        word_size_bits: s.integer("word_size_bits", d.word_size_bits as u64)? as u32,
        memory_levels,
    })
}

fn parse_comm(s: Section) -> Result<CommProfile> {
    s.allow_keys(&[
        "e_startup_j",
        "p_filter_w",
        "p_mixer_w",
        "p_lna_rx_w",
        "p_vga_w",
        "p_lo_w",
        "dac",
        "adc_rx",
        "pa_class",
        "eta_max",
        "beta",
        "extra_backoff_s_db",
        "g_t",
        "g_r",
        "f_c_hz",
        "bandwidth_hz",
        "symbol_rate_baud",
        "noise_figure_db",
        "link_margin_db",
        "n0_w_per_hz",
    ])?;
    let d = default_profile().comm;

    let pa_class = match s.string("pa_class", d.pa_class.as_str())?.as_str() {
        "A" | "a" => PaClass::A,
        "B" | "b" => PaClass::B,
        other => {
            return Err(Error::validation(
                s.field("pa_class"),
                format!("expected 'A' or 'B', found '{other}'"),
            ))
        }
    };
    // eta_max and beta follow the PA class unless pinned explicitly.
    let eta_max = s.number("eta_max", pa_class.default_eta_max())?;
    let beta = s.number("beta", pa_class.default_beta())?;

    let dac_section = Section::new(&s.field("dac"), s.child("dac"))?;
    dac_section.allow_keys(&[
        "n_bits",
        "f_s_hz",
        "v_dd_v",
        "i_unit_a",
        "c_parasitic_f",
        "beta_correction",
    ])?;
    let dac = DacModel {
        n_bits: dac_section.integer("n_bits", d.dac.n_bits as u64)? as u32,
        f_s_hz: dac_section.quantity("f_s_hz", Unit::Hertz, d.dac.f_s_hz)?,
        v_dd_v: dac_section.quantity("v_dd_v", Unit::Volt, d.dac.v_dd_v)?,
        i_unit_a: dac_section.quantity("i_unit_a", Unit::Ampere, d.dac.i_unit_a)?,
        c_parasitic_f: dac_section.quantity("c_parasitic_f", Unit::Farad, d.dac.c_parasitic_f)?,
        beta_correction: dac_section.number("beta_correction", d.dac.beta_correction)?,
    };

    let adc_section = Section::new(&s.field("adc_rx"), s.child("adc_rx"))?;
    adc_section.allow_keys(&["n_bits", "f_s_hz", "fom_j_per_conv"])?;
    let adc_rx = RxAdc {
        n_bits: adc_section.integer("n_bits", d.adc_rx.n_bits as u64)? as u32,
        f_s_hz: adc_section.quantity("f_s_hz", Unit::Hertz, d.adc_rx.f_s_hz)?,
        fom_j_per_conv: adc_section.quantity("fom_j_per_conv", Unit::JoulePerConv, d.adc_rx.fom_j_per_conv)?,
    };

    Ok(CommProfile {
        e_startup_j: s.quantity("e_startup_j", Unit::Joule, d.e_startup_j)?,
        p_filter_w: s.quantity("p_filter_w", Unit::Watt, d.p_filter_w)?,
        p_mixer_w: s.quantity("p_mixer_w", Unit::Watt, d.p_mixer_w)?,
        p_lna_rx_w: s.quantity("p_lna_rx_w", Unit::Watt, d.p_lna_rx_w)?,
        p_vga_w: s.quantity("p_vga_w", Unit::Watt, d.p_vga_w)?,
        p_lo_w: s.quantity("p_lo_w", Unit::Watt, d.p_lo_w)?,
        dac,
        adc_rx,
        pa_class,
        eta_max,
        beta,
        extra_backoff: s.quantity_db("extra_backoff_s_db", d.extra_backoff)?,
        g_t: s.number("g_t", d.g_t)?,
        g_r: s.number("g_r", d.g_r)?,
        f_c_hz: s.quantity("f_c_hz", Unit::Hertz, d.f_c_hz)?,
        bandwidth_hz: s.quantity("bandwidth_hz", Unit::Hertz, d.bandwidth_hz)?,
        symbol_rate_baud: s.quantity("symbol_rate_baud", Unit::Baud, d.symbol_rate_baud)?,
        noise_figure: s.quantity_db("noise_figure_db", d.noise_figure)?,
        link_margin: s.quantity_db("link_margin_db", d.link_margin)?,
        n0_w_per_hz: s.quantity("n0_w_per_hz", Unit::WattPerHertz, d.n0_w_per_hz)?,
    })
}

fn validate_profile(p: &HardwareProfile) -> Result<()> {
    let strictly_positive: &[(&str, f64)] = &[
        ("sensing.temperature_k", p.sensing.temperature_k),
        ("sensing.p_mic_active_w", p.sensing.p_mic_active_w),
        ("sensing.v_dd_lna_v", p.sensing.v_dd_lna_v),
        ("sensing.v_noise_in_rms_v", p.sensing.v_noise_in_rms_v),
        ("sensing.adc_fom_j_per_conv", p.sensing.adc_fom_j_per_conv),
        ("sensing.f_s_mic_hz", p.sensing.f_s_mic_hz),
        ("processing.energy_per_cycle_j", p.processing.energy_per_cycle_j),
        ("comm.dac.f_s_hz", p.comm.dac.f_s_hz),
        ("comm.dac.v_dd_v", p.comm.dac.v_dd_v),
        ("comm.dac.i_unit_a", p.comm.dac.i_unit_a),
        ("comm.adc_rx.f_s_hz", p.comm.adc_rx.f_s_hz),
        ("comm.adc_rx.fom_j_per_conv", p.comm.adc_rx.fom_j_per_conv),
        ("comm.eta_max", p.comm.eta_max),
        ("comm.beta", p.comm.beta),
        ("comm.extra_backoff_s_db", p.comm.extra_backoff),
        ("comm.g_t", p.comm.g_t),
        ("comm.g_r", p.comm.g_r),
        ("comm.f_c_hz", p.comm.f_c_hz),
        ("comm.bandwidth_hz", p.comm.bandwidth_hz),
        ("comm.symbol_rate_baud", p.comm.symbol_rate_baud),
        ("comm.noise_figure_db", p.comm.noise_figure),
        ("comm.link_margin_db", p.comm.link_margin),
        ("comm.n0_w_per_hz", p.comm.n0_w_per_hz),
    ];
    for (field, v) in strictly_positive {
        if !v.is_finite() || *v <= 0.0 {
            return Err(Error::validation(*field, format!("must be strictly positive, got {v}")));
        }
    }
    let non_negative: &[(&str, f64)] = &[
        ("comm.e_startup_j", p.comm.e_startup_j),
        ("comm.p_filter_w", p.comm.p_filter_w),
        ("comm.p_mixer_w", p.comm.p_mixer_w),
        ("comm.p_lna_rx_w", p.comm.p_lna_rx_w),
        ("comm.p_vga_w", p.comm.p_vga_w),
        ("comm.p_lo_w", p.comm.p_lo_w),
        ("comm.dac.c_parasitic_f", p.comm.dac.c_parasitic_f),
        ("comm.dac.beta_correction", p.comm.dac.beta_correction),
    ];
    for (field, v) in non_negative {
        if !v.is_finite() || *v < 0.0 {
            return Err(Error::validation(*field, format!("must be non-negative, got {v}")));
        }
    }
    if !(1..=32).contains(&p.sensing.n_adc_bits) {
        return Err(Error::validation(
            "sensing.n_adc_bits",
            format!("must be in 1..=32, got {}", p.sensing.n_adc_bits),
        ));
    }
    if p.sensing.nef < 1.0 {
        return Err(Error::validation(
            "sensing.nef",
            format!("must be >= 1, got {}", p.sensing.nef),
        ));
    }
    if p.processing.word_size_bits == 0 {
        return Err(Error::validation("processing.word_size_bits", "must be > 0"));
    }
    for op in OpClass::ALL {
        if p.processing.op_cycle_costs.get(op) < 1 {
            return Err(Error::validation(
                format!("processing.op_cycle_costs.{}", op.key()),
                "every operation costs at least one cycle",
            ));
        }
    }
    if p.processing.memory_levels.is_empty() {
        return Err(Error::validation(
            "processing.memory_levels",
            "at least one memory level is required",
        ));
    }
    let mut names = BTreeSet::new();
    for level in &p.processing.memory_levels {
        if !names.insert(level.name.clone()) {
            return Err(Error::validation(
                "processing.memory_levels",
                format!("duplicate level name '{}'", level.name),
            ));
        }
        if level.access_energy_per_bit_j < 0.0 || level.leakage_power_per_bit_w < 0.0 {
            return Err(Error::validation(
                format!("processing.memory_levels.{}", level.name),
                "energies must be non-negative",
            ));
        }
    }
    if p.comm.dac.n_bits == 0 || p.comm.dac.n_bits > 32 {
        return Err(Error::validation("comm.dac.n_bits", "must be in 1..=32"));
    }
    if p.comm.adc_rx.n_bits == 0 || p.comm.adc_rx.n_bits > 32 {
        return Err(Error::validation("comm.adc_rx.n_bits", "must be in 1..=32"));
    }
    if p.comm.eta_max > 1.0 {
        return Err(Error::validation("comm.eta_max", "efficiency cannot exceed 1"));
    }
    Ok(())
}
