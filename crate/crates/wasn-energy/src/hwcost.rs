//! Hardware-architecture cost model.
//!
//! Every processing block (feature extraction, neural-network layers, channel
//! coding) is costed as a [`CostReport`]: how many operations of each
//! arithmetic class it performs and how much memory traffic and storage it
//! needs per memory level. [`energy_of`] converts a report into joules:
//!
//! ```text
//! E_P = E_cc * sum_j c_j * n_j                (operations)
//!     + sum_k E_access,k * M_access,k         (memory accesses)
//!     + delta * sum_k P_leak,k * M_stored,k   (memory leakage over the window)
//! ```
//!
//! Reads and writes are charged equally, and the leakage term is the only one
//! that depends on the window length.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::params::ProcessingProfile;

/// Arithmetic-operation classes the architecture model distinguishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OpClass {
    /// Multiply-accumulate.
    Mac,
    /// Addition or subtraction.
    Add,
    Mul,
    Div,
    /// Comparison, including max/min selection.
    Cmp,
    /// Natural exponential.
    Exp,
    /// Logarithm.
    Log,
}

impl OpClass {
    pub const ALL: [OpClass; 7] = [
        OpClass::Mac,
        OpClass::Add,
        OpClass::Mul,
        OpClass::Div,
        OpClass::Cmp,
        OpClass::Exp,
        OpClass::Log,
    ];

    pub fn key(self) -> &'static str {
        match self {
            OpClass::Mac => "mac",
            OpClass::Add => "add",
            OpClass::Mul => "mul",
            OpClass::Div => "div",
            OpClass::Cmp => "cmp",
            OpClass::Exp => "exp",
            OpClass::Log => "log",
        }
    }

    fn index(self) -> usize {
        match self {
            OpClass::Mac => 0,
            OpClass::Add => 1,
            OpClass::Mul => 2,
            OpClass::Div => 3,
            OpClass::Cmp => 4,
            OpClass::Exp => 5,
            OpClass::Log => 6,
        }
    }
}

/// Clock cycles charged per operation class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCosts([u64; 7]);

impl Default for CycleCosts {
    /// Reference microcontroller costs: MAC 2, add 1, mul 1, div 8, cmp 1,
    /// exp 2, log 25 cycles.
    fn default() -> Self {
        CycleCosts([2, 1, 1, 8, 1, 2, 25])
    }
}

impl CycleCosts {
    pub fn get(&self, op: OpClass) -> u64 {
        self.0[op.index()]
    }

    pub fn set(&mut self, op: OpClass, cycles: u64) {
        self.0[op.index()] = cycles;
    }
}

/// Operation counts per class.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OpCounts([u64; 7]);

impl OpCounts {
    pub fn get(&self, op: OpClass) -> u64 {
        self.0[op.index()]
    }

    pub fn set(&mut self, op: OpClass, count: u64) {
        self.0[op.index()] = count;
    }

    pub fn add(&mut self, op: OpClass, count: u64) {
        self.0[op.index()] += count;
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (OpClass, u64)> + '_ {
        OpClass::ALL.iter().map(|&op| (op, self.get(op)))
    }
}

/// Tally of classified operations and per-level memory traffic for one
/// processing block (or a sum of blocks).
///
/// `mem_accesses` counts accesses exactly as the block formulas state them;
/// access energy charges each unit against the per-bit access energy of its
/// level, matching the reference model's accounting. `mem_stored` is in bits
/// and is what leaks for the whole window.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CostReport {
    pub label: String,
    pub ops: OpCounts,
    pub mem_accesses: BTreeMap<String, u64>,
    pub mem_stored: BTreeMap<String, u64>,
}

impl CostReport {
    pub fn new(label: impl Into<String>) -> Self {
        CostReport { label: label.into(), ..Default::default() }
    }

    pub fn add_accesses(&mut self, level: &str, count: u64) {
        if count > 0 {
            *self.mem_accesses.entry(level.to_string()).or_insert(0) += count;
        }
    }

    pub fn add_stored(&mut self, level: &str, bits: u64) {
        if bits > 0 {
            *self.mem_stored.entry(level.to_string()).or_insert(0) += bits;
        }
    }

    pub fn accesses_total(&self) -> u64 {
        self.mem_accesses.values().sum()
    }

    pub fn stored_total(&self) -> u64 {
        self.mem_stored.values().sum()
    }

    /// Field-wise accumulation of another report.
    pub fn merge(&mut self, other: &CostReport) {
        if self.label.is_empty() {
            self.label = other.label.clone();
        } else if !other.label.is_empty() {
            self.label.push('+');
            self.label.push_str(&other.label);
        }
        for op in OpClass::ALL {
            self.ops.add(op, other.ops.get(op));
        }
        for (level, count) in &other.mem_accesses {
            *self.mem_accesses.entry(level.clone()).or_insert(0) += count;
        }
        for (level, bits) in &other.mem_stored {
            *self.mem_stored.entry(level.clone()).or_insert(0) += bits;
        }
    }

    /// Scales every count by an integer factor (e.g. frames per window).
    pub fn scaled(&self, factor: u64) -> CostReport {
        let mut out = CostReport::new(self.label.clone());
        for op in OpClass::ALL {
            out.ops.set(op, self.ops.get(op) * factor);
        }
        for (level, count) in &self.mem_accesses {
            out.mem_accesses.insert(level.clone(), count * factor);
        }
        for (level, bits) in &self.mem_stored {
            out.mem_stored.insert(level.clone(), bits * factor);
        }
        out
    }
}

/// Field-wise sum of reports; the empty sum is the all-zero report.
pub fn report_sum<'a>(reports: impl IntoIterator<Item = &'a CostReport>) -> CostReport {
    let mut total = CostReport::default();
    for report in reports {
        total.merge(report);
    }
    total
}

/// Energy of one processing window, split by source.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ProcessingEnergy {
    /// Arithmetic operations, J.
    pub e_ops_j: f64,
    /// Memory accesses, J.
    pub e_mem_access_j: f64,
    /// Memory leakage over the window, J.
    pub e_mem_leak_j: f64,
    pub total_j: f64,
}

/// Evaluates a cost report against a processing profile for a window of
/// `delta_s` seconds.
pub fn energy_of(report: &CostReport, profile: &ProcessingProfile, delta_s: f64) -> Result<ProcessingEnergy> {
    if delta_s < 0.0 {
        return Err(Error::domain("hwcost.energy_of", "window length must be >= 0"));
    }
    let mut cycles = 0.0;
    for (op, count) in report.ops.iter() {
        cycles += profile.op_cycle_costs.get(op) as f64 * count as f64;
    }
    let e_ops_j = profile.energy_per_cycle_j * cycles;

    let mut e_mem_access_j = 0.0;
    for (level, count) in &report.mem_accesses {
        e_mem_access_j += profile.memory_level(level)?.access_energy_per_bit_j * *count as f64;
    }
    let mut leak_power = 0.0;
    for (level, bits) in &report.mem_stored {
        leak_power += profile.memory_level(level)?.leakage_power_per_bit_w * *bits as f64;
    }
    let e_mem_leak_j = delta_s * leak_power;

    Ok(ProcessingEnergy {
        e_ops_j,
        e_mem_access_j,
        e_mem_leak_j,
        total_j: e_ops_j + e_mem_access_j + e_mem_leak_j,
    })
}
