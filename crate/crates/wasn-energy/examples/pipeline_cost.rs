//! Per-block operation counts and energy of a feature-extraction plus
//! classifier pipeline over a one-second window.
//!
//! ```bash
//! cargo run --example pipeline_cost
//! ```

use wasn_energy::dsp::{frames_per_window, pipeline_block_reports, BlockKind, PipelineBlock, PipelinePlan};
use wasn_energy::hwcost::{energy_of, report_sum, OpClass};
use wasn_energy::nn::ActivationKind;
use wasn_energy::params::default_profile;

fn main() {
    let profile = default_profile();
    let delta_s = 1.0;
    let f_s = profile.sensing.f_s_mic_hz;

    // The default MFCC chain followed by a small fully-connected classifier.
    let mut plan = PipelinePlan::mfcc_default();
    plan.blocks.push(PipelineBlock {
        kind: BlockKind::Fc { n_inputs: None, n_neurons: 32 },
        memory_level: None,
    });
    plan.blocks.push(PipelineBlock {
        kind: BlockKind::Activation { kind: ActivationKind::Relu, size: None },
        memory_level: None,
    });
    plan.blocks.push(PipelineBlock {
        kind: BlockKind::Fc { n_inputs: None, n_neurons: 10 },
        memory_level: None,
    });
    plan.blocks.push(PipelineBlock {
        kind: BlockKind::Activation { kind: ActivationKind::Softmax, size: None },
        memory_level: None,
    });

    let frames = frames_per_window(delta_s, f_s, &plan.mfcc).unwrap();
    println!("window: {delta_s} s at {f_s} Hz -> {frames} frames\n");

    let reports = pipeline_block_reports(&plan, delta_s, f_s, &profile.processing).unwrap();
    println!(
        "{:<18} {:>12} {:>10} {:>10} {:>12} {:>12} {:>12}",
        "block", "mac", "add", "mul", "accesses", "stored [b]", "energy [J]"
    );
    for report in &reports {
        let energy = energy_of(report, &profile.processing, delta_s).unwrap();
        println!(
            "{:<18} {:>12} {:>10} {:>10} {:>12} {:>12} {:>12.3e}",
            report.label,
            report.ops.get(OpClass::Mac),
            report.ops.get(OpClass::Add),
            report.ops.get(OpClass::Mul),
            report.accesses_total(),
            report.stored_total(),
            energy.total_j
        );
    }

    let total = report_sum(reports.iter());
    let energy = energy_of(&total, &profile.processing, delta_s).unwrap();
    println!("\ntotal ops energy:     {:.3e} J", energy.e_ops_j);
    println!("total access energy:  {:.3e} J", energy.e_mem_access_j);
    println!("total leakage energy: {:.3e} J", energy.e_mem_leak_j);
    println!("processing total:     {:.3e} J", energy.total_j);
}
