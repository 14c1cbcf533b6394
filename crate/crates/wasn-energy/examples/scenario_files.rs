//! Loading scenario and profile files, with dotted-path overrides: the same
//! plumbing the CLI uses.
//!
//! ```bash
//! cargo run --example scenario_files
//! ```

use wasn_energy::node::{node_energy, Scenario};
use wasn_energy::params::load_profile;
use wasn_energy::paths::set_path;
use wasn_energy::sweep::evaluate;

fn main() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data");

    let profile = load_profile(dir.join("profile.json")).unwrap();
    println!(
        "profile: {:?} microphone, {:?} processor class, DSP cycle energy {:.0e} J",
        profile.sensing.mic_kind, profile.processing.processor_class,
        profile.processing.energy_per_cycle_j
    );

    let (scenario, warnings) = Scenario::load(dir.join("scenario.json")).unwrap();
    for w in &warnings {
        println!("warning: {w}");
    }
    let report = node_energy(&scenario, &profile).unwrap();
    println!(
        "file scenario: {:.4e} J per cycle, lifetime {:.1} days",
        report.breakdown.total_j,
        report.lifetime_s / 86_400.0
    );

    // Overrides are dotted paths applied to the JSON documents, exactly like
    // `--set` on the command line.
    let mut scenario_doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("scenario.json")).unwrap()).unwrap();
    let profile_doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("profile.json")).unwrap()).unwrap();
    set_path(&mut scenario_doc, "link.distance_m", serde_json::json!(25.0)).unwrap();
    set_path(&mut scenario_doc, "coding.correctable_t", serde_json::json!(4)).unwrap();
    let (farther, _) = evaluate(&scenario_doc, &profile_doc).unwrap();
    println!(
        "at 25 m with t = 4: {:.4e} J per cycle, lifetime {:.1} days",
        farther.breakdown.total_j,
        farther.lifetime_s / 86_400.0
    );
}
