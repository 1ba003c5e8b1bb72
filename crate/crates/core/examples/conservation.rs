// A vortex patch between a disk and a segment, with its drift table.

use exterior_euler::cli::{BlobInit, Scenario};
use exterior_euler::diagnostics::conservation_report;
use exterior_euler::transport::simulate;
use exterior_euler::Result;

const SCENARIO: &str = r#"{
    "schema_version": 1,
    "obstacles": [
        {"kind": "disk", "center": [-1.5, 0.0], "radius": 0.5},
        {"kind": "segment", "a": [1.0, -0.5], "b": [1.5, 0.5]}
    ],
    "blobs": {"patch": {"center": [0.0, 0.8], "radius": 0.25, "count": 60, "circulation": 1.0}},
    "gamma": [1.0, -0.5],
    "dt": 0.02,
    "t_final": 0.4,
    "cadence": {"snapshots": 5, "diagnostics": 5}
}"#;

pub fn run_example() -> Result<()> {
    let scenario = Scenario::from_json(SCENARIO)?;
    if let BlobInit::Patch { count, .. } = scenario.blobs {
        println!("{count} blobs, {} obstacles", scenario.obstacles.len());
    }
    let traj = simulate(&scenario)?;
    for d in conservation_report(&traj)?.rows {
        println!("{:<12} initial {:+.6e}  max drift {:.2e} (relative {:.2e})", d.quantity, d.initial, d.max_abs_drift, d.max_rel_drift);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
