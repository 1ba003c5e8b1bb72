// Run a scenario file and write its CSV outputs (the library side of `exterior-euler run`).

use std::path::{Path, PathBuf};

use exterior_euler::cli::{run_scenario, Scenario};
use exterior_euler::Result;

pub fn run_file(scenario: &Path, out: &Path) -> Result<()> {
    let s = Scenario::from_file(scenario)?;
    let res = run_scenario(&s, out)?;
    for f in &res.files {
        println!("{}", f.display());
    }
    println!("{} snapshots, {} diagnostics records", res.trajectory.snapshots.len(), res.trajectory.diagnostics.len());
    Ok(())
}

pub fn run_example() -> Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let out = std::env::temp_dir().join(format!("exterior-euler-orbit-{}", std::process::id()));
    run_file(&dir.join("scenarios/orbit.json"), &out)?;
    std::fs::remove_dir_all(&out)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    match args.next() {
        Some(path) => run_file(Path::new(&path), &args.next().map(PathBuf::from).unwrap_or_else(|| PathBuf::from("out"))),
        None => run_example(),
    }
}
