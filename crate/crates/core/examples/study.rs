// Run a named refinement study (default `dt-order`) and print its JSON report.

use exterior_euler::cli::{run_study, StudySpec, STUDIES};
use exterior_euler::Result;

pub fn run_study_named(name: &str) -> Result<()> {
    let report = run_study(&StudySpec::named(name))?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

pub fn run_example() -> Result<()> {
    run_study_named("dt-order")
}

#[allow(dead_code)]
fn main() -> Result<()> {
    match std::env::args().nth(1) {
        Some(name) if name == "--list" => {
            STUDIES.iter().for_each(|s| println!("{s}"));
            Ok(())
        }
        Some(name) => run_study_named(&name),
        None => run_example(),
    }
}
