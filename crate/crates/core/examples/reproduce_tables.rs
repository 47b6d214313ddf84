// Runs the covering and bounds experiments and writes their CSV tables.

use scenario_drift::experiments::{run, table, ExperimentConfig, ExperimentKind};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("scenario-drift-example");
    std::fs::create_dir_all(&dir)?;

    let cover = run(&ExperimentConfig::new(ExperimentKind::Cover, 2024))?;
    print!("{}", cover.tables[0].to_csv_string());

    let bounds = run(&ExperimentConfig::new(ExperimentKind::BoundsCurve, 0))?;
    for path in table::write_tables(&bounds.tables, &dir.join("fig1.csv"))? {
        println!("wrote {}", path.display());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
