//! Drives the command-line front end from a JSON scan configuration, the
//! same document `beamlab physicality --config scan.json` reads.
//!
//! ```text
//! cargo run --example cli_scan_config
//! ```

use beamlab::cli::{run_command, CommandKind, RunOptions, ScanConfig};

const CONFIG: &str = r#"{
  "family": "tgsm",
  "parameters": {"w": 1, "delta": 1, "lambda": 1, "R": "inf"},
  "scan_axis": "u",
  "scan_range": {"start": 0, "stop": 2, "steps": 9},
  "output_format": "csv"
}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = ScanConfig::from_json(CONFIG)?;
    config.validate()?;
    let out = run_command(CommandKind::Physicality, &config, RunOptions::default())?;
    print!("{}", String::from_utf8(out.table.to_csv()?)?);
    Ok(())
}
