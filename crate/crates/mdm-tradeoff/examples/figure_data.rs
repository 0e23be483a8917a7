//! Reproduce the two reference figures as CSV data plus an SVG plot each,
//! via the library-level command runner.
//!
//! ```sh
//! cargo run --example figure_data
//! ```
//!
//! Output lands in ./figures/.

use mdm_tradeoff::cli::{run, Command, OutputFormat, RunConfig};
use std::path::PathBuf;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for figure in [1u8, 2] {
        let mut config = RunConfig::new(Command::Figure);
        config.figure = figure;
        config.format = OutputFormat::Svg;
        config.grid_points = 201;
        config.output_path = Some(PathBuf::from("figures"));
        let record = run(&config)?;
        println!(
            "figure {figure}: {} files in {:.2} s",
            record.files.map(|f| f.len()).unwrap_or(0),
            record.wall_time_s
        );
    }
    println!("wrote CSV curves and SVG plots under ./figures/");
    Ok(())
}
