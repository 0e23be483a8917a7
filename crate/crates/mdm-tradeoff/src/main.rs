use clap::Parser;
use mdm_tradeoff::cli::{self, Command, OutputFormat, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

/// Optimal trade-off between estimation fidelity and output fidelity for
/// partial measurements on N identical copies of a d-level quantum state.
#[derive(Parser)]
#[command(name = "mdm-tradeoff", version, about)]
struct Args {
    /// sweep | verify-qubit | verify-qudit | mc-check | figure
    #[arg(long)]
    command: Command,

    /// Number of identical input copies
    #[arg(long = "N", default_value_t = 1)]
    copies: usize,

    /// Local dimension of each qudit
    #[arg(long = "d", default_value_t = 2)]
    levels: usize,

    /// Number of points on the p grid
    #[arg(long = "grid", default_value_t = 101)]
    grid_points: usize,

    /// Lower end of the p grid, strictly inside (0,1)
    #[arg(long, default_value_t = 0.005)]
    p_min: f64,

    /// Upper end of the p grid, strictly inside (0,1)
    #[arg(long, default_value_t = 0.995)]
    p_max: f64,

    /// Monte Carlo sample count
    #[arg(long, default_value_t = 200_000)]
    samples: u64,

    /// Monte Carlo seed
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Output file (sweep/verify/mc-check) or directory (figure);
    /// stdout when omitted
    #[arg(long = "out")]
    output: Option<PathBuf>,

    /// csv | json | svg; defaults to csv for sweep/figure, json otherwise
    #[arg(long)]
    format: Option<OutputFormat>,

    /// Turn statistical Monte Carlo misses into a nonzero exit code
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    strict: bool,

    /// Figure to reproduce (1: qubit curves N=1..4; 2: qudit curves d=2..5)
    #[arg(long, default_value_t = 1)]
    fig: u8,

    #[arg(long, hide = true, default_value_t = false)]
    corrupt_rg: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mut config = RunConfig::new(args.command);
    config.copies = args.copies;
    config.levels = args.levels;
    config.grid_points = args.grid_points;
    config.p_min = args.p_min;
    config.p_max = args.p_max;
    config.samples = args.samples;
    config.seed = args.seed;
    config.output_path = args.output;
    if let Some(format) = args.format {
        config.format = format;
    }
    config.strict = args.strict;
    config.figure = args.fig;
    config.corrupt_rg = args.corrupt_rg;

    match cli::run(&config) {
        Ok(record) => {
            let code = cli::exit_code(&record);
            if !record.pass {
                eprintln!("{}: one or more checks failed", config.command);
            }
            ExitCode::from(code as u8)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(cli::exit_code_for_error(&err) as u8)
        }
    }
}
