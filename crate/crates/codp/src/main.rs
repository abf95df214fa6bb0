use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use codp::cli::{cmd_fit, cmd_locate, cmd_simulate, cmd_sweep, exit_code, load, OutputMode};

/// Decision support for placing the customer order decoupling point on a
/// production line.
#[derive(Parser)]
#[command(name = "codp", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit cost curves per stage and report the selected model families.
    Fit(CommonArgs),
    /// Find the cost-minimal feasible buffer position for the deadline.
    Locate(CommonArgs),
    /// Re-optimize across a list of deadlines and show regime transitions.
    Sweep(CommonArgs),
    /// Simulate the recommended buffer and validate it against the plan.
    Simulate(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Stage table CSV.
    #[arg(long, value_name = "PATH")]
    stages: PathBuf,
    /// Scenario TOML.
    #[arg(long, value_name = "PATH")]
    scenario: PathBuf,
    /// Directory for plot data files.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Emit key=value lines instead of prose.
    #[arg(long)]
    machine_readable: bool,
}

fn run(args: &CommonArgs, command: fn(&codp::ProductionLine, &codp::cli::Scenario, Option<&std::path::Path>, OutputMode) -> Result<String, codp::cli::CliError>) -> ExitCode {
    let mode = if args.machine_readable {
        OutputMode::Machine
    } else {
        OutputMode::Human
    };
    let loaded = load(&args.stages, &args.scenario);
    let result = loaded.and_then(|(line, scenario)| {
        command(&line, &scenario, args.out.as_deref(), mode)
    });
    match result {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err) as u8)
        }
    }
}

fn main() -> ExitCode {
    // clap's own usage failures exit 2, which this tool reserves for
    // infeasible deadlines; remap them to the input-error code
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Fit(args) => run(&args, cmd_fit),
        Command::Locate(args) => run(&args, cmd_locate),
        Command::Sweep(args) => run(&args, cmd_sweep),
        Command::Simulate(args) => run(&args, cmd_simulate),
    }
}
