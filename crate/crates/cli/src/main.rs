use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use toric_flops::commands::{self, CliError, Flags, Outcome, OutputFormat};

#[derive(Parser)]
#[command(name = "toric-flops", version, about = "Exact decomposition of toric flops")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Input JSON file (stdin when omitted).
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true)]
    max_steps: Option<usize>,
    /// Recorded in the output artifact.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Print the per-step pairing ledger to stderr.
    #[arg(long, global = true)]
    trace: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Decompose source ⇢ target into flops.
    Decompose,
    /// Re-check a decomposition produced by `decompose`.
    Verify,
    /// Nefness, ampleness and Cartier index of a divisor.
    Nef,
    /// Wall curves and extremal classes of a fan.
    Mori,
    /// Intersection numbers with a wall curve or the extremal classes.
    Intersect,
    /// Projective simplicial fans on a ray set.
    Enumerate,
    /// Flop graph on the projective fans of a ray set.
    FlopGraph,
}

#[derive(ValueEnum, Clone, Copy)]
enum Format {
    Json,
    Dot,
}

fn read_input(path: &Option<PathBuf>) -> Result<String, CliError> {
    match path {
        Some(p) => std::fs::read_to_string(p).map_err(|source| CliError::Read { path: p.clone(), source }),
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|source| CliError::Read { path: "<stdin>".into(), source })?;
            Ok(s)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let input = read_input(&cli.input)?;
    let flags = Flags {
        max_steps: cli.max_steps,
        seed: cli.seed,
        format: match cli.format {
            Format::Json => OutputFormat::Json,
            Format::Dot => OutputFormat::Dot,
        },
        trace: cli.trace,
    };
    match cli.command {
        Command::Decompose => commands::run_decompose(&input, &flags),
        Command::Verify => commands::run_verify(&input),
        Command::Nef => commands::run_nef(&input),
        Command::Mori => commands::run_mori(&input),
        Command::Intersect => commands::run_intersect(&input),
        Command::Enumerate => commands::run_enumerate(&input, &flags),
        Command::FlopGraph => commands::run_flop_graph(&input, &flags),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli).and_then(|o| {
        if let Some(path) = &cli.output {
            std::fs::write(path, &o.output).map_err(|source| CliError::Write { path: path.clone(), source })?;
        } else {
            print!("{}", o.output);
        }
        Ok(o)
    });
    match outcome {
        Ok(o) => {
            eprint!("{}", o.log);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Mmp(toric_flops_core::MmpError::StepLimit { trace, .. }) = &e {
                for (i, c) in trace.iter().enumerate() {
                    let parts: Vec<String> = c.iter().map(ToString::to_string).collect();
                    eprintln!("  step {}: class [{}]", i + 1, parts.join(", "));
                }
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
