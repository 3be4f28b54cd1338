mod channel_file;
mod commands;
mod error;
mod format;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use compound_tin::power::Algorithm;

use channel_file::ChannelFile;
use commands::AllocSource;
use error::CliError;
use report::Report;

/// GDoF analysis of treating interference as noise on compound interference channels.
#[derive(Parser)]
#[command(name = "tin", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Channel description (JSON).
    #[arg(long)]
    channel: PathBuf,
    /// Print the machine-readable JSON report instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct Targeted {
    #[command(flatten)]
    common: Common,
    /// GDoF target `d1,d2,...`; defaults to the targets listed in the file.
    #[arg(long)]
    target: Option<String>,
    /// Dump the potential graph edge list to stderr.
    #[arg(long)]
    debug_graph: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check that the channel file is well formed.
    Validate(Common),
    /// Evaluate the TIN-optimality condition.
    TinCheck(Common),
    /// Emit the regular counterpart as a channel file.
    Counterpart(Common),
    /// Decide whether targets lie in the polyhedral TIN region.
    Feasible(Targeted),
    /// List the inequalities of the polyhedral TIN region.
    Region(Common),
    /// Decide whether targets are Pareto optimal.
    Pareto(Targeted),
    /// Compute a power allocation reaching each target.
    Power {
        #[command(flatten)]
        args: Targeted,
        /// One of sp, gsfpc, ggpc, ggpc-c.
        #[arg(long, value_parser = parse_algorithm)]
        alg: Algorithm,
    },
    /// Finite-SNR rates as CSV.
    Rates {
        #[command(flatten)]
        args: Targeted,
        /// Comma-separated algorithms resolved per target.
        #[arg(long, value_delimiter = ',', value_parser = parse_algorithm, conflicts_with = "alloc", required_unless_present = "alloc")]
        alg: Vec<Algorithm>,
        /// Explicit exponents `r1,r2,...` (`silent` switches a user off).
        #[arg(long)]
        alloc: Option<String>,
        /// Nominal powers, comma separated.
        #[arg(long = "P")]
        powers: String,
    },
}

fn parse_algorithm(name: &str) -> Result<Algorithm, String> {
    Algorithm::from_name(name).ok_or_else(|| format!("unknown algorithm {name:?}; expected sp, gsfpc, ggpc or ggpc-c"))
}

fn load(common: &Common) -> Result<channel_file::Loaded, CliError> {
    ChannelFile::read(&common.channel)?.load()
}

fn run(command: Command) -> Result<(Report, bool), CliError> {
    Ok(match command {
        Command::Validate(common) => (commands::validate(&ChannelFile::read(&common.channel)?)?, common.json),
        Command::TinCheck(common) => (commands::tin_check(&load(&common)?), common.json),
        Command::Counterpart(common) => (commands::counterpart(&load(&common)?)?, common.json),
        Command::Region(common) => (commands::region(&load(&common)?)?, common.json),
        Command::Feasible(args) => {
            let loaded = load(&args.common)?;
            let targets = commands::targets(&loaded, args.target.as_deref())?;
            (commands::feasible(&loaded, &targets, args.debug_graph)?, args.common.json)
        }
        Command::Pareto(args) => {
            let loaded = load(&args.common)?;
            let targets = commands::targets(&loaded, args.target.as_deref())?;
            (commands::pareto(&loaded, &targets, args.debug_graph)?, args.common.json)
        }
        Command::Power { args, alg } => {
            let loaded = load(&args.common)?;
            let targets = commands::targets(&loaded, args.target.as_deref())?;
            (commands::power(&loaded, &targets, alg, args.debug_graph)?, args.common.json)
        }
        Command::Rates {
            args,
            alg,
            alloc,
            powers,
        } => {
            let loaded = load(&args.common)?;
            let powers = commands::parse_powers(&powers)?;
            let (source, targets) = match alloc {
                Some(text) => (
                    AllocSource::Explicit(commands::parse_alloc(&text, loaded.channel.user_count())?),
                    None,
                ),
                None => (
                    AllocSource::Algorithms(alg),
                    Some(commands::targets(&loaded, args.target.as_deref())?),
                ),
            };
            if args.debug_graph {
                for d in targets.iter().flatten() {
                    eprint!("{}", compound_tin::graph::build_full(&loaded.channel, d).map(|g| g.dump()).unwrap_or_default());
                }
            }
            let json = args.common.json;
            (commands::rates(&loaded, source, targets.as_deref(), &powers, json)?, json)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((report, json)) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&report.json).expect("serializable report"));
            } else {
                print!("{}", report.text);
            }
            if report.negative {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}
