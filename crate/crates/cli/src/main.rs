use std::env;
use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use crnkit::concord::DEFAULT_NODE_BUDGET;
use crnkit::makin::Model;
use crnkit::{fixtures, parse_network, Network};

mod report;

use report::Report;

#[derive(Parser)]
#[command(
    name = "crnkit",
    version,
    about = "Structural and kinetic analysis of chemical reaction networks"
)]
struct Cli {
    /// Emit JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Network numbers, structural flags and deficiency-zero report.
    Analyze {
        /// A .crn file or fixture:<name>.
        input: String,
    },
    /// Finest independent decomposition with per-block network numbers.
    Fid { input: String },
    /// Concordance verdict, with a sign witness when discordant.
    Concordance {
        input: String,
        /// Search node budget (default: CRNKIT_BUDGET or 5000000).
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Compare two networks.
    Compare {
        #[arg(value_enum)]
        mode: CompareMode,
        first: String,
        second: String,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Check the equilibrium parametrization of a model and scan for ACR.
    Equilibria {
        /// schmitz, fal or maclean.
        model: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CompareMode {
    Csen,
    Core,
    M3cr,
}

/// Failure with an exit code: 1 for bad input, 2 for an undecided verdict.
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<crnkit::Error> for Failure {
    fn from(e: crnkit::Error) -> Self {
        let code = if matches!(e, crnkit::Error::MandatoryUndecided) {
            2
        } else {
            1
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: String) -> Failure {
    Failure { code: 1, message }
}

fn load(input: &str) -> Result<Network, Failure> {
    if let Some(name) = input.strip_prefix("fixture:") {
        let text = fixtures::source(name).ok_or_else(|| {
            input_error(format!(
                "unknown fixture {name:?} (available: {})",
                fixtures::NAMES.join(", ")
            ))
        })?;
        return parse_network(text).map_err(|e| input_error(format!("{input}: {e}")));
    }
    let text = fs::read_to_string(input).map_err(|e| input_error(format!("{input}: {e}")))?;
    parse_network(&text).map_err(|e| input_error(format!("{input}: {e}")))
}

fn budget(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match env::var("CRNKIT_BUDGET") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| input_error(format!("CRNKIT_BUDGET is not a node count: {v:?}"))),
        Err(_) => Ok(DEFAULT_NODE_BUDGET),
    }
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Analyze { input } => Ok(report::analyze(input, &load(input)?)),
        Command::Fid { input } => Ok(report::fid(input, &load(input)?)),
        Command::Concordance { input, budget: b } => {
            Ok(report::concordance(input, &load(input)?, budget(*b)?))
        }
        Command::Compare {
            mode,
            first,
            second,
            budget: b,
        } => {
            let (a, c) = (load(first)?, load(second)?);
            let inputs = [first.as_str(), second.as_str()];
            match mode {
                CompareMode::Csen => report::csen(inputs, &a, &c),
                CompareMode::Core => report::core(inputs, &a, &c),
                CompareMode::M3cr => report::compare_m3cr(inputs, &a, &c, budget(*b)?),
            }
        }
        Command::Equilibria {
            model,
            samples,
            seed,
        } => {
            let model: Model = model.parse()?;
            if *samples < 2 {
                return Err(input_error("--samples must be at least 2".into()));
            }
            report::equilibria(model, *samples, *seed)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report.json).expect("JSON value")
                );
            } else {
                print!("{}", report.text);
            }
            ExitCode::from(report.exit_code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
