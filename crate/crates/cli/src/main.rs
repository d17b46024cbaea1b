use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cutdual::Problem;
use cutdual_cli::commands::{self, CliError, GenSpec};

/// Dual-certified approximation for 2ECS, MSCS, DPA and SSC.
#[derive(Parser)]
#[command(name = "cutdual", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProblemArg {
    #[value(name = "2ecs")]
    TwoEcs,
    Mscs,
    Dpa,
    Ssc,
}

impl From<ProblemArg> for Problem {
    fn from(p: ProblemArg) -> Self {
        match p {
            ProblemArg::TwoEcs => Problem::TwoEcs,
            ProblemArg::Mscs => Problem::Mscs,
            ProblemArg::Dpa => Problem::Dpa,
            ProblemArg::Ssc => Problem::Ssc,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the approximation and emit a JSON report.
    Solve {
        /// Defaults to the kind named in the file header.
        #[arg(long, value_enum)]
        problem: Option<ProblemArg>,
        #[arg(long)]
        input: PathBuf,
        /// Script of choice indices; the canonical first choice is used otherwise.
        #[arg(long)]
        advice: Option<PathBuf>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute the optimum by exhaustive search.
    Exact {
        #[arg(long)]
        input: PathBuf,
        /// Largest number of stars, edges or vertices to search over.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Check a report against its instance without trusting the solver.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        report: PathBuf,
    },
    /// Generate an instance file.
    Gen {
        #[command(subcommand)]
        family: GenCommand,
    },
    /// Solve, find or bound the optimum, and print the ratio.
    Gap {
        #[arg(long, value_enum)]
        problem: Option<ProblemArg>,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        advice: Option<PathBuf>,
        /// Size limit for the exhaustive search.
        #[arg(long)]
        limit: Option<usize>,
    },
}

#[derive(clap::Args)]
struct Output {
    #[arg(long)]
    out: PathBuf,
    /// Where to write the advice; defaults to `<out>.advice`.
    #[arg(long)]
    advice_out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Bidirected family on which a bad run costs 3k+3 against an optimum of 2k+3.
    Gk {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Directed family on which a bad run costs 8k+2 against an optimum of 5k+2.
    Tk {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Hamiltonian cycle plus round(extra * n) arcs, grouped into stars.
    RandomSsc {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        extra: f64,
        #[arg(long, default_value_t = 3)]
        max_fan: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Spanning tree plus round(extra * n) edges, both directions grouped into stars.
    RandomBidirected {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        extra: f64,
        #[arg(long, default_value_t = 3)]
        max_fan: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Hamiltonian cycle plus round(extra * n) edges, parallels allowed.
    #[command(name = "random-2ecs")]
    Random2ecs {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        extra: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Spanning tree plus n/2 edges, each free with probability zero-prob.
    RandomDpa {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.3)]
        zero_prob: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let out = &mut io::stdout().lock();
    match cli.command {
        Command::Solve {
            problem,
            input,
            advice,
            out: report,
        } => {
            commands::solve(
                out,
                problem.map(Into::into),
                &input,
                advice.as_deref(),
                report.as_deref(),
            )?;
        }
        Command::Exact { input, limit } => commands::exact(out, &input, limit)?,
        Command::Verify { input, report } => commands::verify(out, &input, &report)?,
        Command::Gap {
            problem,
            input,
            advice,
            limit,
        } => {
            commands::gap(
                out,
                problem.map(Into::into),
                &input,
                advice.as_deref(),
                limit,
            )?;
        }
        Command::Gen { family } => {
            let (spec, output) = match family {
                GenCommand::Gk { k, output } => (GenSpec::DpaTight { k }, output),
                GenCommand::Tk { k, output } => (GenSpec::SscTight { k }, output),
                GenCommand::RandomSsc {
                    n,
                    extra,
                    max_fan,
                    seed,
                    output,
                } => (
                    GenSpec::RandomSsc {
                        n,
                        extra,
                        max_fan,
                        seed,
                    },
                    output,
                ),
                GenCommand::RandomBidirected {
                    n,
                    extra,
                    max_fan,
                    seed,
                    output,
                } => (
                    GenSpec::RandomBidirected {
                        n,
                        extra,
                        max_fan,
                        seed,
                    },
                    output,
                ),
                GenCommand::Random2ecs {
                    n,
                    extra,
                    seed,
                    output,
                } => (GenSpec::Random2ecs { n, extra, seed }, output),
                GenCommand::RandomDpa {
                    n,
                    zero_prob,
                    seed,
                    output,
                } => (GenSpec::RandomDpa { n, zero_prob, seed }, output),
            };
            commands::gen(out, &spec, &output.out, output.advice_out.as_deref())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
