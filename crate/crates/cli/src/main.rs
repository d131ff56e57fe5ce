//! `shallow`: generate, solve, verify and reduce instances, and run the
//! game, sweep, XOR-lemma and acceptance experiments.

mod experiments;
mod instances;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "shallow", version, about = "Shallow-circuit separations toolkit")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every command.
#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Master seed; every randomized command requires one.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Number of samples or trials.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit a random instance as JSON.
    Gen(instances::GenArgs),
    /// Solve an instance; streams one record per line when --samples > 1.
    Solve(instances::SolveArgs),
    /// Check a solution against an instance; exits 1 when it fails.
    Verify(instances::VerifyArgs),
    /// Reduce grid RPHP to HLF, lift HLF solutions back, or take direct sums.
    Reduce(instances::ReduceArgs),
    /// Exact game values.
    Game(experiments::GameArgs),
    /// Parameter sweeps as CSV.
    Sweep(experiments::SweepArgs),
    /// XOR-lemma bias suite for parallel repetitions.
    Xor(experiments::XorArgs),
    /// Run the acceptance criteria and print a pass/fail table.
    Repro(experiments::ReproArgs),
}

/// How a command ended when it did not error.
pub enum Outcome {
    Done,
    /// A verification or acceptance check said no.
    Rejected,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => instances::gen(&cli.common, a),
        Command::Solve(a) => instances::solve(&cli.common, a),
        Command::Verify(a) => instances::verify(&cli.common, a),
        Command::Reduce(a) => instances::reduce(&cli.common, a),
        Command::Game(a) => experiments::game(&cli.common, a),
        Command::Sweep(a) => experiments::sweep(&cli.common, a),
        Command::Xor(a) => experiments::xor(&cli.common, a),
        Command::Repro(a) => experiments::repro(&cli.common, a),
    };
    match result {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Rejected) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

impl Common {
    pub fn seed(&self) -> anyhow::Result<u64> {
        self.seed.ok_or_else(|| anyhow::anyhow!("this command is randomized and needs --seed"))
    }

    pub fn samples_or(&self, default: usize) -> anyhow::Result<usize> {
        match self.samples {
            Some(0) => anyhow::bail!("--samples must be positive"),
            Some(s) => Ok(s),
            None => Ok(default),
        }
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_line_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn seed_is_required_when_asked_for() {
        let cli = Cli::try_parse_from(["shallow", "gen", "--problem", "hlf", "-n", "3"]).unwrap();
        assert!(cli.common.seed().is_err());
        let cli = Cli::try_parse_from(["shallow", "--seed", "4", "gen", "--problem", "hlf", "-n", "3"]).unwrap();
        assert_eq!(cli.common.seed().unwrap(), 4);
    }

    #[test]
    fn zero_samples_rejected() {
        let cli = Cli::try_parse_from(["shallow", "repro", "--samples", "0"]).unwrap();
        assert!(cli.common.samples_or(5).is_err());
        let cli = Cli::try_parse_from(["shallow", "repro"]).unwrap();
        assert_eq!(cli.common.samples_or(5).unwrap(), 5);
    }
}
